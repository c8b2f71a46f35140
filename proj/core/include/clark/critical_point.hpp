#pragma once

#include <string>
#include <vector>

#include "clark/point.hpp"

namespace clark {

enum class CriticalLabel { Z, N, NegN, Other };
enum class Sign { Zero, Plus, Minus };

struct CriticalPoint {
    Point point;
    double value = 0.0;
    double residual = 0.0;
    CriticalLabel label = CriticalLabel::Other;
    std::vector<Sign> pattern;  // per x-coordinate, filled for N / −N points
    std::string note;
};

std::string to_string(CriticalLabel label);
char to_char(Sign s);
std::string pattern_string(const std::vector<Sign>& pattern);

}  // namespace clark
