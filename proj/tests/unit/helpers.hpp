#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "clark/point.hpp"

namespace testutil {

inline clark::Point random_point(const clark::Space& space, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> c(space.dim);
    for (auto& v : c) v = dist(rng);
    return clark::Point(space, std::move(c));
}

// Discrete Dirichlet norm squared, written out independently of the library.
inline double dirichlet_norm_sq(const std::vector<double>& interior, double h) {
    double acc = 0.0;
    double prev = 0.0;
    for (double v : interior) {
        acc += (v - prev) * (v - prev);
        prev = v;
    }
    acc += prev * prev;
    return acc / h;
}

inline double max_abs_diff(const clark::Point& a, const clark::Point& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace testutil
