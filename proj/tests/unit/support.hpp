#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace serrin::test {

/// Seeded generator so property loops are reproducible.
inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240611u);
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline double order(double coarse, double fine) { return std::log2(coarse / fine); }

} // namespace serrin::test
