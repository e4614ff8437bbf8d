#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace smps {

inline constexpr const char *kVersion = "0.1.0";

template<typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template<typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template<typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using Index = Eigen::Index;

namespace tol {
    // Normalization and reconstruction identities.
    inline constexpr double identity = 1e-10;
    // Spectrum entries below this are treated as exact zeros.
    inline constexpr double zero = 1e-12;
    // Probability sequences fed to entropy functions.
    inline constexpr double distribution = 1e-9;
    // Candidate representations must agree to this level.
    inline constexpr double consistency = 1e-8;
} // namespace tol

// d^n, throwing nothing; callers guard against overflow with capacity checks.
[[nodiscard]] constexpr std::uint64_t ipow(std::uint64_t d, int n) {
    std::uint64_t r = 1;
    for(int i = 0; i < n; ++i) r *= d;
    return r;
}

} // namespace smps
