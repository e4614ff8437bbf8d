#pragma once

#include "smps/models.hpp"
#include "smps/probability_table.hpp"

#include <Eigen/Sparse>

#include <vector>

namespace smps::oracle {

/// Largest chain the explicit generator is built for (2^14 states).
inline constexpr int kMaxGeneratorSites = 14;
/// Chains up to this size are solved densely; larger ones with a sparse LU.
inline constexpr int kDenseSolveSites = 10;
/// Global-balance residual target ‖Qp‖∞.
inline constexpr double kResidualTarget = 1e-11;

/**
 * Continuous-time Markov generator with dp/dt = Q p.
 *
 * Column j lists the outgoing rates of state j; states use the same
 * configuration index as ProbabilityTable (site 0 most significant).
 */
struct MarkovGenerator {
    int                                 num_sites  = 0;
    Index                               num_states = 0;
    std::vector<Eigen::Triplet<double>> triplets; // duplicates are summed

    [[nodiscard]] Eigen::SparseMatrix<double> sparse() const;
    [[nodiscard]] Eigen::MatrixXd             dense() const;
    [[nodiscard]] Eigen::VectorXd             apply(const Eigen::VectorXd &p) const;
};

[[nodiscard]] MarkovGenerator asep_generator(const AsepParams &params);

/// Normalized null vector of Q; throws NumericalError if the residual target is missed.
[[nodiscard]] ProbabilityTable<double> steady_state(const MarkovGenerator &gen);

/// Convenience: steady_state(asep_generator(params)).
[[nodiscard]] ProbabilityTable<double> asep_steady_state(const AsepParams &params);

/// Two smallest singular values of the dense generator (null-space dimension check).
[[nodiscard]] std::pair<double, double> smallest_singular_values(const MarkovGenerator &gen);

/// Σ p_AB log2(p_AB / (p_A p_B)) evaluated term by term.
[[nodiscard]] double direct_mutual_information(const ProbabilityTable<double> &table, int cut);

/// Occupation probability of every site.
[[nodiscard]] Eigen::VectorXd site_densities(const ProbabilityTable<double> &table);

} // namespace smps::oracle
