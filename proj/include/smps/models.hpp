#pragma once

#include "smps/infotheory.hpp"
#include "smps/stochastic_mps.hpp"

#include <string_view>
#include <vector>

namespace smps {

/// Classical chain H = Σ s_k s_{k+1}, weights exp(-βH)/Z; symbol 0 is s = +1.
struct IsingParams {
    double beta      = 0.0;
    int    num_sites = 2;
};

/// D = 2 nonnegative MPS for the Ising chain, normalized.
[[nodiscard]] StochasticMps<double> ising_mps(const IsingParams &params);

/// Closed-form entropy cost of the two-site chain (bits); 0 at β = 0, → 1 as β → ∞.
[[nodiscard]] double ising_entropy_cost_exact(double beta);

/// Open ASEP: injection rate alpha at site 0, extraction rate beta at site N-1, bulk hops right at rate 1.
struct AsepParams {
    double alpha     = 0.5;
    double beta      = 0.5;
    int    num_sites = 1;
};

void validate(const AsepParams &params);

/**
 * Which closed-form corner solution a representation uses.
 *
 * I: α+β ≤ 1, β ≤ α.  II: α+β ≤ 1, β ≥ α.  III: α+β ≥ 1.
 * MeanField: α+β = 1, scalar representation E = 1/α, D = 1/β.
 */
enum class AsepRegime { I, II, III, MeanField };

[[nodiscard]] std::string_view to_string(AsepRegime regime);

/// Regime chosen by default: the mean-field line wins over I/III, and β = α picks I.
[[nodiscard]] AsepRegime default_regime(const AsepParams &params);

/// Regimes whose formulas are real and nonnegative at (α, β).
[[nodiscard]] std::vector<AsepRegime> admissible_regimes(const AsepParams &params);

/**
 * Truncated (N+1)-dimensional representation of the ASEP matrix algebra.
 *
 * `corner_d` and `corner_e` are the 2x2 upper-left blocks of D and E; `w` and
 * `v` are the boundary vectors living on the first two bond indices. For the
 * mean-field regime every object is 1x1.
 */
struct AsepRepresentation {
    AsepRegime      regime = AsepRegime::III;
    AsepParams      params;
    Eigen::MatrixXd corner_d; // A
    Eigen::MatrixXd corner_e; // B
    Eigen::RowVectorXd w;
    Eigen::VectorXd    v;
    Eigen::MatrixXd    d;     // occupied site
    Eigen::MatrixXd    e;     // empty site
    double          a = 0.0;
    double          b = 0.0;
};

[[nodiscard]] AsepRepresentation asep_representation(const AsepParams &params);
/// Explicit regime; throws ArgumentError when the regime's formulas do not apply at (α, β).
[[nodiscard]] AsepRepresentation asep_representation(const AsepParams &params, AsepRegime regime);

/// Max-norm residuals of the corner algebra and the boundary eigenvector relations.
struct AlgebraResiduals {
    double corner        = 0.0; // ‖AB + |1⟩⟨1| − A − B‖
    double left_boundary = 0.0; // ‖wB − w/α‖
    double right_boundary = 0.0; // ‖Av − v/β‖
    bool   nonnegative   = true;
};

[[nodiscard]] AlgebraResiduals algebra_residuals(const AsepRepresentation &rep);

/// Normalized steady-state MPS built from a representation (site-independent E, D; w, v absorbed).
[[nodiscard]] StochasticMps<double> asep_mps(const AsepRepresentation &rep);
[[nodiscard]] StochasticMps<double> asep_mps(const AsepParams &params);

/// D = 1 product representation; requires |α+β−1| ≤ 1e-12.
[[nodiscard]] StochasticMps<double> asep_scalar_mps(const AsepParams &params);

/// Every admissible representation as a labeled candidate for entropy_cost_bracket.
[[nodiscard]] std::vector<LabeledMps<double>> asep_candidates(const AsepParams &params);

} // namespace smps
