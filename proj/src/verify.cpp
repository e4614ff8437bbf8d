#include "smps/canonical.hpp"
#include "smps/infotheory.hpp"
#include "smps/oracle.hpp"
#include "smps/random.hpp"
#include "smps/reports.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace smps::reports {

namespace {
    std::vector<double> unit_grid() { return Range{0.1, 0.9, 0.1}.values(); }

    Check make(std::string name, double value, double bound) {
        return {std::move(name), value, bound, value <= bound};
    }
} // namespace

std::vector<Check> verify(const VerifyOptions &options) {
    std::vector<Check> checks;

    // ASEP matrix representation vs. master equation.
    double worst_oracle = 0.0, worst_algebra = 0.0, worst_log = -1.0;
    bool   nonnegative  = true;
    for(int n = 1; n <= options.max_oracle_sites; ++n)
        for(const double a : unit_grid())
            for(const double b : unit_grid()) {
                const AsepParams params{a, b, n};
                auto             rep = asep_representation(params);
                const auto       res = algebra_residuals(rep);
                worst_algebra        = std::max({worst_algebra, res.corner, res.left_boundary, res.right_boundary});
                nonnegative          = nonnegative && res.nonnegative;
                if(options.perturb) rep = options.perturb(rep);
                const auto mps    = asep_mps(rep);
                const auto oracle = oracle::asep_steady_state(params);
                worst_oracle      = std::max(worst_oracle, l1_distance(contract_to_table(mps), oracle));
                for(int c = 1; c < n; ++c)
                    worst_log = std::max(worst_log, shannon_entropy(cut_spectrum(mps, c).probabilities) -
                                                        std::log2(static_cast<double>(n + 1)));
            }
    checks.push_back(make("asep_oracle_equivalence_l1", worst_oracle, 1e-9));
    checks.push_back(make("asep_corner_algebra_residual", worst_algebra, 1e-12));
    checks.push_back(make("asep_entries_nonnegative", nonnegative ? 0.0 : 1.0, 0.0));
    checks.push_back(make("asep_spectrum_entropy_minus_log2_N_plus_1", worst_log, 0.0));

    // Random corpus: MI bound, truncation bound, Pinsker, natural form.
    std::mt19937_64 rng(options.seed);
    double mi_bound = -1.0, truncation = -1.0, pinsker = -1.0, recon = 0.0, stochastic = 0.0;
    for(int i = 0; i < options.corpus_size; ++i) {
        const auto mps   = random_stochastic_mps(rng);
        const auto table = contract_to_table(mps);
        const auto nf    = to_natural_form(mps);
        recon            = std::max(recon, l1_distance(table, contract_to_table(nf.to_mps())));
        for(int k = 0; k + 1 < mps.num_sites(); ++k) {
            const Vector<double> cols = (nf.bond(k).asDiagonal() * nf.transfer(k)).colwise().sum().transpose();
            stochastic                = std::max(stochastic, (cols.array() - 1.0).abs().maxCoeff());
        }
        for(int c = 1; c < mps.num_sites(); ++c) {
            const double mi = mutual_information(table, c);
            mi_bound          = std::max(mi_bound, mi - shannon_entropy(cut_spectrum(mps, c).probabilities));
            const auto gap  = pinsker_gap(table, c);
            pinsker         = std::max(pinsker, gap.lhs - gap.rhs);
        }
        for(Index cap = 1; cap < mps.max_bond_dim(); ++cap) {
            const auto tr = truncate(nf, cap);
            truncation        = std::max(truncation, l1_distance(table, contract_to_table(tr.mps)) - tr.error_bound);
        }
    }
    checks.push_back(make("mi_minus_spectrum_entropy", mi_bound, 1e-9));
    checks.push_back(make("truncation_l1_minus_bound", truncation, 1e-9));
    checks.push_back(make("pinsker_lhs_minus_rhs", pinsker, 1e-9));
    checks.push_back(make("natural_form_reconstruction_l1", recon, 1e-10));
    checks.push_back(make("natural_form_column_stochastic", stochastic, 1e-10));

    // Mean-field line and spectrum support at N = 20.
    double mf = 0.0, tail = 0.0;
    for(int i = 1; i <= 9; ++i) {
        const double     a = i / 10.0;
        const AsepParams line{a, 1.0 - a, 20};
        const auto       mps = asep_mps(line);
        mf = std::max({mf, mutual_information(factorize_at_cut(mps, 10)),
                       shannon_entropy(cut_spectrum(mps, 10).probabilities)});
        const auto spec = cut_spectrum(asep_mps({a, 0.3, 20}), 10);
        if(spec.probabilities.size() > 11)
            tail = std::max(tail, spec.probabilities.tail(spec.probabilities.size() - 11).maxCoeff());
    }
    checks.push_back(make("mean_field_line_mi_and_entropy_n20", mf, 1e-10));
    checks.push_back(make("spectrum_tail_lambda_ge_11_n20", tail, 1e-12));

    double ising = 0.0;
    for(const auto &row : ising_rows({0.0, 5.0, 0.25})) ising = std::max(ising, std::abs(row.sc_exact - row.sc_from_mps));
    checks.push_back(make("ising_closed_form", ising, 1e-9));
    return checks;
}

void write_verify_report(std::ostream &out, const std::vector<Check> &checks) {
    for(const auto &c : checks)
        fmt::print(out, "{} {:<44} value={:.3e} bound={:.3e}\n", c.passed ? "PASS" : "FAIL", c.name, c.value, c.bound);
}

} // namespace smps::reports
