// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.

#include "smps/canonical.hpp"
#include "smps/infotheory.hpp"
#include "smps/mcsim.hpp"
#include "smps/models.hpp"
#include "smps/oracle.hpp"
#include "smps/random.hpp"
#include "smps/reports.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <vector>

using namespace smps;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool        passed = false;
    std::string detail;
};

// Shared corpus for the property criteria.
std::vector<StochasticMps<double>> corpus() {
    std::mt19937_64  rng(2024);
    RandomMpsOptions opt;
    opt.min_sites = 2;
    opt.max_sites = 6;
    opt.max_bond  = 4;
    std::vector<StochasticMps<double>> out;
    for(int i = 0; i < 1000; ++i) out.push_back(random_stochastic_mps(rng, opt));
    return out;
}

std::vector<double> grid(double lo, double hi, double step) { return reports::Range{lo, hi, step}.values(); }

Outcome oracle_equivalence() {
    const auto start = Clock::now();
    double     worst = 0.0;
    for(int n = 1; n <= 8; ++n)
        for(const double a : grid(0.1, 0.9, 0.1))
            for(const double b : grid(0.1, 0.9, 0.1)) {
                const AsepParams p{a, b, n};
                const auto       oracle = oracle::asep_steady_state(p);
                worst = std::max(worst, l1_distance(contract_to_table(asep_mps(p)), oracle) / oracle.total());
            }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    return {worst <= 1e-9 && secs <= 120.0, fmt::format("max relative L1 {:.2e} (<= 1e-9), {:.1f}s (<= 120s)", worst, secs)};
}

Outcome mean_field_line() {
    double worst = 0.0;
    for(int i = 1; i <= 9; ++i) {
        const AsepParams p{i / 10.0, 1.0 - i / 10.0, 20};
        const auto       b = entropy_cost_bracket<double>(asep_mps(p), 10, asep_candidates(p));
        worst              = std::max({worst, b.lower_bound, b.upper_bound});
    }
    return {worst <= 1e-10, fmt::format("max(I, upper bound) {:.2e} over 9 points (<= 1e-10)", worst)};
}

Outcome spectrum_support() {
    double tail = 0.0;
    bool   decreasing = true, size_ok = true;
    int    points = 0;
    for(const double a : grid(0.1, 0.9, 0.2))
        for(const double b : grid(0.1, 0.9, 0.2)) {
            ++points;
            const auto spec = cut_spectrum(asep_mps({a, b, 20}), 10);
            const auto &p   = spec.probabilities;
            size_ok         = size_ok && (spec.source_dim == 21 || default_regime({a, b, 20}) == AsepRegime::MeanField);
            for(Index l = 11; l < p.size(); ++l) tail = std::max(tail, p[l]);
            for(Index l = 1; l < p.size() && p[l] > 1e-12; ++l) decreasing = decreasing && p[l] < p[l - 1];
        }
    return {tail <= 1e-12 && decreasing && size_ok,
            fmt::format("{} points, max p_lambda (lambda >= 11) {:.2e} (<= 1e-12), prefix strictly decreasing: {}", points,
                        tail, decreasing)};
}

Outcome ising_closed_form() {
    double worst = 0.0;
    for(const auto &r : reports::ising_rows({0.0, 5.0, 0.25})) worst = std::max(worst, std::abs(r.sc_exact - r.sc_from_mps));
    const auto   rows = reports::ising_rows({0.0, 5.0, 5.0});
    const double at0 = rows.front().sc_from_mps, at5 = rows.back().sc_from_mps;
    return {worst <= 1e-9 && std::abs(at0) <= 1e-12 && std::abs(1.0 - at5) <= 1e-3,
            fmt::format("max |S - S_exact| {:.2e} (<= 1e-9), S(0) = {:.3g}, 1 - S(5) = {:.3e}", worst, at0, 1.0 - at5)};
}

Outcome mi_bound(const std::vector<StochasticMps<double>> &mpss) {
    int    violations = 0, cuts = 0;
    double worst      = -1.0;
    for(const auto &mps : mpss) {
        const auto table = contract_to_table(mps);
        for(int c = 1; c < mps.num_sites(); ++c, ++cuts) {
            const double gap = mutual_information(table, c) - shannon_entropy(cut_spectrum(mps, c).probabilities);
            worst            = std::max(worst, gap);
            violations += gap > 1e-9 ? 1 : 0;
        }
    }
    return {violations == 0, fmt::format("{} cuts, {} violations, max I - S {:.2e}", cuts, violations, worst)};
}

Outcome truncation_bound(const std::vector<StochasticMps<double>> &mpss) {
    int    violations = 0, cases = 0;
    double worst      = -1.0;
    for(const auto &mps : mpss) {
        const auto table = contract_to_table(mps);
        const auto nf    = to_natural_form(mps);
        for(Index cap = 1; cap <= mps.max_bond_dim(); ++cap, ++cases) {
            const auto   tr  = truncate(nf, cap);
            const double gap = l1_distance(table, contract_to_table(tr.mps)) - tr.error_bound;
            worst            = std::max(worst, gap);
            violations += gap > 1e-9 ? 1 : 0;
        }
    }
    return {violations == 0, fmt::format("{} truncations, {} violations, max L1 - bound {:.2e}", cases, violations, worst)};
}

Outcome pinsker(const std::vector<StochasticMps<double>> &mpss) {
    int    violations = 0, cases = 0;
    double worst      = -1.0;
    const auto check  = [&](const PinskerGap<double> &g) {
        ++cases;
        worst = std::max(worst, g.lhs - g.rhs);
        violations += g.lhs > g.rhs + 1e-9 ? 1 : 0;
    };
    for(const auto &mps : mpss) {
        const auto table = contract_to_table(mps);
        for(int c = 1; c < mps.num_sites(); ++c) check(pinsker_gap(table, c));
    }
    for(int n = 2; n <= 8; ++n)
        for(const double a : grid(0.1, 0.9, 0.1))
            for(const double b : grid(0.1, 0.9, 0.1)) {
                const auto mps = asep_mps({a, b, n});
                for(int c = 1; c < n; ++c) check(pinsker_gap(factorize_at_cut(mps, c)));
            }
    return {violations == 0, fmt::format("{} cases, {} violations, max lhs - rhs {:.2e}", cases, violations, worst)};
}

Outcome log_bound() {
    int    violations = 0, cases = 0;
    double worst      = -1e300;
    for(int n = 2; n <= 20; ++n)
        for(const double a : grid(0.1, 0.9, 0.1))
            for(const double b : grid(0.1, 0.9, 0.1)) {
                const auto mps = asep_mps({a, b, n});
                for(int c = 1; c < n; ++c, ++cases) {
                    const double gap = shannon_entropy(cut_spectrum(mps, c).probabilities) - std::log2(n + 1.0);
                    worst            = std::max(worst, gap);
                    violations += gap > 0.0 ? 1 : 0;
                }
            }
    return {violations == 0, fmt::format("{} spectra (N 2..20), {} violations, max S - log2(N+1) {:.3f}", cases, violations, worst)};
}

Outcome monte_carlo() {
    const auto   start = Clock::now();
    mc::McConfig cfg;
    cfg.params       = {0.3, 0.3, 8};
    cfg.sample_count = 1000000;
    cfg.seed         = 20240601;
    const auto samples = mc::simulate(cfg);
    const auto est     = mc::plug_in_mutual_information(samples, 8, 4);
    const auto exact   = oracle::asep_steady_state(cfg.params);
    const double mi    = oracle::direct_mutual_information(exact, 4);
    const double mi_tol = std::max(3.0 * est.std_error, 0.02);
    const bool   mi_ok  = std::abs(est.estimate - mi) <= mi_tol;

    const auto rho      = mc::site_densities(samples, 8);
    const auto rho_true = oracle::site_densities(exact);
    double     worst_z  = 0.0;
    for(int k = 0; k < 8; ++k) worst_z = std::max(worst_z, std::abs(rho.mean[k] - rho_true[k]) / rho.std_error[k]);
    const bool rho_ok = worst_z <= 3.0;

    // exp(I) growth along the coexistence line, from the exact middle-cut mutual information.
    std::vector<double> growth;
    for(const int n : {4, 8, 12, 16})
        growth.push_back(std::exp(mutual_information(factorize_at_cut(asep_mps({0.3, 0.3, n}), n / 2)) * std::log(2.0)));
    bool grows = true;
    for(std::size_t i = 1; i < growth.size(); ++i) grows = grows && growth[i] > growth[i - 1];

    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    return {mi_ok && rho_ok && grows && secs <= 300.0,
            fmt::format("I_mc {:.4f} +- {:.4f} vs {:.4f} (tol {:.3f}); max density z {:.2f} (<= 3); "
                        "exp(I) N=4,8,12,16: {:.4f} {:.4f} {:.4f} {:.4f}; {:.1f}s (<= 300s)",
                        est.estimate, est.std_error, mi, mi_tol, worst_z, growth[0], growth[1], growth[2], growth[3], secs)};
}

Outcome phase_map() {
    const auto        start = Clock::now();
    reports::SweepSpec spec;
    spec.num_sites  = 20;
    const auto rows = reports::phase_sweep(spec);
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();

    double max_mi = -1.0, max_line = 0.0, arg_a = 0, arg_b = 0;
    for(const auto &r : rows) {
        if(r.mi_bits > max_mi) {
            max_mi = r.mi_bits;
            arg_a  = r.alpha;
            arg_b  = r.beta;
        }
        if(std::abs(r.alpha + r.beta - 1.0) < 1e-9) max_line = std::max(max_line, r.mi_bits);
    }
    const double distance = std::abs(arg_a + arg_b - 1.0);
    return {rows.size() == 361 && max_mi < 1.0 && max_line <= 1e-10 && distance >= 0.5 && secs <= 600.0,
            fmt::format("{} points, max I {:.3f} bits at ({}, {}) with |alpha+beta-1| = {:.2f} (>= 0.5), "
                        "max I on the line {:.1e}, {:.1f}s (<= 600s)",
                        rows.size(), max_mi, arg_a, arg_b, distance, max_line, secs)};
}

} // namespace

int main() {
    const auto mpss = corpus();
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 oracle equivalence", oracle_equivalence},
        {"2 mean-field line", mean_field_line},
        {"3 spectrum support", spectrum_support},
        {"4 ising closed form", ising_closed_form},
        {"5 mi below spectrum entropy", [&] { return mi_bound(mpss); }},
        {"6 truncation bound", [&] { return truncation_bound(mpss); }},
        {"7 pinsker", [&] { return pinsker(mpss); }},
        {"8 log bound", log_bound},
        {"9 monte carlo", monte_carlo},
        {"10 phase map", phase_map},
    };
    int failures = 0;
    for(const auto &[name, run] : criteria) {
        Outcome out;
        try {
            out = run();
        } catch(const std::exception &e) { out = {false, std::string("exception: ") + e.what()}; }
        failures += out.passed ? 0 : 1;
        fmt::print("{} [{}] {}\n", out.passed ? "PASS" : "FAIL", name, out.detail);
        std::fflush(stdout);
    }
    return failures;
}
