#pragma once

#include "smps/mcsim.hpp"
#include "smps/models.hpp"

#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace smps::reports {

/// Inclusive grid start, start+step, ..., stop; values are rounded to 1e-12.
struct Range {
    double start = 0.0;
    double stop  = 0.0;
    double step  = 1.0;

    [[nodiscard]] std::vector<double> values() const;
    [[nodiscard]] std::string         to_string() const;
    /// "0.3" or "0.05:0.95:0.05".
    static Range parse(const std::string &text);
};

enum class Quantity { MutualInformation, EntropyCostUpperBound, Spectrum, L1Truncation };

struct SweepSpec {
    Range              alpha{0.05, 0.95, 0.05};
    Range              beta{0.05, 0.95, 0.05};
    int                num_sites = 20;
    int                cut       = 0; // 0 selects N/2
    std::set<Quantity> quantities{Quantity::MutualInformation, Quantity::EntropyCostUpperBound};
    Index              bond_cap = 11; // for L1Truncation
    int                threads  = 1;

    void validate() const;
    [[nodiscard]] int effective_cut() const { return cut > 0 ? cut : num_sites / 2; }
};

struct PhaseRow {
    double      alpha = 0, beta = 0;
    int         num_sites = 0, cut = 0;
    double      mi_bits          = 0;
    double      entropy_cost_ub  = 0;
    std::string regime;           // default representation
    std::string ub_candidate;     // representation achieving the upper bound
    Index       spectrum_support = 0;
    double      truncation_bound = 0;
};

[[nodiscard]] PhaseRow           phase_point(const AsepParams &params, int cut, const SweepSpec &spec);
[[nodiscard]] std::vector<PhaseRow> phase_sweep(const SweepSpec &spec);
void write_phase_csv(std::ostream &out, const SweepSpec &spec, const std::vector<PhaseRow> &rows);

struct SpectrumRow {
    Index  lambda = 0; // 0-based bond index after sorting
    double p      = 0;
};
[[nodiscard]] std::vector<SpectrumRow> spectrum_rows(const AsepParams &params, int cut);
void write_spectrum_csv(std::ostream &out, const AsepParams &params, int cut, const std::vector<SpectrumRow> &rows);

struct IsingRow {
    double beta = 0, sc_exact = 0, sc_from_mps = 0;
};
[[nodiscard]] std::vector<IsingRow> ising_rows(const Range &betas);
void write_ising_csv(std::ostream &out, const Range &betas, const std::vector<IsingRow> &rows);

struct McRow {
    int          num_sites = 0;
    double       alpha = 0, beta = 0;
    int          cut = 0;
    double       mi_estimate = 0, std_error = 0, exp_mi = 0;
    std::int64_t samples      = 0;
    bool         undersampled = false;
};
/// One row per chain length; `cut` <= 0 selects N/2. `run_file`, when set, receives each run's samples.
[[nodiscard]] std::vector<McRow> mc_rows(const mc::McConfig &base, const std::vector<int> &sizes, int cut,
                                         const std::optional<std::string> &run_file = std::nullopt);
void write_mc_csv(std::ostream &out, const mc::McConfig &base, const std::vector<McRow> &rows);

struct TruncationRow {
    int    cut = 0;
    Index  source_dim = 0, kept_dim = 0;
    double discarded = 0;
};
struct TruncationReport {
    std::vector<TruncationRow> rows;
    double                     error_bound = 0;
    std::optional<double>      measured_l1; // dense check for N <= 20
};
[[nodiscard]] TruncationReport truncation_report(const AsepParams &params, Index bond_cap);
void write_truncation_csv(std::ostream &out, const AsepParams &params, Index bond_cap, const TruncationReport &report);

struct Check {
    std::string name;
    double      value = 0;
    double      bound = 0;
    bool        passed = false;
};

struct VerifyOptions {
    int           corpus_size = 200;
    int           max_oracle_sites = 6;
    std::uint64_t seed        = 7;
    /// Applied to every ASEP representation before the oracle comparison (fault injection).
    std::function<AsepRepresentation(AsepRepresentation)> perturb;
};

[[nodiscard]] std::vector<Check> verify(const VerifyOptions &options = {});
void write_verify_report(std::ostream &out, const std::vector<Check> &checks);

} // namespace smps::reports
