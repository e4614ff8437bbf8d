#include "smps/reports.hpp"

#include "smps/canonical.hpp"
#include "smps/errors.hpp"
#include "smps/infotheory.hpp"
#include "smps/oracle.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <atomic>
#include <filesystem>
#include <mutex>
#include <numbers>
#include <cmath>
#include <sstream>
#include <thread>

namespace smps::reports {

namespace {
    constexpr int kMaxMiSites = 26;

    std::string num(double x) { return fmt::format("{}", x); } // shortest round-trip form

    void header(std::ostream &out, std::string_view command, const std::string &params, const std::string &seed = "none") {
        fmt::print(out, "# smps {}\n# command: {}\n# params: {}\n# seed: {}\n", kVersion, command, params, seed);
    }

    std::string asep_params(const AsepParams &p) {
        return fmt::format("alpha={} beta={} n={}", num(p.alpha), num(p.beta), p.num_sites);
    }

    std::string quantity_name(Quantity q) {
        switch(q) {
            case Quantity::MutualInformation: return "mi";
            case Quantity::EntropyCostUpperBound: return "entropy_cost_ub";
            case Quantity::Spectrum: return "spectrum";
            case Quantity::L1Truncation: return "l1_truncation";
        }
        return "?";
    }
} // namespace

std::vector<double> Range::values() const {
    if(!(step > 0.0)) throw ArgumentError("Range: step must be positive");
    std::vector<double> out;
    for(int i = 0;; ++i) {
        const double v = std::round((start + i * step) * 1e12) / 1e12;
        if(v > stop + 1e-9) break;
        out.push_back(v);
    }
    return out;
}

std::string Range::to_string() const {
    if(start == stop) return num(start);
    return fmt::format("{}:{}:{}", num(start), num(stop), num(step));
}

Range Range::parse(const std::string &text) {
    std::vector<double> parts;
    std::stringstream   ss(text);
    std::string         item;
    while(std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if(used != item.size()) throw std::invalid_argument(item);
        } catch(const std::exception &) { throw ArgumentError("Range: cannot parse '" + text + "'"); }
    }
    if(parts.size() == 1) return {parts[0], parts[0], 1.0};
    if(parts.size() == 3) {
        if(!(parts[2] > 0.0) || parts[1] < parts[0]) throw ArgumentError("Range: need start <= stop and step > 0");
        return {parts[0], parts[1], parts[2]};
    }
    throw ArgumentError("Range: expected 'value' or 'start:stop:step', got '" + text + "'");
}

void SweepSpec::validate() const {
    for(const auto &r : {alpha, beta})
        for(const double v : r.values())
            if(!(v > 0.0 && v <= 1.0)) throw ArgumentError("SweepSpec: rates must lie in (0, 1]");
    if(num_sites < 2) throw ArgumentError("SweepSpec: need at least two sites");
    if(quantities.contains(Quantity::MutualInformation) && num_sites > kMaxMiSites)
        throw CapacityError("SweepSpec: mutual information is limited to N <= 26");
    const int c = effective_cut();
    if(c < 1 || c > num_sites - 1) throw ArgumentError("SweepSpec: cut must lie in 1..N-1");
    if(bond_cap < 1) throw ArgumentError("SweepSpec: bond cap must be >= 1");
    if(threads < 1) throw ArgumentError("SweepSpec: thread count must be >= 1");
}

PhaseRow phase_point(const AsepParams &params, int cut, const SweepSpec &spec) {
    PhaseRow row;
    row.alpha     = params.alpha;
    row.beta      = params.beta;
    row.num_sites = params.num_sites;
    row.cut       = cut;
    row.regime    = std::string(to_string(default_regime(params)));
    row.mi_bits = row.entropy_cost_ub = row.truncation_bound = std::nan("");

    const auto mps = asep_mps(params);
    const auto &q  = spec.quantities;
    if(q.contains(Quantity::EntropyCostUpperBound)) {
        const auto candidates = asep_candidates(params);
        const auto bracket    = entropy_cost_bracket<double>(mps, cut, candidates);
        row.entropy_cost_ub   = bracket.upper_bound;
        row.ub_candidate      = bracket.label;
        if(q.contains(Quantity::MutualInformation)) row.mi_bits = bracket.lower_bound;
    } else if(q.contains(Quantity::MutualInformation)) {
        row.mi_bits = mutual_information(factorize_at_cut(mps, cut));
    }
    if(q.contains(Quantity::Spectrum)) {
        const auto spec_ = cut_spectrum(mps, cut);
        row.spectrum_support = (spec_.probabilities.array() > tol::zero).count();
    }
    if(q.contains(Quantity::L1Truncation)) row.truncation_bound = truncate(to_natural_form(mps), spec.bond_cap).error_bound;
    return row;
}

std::vector<PhaseRow> phase_sweep(const SweepSpec &spec) {
    spec.validate();
    std::vector<AsepParams> points;
    for(const double a : spec.alpha.values())
        for(const double b : spec.beta.values()) points.push_back({a, b, spec.num_sites});

    std::vector<PhaseRow> rows(points.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr       failure;
    std::mutex               failure_mutex;
    {
        std::vector<std::jthread> pool;
        for(int t = 0; t < spec.threads; ++t)
            pool.emplace_back([&] {
                for(std::size_t i = next++; i < points.size(); i = next++) {
                    try {
                        rows[i] = phase_point(points[i], spec.effective_cut(), spec);
                    } catch(...) {
                        std::scoped_lock lock(failure_mutex);
                        if(!failure) failure = std::current_exception();
                    }
                }
            });
    }
    if(failure) std::rethrow_exception(failure);
    return rows;
}

void write_phase_csv(std::ostream &out, const SweepSpec &spec, const std::vector<PhaseRow> &rows) {
    std::string qs;
    for(const auto q : spec.quantities) qs += (qs.empty() ? "" : ",") + quantity_name(q);
    header(out, "phase-sweep",
           fmt::format("alpha={} beta={} n={} cut={} quantities={} bond_cap={}", spec.alpha.to_string(),
                       spec.beta.to_string(), spec.num_sites, spec.effective_cut(), qs, spec.bond_cap));
    const bool spectrum = spec.quantities.contains(Quantity::Spectrum);
    const bool trunc    = spec.quantities.contains(Quantity::L1Truncation);
    out << "alpha,beta,N,cut,mi_bits,entropy_cost_ub_bits,regime,ub_candidate";
    if(spectrum) out << ",spectrum_support";
    if(trunc) out << ",truncation_bound";
    out << '\n';
    for(const auto &r : rows) {
        fmt::print(out, "{},{},{},{},{},{},{},{}", num(r.alpha), num(r.beta), r.num_sites, r.cut, num(r.mi_bits),
                   num(r.entropy_cost_ub), r.regime, r.ub_candidate);
        if(spectrum) fmt::print(out, ",{}", r.spectrum_support);
        if(trunc) fmt::print(out, ",{}", num(r.truncation_bound));
        out << '\n';
    }
}

std::vector<SpectrumRow> spectrum_rows(const AsepParams &params, int cut) {
    const auto mps = asep_mps(params);
    if(mps.num_sites() < 2) throw ArgumentError("spectrum: need at least two sites");
    const auto spec = cut_spectrum(mps, cut);
    std::vector<SpectrumRow> rows;
    for(Index j = 0; j < spec.probabilities.size(); ++j) rows.push_back({j, spec.probabilities[j]});
    return rows;
}

void write_spectrum_csv(std::ostream &out, const AsepParams &params, int cut, const std::vector<SpectrumRow> &rows) {
    header(out, "spectrum",
           fmt::format("{} cut={} regime={}", asep_params(params), cut, to_string(default_regime(params))));
    out << "# lambda is the 0-based rank of p_lambda in descending order\n";
    out << "lambda,p_lambda\n";
    for(const auto &r : rows) fmt::print(out, "{},{}\n", r.lambda, num(r.p));
}

std::vector<IsingRow> ising_rows(const Range &betas) {
    std::vector<IsingRow> rows;
    for(const double b : betas.values()) {
        const auto nf = to_natural_form(ising_mps({b, 2}));
        rows.push_back({b, ising_entropy_cost_exact(b), shannon_entropy(nf.bond(1))});
    }
    return rows;
}

void write_ising_csv(std::ostream &out, const Range &betas, const std::vector<IsingRow> &rows) {
    header(out, "ising", fmt::format("beta={} n=2", betas.to_string()));
    out << "beta,sc_exact,sc_from_mps\n";
    for(const auto &r : rows) fmt::print(out, "{},{},{}\n", num(r.beta), num(r.sc_exact), num(r.sc_from_mps));
}

std::vector<McRow> mc_rows(const mc::McConfig &base, const std::vector<int> &sizes, int cut,
                           const std::optional<std::string> &run_file) {
    std::vector<McRow> rows;
    for(const int n : sizes) {
        auto cfg             = base;
        cfg.params.num_sites = n;
        const int c          = cut > 0 ? cut : n / 2;
        const auto samples   = mc::simulate(cfg);
        const auto est       = mc::plug_in_mutual_information(samples, n, c);
        if(run_file) {
            std::filesystem::path p(*run_file);
            if(sizes.size() > 1) p.replace_filename(p.stem().string() + "_N" + std::to_string(n) + p.extension().string());
            mc::write_run_file(p, {cfg.params, cfg.seed, cfg.interval(), cfg.burn_in_time, samples.size()}, samples);
        }
        rows.push_back({n, cfg.params.alpha, cfg.params.beta, c, est.estimate, est.std_error,
                        std::exp(est.estimate * std::numbers::ln2), est.sample_count, est.undersampled});
    }
    return rows;
}

void write_mc_csv(std::ostream &out, const mc::McConfig &base, const std::vector<McRow> &rows) {
    header(out, "mc",
           fmt::format("alpha={} beta={} samples={} burn_in={} interval={} workers={} rng=\"{}\"", num(base.params.alpha),
                       num(base.params.beta), base.sample_count, num(base.burn_in_time),
                       base.sample_interval > 0 ? num(base.sample_interval) : std::string("N"), base.workers,
                       mc::kRngAlgorithm),
           std::to_string(base.seed));
    out << "# mi_estimate and stderr in bits; exp_mi = exp(I in nats) = exp(mi_estimate * ln 2)\n";
    out << "N,alpha,beta,cut,mi_estimate,stderr,exp_mi,samples,undersampled\n";
    for(const auto &r : rows)
        fmt::print(out, "{},{},{},{},{},{},{},{},{}\n", r.num_sites, num(r.alpha), num(r.beta), r.cut, num(r.mi_estimate),
                   num(r.std_error), num(r.exp_mi), r.samples, r.undersampled ? 1 : 0);
}

TruncationReport truncation_report(const AsepParams &params, Index bond_cap) {
    const auto mps = asep_mps(params);
    const auto nf  = to_natural_form(mps);
    const auto tr  = truncate(nf, bond_cap);
    TruncationReport rep;
    rep.error_bound = tr.error_bound;
    for(int b = 1; b < mps.num_sites(); ++b)
        rep.rows.push_back({b, mps.bond_dim(b), tr.mps.bond_dim(b), tr.tails[static_cast<std::size_t>(b - 1)]});
    if(params.num_sites <= 20) rep.measured_l1 = l1_distance(contract_to_table(mps), contract_to_table(tr.mps));
    return rep;
}

void write_truncation_csv(std::ostream &out, const AsepParams &params, Index bond_cap, const TruncationReport &report) {
    header(out, "truncate", fmt::format("{} bond_cap={}", asep_params(params), bond_cap));
    fmt::print(out, "# error_bound: {}\n# measured_l1: {}\n", num(report.error_bound),
               report.measured_l1 ? num(*report.measured_l1) : std::string("not computed"));
    out << "cut,source_dim,kept_dim,discarded_mass\n";
    for(const auto &r : report.rows) fmt::print(out, "{},{},{},{}\n", r.cut, r.source_dim, r.kept_dim, num(r.discarded));
}

} // namespace smps::reports
