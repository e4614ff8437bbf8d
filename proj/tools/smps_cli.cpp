#include "smps/errors.hpp"
#include "smps/reports.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace {

using namespace smps;
using namespace smps::reports;

// Writes to --out when given, stdout otherwise.
class Output {
    public:
    explicit Output(const std::string &path) {
        if(!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if(!*file_) throw std::runtime_error("cannot open output file " + path);
        }
    }
    std::ostream &stream() { return file_ ? *file_ : std::cout; }

    private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<int> parse_sizes(const std::string &text) {
    std::vector<int> out;
    for(const double v : Range::parse(text).values()) out.push_back(static_cast<int>(std::lround(v)));
    return out;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Stochastic matrix product states: ASEP steady states, entropy cost and mutual information"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::string alpha = "0.05:0.95:0.05", beta = "0.05:0.95:0.05", out_path, sizes = "20", betas = "0:5:0.25";
    std::string quantities = "mi,entropy_cost_ub", run_file;
    int         n = 20, cut = 0, threads = 1, workers = 1, corpus = 200;
    long long   bond_cap = 11;
    std::int64_t  samples = 100000;
    double        burn_in = 1000.0, interval = 0.0;
    std::uint64_t seed    = 1;

    auto *sweep = app.add_subcommand("phase-sweep", "mutual information and entropy-cost upper bound over an (alpha, beta) grid");
    sweep->add_option("--alpha", alpha, "alpha grid, 'v' or 'start:stop:step'")->capture_default_str();
    sweep->add_option("--beta", beta, "beta grid, 'v' or 'start:stop:step'")->capture_default_str();
    sweep->add_option("--n", n, "chain length")->capture_default_str();
    sweep->add_option("--cut", cut, "sites in the left block (default N/2)");
    sweep->add_option("--quantities", quantities, "comma list of mi, entropy_cost_ub, spectrum, l1_truncation")->capture_default_str();
    sweep->add_option("--bond-cap", bond_cap, "bond cap for l1_truncation")->capture_default_str();
    sweep->add_option("--threads", threads, "worker threads")->capture_default_str();
    sweep->add_option("--out", out_path, "output CSV (default stdout)");

    std::string single_alpha = "0.3", single_beta = "0.3";
    auto *spectrum = app.add_subcommand("spectrum", "sorted cut spectrum p_lambda of the ASEP representation");
    spectrum->add_option("--alpha", single_alpha)->capture_default_str();
    spectrum->add_option("--beta", single_beta)->capture_default_str();
    spectrum->add_option("--n", n)->capture_default_str();
    spectrum->add_option("--cut", cut, "sites in the left block (default N/2)");
    spectrum->add_option("--out", out_path);

    auto *ising = app.add_subcommand("ising", "two-site Ising entropy cost: closed form vs. natural form");
    ising->add_option("--beta", betas, "inverse-temperature grid")->capture_default_str();
    ising->add_option("--out", out_path);

    auto *mc = app.add_subcommand("mc", "kinetic Monte Carlo estimate of block mutual information");
    mc->add_option("--alpha", single_alpha)->capture_default_str();
    mc->add_option("--beta", single_beta)->capture_default_str();
    mc->add_option("--n", sizes, "chain length or 'start:stop:step'")->capture_default_str();
    mc->add_option("--cut", cut, "sites in the left block (default N/2)");
    mc->add_option("--samples", samples)->capture_default_str();
    mc->add_option("--burn-in", burn_in, "burn-in time")->capture_default_str();
    mc->add_option("--interval", interval, "time between samples (default N)");
    mc->add_option("--seed", seed)->capture_default_str();
    mc->add_option("--workers", workers, "independent trajectories")->capture_default_str();
    mc->add_option("--run-file", run_file, "also persist samples to a binary run file");
    mc->add_option("--out", out_path);

    auto *trunc = app.add_subcommand("truncate", "truncate the ASEP natural form and report the L1 bound");
    trunc->add_option("--alpha", single_alpha)->capture_default_str();
    trunc->add_option("--beta", single_beta)->capture_default_str();
    trunc->add_option("--n", n)->capture_default_str();
    trunc->add_option("--bond-cap", bond_cap)->capture_default_str();
    trunc->add_option("--out", out_path);

    auto *verify_cmd = app.add_subcommand("verify", "run the invariant and oracle cross-checks");
    verify_cmd->add_option("--seed", seed, "random corpus seed")->capture_default_str();
    verify_cmd->add_option("--samples", corpus, "random corpus size")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        Output out(out_path);
        const auto point = [&] { return AsepParams{std::stod(single_alpha), std::stod(single_beta), n}; };
        if(*sweep) {
            SweepSpec spec;
            spec.alpha     = Range::parse(alpha);
            spec.beta      = Range::parse(beta);
            spec.num_sites = n;
            spec.cut       = cut;
            spec.bond_cap  = bond_cap;
            spec.threads   = threads;
            spec.quantities.clear();
            std::stringstream ss(quantities);
            for(std::string q; std::getline(ss, q, ',');) {
                if(q == "mi") spec.quantities.insert(Quantity::MutualInformation);
                else if(q == "entropy_cost_ub") spec.quantities.insert(Quantity::EntropyCostUpperBound);
                else if(q == "spectrum") spec.quantities.insert(Quantity::Spectrum);
                else if(q == "l1_truncation") spec.quantities.insert(Quantity::L1Truncation);
                else throw ArgumentError("unknown quantity '" + q + "'");
            }
            write_phase_csv(out.stream(), spec, phase_sweep(spec));
        } else if(*spectrum) {
            const auto p = point();
            const int  c = cut > 0 ? cut : n / 2;
            write_spectrum_csv(out.stream(), p, c, spectrum_rows(p, c));
        } else if(*ising) {
            const auto grid = Range::parse(betas);
            write_ising_csv(out.stream(), grid, ising_rows(grid));
        } else if(*mc) {
            mc::McConfig cfg;
            cfg.params          = {std::stod(single_alpha), std::stod(single_beta), 1};
            cfg.sample_count    = samples;
            cfg.burn_in_time    = burn_in;
            cfg.sample_interval = interval;
            cfg.seed            = seed;
            cfg.workers         = workers;
            const auto rows = mc_rows(cfg, parse_sizes(sizes), cut,
                                      run_file.empty() ? std::nullopt : std::optional<std::string>(run_file));
            write_mc_csv(out.stream(), cfg, rows);
        } else if(*trunc) {
            const auto p = point();
            write_truncation_csv(out.stream(), p, bond_cap, truncation_report(p, bond_cap));
        } else if(*verify_cmd) {
            VerifyOptions opts;
            opts.seed        = seed;
            opts.corpus_size = corpus;
            const auto checks = verify(opts);
            write_verify_report(std::cout, checks);
            const bool ok = std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.passed; });
            std::cout << (ok ? "all checks passed\n" : "verification FAILED\n");
            return ok ? 0 : 1;
        }
    } catch(const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
