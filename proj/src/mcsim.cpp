#include "smps/mcsim.hpp"

#include "smps/errors.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>
#include <unordered_map>

namespace smps::mc {

namespace {
    constexpr int kMaxSimSites  = 64;
    constexpr int kMaxMiSites   = 24;
    constexpr char kMagic[8]    = {'S', 'M', 'P', 'S', 'R', 'U', 'N', '\0'};
    constexpr std::uint32_t kRunFileVersion = 1;

    static_assert(std::endian::native == std::endian::little, "run files assume a little-endian host");

    // Entropy (bits) of an empirical distribution given raw counts and their total.
    template<typename Map>
    double count_entropy(const Map &counts, double total) {
        double acc = 0.0;
        for(const auto &[key, c] : counts) {
            const auto x = static_cast<double>(c);
            acc += x * std::log2(x);
        }
        return std::log2(total) - acc / total;
    }

    double plug_in_mi(std::span<const std::uint64_t> samples, int num_sites, int cut, std::size_t *support) {
        const int           right_bits = num_sites - cut;
        const std::uint64_t right_mask = (std::uint64_t{1} << right_bits) - 1;
        std::unordered_map<std::uint64_t, std::int64_t> joint, left, right;
        for(const auto s : samples) {
            ++joint[s];
            ++left[s >> right_bits];
            ++right[s & right_mask];
        }
        if(support) *support = joint.size();
        const auto n = static_cast<double>(samples.size());
        return std::max(0.0, count_entropy(left, n) + count_entropy(right, n) - count_entropy(joint, n));
    }

    template<typename T>
    void put(std::ofstream &out, const T &value) {
        out.write(reinterpret_cast<const char *>(&value), sizeof(T));
    }
    template<typename T>
    T get(std::ifstream &in) {
        T value{};
        in.read(reinterpret_cast<char *>(&value), sizeof(T));
        if(!in) throw std::runtime_error("read_run_file: truncated header");
        return value;
    }
} // namespace

void McConfig::validate() const {
    smps::validate(params);
    if(params.num_sites > kMaxSimSites) throw ArgumentError("McConfig: at most 64 sites");
    if(!(burn_in_time >= 0.0)) throw ArgumentError("McConfig: burn-in time must be >= 0");
    if(sample_count <= 0) throw ArgumentError("McConfig: sample count must be positive");
    if(sample_interval < 0.0) throw ArgumentError("McConfig: sample interval must be positive");
    if(workers < 1 || workers > sample_count) throw ArgumentError("McConfig: worker count must lie in 1..sample_count");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

AsepTrajectory::AsepTrajectory(const AsepParams &params, std::uint64_t stream_seed, std::uint64_t initial_state)
    : params_(params), rng_(stream_seed), state_(initial_state) {
    smps::validate(params_);
    if(params_.num_sites > kMaxSimSites) throw ArgumentError("AsepTrajectory: at most 64 sites");
}

void AsepTrajectory::advance(double dt) {
    const int           n      = params_.num_sites;
    const std::uint64_t first  = std::uint64_t{1} << (n - 1); // site 0
    const std::uint64_t last   = 1;                           // site N-1
    const double        target = time_ + dt;
    while(true) {
        // Bulk hop k -> k+1 is enabled where bit b is set and bit b-1 is clear.
        const std::uint64_t hops = state_ & ~(state_ << 1) & ~last;
        const double        in_rate  = (state_ & first) ? 0.0 : params_.alpha;
        const double        out_rate = (state_ & last) ? params_.beta : 0.0;
        const double        total    = in_rate + out_rate + static_cast<double>(std::popcount(hops));
        if(total <= 0.0) {
            time_ = target;
            return;
        }
        const double wait = -std::log1p(-uniform_(rng_)) / total;
        if(time_ + wait > target) {
            // memoryless: the pending event is resampled on the next call
            time_ = target;
            return;
        }
        time_ += wait;
        ++events_;
        double pick = uniform_(rng_) * total;
        if(pick < in_rate) {
            state_ |= first;
            ++injections_;
            continue;
        }
        pick -= in_rate;
        if(pick < out_rate) {
            state_ &= ~last;
            ++extractions_;
            continue;
        }
        pick -= out_rate;
        auto          which = static_cast<int>(pick);
        std::uint64_t rest  = hops;
        if(which >= std::popcount(hops)) which = std::popcount(hops) - 1;
        for(int j = 0; j < which; ++j) rest &= rest - 1; // drop lowest set bits
        const std::uint64_t from = rest & (~rest + 1);
        state_                   = (state_ & ~from) | (from >> 1);
    }
}

std::vector<std::uint64_t> simulate(const McConfig &cfg) {
    cfg.validate();
    const auto workers = static_cast<std::size_t>(cfg.workers);
    const auto total   = static_cast<std::size_t>(cfg.sample_count);
    std::vector<std::vector<std::uint64_t>> parts(workers);
    {
        std::vector<std::jthread> pool;
        for(std::size_t w = 0; w < workers; ++w) {
            const std::size_t share = total / workers + (w < total % workers ? 1 : 0);
            pool.emplace_back([&cfg, &parts, w, share] {
                AsepTrajectory traj(cfg.params, splitmix64(cfg.seed + w));
                traj.advance(cfg.burn_in_time);
                auto &out = parts[w];
                out.reserve(share);
                for(std::size_t i = 0; i < share; ++i) {
                    traj.advance(cfg.interval());
                    out.push_back(traj.state());
                }
            });
        }
    }
    std::vector<std::uint64_t> samples;
    samples.reserve(total);
    for(const auto &p : parts) samples.insert(samples.end(), p.begin(), p.end());
    return samples;
}

MiEstimate plug_in_mutual_information(std::span<const std::uint64_t> samples, int num_sites, int cut, int batches) {
    if(num_sites > kMaxMiSites) throw CapacityError("plug_in_mutual_information: at most 24 sites");
    if(cut < 1 || cut > num_sites - 1) throw ArgumentError("plug_in_mutual_information: cut must lie in 1..N-1");
    if(batches < 2 || static_cast<std::size_t>(batches) > samples.size())
        throw ArgumentError("plug_in_mutual_information: need at least two batches and one sample per batch");

    MiEstimate est;
    est.cut          = cut;
    est.batches      = batches;
    est.sample_count = static_cast<std::int64_t>(samples.size());
    est.estimate     = plug_in_mi(samples, num_sites, cut, &est.observed_support);
    est.undersampled = samples.size() < 100 * est.observed_support;

    const std::size_t   per = samples.size() / static_cast<std::size_t>(batches);
    std::vector<double> values;
    for(int b = 0; b < batches; ++b)
        values.push_back(plug_in_mi(samples.subspan(static_cast<std::size_t>(b) * per, per), num_sites, cut, nullptr));
    double mean = 0.0;
    for(const double v : values) mean += v;
    mean /= batches;
    double var = 0.0;
    for(const double v : values) var += (v - mean) * (v - mean);
    var /= (batches - 1);
    est.std_error = std::sqrt(var / batches);
    return est;
}

MiEstimate estimate_mutual_information(const McConfig &cfg, int cut) {
    const auto samples = simulate(cfg);
    return plug_in_mutual_information(samples, cfg.params.num_sites, cut);
}

DensityEstimate site_densities(std::span<const std::uint64_t> samples, int num_sites, int batches) {
    if(batches < 2 || static_cast<std::size_t>(batches) > samples.size())
        throw ArgumentError("site_densities: need at least two batches and one sample per batch");
    const std::size_t per = samples.size() / static_cast<std::size_t>(batches);
    Eigen::MatrixXd   batch_means = Eigen::MatrixXd::Zero(batches, num_sites);
    Eigen::VectorXd   overall     = Eigen::VectorXd::Zero(num_sites);
    for(std::size_t i = 0; i < samples.size(); ++i) {
        const auto b = static_cast<Index>(i / per);
        for(int k = 0; k < num_sites; ++k) {
            const double occ = static_cast<double>((samples[i] >> (num_sites - 1 - k)) & 1U);
            overall[k] += occ;
            if(b < batches) batch_means(b, k) += occ;
        }
    }
    DensityEstimate out;
    out.mean          = overall / static_cast<double>(samples.size());
    batch_means      /= static_cast<double>(per);
    const Eigen::RowVectorXd mu  = batch_means.colwise().mean();
    const Eigen::MatrixXd    dev = batch_means.rowwise() - mu;
    out.std_error = (dev.array().square().colwise().sum() / (batches - 1) / batches).sqrt().transpose();
    return out;
}

void write_run_file(const std::filesystem::path &path, const RunHeader &header, std::span<const std::uint64_t> samples) {
    const int n = header.params.num_sites;
    if(n < 1 || n > kMaxSimSites) throw ArgumentError("write_run_file: site count out of range");
    if(header.sample_count != samples.size()) throw ArgumentError("write_run_file: sample count mismatch");
    std::ofstream out(path, std::ios::binary);
    if(!out) throw std::runtime_error("write_run_file: cannot open " + path.string());
    out.write(kMagic, sizeof(kMagic));
    put(out, kRunFileVersion);
    put(out, static_cast<std::uint32_t>(n));
    put(out, header.params.alpha);
    put(out, header.params.beta);
    put(out, header.seed);
    put(out, header.sample_interval);
    put(out, header.burn_in_time);
    put(out, header.sample_count);

    // Bit stream: sample after sample, site 0 first, most significant bit of each byte first.
    std::vector<unsigned char> bytes((samples.size() * static_cast<std::size_t>(n) + 7) / 8, 0);
    std::size_t                pos = 0;
    for(const auto s : samples)
        for(int k = 0; k < n; ++k, ++pos)
            if((s >> (n - 1 - k)) & 1U) bytes[pos / 8] |= static_cast<unsigned char>(0x80U >> (pos % 8));
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if(!out) throw std::runtime_error("write_run_file: write failed for " + path.string());
}

RunFile read_run_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if(!in) throw std::runtime_error("read_run_file: cannot open " + path.string());
    char magic[sizeof(kMagic)];
    in.read(magic, sizeof(magic));
    if(!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw std::runtime_error("read_run_file: bad magic");
    if(get<std::uint32_t>(in) != kRunFileVersion) throw std::runtime_error("read_run_file: unsupported version");
    RunFile f;
    const auto n                  = static_cast<int>(get<std::uint32_t>(in));
    f.header.params.num_sites     = n;
    f.header.params.alpha         = get<double>(in);
    f.header.params.beta          = get<double>(in);
    f.header.seed                 = get<std::uint64_t>(in);
    f.header.sample_interval      = get<double>(in);
    f.header.burn_in_time         = get<double>(in);
    f.header.sample_count         = get<std::uint64_t>(in);
    if(n < 1 || n > kMaxSimSites) throw std::runtime_error("read_run_file: site count out of range");

    std::vector<unsigned char> bytes((f.header.sample_count * static_cast<std::uint64_t>(n) + 7) / 8);
    in.read(reinterpret_cast<char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if(!in) throw std::runtime_error("read_run_file: truncated body");
    f.samples.resize(f.header.sample_count, 0);
    std::size_t pos = 0;
    for(auto &s : f.samples)
        for(int k = 0; k < n; ++k, ++pos)
            if(bytes[pos / 8] & (0x80U >> (pos % 8))) s |= std::uint64_t{1} << (n - 1 - k);
    return f;
}

} // namespace smps::mc
