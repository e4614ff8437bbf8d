#pragma once

#include "smps/models.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace smps::mc {

/// Recorded in output metadata so runs can be reproduced.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64, per-worker seed = splitmix64(seed + worker)";

struct McConfig {
    AsepParams    params;
    double        burn_in_time    = 1000.0;
    std::int64_t  sample_count    = 100000;
    double        sample_interval = 0.0; // <= 0 selects N time units
    std::uint64_t seed            = 1;
    int           workers         = 1;   // independent trajectories, samples split evenly

    [[nodiscard]] double interval() const { return sample_interval > 0.0 ? sample_interval : params.num_sites; }
    void                 validate() const;
};

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x);

/**
 * Exact continuous-time ASEP trajectory (next-event sampling).
 *
 * State bit N-1-k holds site k, matching the table configuration index.
 */
class AsepTrajectory {
    public:
    AsepTrajectory(const AsepParams &params, std::uint64_t stream_seed, std::uint64_t initial_state = 0);

    /// Run forward by `dt` time units.
    void advance(double dt);

    [[nodiscard]] std::uint64_t state() const noexcept { return state_; }
    [[nodiscard]] double        time() const noexcept { return time_; }
    [[nodiscard]] std::int64_t  injections() const noexcept { return injections_; }
    [[nodiscard]] std::int64_t  extractions() const noexcept { return extractions_; }
    [[nodiscard]] std::int64_t  events() const noexcept { return events_; }

    private:
    AsepParams                              params_;
    std::mt19937_64                         rng_;
    std::uniform_real_distribution<double>  uniform_{0.0, 1.0};
    std::uint64_t                           state_;
    double                                  time_        = 0.0;
    std::int64_t                            injections_  = 0;
    std::int64_t                            extractions_ = 0;
    std::int64_t                            events_      = 0;
};

/// Samples from all workers, worker 0 first; each worker burns in then records at fixed intervals.
[[nodiscard]] std::vector<std::uint64_t> simulate(const McConfig &cfg);

struct MiEstimate {
    double       estimate   = 0.0; // bits
    double       std_error  = 0.0; // bits, batch means
    std::int64_t sample_count = 0;
    int          cut        = 0;
    int          batches    = 0;
    std::size_t  observed_support = 0;
    bool         undersampled = false; // fewer than 100 samples per observed joint configuration
};

inline constexpr int kDefaultBatches = 20;

/// Plug-in I(A:B) between sites [0, cut) and [cut, N) from recorded configurations.
[[nodiscard]] MiEstimate plug_in_mutual_information(std::span<const std::uint64_t> samples, int num_sites, int cut,
                                                    int batches = kDefaultBatches);

[[nodiscard]] MiEstimate estimate_mutual_information(const McConfig &cfg, int cut);

struct DensityEstimate {
    Eigen::VectorXd mean;
    Eigen::VectorXd std_error;
};

[[nodiscard]] DensityEstimate site_densities(std::span<const std::uint64_t> samples, int num_sites,
                                             int batches = kDefaultBatches);

/// Binary run file: fixed little-endian header followed by packed N-bit configurations.
struct RunHeader {
    AsepParams    params;
    std::uint64_t seed            = 0;
    double        sample_interval = 0.0;
    double        burn_in_time    = 0.0;
    std::uint64_t sample_count    = 0;
};

void write_run_file(const std::filesystem::path &path, const RunHeader &header, std::span<const std::uint64_t> samples);

struct RunFile {
    RunHeader                  header;
    std::vector<std::uint64_t> samples;
};

[[nodiscard]] RunFile read_run_file(const std::filesystem::path &path);

} // namespace smps::mc
