#pragma once

#include "smps/errors.hpp"
#include "smps/types.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace smps {

/// Largest dense table we are willing to materialize (d^N entries).
inline constexpr std::uint64_t kMaxTableSize = std::uint64_t{1} << 26;

/**
 * Dense weight table over all d^N configurations of a chain.
 *
 * Configurations are indexed with site 0 as the most significant base-d digit,
 * so (i_0, ..., i_{N-1}) maps to sum_k i_k d^{N-1-k}. The normalization flag
 * is metadata supplied by whoever produced the weights; it is checked on
 * construction but never inferred.
 */
template<typename Scalar = double>
class ProbabilityTable {
    public:
    ProbabilityTable(int local_dim, int num_sites, Vector<Scalar> weights, bool normalized)
        : local_dim_(local_dim), num_sites_(num_sites), weights_(std::move(weights)), normalized_(normalized) {
        if(local_dim_ < 2) throw ArgumentError("ProbabilityTable: local dimension must be >= 2");
        if(num_sites_ < 1) throw ArgumentError("ProbabilityTable: need at least one site");
        if(num_sites_ > 63 || ipow(static_cast<std::uint64_t>(local_dim_), num_sites_) > kMaxTableSize)
            throw CapacityError("ProbabilityTable: d^N exceeds the dense size guard");
        if(static_cast<std::uint64_t>(weights_.size()) != ipow(static_cast<std::uint64_t>(local_dim_), num_sites_))
            throw StructuralError("ProbabilityTable: weight count is not d^N");
        if((weights_.array() < Scalar(0)).any()) throw StructuralError("ProbabilityTable: negative weight");
        if(normalized_ && std::abs(weights_.sum() - Scalar(1)) > Scalar(tol::identity))
            throw PreconditionError("ProbabilityTable: flagged normalized but weights do not sum to 1");
    }

    [[nodiscard]] int local_dim() const noexcept { return local_dim_; }
    [[nodiscard]] int num_sites() const noexcept { return num_sites_; }
    [[nodiscard]] Index size() const noexcept { return weights_.size(); }
    [[nodiscard]] bool is_normalized() const noexcept { return normalized_; }
    [[nodiscard]] const Vector<Scalar> &weights() const noexcept { return weights_; }
    [[nodiscard]] Scalar operator[](Index config) const { return weights_[config]; }

    [[nodiscard]] Scalar total() const { return weights_.sum(); }

    /// Copy rescaled to unit L1 mass.
    [[nodiscard]] ProbabilityTable normalized() const {
        const Scalar z = total();
        if(!(z > Scalar(0))) throw DegenerateInputError("ProbabilityTable: zero total weight");
        return ProbabilityTable(local_dim_, num_sites_, weights_ / z, true);
    }

    /// Symbol at `site` of configuration index `config`.
    [[nodiscard]] int symbol(Index config, int site) const {
        for(int k = num_sites_ - 1; k > site; --k) config /= local_dim_;
        return static_cast<int>(config % local_dim_);
    }

    private:
    int            local_dim_;
    int            num_sites_;
    Vector<Scalar> weights_;
    bool           normalized_;
};

/// Sum out every site not listed in `sites`; the kept sites retain their relative order.
template<typename Scalar>
[[nodiscard]] ProbabilityTable<Scalar> marginal(const ProbabilityTable<Scalar> &table, std::vector<int> sites) {
    if(sites.empty()) throw ArgumentError("marginal: empty site subset");
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    const int n = table.num_sites();
    if(sites.front() < 0 || sites.back() >= n) throw ArgumentError("marginal: site index out of range");
    if(!table.is_normalized()) throw PreconditionError("marginal: table must be normalized");

    const int  d    = table.local_dim();
    const auto kept = static_cast<int>(sites.size());
    // Place value of each original site inside the reduced index.
    std::vector<Index> place(static_cast<std::size_t>(n), 0);
    Index              stride = 1;
    for(int j = kept - 1; j >= 0; --j) {
        place[static_cast<std::size_t>(sites[static_cast<std::size_t>(j)])] = stride;
        stride *= d;
    }

    Vector<Scalar>     out = Vector<Scalar>::Zero(stride);
    std::vector<int>   digits(static_cast<std::size_t>(n), 0);
    Index              reduced = 0;
    for(Index c = 0; c < table.size(); ++c) {
        out[reduced] += table[c];
        // odometer increment, last site fastest
        for(int k = n - 1; k >= 0; --k) {
            auto &dig = digits[static_cast<std::size_t>(k)];
            reduced += place[static_cast<std::size_t>(k)];
            if(++dig < d) break;
            reduced -= place[static_cast<std::size_t>(k)] * d;
            dig = 0;
        }
    }
    out /= out.sum();
    return ProbabilityTable<Scalar>(d, kept, std::move(out), true);
}

template<typename Scalar>
[[nodiscard]] Scalar l1_distance(const ProbabilityTable<Scalar> &a, const ProbabilityTable<Scalar> &b) {
    if(a.local_dim() != b.local_dim() || a.num_sites() != b.num_sites())
        throw StructuralError("l1_distance: table shapes differ");
    return (a.weights() - b.weights()).template lpNorm<1>();
}

} // namespace smps
