#pragma once

#include "smps/errors.hpp"
#include "smps/probability_table.hpp"
#include "smps/types.hpp"

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace smps {

/**
 * Open-boundary matrix product state with elementwise nonnegative matrices.
 *
 * Site k holds one D_k x D_{k+1} matrix per physical symbol. Boundary vectors
 * are always absorbed into the edge sites, so the first and last bond
 * dimensions are 1 and the weight of a configuration is the 1x1 product
 * B^0_{i_0} B^1_{i_1} ... B^{N-1}_{i_{N-1}}.
 */
template<typename Scalar = double>
class StochasticMps {
    public:
    using MatrixType = Matrix<Scalar>;
    using SiteTensor = std::vector<MatrixType>;

    StochasticMps(int local_dim, std::vector<SiteTensor> sites, bool normalized)
        : local_dim_(local_dim), sites_(std::move(sites)), normalized_(normalized) {
        validate();
        if(normalized_ && std::abs(total_weight() - Scalar(1)) > Scalar(tol::identity))
            throw PreconditionError("StochasticMps: flagged normalized but contraction is not 1");
    }

    /// Build from explicit boundary vectors, absorbing them into the edge sites.
    static StochasticMps with_boundaries(int local_dim, std::vector<SiteTensor> sites, const RowVector<Scalar> &left,
                                         const Vector<Scalar> &right, bool normalized) {
        if(sites.empty()) throw StructuralError("StochasticMps: no sites");
        if((left.array() < Scalar(0)).any() || (right.array() < Scalar(0)).any())
            throw StructuralError("StochasticMps: boundary vectors must be nonnegative");
        for(auto &m : sites.front()) {
            if(m.rows() != left.size()) throw StructuralError("StochasticMps: left boundary does not match site 0");
            m = (left * m).eval();
        }
        for(auto &m : sites.back()) {
            if(m.cols() != right.size()) throw StructuralError("StochasticMps: right boundary does not match last site");
            m = (m * right).eval();
        }
        return StochasticMps(local_dim, std::move(sites), normalized);
    }

    [[nodiscard]] int  local_dim() const noexcept { return local_dim_; }
    [[nodiscard]] int  num_sites() const noexcept { return static_cast<int>(sites_.size()); }
    [[nodiscard]] bool is_normalized() const noexcept { return normalized_; }

    [[nodiscard]] std::span<const MatrixType> site(int k) const { return sites_.at(static_cast<std::size_t>(k)); }
    [[nodiscard]] const MatrixType &matrix(int k, int symbol) const {
        return sites_.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(symbol));
    }
    [[nodiscard]] const std::vector<SiteTensor> &sites() const noexcept { return sites_; }

    /// Dimension of bond b in 0..N; bond b sits to the left of site b.
    [[nodiscard]] Index bond_dim(int b) const {
        if(b < 0 || b > num_sites()) throw ArgumentError("bond_dim: bond out of range");
        return b == num_sites() ? sites_.back().front().cols() : sites_[static_cast<std::size_t>(b)].front().rows();
    }
    [[nodiscard]] std::vector<Index> bond_dims() const {
        std::vector<Index> dims;
        for(int b = 0; b <= num_sites(); ++b) dims.push_back(bond_dim(b));
        return dims;
    }
    [[nodiscard]] Index max_bond_dim() const {
        Index m = 1;
        for(int b = 0; b <= num_sites(); ++b) m = std::max(m, bond_dim(b));
        return m;
    }

    /// Sum of all configuration weights.
    [[nodiscard]] Scalar total_weight() const {
        Scalar log_scale;
        const Scalar mantissa = scaled_total(log_scale);
        return mantissa * std::exp(log_scale);
    }

    /// Copy rescaled to unit total weight, with the scale spread evenly over the sites.
    [[nodiscard]] StochasticMps normalized() const {
        Scalar       log_scale;
        const Scalar mantissa = scaled_total(log_scale);
        if(!(mantissa > Scalar(0))) throw DegenerateInputError("StochasticMps: zero total weight");
        const Scalar per_site = std::exp(-(log_scale + std::log(mantissa)) / Scalar(num_sites()));
        auto         sites    = sites_;
        for(auto &st : sites)
            for(auto &m : st) m *= per_site;
        // Absorb the residual rounding into the first site.
        StochasticMps tmp(local_dim_, sites, false);
        const Scalar  z = tmp.total_weight();
        for(auto &m : sites.front()) m /= z;
        return StochasticMps(local_dim_, std::move(sites), true);
    }

    private:
    void validate() const {
        if(local_dim_ < 2) throw StructuralError("StochasticMps: local dimension must be >= 2");
        if(sites_.empty()) throw StructuralError("StochasticMps: no sites");
        for(std::size_t k = 0; k < sites_.size(); ++k) {
            const auto &st = sites_[k];
            if(st.size() != static_cast<std::size_t>(local_dim_))
                throw StructuralError("StochasticMps: site " + std::to_string(k) + " does not hold d matrices");
            for(const auto &m : st) {
                if(m.rows() != st.front().rows() || m.cols() != st.front().cols() || m.size() == 0)
                    throw StructuralError("StochasticMps: inconsistent matrix shapes at site " + std::to_string(k));
                if(!m.allFinite() || (m.array() < Scalar(0)).any())
                    throw StructuralError("StochasticMps: negative or non-finite entry at site " + std::to_string(k));
            }
            if(k > 0 && sites_[k - 1].front().cols() != st.front().rows())
                throw StructuralError("StochasticMps: bond mismatch between sites " + std::to_string(k - 1) + " and " +
                                      std::to_string(k));
        }
        if(sites_.front().front().rows() != 1 || sites_.back().front().cols() != 1)
            throw StructuralError("StochasticMps: edge bonds must have dimension 1");
    }

    // Total weight as mantissa * exp(log_scale), renormalizing the running vector per site.
    Scalar scaled_total(Scalar &log_scale) const {
        RowVector<Scalar> env = RowVector<Scalar>::Ones(1);
        log_scale             = Scalar(0);
        for(const auto &st : sites_) {
            MatrixType transfer = st.front();
            for(std::size_t i = 1; i < st.size(); ++i) transfer += st[i];
            env = (env * transfer).eval();
            const Scalar s = env.sum();
            if(!(s > Scalar(0))) return Scalar(0);
            env /= s;
            log_scale += std::log(s);
        }
        return env.sum();
    }

    int                     local_dim_;
    std::vector<SiteTensor> sites_;
    bool                    normalized_;
};

/**
 * Exact bipartite factorization of an MPS at a cut.
 *
 * Row x_A of `left` is the product of the left-block matrices for that
 * configuration; row x_B of `right` is the (transposed) product of the
 * right-block matrices. The joint weight is left.row(x_A).dot(right.row(x_B)).
 */
template<typename Scalar = double>
struct BipartiteFactorization {
    int               cut       = 0; // number of sites in the left block
    int               num_sites = 0;
    int               local_dim = 2;
    Matrix<Scalar>    left;
    Matrix<Scalar>    right;

    [[nodiscard]] Scalar joint(Index left_config, Index right_config) const {
        return left.row(left_config).dot(right.row(right_config));
    }
    /// Σ_{x_A,x_B} u(x_A)·w(x_B).
    [[nodiscard]] Scalar total() const { return left.colwise().sum().dot(right.colwise().sum()); }
    /// p_A(x_A) for every left configuration.
    [[nodiscard]] Vector<Scalar> left_marginal() const { return left * right.colwise().sum().transpose(); }
    [[nodiscard]] Vector<Scalar> right_marginal() const { return right * left.colwise().sum().transpose(); }
};

namespace detail {
    // Depth-first enumeration keeps one running row vector per depth.
    template<typename Scalar, typename Emit>
    void enumerate_block(const StochasticMps<Scalar> &mps, int first, int last, const RowVector<Scalar> &seed,
                         Emit &&emit) {
        const int                      depth = last - first;
        std::vector<RowVector<Scalar>> stack(static_cast<std::size_t>(depth + 1));
        stack[0] = seed;
        std::vector<int> digits(static_cast<std::size_t>(depth), 0);
        if(depth == 0) {
            emit(Index{0}, stack[0]);
            return;
        }
        const int d = mps.local_dim();
        int       level = 0;
        Index     config = 0;
        while(true) {
            // descend to a leaf, filling stack levels
            while(level < depth) {
                const auto s = static_cast<std::size_t>(level);
                stack[s + 1] = stack[s] * mps.matrix(first + level, digits[s]);
                ++level;
            }
            emit(config, stack[static_cast<std::size_t>(depth)]);
            ++config;
            // odometer on digits, backtracking the stack
            int k = depth - 1;
            while(k >= 0 && ++digits[static_cast<std::size_t>(k)] == d) {
                digits[static_cast<std::size_t>(k)] = 0;
                --k;
            }
            if(k < 0) break;
            level = k;
        }
    }

    template<typename Scalar>
    void check_table_capacity(int local_dim, int num_sites, std::uint64_t limit, const char *who) {
        if(num_sites > 63 || ipow(static_cast<std::uint64_t>(local_dim), num_sites) > limit)
            throw CapacityError(std::string(who) + ": configuration count exceeds the size guard");
    }
} // namespace detail

/// Dense contraction; weight of each configuration is the ordered matrix product.
template<typename Scalar>
[[nodiscard]] ProbabilityTable<Scalar> contract_to_table(const StochasticMps<Scalar> &mps) {
    detail::check_table_capacity<Scalar>(mps.local_dim(), mps.num_sites(), kMaxTableSize, "contract_to_table");
    const auto     count = static_cast<Index>(ipow(static_cast<std::uint64_t>(mps.local_dim()), mps.num_sites()));
    Vector<Scalar> weights(count);
    detail::enumerate_block(mps, 0, mps.num_sites(), RowVector<Scalar>(RowVector<Scalar>::Ones(1)),
                            [&](Index c, const RowVector<Scalar> &v) { weights[c] = v[0]; });
    const bool normalized = std::abs(weights.sum() - Scalar(1)) <= Scalar(tol::identity);
    return ProbabilityTable<Scalar>(mps.local_dim(), mps.num_sites(), std::move(weights), normalized);
}

/// Block size guard for factorize_at_cut (configurations per side).
inline constexpr std::uint64_t kMaxBlockSize = std::uint64_t{1} << 22;

template<typename Scalar>
[[nodiscard]] BipartiteFactorization<Scalar> factorize_at_cut(const StochasticMps<Scalar> &mps, int cut) {
    const int n = mps.num_sites();
    if(cut < 1 || cut > n - 1) throw ArgumentError("factorize_at_cut: cut must lie in 1..N-1");
    const int d = mps.local_dim();
    detail::check_table_capacity<Scalar>(d, cut, kMaxBlockSize, "factorize_at_cut");
    detail::check_table_capacity<Scalar>(d, n - cut, kMaxBlockSize, "factorize_at_cut");

    BipartiteFactorization<Scalar> f;
    f.cut       = cut;
    f.num_sites = n;
    f.local_dim = d;
    const Index bond = mps.bond_dim(cut);
    f.left.resize(static_cast<Index>(ipow(static_cast<std::uint64_t>(d), cut)), bond);
    detail::enumerate_block(mps, 0, cut, RowVector<Scalar>(RowVector<Scalar>::Ones(1)),
                            [&](Index c, const RowVector<Scalar> &v) { f.left.row(c) = v; });

    // Right block: contract from the right by walking the transposed chain.
    const int right_sites = n - cut;
    f.right.resize(static_cast<Index>(ipow(static_cast<std::uint64_t>(d), right_sites)), bond);
    std::vector<RowVector<Scalar>> stack(static_cast<std::size_t>(right_sites + 1));
    stack[0] = RowVector<Scalar>::Ones(1);
    std::vector<int> digits(static_cast<std::size_t>(right_sites), 0);
    // Digits here run from the last site backwards; map to the forward index on emit.
    int         level = 0;
    while(true) {
        while(level < right_sites) {
            const auto s    = static_cast<std::size_t>(level);
            const int  site = n - 1 - level;
            stack[s + 1]    = (mps.matrix(site, digits[s]) * stack[s].transpose()).transpose();
            ++level;
        }
        Index forward = 0, place = 1;
        for(int j = 0; j < right_sites; ++j) {
            forward += digits[static_cast<std::size_t>(j)] * place; // digit j belongs to site n-1-j
            place *= d;
        }
        f.right.row(forward) = stack[static_cast<std::size_t>(right_sites)];
        int k = right_sites - 1;
        while(k >= 0 && ++digits[static_cast<std::size_t>(k)] == d) {
            digits[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if(k < 0) break;
        level = k;
    }
    return f;
}

} // namespace smps
