#pragma once

#include "smps/errors.hpp"
#include "smps/stochastic_mps.hpp"
#include "smps/types.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <vector>

namespace smps {

/// C = Σ_i B_i at one site.
template<typename Scalar>
[[nodiscard]] Matrix<Scalar> transfer_matrix(const StochasticMps<Scalar> &mps, int site) {
    if(site < 0 || site >= mps.num_sites()) throw ArgumentError("transfer_matrix: site out of range");
    const auto     mats = mps.site(site);
    Matrix<Scalar> c    = mats.front();
    for(std::size_t i = 1; i < mats.size(); ++i) c += mats[i];
    return c;
}

/**
 * Transfer-matrix environments of every bond.
 *
 * left[b] = C^0 ... C^{b-1} (a row vector over bond b), right[b] = C^b ... C^{N-1}
 * (a column vector over bond b). left[0] and right[N] are the scalar 1.
 */
template<typename Scalar>
struct Environments {
    std::vector<RowVector<Scalar>> left;
    std::vector<Vector<Scalar>>    right;
};

template<typename Scalar>
[[nodiscard]] Environments<Scalar> environments(const StochasticMps<Scalar> &mps) {
    const int            n = mps.num_sites();
    Environments<Scalar> env;
    env.left.resize(static_cast<std::size_t>(n + 1));
    env.right.resize(static_cast<std::size_t>(n + 1));
    env.left.front() = RowVector<Scalar>::Ones(1);
    env.right.back() = Vector<Scalar>::Ones(1);
    for(int k = 0; k < n; ++k) {
        const auto s     = static_cast<std::size_t>(k);
        env.left[s + 1]  = env.left[s] * transfer_matrix(mps, k);
    }
    for(int k = n - 1; k >= 0; --k) {
        const auto s  = static_cast<std::size_t>(k);
        env.right[s]  = transfer_matrix(mps, k) * env.right[s + 1];
    }
    return env;
}

/// Single-site marginals: row k holds P(i_k = i) for i = 0..d-1 (requires a normalized MPS).
template<typename Scalar>
[[nodiscard]] Matrix<Scalar> site_marginals(const StochasticMps<Scalar> &mps) {
    if(!mps.is_normalized()) throw PreconditionError("site_marginals: MPS must be normalized");
    const auto     env = environments(mps);
    Matrix<Scalar> out(mps.num_sites(), mps.local_dim());
    for(int k = 0; k < mps.num_sites(); ++k) {
        const auto s = static_cast<std::size_t>(k);
        for(int i = 0; i < mps.local_dim(); ++i) out(k, i) = (env.left[s] * mps.matrix(k, i) * env.right[s + 1])(0, 0);
    }
    return out;
}

/// Probability distribution over the bond index at one cut, sorted descending.
template<typename Scalar = double>
struct CutSpectrum {
    int                cut = 0;          // sites in the left block
    Vector<Scalar>     probabilities;    // p_λ, descending
    std::vector<Index> bond_index;       // original bond index of each p_λ
    Index              source_dim = 0;   // bond dimension before sorting/pruning
};

namespace detail {
    // Indices sorted by descending weight; ties keep original order.
    template<typename Scalar>
    std::vector<Index> descending_order(const Vector<Scalar> &w) {
        std::vector<Index> order(static_cast<std::size_t>(w.size()));
        std::iota(order.begin(), order.end(), Index{0});
        std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return w[a] > w[b]; });
        return order;
    }

    template<typename Scalar>
    void require_cut(const StochasticMps<Scalar> &mps, int cut, const char *who) {
        if(cut < 1 || cut > mps.num_sites() - 1) throw ArgumentError(std::string(who) + ": cut must lie in 1..N-1");
    }
} // namespace detail

template<typename Scalar>
[[nodiscard]] CutSpectrum<Scalar> cut_spectrum(const StochasticMps<Scalar> &mps, int cut) {
    detail::require_cut(mps, cut, "cut_spectrum");
    if(!mps.is_normalized()) throw PreconditionError("cut_spectrum: MPS must be normalized");
    const auto           env = environments(mps);
    const auto           c   = static_cast<std::size_t>(cut);
    const Vector<Scalar> raw = env.left[c].transpose().cwiseProduct(env.right[c]);

    CutSpectrum<Scalar> spec;
    spec.cut        = cut;
    spec.source_dim = raw.size();
    spec.bond_index = detail::descending_order(raw);
    spec.probabilities.resize(raw.size());
    for(Index j = 0; j < raw.size(); ++j) spec.probabilities[j] = raw[spec.bond_index[static_cast<std::size_t>(j)]];
    return spec;
}

/**
 * Source distribution plus left/right conditional channels at one cut.
 *
 * Column j of `left_channel` is P_A(· | λ_j) over left-block configurations;
 * column j of `right_channel` is P_B(· | λ_j). Zero-mass bond indices are
 * dropped, so `spectrum.probabilities` only holds retained λ.
 */
template<typename Scalar = double>
struct ChannelPair {
    CutSpectrum<Scalar> spectrum;
    Matrix<Scalar>      left_channel;
    Matrix<Scalar>      right_channel;

    [[nodiscard]] Scalar joint(Index left_config, Index right_config) const {
        Scalar s(0);
        for(Index j = 0; j < spectrum.probabilities.size(); ++j)
            s += left_channel(left_config, j) * spectrum.probabilities[j] * right_channel(right_config, j);
        return s;
    }

    /// Σ_λ P_A(x_A|λ) p_λ P_B(x_B|λ) as a flat table, left block most significant.
    [[nodiscard]] Vector<Scalar> joint_weights() const {
        const Matrix<Scalar> j = left_channel * spectrum.probabilities.asDiagonal() * right_channel.transpose();
        Vector<Scalar>       flat(j.size());
        Eigen::Map<Matrix<Scalar>>(flat.data(), j.rows(), j.cols()) = j; // row-major: x_A outer
        return flat;
    }
};

template<typename Scalar>
[[nodiscard]] ChannelPair<Scalar> channel_decomposition(const StochasticMps<Scalar> &mps, int cut) {
    detail::require_cut(mps, cut, "channel_decomposition");
    if(!mps.is_normalized()) throw PreconditionError("channel_decomposition: MPS must be normalized");
    const auto fac = factorize_at_cut(mps, cut);
    const auto env = environments(mps);
    const auto c   = static_cast<std::size_t>(cut);
    const auto &l  = env.left[c];
    const auto &r  = env.right[c];
    const auto full = cut_spectrum(mps, cut);

    std::vector<Index> kept;
    for(std::size_t j = 0; j < full.bond_index.size(); ++j)
        if(full.probabilities[static_cast<Index>(j)] > Scalar(0)) kept.push_back(static_cast<Index>(j));
    if(kept.empty()) throw DegenerateInputError("channel_decomposition: all bond indices carry zero mass");

    ChannelPair<Scalar> out;
    out.spectrum.cut        = cut;
    out.spectrum.source_dim = full.source_dim;
    out.spectrum.probabilities.resize(static_cast<Index>(kept.size()));
    out.left_channel.resize(fac.left.rows(), static_cast<Index>(kept.size()));
    out.right_channel.resize(fac.right.rows(), static_cast<Index>(kept.size()));
    for(std::size_t j = 0; j < kept.size(); ++j) {
        const auto  jj  = static_cast<Index>(j);
        const Index lam = full.bond_index[static_cast<std::size_t>(kept[j])];
        out.spectrum.bond_index.push_back(lam);
        out.spectrum.probabilities[jj] = full.probabilities[kept[j]];
        out.left_channel.col(jj)       = fac.left.col(lam) / l[lam];
        out.right_channel.col(jj)      = fac.right.col(lam) / r[lam];
    }
    return out;
}

/**
 * Normal form A^0 P^1 A^1 P^2 ... P^{N-1} A^{N-1}.
 *
 * `bonds[b-1]` holds the diagonal of P^b for internal bonds b = 1..N-1, sorted
 * descending. With C^k = Σ_i A^k_i and P^0 = 1, every column of P^{k} C^k
 * and every row of C^k P^{k+1} sums to one.
 */
template<typename Scalar = double>
struct NaturalForm {
    int                                      local_dim = 2;
    std::vector<std::vector<Matrix<Scalar>>> sites;
    std::vector<Vector<Scalar>>              bonds;

    [[nodiscard]] int num_sites() const { return static_cast<int>(sites.size()); }

    [[nodiscard]] Matrix<Scalar> transfer(int k) const {
        const auto    &st = sites.at(static_cast<std::size_t>(k));
        Matrix<Scalar> c  = st.front();
        for(std::size_t i = 1; i < st.size(); ++i) c += st[i];
        return c;
    }

    /// Diagonal of P^b, with P^0 = P^N = (1).
    [[nodiscard]] Vector<Scalar> bond(int b) const {
        if(b == 0 || b == num_sites()) return Vector<Scalar>::Ones(1);
        return bonds.at(static_cast<std::size_t>(b - 1));
    }

    /// Ordinary MPS with each P^{k+1} absorbed into site k; flagged normalized when it contracts to 1.
    [[nodiscard]] StochasticMps<Scalar> to_mps() const {
        auto out = sites;
        for(int k = 0; k + 1 < num_sites(); ++k)
            for(auto &m : out[static_cast<std::size_t>(k)]) m = (m * bond(k + 1).asDiagonal()).eval();
        StochasticMps<Scalar> raw(local_dim, out, false);
        if(std::abs(raw.total_weight() - Scalar(1)) > Scalar(tol::identity)) return raw;
        return StochasticMps<Scalar>(local_dim, std::move(out), true);
    }
};

template<typename Scalar>
[[nodiscard]] NaturalForm<Scalar> to_natural_form(const StochasticMps<Scalar> &mps) {
    if(!mps.is_normalized()) throw PreconditionError("to_natural_form: MPS must be normalized");
    const int  n   = mps.num_sites();
    const auto env = environments(mps);

    // Retained bond indices per bond (0..N) in descending-probability order.
    std::vector<std::vector<Index>> keep(static_cast<std::size_t>(n + 1));
    keep.front() = {0};
    keep.back()  = {0};
    NaturalForm<Scalar> nf;
    nf.local_dim = mps.local_dim();
    for(int b = 1; b < n; ++b) {
        const auto           s   = static_cast<std::size_t>(b);
        const Vector<Scalar> raw = env.left[s].transpose().cwiseProduct(env.right[s]);
        for(Index j : detail::descending_order(raw))
            if(raw[j] > Scalar(0)) keep[s].push_back(j);
        if(keep[s].empty()) throw DegenerateInputError("to_natural_form: bond carries no probability mass");
        Vector<Scalar> p(static_cast<Index>(keep[s].size()));
        for(std::size_t j = 0; j < keep[s].size(); ++j) p[static_cast<Index>(j)] = raw[keep[s][j]];
        nf.bonds.push_back(std::move(p));
    }

    for(int k = 0; k < n; ++k) {
        const auto &rows  = keep[static_cast<std::size_t>(k)];
        const auto &cols  = keep[static_cast<std::size_t>(k + 1)];
        const auto &r_env = env.right[static_cast<std::size_t>(k)];
        const auto &l_env = env.left[static_cast<std::size_t>(k + 1)];
        std::vector<Matrix<Scalar>> st;
        for(const auto &b : mps.site(k)) {
            Matrix<Scalar> a(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
            for(std::size_t i = 0; i < rows.size(); ++i)
                for(std::size_t j = 0; j < cols.size(); ++j)
                    a(static_cast<Index>(i), static_cast<Index>(j)) =
                        b(rows[i], cols[j]) / (r_env[rows[i]] * l_env[cols[j]]);
            assert((a.array() >= Scalar(0)).all());
            st.push_back(std::move(a));
        }
        nf.sites.push_back(std::move(st));
    }
    return nf;
}

template<typename Scalar = double>
struct TruncationResult {
    StochasticMps<Scalar> mps;
    Scalar                error_bound = 0; // 2 Σ_k ε_k
    std::vector<Scalar>   tails;           // ε_k for internal bonds k = 1..N-1
};

/// Keep the `bond_cap` largest p_λ at every bond and renormalize.
template<typename Scalar>
[[nodiscard]] TruncationResult<Scalar> truncate(const NaturalForm<Scalar> &nf, Index bond_cap) {
    if(bond_cap < 1) throw ArgumentError("truncate: bond cap must be >= 1");
    const int          n = nf.num_sites();
    std::vector<Index> kept(static_cast<std::size_t>(n + 1), 1);
    std::vector<Scalar> tails;
    Scalar              total_tail(0);
    for(int b = 1; b < n; ++b) {
        const auto &p = nf.bonds[static_cast<std::size_t>(b - 1)];
        const Index m = std::min<Index>(bond_cap, p.size());
        kept[static_cast<std::size_t>(b)] = m;
        const Scalar eps = p.tail(p.size() - m).sum();
        tails.push_back(eps);
        total_tail += eps;
    }

    std::vector<std::vector<Matrix<Scalar>>> sites;
    for(int k = 0; k < n; ++k) {
        const Index rows = kept[static_cast<std::size_t>(k)];
        const Index cols = kept[static_cast<std::size_t>(k + 1)];
        const Vector<Scalar> pk = nf.bond(k + 1).head(cols);
        std::vector<Matrix<Scalar>> st;
        for(const auto &a : nf.sites[static_cast<std::size_t>(k)])
            st.push_back(a.topLeftCorner(rows, cols) * pk.asDiagonal());
        sites.push_back(std::move(st));
    }
    StochasticMps<Scalar> raw(nf.local_dim, std::move(sites), false);
    if(raw.total_weight() > Scalar(0))
        return TruncationResult<Scalar>{raw.normalized(), Scalar(2) * total_tail, std::move(tails)};

    // Kept indices carry no joint mass, so Σε ≥ 1 and any distribution meets the bound;
    // fall back to the product of site marginals (bond dimension 1).
    const Matrix<Scalar> q = site_marginals(nf.to_mps());
    std::vector<std::vector<Matrix<Scalar>>> product(static_cast<std::size_t>(n));
    for(int k = 0; k < n; ++k)
        for(int i = 0; i < nf.local_dim; ++i) product[static_cast<std::size_t>(k)].push_back(Matrix<Scalar>::Constant(1, 1, q(k, i)));
    return TruncationResult<Scalar>{StochasticMps<Scalar>(nf.local_dim, std::move(product), false).normalized(),
                                    Scalar(2) * total_tail, std::move(tails)};
}

} // namespace smps
