#pragma once

#include "smps/canonical.hpp"
#include "smps/errors.hpp"
#include "smps/probability_table.hpp"
#include "smps/stochastic_mps.hpp"
#include "smps/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace smps {

namespace detail {
    // -Σ p log2 p over positive entries, no validation.
    template<typename Derived>
    typename Derived::Scalar entropy_terms(const Eigen::DenseBase<Derived> &p) {
        using Scalar = typename Derived::Scalar;
        Scalar h(0);
        for(Index i = 0; i < p.size(); ++i) {
            const Scalar x = p.derived().coeff(i);
            if(x > Scalar(0)) h -= x * std::log2(x);
        }
        return h;
    }

    // Rows of the left factor processed per dense block when forming p(x_A, x_B).
    inline constexpr Index kJointBlockRows = 256;
} // namespace detail

/// Shannon entropy in bits, with 0 log 0 = 0.
template<typename Derived>
[[nodiscard]] typename Derived::Scalar shannon_entropy(const Eigen::DenseBase<Derived> &p) {
    using Scalar = typename Derived::Scalar;
    if((p.derived().array() < Scalar(0)).any()) throw ArgumentError("shannon_entropy: negative probability");
    if(std::abs(p.derived().sum() - Scalar(1)) > Scalar(tol::distribution))
        throw ArgumentError("shannon_entropy: probabilities do not sum to 1");
    return detail::entropy_terms(p);
}

template<typename Scalar>
[[nodiscard]] Scalar shannon_entropy(std::span<const Scalar> p) {
    return shannon_entropy(Eigen::Map<const Vector<Scalar>>(p.data(), static_cast<Index>(p.size())));
}

/// Both sides of ‖p_AB − p_A p_B‖₁² ≤ 2 ln 2 · I(A:B).
template<typename Scalar = double>
struct PinskerGap {
    Scalar lhs = 0;
    Scalar rhs = 0;
};

namespace detail {
    template<typename Scalar>
    struct JointStats {
        Scalar h_a = 0, h_b = 0, h_ab = 0, l1_product_gap = 0;
    };

    template<typename Scalar>
    JointStats<Scalar> joint_stats(const BipartiteFactorization<Scalar> &f, bool want_gap) {
        if(std::abs(f.total() - Scalar(1)) > Scalar(tol::identity))
            throw PreconditionError("mutual_information: joint distribution is not normalized");
        const Vector<Scalar> pa = f.left_marginal();
        const Vector<Scalar> pb = f.right_marginal();
        JointStats<Scalar>   s;
        s.h_a = entropy_terms(pa);
        s.h_b = entropy_terms(pb);
        for(Index r0 = 0; r0 < f.left.rows(); r0 += kJointBlockRows) {
            const Index          m     = std::min(kJointBlockRows, f.left.rows() - r0);
            const Matrix<Scalar> block = f.left.middleRows(r0, m) * f.right.transpose();
            s.h_ab += entropy_terms(block);
            if(want_gap) s.l1_product_gap += (block - pa.segment(r0, m) * pb.transpose()).cwiseAbs().sum();
        }
        return s;
    }

    template<typename Scalar>
    JointStats<Scalar> joint_stats(const ProbabilityTable<Scalar> &t, int cut, bool want_gap) {
        if(cut < 1 || cut > t.num_sites() - 1) throw ArgumentError("mutual_information: cut must lie in 1..N-1");
        if(!t.is_normalized()) throw PreconditionError("mutual_information: table must be normalized");
        const auto nb = static_cast<Index>(ipow(static_cast<std::uint64_t>(t.local_dim()), t.num_sites() - cut));
        const auto na = t.size() / nb;
        const Eigen::Map<const Matrix<Scalar>> joint(t.weights().data(), na, nb);
        const Vector<Scalar>                   pa = joint.rowwise().sum();
        const Vector<Scalar>                   pb = joint.colwise().sum().transpose();
        JointStats<Scalar>                     s;
        s.h_a  = entropy_terms(pa);
        s.h_b  = entropy_terms(pb);
        s.h_ab = entropy_terms(t.weights());
        if(want_gap) s.l1_product_gap = (joint - pa * pb.transpose()).cwiseAbs().sum();
        return s;
    }

    template<typename Scalar>
    Scalar mi_from(const JointStats<Scalar> &s) {
        return std::max(Scalar(0), s.h_a + s.h_b - s.h_ab);
    }

    template<typename Scalar>
    PinskerGap<Scalar> pinsker_from(const JointStats<Scalar> &s) {
        return {s.l1_product_gap * s.l1_product_gap, Scalar(2) * std::numbers::ln2_v<Scalar> * mi_from(s)};
    }
} // namespace detail

/// I(A:B) in bits between the two blocks of a factorized joint distribution.
template<typename Scalar>
[[nodiscard]] Scalar mutual_information(const BipartiteFactorization<Scalar> &joint) {
    return detail::mi_from(detail::joint_stats(joint, false));
}

/// I(A:B) in bits between sites [0, cut) and [cut, N) of a dense table.
template<typename Scalar>
[[nodiscard]] Scalar mutual_information(const ProbabilityTable<Scalar> &joint, int cut) {
    return detail::mi_from(detail::joint_stats(joint, cut, false));
}

template<typename Scalar>
[[nodiscard]] PinskerGap<Scalar> pinsker_gap(const BipartiteFactorization<Scalar> &joint) {
    return detail::pinsker_from(detail::joint_stats(joint, true));
}

template<typename Scalar>
[[nodiscard]] PinskerGap<Scalar> pinsker_gap(const ProbabilityTable<Scalar> &joint, int cut) {
    return detail::pinsker_from(detail::joint_stats(joint, cut, true));
}

/// A representation offered as an entropy-cost witness.
template<typename Scalar = double>
struct LabeledMps {
    std::string           label;
    StochasticMps<Scalar> mps;
};

/// Lower bound I(A:B) and best available upper bound S({p_λ}) on the entropy cost at one cut.
template<typename Scalar = double>
struct EntropyCostBracket {
    int         cut = 0;
    Scalar      lower_bound = 0;
    Scalar      upper_bound = 0;
    std::string label; // candidate achieving the upper bound
};

/// Dense tables are compared for chains up to this many configurations.
inline constexpr std::uint64_t kDenseConsistencyLimit = std::uint64_t{1} << 12;

/**
 * Bracket the entropy cost of `mps` at `cut`.
 *
 * The lower bound is the mutual information of `mps`; the upper bound is the
 * smallest cut-spectrum entropy among `candidates` (or of `mps` itself when no
 * candidates are given). Every candidate must describe the same distribution:
 * dense tables are compared on small chains, single-site marginals otherwise.
 */
template<typename Scalar>
[[nodiscard]] EntropyCostBracket<Scalar> entropy_cost_bracket(const StochasticMps<Scalar>       &mps, int cut,
                                                              std::span<const LabeledMps<Scalar>> candidates) {
    detail::require_cut(mps, cut, "entropy_cost_bracket");
    if(!mps.is_normalized()) throw PreconditionError("entropy_cost_bracket: MPS must be normalized");

    EntropyCostBracket<Scalar> out;
    out.cut         = cut;
    out.lower_bound = mutual_information(factorize_at_cut(mps, cut));

    const std::vector<LabeledMps<Scalar>> self{{"input", mps}};
    if(candidates.empty()) candidates = self;

    const bool dense = ipow(static_cast<std::uint64_t>(mps.local_dim()), mps.num_sites()) <= kDenseConsistencyLimit;
    const auto reference_table     = dense ? std::optional(contract_to_table(mps)) : std::nullopt;
    const auto reference_marginals = site_marginals(mps);

    out.upper_bound = std::numeric_limits<Scalar>::infinity();
    for(const auto &cand : candidates) {
        const auto &c = cand.mps;
        if(c.num_sites() != mps.num_sites() || c.local_dim() != mps.local_dim() || !c.is_normalized())
            throw InconsistencyError("entropy_cost_bracket: candidate '" + cand.label + "' has a different shape");
        const Scalar mismatch = dense ? l1_distance(*reference_table, contract_to_table(c))
                                      : (site_marginals(c) - reference_marginals).cwiseAbs().maxCoeff();
        if(mismatch > Scalar(tol::consistency))
            throw InconsistencyError("entropy_cost_bracket: candidate '" + cand.label +
                                     "' describes a different distribution");
        const Scalar s = shannon_entropy(cut_spectrum(c, cut).probabilities);
        if(s < out.upper_bound) {
            out.upper_bound = s;
            out.label       = cand.label;
        }
    }
    return out;
}

} // namespace smps
