#include "smps/models.hpp"

#include "smps/errors.hpp"

#include <cmath>
#include <string>

namespace smps {

namespace {
    constexpr double kLineTolerance = 1e-12;

    using SiteTensor = StochasticMps<double>::SiteTensor;
    using Mat        = Matrix<double>;

    double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }
} // namespace

StochasticMps<double> ising_mps(const IsingParams &params) {
    if(!(params.beta >= 0.0) || !std::isfinite(params.beta)) throw ArgumentError("ising_mps: beta must be finite and >= 0");
    if(params.num_sites < 2) throw ArgumentError("ising_mps: need at least two sites");
    const double beta = params.beta;
    // exp(-β s s') = Σ_λ X[s,λ] Y[λ,s'] with nonnegative factors (common e^{2β} scale dropped).
    Mat x(2, 2), y(2, 2);
    x << 1.0 - std::exp(-4.0 * beta), std::exp(-3.0 * beta), 0.0, std::exp(-beta);
    y << 0.0, std::exp(-beta), 1.0, std::exp(-2.0 * beta);

    const int               n = params.num_sites;
    std::vector<SiteTensor> sites(static_cast<std::size_t>(n));
    for(int s = 0; s < 2; ++s) {
        sites.front().push_back(x.row(s));
        sites.back().push_back(y.col(s));
        for(int k = 1; k + 1 < n; ++k) sites[static_cast<std::size_t>(k)].push_back(y.col(s) * x.row(s));
    }
    return StochasticMps<double>(2, std::move(sites), false).normalized();
}

double ising_entropy_cost_exact(double beta) {
    if(!(beta >= 0.0)) throw ArgumentError("ising_entropy_cost_exact: beta must be >= 0");
    const double t     = std::exp(-2.0 * beta);
    const double cosh_ = 0.5 * (1.0 + t); // e^{-β} cosh β
    const double sinh_ = 0.5 * (1.0 - t); // e^{-β} sinh β
    return 0.0 - (xlog2x(cosh_) + xlog2x(sinh_));
}

void validate(const AsepParams &params) {
    if(!(params.alpha > 0.0 && params.alpha <= 1.0)) throw ArgumentError("AsepParams: alpha must lie in (0, 1]");
    if(!(params.beta > 0.0 && params.beta <= 1.0)) throw ArgumentError("AsepParams: beta must lie in (0, 1]");
    if(params.num_sites < 1) throw ArgumentError("AsepParams: need at least one site");
}

std::string_view to_string(AsepRegime regime) {
    switch(regime) {
        case AsepRegime::I: return "I";
        case AsepRegime::II: return "II";
        case AsepRegime::III: return "III";
        case AsepRegime::MeanField: return "MF";
    }
    return "?";
}

AsepRegime default_regime(const AsepParams &params) {
    validate(params);
    const double s = params.alpha + params.beta;
    if(std::abs(s - 1.0) <= kLineTolerance) return AsepRegime::MeanField;
    if(s < 1.0) return params.beta <= params.alpha ? AsepRegime::I : AsepRegime::II;
    return AsepRegime::III;
}

std::vector<AsepRegime> admissible_regimes(const AsepParams &params) {
    validate(params);
    const double            s = params.alpha + params.beta;
    std::vector<AsepRegime> out;
    if(s <= 1.0 + kLineTolerance) {
        out.push_back(AsepRegime::I);
        out.push_back(AsepRegime::II);
    }
    if(s >= 1.0 - kLineTolerance) out.push_back(AsepRegime::III);
    if(std::abs(s - 1.0) <= kLineTolerance) out.push_back(AsepRegime::MeanField);
    return out;
}

AsepRepresentation asep_representation(const AsepParams &params) { return asep_representation(params, default_regime(params)); }

AsepRepresentation asep_representation(const AsepParams &params, AsepRegime regime) {
    validate(params);
    const double al = params.alpha, be = params.beta, s = al + be;
    AsepRepresentation rep;
    rep.regime = regime;
    rep.params = params;
    const auto wrong_side = [&](const char *what) {
        throw ArgumentError(std::string("asep_representation: regime ") + std::string(to_string(regime)) + " requires " +
                            what);
    };

    switch(regime) {
        case AsepRegime::MeanField: {
            if(std::abs(s - 1.0) > kLineTolerance) wrong_side("alpha + beta = 1");
            rep.corner_d = Eigen::MatrixXd::Constant(1, 1, 1.0 / be);
            rep.corner_e = Eigen::MatrixXd::Constant(1, 1, 1.0 / al);
            rep.w        = Eigen::RowVectorXd::Ones(1);
            rep.v        = Eigen::VectorXd::Ones(1);
            rep.d        = rep.corner_d;
            rep.e        = rep.corner_e;
            return rep;
        }
        case AsepRegime::I: {
            if(s > 1.0 + kLineTolerance) wrong_side("alpha + beta <= 1");
            rep.b        = std::sqrt(std::max(0.0, 1.0 - s));
            rep.corner_d = Eigen::MatrixXd(2, 2);
            rep.corner_d << 1.0 / be, 0.0, 0.0, 1.0;
            rep.corner_e = Eigen::MatrixXd(2, 2);
            rep.corner_e << 1.0 / (1.0 - be), 0.0, rep.b, 1.0 / al;
            rep.w = Eigen::RowVectorXd(2);
            rep.w << al * (1.0 - be), rep.b;
            rep.v = Eigen::VectorXd(2);
            rep.v << 1.0, 0.0;
            break;
        }
        case AsepRegime::II: {
            // Regime I with α ⇄ β, then D ↔ Eᵀ and w ↔ vᵀ.
            if(s > 1.0 + kLineTolerance) wrong_side("alpha + beta <= 1");
            rep.b        = std::sqrt(std::max(0.0, 1.0 - s));
            rep.corner_d = Eigen::MatrixXd(2, 2);
            rep.corner_d << 1.0 / (1.0 - al), rep.b, 0.0, 1.0 / be;
            rep.corner_e = Eigen::MatrixXd(2, 2);
            rep.corner_e << 1.0 / al, 0.0, 0.0, 1.0;
            rep.w = Eigen::RowVectorXd(2);
            rep.w << 1.0, 0.0;
            rep.v = Eigen::VectorXd(2);
            rep.v << be * (1.0 - al), rep.b;
            break;
        }
        case AsepRegime::III: {
            if(s < 1.0 - kLineTolerance) wrong_side("alpha + beta >= 1");
            rep.a        = std::sqrt(std::max(0.0, 1.0 / al + 1.0 / be - 1.0 / (al * be)));
            rep.corner_d = Eigen::MatrixXd(2, 2);
            rep.corner_d << 1.0 / be, rep.a, 0.0, 1.0;
            rep.corner_e = Eigen::MatrixXd(2, 2);
            rep.corner_e << 1.0 / al, 0.0, rep.a, 1.0;
            rep.w = Eigen::RowVectorXd(2);
            rep.w << 1.0, 0.0;
            rep.v = Eigen::VectorXd(2);
            rep.v << 1.0, 0.0;
            break;
        }
    }

    // Embed the corner into (N+1)-dimensional bidiagonal matrices.
    const Index dim = params.num_sites + 1;
    rep.d           = Eigen::MatrixXd::Zero(dim, dim);
    rep.e           = Eigen::MatrixXd::Zero(dim, dim);
    rep.d.topLeftCorner(2, 2) = rep.corner_d;
    rep.e.topLeftCorner(2, 2) = rep.corner_e;
    for(Index n = 2; n < dim; ++n) {
        rep.e(n, n)     = 1.0;
        rep.e(n, n - 1) = 1.0;
        rep.d(n, n)     = 1.0;
        rep.d(n - 1, n) = 1.0;
    }
    return rep;
}

AlgebraResiduals algebra_residuals(const AsepRepresentation &rep) {
    const auto       &a = rep.corner_d;
    const auto       &b = rep.corner_e;
    AlgebraResiduals  r;
    Eigen::MatrixXd   lowering = Eigen::MatrixXd::Zero(a.rows(), a.cols());
    // σ⁻σ⁺ = |1⟩⟨1| in the two-dimensional corner; the scalar representation has no such term.
    if(a.rows() == 2) lowering(1, 1) = 1.0;
    r.corner         = (a * b + lowering - a - b).cwiseAbs().maxCoeff();
    r.left_boundary  = (rep.w * b - rep.w / rep.params.alpha).cwiseAbs().maxCoeff();
    r.right_boundary = (a * rep.v - rep.v / rep.params.beta).cwiseAbs().maxCoeff();
    r.nonnegative    = (a.array() >= 0).all() && (b.array() >= 0).all() && (rep.w.array() >= 0).all() &&
                    (rep.v.array() >= 0).all() && (rep.d.array() >= 0).all() && (rep.e.array() >= 0).all();
    return r;
}

StochasticMps<double> asep_mps(const AsepRepresentation &rep) {
    const int   n   = rep.params.num_sites;
    const Index dim = rep.d.rows();
    RowVector<double> left  = RowVector<double>::Zero(dim);
    Vector<double>    right = Vector<double>::Zero(dim);
    left.head(rep.w.size())  = rep.w;
    right.head(rep.v.size()) = rep.v;
    const SiteTensor site{Mat(rep.e), Mat(rep.d)};
    std::vector<SiteTensor> sites(static_cast<std::size_t>(n), site);
    return StochasticMps<double>::with_boundaries(2, std::move(sites), left, right, false).normalized();
}

StochasticMps<double> asep_mps(const AsepParams &params) { return asep_mps(asep_representation(params)); }

StochasticMps<double> asep_scalar_mps(const AsepParams &params) {
    validate(params);
    if(std::abs(params.alpha + params.beta - 1.0) > kLineTolerance)
        throw ArgumentError("asep_scalar_mps: requires alpha + beta = 1");
    return asep_mps(asep_representation(params, AsepRegime::MeanField));
}

std::vector<LabeledMps<double>> asep_candidates(const AsepParams &params) {
    std::vector<LabeledMps<double>> out;
    for(const auto regime : admissible_regimes(params))
        out.push_back({std::string(to_string(regime)), asep_mps(asep_representation(params, regime))});
    return out;
}

} // namespace smps
