#include "smps/oracle.hpp"

#include "smps/errors.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <string>

namespace smps::oracle {

Eigen::SparseMatrix<double> MarkovGenerator::sparse() const {
    Eigen::SparseMatrix<double> q(num_states, num_states);
    q.setFromTriplets(triplets.begin(), triplets.end());
    return q;
}

Eigen::MatrixXd MarkovGenerator::dense() const { return Eigen::MatrixXd(sparse()); }

Eigen::VectorXd MarkovGenerator::apply(const Eigen::VectorXd &p) const { return sparse() * p; }

MarkovGenerator asep_generator(const AsepParams &params) {
    validate(params);
    const int n = params.num_sites;
    if(n > kMaxGeneratorSites) throw CapacityError("asep_generator: chain exceeds " + std::to_string(kMaxGeneratorSites) + " sites");

    MarkovGenerator gen;
    gen.num_sites  = n;
    gen.num_states = Index{1} << n;
    // Site k occupies bit n-1-k.
    const auto bit = [n](int k) { return Index{1} << (n - 1 - k); };
    const auto add = [&gen](Index from, Index to, double rate) {
        gen.triplets.emplace_back(to, from, rate);
        gen.triplets.emplace_back(from, from, -rate);
    };
    for(Index c = 0; c < gen.num_states; ++c) {
        if(!(c & bit(0))) add(c, c | bit(0), params.alpha);
        if(c & bit(n - 1)) add(c, c & ~bit(n - 1), params.beta);
        for(int k = 0; k + 1 < n; ++k)
            if((c & bit(k)) && !(c & bit(k + 1))) add(c, (c & ~bit(k)) | bit(k + 1), 1.0);
    }
    return gen;
}

ProbabilityTable<double> steady_state(const MarkovGenerator &gen) {
    // Replace the last balance equation by Σ p = 1.
    const Index     size = gen.num_states;
    Eigen::VectorXd rhs  = Eigen::VectorXd::Zero(size);
    rhs[size - 1]        = 1.0;
    Eigen::VectorXd p;
    if(gen.num_sites <= kDenseSolveSites) {
        Eigen::MatrixXd q = gen.dense();
        q.row(size - 1).setOnes();
        p = q.partialPivLu().solve(rhs);
    } else {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(gen.triplets.size() + static_cast<std::size_t>(size));
        for(const auto &t : gen.triplets)
            if(t.row() != size - 1) trips.push_back(t);
        for(Index j = 0; j < size; ++j) trips.emplace_back(size - 1, j, 1.0);
        Eigen::SparseMatrix<double> q(size, size);
        q.setFromTriplets(trips.begin(), trips.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(q);
        if(lu.info() != Eigen::Success) throw NumericalError("steady_state: sparse factorization failed", INFINITY);
        p = lu.solve(rhs);
    }
    // Round-off can leave tiny negative entries.
    p = p.cwiseMax(0.0);
    p /= p.sum();
    const double residual = gen.apply(p).cwiseAbs().maxCoeff();
    if(!(residual <= kResidualTarget))
        throw NumericalError("steady_state: residual " + std::to_string(residual) + " above target", residual);
    return ProbabilityTable<double>(2, gen.num_sites, std::move(p), true);
}

ProbabilityTable<double> asep_steady_state(const AsepParams &params) { return steady_state(asep_generator(params)); }

std::pair<double, double> smallest_singular_values(const MarkovGenerator &gen) {
    const Eigen::VectorXd sv = gen.dense().jacobiSvd().singularValues(); // descending
    const Index           m  = sv.size();
    if(m < 2) return {sv[0], sv[0]};
    return {sv[m - 1], sv[m - 2]};
}

double direct_mutual_information(const ProbabilityTable<double> &table, int cut) {
    const int n = table.num_sites();
    if(cut < 1 || cut > n - 1) throw ArgumentError("direct_mutual_information: cut must lie in 1..N-1");
    const Index nb = static_cast<Index>(ipow(static_cast<std::uint64_t>(table.local_dim()), n - cut));
    const Index na = table.size() / nb;
    Eigen::VectorXd pa = Eigen::VectorXd::Zero(na), pb = Eigen::VectorXd::Zero(nb);
    for(Index i = 0; i < na; ++i)
        for(Index j = 0; j < nb; ++j) {
            pa[i] += table[i * nb + j];
            pb[j] += table[i * nb + j];
        }
    double mi = 0.0;
    for(Index i = 0; i < na; ++i)
        for(Index j = 0; j < nb; ++j) {
            const double p = table[i * nb + j];
            if(p > 0.0) mi += p * std::log2(p / (pa[i] * pb[j]));
        }
    return mi;
}

Eigen::VectorXd site_densities(const ProbabilityTable<double> &table) {
    Eigen::VectorXd rho = Eigen::VectorXd::Zero(table.num_sites());
    for(Index c = 0; c < table.size(); ++c)
        for(int k = 0; k < table.num_sites(); ++k)
            if(table.symbol(c, k) == 1) rho[k] += table[c];
    return rho;
}

} // namespace smps::oracle
