#pragma once

#include "smps/stochastic_mps.hpp"

#include <random>

namespace smps {

/// Shape of randomly drawn nonnegative MPS (used by property suites and `verify`).
struct RandomMpsOptions {
    int    min_sites     = 2;
    int    max_sites     = 6;
    int    local_dim     = 2;
    Index  max_bond      = 4;
    double zero_fraction = 0.2; // probability that an entry is exactly zero
};

/// Normalized MPS with independently drawn bond dimensions in 1..max_bond and uniform entries.
template<typename Scalar = double>
[[nodiscard]] StochasticMps<Scalar> random_stochastic_mps(std::mt19937_64 &rng, const RandomMpsOptions &opt = {}) {
    std::uniform_int_distribution<int>    sites_dist(opt.min_sites, opt.max_sites);
    std::uniform_int_distribution<Index>  bond_dist(1, opt.max_bond);
    std::uniform_real_distribution<double> entry(0.0, 1.0);
    std::bernoulli_distribution            zero(opt.zero_fraction);

    while(true) {
        const int          n = sites_dist(rng);
        std::vector<Index> bonds(static_cast<std::size_t>(n + 1), 1);
        for(int b = 1; b < n; ++b) bonds[static_cast<std::size_t>(b)] = bond_dist(rng);
        std::vector<typename StochasticMps<Scalar>::SiteTensor> sites;
        for(int k = 0; k < n; ++k) {
            typename StochasticMps<Scalar>::SiteTensor st;
            for(int i = 0; i < opt.local_dim; ++i) {
                Matrix<Scalar> m(bonds[static_cast<std::size_t>(k)], bonds[static_cast<std::size_t>(k + 1)]);
                for(Index r = 0; r < m.rows(); ++r)
                    for(Index c = 0; c < m.cols(); ++c) m(r, c) = zero(rng) ? Scalar(0) : Scalar(entry(rng));
                st.push_back(std::move(m));
            }
            sites.push_back(std::move(st));
        }
        StochasticMps<Scalar> raw(opt.local_dim, std::move(sites), false);
        if(raw.total_weight() > Scalar(0)) return raw.normalized();
    }
}

} // namespace smps
