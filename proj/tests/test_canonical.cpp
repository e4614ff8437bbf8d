#include "brute_force.hpp"

#include "smps/canonical.hpp"
#include "smps/infotheory.hpp"
#include "smps/models.hpp"
#include "smps/oracle.hpp"
#include "smps/random.hpp"

#include <gtest/gtest.h>

using namespace smps;
using smps::testing::product_mps;

namespace {
// e^{-1} cosh 1 and e^{-1} sinh 1
constexpr double kIsingP0 = 0.5676676416183064;
constexpr double kIsingP1 = 0.43233235838169365;
} // namespace

TEST(TransferMatrix, AsepSiteIsEPlusD) {
    const AsepParams p{0.3, 0.6, 5};
    const auto       rep = asep_representation(p);
    const auto       mps = asep_mps(rep);
    // Interior sites carry the normalization scale; compare directions.
    const Matrix<double> c      = transfer_matrix(mps, 2);
    const Matrix<double> expect = rep.e + rep.d;
    const double         scale  = c(0, 0) / expect(0, 0);
    EXPECT_LE((c - scale * expect).cwiseAbs().maxCoeff(), 1e-12 * c.maxCoeff());
}

TEST(TransferMatrix, ProductSumsToOne) {
    const auto mps = product_mps({{0.3, 0.7}, {0.9, 0.1}});
    EXPECT_DOUBLE_EQ(transfer_matrix(mps, 1)(0, 0), 1.0);
}

TEST(TransferMatrix, EntrywiseSum) {
    std::vector<StochasticMps<double>::SiteTensor> sites(2);
    Matrix<double>                                 a(1, 2), b(1, 2), c(2, 1), d(2, 1);
    a << 0.1, 0.2;
    b << 0.3, 0.4;
    c << 0.5, 0.6;
    d << 0.7, 0.8;
    sites[0] = {a, b};
    sites[1] = {c, d};
    const StochasticMps<double> mps(2, sites, false);
    EXPECT_LE((transfer_matrix(mps, 0) - (a + b)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LE((transfer_matrix(mps, 1) - (c + d)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(CutSpectrum, IsingTwoSites) {
    const auto spec = cut_spectrum(ising_mps({1.0, 2}), 1);
    ASSERT_EQ(spec.probabilities.size(), 2);
    EXPECT_NEAR(spec.probabilities[0], kIsingP0, 1e-12);
    EXPECT_NEAR(spec.probabilities[1], kIsingP1, 1e-12);
}

TEST(CutSpectrum, ProductIsSingleton) {
    const auto spec = cut_spectrum(product_mps({{0.3, 0.7}, {0.5, 0.5}}), 1);
    ASSERT_EQ(spec.probabilities.size(), 1);
    EXPECT_NEAR(spec.probabilities[0], 1.0, 1e-15);
}

TEST(CutSpectrum, AsepTwentySitesVanishesFromLambdaEleven) {
    const auto spec = cut_spectrum(asep_mps({0.3, 0.3, 20}), 10);
    ASSERT_EQ(spec.source_dim, 21);
    for(Index l = 11; l < 21; ++l) EXPECT_LE(spec.probabilities[l], 1e-12) << "lambda " << l;
    EXPECT_NEAR(spec.probabilities.sum(), 1.0, 1e-10);
}

TEST(CutSpectrum, RequiresNormalizedInput) {
    std::vector<StochasticMps<double>::SiteTensor> sites(2, {Matrix<double>::Constant(1, 1, 1.0), Matrix<double>::Constant(1, 1, 1.0)});
    const StochasticMps<double> raw(2, sites, false);
    EXPECT_THROW((void) cut_spectrum(raw, 1), PreconditionError);
}

TEST(CutSpectrum, SumsToOneAndSortedOnRandomCorpus) {
    std::mt19937_64 rng(17);
    for(int trial = 0; trial < 200; ++trial) {
        const auto mps = random_stochastic_mps(rng);
        for(int c = 1; c < mps.num_sites(); ++c) {
            const auto s = cut_spectrum(mps, c);
            EXPECT_NEAR(s.probabilities.sum(), 1.0, 1e-10);
            EXPECT_TRUE((s.probabilities.array() >= 0).all());
            for(Index j = 1; j < s.probabilities.size(); ++j) EXPECT_GE(s.probabilities[j - 1], s.probabilities[j]);
        }
    }
}

TEST(ChannelDecomposition, ProductGivesMarginals) {
    const auto ch = channel_decomposition(product_mps({{0.3, 0.7}, {0.2, 0.8}}), 1);
    ASSERT_EQ(ch.spectrum.probabilities.size(), 1);
    EXPECT_NEAR(ch.left_channel(1, 0), 0.7, 1e-15);
    EXPECT_NEAR(ch.right_channel(1, 0), 0.8, 1e-15);
}

TEST(ChannelDecomposition, IsingReconstruction) {
    const auto mps = ising_mps({1.0, 2});
    const auto ch  = channel_decomposition(mps, 1);
    EXPECT_LE((ch.joint_weights() - contract_to_table(mps).weights()).lpNorm<1>(), 1e-12);
}

TEST(ChannelDecomposition, IsingAtZeroTemperaturePrunesEmptySource) {
    const auto ch = channel_decomposition(ising_mps({0.0, 2}), 1);
    EXPECT_EQ(ch.spectrum.probabilities.size(), 1);
    EXPECT_EQ(ch.spectrum.source_dim, 2);
}

TEST(ChannelDecomposition, AsepMatchesOracle) {
    const AsepParams p{0.2, 0.7, 6};
    const auto       ch     = channel_decomposition(asep_mps(p), 3);
    const auto       oracle = oracle::asep_steady_state(p);
    EXPECT_LE((ch.joint_weights() - oracle.weights()).lpNorm<1>(), 1e-10);
    for(Index j = 0; j < ch.spectrum.probabilities.size(); ++j) {
        EXPECT_NEAR(ch.left_channel.col(j).sum(), 1.0, 1e-10);
        EXPECT_NEAR(ch.right_channel.col(j).sum(), 1.0, 1e-10);
    }
}

TEST(ChannelDecomposition, ReconstructsAllSmallInstances) {
    std::mt19937_64  rng(23);
    RandomMpsOptions opt;
    opt.max_sites = 12;
    for(int trial = 0; trial < 60; ++trial) {
        const auto mps   = random_stochastic_mps(rng, opt);
        const auto table = contract_to_table(mps);
        for(int c = 1; c < mps.num_sites(); ++c)
            EXPECT_LE((channel_decomposition(mps, c).joint_weights() - table.weights()).lpNorm<1>(), 1e-10);
    }
}

TEST(NaturalForm, ProductHasUnitBonds) {
    const auto nf = to_natural_form(product_mps({{0.3, 0.7}, {0.2, 0.8}, {0.5, 0.5}}));
    ASSERT_EQ(nf.bonds.size(), 2U);
    for(const auto &p : nf.bonds) {
        ASSERT_EQ(p.size(), 1);
        EXPECT_NEAR(p[0], 1.0, 1e-15);
    }
    EXPECT_NEAR(nf.sites[1][1](0, 0), 0.8, 1e-15);
}

TEST(NaturalForm, IsingBondHoldsClosedFormSpectrum) {
    const auto nf = to_natural_form(ising_mps({1.0, 2}));
    ASSERT_EQ(nf.bonds.size(), 1U);
    EXPECT_NEAR(nf.bonds[0][0], kIsingP0, 1e-12);
    EXPECT_NEAR(nf.bonds[0][1], kIsingP1, 1e-12);
}

TEST(NaturalForm, RandomCorpusInvariants) {
    std::mt19937_64 rng(29);
    RandomMpsOptions opt;
    opt.min_sites = 5;
    opt.max_sites = 5;
    opt.max_bond  = 3;
    for(int trial = 0; trial < 200; ++trial) {
        const auto mps = random_stochastic_mps(rng, opt);
        const auto nf  = to_natural_form(mps);
        const auto rec = nf.to_mps();
        ASSERT_TRUE(rec.is_normalized());
        EXPECT_LE(l1_distance(contract_to_table(mps), contract_to_table(rec)), 1e-10);
        for(int k = 0; k < nf.num_sites(); ++k) {
            for(const auto &a : nf.sites[static_cast<std::size_t>(k)]) EXPECT_TRUE((a.array() >= 0).all());
            const Matrix<double> c    = nf.transfer(k);
            const Vector<double> cols = (nf.bond(k).asDiagonal() * c).colwise().sum().transpose();
            const Vector<double> rows = (c * nf.bond(k + 1).asDiagonal()).rowwise().sum();
            EXPECT_LE((cols.array() - 1.0).abs().maxCoeff(), 1e-10);
            EXPECT_LE((rows.array() - 1.0).abs().maxCoeff(), 1e-10);
        }
        for(const auto &p : nf.bonds) {
            EXPECT_NEAR(p.sum(), 1.0, 1e-10);
            for(Index j = 1; j < p.size(); ++j) EXPECT_GE(p[j - 1], p[j]);
        }
        // gauge invariance of the spectra
        for(int c = 1; c < mps.num_sites(); ++c) {
            const auto original = cut_spectrum(mps, c).probabilities;
            const auto gauged   = cut_spectrum(rec, c).probabilities;
            const auto &p       = nf.bonds[static_cast<std::size_t>(c - 1)];
            EXPECT_LE((original.head(p.size()) - p).cwiseAbs().maxCoeff(), 1e-10);
            EXPECT_LE((gauged.head(p.size()) - p).cwiseAbs().maxCoeff(), 1e-10);
            EXPECT_LE(original.tail(original.size() - p.size()).cwiseAbs().sum(), 1e-10);
        }
    }
}

TEST(NaturalForm, RequiresNormalizedInput) {
    std::vector<StochasticMps<double>::SiteTensor> sites(2, {Matrix<double>::Constant(1, 1, 1.0), Matrix<double>::Constant(1, 1, 1.0)});
    EXPECT_THROW((void) to_natural_form(StochasticMps<double>(2, sites, false)), PreconditionError);
}

TEST(Truncate, LargeCapIsIdentity) {
    std::mt19937_64 rng(31);
    const auto      mps = random_stochastic_mps(rng);
    const auto      tr  = truncate(to_natural_form(mps), mps.max_bond_dim());
    EXPECT_DOUBLE_EQ(tr.error_bound, 0.0);
    EXPECT_LE(l1_distance(contract_to_table(mps), contract_to_table(tr.mps)), 1e-10);
}

TEST(Truncate, AsepTwentySitesAtElevenIsExact) {
    const auto mps = asep_mps({0.3, 0.3, 20});
    const auto tr  = truncate(to_natural_form(mps), 11);
    EXPECT_LE(tr.error_bound, 1e-10);
    EXPECT_LE(tr.mps.max_bond_dim(), 11);
}

TEST(Truncate, MeasuredErrorBelowBound) {
    std::mt19937_64  rng(37);
    RandomMpsOptions opt;
    opt.min_sites = 6;
    opt.max_sites = 6;
    int checked   = 0;
    for(int trial = 0; trial < 50; ++trial) {
        const auto mps   = random_stochastic_mps(rng, opt);
        const auto table = contract_to_table(mps);
        const auto tr    = truncate(to_natural_form(mps), 2);
        const auto tails = std::accumulate(tr.tails.begin(), tr.tails.end(), 0.0);
        EXPECT_NEAR(tr.error_bound, 2.0 * tails, 1e-15);
        EXPECT_LE(l1_distance(table, contract_to_table(tr.mps)), tr.error_bound + 1e-9);
        checked += tr.error_bound > 0 ? 1 : 0;
    }
    EXPECT_GT(checked, 10);
}

TEST(Truncate, RejectsZeroCap) {
    const auto nf = to_natural_form(product_mps({{0.5, 0.5}, {0.5, 0.5}}));
    EXPECT_THROW((void) truncate(nf, 0), ArgumentError);
}

TEST(Truncate, EveryCapYieldsNormalizedStateWithinBound) {
    // This corpus contains chains whose kept indices carry no joint mass at small caps.
    std::mt19937_64 rng(2024);
    for(int trial = 0; trial < 1000; ++trial) {
        const auto mps   = random_stochastic_mps(rng);
        const auto table = contract_to_table(mps);
        const auto nf    = to_natural_form(mps);
        for(Index cap = 1; cap <= mps.max_bond_dim(); ++cap) {
            const auto tr = truncate(nf, cap);
            ASSERT_TRUE(tr.mps.is_normalized());
            EXPECT_LE(tr.mps.max_bond_dim(), cap);
            EXPECT_LE(l1_distance(table, contract_to_table(tr.mps)), tr.error_bound + 1e-9);
        }
    }
}
