#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "spinkin/oracles.hpp"
#include "spinkin/spin_algebra.hpp"

using namespace spinkin;

namespace {

double u_at(const std::vector<double>& u, int i, int j, int k, int l) { return u[((i * 3 + j) * 3 + k) * 3 + l]; }

}  // namespace

TEST(SpinBasis, OrderedFromPlusSToMinusS) {
    const auto b = SpinBasis::make(1.5);
    ASSERT_EQ(b.dim, 4);
    EXPECT_DOUBLE_EQ(b.m_values.front(), 1.5);
    EXPECT_DOUBLE_EQ(b.m_values.back(), -1.5);
    for (std::size_t k = 1; k < b.m_values.size(); ++k) EXPECT_DOUBLE_EQ(b.m_values[k - 1] - b.m_values[k], 1.0);
    EXPECT_EQ(b.index_of(0.5), 1);
}

TEST(SpinBasis, RejectsInvalidSpin) {
    EXPECT_THROW(SpinBasis::make(-1.0), std::invalid_argument);
    EXPECT_THROW(SpinBasis::make(0.3), std::invalid_argument);
}

TEST(SpinMatrices, SpinOne) {
    const auto m = make_spin_matrices(1.0);
    EXPECT_EQ(m.sz, Eigen::Vector3d(1, 0, -1).asDiagonal().toDenseMatrix());
    EXPECT_EQ(m.sz2, Eigen::Vector3d(1, 0, 1).asDiagonal().toDenseMatrix());
}

TEST(SpinMatrices, SpinHalf) {
    const auto m = make_spin_matrices(0.5);
    EXPECT_DOUBLE_EQ(m.sz(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(m.sz(1, 1), -0.5);
    EXPECT_DOUBLE_EQ(m.sz(0, 1), 0.0);
}

TEST(ClebschGordan, StretchedStateIsOne) { EXPECT_NEAR(clebsch_gordan(1, 1, 1, 1, 2, 2), 1.0, 1e-15); }

TEST(ClebschGordan, ProjectionMismatchIsZero) {
    EXPECT_EQ(clebsch_gordan(1, 1, 1, 0, 2, 0), 0.0);
    EXPECT_EQ(clebsch_gordan(1, 0, 1, 0, 3, 0), 0.0);
    EXPECT_EQ(clebsch_gordan(1, 2, 1, -1, 2, 1), 0.0);
}

TEST(ClebschGordan, SingletZeroZero) {
    const double oracle = oracle::racah_clebsch_gordan(1, 0, 1, 0, 0, 0);
    EXPECT_NEAR(oracle, -1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(clebsch_gordan(1, 0, 1, 0, 0, 0), oracle, 1e-14);
}

TEST(ClebschGordan, MatchesRacahForSpinOneTimesSpinOne) {
    for (int S = 0; S <= 2; ++S)
        for (int M = -S; M <= S; ++M)
            for (int m1 = -1; m1 <= 1; ++m1)
                for (int m2 = -1; m2 <= 1; ++m2)
                    EXPECT_NEAR(clebsch_gordan(1, m1, 1, m2, S, M), oracle::racah_clebsch_gordan(1, m1, 1, m2, S, M),
                                1e-13)
                        << S << " " << M << " " << m1 << " " << m2;
}

TEST(ClebschGordan, ColumnOrthonormality) {
    const double j1 = 1.5, j2 = 1.0;
    for (double S = 0.5; S <= 2.5; S += 1.0)
        for (double Sp = 0.5; Sp <= 2.5; Sp += 1.0)
            for (double M = -S; M <= S; M += 1.0) {
                double sum = 0.0;
                for (double m1 = -j1; m1 <= j1; m1 += 1.0)
                    sum += clebsch_gordan(j1, m1, j2, M - m1, S, M) * clebsch_gordan(j1, m1, j2, M - m1, Sp, M);
                EXPECT_NEAR(sum, S == Sp ? 1.0 : 0.0, 1e-13);
            }
}

TEST(ClebschGordan, CompletenessOverAllChannels) {
    const double m[3] = {1, 0, -1};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    double sum = 0.0;
                    for (int S = 0; S <= 2; ++S)
                        for (int M = -S; M <= S; ++M)
                            sum += clebsch_gordan(1, m[i], 1, m[k], S, M) * clebsch_gordan(1, m[j], 1, m[l], S, M);
                    EXPECT_NEAR(sum, (i == j && k == l) ? 1.0 : 0.0, 1e-13);
                }
}

TEST(InteractionTensor, SelectionRule) {
    const auto u = build_interaction_tensor(SpinBasis::make(1.0), {{0, 0.3}, {2, 1.7}});
    const double m[3] = {1, 0, -1};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    if (m[i] + m[k] != m[j] + m[l]) EXPECT_EQ(u(i, j, k, l), 0.0);
}

TEST(InteractionTensor, PureQuintetStretchedEntry) {
    const auto u = build_interaction_tensor(SpinBasis::make(1.0), {{0, 0.0}, {2, 2.5}});
    EXPECT_NEAR(u(0, 0, 0, 0), 2.5, 1e-15);
}

TEST(InteractionTensor, ExchangeSymmetryIsExact) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = build_interaction_tensor(SpinBasis::make(1.0), {{0, d(rng)}, {2, d(rng)}});
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l) {
                        EXPECT_EQ(u(i, j, k, l), u(k, j, i, l));
                        EXPECT_EQ(u(i, j, k, l), u(i, l, k, j));
                    }
    }
}

TEST(InteractionTensor, MatchesChannelSumOracle) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double g0 = d(rng), g2 = d(rng);
        const auto u = build_interaction_tensor(SpinBasis::make(1.0), {{0, g0}, {2, g2}});
        const auto ref = oracle::channel_sum_tensor(g0, g2);
        for (std::size_t p = 0; p < 81; ++p) EXPECT_NEAR(u.data()[p], ref[p], 1e-13);
    }
}

TEST(InteractionTensor, MatchesSymmetrizedClosedForm) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double g0 = d(rng), g2 = d(rng);
        const auto u = build_interaction_tensor(SpinBasis::make(1.0), {{0, g0}, {2, g2}});
        const auto ref = oracle::closed_form_tensor(g0, g2);
        for (std::size_t p = 0; p < 81; ++p) EXPECT_NEAR(u.data()[p], ref[p], 1e-12);
    }
}

TEST(InteractionTensor, UnsymmetrizedClosedFormCarriesAntisymmetricChannel) {
    // c0 + c2 F1.F2 also acts on the S = 1 pair states, which have no scattering channel.
    const double g0 = 1.0, g2 = 2.0;
    const auto u = build_interaction_tensor(SpinBasis::make(1.0), {{0, g0}, {2, g2}});
    const double c0 = (g0 + 2 * g2) / 3;
    EXPECT_NEAR(u(0, 0, 1, 1), g2 / 2, 1e-14);
    EXPECT_GT(std::abs(u(0, 0, 1, 1) - c0), 0.1);
}

TEST(InteractionTensor, ValidatesChannels) {
    const auto b = SpinBasis::make(1.0);
    EXPECT_THROW(build_interaction_tensor(b, {{0, 1.0}, {1, 1.0}, {2, 1.0}}), std::invalid_argument);
    EXPECT_THROW(build_interaction_tensor(b, {{0, 1.0}}), std::invalid_argument);
    EXPECT_THROW(build_interaction_tensor(b, {{0, 1.0}, {2, 1.0}, {4, 1.0}}), std::invalid_argument);
}

TEST(InteractionTensor, StrengthsFromScatteringLengths) {
    const auto g = channel_strengths_from_lengths({{0, 2.0}, {2, 3.0}}, 4.0, Units::reduced_units());
    EXPECT_NEAR(g.at(0), 4 * M_PI * 2.0 / 4.0, 1e-14);
    EXPECT_NEAR(g.at(2), 4 * M_PI * 3.0 / 4.0, 1e-14);
}

TEST(GellMann, NormalizationAndTracelessness) {
    const auto& b = gellmann_basis();
    for (int a = 0; a < 8; ++a) {
        EXPECT_LT(std::abs(b.generators[a].trace()), 1e-14);
        EXPECT_LT((b.generators[a] - b.generators[a].adjoint()).cwiseAbs().maxCoeff(), 1e-15);
        for (int c = 0; c < 8; ++c)
            EXPECT_NEAR(std::abs((b.generators[a] * b.generators[c]).trace() - (a == c ? 0.5 : 0.0)), 0.0, 1e-15);
    }
}

TEST(GellMann, StructureConstantsMatchCommutatorOracle) {
    const auto& b = gellmann_basis();
    EXPECT_NEAR(b.f(0, 1, 2), 1.0, 1e-15);
    for (int a = 0; a < 8; ++a)
        for (int c = 0; c < 8; ++c)
            for (int e = 0; e < 8; ++e) EXPECT_NEAR(b.f(a, c, e), oracle::commutator_structure_constant(a, c, e), 1e-14);
}

TEST(GellMann, CommutatorRelation) {
    const auto& b = gellmann_basis();
    for (int a = 0; a < 8; ++a)
        for (int c = 0; c < 8; ++c) {
            Eigen::Matrix3cd rhs = Eigen::Matrix3cd::Zero();
            for (int e = 0; e < 8; ++e) rhs += std::complex<double>(0.0, b.f(a, c, e)) * b.generators[e];
            const Eigen::Matrix3cd lhs = b.generators[a] * b.generators[c] - b.generators[c] * b.generators[a];
            EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-13);
        }
}

TEST(GellMann, JacobiIdentity) { EXPECT_LT(oracle::jacobi_defect(gellmann_basis().structure_constants), 1e-12); }

TEST(GellMann, TotalAntisymmetry) {
    const auto& b = gellmann_basis();
    for (int a = 0; a < 8; ++a)
        for (int c = 0; c < 8; ++c)
            for (int e = 0; e < 8; ++e) {
                EXPECT_EQ(b.f(a, c, e), -b.f(c, a, e));
                EXPECT_EQ(b.f(a, c, e), -b.f(a, e, c));
            }
}

TEST(Su3, DecomposeExamples) {
    auto c = su3_decompose(Eigen::Matrix3cd::Identity());
    EXPECT_NEAR(c.c0, 1.0, 1e-15);
    for (double v : c.c) EXPECT_NEAR(v, 0.0, 1e-15);

    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(0, 0) = 1;
    h(1, 1) = -1;
    c = su3_decompose(h);
    EXPECT_NEAR(c.c0, 0.0, 1e-15);
    for (int a = 0; a < 8; ++a) EXPECT_NEAR(c.c[a], a == 2 ? 2.0 : 0.0, 1e-15);
}

TEST(Su3, ReconstructExamples) {
    EXPECT_EQ(su3_reconstruct({}), Eigen::Matrix3cd::Zero());
    Su3Components one;
    one.c0 = 1.0;
    EXPECT_LT((su3_reconstruct(one) - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Su3, RoundTripOnRandomHermitian) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Matrix3cd h = oracle::random_hermitian(rng);
        EXPECT_LT((su3_reconstruct(su3_decompose(h)) - h).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Su3, RejectsNonHermitian) {
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(0, 1) = 1.0;
    EXPECT_THROW(su3_decompose(h), std::invalid_argument);
}
