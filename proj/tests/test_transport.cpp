#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "spinkin/oracles.hpp"
#include "spinkin/transport.hpp"

using namespace spinkin;

namespace {

const Units reduced = Units::reduced_units();

InteractionTensor tensor(double g0, double g2) { return build_interaction_tensor(SpinBasis::make(1.0), {{0, g0}, {2, g2}}); }

JumpMoments linear_moments(int n, double n0, double slope, double dr) {
    const auto grid = PhaseSpaceGrid::make(0.0, dr * (n - 1), n, 1.0, 16);
    Eigen::VectorXd dens(n);
    for (int r = 0; r < n; ++r) dens[r] = n0 + slope * grid.positions[r];
    return jump_moments(dens, grid, KernelSide::J2, MomentMode::Analytic, reduced);
}

SpinDensityMatrix state(const Eigen::Matrix3cd& rho) {
    SpinDensityMatrix s;
    s.rho = rho;
    return s;
}

SpinDensityMatrix random_state(std::mt19937_64& rng) {
    Eigen::Matrix3cd a = oracle::random_hermitian(rng);
    Eigen::Matrix3cd rho = a * a.adjoint();
    rho /= rho.trace().real();
    return state(rho);
}

double max_eigen_vs_rk4(const SingleModeSuperOperator& op, const SpinDensityMatrix& rho0, double dt, long steps) {
    const auto rk = evolve_rk4(op, rho0, dt, steps, 1);
    const auto ex = evolve_eigen(op, rho0, rk.times);
    double worst = 0.0;
    for (std::size_t k = 0; k < rk.times.size(); ++k)
        worst = std::max(worst, (rk.states[k].rho - ex.states[k].rho).cwiseAbs().maxCoeff());
    return worst;
}

}  // namespace

TEST(PreparedState, PureAndNormalized) {
    const auto s = prepared_state(0.1);
    EXPECT_NEAR(s.trace(), 1.0, 1e-15);
    EXPECT_EQ(s.hermiticity_defect(), 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(s.rho);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
    EXPECT_NEAR(s.rho(1, 1).real(), 0.9, 1e-15);
    EXPECT_THROW(prepared_state(1.5), std::invalid_argument);
}

TEST(DampingForce, VanishesWithoutCoupling) {
    const auto m = linear_moments(16, 1.0, 0.5, 0.1);
    const auto f = damping_force(tensor(0, 0), m, prepared_state(0.2), Statistics::Bose, reduced);
    for (const auto& x : f.f_matrix) EXPECT_EQ(x.cwiseAbs().maxCoeff(), 0.0);
}

TEST(DampingForce, VanishesForConstantDensity) {
    const auto m = linear_moments(16, 2.0, 0.0, 0.1);
    const auto f = damping_force(tensor(1.0, 2.0), m, prepared_state(0.2), Statistics::Bose, reduced);
    for (const auto& x : f.f_matrix) EXPECT_EQ(x.cwiseAbs().maxCoeff(), 0.0);
}

TEST(DampingForce, LinearDensityMatchesContractionOracle) {
    const double g = 1.7, slope = 0.3;
    const auto u = tensor(g, g);
    const auto m = linear_moments(16, 1.0, slope, 0.1);
    Eigen::Matrix3cd rho = Eigen::Matrix3cd::Zero();
    rho(1, 1) = 1.0;
    const auto f = damping_force(u, m, state(rho), Statistics::Bose, reduced);
    const double m1 = -constants::pi * slope;  // J2 side, hbar = 1
    const Eigen::Matrix3cd expected = (oracle::brute_direct(u, rho) + oracle::brute_exchange(u, rho)) * (m1 / (2 * constants::pi));
    for (const auto& x : f.f_matrix) EXPECT_LT((x - expected).cwiseAbs().maxCoeff(), 1e-12);
    // With g0 = g2 the tensor is g (d_ij d_kl + d_il d_kj)/2 and F reduces to the scalar mean-field force.
    EXPECT_NEAR(f.f_matrix[3](1, 1).real(), -2.0 * g * slope / 2.0, 1e-12);
}

TEST(DampingForce, GenericInputsMatchOracleAndSu3Components) {
    std::mt19937_64 rng(12);
    const auto u = tensor(0.4, -1.1);
    const auto m = linear_moments(12, 1.0, -0.8, 0.2);
    const auto rho = random_state(rng);
    const auto f = damping_force(u, m, rho, Statistics::Bose, reduced);
    ASSERT_EQ(f.su3_components.size(), f.f_matrix.size());
    for (std::size_t r = 0; r < f.f_matrix.size(); ++r) {
        Eigen::Matrix3cd x = (oracle::brute_direct(u, rho.rho) + oracle::brute_exchange(u, rho.rho)) * (m.m1[r] / (2 * constants::pi));
        x = 0.5 * (x + x.adjoint()).eval();
        EXPECT_LT((f.f_matrix[r] - x).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((su3_reconstruct(f.su3_components[r]) - f.f_matrix[r]).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(DampingForce, RequiresJ2Side) {
    auto m = linear_moments(8, 1.0, 0.1, 0.1);
    m.side = KernelSide::J1;
    EXPECT_THROW(damping_force(tensor(1, 1), m, prepared_state(0.1)), std::invalid_argument);
}

TEST(InverseRelaxation, VanishesWithoutCouplingAndScalesWithDensity) {
    const auto m = linear_moments(8, 1.0, 0.2, 0.1);
    for (const auto& t : inverse_relaxation(tensor(0, 0), m, prepared_state(0.1), Statistics::Bose, reduced).tau_inv)
        EXPECT_EQ(t.cwiseAbs().maxCoeff(), 0.0);
    const auto m2 = linear_moments(8, 2.0, 0.4, 0.1);
    const auto a = inverse_relaxation(tensor(1, 2), m, prepared_state(0.1), Statistics::Bose, reduced);
    const auto b = inverse_relaxation(tensor(1, 2), m2, prepared_state(0.1), Statistics::Bose, reduced);
    for (std::size_t r = 0; r < a.tau_inv.size(); ++r)
        EXPECT_LT((b.tau_inv[r] - 2.0 * a.tau_inv[r]).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(InverseRelaxation, MatchesOracleAndHasNoAmplifyingPart) {
    std::mt19937_64 rng(13);
    const auto u = tensor(0.9, 1.3);
    const auto m = linear_moments(8, 1.0, 0.2, 0.1);
    const auto rho = random_state(rng);
    const auto t = inverse_relaxation(u, m, rho, Statistics::Bose, reduced);
    for (std::size_t r = 0; r < t.tau_inv.size(); ++r) {
        const Eigen::Matrix3cd x = (oracle::brute_direct(u, rho.rho) + oracle::brute_exchange(u, rho.rho)) *
                                   (m.m0[r] / (2 * constants::pi)) * Complex(0.0, -1.0);
        EXPECT_LT((t.tau_inv[r] - x).cwiseAbs().maxCoeff(), 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(0.5 * (t.tau_inv[r] + t.tau_inv[r].adjoint()));
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
    }
}

TEST(Contractions, MatchBruteForce) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = tensor(std::uniform_real_distribution<double>(-1, 1)(rng), 0.5);
        const Eigen::Matrix3cd k = oracle::random_hermitian(rng);
        EXPECT_LT((direct_contraction(u, k) - oracle::brute_direct(u, k)).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_LT((exchange_contraction(u, k) - oracle::brute_exchange(u, k)).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Superoperator, ZeroWithoutZeemanAndCoupling) {
    AveragedMoments m{1.0, 0.3};
    const auto op = assemble_single_mode(0.0, make_spin_matrices(1.0), tensor(0, 0), m, prepared_state(0.1).rho, {}, reduced);
    EXPECT_EQ(op.m_matrix.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(op.drift_offset, 0.0);
}

TEST(Superoperator, FermiScatteringBlocksCancel) {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        AssemblyOptions opt;
        opt.statistics = Statistics::Fermi;
        AveragedMoments m{d(rng), d(rng)};
        const auto op = assemble_single_mode(std::abs(d(rng)), make_spin_matrices(1.0), tensor(d(rng), d(rng)), m,
                                             oracle::random_hermitian(rng), opt, reduced);
        EXPECT_LE(op.scattering_sum().cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Superoperator, ZeemanSpectrum) {
    const double q = 0.37;
    const auto op = assemble_single_mode(q, make_spin_matrices(1.0), tensor(0, 0), {}, prepared_state(0.1).rho, {}, reduced);
    Eigen::ComplexEigenSolver<Matrix9c> es(op.m_matrix);
    std::vector<double> im;
    for (int k = 0; k < 9; ++k) {
        EXPECT_NEAR(es.eigenvalues()(k).real(), 0.0, 1e-14);
        im.push_back(es.eigenvalues()(k).imag());
    }
    std::sort(im.begin(), im.end());
    const std::vector<double> expected = {-q, -q, 0, 0, 0, 0, 0, q, q};
    for (int k = 0; k < 9; ++k) EXPECT_NEAR(im[k], expected[k], 1e-13);
}

TEST(Superoperator, ZeemanLeavesPlusMinusCoherenceUnchanged) {
    const auto op = assemble_single_mode(1.3, make_spin_matrices(1.0), tensor(0, 0), {}, prepared_state(0.1).rho, {}, reduced);
    Eigen::Matrix3cd e = Eigen::Matrix3cd::Zero();
    e(0, 2) = 1.0;
    const Vector9c out = op.m_matrix * vectorize(e);
    EXPECT_EQ(out.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Superoperator, KineticTimeScaleMultipliesGenerator) {
    AveragedMoments m{0.8, 0.2};
    AssemblyOptions one, two;
    two.kinetic_time_scale = 2.0;
    const auto a = assemble_single_mode(0.5, make_spin_matrices(1.0), tensor(1, 2), m, prepared_state(0.1).rho, one, reduced);
    const auto b = assemble_single_mode(0.5, make_spin_matrices(1.0), tensor(1, 2), m, prepared_state(0.1).rho, two, reduced);
    EXPECT_LT((b.m_matrix - 2.0 * a.m_matrix).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Superoperator, RejectsNegativeQ) {
    EXPECT_THROW(assemble_single_mode(-1.0, make_spin_matrices(1.0), tensor(0, 0), {}, prepared_state(0.1).rho, {}, reduced),
                 std::invalid_argument);
}

TEST(Vectorization, RowMajorAndSandwich) {
    std::mt19937_64 rng(16);
    const Eigen::Matrix3cd a = oracle::random_hermitian(rng), b = oracle::random_hermitian(rng), r = oracle::random_hermitian(rng);
    const Vector9c v = vectorize(r);
    EXPECT_EQ(v(1), r(0, 1));
    EXPECT_EQ(v(3), r(1, 0));
    EXPECT_EQ(unvectorize(v), r);
    EXPECT_LT((unvectorize(sandwich(a, b) * v) - a * r * b).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(PairPopulations, Examples) {
    auto p = pair_populations(Eigen::Vector3cd(0, 1, 0).asDiagonal());
    EXPECT_DOUBLE_EQ(p.p00, 1.0);
    EXPECT_DOUBLE_EQ(p.ppm, 0.0);
    p = pair_populations(Eigen::Vector3cd(0.5, 0, 0.5).asDiagonal());
    EXPECT_DOUBLE_EQ(p.p00, 0.0);
    EXPECT_DOUBLE_EQ(p.ppm, 1.0);
    p = pair_populations(Eigen::Vector3cd(0.25, 0.5, 0.25).asDiagonal());
    EXPECT_NEAR(p.p00, 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(p.ppm, 1.0 / 3.0, 1e-15);
    p = pair_populations(Eigen::Vector3cd(1, 0, 0).asDiagonal());
    EXPECT_EQ(p.p00, 0.0);
    EXPECT_EQ(p.ppm, 0.0);
}

TEST(EvolveRk4, ZeroGeneratorKeepsState) {
    SingleModeSuperOperator op;
    const auto rho0 = prepared_state(0.3);
    const auto t = evolve_rk4(op, rho0, 0.01, 100, 10);
    ASSERT_EQ(t.times.size(), 11u);
    for (const auto& s : t.states) EXPECT_EQ(s.rho, rho0.rho);
}

TEST(EvolveRk4, ZeemanCoherencePhase) {
    const double q = 2.0;
    const auto op = assemble_single_mode(q, make_spin_matrices(1.0), tensor(0, 0), {}, prepared_state(0.1).rho, {}, reduced);
    SpinDensityMatrix rho0;
    rho0.rho(0, 0) = rho0.rho(1, 1) = 0.5;
    rho0.rho(0, 1) = 0.3;
    rho0.rho(1, 0) = 0.3;
    const double dt = 1e-3;
    const auto t = evolve_rk4(op, rho0, dt, 2000, 100);
    for (std::size_t k = 0; k < t.times.size(); ++k) {
        const Complex c = t.states[k].rho(0, 1);
        EXPECT_NEAR(std::abs(c), 0.3, 1e-9);
        // d rho_{+1,0}/dt = i q rho_{+1,0} in the (1/i hbar) convention of the Zeeman block.
        const Complex exact = 0.3 * std::exp(Complex(0.0, q * t.times[k]));
        EXPECT_LT(std::abs(c - exact), 1e-9);
    }
}

TEST(EvolveRk4, StabilityGuardAndHermiticity) {
    const auto op = assemble_single_mode(10.0, make_spin_matrices(1.0), tensor(0, 0), {}, prepared_state(0.1).rho, {}, reduced);
    EXPECT_THROW(evolve_rk4(op, prepared_state(0.1), 0.1, 10), std::invalid_argument);
    Eigen::Matrix3cd bad = Eigen::Matrix3cd::Zero();
    bad(0, 1) = 1.0;
    EXPECT_THROW(evolve_rk4(op, state(bad), 1e-4, 10), std::invalid_argument);
}

TEST(EvolveRk4, NanAbortsWithStepIndex) {
    SingleModeSuperOperator op;
    op.m_matrix(0, 0) = 1.0;
    try {
        // Grows by e^0.09 per step: overflow, then inf * 0 in the product.
        evolve_rk4(op, prepared_state(0.1), 0.09, 20000);
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
    }
}

TEST(EvolveEigen, DiagonalDecay) {
    SingleModeSuperOperator op;
    op.m_matrix(0, 0) = -2.0;
    const auto t = evolve_eigen(op, prepared_state(0.5), {0.0, 0.5, 1.0, 2.0});
    for (std::size_t k = 0; k < t.times.size(); ++k)
        EXPECT_NEAR(t.states[k].rho(0, 0).real(), 0.25 * std::exp(-2.0 * t.times[k]), 1e-12);
}

TEST(EvolveEigen, ZeroGeneratorIsConstant) {
    SingleModeSuperOperator op;
    const auto rho0 = prepared_state(0.4);
    for (const auto& s : evolve_eigen(op, rho0, {0.0, 1.0, 5.0}).states) EXPECT_LT((s.rho - rho0.rho).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EvolveEigen, DefectiveGeneratorFallsBackToExponential) {
    SingleModeSuperOperator op;
    op.m_matrix(0, 1) = 1.0;  // nilpotent Jordan block
    const auto rho0 = prepared_state(0.5);
    const auto t = evolve_eigen(op, rho0, {1.0});
    EXPECT_TRUE(t.used_exponential_fallback);
    EXPECT_NEAR(std::abs(t.states[0].rho(0, 0) - (rho0.rho(0, 0) + rho0.rho(0, 1))), 0.0, 1e-14);
}

TEST(Evolution, Rk4AgreesWithEigenAndConvergesAtFourthOrder) {
    AveragedMoments m{1.0, 0.0};
    const auto op = assemble_single_mode(3.0, make_spin_matrices(1.0), tensor(1.5, 0.6), m, prepared_state(0.3).rho, {}, reduced);
    const auto rho0 = prepared_state(0.2);
    const double dt = 0.04 / generator_norm(op.m_matrix);
    const double e1 = max_eigen_vs_rk4(op, rho0, dt, 800);
    const double e2 = max_eigen_vs_rk4(op, rho0, dt / 2, 1600);
    EXPECT_LT(e1, 1e-6);
    EXPECT_GT(e1 / e2, 14.0);
    EXPECT_LT(e1 / e2, 18.0);
}

TEST(Evolution, TraceAndHermiticityOverManySteps) {
    AveragedMoments m{1.0, 0.4};
    AssemblyOptions opt;
    opt.relaxation = false;
    const auto op = assemble_single_mode(1.0, make_spin_matrices(1.0), tensor(1.0, 2.0), m, prepared_state(0.1).rho, opt, reduced);
    const auto t = evolve_rk4(op, prepared_state(0.1), 0.05 / generator_norm(op.m_matrix), 10000, 100);
    for (const auto& s : t.states) {
        EXPECT_LT(std::abs(s.trace() - 1.0), 1e-10);
        EXPECT_LT(s.hermiticity_defect(), 1e-10);
    }
    EXPECT_LT(t.max_presymmetrization_defect, 1e-12);
}

TEST(Evolution, TraceNonIncreasingWithRelaxation) {
    AveragedMoments m{2.0, 0.0};
    const auto op = assemble_single_mode(1.0, make_spin_matrices(1.0), tensor(1.0, 2.0), m, prepared_state(0.1).rho, {}, reduced);
    const auto t = evolve_rk4(op, prepared_state(0.1), 0.05 / generator_norm(op.m_matrix), 2000, 10);
    for (std::size_t k = 1; k < t.states.size(); ++k) EXPECT_LE(t.states[k].trace(), t.states[k - 1].trace() + 1e-13);
}

TEST(Evolution, Linearity) {
    std::mt19937_64 rng(18);
    AveragedMoments m{1.0, 0.5};
    const auto op = assemble_single_mode(0.7, make_spin_matrices(1.0), tensor(0.3, 1.1), m, prepared_state(0.1).rho, {}, reduced);
    const auto a = random_state(rng), b = random_state(rng);
    const double alpha = 0.3, beta = 0.7;
    SpinDensityMatrix c;
    c.rho = alpha * a.rho + beta * b.rho;
    const double dt = 0.05 / generator_norm(op.m_matrix);
    const auto ta = evolve_rk4(op, a, dt, 500, 50), tb = evolve_rk4(op, b, dt, 500, 50), tc = evolve_rk4(op, c, dt, 500, 50);
    for (std::size_t k = 0; k < tc.states.size(); ++k)
        EXPECT_LT((tc.states[k].rho - alpha * ta.states[k].rho - beta * tb.states[k].rho).cwiseAbs().maxCoeff(), 1e-10);
}
