#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "spinkin/common.hpp"
#include "spinkin/equilibrium.hpp"
#include "spinkin/spin_algebra.hpp"

namespace spinkin {

using Complex = std::complex<double>;
using Matrix9c = Eigen::Matrix<Complex, 9, 9>;
using Vector9c = Eigen::Matrix<Complex, 9, 1>;

/// Single-mode spin state, indices ordered (+1, 0, -1).
struct SpinDensityMatrix {
    Eigen::Matrix3cd rho = Eigen::Matrix3cd::Zero();
    double time = 0.0;

    double hermiticity_defect() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
    double trace() const { return rho.trace().real(); }
};

/// |psi><psi| with psi = (sqrt(eps/2), sqrt(1 - eps), sqrt(eps/2)).
SpinDensityMatrix prepared_state(double epsilon);

/// A_in = sum_ml U_mnil K_lm (direct) and B_in = sum_ml U_mlin K_lm (exchange).
Eigen::Matrix3cd direct_contraction(const InteractionTensor& u, const Eigen::Matrix3cd& k);
Eigen::Matrix3cd exchange_contraction(const InteractionTensor& u, const Eigen::Matrix3cd& k);
/// A + B for bosons, A - B for fermions.
Eigen::Matrix3cd scattering_contraction(const InteractionTensor& u, const Eigen::Matrix3cd& k,
                                        Statistics statistics);

struct DampingForce {
    std::vector<Eigen::Matrix3cd> f_matrix;    // N
    std::vector<Su3Components> su3_components;
};

struct InverseRelaxation {
    std::vector<Eigen::Matrix3cd> tau_inv;  // 1/s
};

/// F(R) = (A +- B)[rho] m1(R) / (2 pi hbar), from J2-side moments.
DampingForce damping_force(const InteractionTensor& u, const JumpMoments& moments,
                           const SpinDensityMatrix& rho, Statistics statistics = Statistics::Bose,
                           const Units& units = {});

/// tau^-1(R) = (A +- B)[rho] m0(R) / (2 pi hbar) / (i hbar).
InverseRelaxation inverse_relaxation(const InteractionTensor& u, const JumpMoments& moments,
                                     const SpinDensityMatrix& rho,
                                     Statistics statistics = Statistics::Bose, const Units& units = {});

/// f0-weighted phase-space averages used by the single-mode reduction.
struct AveragedMoments {
    double m0 = 0.0;     // <m0>
    double force = 0.0;  // <m1 d_p f0 / f0>
};

AveragedMoments average_moments(const EquilibriumDistribution& f, const PhaseSpaceGrid& grid,
                                const JumpMoments& moments);

struct AssemblyOptions {
    Statistics statistics = Statistics::Bose;
    bool relaxation = true;
    bool force = true;
    /// dT/dt between the kinetic variable T = t1 + t2 and the time used by the integrators.
    double kinetic_time_scale = 1.0;
};

/// d vec(rho)/dt = m_matrix vec(rho), vec row-major.
struct SingleModeSuperOperator {
    Matrix9c m_matrix = Matrix9c::Zero();
    Matrix9c zeeman_block = Matrix9c::Zero();
    /// F rho, rho F^dagger, tau rho, rho tau^dagger, each already carrying its sign.
    std::array<Matrix9c, 4> scattering_blocks;
    double drift_offset = 0.0;
    double q = 0.0;
    Statistics statistics = Statistics::Bose;
    double kinetic_time_scale = 1.0;

    Matrix9c scattering_sum() const;
};

/// kernel_state is the spin structure K of the lesser function inside the jump kernels.
SingleModeSuperOperator assemble_single_mode(double q, const SpinMatrices& spin, const InteractionTensor& u,
                                             const AveragedMoments& moments,
                                             const Eigen::Matrix3cd& kernel_state,
                                             const AssemblyOptions& options = {}, const Units& units = {});

Vector9c vectorize(const Eigen::Matrix3cd& rho);
Eigen::Matrix3cd unvectorize(const Vector9c& v);
/// Row-major superoperator of rho -> a rho b.
Matrix9c sandwich(const Eigen::Matrix3cd& a, const Eigen::Matrix3cd& b);

struct PairPopulations {
    double p00 = 0.0;
    double ppm = 0.0;
};

PairPopulations pair_populations(const Eigen::Matrix3cd& rho);

struct Trajectory {
    std::vector<double> times;
    std::vector<SpinDensityMatrix> states;
    std::vector<PairPopulations> observables;
    double max_presymmetrization_defect = 0.0;
    bool used_exponential_fallback = false;

    void push(double t, const Eigen::Matrix3cd& rho);
};

/// Operator infinity norm, the bound used by the RK4 stability guard.
double generator_norm(const Matrix9c& m);

Trajectory evolve_rk4(const SingleModeSuperOperator& superop, const SpinDensityMatrix& rho0, double dt,
                      long n_steps, long sample_every = 1);

Trajectory evolve_eigen(const SingleModeSuperOperator& superop, const SpinDensityMatrix& rho0,
                        const std::vector<double>& times);

struct OscillationResult {
    double frequency = 0.0;          // Hz
    double phase_difference = 0.0;   // rad in [0, 2 pi)
    double decay_rate = 0.0;         // 1/s
    double peak_to_median = 0.0;
    std::vector<double> maxima_times;
    std::vector<double> maxima_values;
};

/// Uniformly sampled series. Throws NoOscillation when no spectral peak reaches 5x the median.
OscillationResult oscillation_analysis(const std::vector<double>& times, const std::vector<double>& p00,
                                       const std::vector<double>& ppm);
OscillationResult oscillation_analysis(const Trajectory& trajectory);

}  // namespace spinkin
