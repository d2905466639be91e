#include "spinkin/transport.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace spinkin {

namespace {

void require_spin_one(const InteractionTensor& u) {
    if (u.dim() != 3) throw std::invalid_argument("transport requires a spin-1 interaction tensor (dim 3)");
}

void require_hermitian(const Eigen::Matrix3cd& rho, const char* what) {
    const double defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (!(defect <= 1e-10))
        throw std::invalid_argument(std::string(what) + ": density matrix is not Hermitian");
}

}  // namespace

SpinDensityMatrix prepared_state(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("initial seed epsilon must lie in [0, 1]");
    Eigen::Vector3cd psi(std::sqrt(0.5 * epsilon), std::sqrt(1.0 - epsilon), std::sqrt(0.5 * epsilon));
    SpinDensityMatrix out;
    out.rho = psi * psi.adjoint();
    return out;
}

Eigen::Matrix3cd direct_contraction(const InteractionTensor& u, const Eigen::Matrix3cd& k) {
    require_spin_one(u);
    Eigen::Matrix3cd a = Eigen::Matrix3cd::Zero();
    for (int i = 0; i < 3; ++i)
        for (int n = 0; n < 3; ++n) {
            Complex sum = 0.0;
            for (int m = 0; m < 3; ++m)
                for (int l = 0; l < 3; ++l) sum += u(m, n, i, l) * k(l, m);
            a(i, n) = sum;
        }
    return a;
}

Eigen::Matrix3cd exchange_contraction(const InteractionTensor& u, const Eigen::Matrix3cd& k) {
    require_spin_one(u);
    Eigen::Matrix3cd b = Eigen::Matrix3cd::Zero();
    for (int i = 0; i < 3; ++i)
        for (int n = 0; n < 3; ++n) {
            Complex sum = 0.0;
            for (int m = 0; m < 3; ++m)
                for (int l = 0; l < 3; ++l) sum += u(m, l, i, n) * k(l, m);
            b(i, n) = sum;
        }
    return b;
}

Eigen::Matrix3cd scattering_contraction(const InteractionTensor& u, const Eigen::Matrix3cd& k,
                                        Statistics statistics) {
    const Eigen::Matrix3cd a = direct_contraction(u, k);
    const Eigen::Matrix3cd b = exchange_contraction(u, k);
    return statistics == Statistics::Bose ? Eigen::Matrix3cd(a + b) : Eigen::Matrix3cd(a - b);
}

DampingForce damping_force(const InteractionTensor& u, const JumpMoments& moments,
                           const SpinDensityMatrix& rho, Statistics statistics, const Units& units) {
    if (moments.side != KernelSide::J2) throw std::invalid_argument("damping force needs J2-side moments");
    require_hermitian(rho.rho, "damping_force");
    const Eigen::Matrix3cd x = scattering_contraction(u, rho.rho, statistics);
    const double measure = 1.0 / (2.0 * constants::pi * units.hbar);
    DampingForce out;
    out.f_matrix.reserve(moments.m1.size());
    out.su3_components.reserve(moments.m1.size());
    for (Eigen::Index r = 0; r < moments.m1.size(); ++r) {
        Eigen::Matrix3cd f = x * (moments.m1(r) * measure);
        f = 0.5 * (f + f.adjoint()).eval();
        out.f_matrix.push_back(f);
        out.su3_components.push_back(su3_decompose(f));
    }
    return out;
}

InverseRelaxation inverse_relaxation(const InteractionTensor& u, const JumpMoments& moments,
                                     const SpinDensityMatrix& rho, Statistics statistics,
                                     const Units& units) {
    if (moments.side != KernelSide::J2) throw std::invalid_argument("inverse relaxation needs J2-side moments");
    require_hermitian(rho.rho, "inverse_relaxation");
    const Eigen::Matrix3cd x = scattering_contraction(u, rho.rho, statistics);
    const Complex factor = Complex(0.0, -1.0 / units.hbar) / (2.0 * constants::pi * units.hbar);
    InverseRelaxation out;
    out.tau_inv.reserve(moments.m0.size());
    for (Eigen::Index r = 0; r < moments.m0.size(); ++r) out.tau_inv.push_back(x * (moments.m0(r) * factor));
    return out;
}

AveragedMoments average_moments(const EquilibriumDistribution& f, const PhaseSpaceGrid& grid,
                                const JumpMoments& moments) {
    const auto nr = f.values.rows(), np = f.values.cols();
    if (nr != grid.positions.size() || np != grid.momenta.size() || moments.m0.size() != nr)
        throw std::invalid_argument("average_moments: inputs do not share a grid");
    double weight = 0.0, m0 = 0.0, force = 0.0;
    for (Eigen::Index r = 0; r < nr; ++r) {
        const Eigen::VectorXd dfdp = gradient(f.values.row(r).transpose(), grid.dp);
        for (Eigen::Index k = 0; k < np; ++k) {
            weight += f.values(r, k);
            m0 += f.values(r, k) * moments.m0(r);
            force += moments.m1(r) * dfdp(k);
        }
    }
    AveragedMoments out;
    if (weight > 0.0) {
        out.m0 = m0 / weight;
        out.force = force / weight;
    }
    return out;
}

Vector9c vectorize(const Eigen::Matrix3cd& rho) {
    Vector9c v;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) v(3 * i + j) = rho(i, j);
    return v;
}

Eigen::Matrix3cd unvectorize(const Vector9c& v) {
    Eigen::Matrix3cd rho;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) rho(i, j) = v(3 * i + j);
    return rho;
}

Matrix9c sandwich(const Eigen::Matrix3cd& a, const Eigen::Matrix3cd& b) {
    Matrix9c s;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) s(3 * i + j, 3 * k + l) = a(i, k) * b(l, j);
    return s;
}

Matrix9c SingleModeSuperOperator::scattering_sum() const {
    return scattering_blocks[0] + scattering_blocks[1] + scattering_blocks[2] + scattering_blocks[3];
}

SingleModeSuperOperator assemble_single_mode(double q, const SpinMatrices& spin, const InteractionTensor& u,
                                             const AveragedMoments& moments,
                                             const Eigen::Matrix3cd& kernel_state,
                                             const AssemblyOptions& options, const Units& units) {
    require_spin_one(u);
    if (spin.basis.dim != 3) throw std::invalid_argument("transport requires spin-1 matrices");
    if (!(q >= 0.0)) throw std::invalid_argument("quadratic Zeeman energy q must be non-negative");
    if (!(options.kinetic_time_scale > 0.0)) throw std::invalid_argument("kinetic time scale must be positive");

    const Eigen::Matrix3cd id = Eigen::Matrix3cd::Identity();
    const Eigen::Matrix3cd d = spin.sz2.cast<Complex>();

    SingleModeSuperOperator s;
    s.q = q;
    s.statistics = options.statistics;
    s.kinetic_time_scale = options.kinetic_time_scale;
    s.drift_offset = 0.0;

    const double scale = options.kinetic_time_scale;
    s.zeeman_block = (scale * Complex(0.0, q / units.hbar)) * (sandwich(d, id) - sandwich(id, d));

    const Eigen::Matrix3cd x = scattering_contraction(u, kernel_state, options.statistics);
    const double measure = 1.0 / (2.0 * constants::pi * units.hbar);
    const Eigen::Matrix3cd force = x * (moments.force * measure * Complex(0.0, -1.0));
    const Eigen::Matrix3cd tau = x * (moments.m0 * measure * Complex(0.0, -1.0 / units.hbar));

    for (auto& b : s.scattering_blocks) b.setZero();
    if (options.force) {
        s.scattering_blocks[0] = -scale * sandwich(force, id);
        s.scattering_blocks[1] = -scale * sandwich(id, force.adjoint());
    }
    if (options.relaxation) {
        s.scattering_blocks[2] = -scale * sandwich(tau, id);
        s.scattering_blocks[3] = -scale * sandwich(id, tau.adjoint());
    }
    s.m_matrix = s.zeeman_block + s.scattering_sum();
    return s;
}

PairPopulations pair_populations(const Eigen::Matrix3cd& rho) {
    PairPopulations out;
    const double tr = rho.trace().real();
    if (!(tr > 0.0)) return out;
    const double p0 = rho(1, 1).real() / tr;
    const double pp = rho(0, 0).real() / tr;
    const double pm = rho(2, 2).real() / tr;
    const double raw00 = p0 * p0;
    const double rawpm = 2.0 * pp * pm;
    const double sum = raw00 + rawpm;
    if (sum > 1e-12) {
        out.p00 = raw00 / sum;
        out.ppm = rawpm / sum;
    }
    return out;
}

void Trajectory::push(double t, const Eigen::Matrix3cd& rho) {
    times.push_back(t);
    states.push_back({rho, t});
    observables.push_back(pair_populations(rho));
}

double generator_norm(const Matrix9c& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

Trajectory evolve_rk4(const SingleModeSuperOperator& superop, const SpinDensityMatrix& rho0, double dt,
                      long n_steps, long sample_every) {
    if (!(dt > 0.0) || n_steps < 0 || sample_every < 1)
        throw std::invalid_argument("evolve_rk4: need dt > 0, n_steps >= 0, sample_every >= 1");
    const double guard = dt * generator_norm(superop.m_matrix);
    if (!(guard < 0.1))
        throw std::invalid_argument("evolve_rk4: stability guard violated (dt*|M| = " + std::to_string(guard) + ")");
    require_hermitian(rho0.rho, "evolve_rk4");
    const double tr = rho0.trace();
    if (!(tr > 0.0 && tr <= 1.0 + 1e-10)) throw std::invalid_argument("evolve_rk4: trace must lie in (0, 1]");

    const Matrix9c& m = superop.m_matrix;
    Trajectory traj;
    traj.push(rho0.time, rho0.rho);
    Vector9c v = vectorize(rho0.rho);
    for (long step = 1; step <= n_steps; ++step) {
        const Vector9c k1 = m * v;
        const Vector9c k2 = m * (v + 0.5 * dt * k1);
        const Vector9c k3 = m * (v + 0.5 * dt * k2);
        const Vector9c k4 = m * (v + dt * k3);
        v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        Eigen::Matrix3cd rho = unvectorize(v);
        if (!rho.allFinite()) throw NumericalError("evolve_rk4: non-finite state at step " + std::to_string(step));
        const double defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        traj.max_presymmetrization_defect = std::max(traj.max_presymmetrization_defect, defect);
        rho = 0.5 * (rho + rho.adjoint()).eval();
        v = vectorize(rho);
        if (step % sample_every == 0) traj.push(rho0.time + step * dt, rho);
    }
    return traj;
}

Trajectory evolve_eigen(const SingleModeSuperOperator& superop, const SpinDensityMatrix& rho0,
                        const std::vector<double>& times) {
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1])) throw std::invalid_argument("evolve_eigen: times must be strictly increasing");
    const Vector9c v0 = vectorize(rho0.rho);
    Trajectory traj;

    Eigen::ComplexEigenSolver<Matrix9c> es(superop.m_matrix);
    bool fallback = es.info() != Eigen::Success;
    Matrix9c vecs;
    Vector9c coeff;
    if (!fallback) {
        vecs = es.eigenvectors();
        Eigen::JacobiSVD<Matrix9c> svd(vecs);
        const auto sv = svd.singularValues();
        const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
        fallback = !(cond <= 1e12);
        if (!fallback) coeff = vecs.partialPivLu().solve(v0);
    }
    traj.used_exponential_fallback = fallback;

    for (double t : times) {
        const double tau = t - rho0.time;
        Vector9c v;
        if (fallback) {
            const Matrix9c mt = superop.m_matrix * tau;
            v = mt.exp() * v0;
        } else {
            Vector9c c = coeff;
            for (int k = 0; k < 9; ++k) c(k) *= std::exp(es.eigenvalues()(k) * tau);
            v = vecs * c;
        }
        const Eigen::Matrix3cd rho = unvectorize(v);
        if (!rho.allFinite()) throw NumericalError("evolve_eigen: non-finite state at t=" + std::to_string(t));
        traj.push(t, rho);
    }
    return traj;
}

}  // namespace spinkin
