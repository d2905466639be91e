#include "spinkin/suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>
#include <fmt/format.h>

#include "spinkin/config.hpp"
#include "spinkin/equilibrium.hpp"
#include "spinkin/gauge.hpp"
#include "spinkin/oracles.hpp"
#include "spinkin/spin_algebra.hpp"
#include "spinkin/transport.hpp"

namespace spinkin::validation {

namespace {

SuiteResult verdict(const std::string& name, double defect, double tolerance, const std::string& what) {
    SuiteResult r;
    r.name = name;
    r.max_defect = defect;
    r.passed = defect <= tolerance;
    r.detail = fmt::format("{} (tolerance {:.1e})", what, tolerance);
    return r;
}

SuiteResult racah_suite() {
    double worst = 0.0;
    const double spins[] = {0.5, 1.0, 1.5, 2.0};
    for (double j1 : spins)
        for (double j2 : spins)
            for (double J = std::abs(j1 - j2); J <= j1 + j2 + 1e-9; J += 1.0)
                for (double m1 = -j1; m1 <= j1 + 1e-9; m1 += 1.0)
                    for (double m2 = -j2; m2 <= j2 + 1e-9; m2 += 1.0) {
                        const double M = m1 + m2;
                        if (std::abs(M) > J + 1e-9) continue;
                        worst = std::max(worst, std::abs(clebsch_gordan(j1, m1, j2, m2, J, M) -
                                                         oracle::racah_clebsch_gordan(j1, m1, j2, m2, J, M)));
                    }
    return verdict("racah", worst, 1e-13, "Clebsch-Gordan vs Racah formula, j <= 2");
}

SuiteResult tensor_suite() {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double g0 = d(rng), g2 = d(rng);
        const auto u = build_interaction_tensor(SpinBasis::make(1.0), {{0, g0}, {2, g2}});
        const auto channels = oracle::channel_sum_tensor(g0, g2);
        const auto closed = oracle::closed_form_tensor(g0, g2);
        for (std::size_t p = 0; p < 81; ++p)
            worst = std::max({worst, std::abs(u.data()[p] - channels[p]), std::abs(u.data()[p] - closed[p])});
    }
    return verdict("tensor", worst, 1e-12, "interaction tensor vs channel sum and closed form");
}

SuiteResult su3_suite() {
    const auto& basis = gellmann_basis();
    double worst = 0.0;
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
            for (int c = 0; c < 8; ++c)
                worst = std::max(worst, std::abs(basis.f(a, b, c) - oracle::commutator_structure_constant(a, b, c)));
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Matrix3cd h = oracle::random_hermitian(rng);
        worst = std::max(worst, (su3_reconstruct(su3_decompose(h)) - h).cwiseAbs().maxCoeff());
    }
    return verdict("su3", worst, 1e-12, "f_abc vs commutator trace, decompose/reconstruct round trip");
}

SuiteResult jacobi_suite(const Hooks& hooks) {
    auto f = gellmann_basis().structure_constants;
    if (hooks.mutate_structure_constants) hooks.mutate_structure_constants(f);
    return verdict("jacobi", oracle::jacobi_defect(f), 1e-12, "Jacobi identity for f_abc");
}

SuiteResult contraction_suite() {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto u = build_interaction_tensor(SpinBasis::make(1.0), {{0, d(rng)}, {2, d(rng)}});
        const Eigen::Matrix3cd k = oracle::random_hermitian(rng);
        worst = std::max({worst, (direct_contraction(u, k) - oracle::brute_direct(u, k)).cwiseAbs().maxCoeff(),
                          (exchange_contraction(u, k) - oracle::brute_exchange(u, k)).cwiseAbs().maxCoeff()});
    }
    return verdict("contraction", worst, 1e-13, "direct/exchange contractions vs explicit loops");
}

SuiteResult fermi_suite() {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    const Units units = Units::reduced_units();
    const auto spin = make_spin_matrices(1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto u = build_interaction_tensor(SpinBasis::make(1.0), {{0, d(rng)}, {2, d(rng)}});
        AveragedMoments m;
        m.m0 = d(rng);
        m.force = d(rng);
        AssemblyOptions opt;
        opt.statistics = Statistics::Fermi;
        const auto op = assemble_single_mode(std::abs(d(rng)), spin, u, m, oracle::random_hermitian(rng), opt, units);
        worst = std::max(worst, op.scattering_sum().cwiseAbs().maxCoeff());
    }
    return verdict("fermi", worst, 1e-14, "Fermi scattering superblocks, 100 random draws");
}

SuiteResult roundtrip_suite() {
    std::mt19937_64 rng(29);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Matrix3cd h = oracle::random_hermitian(rng);
        worst = std::max(worst, (unvectorize(vectorize(h)) - h).cwiseAbs().maxCoeff());
        worst = std::max(worst, (su3_reconstruct(su3_decompose(h)) - h).cwiseAbs().maxCoeff());
    }
    const std::string text = "a.b = 1.5\n# comment\nc = x y\nd.e.f = 1e-6,2e-6\n";
    const Config c = Config::parse(text);
    if (Config::parse(c.emit()).entries() != c.entries()) worst = std::max(worst, 1.0);
    return verdict("roundtrip", worst, 1e-12, "vectorize, SU(3) and config round trips");
}

SuiteResult convergence_suite() {
    const double stencil = stencil_convergence_order();
    const double poisson = poisson_convergence_ratio();
    const double rk4 = rk4_convergence_order();
    SuiteResult r;
    r.name = "convergence";
    r.passed = stencil >= 1.8 && stencil <= 2.2 && rk4 >= 3.8 && rk4 <= 4.2 && poisson >= 3.5 && poisson <= 4.5;
    r.max_defect = std::max({std::abs(stencil - 2.0), std::abs(rk4 - 4.0), std::abs(std::log2(poisson) - 2.0)});
    r.detail = fmt::format("stencil order {:.3f} [1.8, 2.2], poisson ratio {:.3f} [3.5, 4.5], rk4 order {:.3f} [3.8, 4.2]",
                           stencil, poisson, rk4);
    return r;
}

SuiteResult equilibrium_suite() {
    TrapConfig trap{2.0 * constants::pi * 15.0, 1.4431e-25, 1, 0.0};
    const double t = 10e-6;
    const double p_max = default_momentum_cutoff(trap, t);
    const auto grid = PhaseSpaceGrid::make(0.0, 3e-4, 32, p_max, 1024);
    const double mu = default_chemical_potential(trap, grid, t);
    const auto f = bose_equilibrium(grid, trap, ThermalProfile::constant(grid, t, mu));
    const auto n = local_density(f, grid);
    double worst = 0.0;
    for (Eigen::Index r = 0; r < grid.positions.size(); ++r) {
        const double ref = oracle::bose_line_density(grid.positions[r], t, mu, trap.mass, trap.omega);
        worst = std::max(worst, std::abs(n.n[r] - ref) / ref);
    }
    return verdict("equilibrium", worst, 1e-8, "local density vs Li_1/2 series (relative)");
}

}  // namespace

double stencil_convergence_order() {
    auto err = [](int n) {
        const double h = 1.0 / (n - 1);
        Eigen::VectorXd v(n), exact(n);
        for (int k = 0; k < n; ++k) {
            v[k] = std::sin(2.0 * k * h);
            exact[k] = 2.0 * std::cos(2.0 * k * h);
        }
        return (gradient(v, h) - exact).cwiseAbs().maxCoeff();
    };
    return std::log2(err(33) / err(65));
}

double poisson_convergence_ratio() {
    // Error of each grid against the solution on a 4x finer grid at shared nodes.
    auto solve = [](int n) {
        Grid3 g;
        g.nx = g.ny = g.nz = n;
        g.dx = g.dy = g.dz = 1.0 / (n - 1);
        const ScalarField3 src = sample(g, [](double x, double y, double z) {
            return std::exp(x) * std::sin(2.0 * y + 0.5) * (1.0 + z * z);
        });
        PoissonOptions opt;
        opt.tolerance = 1e-10;
        return solve_scalar_potential(src, ScalarField3(g), opt).phi;
    };
    const ScalarField3 coarse = solve(9), mid = solve(17), fine = solve(65);
    auto err = [&](const ScalarField3& phi) {
        const int stride = (fine.grid.nx - 1) / (phi.grid.nx - 1);
        double e = 0.0;
        for (int i = 0; i < phi.grid.nx; ++i)
            for (int j = 0; j < phi.grid.ny; ++j)
                for (int k = 0; k < phi.grid.nz; ++k)
                    e = std::max(e, std::abs(phi.at(i, j, k) - fine.at(i * stride, j * stride, k * stride)));
        return e;
    };
    return err(coarse) / err(mid);
}

double rk4_convergence_order() {
    std::mt19937_64 rng(31);
    const auto u = build_interaction_tensor(SpinBasis::make(1.0), {{0, 0.7}, {2, 0.4}});
    AveragedMoments m;
    m.m0 = 1.0;
    const auto op = assemble_single_mode(1.0, make_spin_matrices(1.0), u, m, prepared_state(0.3).rho, {},
                                         Units::reduced_units());
    const SpinDensityMatrix rho0 = prepared_state(0.2);
    const double t_end = 2.0;
    const Vector9c exact = (op.m_matrix * t_end).exp() * vectorize(rho0.rho);
    auto err = [&](long steps) {
        const auto traj = evolve_rk4(op, rho0, t_end / steps, steps, steps);
        return (vectorize(traj.states.back().rho) - exact).cwiseAbs().maxCoeff();
    };
    return std::log2(err(200) / err(400));
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"racah",     "tensor",    "su3",         "jacobi",     "contraction",
                                                   "fermi",     "roundtrip", "convergence", "equilibrium"};
    return names;
}

SuiteResult run_suite(const std::string& name, const Hooks& hooks) {
    if (name == "racah") return racah_suite();
    if (name == "tensor") return tensor_suite();
    if (name == "su3") return su3_suite();
    if (name == "jacobi") return jacobi_suite(hooks);
    if (name == "contraction") return contraction_suite();
    if (name == "fermi") return fermi_suite();
    if (name == "roundtrip") return roundtrip_suite();
    if (name == "convergence") return convergence_suite();
    if (name == "equilibrium") return equilibrium_suite();
    throw std::invalid_argument("unknown validation suite '" + name + "'");
}

std::vector<SuiteResult> run_suites(const std::string& name, const Hooks& hooks) {
    if (!name.empty()) return {run_suite(name, hooks)};
    std::vector<SuiteResult> out;
    for (const auto& n : suite_names()) out.push_back(run_suite(n, hooks));
    return out;
}

std::string format_report(const std::vector<SuiteResult>& results) {
    std::string out = fmt::format("{:<12} {:<6} {:>12}  {}\n", "suite", "status", "max defect", "checks");
    for (const auto& r : results)
        out += fmt::format("{:<12} {:<6} {:>12.3e}  {}\n", r.name, r.passed ? "pass" : "FAIL", r.max_defect, r.detail);
    return out;
}

}  // namespace spinkin::validation
