#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <fftw3.h>

#include "spinkin/common.hpp"
#include "spinkin/gauge.hpp"

namespace spinkin {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

bool homogeneous_boundary(const ScalarField3& b) {
    const Grid3& g = b.grid;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            for (int k = 0; k < g.nz; ++k) {
                const bool face = i == 0 || j == 0 || k == 0 || i == g.nx - 1 || j == g.ny - 1 || k == g.nz - 1;
                if (face && b.at(i, j, k) != 0.0) return false;
            }
    return true;
}

ScalarField3 with_boundary(const ScalarField3& boundary) {
    ScalarField3 phi(boundary.grid);
    const Grid3& g = boundary.grid;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            for (int k = 0; k < g.nz; ++k) {
                const bool face = i == 0 || j == 0 || k == 0 || i == g.nx - 1 || j == g.ny - 1 || k == g.nz - 1;
                if (face) phi.at(i, j, k) = boundary.at(i, j, k);
            }
    return phi;
}

// Interior unknowns of -lap(phi) = -source with Dirichlet data moved to the right-hand side.
struct InteriorSystem {
    int mx, my, mz;
    Eigen::SparseMatrix<double, Eigen::RowMajor> a;
    Eigen::VectorXd b;

    std::size_t index(int i, int j, int k) const { return (static_cast<std::size_t>(i) * my + j) * mz + k; }
};

InteriorSystem build_system(const ScalarField3& source, const ScalarField3& phi_boundary) {
    const Grid3& g = source.grid;
    InteriorSystem s{g.nx - 2, g.ny - 2, g.nz - 2, {}, {}};
    const std::size_t n = static_cast<std::size_t>(s.mx) * s.my * s.mz;
    const double cx = 1.0 / (g.dx * g.dx), cy = 1.0 / (g.dy * g.dy), cz = 1.0 / (g.dz * g.dz);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(7 * n);
    s.b.resize(static_cast<Eigen::Index>(n));
    for (int i = 0; i < s.mx; ++i)
        for (int j = 0; j < s.my; ++j)
            for (int k = 0; k < s.mz; ++k) {
                const auto row = static_cast<Eigen::Index>(s.index(i, j, k));
                const int gi = i + 1, gj = j + 1, gk = k + 1;
                double rhs = -source.at(gi, gj, gk);
                trip.emplace_back(row, row, 2.0 * (cx + cy + cz));
                auto neighbour = [&](int ni, int nj, int nk, double c) {
                    if (ni == 0 || nj == 0 || nk == 0 || ni == g.nx - 1 || nj == g.ny - 1 || nk == g.nz - 1)
                        rhs += c * phi_boundary.at(ni, nj, nk);
                    else
                        trip.emplace_back(row, static_cast<Eigen::Index>(s.index(ni - 1, nj - 1, nk - 1)), -c);
                };
                neighbour(gi - 1, gj, gk, cx);
                neighbour(gi + 1, gj, gk, cx);
                neighbour(gi, gj - 1, gk, cy);
                neighbour(gi, gj + 1, gk, cy);
                neighbour(gi, gj, gk - 1, cz);
                neighbour(gi, gj, gk + 1, cz);
                s.b(row) = rhs;
            }
    s.a.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    s.a.setFromTriplets(trip.begin(), trip.end());
    return s;
}

void scatter(const InteriorSystem& s, const Eigen::VectorXd& x, ScalarField3& phi) {
    for (int i = 0; i < s.mx; ++i)
        for (int j = 0; j < s.my; ++j)
            for (int k = 0; k < s.mz; ++k) phi.at(i + 1, j + 1, k + 1) = x(static_cast<Eigen::Index>(s.index(i, j, k)));
}

PoissonResult solve_cg(const ScalarField3& source, const ScalarField3& boundary, const PoissonOptions& opt,
                       const ScalarField3* guess = nullptr) {
    PoissonResult out;
    out.method = PoissonMethod::ConjugateGradient;
    out.phi = with_boundary(boundary);
    const InteriorSystem s = build_system(source, out.phi);
    const double target = opt.tolerance * std::max(1.0, max_abs(source.values));
    const double bnorm = s.b.norm();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(s.b.size());
    if (guess)
        for (int i = 0; i < s.mx; ++i)
            for (int j = 0; j < s.my; ++j)
                for (int k = 0; k < s.mz; ++k)
                    x(static_cast<Eigen::Index>(s.index(i, j, k))) = guess->at(i + 1, j + 1, k + 1);
    if (bnorm == 0.0) {
        scatter(s, x, out.phi);
        out.residual = laplacian_residual(out.phi, source);
        return out;
    }
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double, Eigen::RowMajor>, Eigen::Lower | Eigen::Upper> cg;
    cg.compute(s.a);
    double requested = 0.5 * target;
    int used = 0;
    for (int attempt = 0; attempt < 6; ++attempt) {
        cg.setMaxIterations(std::max(1, opt.max_iterations - used));
        cg.setTolerance(std::max(requested / bnorm, 1e-16));
        x = cg.solveWithGuess(s.b, x);
        used += static_cast<int>(cg.iterations());
        scatter(s, x, out.phi);
        out.residual = laplacian_residual(out.phi, source);
        out.iterations = used;
        if (out.residual < target) return out;
        if (used >= opt.max_iterations) break;
        requested *= 0.1;
    }
    std::ostringstream msg;
    msg << "Poisson CG did not converge: residual " << out.residual << " > " << target << " after " << used
        << " iterations";
    throw NumericalError(msg.str());
}

PoissonResult solve_spectral(const ScalarField3& source) {
    const Grid3& g = source.grid;
    const int mx = g.nx - 2, my = g.ny - 2, mz = g.nz - 2;
    const std::size_t n = static_cast<std::size_t>(mx) * my * mz;
    double* buf = fftw_alloc_real(n);
    fftw_plan forward, backward;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        forward = fftw_plan_r2r_3d(mx, my, mz, buf, buf, FFTW_RODFT00, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
        backward = fftw_plan_r2r_3d(mx, my, mz, buf, buf, FFTW_RODFT00, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
    }
    for (int i = 0; i < mx; ++i)
        for (int j = 0; j < my; ++j)
            for (int k = 0; k < mz; ++k) buf[(static_cast<std::size_t>(i) * my + j) * mz + k] = source.at(i + 1, j + 1, k + 1);
    fftw_execute(forward);
    auto eig = [](int m, double h) {
        std::vector<double> e(m);
        for (int q = 0; q < m; ++q) e[q] = (2.0 * std::cos(constants::pi * (q + 1) / (m + 1)) - 2.0) / (h * h);
        return e;
    };
    const auto ex = eig(mx, g.dx), ey = eig(my, g.dy), ez = eig(mz, g.dz);
    const double norm = 8.0 * (mx + 1.0) * (my + 1.0) * (mz + 1.0);
    for (int i = 0; i < mx; ++i)
        for (int j = 0; j < my; ++j)
            for (int k = 0; k < mz; ++k) buf[(static_cast<std::size_t>(i) * my + j) * mz + k] /= (ex[i] + ey[j] + ez[k]) * norm;
    fftw_execute(backward);

    PoissonResult out;
    out.method = PoissonMethod::Spectral;
    out.phi = ScalarField3(g);
    for (int i = 0; i < mx; ++i)
        for (int j = 0; j < my; ++j)
            for (int k = 0; k < mz; ++k) out.phi.at(i + 1, j + 1, k + 1) = buf[(static_cast<std::size_t>(i) * my + j) * mz + k];
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
    }
    fftw_free(buf);
    out.residual = laplacian_residual(out.phi, source);
    return out;
}

}  // namespace

double laplacian_residual(const ScalarField3& phi, const ScalarField3& source) {
    const Grid3& g = phi.grid;
    const double cx = 1.0 / (g.dx * g.dx), cy = 1.0 / (g.dy * g.dy), cz = 1.0 / (g.dz * g.dz);
    double worst = 0.0;
    for (int i = 1; i + 1 < g.nx; ++i)
        for (int j = 1; j + 1 < g.ny; ++j)
            for (int k = 1; k + 1 < g.nz; ++k) {
                const double c = phi.at(i, j, k);
                const double lap = cx * (phi.at(i + 1, j, k) - 2.0 * c + phi.at(i - 1, j, k)) +
                                   cy * (phi.at(i, j + 1, k) - 2.0 * c + phi.at(i, j - 1, k)) +
                                   cz * (phi.at(i, j, k + 1) - 2.0 * c + phi.at(i, j, k - 1));
                worst = std::max(worst, std::abs(lap - source.at(i, j, k)));
            }
    return worst;
}

PoissonResult solve_scalar_potential(const ScalarField3& source, const ScalarField3& boundary,
                                     const PoissonOptions& options) {
    source.grid.validate();
    if (boundary.values.size() != source.values.size())
        throw std::invalid_argument("solve_scalar_potential: boundary grid does not match the source grid");
    for (double v : source.values)
        if (!std::isfinite(v)) throw std::invalid_argument("solve_scalar_potential: source is not finite");
    const bool homogeneous = homogeneous_boundary(boundary);
    PoissonMethod method = options.method;
    const bool automatic = method == PoissonMethod::Auto;
    if (automatic) method = homogeneous ? PoissonMethod::Spectral : PoissonMethod::ConjugateGradient;
    if (method == PoissonMethod::Spectral) {
        if (!homogeneous) throw std::invalid_argument("spectral Poisson path needs zero Dirichlet boundaries");
        PoissonResult out = solve_spectral(source);
        const double target = options.tolerance * std::max(1.0, max_abs(source.values));
        // Round-off in the transform can leave the residual just above a tight target.
        if (!(out.residual < target) && automatic) return solve_cg(source, boundary, options, &out.phi);
        if (!(out.residual < target)) {
            std::ostringstream msg;
            msg << "spectral Poisson residual " << out.residual << " exceeds " << target;
            throw NumericalError(msg.str());
        }
        return out;
    }
    return solve_cg(source, boundary, options);
}

VectorField3 solve_vector_potential(const VectorField3& curl_f0, double elapsed_time, const PoissonOptions& options) {
    curl_f0.grid.validate();
    VectorField3 a(curl_f0.grid);
    if (elapsed_time == 0.0) return a;
    const VectorField3 cc = curl(curl_f0);
    const ScalarField3 zero(curl_f0.grid);
    for (int c = 0; c < 3; ++c) {
        ScalarField3 source(curl_f0.grid);
        for (std::size_t p = 0; p < source.values.size(); ++p) source.values[p] = elapsed_time * cc.components[c][p];
        try {
            a.components[c] = solve_scalar_potential(source, zero, options).phi.values;
        } catch (const NumericalError& e) {
            throw NumericalError(std::string("vector potential component ") + "xyz"[c] + ": " + e.what());
        }
    }
    return a;
}

}  // namespace spinkin
