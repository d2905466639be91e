#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "spinkin/spin_algebra.hpp"

namespace spinkin {

/// Uniform 3D grid; linear index (i*ny + j)*nz + k, x slowest.
struct Grid3 {
    int nx = 3, ny = 3, nz = 3;
    double dx = 1.0, dy = 1.0, dz = 1.0;
    double x0 = 0.0, y0 = 0.0, z0 = 0.0;

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny * nz; }
    std::size_t index(int i, int j, int k) const { return (static_cast<std::size_t>(i) * ny + j) * nz + k; }
    double x(int i) const { return x0 + i * dx; }
    double y(int j) const { return y0 + j * dy; }
    double z(int k) const { return z0 + k * dz; }
    int points(int axis) const { return axis == 0 ? nx : axis == 1 ? ny : nz; }
    double spacing(int axis) const { return axis == 0 ? dx : axis == 1 ? dy : dz; }
    /// Throws std::invalid_argument for < 3 points or non-positive spacing on any axis.
    void validate() const;
};

struct ScalarField3 {
    Grid3 grid;
    std::vector<double> values;

    ScalarField3() = default;
    explicit ScalarField3(const Grid3& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
    double& at(int i, int j, int k) { return values[grid.index(i, j, k)]; }
    double at(int i, int j, int k) const { return values[grid.index(i, j, k)]; }
};

struct VectorField3 {
    Grid3 grid;
    std::array<std::vector<double>, 3> components;

    VectorField3() = default;
    explicit VectorField3(const Grid3& g) : grid(g) {
        for (auto& c : components) c.assign(g.size(), 0.0);
    }
};

ScalarField3 sample(const Grid3& grid, const std::function<double(double, double, double)>& fn);

/// d/d(axis) with second-order central differences, second-order one-sided at the faces.
std::vector<double> partial_derivative(const Grid3& grid, const std::vector<double>& values, int axis);

ScalarField3 divergence(const VectorField3& f);
VectorField3 curl(const VectorField3& f);

enum class PoissonMethod { Auto, ConjugateGradient, Spectral };

struct PoissonOptions {
    PoissonMethod method = PoissonMethod::Auto;
    double tolerance = 1e-8;  // on |lap(phi) - source|_inf / max(1, |source|_inf)
    int max_iterations = 20000;
};

struct PoissonResult {
    ScalarField3 phi;
    double residual = 0.0;
    int iterations = 0;
    PoissonMethod method = PoissonMethod::ConjugateGradient;
};

/// |7-point laplacian(phi) - source|_inf over interior points.
double laplacian_residual(const ScalarField3& phi, const ScalarField3& source);

/// Solves lap(phi) = source; boundary supplies the Dirichlet values on the six faces.
PoissonResult solve_scalar_potential(const ScalarField3& source, const ScalarField3& boundary,
                                     const PoissonOptions& options = {});

/// Coulomb-gauge A with lap(A) = t curl(curl_f0) and zero Dirichlet faces.
VectorField3 solve_vector_potential(const VectorField3& curl_f0, double elapsed_time,
                                    const PoissonOptions& options = {});

/// A^a_mu on one time slice; index a[color][mu], mu = 0 (t), 1..3 (x, y, z).
struct SU3GaugeField {
    Grid3 grid;
    double coupling = 1.0;
    std::array<std::array<std::vector<double>, 4>, 8> a;

    SU3GaugeField() = default;
    SU3GaugeField(const Grid3& g, double e);
};

/// Transverse extent used when a 1D force profile is extruded along y and z.
struct Embedding {
    int ny = 3, nz = 3;
    double dy = 1.0, dz = 1.0;
};

/// A^a_x(x) = -(1/e) int_{x_0}^x c_a dx' by trapezoid, constant along y and z.
SU3GaugeField su3_field_from_force(const Eigen::VectorXd& positions, const std::vector<Su3Components>& force,
                                   const Embedding& embedding, double coupling);

/// F^a_{mu nu} for mu < nu, pairs ordered 01, 02, 03, 12, 13, 23.
struct FieldStrength {
    Grid3 grid;
    std::array<std::array<std::vector<double>, 6>, 8> f;
    bool time_derivatives = false;

    static int pair(int mu, int nu);
    /// Antisymmetric accessor; zero on the diagonal.
    double value(int a, int mu, int nu, std::size_t point) const;
};

/// With previous != nullptr the time derivative is (A - A_previous) / dt, otherwise it is zero
/// and time_derivatives stays false.
FieldStrength field_strength(const SU3GaugeField& a, const GellMannBasis& basis = gellmann_basis(),
                             const SU3GaugeField* previous = nullptr, double dt = 0.0);

enum class Metric { Euclidean, Minkowski };

/// -1/4 sum_{mu nu} Tr(F_{mu nu} F_{mu nu}) with F = sum_a F^a T_a.
ScalarField3 yang_mills_lagrangian(const FieldStrength& f, const GellMannBasis& basis = gellmann_basis(),
                                   Metric metric = Metric::Euclidean);
/// -1/8 sum_{mu nu} sum_a (F^a_{mu nu})^2.
ScalarField3 yang_mills_lagrangian_components(const FieldStrength& f, Metric metric = Metric::Euclidean);

/// Potential-energy line integral V(x) = e sum_a (int c_a dx) T_a and the residual
/// |-V(x) - L(x) I|_F against the Lagrangian along x. The kinetic term is not included.
struct PotentialEnergyDiagnostic {
    std::vector<Eigen::Matrix3cd> potential;
    std::vector<double> residual;
    double max_residual = 0.0;
};

PotentialEnergyDiagnostic potential_energy_diagnostic(const Eigen::VectorXd& positions,
                                                      const std::vector<Su3Components>& force,
                                                      const std::vector<double>& lagrangian, double coupling);

}  // namespace spinkin
