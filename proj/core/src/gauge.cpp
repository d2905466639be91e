#include "spinkin/gauge.hpp"

#include <cmath>
#include <stdexcept>

namespace spinkin {

void Grid3::validate() const {
    if (nx < 3 || ny < 3 || nz < 3) throw std::invalid_argument("grid needs at least 3 points per axis");
    if (!(dx > 0.0 && dy > 0.0 && dz > 0.0)) throw std::invalid_argument("grid spacings must be positive");
}

ScalarField3 sample(const Grid3& grid, const std::function<double(double, double, double)>& fn) {
    ScalarField3 out(grid);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j)
            for (int k = 0; k < grid.nz; ++k) out.at(i, j, k) = fn(grid.x(i), grid.y(j), grid.z(k));
    return out;
}

std::vector<double> partial_derivative(const Grid3& grid, const std::vector<double>& v, int axis) {
    grid.validate();
    const int n = grid.points(axis);
    const double h = grid.spacing(axis);
    const std::size_t stride = axis == 0 ? static_cast<std::size_t>(grid.ny) * grid.nz
                               : axis == 1 ? static_cast<std::size_t>(grid.nz)
                                           : 1;
    std::vector<double> d(v.size());
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j)
            for (int k = 0; k < grid.nz; ++k) {
                const int pos = axis == 0 ? i : axis == 1 ? j : k;
                const std::size_t p = grid.index(i, j, k);
                double value;
                if (pos == 0)
                    value = (4.0 * (v[p + stride] - v[p]) - (v[p + 2 * stride] - v[p])) / (2.0 * h);
                else if (pos == n - 1)
                    value = (4.0 * (v[p] - v[p - stride]) - (v[p] - v[p - 2 * stride])) / (2.0 * h);
                else
                    value = (v[p + stride] - v[p - stride]) / (2.0 * h);
                d[p] = value;
            }
    return d;
}

ScalarField3 divergence(const VectorField3& f) {
    ScalarField3 out(f.grid);
    for (int axis = 0; axis < 3; ++axis) {
        const auto d = partial_derivative(f.grid, f.components[axis], axis);
        for (std::size_t p = 0; p < d.size(); ++p) out.values[p] += d[p];
    }
    return out;
}

VectorField3 curl(const VectorField3& f) {
    VectorField3 out(f.grid);
    const auto dyFz = partial_derivative(f.grid, f.components[2], 1);
    const auto dzFy = partial_derivative(f.grid, f.components[1], 2);
    const auto dzFx = partial_derivative(f.grid, f.components[0], 2);
    const auto dxFz = partial_derivative(f.grid, f.components[2], 0);
    const auto dxFy = partial_derivative(f.grid, f.components[1], 0);
    const auto dyFx = partial_derivative(f.grid, f.components[0], 1);
    for (std::size_t p = 0; p < f.grid.size(); ++p) {
        out.components[0][p] = dyFz[p] - dzFy[p];
        out.components[1][p] = dzFx[p] - dxFz[p];
        out.components[2][p] = dxFy[p] - dyFx[p];
    }
    return out;
}

SU3GaugeField::SU3GaugeField(const Grid3& g, double e) : grid(g), coupling(e) {
    for (auto& colour : a)
        for (auto& comp : colour) comp.assign(g.size(), 0.0);
}

SU3GaugeField su3_field_from_force(const Eigen::VectorXd& positions, const std::vector<Su3Components>& force,
                                   const Embedding& embedding, double coupling) {
    if (coupling == 0.0) throw std::invalid_argument("su3_field_from_force: coupling e must be non-zero");
    const auto n = positions.size();
    if (n < 3 || static_cast<std::size_t>(n) != force.size())
        throw std::invalid_argument("su3_field_from_force: need >= 3 positions with one force sample each");
    Grid3 g;
    g.nx = static_cast<int>(n);
    g.ny = embedding.ny;
    g.nz = embedding.nz;
    g.dx = (positions(n - 1) - positions(0)) / (n - 1);
    g.dy = embedding.dy;
    g.dz = embedding.dz;
    g.x0 = positions(0);
    g.y0 = -0.5 * (g.ny - 1) * g.dy;
    g.z0 = -0.5 * (g.nz - 1) * g.dz;
    g.validate();

    SU3GaugeField field(g, coupling);
    for (int c = 0; c < 8; ++c) {
        double integral = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            if (i > 0) integral += 0.5 * (force[i - 1].c[c] + force[i].c[c]) * (positions(i) - positions(i - 1));
            const double value = -integral / coupling;
            for (int j = 0; j < g.ny; ++j)
                for (int k = 0; k < g.nz; ++k) field.a[c][1][g.index(i, j, k)] = value;
        }
    }
    return field;
}

int FieldStrength::pair(int mu, int nu) {
    static const int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    if (mu < 0 || mu > 3 || nu < 0 || nu > 3 || mu == nu) throw std::invalid_argument("invalid index pair");
    return table[mu][nu];
}

double FieldStrength::value(int a, int mu, int nu, std::size_t point) const {
    if (mu == nu) return 0.0;
    const double v = f[a][pair(mu, nu)][point];
    return mu < nu ? v : -v;
}

FieldStrength field_strength(const SU3GaugeField& a, const GellMannBasis& basis, const SU3GaugeField* previous,
                             double dt) {
    const Grid3& g = a.grid;
    const std::size_t np = g.size();
    FieldStrength out;
    out.grid = g;
    out.time_derivatives = previous != nullptr;
    if (previous && !(dt > 0.0)) throw std::invalid_argument("field_strength: dt must be positive with two slices");

    // d[c][mu][nu] = d_mu A^c_nu
    std::array<std::array<std::array<std::vector<double>, 4>, 4>, 8> d;
    for (int c = 0; c < 8; ++c)
        for (int nu = 0; nu < 4; ++nu) {
            d[c][0][nu].assign(np, 0.0);
            if (previous)
                for (std::size_t p = 0; p < np; ++p) d[c][0][nu][p] = (a.a[c][nu][p] - previous->a[c][nu][p]) / dt;
            for (int mu = 1; mu < 4; ++mu) d[c][mu][nu] = partial_derivative(g, a.a[c][nu], mu - 1);
        }

    for (int c = 0; c < 8; ++c)
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = mu + 1; nu < 4; ++nu) {
                std::vector<double>& f = out.f[c][FieldStrength::pair(mu, nu)];
                f.assign(np, 0.0);
                for (std::size_t p = 0; p < np; ++p) f[p] = d[c][mu][nu][p] - d[c][nu][mu][p];
                for (int b = 0; b < 8; ++b)
                    for (int e = 0; e < 8; ++e) {
                        const double fabc = basis.f(c, b, e);
                        if (fabc == 0.0) continue;
                        for (std::size_t p = 0; p < np; ++p)
                            f[p] += a.coupling * fabc * a.a[b][mu][p] * a.a[e][nu][p];
                    }
            }
    return out;
}

namespace {

double metric_sign(Metric metric, int mu, int nu) {
    if (metric == Metric::Euclidean) return 1.0;
    return (mu == 0) != (nu == 0) ? -1.0 : 1.0;
}

}  // namespace

ScalarField3 yang_mills_lagrangian(const FieldStrength& f, const GellMannBasis& basis, Metric metric) {
    ScalarField3 out(f.grid);
    for (std::size_t p = 0; p < f.grid.size(); ++p) {
        double sum = 0.0;
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
                if (mu == nu) continue;
                Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
                for (int c = 0; c < 8; ++c) m += f.value(c, mu, nu, p) * basis.generators[c];
                sum += metric_sign(metric, mu, nu) * (m * m).trace().real();
            }
        out.values[p] = -0.25 * sum;
    }
    return out;
}

ScalarField3 yang_mills_lagrangian_components(const FieldStrength& f, Metric metric) {
    ScalarField3 out(f.grid);
    for (std::size_t p = 0; p < f.grid.size(); ++p) {
        double sum = 0.0;
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
                if (mu == nu) continue;
                double s = 0.0;
                for (int c = 0; c < 8; ++c) s += f.value(c, mu, nu, p) * f.value(c, mu, nu, p);
                sum += metric_sign(metric, mu, nu) * s;
            }
        out.values[p] = -0.125 * sum;
    }
    return out;
}

PotentialEnergyDiagnostic potential_energy_diagnostic(const Eigen::VectorXd& positions,
                                                      const std::vector<Su3Components>& force,
                                                      const std::vector<double>& lagrangian, double coupling) {
    const auto n = static_cast<std::size_t>(positions.size());
    if (force.size() != n || lagrangian.size() != n)
        throw std::invalid_argument("potential_energy_diagnostic: inputs must share the position axis");
    const GellMannBasis& basis = gellmann_basis();
    PotentialEnergyDiagnostic out;
    std::array<double, 8> integral{};
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0)
            for (int c = 0; c < 8; ++c)
                integral[c] += 0.5 * (force[i - 1].c[c] + force[i].c[c]) * (positions(i) - positions(i - 1));
        Eigen::Matrix3cd v = Eigen::Matrix3cd::Zero();
        for (int c = 0; c < 8; ++c) v += coupling * integral[c] * basis.generators[c];
        const Eigen::Matrix3cd diff = -v - lagrangian[i] * Eigen::Matrix3cd::Identity();
        out.potential.push_back(v);
        out.residual.push_back(diff.norm());
        out.max_residual = std::max(out.max_residual, out.residual.back());
    }
    return out;
}

}  // namespace spinkin
