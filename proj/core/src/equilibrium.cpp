#include "spinkin/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spinkin {

void TrapConfig::validate() const {
    if (!(omega > 0.0)) throw std::invalid_argument("trap omega must be positive");
    if (!(mass > 0.0)) throw std::invalid_argument("trap mass must be positive");
    if (dimension < 1 || dimension > 3) throw std::invalid_argument("trap dimension must be 1, 2 or 3");
    if (transverse_area < 0.0) throw std::invalid_argument("transverse area must be non-negative");
}

PhaseSpaceGrid PhaseSpaceGrid::make(double r_min, double r_max, int n_r, double p_max, int n_p) {
    if (n_r < 3 || n_p < 3) throw std::invalid_argument("phase-space grid needs at least 3 points per axis");
    if (!(r_max > r_min)) throw std::invalid_argument("position grid needs r_max > r_min");
    if (!(p_max > 0.0)) throw std::invalid_argument("momentum cutoff must be positive");
    PhaseSpaceGrid g;
    g.dr = (r_max - r_min) / (n_r - 1);
    g.dp = 2.0 * p_max / (n_p - 1);
    g.positions.resize(n_r);
    for (int k = 0; k < n_r; ++k) g.positions(k) = r_min + k * g.dr;
    g.momenta.resize(n_p);
    const double centre = 0.5 * (n_p - 1);
    for (int k = 0; k < n_p; ++k) g.momenta(k) = (k - centre) * g.dp;
    return g;
}

void PhaseSpaceGrid::validate() const {
    const auto nr = positions.size(), np = momenta.size();
    if (nr < 3 || np < 3) throw std::invalid_argument("phase-space grid needs at least 3 points per axis");
    for (Eigen::Index k = 1; k < nr; ++k)
        if (std::abs(positions(k) - positions(k - 1) - dr) > 1e-9 * std::abs(dr))
            throw std::invalid_argument("position grid is not uniform");
    for (Eigen::Index k = 1; k < np; ++k)
        if (std::abs(momenta(k) - momenta(k - 1) - dp) > 1e-9 * std::abs(dp))
            throw std::invalid_argument("momentum grid is not uniform");
    const double pmax = momenta.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < np; ++k)
        if (std::abs(momenta(k) + momenta(np - 1 - k)) > 1e-12 * pmax)
            throw std::invalid_argument("momentum grid is not symmetric about 0");
}

ThermalProfile ThermalProfile::constant(const PhaseSpaceGrid& grid, double temperature, double mu) {
    if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
    ThermalProfile p;
    p.temperature = Eigen::VectorXd::Constant(grid.positions.size(), temperature);
    p.chemical_potential = mu;
    return p;
}

ThermalProfile ThermalProfile::from_table(const PhaseSpaceGrid& grid,
                                          const std::vector<std::pair<double, double>>& table,
                                          double mu) {
    if (table.empty()) throw std::invalid_argument("temperature table is empty");
    auto rows = table;
    std::sort(rows.begin(), rows.end());
    ThermalProfile p;
    p.chemical_potential = mu;
    p.temperature.resize(grid.positions.size());
    for (Eigen::Index k = 0; k < grid.positions.size(); ++k) {
        const double x = grid.positions(k);
        double t;
        if (x <= rows.front().first) {
            t = rows.front().second;
        } else if (x >= rows.back().first) {
            t = rows.back().second;
        } else {
            auto hi = std::upper_bound(rows.begin(), rows.end(), x,
                                       [](double v, const std::pair<double, double>& r) { return v < r.first; });
            auto lo = hi - 1;
            const double w = (x - lo->first) / (hi->first - lo->first);
            t = (1.0 - w) * lo->second + w * hi->second;
        }
        if (!(t > 0.0)) throw std::invalid_argument("temperature table has a non-positive value");
        p.temperature(k) = t;
    }
    return p;
}

std::vector<std::pair<double, double>> read_temperature_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open temperature table '" + path + "'");
    std::vector<std::pair<double, double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double x, t;
        if (!(ss >> x)) continue;
        if (!(ss >> t))
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected two columns");
        rows.emplace_back(x, t);
    }
    if (rows.empty()) throw ConfigError("temperature table '" + path + "' has no rows");
    return rows;
}

double default_chemical_potential(const TrapConfig& trap, const PhaseSpaceGrid& grid, double t_max,
                                  const Units& units) {
    double vmin = trap.potential(grid.positions(0));
    for (Eigen::Index k = 1; k < grid.positions.size(); ++k) vmin = std::min(vmin, trap.potential(grid.positions(k)));
    return vmin - units.kB * t_max * std::log(11.0);
}

double default_momentum_cutoff(const TrapConfig& trap, double t_max, const Units& units) {
    return 8.0 * std::sqrt(trap.mass * units.kB * t_max);
}

EquilibriumDistribution bose_equilibrium(const PhaseSpaceGrid& grid, const TrapConfig& trap,
                                         const ThermalProfile& profile, Statistics statistics,
                                         const Units& units) {
    trap.validate();
    grid.validate();
    const auto nr = grid.positions.size(), np = grid.momenta.size();
    if (profile.temperature.size() != nr)
        throw std::invalid_argument("temperature profile does not match the position grid");
    EquilibriumDistribution f;
    f.statistics = statistics;
    f.values.resize(nr, np);
    const double mu = profile.chemical_potential;
    for (Eigen::Index r = 0; r < nr; ++r) {
        const double t = profile.temperature(r);
        if (!(t > 0.0)) throw std::invalid_argument("temperature must be positive everywhere");
        const double v = trap.potential(grid.positions(r));
        for (Eigen::Index k = 0; k < np; ++k) {
            const double p = grid.momenta(k);
            const double eps = p * p / (2.0 * trap.mass) + v;
            const double x = (eps - mu) / (units.kB * t);
            if (statistics == Statistics::Bose) {
                if (!(x > 0.0)) {
                    std::ostringstream msg;
                    msg << "divergent Bose occupation: energy - mu <= 0 at R=" << grid.positions(r)
                        << " p=" << p;
                    throw NumericalError(msg.str());
                }
                f.values(r, k) = 1.0 / std::expm1(x);
            } else {
                f.values(r, k) = 1.0 / (std::exp(x) + 1.0);
            }
        }
    }
    return f;
}

DensityProfile local_density(const EquilibriumDistribution& f, const PhaseSpaceGrid& grid,
                             const Units& units) {
    const auto nr = f.values.rows(), np = f.values.cols();
    if (nr != grid.positions.size() || np != grid.momenta.size())
        throw std::invalid_argument("distribution does not match the grid");
    DensityProfile out;
    out.n.resize(nr);
    const double norm = grid.dp / (2.0 * constants::pi * units.hbar);
    double worst_tail = 0.0;
    for (Eigen::Index r = 0; r < nr; ++r) {
        double sum = 0.0, peak = 0.0;
        for (Eigen::Index k = 0; k < np; ++k) {
            sum += f.values(r, k);
            peak = std::max(peak, f.values(r, k));
        }
        out.n(r) = norm * sum;
        if (peak > 0.0) {
            const double tail = std::max(f.values(r, 0), f.values(r, np - 1)) / peak;
            worst_tail = std::max(worst_tail, tail);
        }
    }
    if (worst_tail > 1e-10) {
        std::ostringstream msg;
        msg << "momentum cutoff too small: tail/peak occupation ratio " << worst_tail << " exceeds 1e-10";
        out.warnings.push_back(msg.str());
    }
    return out;
}

double liouville_residual(const EquilibriumDistribution& f, const PhaseSpaceGrid& grid,
                          const TrapConfig& trap) {
    const auto nr = f.values.rows(), np = f.values.cols();
    double worst = 0.0;
    const double k = trap.mass * trap.omega * trap.omega;
    for (Eigen::Index r = 1; r + 1 < nr; ++r)
        for (Eigen::Index q = 1; q + 1 < np; ++q) {
            const double dfdr = (f.values(r + 1, q) - f.values(r - 1, q)) / (2.0 * grid.dr);
            const double dfdp = (f.values(r, q + 1) - f.values(r, q - 1)) / (2.0 * grid.dp);
            const double res = grid.momenta(q) / trap.mass * dfdr - k * grid.positions(r) * dfdp;
            worst = std::max(worst, std::abs(res));
        }
    return worst;
}

Eigen::VectorXd gradient(const Eigen::VectorXd& v, double h) {
    const auto n = v.size();
    if (n < 3) throw std::invalid_argument("gradient needs at least 3 points");
    Eigen::VectorXd d(n);
    d(0) = (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h);
    for (Eigen::Index k = 1; k + 1 < n; ++k) d(k) = (v(k + 1) - v(k - 1)) / (2.0 * h);
    d(n - 1) = (3.0 * v(n - 1) - 4.0 * v(n - 2) + v(n - 3)) / (2.0 * h);
    return d;
}

namespace {

void quadrature_moments(const Eigen::VectorXd& n, const PhaseSpaceGrid& grid, KernelSide side,
                        const Units& units, const QuadratureOptions& opt, JumpMoments& out) {
    using C = std::complex<double>;
    const int N = static_cast<int>(n.size());
    const double dz = 2.0 * grid.dr;
    const double hbar = units.hbar;
    const int dir = side == KernelSide::J1 ? 1 : -1;
    for (int i = 0; i < N; ++i) {
        const int K = std::min({opt.half_width, i, N - 1 - i});
        if (K < 1) {
            out.m0(i) = 2.0 * constants::pi * hbar * n(i);
            out.m1(i) = 0.0;
            continue;
        }
        const double sigma = K / 5.0;
        std::vector<double> weight(2 * K + 1);
        for (int k = -K; k <= K; ++k)
            weight[k + K] = dz * std::exp(-0.5 * (k / sigma) * (k / sigma)) * n(i + dir * k);

        const int nj = opt.j_samples_per_node * (2 * K + 1) + 1;
        const double jmax = constants::pi * hbar / dz;
        const double dj = 2.0 * jmax / (nj - 1);
        C m0 = 0.0, m1 = 0.0;
        for (int q = 0; q < nj; ++q) {
            const double j = -jmax + q * dj;
            C J = 0.0;
            for (int k = -K; k <= K; ++k) J += weight[k + K] * std::polar(1.0, j * k * dz / hbar);
            const double w = (q == 0 || q == nj - 1) ? 0.5 * dj : dj;
            m0 += w * J;
            m1 += w * j * J;
        }
        out.m0(i) = m0.real();
        out.m1(i) = m1.imag() / hbar;
    }
}

}  // namespace

JumpMoments jump_moments(const Eigen::VectorXd& n, const PhaseSpaceGrid& grid, KernelSide side,
                         MomentMode mode, const Units& units, const QuadratureOptions& quadrature) {
    grid.validate();
    if (n.size() != grid.positions.size()) throw std::invalid_argument("density does not match the position grid");
    JumpMoments out;
    out.side = side;
    out.m0.resize(n.size());
    out.m1.resize(n.size());
    if (mode == MomentMode::Quadrature) {
        quadrature_moments(n, grid, side, units, quadrature, out);
        return out;
    }
    const double sign = side == KernelSide::J1 ? 1.0 : -1.0;
    const Eigen::VectorXd dn = gradient(n, grid.dr);
    out.m0 = 2.0 * constants::pi * units.hbar * n;
    out.m1 = sign * constants::pi * units.hbar * dn;
    return out;
}

}  // namespace spinkin
