#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spinkin/common.hpp"

namespace spinkin {

struct TrapConfig {
    double omega = 0.0;  // rad/s
    double mass = 0.0;   // kg
    int dimension = 1;
    /// Area dividing the 1D line density into the 3D density seen by U (m^2); 0 disables.
    double transverse_area = 0.0;

    void validate() const;
    double potential(double r) const { return 0.5 * mass * omega * omega * r * r; }
};

/// Uniform position grid and symmetric uniform momentum grid.
struct PhaseSpaceGrid {
    Eigen::VectorXd positions;
    Eigen::VectorXd momenta;
    double dr = 0.0;
    double dp = 0.0;

    static PhaseSpaceGrid make(double r_min, double r_max, int n_r, double p_max, int n_p);
    /// Throws std::invalid_argument on a non-uniform or asymmetric grid.
    void validate() const;
};

struct ThermalProfile {
    Eigen::VectorXd temperature;  // K, one value per position
    double chemical_potential = 0.0;  // J

    static ThermalProfile constant(const PhaseSpaceGrid& grid, double temperature, double mu);
    /// Linear interpolation of (position, temperature) rows; clamped outside the table.
    static ThermalProfile from_table(const PhaseSpaceGrid& grid,
                                     const std::vector<std::pair<double, double>>& table, double mu);
};

/// Two whitespace- or comma-separated columns: position (m), temperature (K). '#' starts a comment.
std::vector<std::pair<double, double>> read_temperature_table(const std::string& path);

/// mu such that the largest occupation on the grid is 0.1 at temperature t_max.
double default_chemical_potential(const TrapConfig& trap, const PhaseSpaceGrid& grid, double t_max,
                                  const Units& units = {});

/// 8 sqrt(m k_B T_max).
double default_momentum_cutoff(const TrapConfig& trap, double t_max, const Units& units = {});

struct EquilibriumDistribution {
    Eigen::MatrixXd values;  // rows: positions, columns: momenta
    Statistics statistics = Statistics::Bose;
};

EquilibriumDistribution bose_equilibrium(const PhaseSpaceGrid& grid, const TrapConfig& trap,
                                         const ThermalProfile& profile,
                                         Statistics statistics = Statistics::Bose,
                                         const Units& units = {});

struct DensityProfile {
    Eigen::VectorXd n;  // 1/m in 1D
    std::vector<std::string> warnings;
};

/// n(R) = (1/2 pi hbar) sum_p f(p,R) dp, summed left to right.
DensityProfile local_density(const EquilibriumDistribution& f, const PhaseSpaceGrid& grid,
                             const Units& units = {});

/// Max over the grid of |(p/m) d_R f - m w^2 R d_p f|, central differences, interior only.
double liouville_residual(const EquilibriumDistribution& f, const PhaseSpaceGrid& grid,
                          const TrapConfig& trap);

/// Second-order derivative on a uniform grid, one-sided at the ends.
Eigen::VectorXd gradient(const Eigen::VectorXd& values, double h);

/// J1 uses n(R + z/2), J2 uses n(R - z/2).
enum class KernelSide { J1, J2 };
enum class MomentMode { Analytic, Quadrature };

struct QuadratureOptions {
    int half_width = 16;       // grid nodes on each side of R inside the z-window
    int j_samples_per_node = 4;
};

/// m0 = int dj J = 2 pi hbar n. m1 = (int dj j J) / (i hbar), real: +pi hbar n' (J1), -pi hbar n' (J2).
struct JumpMoments {
    Eigen::VectorXd m0;
    Eigen::VectorXd m1;
    KernelSide side = KernelSide::J2;
};

JumpMoments jump_moments(const Eigen::VectorXd& n, const PhaseSpaceGrid& grid, KernelSide side,
                         MomentMode mode = MomentMode::Analytic, const Units& units = {},
                         const QuadratureOptions& quadrature = {});

}  // namespace spinkin
