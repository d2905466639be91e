#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinkin/common.hpp"
#include "spinkin/config.hpp"
#include "spinkin/equilibrium.hpp"
#include "spinkin/gauge.hpp"
#include "spinkin/output.hpp"
#include "spinkin/spin_algebra.hpp"
#include "spinkin/transport.hpp"

namespace spinkin {

enum class DensityMode { Thermal, Constant, Linear };

/// Everything a simulate / damping / gauge run needs. Lengths in m, energies in J,
/// unless units = "reduced" (hbar = k_B = 1, quantities taken as given).
struct ScenarioConfig {
    std::string preset;
    std::string units = "si";

    double mass = 0.0;
    double omega = 0.0;
    double transverse_area = 0.0;

    double field_gauss = 0.0;
    std::optional<double> q_hz;         // q/h; when absent q/h = q_coefficient * B^2
    double q_coefficient = 0.0;         // Hz/G^2
    double a0 = 0.0;
    double a2 = 0.0;
    Statistics statistics = Statistics::Bose;

    std::vector<double> temperatures;
    std::optional<double> chemical_potential;
    std::string temperature_table;

    int position_points = 128;
    int momentum_points = 256;
    double r_max = 0.0;
    double p_max = 0.0;  // 0 selects 8 sqrt(m k_B T_max)
    MomentMode moment_mode = MomentMode::Analytic;

    double epsilon = 0.1;
    std::string integrator = "rk4";
    double dt = 1e-4;
    double t_max = 0.5;
    int sample_every = 1;
    double dynamics_temperature = 10e-6;
    double kinetic_time_scale = 2.0;
    bool relaxation = true;
    bool force = true;

    double t_eval = 0.016;

    DensityMode density_mode = DensityMode::Thermal;
    double density_value = 0.0;  // line density at R = 0 (1/m)
    double density_slope = 0.0;  // 1/m^2

    int transverse_points = 9;
    double coupling = 1.0;
    double elapsed_time = 0.016;
    std::optional<double> gauge_temperature;
    double poisson_tolerance = 1e-10;

    std::string output_dir = "out";
    bool svg = false;

    /// Keys in config override the preset named by its "preset" key (or the preset argument).
    static ScenarioConfig from_config(const Config& config, const std::string& preset = "");
    Config to_config() const;
    /// Throws ConfigError listing every invalid key.
    void validate() const;

    Units unit_system() const;
    /// q in energy units.
    double q() const;
    /// Column suffix for a physical unit, "_red" in reduced mode.
    std::string suffix(const std::string& si_unit) const;
};

ScenarioConfig rb87_preset();

/// Temperatures, mu and grid shared by every temperature of a run.
struct ScenarioSetup {
    Units units;
    TrapConfig trap;
    PhaseSpaceGrid grid;
    double chemical_potential = 0.0;
    InteractionTensor tensor;
    SpinMatrices spin;
};

ScenarioSetup prepare(const ScenarioConfig& config);

/// 3D density entering the interaction at each grid position.
Eigen::VectorXd scenario_density(const ScenarioConfig& config, const ScenarioSetup& setup,
                                 const ThermalProfile& profile);

SingleModeSuperOperator scenario_superoperator(const ScenarioConfig& config, const ScenarioSetup& setup,
                                               double temperature);

Trajectory simulate_trajectory(const ScenarioConfig& config);

struct SimulateReport {
    Trajectory trajectory;
    std::optional<OscillationResult> oscillation;
    std::string csv_path;
};

/// Writes populations.csv (and populations.svg) to output_dir and logs the analysis.
SimulateReport run_simulate(const ScenarioConfig& config, std::ostream& log);

struct DampingProfile {
    double temperature = 0.0;            // nominal, K
    Eigen::VectorXd local_temperature;   // K
    Eigen::VectorXd positions;
    std::vector<Eigen::Matrix3cd> force;
};

std::vector<DampingProfile> damping_profiles(const ScenarioConfig& config);
CsvTable damping_table(const ScenarioConfig& config, const std::vector<DampingProfile>& profiles);

/// Writes damping.csv (and damping.svg).
std::vector<DampingProfile> run_damping(const ScenarioConfig& config, std::ostream& log);

struct GaugeReport {
    PoissonResult scalar;
    VectorField3 vector_potential;
    SU3GaugeField su3;
    std::vector<Su3Components> components;
    std::vector<double> lagrangian;
    PotentialEnergyDiagnostic diagnostic;
    double quadratic_check_error = 0.0;
};

/// Gauge potentials from one force profile along x.
GaugeReport gauge_pipeline(const ScenarioConfig& config, const Eigen::VectorXd& positions,
                           const std::vector<Eigen::Matrix3cd>& force);

/// Max error of the Poisson solver on phi = (x^2 + y^2 + z^2)/2 with source 3.
double quadratic_poisson_check(int points = 17);

/// Reads damping.csv from from_dir, or recomputes it when from_dir is empty.
GaugeReport run_gauge(const ScenarioConfig& config, const std::string& from_dir, std::ostream& log);

}  // namespace spinkin
