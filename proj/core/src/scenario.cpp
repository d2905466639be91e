#include "spinkin/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <ostream>

#include <fmt/format.h>

namespace spinkin {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t k = 0; k < values.size(); ++k) out += (k ? "," : "") + num(values[k]);
    return out;
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "preset", "units",
        "trap.mass", "trap.omega", "trap.transverse_area",
        "zeeman.field_gauss", "zeeman.q_hz", "zeeman.q_coefficient",
        "interaction.a0", "interaction.a2", "interaction.statistics",
        "thermal.temperatures", "thermal.chemical_potential", "thermal.temperature_table",
        "grid.position_points", "grid.momentum_points", "grid.r_max", "grid.p_max", "grid.moment_mode",
        "dynamics.epsilon", "dynamics.integrator", "dynamics.dt", "dynamics.t_max", "dynamics.sample_every",
        "dynamics.temperature", "dynamics.kinetic_time_scale", "dynamics.relaxation", "dynamics.force",
        "damping.t_eval",
        "density.mode", "density.value", "density.slope",
        "gauge.transverse_points", "gauge.coupling", "gauge.elapsed_time", "gauge.temperature",
        "gauge.poisson_tolerance",
        "output.dir", "output.svg"};
    return keys;
}

std::string density_mode_name(DensityMode m) {
    switch (m) {
        case DensityMode::Constant: return "constant";
        case DensityMode::Linear: return "linear";
        default: return "thermal";
    }
}

std::vector<double> cumulative_trapezoid(const Eigen::VectorXd& x, const std::vector<double>& y) {
    std::vector<double> out(y.size(), 0.0);
    for (std::size_t k = 1; k < y.size(); ++k) out[k] = out[k - 1] + 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
    return out;
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

}  // namespace

ScenarioConfig rb87_preset() {
    ScenarioConfig c;
    c.preset = "rb87";
    c.mass = 1.4431e-25;
    c.omega = 2.0 * constants::pi * 15.0;
    c.transverse_area = 2.0 * constants::pi * constants::boltzmann * 10e-6 / (c.mass * c.omega * c.omega);
    c.field_gauss = 0.28;
    c.q_hz = 20.1;
    c.q_coefficient = 20.1 / (0.28 * 0.28);
    // Literature values for 87Rb, not taken from the modeled experiment.
    c.a0 = 101.8 * constants::bohr_radius;
    c.a2 = 100.4 * constants::bohr_radius;
    c.temperatures = {9e-6, 10e-6, 11e-6};
    c.r_max = 3e-4;
    c.dynamics_temperature = 10e-6;
    c.t_eval = 0.016;
    c.elapsed_time = 0.016;
    return c;
}

namespace {
void collect_problems(const ScenarioConfig& c, ConfigReader& r);
}  // namespace

ScenarioConfig ScenarioConfig::from_config(const Config& config, const std::string& preset) {
    ConfigReader r(config);
    r.reject_unknown(known_keys());

    const std::string name = r.text("preset", preset);
    ScenarioConfig c;
    if (name == "rb87") c = rb87_preset();
    else if (!name.empty() && name != "none") r.error("preset", "unknown preset '" + name + "'");
    if (!preset.empty() && config.has("preset") && *config.get("preset") != preset)
        r.error("preset", "conflicts with the requested preset '" + preset + "'");

    c.units = r.text("units", c.units);
    c.mass = r.number("trap.mass", c.mass);
    c.omega = r.number("trap.omega", c.omega);
    c.transverse_area = r.number("trap.transverse_area", c.transverse_area);
    c.field_gauss = r.number("zeeman.field_gauss", c.field_gauss);
    if (config.has("zeeman.q_hz")) c.q_hz = r.number("zeeman.q_hz", 0.0);
    c.q_coefficient = r.number("zeeman.q_coefficient", c.q_coefficient);
    c.a0 = r.number("interaction.a0", c.a0);
    c.a2 = r.number("interaction.a2", c.a2);
    const std::string stats = r.text("interaction.statistics", to_string(c.statistics));
    try {
        c.statistics = parse_statistics(stats);
    } catch (const std::exception& e) {
        r.error("interaction.statistics", e.what());
    }
    c.temperatures = r.numbers("thermal.temperatures", c.temperatures);
    if (config.has("thermal.chemical_potential")) c.chemical_potential = r.number("thermal.chemical_potential", 0.0);
    c.temperature_table = r.text("thermal.temperature_table", c.temperature_table);
    c.position_points = r.integer("grid.position_points", c.position_points);
    c.momentum_points = r.integer("grid.momentum_points", c.momentum_points);
    c.r_max = r.number("grid.r_max", c.r_max);
    c.p_max = r.number("grid.p_max", c.p_max);
    const std::string mode = r.text("grid.moment_mode", c.moment_mode == MomentMode::Analytic ? "analytic" : "quadrature");
    if (mode == "analytic") c.moment_mode = MomentMode::Analytic;
    else if (mode == "quadrature") c.moment_mode = MomentMode::Quadrature;
    else r.error("grid.moment_mode", "expected analytic or quadrature, got '" + mode + "'");
    c.epsilon = r.number("dynamics.epsilon", c.epsilon);
    c.integrator = r.text("dynamics.integrator", c.integrator);
    c.dt = r.number("dynamics.dt", c.dt);
    c.t_max = r.number("dynamics.t_max", c.t_max);
    c.sample_every = r.integer("dynamics.sample_every", c.sample_every);
    c.dynamics_temperature = r.number("dynamics.temperature", c.dynamics_temperature);
    c.kinetic_time_scale = r.number("dynamics.kinetic_time_scale", c.kinetic_time_scale);
    c.relaxation = r.boolean("dynamics.relaxation", c.relaxation);
    c.force = r.boolean("dynamics.force", c.force);
    c.t_eval = r.number("damping.t_eval", c.t_eval);
    const std::string dmode = r.text("density.mode", density_mode_name(c.density_mode));
    if (dmode == "thermal") c.density_mode = DensityMode::Thermal;
    else if (dmode == "constant") c.density_mode = DensityMode::Constant;
    else if (dmode == "linear") c.density_mode = DensityMode::Linear;
    else r.error("density.mode", "expected thermal, constant or linear, got '" + dmode + "'");
    c.density_value = r.number("density.value", c.density_value);
    c.density_slope = r.number("density.slope", c.density_slope);
    c.transverse_points = r.integer("gauge.transverse_points", c.transverse_points);
    c.coupling = r.number("gauge.coupling", c.coupling);
    c.elapsed_time = r.number("gauge.elapsed_time", c.elapsed_time);
    if (config.has("gauge.temperature")) c.gauge_temperature = r.number("gauge.temperature", 0.0);
    c.poisson_tolerance = r.number("gauge.poisson_tolerance", c.poisson_tolerance);
    c.output_dir = r.text("output.dir", c.output_dir);
    c.svg = r.boolean("output.svg", c.svg);
    collect_problems(c, r);
    r.finish();
    return c;
}

Config ScenarioConfig::to_config() const {
    Config c;
    if (!preset.empty()) c.set("preset", preset);
    c.set("units", units);
    c.set("trap.mass", num(mass));
    c.set("trap.omega", num(omega));
    c.set("trap.transverse_area", num(transverse_area));
    c.set("zeeman.field_gauss", num(field_gauss));
    if (q_hz) c.set("zeeman.q_hz", num(*q_hz));
    c.set("zeeman.q_coefficient", num(q_coefficient));
    c.set("interaction.a0", num(a0));
    c.set("interaction.a2", num(a2));
    c.set("interaction.statistics", to_string(statistics));
    c.set("thermal.temperatures", join(temperatures));
    if (chemical_potential) c.set("thermal.chemical_potential", num(*chemical_potential));
    if (!temperature_table.empty()) c.set("thermal.temperature_table", temperature_table);
    c.set("grid.position_points", std::to_string(position_points));
    c.set("grid.momentum_points", std::to_string(momentum_points));
    c.set("grid.r_max", num(r_max));
    c.set("grid.p_max", num(p_max));
    c.set("grid.moment_mode", moment_mode == MomentMode::Analytic ? "analytic" : "quadrature");
    c.set("dynamics.epsilon", num(epsilon));
    c.set("dynamics.integrator", integrator);
    c.set("dynamics.dt", num(dt));
    c.set("dynamics.t_max", num(t_max));
    c.set("dynamics.sample_every", std::to_string(sample_every));
    c.set("dynamics.temperature", num(dynamics_temperature));
    c.set("dynamics.kinetic_time_scale", num(kinetic_time_scale));
    c.set("dynamics.relaxation", relaxation ? "true" : "false");
    c.set("dynamics.force", force ? "true" : "false");
    c.set("damping.t_eval", num(t_eval));
    c.set("density.mode", density_mode_name(density_mode));
    c.set("density.value", num(density_value));
    c.set("density.slope", num(density_slope));
    c.set("gauge.transverse_points", std::to_string(transverse_points));
    c.set("gauge.coupling", num(coupling));
    c.set("gauge.elapsed_time", num(elapsed_time));
    if (gauge_temperature) c.set("gauge.temperature", num(*gauge_temperature));
    c.set("gauge.poisson_tolerance", num(poisson_tolerance));
    c.set("output.dir", output_dir);
    c.set("output.svg", svg ? "true" : "false");
    return c;
}

namespace {

void collect_problems(const ScenarioConfig& c, ConfigReader& r) {
    auto positive = [&](const char* key, double v) {
        if (!(v > 0.0) || !std::isfinite(v)) r.error(key, fmt::format("must be positive and finite (got {})", v));
    };
    auto non_negative = [&](const char* key, double v) {
        if (!(v >= 0.0) || !std::isfinite(v)) r.error(key, fmt::format("must be non-negative and finite (got {})", v));
    };
    if (c.units != "si" && c.units != "reduced") r.error("units", "expected si or reduced, got '" + c.units + "'");
    positive("trap.mass", c.mass);
    positive("trap.omega", c.omega);
    non_negative("trap.transverse_area", c.transverse_area);
    non_negative("zeeman.field_gauss", c.field_gauss);
    if (c.q_hz) non_negative("zeeman.q_hz", *c.q_hz);
    non_negative("zeeman.q_coefficient", c.q_coefficient);
    if (!std::isfinite(c.a0)) r.error("interaction.a0", "must be finite");
    if (!std::isfinite(c.a2)) r.error("interaction.a2", "must be finite");
    if (c.temperatures.empty() && c.temperature_table.empty())
        r.error("thermal.temperatures", "at least one temperature is required");
    for (double t : c.temperatures)
        if (!(t > 0.0) || !std::isfinite(t)) r.error("thermal.temperatures", fmt::format("non-positive entry {}", t));
    if (c.chemical_potential && !std::isfinite(*c.chemical_potential))
        r.error("thermal.chemical_potential", "must be finite");
    if (c.position_points < 8) r.error("grid.position_points", "need at least 8 points");
    if (c.momentum_points < 8) r.error("grid.momentum_points", "need at least 8 points");
    positive("grid.r_max", c.r_max);
    non_negative("grid.p_max", c.p_max);
    if (!(c.epsilon >= 0.0 && c.epsilon <= 1.0)) r.error("dynamics.epsilon", "must lie in [0, 1]");
    if (c.integrator != "rk4" && c.integrator != "eigen")
        r.error("dynamics.integrator", "expected rk4 or eigen, got '" + c.integrator + "'");
    positive("dynamics.dt", c.dt);
    positive("dynamics.t_max", c.t_max);
    if (c.sample_every < 1) r.error("dynamics.sample_every", "must be >= 1");
    positive("dynamics.temperature", c.dynamics_temperature);
    positive("dynamics.kinetic_time_scale", c.kinetic_time_scale);
    if (c.dt > 0.0 && c.t_max > 0.0 && std::isfinite(c.kinetic_time_scale)) {
        const double f = c.kinetic_time_scale * c.q() / (2.0 * constants::pi * c.unit_system().hbar);
        if (f > 0.0 && c.t_max * f < 10.0)
            r.error("dynamics.t_max", fmt::format("covers {:.3g} oscillation periods, need >= 10", c.t_max * f));
        if (f > 0.0 && 1.0 / (f * c.dt * c.sample_every) < 20.0)
            r.error("dynamics.dt", fmt::format("gives {:.3g} samples per period, need >= 20", 1.0 / (f * c.dt * c.sample_every)));
    }
    non_negative("damping.t_eval", c.t_eval);
    if (c.density_mode != DensityMode::Thermal) {
        if (!std::isfinite(c.density_value)) r.error("density.value", "must be finite");
        if (!std::isfinite(c.density_slope)) r.error("density.slope", "must be finite");
    }
    if (c.transverse_points < 3) r.error("gauge.transverse_points", "need at least 3 points");
    if (c.coupling == 0.0 || !std::isfinite(c.coupling)) r.error("gauge.coupling", "must be non-zero and finite");
    non_negative("gauge.elapsed_time", c.elapsed_time);
    positive("gauge.poisson_tolerance", c.poisson_tolerance);
    if (c.output_dir.empty()) r.error("output.dir", "must not be empty");
}

}  // namespace

void ScenarioConfig::validate() const {
    Config empty;
    ConfigReader r(empty);
    collect_problems(*this, r);
    r.finish();
}

Units ScenarioConfig::unit_system() const { return units == "reduced" ? Units::reduced_units() : Units::physical(); }

double ScenarioConfig::q() const {
    const double q_over_h = q_hz ? *q_hz : q_coefficient * field_gauss * field_gauss;
    return 2.0 * constants::pi * unit_system().hbar * q_over_h;
}

std::string ScenarioConfig::suffix(const std::string& si_unit) const {
    return units == "reduced" ? "_red" : "_" + si_unit;
}

ScenarioSetup prepare(const ScenarioConfig& config) {
    config.validate();
    const Units units = config.unit_system();
    TrapConfig trap{config.omega, config.mass, 1, config.transverse_area};
    trap.validate();

    double t_hot = config.dynamics_temperature;
    for (double t : config.temperatures) t_hot = std::max(t_hot, t);
    if (!config.temperature_table.empty())
        for (const auto& [x, t] : read_temperature_table(config.temperature_table)) t_hot = std::max(t_hot, t);

    const double p_max = config.p_max > 0.0 ? config.p_max : default_momentum_cutoff(trap, t_hot, units);
    PhaseSpaceGrid grid = PhaseSpaceGrid::make(0.0, config.r_max, config.position_points, p_max, config.momentum_points);
    const double mu = config.chemical_potential ? *config.chemical_potential
                                                : default_chemical_potential(trap, grid, t_hot, units);
    const SpinBasis basis = SpinBasis::make(1.0);
    return ScenarioSetup{units,
                         trap,
                         grid,
                         mu,
                         build_interaction_tensor_from_lengths(basis, {{0, config.a0}, {2, config.a2}}, config.mass, units),
                         make_spin_matrices(1.0)};
}

Eigen::VectorXd scenario_density(const ScenarioConfig& config, const ScenarioSetup& setup,
                                 const ThermalProfile& profile) {
    Eigen::VectorXd n;
    const auto& r = setup.grid.positions;
    switch (config.density_mode) {
        case DensityMode::Constant: n = Eigen::VectorXd::Constant(r.size(), config.density_value); break;
        case DensityMode::Linear: n = (config.density_value + config.density_slope * r.array()).matrix(); break;
        default: {
            const auto f0 = bose_equilibrium(setup.grid, setup.trap, profile, config.statistics, setup.units);
            n = local_density(f0, setup.grid, setup.units).n;
        }
    }
    if (setup.trap.transverse_area > 0.0) n /= setup.trap.transverse_area;
    return n;
}

SingleModeSuperOperator scenario_superoperator(const ScenarioConfig& config, const ScenarioSetup& setup,
                                               double temperature) {
    const ThermalProfile profile = ThermalProfile::constant(setup.grid, temperature, setup.chemical_potential);
    const auto f0 = bose_equilibrium(setup.grid, setup.trap, profile, config.statistics, setup.units);
    const Eigen::VectorXd n = scenario_density(config, setup, profile);
    const JumpMoments moments = jump_moments(n, setup.grid, KernelSide::J2, config.moment_mode, setup.units);
    const AveragedMoments avg = average_moments(f0, setup.grid, moments);
    AssemblyOptions options;
    options.statistics = config.statistics;
    options.relaxation = config.relaxation;
    options.force = config.force;
    options.kinetic_time_scale = config.kinetic_time_scale;
    return assemble_single_mode(config.q(), setup.spin, setup.tensor, avg, prepared_state(config.epsilon).rho,
                                options, setup.units);
}

Trajectory simulate_trajectory(const ScenarioConfig& config) {
    const ScenarioSetup setup = prepare(config);
    const SingleModeSuperOperator op = scenario_superoperator(config, setup, config.dynamics_temperature);
    const SpinDensityMatrix rho0 = prepared_state(config.epsilon);
    const long n_steps = std::lround(config.t_max / config.dt);
    if (config.integrator == "eigen") {
        std::vector<double> times;
        for (long s = 0; s <= n_steps; s += config.sample_every) times.push_back(s * config.dt);
        return evolve_eigen(op, rho0, times);
    }
    return evolve_rk4(op, rho0, config.dt, n_steps, config.sample_every);
}

SimulateReport run_simulate(const ScenarioConfig& config, std::ostream& log) {
    SimulateReport report;
    report.trajectory = simulate_trajectory(config);
    const Trajectory& traj = report.trajectory;

    CsvTable table;
    table.header = {"time" + config.suffix("s"), "p00", "ppm", "trace", "hermiticity_defect"};
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto& st = traj.states[k];
        table.rows.push_back({traj.times[k], traj.observables[k].p00, traj.observables[k].ppm, st.trace(),
                              st.hermiticity_defect()});
    }
    report.csv_path = join_path(config.output_dir, "populations.csv");
    write_file_atomic(report.csv_path, table.str());
    log << "wrote " << report.csv_path << "\n";

    try {
        report.oscillation = oscillation_analysis(traj);
        const auto& o = *report.oscillation;
        log << fmt::format("frequency: {:.6g} Hz\nphase difference: {:.6g} rad\ndecay rate: {:.6g} 1/s\n",
                           o.frequency, o.phase_difference, o.decay_rate);
    } catch (const NoOscillation& e) {
        log << e.what() << "\n";
    }

    if (config.svg) {
        std::vector<double> t(traj.times.begin(), traj.times.end()), p00, ppm;
        double m00 = 0.0, mpm = 0.0;
        for (const auto& o : traj.observables) {
            m00 += o.p00;
            mpm += o.ppm;
        }
        m00 /= traj.observables.size();
        mpm /= traj.observables.size();
        for (const auto& o : traj.observables) {
            p00.push_back(o.p00 - m00);
            ppm.push_back(o.ppm - mpm);
        }
        const std::string path = join_path(config.output_dir, "populations.svg");
        write_file_atomic(path, svg_line_plot("pair populations (mean removed)", "time" + config.suffix("s"),
                                              "population deviation", {{"P00", t, p00}, {"P+-", t, ppm}}));
        log << "wrote " << path << "\n";
    }
    return report;
}

std::vector<DampingProfile> damping_profiles(const ScenarioConfig& config) {
    const ScenarioSetup setup = prepare(config);
    const SpinDensityMatrix rho0 = prepared_state(config.epsilon);

    auto profile_for = [&](const ThermalProfile& thermal, double nominal, double dynamics_temperature) {
        DampingProfile out;
        out.temperature = nominal;
        out.local_temperature = thermal.temperature;
        out.positions = setup.grid.positions;
        SpinDensityMatrix rho = rho0;
        if (config.t_eval > 0.0) {
            const auto op = scenario_superoperator(config, setup, dynamics_temperature);
            rho = evolve_eigen(op, rho0, {config.t_eval}).states.back();
        }
        const Eigen::VectorXd n = scenario_density(config, setup, thermal);
        const JumpMoments moments = jump_moments(n, setup.grid, KernelSide::J2, config.moment_mode, setup.units);
        out.force = damping_force(setup.tensor, moments, rho, config.statistics, setup.units).f_matrix;
        return out;
    };

    std::vector<DampingProfile> profiles;
    if (!config.temperature_table.empty()) {
        const auto thermal = ThermalProfile::from_table(setup.grid, read_temperature_table(config.temperature_table),
                                                        setup.chemical_potential);
        profiles.push_back(profile_for(thermal, thermal.temperature.mean(), config.dynamics_temperature));
    }
    for (double t : config.temperatures)
        profiles.push_back(profile_for(ThermalProfile::constant(setup.grid, t, setup.chemical_potential), t, t));
    return profiles;
}

CsvTable damping_table(const ScenarioConfig& config, const std::vector<DampingProfile>& profiles) {
    CsvTable table;
    const std::string n = config.suffix("N");
    table.header = {"position" + config.suffix("m"), "temperature" + config.suffix("K"), "f11" + n};
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            table.header.push_back(fmt::format("f{}{}_re{}", i, j, n));
            table.header.push_back(fmt::format("f{}{}_im{}", i, j, n));
        }
    for (const auto& p : profiles)
        for (Eigen::Index r = 0; r < p.positions.size(); ++r) {
            const Eigen::Matrix3cd& f = p.force[r];
            std::vector<double> row = {p.positions[r], p.local_temperature[r], f(0, 0).real()};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    row.push_back(f(i, j).real());
                    row.push_back(f(i, j).imag());
                }
            table.rows.push_back(std::move(row));
        }
    return table;
}

std::vector<DampingProfile> run_damping(const ScenarioConfig& config, std::ostream& log) {
    auto profiles = damping_profiles(config);
    const std::string path = join_path(config.output_dir, "damping.csv");
    write_file_atomic(path, damping_table(config, profiles).str());
    log << "wrote " << path << "\n";
    if (config.svg) {
        std::vector<PlotSeries> series;
        for (const auto& p : profiles) {
            PlotSeries s;
            s.label = config.units == "reduced" ? fmt::format("T = {:.4g}", p.temperature)
                                                : fmt::format("T = {:.4g} uK", p.temperature * 1e6);
            for (Eigen::Index r = 0; r < p.positions.size(); ++r) {
                s.x.push_back(p.positions[r]);
                s.y.push_back(p.force[r](0, 0).real());
            }
            series.push_back(std::move(s));
        }
        const std::string svg = join_path(config.output_dir, "damping.svg");
        write_file_atomic(svg, svg_line_plot("damping force, first component", "position" + config.suffix("m"),
                                             "f11" + config.suffix("N"), series));
        log << "wrote " << svg << "\n";
    }
    return profiles;
}

double quadratic_poisson_check(int points) {
    Grid3 g;
    g.nx = g.ny = g.nz = points;
    g.dx = g.dy = g.dz = 1.0 / (points - 1);
    const auto exact = [](double x, double y, double z) { return 0.5 * (x * x + y * y + z * z); };
    const ScalarField3 boundary = sample(g, exact);
    const ScalarField3 source(g, 3.0);
    PoissonOptions opts;
    opts.method = PoissonMethod::ConjugateGradient;
    opts.tolerance = 1e-12;
    const PoissonResult res = solve_scalar_potential(source, boundary, opts);
    double err = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) err = std::max(err, std::abs(res.phi.values[p] - boundary.values[p]));
    return err;
}

GaugeReport gauge_pipeline(const ScenarioConfig& config, const Eigen::VectorXd& positions,
                           const std::vector<Eigen::Matrix3cd>& force) {
    const Eigen::Index nx = positions.size();
    if (nx < 3 || static_cast<Eigen::Index>(force.size()) != nx)
        throw std::invalid_argument("gauge pipeline needs >= 3 positions with one force matrix each");
    const double dx = positions[1] - positions[0];
    for (Eigen::Index k = 1; k < nx; ++k)
        if (std::abs(positions[k] - positions[k - 1] - dx) > 1e-9 * std::abs(dx))
            throw std::invalid_argument("gauge pipeline needs uniformly spaced positions");

    GaugeReport report;
    for (const auto& f : force) report.components.push_back(su3_decompose(0.5 * (f + f.adjoint())));

    Grid3 g;
    g.nx = static_cast<int>(nx);
    g.ny = g.nz = config.transverse_points;
    g.dx = g.dy = g.dz = dx;
    g.x0 = positions[0];
    g.y0 = g.z0 = -0.5 * (config.transverse_points - 1) * dx;

    // Physical forces are ~1e-36 N, so the Poisson tolerance is applied to the problem in units of max|c0|.
    std::vector<double> c0(nx);
    double scale = 0.0;
    for (Eigen::Index k = 0; k < nx; ++k) {
        c0[k] = report.components[k].c0;
        scale = std::max(scale, std::abs(c0[k]));
    }
    if (scale == 0.0) scale = 1.0;
    for (double& v : c0) v /= scale;
    const std::vector<double> integral = cumulative_trapezoid(positions, c0);

    VectorField3 f0(g);
    ScalarField3 boundary(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            for (int k = 0; k < g.nz; ++k) {
                f0.components[0][g.index(i, j, k)] = c0[i];
                boundary.at(i, j, k) = integral[i];
            }

    PoissonOptions opts;
    opts.tolerance = config.poisson_tolerance;
    report.scalar = solve_scalar_potential(divergence(f0), boundary, opts);
    report.vector_potential = solve_vector_potential(curl(f0), config.elapsed_time, opts);
    for (double& v : report.scalar.phi.values) v *= scale;
    report.scalar.residual *= scale;
    for (auto& comp : report.vector_potential.components)
        for (double& v : comp) v *= scale;

    Embedding emb;
    emb.ny = emb.nz = config.transverse_points;
    emb.dy = emb.dz = dx;
    report.su3 = su3_field_from_force(positions, report.components, emb, config.coupling);
    const ScalarField3 lag = yang_mills_lagrangian(field_strength(report.su3));
    const int jc = report.su3.grid.ny / 2, kc = report.su3.grid.nz / 2;
    for (int i = 0; i < report.su3.grid.nx; ++i) report.lagrangian.push_back(lag.at(i, jc, kc));
    report.diagnostic = potential_energy_diagnostic(positions, report.components, report.lagrangian, config.coupling);
    report.quadratic_check_error = quadratic_poisson_check();
    return report;
}

GaugeReport run_gauge(const ScenarioConfig& config, const std::string& from_dir, std::ostream& log) {
    config.validate();
    Eigen::VectorXd positions;
    std::vector<Eigen::Matrix3cd> force;
    const double wanted = config.gauge_temperature.value_or(config.dynamics_temperature);

    if (from_dir.empty()) {
        const auto profiles = damping_profiles(config);
        const auto best = std::min_element(profiles.begin(), profiles.end(), [&](const auto& a, const auto& b) {
            return std::abs(a.temperature - wanted) < std::abs(b.temperature - wanted);
        });
        positions = best->positions;
        force = best->force;
        log << fmt::format("using recomputed damping force at T = {:.6g}\n", best->temperature);
    } else {
        const CsvData data = read_csv(join_path(from_dir, "damping.csv"));
        const std::size_t cx = data.column("position" + config.suffix("m"));
        const std::size_t ct = data.column("temperature" + config.suffix("K"));
        if (data.rows.empty()) throw ConfigError("damping.csv in '" + from_dir + "' has no rows");
        double chosen = data.rows.front()[ct];
        for (const auto& row : data.rows)
            if (std::abs(row[ct] - wanted) < std::abs(chosen - wanted)) chosen = row[ct];
        std::vector<double> xs;
        for (const auto& row : data.rows) {
            if (row[ct] != chosen) continue;
            Eigen::Matrix3cd f;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const std::string n = config.suffix("N");
                    f(i, j) = Complex(row[data.column(fmt::format("f{}{}_re{}", i + 1, j + 1, n))],
                                      row[data.column(fmt::format("f{}{}_im{}", i + 1, j + 1, n))]);
                }
            xs.push_back(row[cx]);
            force.push_back(f);
        }
        positions = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
        log << fmt::format("using damping force from {} at T = {:.6g}\n", from_dir, chosen);
    }

    GaugeReport report = gauge_pipeline(config, positions, force);
    const Grid3& g = report.scalar.phi.grid;
    const int jc = g.ny / 2, kc = g.nz / 2;

    CsvTable table;
    const std::string fN = config.suffix("N");
    table.header = {"position" + config.suffix("m"), "c0" + fN};
    for (int a = 1; a <= 8; ++a) table.header.push_back(fmt::format("c{}{}", a, fN));
    table.header.push_back("phi" + config.suffix("J"));
    for (const char* axis : {"x", "y", "z"}) table.header.push_back(std::string("a") + axis + config.suffix("Ns"));
    for (int a = 1; a <= 8; ++a) table.header.push_back(fmt::format("su3_a{}_x{}", a, config.suffix("Nm")));
    table.header.push_back("lagrangian" + config.suffix("N2"));
    table.header.push_back("diagnostic_residual" + config.suffix("J"));
    for (int i = 0; i < g.nx; ++i) {
        const std::size_t p = g.index(i, jc, kc);
        std::vector<double> row = {positions[i], report.components[i].c0};
        for (double c : report.components[i].c) row.push_back(c);
        row.push_back(report.scalar.phi.values[p]);
        for (const auto& comp : report.vector_potential.components) row.push_back(comp[p]);
        for (int a = 0; a < 8; ++a) row.push_back(report.su3.a[a][1][report.su3.grid.index(i, jc, kc)]);
        row.push_back(report.lagrangian[i]);
        row.push_back(report.diagnostic.residual[i]);
        table.rows.push_back(std::move(row));
    }
    const std::string csv = join_path(config.output_dir, "gauge.csv");
    write_file_atomic(csv, table.str());

    const std::string unit_j = config.units == "reduced" ? "reduced" : "J";
    const std::string unit_ns = config.units == "reduced" ? "reduced" : "N*s";
    const std::string unit_nm = config.units == "reduced" ? "reduced" : "N*m";
    write_field_file(join_path(config.output_dir, "phi.field"), {g, unit_j, {"phi"}, {report.scalar.phi.values}});
    write_field_file(join_path(config.output_dir, "vector_potential.field"),
                     {g, unit_ns, {"ax", "ay", "az"},
                      {report.vector_potential.components[0], report.vector_potential.components[1],
                       report.vector_potential.components[2]}});
    FieldFile su3{report.su3.grid, unit_nm, {}, {}};
    for (int a = 0; a < 8; ++a) {
        su3.names.push_back(fmt::format("a{}_x", a + 1));
        su3.components.push_back(report.su3.a[a][1]);
    }
    write_field_file(join_path(config.output_dir, "su3_potential.field"), su3);

    log << "wrote " << csv << " and field files in " << config.output_dir << "\n";
    log << fmt::format("poisson: method {}, {} iterations, residual {:.3e}\n",
                       report.scalar.method == PoissonMethod::Spectral ? "spectral" : "cg", report.scalar.iterations,
                       report.scalar.residual);
    log << fmt::format("potential-energy diagnostic: max residual {:.6g}\n", report.diagnostic.max_residual);
    log << fmt::format("quadratic check: max error {:.3e}\n", report.quadratic_check_error);
    return report;
}

}  // namespace spinkin
