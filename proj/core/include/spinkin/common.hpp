#pragma once

#include <stdexcept>
#include <string>

namespace spinkin {

namespace constants {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double planck = 6.62607015e-34;    // J s
inline constexpr double boltzmann = 1.380649e-23;   // J/K
inline constexpr double bohr_radius = 5.29177210903e-11;  // m
}  // namespace constants

/// Values of hbar and k_B used by a calculation. Reduced mode sets both to 1.
struct Units {
    double hbar = constants::hbar;
    double kB = constants::boltzmann;
    bool reduced = false;

    static Units physical() { return {}; }
    static Units reduced_units() { return {1.0, 1.0, true}; }
};

/// Invalid user input (maps to exit code 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure: divergence, NaN, solver stall (exit code 2).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoOscillation : public NumericalError {
public:
    NoOscillation() : NumericalError("no oscillation detected") {}
};

enum class Statistics { Bose, Fermi };

Statistics parse_statistics(const std::string& name);
std::string to_string(Statistics s);

}  // namespace spinkin
