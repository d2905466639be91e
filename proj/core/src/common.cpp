#include "spinkin/common.hpp"

namespace spinkin {

Statistics parse_statistics(const std::string& name) {
    if (name == "bose" || name == "Bose") return Statistics::Bose;
    if (name == "fermi" || name == "Fermi") return Statistics::Fermi;
    throw std::invalid_argument("unknown statistics flag '" + name + "' (expected bose or fermi)");
}

std::string to_string(Statistics s) { return s == Statistics::Bose ? "bose" : "fermi"; }

}  // namespace spinkin
