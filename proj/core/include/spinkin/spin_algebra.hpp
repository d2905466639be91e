#pragma once

#include <array>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "spinkin/common.hpp"

namespace spinkin {

/// Magnetic sublevels of a single spin, ordered m = +s, ..., -s.
struct SpinBasis {
    int twice_s = 2;
    int dim = 3;
    std::vector<double> m_values;

    double s() const { return 0.5 * twice_s; }
    /// Position of m in m_values.
    int index_of(double m) const;

    static SpinBasis make(double s);
};

/// S_z and S_z^2 in units of hbar and hbar^2.
struct SpinMatrices {
    SpinBasis basis;
    Eigen::MatrixXd sz;
    Eigen::MatrixXd sz2;
};

SpinMatrices make_spin_matrices(double s);

/// <j1 m1; j2 m2 | J M> in the Condon-Shortley convention. Arguments are
/// half-integers; any invalid coupling gives 0.
double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M);

/// U_ijkl = sum_{S even} g_S sum_M <ik|SM><SM|jl>, indices into SpinBasis::m_values.
class InteractionTensor {
public:
    InteractionTensor(SpinBasis basis, std::map<int, double> channel_strengths, std::vector<double> u);

    const SpinBasis& basis() const { return basis_; }
    int dim() const { return basis_.dim; }
    const std::map<int, double>& channel_strengths() const { return channel_strengths_; }

    double operator()(int i, int j, int k, int l) const {
        const int d = basis_.dim;
        return u_[((i * d + j) * d + k) * d + l];
    }
    const std::vector<double>& data() const { return u_; }

    std::map<int, double> scattering_lengths;  // m, empty unless built from lengths
    double mass = 0.0;                          // kg, 0 unless built from lengths

private:
    SpinBasis basis_;
    std::map<int, double> channel_strengths_;
    std::vector<double> u_;
};

/// Keys are the total spin S; every even S in 0..2s is required, odd keys are rejected.
InteractionTensor build_interaction_tensor(const SpinBasis& basis,
                                           const std::map<int, double>& channel_strengths);

/// g_S = 4 pi hbar^2 a_S / m.
std::map<int, double> channel_strengths_from_lengths(const std::map<int, double>& lengths,
                                                     double mass, const Units& units = {});

InteractionTensor build_interaction_tensor_from_lengths(const SpinBasis& basis,
                                                        const std::map<int, double>& lengths,
                                                        double mass, const Units& units = {});

/// Identity plus T_a = lambda_a / 2, with Tr(T_a T_b) = delta_ab / 2.
struct GellMannBasis {
    Eigen::Matrix3cd identity;
    std::array<Eigen::Matrix3cd, 8> generators;
    /// f_abc, zero-based, index (a*8 + b)*8 + c.
    std::array<double, 512> structure_constants{};

    double f(int a, int b, int c) const { return structure_constants[(a * 8 + b) * 8 + c]; }
};

const GellMannBasis& gellmann_basis();

/// h = c0 I + sum_a c[a] T_a.
struct Su3Components {
    double c0 = 0.0;
    std::array<double, 8> c{};
};

Su3Components su3_decompose(const Eigen::Matrix3cd& h);
Eigen::Matrix3cd su3_reconstruct(const Su3Components& components);

}  // namespace spinkin
