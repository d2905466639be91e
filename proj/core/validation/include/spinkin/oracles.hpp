#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "spinkin/common.hpp"
#include "spinkin/spin_algebra.hpp"

namespace spinkin::oracle {

/// Racah's closed-form sum for <j1 m1; j2 m2 | J M>.
double racah_clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M);

/// Spin-1 U_ijkl from the even-channel sum with Racah coefficients, index ((i*3+j)*3+k)*3+l.
std::vector<double> channel_sum_tensor(double g0, double g2);

/// Exchange-symmetrized closed form 1/2 [(c0 d_ij d_kl + c2 F_ij.F_kl) + (i <-> l ... k <-> j)],
/// c0 = (g0 + 2 g2)/3, c2 = (g2 - g0)/3.
std::vector<double> closed_form_tensor(double g0, double g2);

/// Spin-1 Fx, Fy, Fz in the (+1, 0, -1) basis.
std::array<Eigen::Matrix3cd, 3> spin_one_matrices();

/// f_abc = -2i Tr([T_a, T_b] T_c) with T_a built from the explicit Gell-Mann matrices.
double commutator_structure_constant(int a, int b, int c);

/// Max |sum_d (f_abd f_dce + f_bcd f_dae + f_cad f_dbe)| over all a, b, c, e.
double jacobi_defect(const std::array<double, 512>& f);

/// Explicit six-index loops over the contraction definitions.
Eigen::Matrix3cd brute_direct(const InteractionTensor& u, const Eigen::Matrix3cd& k);
Eigen::Matrix3cd brute_exchange(const InteractionTensor& u, const Eigen::Matrix3cd& k);

/// Ideal Bose line density of a 1D harmonic trap, lambda_T^-1 Li_{1/2}(exp((mu - V)/k_B T)).
double bose_line_density(double r, double temperature, double mu, double mass, double omega,
                         const Units& units = {});

/// Li_{1/2}(z) for 0 <= z < 1 by direct summation.
double polylog_half(double z);

/// Random Hermitian 3x3 matrix with entries in [-1, 1].
template <class Rng>
Eigen::Matrix3cd random_hermitian(Rng& rng);

}  // namespace spinkin::oracle

#include <random>

namespace spinkin::oracle {

template <class Rng>
Eigen::Matrix3cd random_hermitian(Rng& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Eigen::Matrix3cd h;
    for (int i = 0; i < 3; ++i) {
        h(i, i) = d(rng);
        for (int j = i + 1; j < 3; ++j) {
            h(i, j) = std::complex<double>(d(rng), d(rng));
            h(j, i) = std::conj(h(i, j));
        }
    }
    return h;
}

}  // namespace spinkin::oracle
