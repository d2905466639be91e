#include "spinkin/oracles.hpp"

#include <cmath>
#include <complex>

namespace spinkin::oracle {

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

int twice(double x) { return static_cast<int>(std::lround(2.0 * x)); }

}  // namespace

double racah_clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M) {
    const int a = twice(j1), b = twice(j2), c = twice(J), am = twice(m1), bm = twice(m2), cm = twice(M);
    if (am + bm != cm) return 0.0;
    if (c < std::abs(a - b) || c > a + b || (a + b + c) % 2) return 0.0;
    if (std::abs(am) > a || std::abs(bm) > b || std::abs(cm) > c) return 0.0;
    if ((a + am) % 2 || (b + bm) % 2 || (c + cm) % 2) return 0.0;

    // Everything below is in integer units after halving.
    const int jpj_j = (a + b - c) / 2, jmj_j = (a - b + c) / 2, mjj_j = (-a + b + c) / 2;
    const double pre = std::sqrt((c + 1.0) * factorial(jpj_j) * factorial(jmj_j) * factorial(mjj_j) /
                                 factorial((a + b + c) / 2 + 1)) *
                       std::sqrt(factorial((a + am) / 2) * factorial((a - am) / 2) * factorial((b + bm) / 2) *
                                 factorial((b - bm) / 2) * factorial((c + cm) / 2) * factorial((c - cm) / 2));
    double sum = 0.0;
    for (int k = 0; k <= a + b + c; ++k) {
        const int d1 = jpj_j - k, d2 = (a - am) / 2 - k, d3 = (b + bm) / 2 - k;
        const int d4 = (c - b + am) / 2 + k, d5 = (c - a - bm) / 2 + k;
        if (d1 < 0 || d2 < 0 || d3 < 0 || d4 < 0 || d5 < 0) continue;
        const double term = 1.0 / (factorial(k) * factorial(d1) * factorial(d2) * factorial(d3) * factorial(d4) *
                                   factorial(d5));
        sum += (k % 2 ? -term : term);
    }
    return pre * sum;
}

std::vector<double> channel_sum_tensor(double g0, double g2) {
    const double m[3] = {1.0, 0.0, -1.0};
    std::vector<double> u(81, 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    double v = 0.0;
                    for (int S : {0, 2}) {
                        const double g = S == 0 ? g0 : g2;
                        for (int M = -S; M <= S; ++M)
                            v += g * racah_clebsch_gordan(1, m[i], 1, m[k], S, M) *
                                 racah_clebsch_gordan(1, m[j], 1, m[l], S, M);
                    }
                    u[((i * 3 + j) * 3 + k) * 3 + l] = v;
                }
    return u;
}

std::array<Eigen::Matrix3cd, 3> spin_one_matrices() {
    const double r = 1.0 / std::sqrt(2.0);
    const std::complex<double> I(0.0, 1.0);
    Eigen::Matrix3cd fx, fy, fz;
    fx << 0, r, 0, r, 0, r, 0, r, 0;
    fy << 0, -I * r, 0, I * r, 0, -I * r, 0, I * r, 0;
    fz << 1, 0, 0, 0, 0, 0, 0, 0, -1;
    return {fx, fy, fz};
}

std::vector<double> closed_form_tensor(double g0, double g2) {
    const double c0 = (g0 + 2.0 * g2) / 3.0, c2 = (g2 - g0) / 3.0;
    const auto f = spin_one_matrices();
    auto direct = [&](int a, int b, int c, int d) {
        std::complex<double> dot = 0.0;
        for (const auto& fm : f) dot += fm(a, b) * fm(c, d);
        return c0 * (a == b) * (c == d) + c2 * dot.real();
    };
    std::vector<double> u(81);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    u[((i * 3 + j) * 3 + k) * 3 + l] = 0.5 * (direct(i, j, k, l) + direct(i, l, k, j));
    return u;
}

double commutator_structure_constant(int a, int b, int c) {
    const std::complex<double> I(0.0, 1.0);
    std::array<Eigen::Matrix3cd, 8> lam;
    for (auto& l : lam) l.setZero();
    lam[0](0, 1) = lam[0](1, 0) = 1;
    lam[1](0, 1) = -I;
    lam[1](1, 0) = I;
    lam[2](0, 0) = 1;
    lam[2](1, 1) = -1;
    lam[3](0, 2) = lam[3](2, 0) = 1;
    lam[4](0, 2) = -I;
    lam[4](2, 0) = I;
    lam[5](1, 2) = lam[5](2, 1) = 1;
    lam[6](1, 2) = -I;
    lam[6](2, 1) = I;
    lam[7](0, 0) = lam[7](1, 1) = 1.0 / std::sqrt(3.0);
    lam[7](2, 2) = -2.0 / std::sqrt(3.0);
    const Eigen::Matrix3cd ta = 0.5 * lam[a], tb = 0.5 * lam[b], tc = 0.5 * lam[c];
    return (-2.0 * I * ((ta * tb - tb * ta) * tc).trace()).real();
}

double jacobi_defect(const std::array<double, 512>& f) {
    auto F = [&](int a, int b, int c) { return f[(a * 8 + b) * 8 + c]; };
    double worst = 0.0;
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
            for (int c = 0; c < 8; ++c)
                for (int e = 0; e < 8; ++e) {
                    double s = 0.0;
                    for (int d = 0; d < 8; ++d)
                        s += F(a, b, d) * F(d, c, e) + F(b, c, d) * F(d, a, e) + F(c, a, d) * F(d, b, e);
                    worst = std::max(worst, std::abs(s));
                }
    return worst;
}

Eigen::Matrix3cd brute_direct(const InteractionTensor& u, const Eigen::Matrix3cd& k) {
    Eigen::Matrix3cd out = Eigen::Matrix3cd::Zero();
    for (int i = 0; i < 3; ++i)
        for (int n = 0; n < 3; ++n)
            for (int m = 0; m < 3; ++m)
                for (int l = 0; l < 3; ++l) out(i, n) += u(m, n, i, l) * k(l, m);
    return out;
}

Eigen::Matrix3cd brute_exchange(const InteractionTensor& u, const Eigen::Matrix3cd& k) {
    Eigen::Matrix3cd out = Eigen::Matrix3cd::Zero();
    for (int i = 0; i < 3; ++i)
        for (int n = 0; n < 3; ++n)
            for (int m = 0; m < 3; ++m)
                for (int l = 0; l < 3; ++l) out(i, n) += u(m, l, i, n) * k(l, m);
    return out;
}

double polylog_half(double z) {
    if (!(z >= 0.0 && z < 1.0)) throw std::invalid_argument("polylog_half needs 0 <= z < 1");
    double sum = 0.0, zk = z;
    for (int k = 1; k < 100000 && zk > 1e-18 * sum; ++k) {
        sum += zk / std::sqrt(static_cast<double>(k));
        zk *= z;
    }
    return sum;
}

double bose_line_density(double r, double temperature, double mu, double mass, double omega, const Units& units) {
    const double kt = units.kB * temperature;
    const double lambda = 2.0 * constants::pi * units.hbar / std::sqrt(2.0 * constants::pi * mass * kt);
    const double v = 0.5 * mass * omega * omega * r * r;
    return polylog_half(std::exp((mu - v) / kt)) / lambda;
}

}  // namespace spinkin::oracle
