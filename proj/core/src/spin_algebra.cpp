#include "spinkin/spin_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace spinkin {

namespace {

bool to_twice(double x, int& twice) {
    const double t = std::round(2.0 * x);
    if (std::abs(2.0 * x - t) > 1e-9) return false;
    twice = static_cast<int>(t);
    return true;
}

// sqrt((j+m)(j-m+1)), the J- matrix element, from twice-valued j and m.
double lowering(int tj, int tm) {
    return 0.5 * std::sqrt(static_cast<double>(tj + tm) * static_cast<double>(tj - tm + 2));
}

// Coupled states |J M> of j1 x j2 expanded in the product basis |m1>|m2>,
// built from highest-weight states and the J- ladder.
struct CouplingTable {
    int tj1, tj2, d1, d2;
    std::map<std::pair<int, int>, Eigen::VectorXd> states;

    int index(int a, int b) const { return a * d2 + b; }

    CouplingTable(int tj1_, int tj2_) : tj1(tj1_), tj2(tj2_), d1(tj1_ + 1), d2(tj2_ + 1) {
        const int n = d1 * d2;
        for (int tJ = tj1 + tj2; tJ >= std::abs(tj1 - tj2); tJ -= 2) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
            int a_top = -1;
            for (int a = 0; a < d1; ++a) {
                const int b = (tj2 - (tJ - (tj1 - 2 * a))) / 2;
                if ((tj2 - (tJ - (tj1 - 2 * a))) % 2 != 0 || b < 0 || b >= d2) continue;
                v(index(a, b)) = 1.0 + 0.37 * a;
                if (a_top < 0) a_top = a;
            }
            for (int pass = 0; pass < 2; ++pass) {
                for (int tJp = tj1 + tj2; tJp > tJ; tJp -= 2) {
                    const Eigen::VectorXd& u = states.at({tJp, tJ});
                    v -= u.dot(v) * u;
                }
            }
            v.normalize();
            if (v(index(a_top, (tj2 - (tJ - tj1 + 2 * a_top)) / 2)) < 0.0) v = -v;
            states[{tJ, tJ}] = v;

            for (int tM = tJ; tM > -tJ; tM -= 2) {
                Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
                for (int a = 0; a < d1; ++a) {
                    for (int b = 0; b < d2; ++b) {
                        const double c = v(index(a, b));
                        if (c == 0.0) continue;
                        const int tm1 = tj1 - 2 * a;
                        const int tm2 = tj2 - 2 * b;
                        if (a + 1 < d1) w(index(a + 1, b)) += lowering(tj1, tm1) * c;
                        if (b + 1 < d2) w(index(a, b + 1)) += lowering(tj2, tm2) * c;
                    }
                }
                w /= lowering(tJ, tM);
                states[{tJ, tM - 2}] = w;
                v = w;
            }
        }
    }
};

const CouplingTable& coupling_table(int tj1, int tj2) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<CouplingTable>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[{tj1, tj2}];
    if (!slot) slot = std::make_unique<CouplingTable>(tj1, tj2);
    return *slot;
}

GellMannBasis make_gellmann() {
    using C = std::complex<double>;
    const C i(0.0, 1.0);
    GellMannBasis g;
    g.identity = Eigen::Matrix3cd::Identity();
    std::array<Eigen::Matrix3cd, 8> lam;
    for (auto& m : lam) m.setZero();
    lam[0](0, 1) = 1.0; lam[0](1, 0) = 1.0;
    lam[1](0, 1) = -i;  lam[1](1, 0) = i;
    lam[2](0, 0) = 1.0; lam[2](1, 1) = -1.0;
    lam[3](0, 2) = 1.0; lam[3](2, 0) = 1.0;
    lam[4](0, 2) = -i;  lam[4](2, 0) = i;
    lam[5](1, 2) = 1.0; lam[5](2, 1) = 1.0;
    lam[6](1, 2) = -i;  lam[6](2, 1) = i;
    const double r3 = 1.0 / std::sqrt(3.0);
    lam[7](0, 0) = r3; lam[7](1, 1) = r3; lam[7](2, 2) = -2.0 * r3;
    for (int a = 0; a < 8; ++a) g.generators[a] = 0.5 * lam[a];

    struct Entry { int a, b, c; double v; };
    const double h3 = 0.5 * std::sqrt(3.0);
    const Entry table[] = {{1, 2, 3, 1.0}, {1, 4, 7, 0.5}, {1, 5, 6, -0.5}, {2, 4, 6, 0.5},
                           {2, 5, 7, 0.5}, {3, 4, 5, 0.5}, {3, 6, 7, -0.5}, {4, 5, 8, h3},
                           {6, 7, 8, h3}};
    auto put = [&g](int a, int b, int c, double v) { g.structure_constants[(a * 8 + b) * 8 + c] = v; };
    for (const auto& e : table) {
        const int a = e.a - 1, b = e.b - 1, c = e.c - 1;
        put(a, b, c, e.v);  put(b, c, a, e.v);  put(c, a, b, e.v);
        put(b, a, c, -e.v); put(a, c, b, -e.v); put(c, b, a, -e.v);
    }
    return g;
}

}  // namespace

int SpinBasis::index_of(double m) const {
    for (int k = 0; k < dim; ++k)
        if (std::abs(m_values[k] - m) < 1e-9) return k;
    throw std::invalid_argument("magnetic quantum number not in basis");
}

SpinBasis SpinBasis::make(double s) {
    int ts = 0;
    if (!(s >= 0.0) || !to_twice(s, ts))
        throw std::invalid_argument("spin must be a non-negative half-integer");
    SpinBasis b;
    b.twice_s = ts;
    b.dim = ts + 1;
    b.m_values.resize(b.dim);
    for (int k = 0; k < b.dim; ++k) b.m_values[k] = 0.5 * (ts - 2 * k);
    return b;
}

SpinMatrices make_spin_matrices(double s) {
    SpinMatrices out;
    out.basis = SpinBasis::make(s);
    const int d = out.basis.dim;
    out.sz = Eigen::MatrixXd::Zero(d, d);
    out.sz2 = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        out.sz(k, k) = out.basis.m_values[k];
        out.sz2(k, k) = out.basis.m_values[k] * out.basis.m_values[k];
    }
    return out;
}

double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M) {
    int tj1, tm1, tj2, tm2, tJ, tM;
    if (!to_twice(j1, tj1) || !to_twice(m1, tm1) || !to_twice(j2, tj2) || !to_twice(m2, tm2) ||
        !to_twice(J, tJ) || !to_twice(M, tM))
        return 0.0;
    if (tj1 < 0 || tj2 < 0 || tJ < 0) return 0.0;
    if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tM) > tJ) return 0.0;
    if ((tj1 - tm1) % 2 != 0 || (tj2 - tm2) % 2 != 0 || (tJ - tM) % 2 != 0) return 0.0;
    if (tm1 + tm2 != tM) return 0.0;
    if (tJ < std::abs(tj1 - tj2) || tJ > tj1 + tj2 || (tj1 + tj2 + tJ) % 2 != 0) return 0.0;
    const CouplingTable& t = coupling_table(tj1, tj2);
    return t.states.at({tJ, tM})(t.index((tj1 - tm1) / 2, (tj2 - tm2) / 2));
}

InteractionTensor::InteractionTensor(SpinBasis basis, std::map<int, double> channel_strengths,
                                     std::vector<double> u)
    : basis_(std::move(basis)), channel_strengths_(std::move(channel_strengths)), u_(std::move(u)) {
    const std::size_t d = basis_.dim;
    if (u_.size() != d * d * d * d) throw std::invalid_argument("interaction tensor has wrong size");
}

InteractionTensor build_interaction_tensor(const SpinBasis& basis,
                                           const std::map<int, double>& channel_strengths) {
    const int two_s = basis.twice_s;
    for (const auto& [S, g] : channel_strengths) {
        if (S < 0 || S > two_s) throw std::invalid_argument("channel S=" + std::to_string(S) + " outside 0..2s");
        if (S % 2 != 0) throw std::invalid_argument("odd channel S=" + std::to_string(S) + " is not allowed");
    }
    for (int S = 0; S <= two_s; S += 2)
        if (!channel_strengths.count(S))
            throw std::invalid_argument("missing strength for even channel S=" + std::to_string(S));

    const int d = basis.dim;
    const double s = basis.s();
    std::vector<double> raw(static_cast<std::size_t>(d) * d * d * d, 0.0);
    auto at = [d](int i, int j, int k, int l) { return ((i * d + j) * d + k) * d + l; };
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    const double mi = basis.m_values[i], mj = basis.m_values[j];
                    const double mk = basis.m_values[k], ml = basis.m_values[l];
                    double sum = 0.0;
                    for (const auto& [S, g] : channel_strengths) {
                        for (int tM = -2 * S; tM <= 2 * S; tM += 2) {
                            const double M = 0.5 * tM;
                            sum += g * clebsch_gordan(s, mi, s, mk, S, M) * clebsch_gordan(s, mj, s, ml, S, M);
                        }
                    }
                    raw[at(i, j, k, l)] = sum;
                }

    // Average over the exchange orbit {ijkl, kjil, ilkj, klij}; sorting first gives
    // every member of an orbit the same bits.
    std::vector<double> u(raw.size());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    std::array<double, 4> v = {raw[at(i, j, k, l)], raw[at(k, j, i, l)],
                                               raw[at(i, l, k, j)], raw[at(k, l, i, j)]};
                    std::sort(v.begin(), v.end());
                    u[at(i, j, k, l)] = 0.25 * ((v[0] + v[1]) + (v[2] + v[3]));
                }
    return InteractionTensor(basis, channel_strengths, std::move(u));
}

std::map<int, double> channel_strengths_from_lengths(const std::map<int, double>& lengths,
                                                     double mass, const Units& units) {
    if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
    std::map<int, double> g;
    for (const auto& [S, a] : lengths)
        g[S] = 4.0 * constants::pi * units.hbar * units.hbar * a / mass;
    return g;
}

InteractionTensor build_interaction_tensor_from_lengths(const SpinBasis& basis,
                                                        const std::map<int, double>& lengths,
                                                        double mass, const Units& units) {
    InteractionTensor u = build_interaction_tensor(basis, channel_strengths_from_lengths(lengths, mass, units));
    u.scattering_lengths = lengths;
    u.mass = mass;
    return u;
}

const GellMannBasis& gellmann_basis() {
    static const GellMannBasis basis = make_gellmann();
    return basis;
}

Su3Components su3_decompose(const Eigen::Matrix3cd& h) {
    const double defect = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (defect > 1e-10)
        throw std::invalid_argument("su3_decompose: input is not Hermitian (defect " + std::to_string(defect) + ")");
    const GellMannBasis& g = gellmann_basis();
    Su3Components out;
    out.c0 = h.trace().real() / 3.0;
    for (int a = 0; a < 8; ++a) out.c[a] = 2.0 * (h * g.generators[a]).trace().real();
    return out;
}

Eigen::Matrix3cd su3_reconstruct(const Su3Components& components) {
    const GellMannBasis& g = gellmann_basis();
    Eigen::Matrix3cd h = components.c0 * g.identity;
    for (int a = 0; a < 8; ++a) h += components.c[a] * g.generators[a];
    return h;
}

}  // namespace spinkin
