#pragma once
// Poincare near-diagonal relations and the scaling analysis of S_jk.
//
// For a quadruple i<j<k<l the three degree-4 monomials in off-diagonal
// period matrix entries are
//   P1 = t_ij t_jk t_kl t_li,  P2 = t_ik t_kl t_lj t_ji,  P3 = t_il t_lj t_jk t_ki,
// and the branch-free symmetrized relation is the degree-8 polynomial
//   Q = P1^2 + P2^2 + P3^2 - 2 P1 P2 - 2 P1 P3 - 2 P2 P3
// (the product of sqrt(P1) +- sqrt(P2) +- sqrt(P3) over sign choices).
//
// Near tau = diag(t) + eps*T the form S_jk scales like
//   S_jk ~ C * Q_{12jk}(T)^(2^(3*2^(g-4)-3)) * eps^d(g),
//   d(g) = 8 * 2^(3*2^(g-4)-3),
// which is measured here by log-log fits and by the direction-independence
// of the ratio S / (Q^m eps^d). Functional independence is certified exactly
// (rational arithmetic) for the Poincare system and numerically for the
// S-Jacobian.

#include "schottkykit/schottky.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <map>

namespace skt::poincare {

using Rational = boost::multiprecision::cpp_rational;
using schottky::SJIdentity;
using theta::EvalOptions;
using theta::PeriodMatrix;

struct PoincareQuadruple {
    int i, j, k, l;  // 1-based, strictly increasing
    PoincareQuadruple(int a, int b, int c, int d) : i(a), j(b), k(c), l(d) {
        if (!(1 <= a && a < b && b < c && c < d)) throw std::invalid_argument("quadruple must be increasing");
    }
};

// leading degree of S_jk near the diagonal and the power of Q in its lowest term
inline long long sym_power(int g) { return 1LL << (3 * (1LL << (g - 4)) - 3); }
inline long long leading_degree(int g) { return 8 * sym_power(g); }

// symmetric zero-diagonal direction matrix for tau = diag(t) + eps * T
struct Direction {
    int genus = 0;
    std::vector<HPComplex> T;  // row-major g*g

    const HPComplex& at(int a, int b) const { return T[static_cast<size_t>(a - 1) * genus + (b - 1)]; }
};

// entries with modulus in [0.3, ~1.1], dyadic, deterministic in the seed
Direction random_direction(int genus, std::uint64_t seed, int digits);

HPComplex poincare_symmetrized(const PoincareQuadruple& q, const PeriodMatrix& tau);
HPComplex poincare_symmetrized(const PoincareQuadruple& q, const Direction& T);

// the same polynomial over exact rationals; `point` maps (a,b), a<b, to t_ab
Rational poincare_symmetrized_exact(const PoincareQuadruple& q, const std::map<std::pair<int, int>, Rational>& point);
Rational poincare_partial_exact(const PoincareQuadruple& q, int a, int b,
                                const std::map<std::pair<int, int>, Rational>& point);

struct FitResult {
    bool ok = false;
    double slope = 0.0;
    double log_coefficient = 0.0;  // natural log of the fitted leading coefficient magnitude
    std::vector<double> log_eps, log_mag;
    std::string error;
};

// least-squares fit of log|S| against log(eps) over the ladder
FitResult leading_order_fit(const SJIdentity& s, const std::vector<HPComplex>& t, const Direction& T,
                            const std::vector<double>& eps_ladder, int digits, std::uint64_t branch_seed = 1,
                            const EvalOptions& opts = {});

struct RatioReport {
    bool pass = false;
    double max_pairwise_rel = 0.0;
    double tolerance = 0.0;
    std::vector<HPComplex> ratios_vs_first;  // rho_d / rho_0
    LogComplex common_log_ratio;             // rho_0, the measured theta prefactor
    std::string error;
};

// rho(T) = S_jk(diag(t)+eps T) / (Q_{12jk}(T)^m eps^d) must agree across
// directions within 20*eps; directions on the Poincare locus are rejected
RatioReport poincare_ratio_test(int g, int j, int k, const std::vector<HPComplex>& t,
                                const std::vector<Direction>& dirs, double eps, int digits,
                                const EvalOptions& opts = {});

// rank of the Jacobian of the (g-2)(g-3)/2 polynomials Q_{12jk} with respect
// to {t_ab : 3 <= a < b <= g} at the point (exact rational elimination when
// exact, double elimination otherwise)
int independence_rank_poincare(int g, const std::map<std::pair<int, int>, Rational>& point, bool exact);

// deterministic random rational point with all entries nonzero
std::map<std::pair<int, int>, Rational> random_rational_point(int g, std::uint64_t seed);

struct IndepSReport {
    bool pass = false;
    double min_singular = 0.0;  // of the row-normalized Jacobian
    int digits_used = 0;
    bool retried = false;
    std::string error;
};

// numeric S-Jacobian at diag(t) + eps*T by central differences with step
// eps/100, rows normalized by their largest entry; PASS iff the smallest
// singular value exceeds 0.5. Retries once at P+40 when the finite
// differences sit below the rounding floor.
IndepSReport independence_rank_S(int g, const std::vector<HPComplex>& t, const Direction& T, double eps,
                                 int digits, const EvalOptions& opts = {});

}  // namespace skt::poincare
