#include "schottkykit/poincare.hpp"

#include "schottkykit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace skt::poincare {

namespace {

// the three monomials of the quadruple as unordered index pairs
using Pair = std::pair<int, int>;
std::array<std::array<Pair, 4>, 3> monomial_pairs(const PoincareQuadruple& q) {
    auto P = [&](int a, int b) { return a < b ? Pair{a, b} : Pair{b, a}; };
    return {{{P(q.i, q.j), P(q.j, q.k), P(q.k, q.l), P(q.l, q.i)},
             {P(q.i, q.k), P(q.k, q.l), P(q.l, q.j), P(q.j, q.i)},
             {P(q.i, q.l), P(q.l, q.j), P(q.j, q.k), P(q.k, q.i)}}};
}

template <typename Entry, typename Get>
std::array<Entry, 3> monomials_eval(const PoincareQuadruple& q, Get get) {
    auto mp = monomial_pairs(q);
    std::array<Entry, 3> P{get(mp[0][0]), get(mp[1][0]), get(mp[2][0])};
    for (int m = 0; m < 3; ++m)
        for (int f = 1; f < 4; ++f) P[m] = P[m] * get(mp[m][f]);
    return P;
}

template <typename Entry>
Entry symmetrize(const std::array<Entry, 3>& P) {
    Entry s = P[0] * P[0] + P[1] * P[1] + P[2] * P[2];
    Entry c = P[0] * P[1] + P[0] * P[2] + P[1] * P[2];
    return s - c - c;
}

}  // namespace

HPComplex poincare_symmetrized(const PoincareQuadruple& q, const PeriodMatrix& tau) {
    if (q.l > tau.genus) throw std::invalid_argument("poincare_symmetrized: quadruple exceeds genus");
    auto get = [&](const Pair& p) { return tau.at(p.first - 1, p.second - 1); };
    return symmetrize(monomials_eval<HPComplex>(q, get));
}

HPComplex poincare_symmetrized(const PoincareQuadruple& q, const Direction& T) {
    if (q.l > T.genus) throw std::invalid_argument("poincare_symmetrized: quadruple exceeds genus");
    auto get = [&](const Pair& p) { return T.at(p.first, p.second); };
    return symmetrize(monomials_eval<HPComplex>(q, get));
}

Rational poincare_symmetrized_exact(const PoincareQuadruple& q,
                                    const std::map<std::pair<int, int>, Rational>& point) {
    auto get = [&](const Pair& p) { return point.at(p); };
    return symmetrize(monomials_eval<Rational>(q, get));
}

Rational poincare_partial_exact(const PoincareQuadruple& q, int a, int b,
                                const std::map<std::pair<int, int>, Rational>& point) {
    if (a > b) std::swap(a, b);
    Pair var{a, b};
    auto mp = monomial_pairs(q);
    auto get = [&](const Pair& p) { return point.at(p); };
    std::array<Rational, 3> P = monomials_eval<Rational>(q, get);
    std::array<Rational, 3> dP;
    for (int m = 0; m < 3; ++m) {
        // each entry appears at most once per monomial
        int mult = 0;
        Rational others = 1;
        for (const auto& p : mp[m]) {
            if (p == var)
                ++mult;
            else
                others *= get(p);
        }
        dP[m] = mult ? Rational(mult) * others : Rational(0);
    }
    Rational d = 2 * (P[0] * dP[0] + P[1] * dP[1] + P[2] * dP[2]);
    d -= 2 * (dP[0] * P[1] + P[0] * dP[1]);
    d -= 2 * (dP[0] * P[2] + P[0] * dP[2]);
    d -= 2 * (dP[1] * P[2] + P[1] * dP[2]);
    return d;
}

Direction random_direction(int genus, std::uint64_t seed, int digits) {
    mpfr_prec_t prec = bits_for_digits(digits);
    Rng rng(seed);
    Direction d;
    d.genus = genus;
    d.T.assign(static_cast<size_t>(genus) * genus, HPComplex(prec));
    for (int a = 0; a < genus; ++a)
        for (int b = a + 1; b < genus; ++b) {
            double re, im;
            do {
                re = rng.uniform_pm1();
                im = 0.3 * rng.uniform_pm1();
            } while (re * re + im * im < 0.09);  // keep |T_ab| >= 0.3
            HPComplex v(re, im, prec);
            d.T[static_cast<size_t>(a) * genus + b] = v;
            d.T[static_cast<size_t>(b) * genus + a] = v;
        }
    return d;
}

namespace {
PeriodMatrix displaced(const std::vector<HPComplex>& t, const Direction& T, double eps) {
    mpfr_prec_t prec = t.at(0).prec();
    return theta::diagonal_plus(t, T.T, HPReal(eps, prec));
}
}  // namespace

FitResult leading_order_fit(const SJIdentity& s, const std::vector<HPComplex>& t, const Direction& T,
                            const std::vector<double>& eps_ladder, int digits, std::uint64_t branch_seed,
                            const EvalOptions& opts) {
    FitResult fr;
    if (eps_ladder.size() < 2) {
        fr.error = "ladder needs at least two points";
        return fr;
    }
    for (size_t i = 0; i + 1 < eps_ladder.size(); ++i)
        if (!(eps_ladder[i] > eps_ladder[i + 1]) || eps_ladder[i] >= 0.1) {
            fr.error = "ladder must be decreasing and < 0.1";
            return fr;
        }

    for (double eps : eps_ladder) {
        schottky::SJValue v = schottky::evaluate_SJ(s, displaced(t, T, eps), digits, branch_seed, opts);
        if (v.exact_zero) {
            fr.error = "evaluation exactly zero at ladder point (degenerate direction)";
            return fr;
        }
        fr.log_eps.push_back(std::log(eps));
        fr.log_mag.push_back(v.value.log_mag.to_double());
    }
    for (size_t i = 0; i + 1 < fr.log_mag.size(); ++i)
        if (!(fr.log_mag[i] > fr.log_mag[i + 1])) {
            fr.error = "non-monotone magnitudes along the ladder (raise the working precision)";
            return fr;
        }

    double n = static_cast<double>(fr.log_eps.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < fr.log_eps.size(); ++i) {
        sx += fr.log_eps[i];
        sy += fr.log_mag[i];
        sxx += fr.log_eps[i] * fr.log_eps[i];
        sxy += fr.log_eps[i] * fr.log_mag[i];
    }
    fr.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fr.log_coefficient = (sy - fr.slope * sx) / n;
    fr.ok = true;
    return fr;
}

RatioReport poincare_ratio_test(int g, int j, int k, const std::vector<HPComplex>& t,
                                const std::vector<Direction>& dirs, double eps, int digits,
                                const EvalOptions& opts) {
    RatioReport rep;
    rep.tolerance = 20.0 * eps;
    mpfr_prec_t prec = bits_for_digits(digits + opts.guard_digits);
    SJIdentity s = schottky::build_S(g, j, k);
    const long long m = sym_power(g), d = leading_degree(g);
    PoincareQuadruple quad(1, 2, j, k);

    std::vector<LogComplex> rhos;
    for (const auto& T : dirs) {
        HPComplex Q = poincare_symmetrized(quad, T);
        if (Q.is_exact_zero()) {
            rep.error = "direction lies on the Poincare locus (symmetrized polynomial vanishes)";
            return rep;
        }
        schottky::SJValue v = schottky::evaluate_SJ(s, displaced(t, T, eps), digits, 1, opts);
        if (v.exact_zero) {
            rep.error = "S vanished exactly at a test direction";
            return rep;
        }
        LogComplex denom = LogComplex::from(Q);
        denom.log_mag = denom.log_mag * m;
        denom.phase = denom.phase * m;
        denom.wrap_phase();
        HPReal logeps(std::log(eps), prec);
        denom.log_mag = denom.log_mag + logeps * d;
        LogComplex rho = v.value;
        rho.log_mag = rho.log_mag - denom.log_mag;
        rho.phase = rho.phase - denom.phase;
        rho.wrap_phase();
        rhos.push_back(rho);
    }

    rep.common_log_ratio = rhos.at(0);
    double maxdev = 0.0;
    HPComplex one(1.0, 0.0, prec);
    for (size_t a = 0; a < rhos.size(); ++a) {
        if (a > 0) rep.ratios_vs_first.push_back(rhos[a].ratio(rhos[0]));
        for (size_t b = a + 1; b < rhos.size(); ++b) {
            HPComplex r = rhos[b].ratio(rhos[a]);
            maxdev = std::max(maxdev, (r - one).abs().to_double());
        }
    }
    rep.max_pairwise_rel = maxdev;
    rep.pass = maxdev <= rep.tolerance;
    return rep;
}

std::map<std::pair<int, int>, Rational> random_rational_point(int g, std::uint64_t seed) {
    Rng rng(seed);
    std::map<std::pair<int, int>, Rational> pt;
    for (int a = 1; a <= g; ++a)
        for (int b = a + 1; b <= g; ++b) {
            long long num = 0;
            while (num == 0) num = static_cast<long long>(rng.next_below(199)) - 99;
            long long den = 1 + static_cast<long long>(rng.next_below(9));
            pt[{a, b}] = Rational(num, den);
        }
    return pt;
}

namespace {

int rank_rational(std::vector<std::vector<Rational>> w) {
    int n = static_cast<int>(w.size());
    if (n == 0) return 0;
    int m = static_cast<int>(w[0].size());
    int r = 0;
    for (int c = 0; c < m && r < n; ++c) {
        int piv = -1;
        for (int i = r; i < n; ++i)
            if (w[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(w[piv], w[r]);
        for (int i = r + 1; i < n; ++i) {
            if (w[i][c] == 0) continue;
            Rational f = w[i][c] / w[r][c];
            for (int jj = c; jj < m; ++jj) w[i][jj] -= f * w[r][jj];
        }
        ++r;
    }
    return r;
}

int rank_double(std::vector<std::vector<double>> w) {
    int n = static_cast<int>(w.size());
    if (n == 0) return 0;
    int m = static_cast<int>(w[0].size());
    double scale = 0;
    for (auto& row : w)
        for (double v : row) scale = std::max(scale, std::fabs(v));
    if (scale == 0) return 0;
    double tol = scale * 1e-9;
    int r = 0;
    for (int c = 0; c < m && r < n; ++c) {
        int piv = r;
        for (int i = r; i < n; ++i)
            if (std::fabs(w[i][c]) > std::fabs(w[piv][c])) piv = i;
        if (std::fabs(w[piv][c]) < tol) continue;
        std::swap(w[piv], w[r]);
        for (int i = r + 1; i < n; ++i) {
            double f = w[i][c] / w[r][c];
            for (int jj = c; jj < m; ++jj) w[i][jj] -= f * w[r][jj];
        }
        ++r;
    }
    return r;
}

}  // namespace

int independence_rank_poincare(int g, const std::map<std::pair<int, int>, Rational>& point, bool exact) {
    if (g < 4) throw std::invalid_argument("independence_rank_poincare: genus must be >= 4");
    for (const auto& kv : point)
        if (kv.second == 0) throw std::invalid_argument("independence_rank_poincare: point must have nonzero entries");

    std::vector<std::pair<int, int>> vars, quads;
    for (int a = 3; a <= g; ++a)
        for (int b = a + 1; b <= g; ++b) vars.push_back({a, b});
    for (int j = 3; j <= g; ++j)
        for (int k = j + 1; k <= g; ++k) quads.push_back({j, k});

    if (exact) {
        std::vector<std::vector<Rational>> J(quads.size(), std::vector<Rational>(vars.size()));
        for (size_t r = 0; r < quads.size(); ++r) {
            PoincareQuadruple q(1, 2, quads[r].first, quads[r].second);
            for (size_t c = 0; c < vars.size(); ++c)
                J[r][c] = poincare_partial_exact(q, vars[c].first, vars[c].second, point);
        }
        return rank_rational(std::move(J));
    }
    std::vector<std::vector<double>> J(quads.size(), std::vector<double>(vars.size()));
    for (size_t r = 0; r < quads.size(); ++r) {
        PoincareQuadruple q(1, 2, quads[r].first, quads[r].second);
        for (size_t c = 0; c < vars.size(); ++c)
            J[r][c] = static_cast<double>(poincare_partial_exact(q, vars[c].first, vars[c].second, point));
    }
    return rank_double(std::move(J));
}

namespace {

// smallest singular value of a small complex matrix via Jacobi eigenvalues
// of A^H A (n <= 15)
double min_singular_value(const std::vector<std::vector<std::complex<double>>>& A) {
    int n = static_cast<int>(A.size());
    std::vector<std::vector<std::complex<double>>> H(n, std::vector<std::complex<double>>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::complex<double> s = 0;
            for (int k = 0; k < n; ++k) s += std::conj(A[k][i]) * A[k][j];
            H[i][j] = s;
        }
    // complex Jacobi on the Hermitian matrix H
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(H[p][q]);
        if (off < 1e-28) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(H[p][q]) < 1e-18) continue;
                double app = H[p][p].real(), aqq = H[q][q].real();
                std::complex<double> apq = H[p][q];
                double phi = std::arg(apq);
                double m = std::abs(apq);
                double theta = 0.5 * std::atan2(2 * m, app - aqq);
                std::complex<double> c = std::cos(theta);
                std::complex<double> s = std::sin(theta) * std::exp(std::complex<double>(0, phi));
                for (int r = 0; r < n; ++r) {
                    auto hrp = H[r][p], hrq = H[r][q];
                    H[r][p] = hrp * std::conj(c) + hrq * std::conj(s);
                    H[r][q] = -hrp * s + hrq * c;
                }
                for (int r = 0; r < n; ++r) {
                    auto hpr = H[p][r], hqr = H[q][r];
                    H[p][r] = c * hpr + s * hqr;
                    H[q][r] = -std::conj(s) * hpr + std::conj(c) * hqr;
                }
            }
    }
    double mn = 1e300;
    for (int i = 0; i < n; ++i) mn = std::min(mn, std::max(0.0, H[i][i].real()));
    return std::sqrt(mn);
}

}  // namespace

IndepSReport independence_rank_S(int g, const std::vector<HPComplex>& t, const Direction& T, double eps,
                                 int digits, const EvalOptions& opts) {
    IndepSReport rep;
    std::vector<std::pair<int, int>> idx;
    for (int a = 3; a <= g; ++a)
        for (int b = a + 1; b <= g; ++b) idx.push_back({a, b});
    int n = static_cast<int>(idx.size());
    double h = eps / 100.0;

    for (int attempt = 0; attempt < 2; ++attempt) {
        int P = digits + 40 * attempt;
        rep.digits_used = P;
        rep.retried = attempt > 0;
        mpfr_prec_t prec = bits_for_digits(P + opts.guard_digits);
        PeriodMatrix base = displaced(t, T, eps);
        // refresh base at the working precision
        PeriodMatrix tau0(g, prec);
        for (int a = 0; a < g; ++a)
            for (int b = 0; b < g; ++b) {
                HPComplex v(prec);
                mpfr_set(v.re.raw(), base.at(a, b).re.raw(), MPFR_RNDN);
                mpfr_set(v.im.raw(), base.at(a, b).im.raw(), MPFR_RNDN);
                tau0.at(a, b) = v;
            }

        bool noise = false;
        std::vector<std::vector<LogComplex>> deriv(n);
        for (int r = 0; r < n && !noise; ++r) {
            SJIdentity s = schottky::build_S(g, idx[r].first, idx[r].second);
            for (int c = 0; c < n && !noise; ++c) {
                PeriodMatrix tp = tau0, tm = tau0;
                HPComplex step(h, 0.0, prec);
                tp.set_sym(idx[c].first - 1, idx[c].second - 1, tau0.at(idx[c].first - 1, idx[c].second - 1) + step);
                tm.set_sym(idx[c].first - 1, idx[c].second - 1, tau0.at(idx[c].first - 1, idx[c].second - 1) - step);
                schottky::SJValue vp = schottky::evaluate_SJ(s, tp, P, 1, opts);
                schottky::SJValue vm = schottky::evaluate_SJ(s, tm, P, 1, opts);
                if (vp.exact_zero || vm.exact_zero) {
                    rep.error = "S vanished exactly during differentiation";
                    return rep;
                }
                // (S+ - S-) = S- (S+/S- - 1); detect the rounding floor on the ratio
                HPComplex ratio = vp.value.ratio(vm.value);
                HPComplex dm1 = ratio - HPComplex(1.0, 0.0, prec);
                if (dm1.abs().to_double() < 1e3 * std::pow(10.0, -(P - 12))) {
                    noise = true;
                    break;
                }
                LogComplex dv = vm.value;
                dv.mul(LogComplex::from(dm1));
                dv.log_mag = dv.log_mag - HPReal(std::log(2.0 * h), prec);
                deriv[r].push_back(dv);
            }
        }
        if (noise) {
            if (attempt == 0) continue;
            rep.error = "finite differences below the rounding floor even after retry";
            return rep;
        }

        // normalize rows by the largest entry, then take the smallest singular value
        std::vector<std::vector<std::complex<double>>> A(n, std::vector<std::complex<double>>(n));
        for (int r = 0; r < n; ++r) {
            double mx = -1e300;
            for (int c = 0; c < n; ++c) mx = std::max(mx, deriv[r][c].log_mag.to_double());
            for (int c = 0; c < n; ++c) {
                double lm = deriv[r][c].log_mag.to_double() - mx;
                double ph = deriv[r][c].phase.to_double();
                A[r][c] = std::polar(std::exp(lm), ph);
            }
        }
        rep.min_singular = (n == 1) ? std::abs(A[0][0]) : min_singular_value(A);
        rep.pass = rep.min_singular > 0.5;
        return rep;
    }
    return rep;
}

}  // namespace skt::poincare
