#include "schottkykit/theta.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skt::theta {

namespace {

constexpr double kLn10 = 2.302585092994046;

// ---------------------------------------------------------------------------
// raw mpfr complex registers for the allocation-free inner loops
// ---------------------------------------------------------------------------

struct CReg {
    mpfr_t re, im;
    explicit CReg(mpfr_prec_t p) {
        mpfr_init2(re, p);
        mpfr_init2(im, p);
        mpfr_set_zero(re, 1);
        mpfr_set_zero(im, 1);
    }
    CReg(const CReg&) = delete;
    CReg& operator=(const CReg&) = delete;
    ~CReg() {
        mpfr_clear(re);
        mpfr_clear(im);
    }
    void set(const CReg& o) {
        mpfr_set(re, o.re, MPFR_RNDN);
        mpfr_set(im, o.im, MPFR_RNDN);
    }
    void set_zero() {
        mpfr_set_zero(re, 1);
        mpfr_set_zero(im, 1);
    }
    HPComplex to_hp(mpfr_prec_t p) const {
        HPComplex z(p);
        mpfr_set(z.re.raw(), re, MPFR_RNDN);
        mpfr_set(z.im.raw(), im, MPFR_RNDN);
        return z;
    }
};

// scratch for one enumeration worker
struct Work {
    mpfr_prec_t p;
    mpfr_t t1, t2, t3;      // real temporaries
    mpfr_t pi, two;         // cached constants at working precision
    explicit Work(mpfr_prec_t prec) : p(prec) {
        mpfr_inits2(prec, t1, t2, t3, static_cast<mpfr_ptr>(nullptr));
        mpfr_inits2(prec, pi, two, static_cast<mpfr_ptr>(nullptr));
        mpfr_const_pi(pi, MPFR_RNDN);
        mpfr_set_si(two, 2, MPFR_RNDN);
    }
    Work(const Work&) = delete;
    ~Work() { mpfr_clears(t1, t2, t3, pi, two, static_cast<mpfr_ptr>(nullptr)); }
};

// a *= b  (two fused ops per component)
inline void cmul_eq(CReg& a, const CReg& b, Work& w) {
    mpfr_fmms(w.t1, a.re, b.re, a.im, b.im, MPFR_RNDN);  // re*re - im*im
    mpfr_fmma(w.t2, a.re, b.im, a.im, b.re, MPFR_RNDN);  // re*im + im*re
    mpfr_swap(a.re, w.t1);
    mpfr_swap(a.im, w.t2);
}

// acc += a
inline void cadd_eq(CReg& acc, const CReg& a) {
    mpfr_add(acc.re, acc.re, a.re, MPFR_RNDN);
    mpfr_add(acc.im, acc.im, a.im, MPFR_RNDN);
}

// out = exp(pi*i*(wr + i*wi)) = exp(-pi*wi) * (cos(pi*wr'), sin(pi*wr'))
inline void cexp_pi_i(CReg& out, mpfr_srcptr wr, mpfr_srcptr wi, Work& w) {
    mpfr_fmod(w.t1, wr, w.two, MPFR_RNDN);         // reduce phase mod 2
    mpfr_mul(w.t1, w.t1, w.pi, MPFR_RNDN);
    mpfr_sin_cos(out.im, out.re, w.t1, MPFR_RNDN);
    mpfr_mul(w.t2, wi, w.pi, MPFR_RNDN);
    mpfr_neg(w.t2, w.t2, MPFR_RNDN);
    mpfr_exp(w.t2, w.t2, MPFR_RNDN);
    mpfr_mul(out.re, out.re, w.t2, MPFR_RNDN);
    mpfr_mul(out.im, out.im, w.t2, MPFR_RNDN);
}

// ---------------------------------------------------------------------------
// truncation plan: per-axis radii + ellipsoid prune threshold, with the
// Gaussian tail budget split between outside-box mass and pruned points
// ---------------------------------------------------------------------------

struct Plan {
    int g = 0;
    mpfr_prec_t prec = 64;
    double lam = 0.0, qhat = 0.0, qt = 0.0;
    std::vector<double> Yd;        // Im tau (double)
    std::vector<double> D, U;      // LDL^T of Yd, unit upper U
    std::vector<double> Rx;        // |x| bound per axis
    std::vector<int> nlo, nhi;     // n range per axis (x = n + eps/2)
};

double theta_axis_bound(double lam) {
    double s = 1.0;
    for (int m = 1; m < 2000; ++m) {
        double t = std::exp(-M_PI * lam * m * m);
        s += 2 * t;
        if (t < 1e-300) break;
    }
    return s;
}

Plan make_plan(const Characteristic& m, const PeriodMatrix& tau, int digits, const EvalOptions& opts) {
    Plan pl;
    int g = tau.genus;
    pl.g = g;
    pl.prec = bits_for_digits(digits + opts.guard_digits);

    PdCertificate cert = validate_period_matrix(tau);
    if (!cert.ok) throw std::domain_error("theta_constant: invalid period matrix: " + cert.message);
    if (cert.lambda_min_lb < 1e-3)
        throw std::domain_error("theta_constant: Im(tau) too close to singular (lambda_min < 1e-3)");
    pl.lam = cert.lambda_min_lb;

    pl.Yd.resize(static_cast<size_t>(g) * g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) pl.Yd[static_cast<size_t>(i) * g + j] = tau.at(i, j).im.to_double();

    // LDL^T in doubles (PD with margin already certified)
    pl.D.assign(g, 0.0);
    pl.U.assign(static_cast<size_t>(g) * g, 0.0);
    {
        std::vector<double> Lw(static_cast<size_t>(g) * g, 0.0);
        for (int j = 0; j < g; ++j) {
            double d = pl.Yd[static_cast<size_t>(j) * g + j];
            for (int k = 0; k < j; ++k) d -= Lw[static_cast<size_t>(j) * g + k] * Lw[static_cast<size_t>(j) * g + k] * pl.D[k];
            pl.D[j] = d;
            Lw[static_cast<size_t>(j) * g + j] = 1.0;
            for (int i = j + 1; i < g; ++i) {
                double s = pl.Yd[static_cast<size_t>(i) * g + j];
                for (int k = 0; k < j; ++k)
                    s -= Lw[static_cast<size_t>(i) * g + k] * Lw[static_cast<size_t>(j) * g + k] * pl.D[k];
                Lw[static_cast<size_t>(i) * g + j] = s / d;
            }
        }
        // q(x) = sum_l D_l (x_l + sum_{j>l} U_lj x_j)^2 wants unit UPPER U = Lw^t
        for (int l = 0; l < g; ++l)
            for (int j = l; j < g; ++j) pl.U[static_cast<size_t>(l) * g + j] = Lw[static_cast<size_t>(j) * g + l];
    }

    // diag of Y^{-1} from the factorization
    std::vector<double> dinv(g, 0.0);
    for (int i = 0; i < g; ++i) {
        std::vector<double> z(g, 0.0);
        z[i] = 1.0;  // solve U^t z = e_i downward (U^t is unit lower)
        for (int r = i + 1; r < g; ++r) {
            double s = 0.0;
            for (int k = i; k < r; ++k) s += pl.U[static_cast<size_t>(k) * g + r] * z[k];
            z[r] = -s;
        }
        double acc = 0.0;
        for (int k = i; k < g; ++k) acc += z[k] * z[k] / pl.D[k];
        dinv[i] = acc;
    }

    // qhat: smallest quadratic value found near the origin (safe upper bound
    // on the true coset minimum; used to express the tail budget relative to
    // the largest term)
    {
        int scan = g <= 4 ? 5 : (g <= 6 ? 2 : 1);
        std::vector<int> n(g, -scan);
        double best = 1e300;
        while (true) {
            double q = 0.0;
            for (int i = 0; i < g; ++i) {
                double xi = n[i] + 0.5 * ((m.eps >> i) & 1);
                for (int j = 0; j < g; ++j) {
                    double xj = n[j] + 0.5 * ((m.eps >> j) & 1);
                    q += xi * pl.Yd[static_cast<size_t>(i) * g + j] * xj;
                }
            }
            best = std::min(best, q);
            int l = 0;
            while (l < g && ++n[l] > scan) n[l++] = -scan;
            if (l == g) break;
        }
        pl.qhat = best;
    }

    double Ltarget = -(digits + opts.guard_digits) * kLn10 - M_PI * pl.qhat;
    double log_thetab = std::log(theta_axis_bound(pl.lam));

    pl.Rx.resize(g);
    pl.nlo.resize(g);
    pl.nhi.resize(g);
    double log_box = 0.0;
    for (int i = 0; i < g; ++i) {
        int R = 1;
        for (;; ++R) {
            double a = M_PI * R / dinv[i];
            double lhs = std::log(2.0) - a * R - std::log1p(-std::exp(-2.0 * a)) + (g - 1) * log_thetab;
            if (lhs <= Ltarget - std::log(2.0 * g)) break;
            if (R > opts.radius_cap)
                throw std::domain_error("theta_constant: truncation radius exceeds cap (ill-conditioned Im tau)");
        }
        pl.Rx[i] = R + opts.radius_boost;
        double e2 = 0.5 * ((m.eps >> i) & 1);
        pl.nlo[i] = static_cast<int>(std::ceil(-pl.Rx[i] - e2));
        pl.nhi[i] = static_cast<int>(std::floor(pl.Rx[i] - e2));
        log_box += std::log(static_cast<double>(pl.nhi[i] - pl.nlo[i] + 2));
    }
    pl.qt = (log_box + std::log(2.0) - Ltarget) / M_PI;
    return pl;
}

// ---------------------------------------------------------------------------
// fast kernel
// ---------------------------------------------------------------------------

struct SliceJob {
    int n_outer = 0;  // fixed n value on axis g-1 (ignored for g = 1)
};

class FastSum {
  public:
    FastSum(const Characteristic& m, const PeriodMatrix& tau, const Plan& pl)
        : m_(m), pl_(pl), g_(pl.g), prec_(pl.prec) {
        // working-precision copies of tau
        t_.reserve(static_cast<size_t>(g_) * g_);
        for (int i = 0; i < g_; ++i)
            for (int j = 0; j < g_; ++j) {
                HPComplex z(prec_);
                mpfr_set(z.re.raw(), tau.at(i, j).re.raw(), MPFR_RNDN);
                mpfr_set(z.im.raw(), tau.at(i, j).im.raw(), MPFR_RNDN);
                t_.push_back(std::move(z));
            }
    }

    HPComplex run() const {
        std::vector<SliceJob> jobs;
        if (g_ == 1) {
            jobs.push_back({0});
        } else {
            int l = g_ - 1;
            double e2 = 0.5 * ((m_.eps >> l) & 1);
            double s = std::sqrt(std::max(0.0, pl_.qt / pl_.D[l])) + 1e-9;
            int a = std::max(pl_.nlo[l], static_cast<int>(std::ceil(-s - e2)));
            int b = std::min(pl_.nhi[l], static_cast<int>(std::floor(s - e2)));
            for (int n = a; n <= b; ++n) jobs.push_back({n});
        }

        std::vector<HPComplex> partial(jobs.size(), HPComplex(prec_));
#pragma omp parallel for schedule(dynamic)
        for (int jj = 0; jj < static_cast<int>(jobs.size()); ++jj) partial[jj] = run_slice(jobs[jj]);

        HPComplex total(prec_);
        for (const auto& p : partial) total = total + p;  // fixed combine order
        return total;
    }

  private:
    const Characteristic& m_;
    const Plan& pl_;
    int g_;
    mpfr_prec_t prec_;
    std::vector<HPComplex> t_;

    const HPComplex& tc(int i, int j) const { return t_[static_cast<size_t>(i) * g_ + j]; }

    // state per level: wrest and cross[i] = sum_{j >= level} tau_ij x_j, i < level
    HPComplex run_slice(const SliceJob& job) const {
        Work w(prec_);

        // per-slice state stacks (levels g..0)
        std::vector<CReg*> wrest;    // [g+1]
        std::vector<CReg*> cross;    // [(g+1) * g]
        for (int l = 0; l <= g_; ++l) wrest.push_back(new CReg(prec_));
        for (int l = 0; l <= g_; ++l)
            for (int i = 0; i < g_; ++i) cross.push_back(new CReg(prec_));
        auto crs = [&](int level, int i) -> CReg& { return *cross[static_cast<size_t>(level) * g_ + i]; };

        CReg acc(prec_), E(prec_), Dm(prec_), V(prec_), tmp(prec_), tmp2(prec_);
        std::vector<int> ns(g_, 0);
        std::vector<double> xs(g_, 0.0);

        // V = exp(2 pi i a), a = tau_00
        {
            mpfr_mul_si(w.t1, tc(0, 0).re.raw(), 2, MPFR_RNDN);
            mpfr_mul_si(w.t2, tc(0, 0).im.raw(), 2, MPFR_RNDN);
            cexp_pi_i(V, w.t1, w.t2, w);
        }

        // descend into a level with X = 2n + eps_bit:
        //   wrest[l] = wrest[l+1] + tau_ll X^2/4 + cross[l+1][l] X + delta_l X/2
        //   cross[l][i] = cross[l+1][i] + tau_il X/2
        auto descend = [&](int l, long X) {
            CReg& wl = *wrest[l];
            wl.set(*wrest[l + 1]);
            // tau_ll * X^2 / 4
            mpfr_mul_si(w.t1, tc(l, l).re.raw(), X * X, MPFR_RNDN);
            mpfr_div_2si(w.t1, w.t1, 2, MPFR_RNDN);
            mpfr_add(wl.re, wl.re, w.t1, MPFR_RNDN);
            mpfr_mul_si(w.t1, tc(l, l).im.raw(), X * X, MPFR_RNDN);
            mpfr_div_2si(w.t1, w.t1, 2, MPFR_RNDN);
            mpfr_add(wl.im, wl.im, w.t1, MPFR_RNDN);
            // cross[l+1][l] * X
            mpfr_mul_si(w.t1, crs(l + 1, l).re, X, MPFR_RNDN);
            mpfr_add(wl.re, wl.re, w.t1, MPFR_RNDN);
            mpfr_mul_si(w.t1, crs(l + 1, l).im, X, MPFR_RNDN);
            mpfr_add(wl.im, wl.im, w.t1, MPFR_RNDN);
            // delta_l * X / 2 (real)
            if ((m_.delta >> l) & 1) {
                mpfr_set_si(w.t1, X, MPFR_RNDN);
                mpfr_div_2si(w.t1, w.t1, 1, MPFR_RNDN);
                mpfr_add(wl.re, wl.re, w.t1, MPFR_RNDN);
            }
            for (int i = 0; i < l; ++i) {
                CReg& ci = crs(l, i);
                ci.set(crs(l + 1, i));
                mpfr_mul_si(w.t1, tc(i, l).re.raw(), X, MPFR_RNDN);
                mpfr_div_2si(w.t1, w.t1, 1, MPFR_RNDN);
                mpfr_add(ci.re, ci.re, w.t1, MPFR_RNDN);
                mpfr_mul_si(w.t1, tc(i, l).im.raw(), X, MPFR_RNDN);
                mpfr_div_2si(w.t1, w.t1, 1, MPFR_RNDN);
                mpfr_add(ci.im, ci.im, w.t1, MPFR_RNDN);
            }
        };

        // inner loop over axis 0 given state at level 1
        auto inner = [&](double partial_q) {
            int l = 0;
            double e2 = 0.5 * (m_.eps & 1);
            double c = 0.0;
            for (int j = 1; j < g_; ++j) c += pl_.U[j] * xs[j];  // U[0*g+j]
            double s = std::sqrt(std::max(0.0, (pl_.qt - partial_q) / pl_.D[0])) + 1e-9;
            int a = std::max(pl_.nlo[l], static_cast<int>(std::ceil(-c - s - e2)));
            int b = std::min(pl_.nhi[l], static_cast<int>(std::floor(-c + s - e2)));
            if (a > b) return;

            long Xlo = 2L * a + (m_.eps & 1);
            // b2 = 2*cross[1][0] + delta_0, held in tmp2 = (b2.re, b2.im)
            mpfr_mul_si(tmp2.re, crs(1, 0).re, 2, MPFR_RNDN);
            if (m_.delta & 1) mpfr_add_si(tmp2.re, tmp2.re, 1, MPFR_RNDN);
            mpfr_mul_si(tmp2.im, crs(1, 0).im, 2, MPFR_RNDN);

            // w_lo = wrest[1] + a*Xlo^2/4 + b2*Xlo/2
            mpfr_mul_si(w.t1, tc(0, 0).re.raw(), Xlo * Xlo, MPFR_RNDN);
            mpfr_div_2si(w.t1, w.t1, 2, MPFR_RNDN);
            mpfr_add(w.t1, w.t1, wrest[1]->re, MPFR_RNDN);
            mpfr_mul_si(w.t2, tmp2.re, Xlo, MPFR_RNDN);
            mpfr_div_2si(w.t2, w.t2, 1, MPFR_RNDN);
            mpfr_add(tmp.re, w.t1, w.t2, MPFR_RNDN);
            mpfr_mul_si(w.t1, tc(0, 0).im.raw(), Xlo * Xlo, MPFR_RNDN);
            mpfr_div_2si(w.t1, w.t1, 2, MPFR_RNDN);
            mpfr_add(w.t1, w.t1, wrest[1]->im, MPFR_RNDN);
            mpfr_mul_si(w.t2, tmp2.im, Xlo, MPFR_RNDN);
            mpfr_div_2si(w.t2, w.t2, 1, MPFR_RNDN);
            mpfr_add(tmp.im, w.t1, w.t2, MPFR_RNDN);
            cexp_pi_i(E, tmp.re, tmp.im, w);

            // Dm = exp(pi i (a*(Xlo+1) + b2))
            mpfr_mul_si(w.t1, tc(0, 0).re.raw(), Xlo + 1, MPFR_RNDN);
            mpfr_add(tmp.re, w.t1, tmp2.re, MPFR_RNDN);
            mpfr_mul_si(w.t1, tc(0, 0).im.raw(), Xlo + 1, MPFR_RNDN);
            mpfr_add(tmp.im, w.t1, tmp2.im, MPFR_RNDN);
            cexp_pi_i(Dm, tmp.re, tmp.im, w);

            for (int n = a; n <= b; ++n) {
                cadd_eq(acc, E);
                if (n < b) {
                    cmul_eq(E, Dm, w);
                    cmul_eq(Dm, V, w);
                }
            }
        };

        // recursive descent over levels g-1 .. 1 with ellipsoid pruning
        auto walk = [&](auto&& self, int l, double partial_q) -> void {
            if (l == 0) {
                inner(partial_q);
                return;
            }
            double e2 = 0.5 * ((m_.eps >> l) & 1);
            double c = 0.0;
            for (int j = l + 1; j < g_; ++j) c += pl_.U[static_cast<size_t>(l) * g_ + j] * xs[j];
            double s = std::sqrt(std::max(0.0, (pl_.qt - partial_q) / pl_.D[l])) + 1e-9;
            int a = std::max(pl_.nlo[l], static_cast<int>(std::ceil(-c - s - e2)));
            int b = std::min(pl_.nhi[l], static_cast<int>(std::floor(-c + s - e2)));
            for (int n = a; n <= b; ++n) {
                double x = n + e2;
                xs[l] = x;
                double dq = pl_.D[l] * (x + c) * (x + c);
                descend(l, 2L * n + ((m_.eps >> l) & 1));
                self(self, l - 1, partial_q + dq);
            }
        };

        wrest[g_]->set_zero();
        for (int i = 0; i < g_; ++i) crs(g_, i).set_zero();

        if (g_ == 1) {
            inner(0.0);
        } else {
            int l = g_ - 1;
            double e2 = 0.5 * ((m_.eps >> l) & 1);
            double x = job.n_outer + e2;
            xs[l] = x;
            double dq = pl_.D[l] * x * x;  // c = 0 at the outermost level
            descend(l, 2L * job.n_outer + ((m_.eps >> l) & 1));
            if (dq <= pl_.qt) walk(walk, l - 1, dq);
        }

        HPComplex out = acc.to_hp(prec_);
        for (auto* r : wrest) delete r;
        for (auto* r : cross) delete r;
        return out;
    }
};

// naive reference: fresh exponential per lattice point, full box, single
// thread, lexicographic accumulation
HPComplex reference_sum(const Characteristic& m, const PeriodMatrix& tau, const Plan& pl) {
    int g = pl.g;
    mpfr_prec_t prec = pl.prec;
    Work w(prec);
    CReg acc(prec), term(prec);
    HPComplex wq(prec);

    std::vector<int> n(g);
    for (int i = 0; i < g; ++i) n[i] = pl.nlo[i];
    std::vector<HPComplex> t;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            HPComplex z(prec);
            mpfr_set(z.re.raw(), tau.at(i, j).re.raw(), MPFR_RNDN);
            mpfr_set(z.im.raw(), tau.at(i, j).im.raw(), MPFR_RNDN);
            t.push_back(std::move(z));
        }

    while (true) {
        // w = sum tau_ij x_i x_j + sum delta_i x_i, with X = 2x integer
        mpfr_set_zero(wq.re.raw(), 1);
        mpfr_set_zero(wq.im.raw(), 1);
        for (int i = 0; i < g; ++i) {
            long Xi = 2L * n[i] + ((m.eps >> i) & 1);
            for (int j = 0; j < g; ++j) {
                long Xj = 2L * n[j] + ((m.eps >> j) & 1);
                mpfr_mul_si(w.t1, t[static_cast<size_t>(i) * g + j].re.raw(), Xi * Xj, MPFR_RNDN);
                mpfr_div_2si(w.t1, w.t1, 2, MPFR_RNDN);
                mpfr_add(wq.re.raw(), wq.re.raw(), w.t1, MPFR_RNDN);
                mpfr_mul_si(w.t1, t[static_cast<size_t>(i) * g + j].im.raw(), Xi * Xj, MPFR_RNDN);
                mpfr_div_2si(w.t1, w.t1, 2, MPFR_RNDN);
                mpfr_add(wq.im.raw(), wq.im.raw(), w.t1, MPFR_RNDN);
            }
            if ((m.delta >> i) & 1) {
                mpfr_set_si(w.t1, Xi, MPFR_RNDN);
                mpfr_div_2si(w.t1, w.t1, 1, MPFR_RNDN);
                mpfr_add(wq.re.raw(), wq.re.raw(), w.t1, MPFR_RNDN);
            }
        }
        cexp_pi_i(term, wq.re.raw(), wq.im.raw(), w);
        cadd_eq(acc, term);

        int l = 0;
        while (l < g && ++n[l] > pl.nhi[l]) {
            n[l] = pl.nlo[l];
            ++l;
        }
        if (l == g) break;
    }
    return acc.to_hp(prec);
}

}  // namespace

HPComplex theta_genus1(int eps_bit, int delta_bit, const HPComplex& t, int digits, const EvalOptions& opts) {
    if (eps_bit == 1 && delta_bit == 1) return HPComplex(bits_for_digits(digits + opts.guard_digits));
    PeriodMatrix tau(1, t.prec());
    tau.at(0, 0) = t;
    Characteristic m(1, static_cast<std::uint32_t>(eps_bit), static_cast<std::uint32_t>(delta_bit));
    Plan pl = make_plan(m, tau, digits, opts);
    if (opts.mode == EvalMode::Reference) return reference_sum(m, tau, pl);
    return FastSum(m, tau, pl).run();
}

HPComplex theta_on_diagonal(const Characteristic& m, const std::vector<HPComplex>& t, int digits,
                            const EvalOptions& opts) {
    if (static_cast<int>(t.size()) != m.genus) throw std::invalid_argument("theta_on_diagonal: genus mismatch");
    mpfr_prec_t prec = bits_for_digits(digits + opts.guard_digits);
    for (const auto& ti : t)
        if (!(ti.im.sgn() > 0)) throw std::domain_error("theta_on_diagonal: Im t must be positive");
    for (int i = 1; i <= m.genus; ++i)
        if (m.eps_bit(i) == 1 && m.delta_bit(i) == 1) return HPComplex(prec);  // odd genus-1 factor

    HPComplex prod(1.0, 0.0, prec);
    for (int i = 1; i <= m.genus; ++i) prod = prod * theta_genus1(m.eps_bit(i), m.delta_bit(i), t[i - 1], digits, opts);
    return prod;
}

HPComplex theta_constant(const Characteristic& m, const PeriodMatrix& tau, int digits, const EvalOptions& opts) {
    if (m.genus != tau.genus) throw std::invalid_argument("theta_constant: genus mismatch");
    mpfr_prec_t prec = bits_for_digits(digits + opts.guard_digits);
    if (!charalg::is_even(m)) return HPComplex(prec);  // odd characteristics vanish identically
    if (!opts.force_lattice && tau.is_diagonal_exact()) return theta_on_diagonal(m, tau.diagonal(), digits, opts);

    Plan pl = make_plan(m, tau, digits, opts);
    if (opts.mode == EvalMode::Reference) return reference_sum(m, tau, pl);
    return FastSum(m, tau, pl).run();
}

HPComplex theta11_z_derivative(const HPComplex& t, int digits, const EvalOptions& opts) {
    if (!(t.im.sgn() > 0)) throw std::domain_error("theta11_z_derivative: Im t must be positive");
    mpfr_prec_t prec = bits_for_digits(digits + opts.guard_digits);

    // direct series: -2 pi sum_{n>=0} (-1)^n (2n+1) q^((n+1/2)^2), q = e^(pi i t)
    HPComplex q = exp_pi_i(t);
    HPComplex q2 = q * q;
    HPComplex r(prec);  // q^(1/4) = exp(pi i t / 4), branch fixed by t rather than by root-taking
    {
        HPComplex t4 = t;
        mpfr_div_2si(t4.re.raw(), t4.re.raw(), 2, MPFR_RNDN);
        mpfr_div_2si(t4.im.raw(), t4.im.raw(), 2, MPFR_RNDN);
        r = exp_pi_i(t4);
    }

    // term_n = q^(1/4) q^(n^2+n), summed with weights (-1)^n (2n+1);
    // the ratio chain u_n = q^(2(n+1)) advances term_n -> term_{n+1}
    HPComplex sum(prec), term = r;
    HPComplex u = q2;
    double logq = -M_PI * t.im.to_double();
    HPReal tol = r.abs() * HPReal(std::pow(10.0, -(digits + opts.guard_digits)) / 20.0, prec);
    long n = 0;
    while (true) {
        HPComplex add = term * (2 * n + 1L);
        if (n % 2 == 0)
            sum = sum + add;
        else
            sum = sum - add;
        // once the term ratio is safely geometric the remainder is bounded by
        // a small multiple of the next term
        double ratio = std::exp(2.0 * (n + 1) * logq) * (2.0 * n + 5.0) / (2.0 * n + 1.0);
        if (ratio < 0.9 && add.abs() < tol) break;
        term = term * u;
        u = u * q2;
        ++n;
        if (n > 200000) throw std::runtime_error("theta11_z_derivative: series did not converge");
    }
    HPReal pi = HPReal::pi(prec);
    HPComplex direct = sum * (-(pi + pi));

    HPComplex triple = theta_genus1(0, 0, t, digits, opts) * theta_genus1(0, 1, t, digits, opts) *
                       theta_genus1(1, 0, t, digits, opts) * (-pi);

    HPReal diff = (direct - triple).abs();
    HPReal xtol = direct.abs() * HPReal(std::pow(10.0, -(digits - opts.guard_digits)), prec);
    if (diff > xtol)
        throw std::logic_error("theta11_z_derivative: series and triple-product paths disagree (series bug)");
    return direct;
}

HeatResidual heat_equation_residual(const Characteristic& m, const std::vector<HPComplex>& t, int j, int k,
                                    double h, int digits, const EvalOptions& opts) {
    int g = m.genus;
    if (static_cast<int>(t.size()) != g || j < 1 || k < 1 || j >= k || k > g)
        throw std::invalid_argument("heat_equation_residual: bad arguments");
    mpfr_prec_t prec = bits_for_digits(digits + opts.guard_digits);

    PeriodMatrix taup = diagonal_period_matrix(t), taum = diagonal_period_matrix(t);
    HPComplex hh(h, 0.0, prec);
    taup.set_sym(j - 1, k - 1, hh);
    taum.set_sym(j - 1, k - 1, -hh);

    HPComplex fd = (theta_constant(m, taup, digits, opts) - theta_constant(m, taum, digits, opts));
    HPReal inv2h(0.5 / h, prec);  // h is dyadic in practice; rounding here is harmless
    fd = fd * inv2h;

    // prediction: (1/(2 pi i)) * dtheta[col_j]/dz * dtheta[col_k]/dz * prod_other theta[col_m];
    // the z-derivative of an even one-dimensional theta vanishes at z = 0.
    bool colj_odd = m.eps_bit(j) == 1 && m.delta_bit(j) == 1;
    bool colk_odd = m.eps_bit(k) == 1 && m.delta_bit(k) == 1;
    HPComplex predicted(prec);
    HPReal pi = HPReal::pi(prec);
    HPComplex scale_c(1.0, 0.0, prec);
    HPComplex dj(prec), dk(prec);
    if (colj_odd) dj = theta11_z_derivative(t[j - 1], digits, opts);
    if (colk_odd) dk = theta11_z_derivative(t[k - 1], digits, opts);
    bool other_odd_factor = false;
    HPComplex rest(1.0, 0.0, prec);
    for (int c = 1; c <= g; ++c) {
        if (c == j || c == k) continue;
        if (m.eps_bit(c) == 1 && m.delta_bit(c) == 1) {
            other_odd_factor = true;
            continue;
        }
        rest = rest * theta_genus1(m.eps_bit(c), m.delta_bit(c), t[c - 1], digits, opts);
    }
    if (colj_odd && colk_odd && !other_odd_factor) {
        // 1/(2 pi i) = -i/(2 pi)
        HPComplex prod = dj * dk * rest;
        HPReal inv2pi = HPReal(1.0, prec) / (pi + pi);
        predicted = HPComplex(prod.im * inv2pi, -(prod.re * inv2pi));
    }
    // scale: |theta'[1;1](t_j) theta'[1;1](t_k)| * prod_other |theta[0;0](t_m)|
    HPReal scale = theta11_z_derivative(t[j - 1], digits, opts).abs() *
                   theta11_z_derivative(t[k - 1], digits, opts).abs();
    for (int c = 1; c <= g; ++c) {
        if (c == j || c == k) continue;
        scale = scale * theta_genus1(0, 0, t[c - 1], digits, opts).abs();
    }

    HeatResidual out{(fd - predicted).abs(), scale, fd, predicted};
    return out;
}

ThetaBatch::ThetaBatch(const PeriodMatrix& tau, int digits, EvalOptions opts)
    : tau_(tau), digits_(digits), opts_(opts) {}

void ThetaBatch::request(const Characteristic& m) {
    if (ran_) throw std::logic_error("ThetaBatch: request after run");
    values_.emplace(m, HPComplex(bits_for_digits(digits_ + opts_.guard_digits)));
}

void ThetaBatch::run() {
    if (ran_) return;
    ran_ = true;
    std::vector<const Characteristic*> keys;
    keys.reserve(values_.size());
    for (auto& kv : values_) keys.push_back(&kv.first);
    distinct_ = static_cast<int>(keys.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(keys.size()); ++i) {
        HPComplex v = theta_constant(*keys[i], tau_, digits_, opts_);
#pragma omp critical(theta_batch_store)
        values_.at(*keys[i]) = std::move(v);
    }
}

const HPComplex& ThetaBatch::value(const Characteristic& m) const {
    auto it = values_.find(m);
    if (it == values_.end() || !ran_) throw std::logic_error("ThetaBatch: value not evaluated");
    return it->second;
}

}  // namespace skt::theta
