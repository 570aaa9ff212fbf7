#pragma once
// Arbitrary-precision real/complex scalars on top of MPFR.
//
// Every value carries its own precision in bits. Binary operations allocate
// the result at the wider of the two operand precisions, so precision is
// never silently reduced by arithmetic. Decimal I/O goes through strings;
// doubles are accepted only as exact binary rationals.

#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace skt {

// bits needed to hold `digits` decimal digits, with headroom for rounding
inline mpfr_prec_t bits_for_digits(int digits) {
    if (digits < 1) throw std::invalid_argument("precision must be >= 1 digit");
    return static_cast<mpfr_prec_t>(digits * 3.3219280948873626 + 32.0);
}

class HPReal {
  public:
    explicit HPReal(mpfr_prec_t prec = 64) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    HPReal(double x, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_d(v_, x, MPFR_RNDN);
    }
    HPReal(long x, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_si(v_, x, MPFR_RNDN);
    }
    HPReal(const std::string& dec, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        if (mpfr_set_str(v_, dec.c_str(), 10, MPFR_RNDN) != 0)
            throw std::invalid_argument("HPReal: bad decimal literal '" + dec + "'");
    }
    HPReal(const HPReal& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    HPReal(HPReal&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    HPReal& operator=(const HPReal& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    HPReal& operator=(HPReal&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~HPReal() { mpfr_clear(v_); }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sgn() const { return mpfr_sgn(v_); }

    // fixed-notation decimal string with `digits` significant digits
    std::string str(int digits) const;

    static HPReal pi(mpfr_prec_t prec) {
        HPReal r(prec);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

  private:
    mpfr_t v_;
};

inline mpfr_prec_t max_prec(const HPReal& a, const HPReal& b) {
    return a.prec() > b.prec() ? a.prec() : b.prec();
}

inline HPReal operator+(const HPReal& a, const HPReal& b) {
    HPReal r(max_prec(a, b));
    mpfr_add(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}
inline HPReal operator-(const HPReal& a, const HPReal& b) {
    HPReal r(max_prec(a, b));
    mpfr_sub(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}
inline HPReal operator*(const HPReal& a, const HPReal& b) {
    HPReal r(max_prec(a, b));
    mpfr_mul(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}
inline HPReal operator/(const HPReal& a, const HPReal& b) {
    HPReal r(max_prec(a, b));
    mpfr_div(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}
inline HPReal operator-(const HPReal& a) {
    HPReal r(a.prec());
    mpfr_neg(r.raw(), a.raw(), MPFR_RNDN);
    return r;
}
inline HPReal operator*(const HPReal& a, long s) {
    HPReal r(a.prec());
    mpfr_mul_si(r.raw(), a.raw(), s, MPFR_RNDN);
    return r;
}
inline bool operator<(const HPReal& a, const HPReal& b) { return mpfr_cmp(a.raw(), b.raw()) < 0; }
inline bool operator>(const HPReal& a, const HPReal& b) { return mpfr_cmp(a.raw(), b.raw()) > 0; }
inline bool operator==(const HPReal& a, const HPReal& b) { return mpfr_cmp(a.raw(), b.raw()) == 0; }

inline HPReal abs(const HPReal& a) {
    HPReal r(a.prec());
    mpfr_abs(r.raw(), a.raw(), MPFR_RNDN);
    return r;
}
inline HPReal sqrt(const HPReal& a) {
    HPReal r(a.prec());
    mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDN);
    return r;
}
inline HPReal log(const HPReal& a) {
    HPReal r(a.prec());
    mpfr_log(r.raw(), a.raw(), MPFR_RNDN);
    return r;
}
inline HPReal exp(const HPReal& a) {
    HPReal r(a.prec());
    mpfr_exp(r.raw(), a.raw(), MPFR_RNDN);
    return r;
}
inline HPReal hypot(const HPReal& a, const HPReal& b) {
    HPReal r(max_prec(a, b));
    mpfr_hypot(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}
inline HPReal atan2(const HPReal& y, const HPReal& x) {
    HPReal r(max_prec(y, x));
    mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
    return r;
}

class HPComplex {
  public:
    HPReal re, im;

    explicit HPComplex(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
    HPComplex(HPReal r, HPReal i) : re(std::move(r)), im(std::move(i)) {}
    HPComplex(double r, double i, mpfr_prec_t prec) : re(r, prec), im(i, prec) {}

    mpfr_prec_t prec() const { return max_prec(re, im); }
    bool is_exact_zero() const { return re.is_zero() && im.is_zero(); }

    HPReal abs() const { return hypot(re, im); }
    HPReal arg() const { return atan2(im, re); }

    std::string str(int digits) const { return re.str(digits) + (im.sgn() < 0 ? " - " : " + ") + skt::abs(im).str(digits) + "i"; }
};

inline HPComplex operator+(const HPComplex& a, const HPComplex& b) { return {a.re + b.re, a.im + b.im}; }
inline HPComplex operator-(const HPComplex& a, const HPComplex& b) { return {a.re - b.re, a.im - b.im}; }
inline HPComplex operator-(const HPComplex& a) { return {-a.re, -a.im}; }
inline HPComplex operator*(const HPComplex& a, const HPComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline HPComplex operator*(const HPComplex& a, const HPReal& s) { return {a.re * s, a.im * s}; }
inline HPComplex operator*(const HPComplex& a, long s) { return {a.re * s, a.im * s}; }
inline HPComplex operator/(const HPComplex& a, const HPComplex& b) {
    HPReal n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}

// principal square root, via polar form
inline HPComplex sqrt(const HPComplex& z) {
    mpfr_prec_t p = z.prec();
    HPReal m = sqrt(z.abs());
    HPReal half(0.5, p);
    HPReal a = z.arg() * half;
    HPComplex r(p);
    mpfr_sin_cos(r.im.raw(), r.re.raw(), a.raw(), MPFR_RNDN);
    return {m * r.re, m * r.im};
}

// exp(i*pi*w) for complex w
inline HPComplex exp_pi_i(const HPComplex& w) {
    mpfr_prec_t p = w.prec();
    HPReal pi = HPReal::pi(p);
    HPReal mag = exp(-(w.im * pi));
    HPReal ph = w.re * pi;
    HPComplex sc(p);
    mpfr_sin_cos(sc.im.raw(), sc.re.raw(), ph.raw(), MPFR_RNDN);
    return {mag * sc.re, mag * sc.im};
}

// z = exp(log_mag + i*phase), or exact zero when `zero` is set.
// Products of many huge/tiny factors (the S_jk evaluations) live here.
struct LogComplex {
    HPReal log_mag;
    HPReal phase;
    bool zero = false;

    explicit LogComplex(mpfr_prec_t prec = 64) : log_mag(prec), phase(prec), zero(true) {}

    static LogComplex from(const HPComplex& z) {
        LogComplex r(z.prec());
        if (z.is_exact_zero()) return r;
        r.zero = false;
        r.log_mag = log(z.abs());
        r.phase = z.arg();
        return r;
    }
    static LogComplex one(mpfr_prec_t prec) {
        LogComplex r(prec);
        r.zero = false;
        return r;
    }

    void mul(const LogComplex& o) {
        if (zero || o.zero) {
            zero = true;
            return;
        }
        log_mag = log_mag + o.log_mag;
        phase = phase + o.phase;
        wrap_phase();
    }
    void mul(const HPComplex& z) { mul(from(z)); }

    void wrap_phase() {
        // keep phase in (-pi, pi]
        mpfr_prec_t p = phase.prec();
        HPReal twopi = HPReal::pi(p) * 2L;
        HPReal q(p);
        mpfr_remainder(q.raw(), phase.raw(), twopi.raw(), MPFR_RNDN);
        phase = q;
    }

    // this / o as an ordinary complex number (meaningful when magnitudes are comparable)
    HPComplex ratio(const LogComplex& o) const {
        mpfr_prec_t p = max_prec(log_mag, o.log_mag);
        if (zero || o.zero) throw std::domain_error("LogComplex::ratio of exact zero");
        HPReal m = exp(log_mag - o.log_mag);
        HPReal dp = phase - o.phase;
        HPComplex sc(p);
        mpfr_sin_cos(sc.im.raw(), sc.re.raw(), dp.raw(), MPFR_RNDN);
        return {m * sc.re, m * sc.im};
    }
};

}  // namespace skt
