#include "schottkykit/identities.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

namespace skt::identities {

using charalg::CharOrder;
using charalg::is_even;
using charalg::swap_columns;
using charalg::tricharacter;
using charalg::weil_pairing;

namespace {
int dot_mod2(std::uint32_t a, std::uint32_t b) { return std::popcount(a & b) & 1; }
}  // namespace

QuarticMonomialList expand(const QuarticRelation& r) {
    CharOrder ord(r.genus);
    QuarticMonomialList out;
    out.genus = r.genus;
    std::uint32_t alpha_sigma = r.shift_a.eps ^ r.shift_s.eps;
    for (size_t i = 0; i < r.coeffs.size(); ++i) {
        if (r.coeffs[i] == 0) continue;
        const Characteristic& m = ord.even_list[i];
        long long sgn = dot_mod2(m.delta, alpha_sigma) ? -1 : 1;
        QuarticTerm t;
        t.coeff = r.coeffs[i] * sgn;
        t.chars = {m, m + r.shift_a, m + r.shift_s, m + r.shift_a + r.shift_s};
        bool odd = false;
        for (const auto& c : t.chars)
            if (!is_even(c)) odd = true;
        if (!odd) out.terms.push_back(t);
    }
    return out;
}

QuarticMonomialList merged_monomials(const QuarticRelation& r) {
    QuarticMonomialList raw = expand(r);
    std::map<std::array<Characteristic, 4>, std::pair<long long, std::array<Characteristic, 4>>> groups;
    for (const auto& t : raw.terms) {
        auto key = t.chars;
        std::sort(key.begin(), key.end());
        auto it = groups.find(key);
        if (it == groups.end())
            groups.emplace(key, std::make_pair(t.coeff, t.chars));
        else
            it->second.first += t.coeff;
    }
    QuarticMonomialList out;
    out.genus = r.genus;
    for (const auto& [key, cv] : groups) {
        if (cv.first == 0) continue;
        out.terms.push_back({cv.first, cv.second});
    }
    return out;
}

bool is_generically_nonvanishing(const QuarticRelation& r) {
    CharOrder ord(r.genus);
    const auto& ev = ord.even_list;
    std::vector<std::pair<int, long long>> support;
    for (size_t j = 0; j < r.coeffs.size(); ++j)
        if (r.coeffs[j] != 0) support.push_back({static_cast<int>(j), r.coeffs[j]});
    // W = (M+ + 2^(g-1)) X, the (scaled) component in the 2^g eigenspace
    QuarticRelation w;
    w.genus = r.genus;
    w.shift_a = r.shift_a;
    w.shift_s = r.shift_s;
    w.coeffs.assign(ev.size(), 0);
    for (size_t i = 0; i < ev.size(); ++i) {
        long long dot = 0;
        for (auto [j, v] : support) dot += weil_pairing(ev[i], ev[j]) * v;
        w.coeffs[i] = dot;
    }
    for (auto [j, v] : support) w.coeffs[j] += (1LL << (r.genus - 1)) * v;
    return !merged_monomials(w).terms.empty();
}

double IdentityValue::relative() const {
    double mm = max_monomial.to_double();
    if (mm == 0.0) return 0.0;
    // work in logs: both magnitudes can be far outside double range
    HPReal v = value.abs();
    if (v.is_zero()) return 0.0;
    double lv = log(v).to_double(), lm = log(max_monomial).to_double();
    return std::exp(lv - lm);
}

IdentityValue evaluate_monomials(const QuarticMonomialList& l, const PeriodMatrix& tau, int digits,
                                 const EvalOptions& opts) {
    mpfr_prec_t prec = bits_for_digits(digits + opts.guard_digits);
    theta::ThetaBatch batch(tau, digits, opts);
    for (const auto& t : l.terms)
        for (const auto& c : t.chars)
            if (is_even(c)) batch.request(c);
    batch.run();

    IdentityValue out{HPComplex(prec), HPReal(prec)};
    for (const auto& t : l.terms) {
        bool odd = false;
        for (const auto& c : t.chars)
            if (!is_even(c)) odd = true;
        if (odd) continue;  // exact zero monomial
        HPComplex prod(1.0, 0.0, prec);
        for (const auto& c : t.chars) prod = prod * batch.value(c);
        prod = prod * t.coeff;
        out.value = out.value + prod;
        HPReal mag = prod.abs();
        if (out.max_monomial < mag) out.max_monomial = mag;
    }
    return out;
}

IdentityValue riemann_relation_residual(const Characteristic& m1, const Characteristic& m2,
                                        const Characteristic& m3, const PeriodMatrix& tau, int digits,
                                        const EvalOptions& opts) {
    int g = m1.genus;
    if (m2.genus != g || m3.genus != g || tau.genus != g)
        throw std::invalid_argument("riemann_relation_residual: genus mismatch");

    QuarticMonomialList l;
    l.genus = g;
    // LHS: 2^g (m1,m2,m3) th[m1] th[m1+m2] th[m1+m3] th[m1+m2+m3]
    {
        QuarticTerm t;
        t.coeff = (1LL << g) * tricharacter(m1, m2, m3);
        t.chars = {m1, m1 + m2, m1 + m3, m1 + m2 + m3};
        l.terms.push_back(t);
    }
    // minus RHS: sum over [a;b] of (-1)^((delta+b).(alpha+sigma)) e(m1,[a;b]) ([a;b],m2,m3) ...
    std::uint32_t alpha_sigma = m2.eps ^ m3.eps;
    for (std::uint32_t e = 0; e < (1u << g); ++e)
        for (std::uint32_t d = 0; d < (1u << g); ++d) {
            Characteristic ab(g, e, d);
            QuarticTerm t;
            long long sgn = dot_mod2(m1.delta ^ d, alpha_sigma) ? -1 : 1;
            t.coeff = -sgn * weil_pairing(m1, ab) * tricharacter(ab, m2, m3);
            t.chars = {ab, ab + m2, ab + m3, ab + m2 + m3};
            bool odd = false;
            for (const auto& c : t.chars)
                if (!is_even(c)) odd = true;
            if (!odd) l.terms.push_back(t);
        }
    return evaluate_monomials(l, tau, digits, opts);
}

IdentityValue eigenvector_quartic_value(const QuarticRelation& r, const PeriodMatrix& tau, int digits,
                                        const EvalOptions& opts) {
    return evaluate_monomials(expand(r), tau, digits, opts);
}

namespace {

// the three sign-pattern families of R_34 (columns 1..3; the bottom rows are
// padded by zeros, the top rows by the summation characteristic)
struct Family {
    long long sign;
    const char* top[4];
    const char* bot[4];
};
constexpr Family kFamilies[3] = {
    {+1, {"000", "011", "100", "111"}, {"000", "100", "001", "101"}},
    {-1, {"010", "001", "110", "101"}, {"000", "100", "001", "101"}},
    {+1, {"000", "011", "100", "111"}, {"011", "111", "010", "110"}},
};

Characteristic pad_char(const char* top3, const char* bot3, std::uint32_t eps_pad, int h) {
    std::uint32_t e = 0, d = 0;
    for (int i = 0; i < 3; ++i) {
        if (top3[i] == '1') e |= 1u << i;
        if (bot3[i] == '1') d |= 1u << i;
    }
    e |= eps_pad << 3;
    return Characteristic(h, e, d);
}

}  // namespace

RJK build_R(int h, int j, int k) {
    if (h < 3) throw std::invalid_argument("build_R: genus must be >= 3");
    if (!(3 <= j && j < k && k <= h + 1)) throw std::invalid_argument("build_R: need 3 <= j < k <= h+1");
    if (h > CharOrder::kMaxOrderGenus) throw std::invalid_argument("build_R: genus too large");

    auto place = [&](const Characteristic& c) {
        return swap_columns(swap_columns(c, 2, j - 1), 3, k - 1);
    };

    RJK out;
    out.monomials.genus = h;
    for (const auto& fam : kFamilies) {
        for (std::uint32_t ep = 0; ep < (1u << (h - 3)); ++ep) {
            QuarticTerm t;
            t.coeff = fam.sign;
            for (int c = 0; c < 4; ++c) t.chars[c] = place(pad_char(fam.top[c], fam.bot[c], ep, h));
            out.monomials.terms.push_back(t);
        }
    }

    // shifts: the genus-3 pair [011;100], [100;001], zero-padded, then swapped
    out.relation.genus = h;
    out.relation.shift_a = place(Characteristic(h, 0b110, 0b001));
    out.relation.shift_s = place(Characteristic(h, 0b001, 0b100));

    // Coefficient vector. The naive functional vector v (one entry per
    // monomial, on its leading characteristic) reproduces the displayed sum
    // but is not an eigenvector; its eigenprojection is, and generates the
    // same identity because the projection only adds terms whose monomials
    // contain odd characteristics (they vanish identically and are dropped
    // by the expansion). X = (2^h I - M+) v is that projection, scaled to
    // integers; normalize by the gcd.
    CharOrder ord(h);
    std::uint32_t alpha_sigma = out.relation.shift_a.eps ^ out.relation.shift_s.eps;
    std::vector<std::pair<int, long long>> support;
    for (const auto& t : out.monomials.terms) {
        const Characteristic& m = t.chars[0];
        long long sgn = dot_mod2(m.delta, alpha_sigma) ? -1 : 1;
        support.push_back({ord.even_index(m), t.coeff * sgn});
    }
    out.relation.coeffs.assign(ord.even_list.size(), 0);
    for (auto [i, v] : support) out.relation.coeffs[i] += (1LL << h) * v;
    for (size_t i = 0; i < ord.even_list.size(); ++i) {
        long long dot = 0;
        for (auto [j, v] : support) dot += weil_pairing(ord.even_list[i], ord.even_list[j]) * v;
        out.relation.coeffs[i] -= dot;
    }
    long long gg = 0;
    for (long long v : out.relation.coeffs) gg = std::gcd(gg, v);
    if (gg > 1)
        for (auto& v : out.relation.coeffs) v /= gg;

    if (!weilmat::is_valid_relation(out.relation))
        throw std::runtime_error("build_R: coefficient vector is not a -2^(g-1) eigenvector");
    return out;
}

QuarticRelation doubling_transport(const QuarticRelation& r) {
    if (!weilmat::is_valid_relation(r)) throw std::invalid_argument("doubling_transport: input relation invalid");
    int h = r.genus;
    CharOrder ord(h), ord2(h + 1);

    QuarticRelation out;
    out.genus = h + 1;
    out.shift_a = charalg::append_column(r.shift_a, 0, 0);
    out.shift_s = charalg::append_column(r.shift_s, 0, 0);
    out.coeffs.assign(ord2.even_list.size(), 0);
    for (size_t i = 0; i < r.coeffs.size(); ++i) {
        if (r.coeffs[i] == 0) continue;
        const Characteristic& m = ord.even_list[i];
        out.coeffs[ord2.even_index(charalg::append_column(m, 0, 0))] = r.coeffs[i];
        out.coeffs[ord2.even_index(charalg::append_column(m, 1, 0))] = r.coeffs[i];
    }
    if (!weilmat::is_valid_relation(out))
        throw std::runtime_error("doubling_transport: transported relation failed the exact eigenvector check");
    return out;
}

}  // namespace skt::identities
