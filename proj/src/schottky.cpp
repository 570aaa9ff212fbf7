#include "schottkykit/schottky.hpp"

#include "schottkykit/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace skt::schottky {

using charalg::is_even;
using charalg::special_two_torsion;
using charalg::swap_columns;
using charalg::TwoTorsionKind;

std::pair<Characteristic, Characteristic> sj_char_pair(const Characteristic& m) {
    int g = m.genus + 1;
    std::uint32_t esum = static_cast<std::uint32_t>(std::popcount(m.eps) & 1);
    Characteristic first(g, esum | (m.eps << 1), m.delta << 1);
    Characteristic second = first + special_two_torsion(TwoTorsionKind::EtaG, g);
    return {first, second};
}

namespace {
SJIdentity from_monomials(const identities::QuarticMonomialList& l) {
    SJIdentity s;
    s.source_genus = l.genus;
    s.target_genus = l.genus + 1;
    s.fixed_slot = 0;
    for (const auto& t : l.terms) {
        SJMonomial m;
        for (int c = 0; c < 4; ++c) {
            auto [a, b] = sj_char_pair(t.chars[c]);
            m.chars[2 * c] = a;
            m.chars[2 * c + 1] = b;
        }
        s.terms.push_back(m);
        s.slot_labels.push_back("s[" + std::to_string(s.terms.size() - 1) + "]");
    }
    return s;
}
}  // namespace

SJIdentity build_SJ(const identities::RJK& r) {
    if (!weilmat::is_valid_relation(r.relation)) throw std::invalid_argument("build_SJ: relation invalid");
    SJIdentity s = from_monomials(r.monomials);
    // label terms by family and summation characteristic
    int per_family = static_cast<int>(s.terms.size()) / 3;
    const char* fam = "abc";
    for (int i = 0; i < static_cast<int>(s.terms.size()); ++i)
        s.slot_labels[i] = std::string(1, fam[i / per_family]) + "[" + std::to_string(i % per_family) + "]";
    return s;
}

SJIdentity build_SJ(const weilmat::QuarticRelation& r) {
    if (!weilmat::is_valid_relation(r)) throw std::invalid_argument("build_SJ: relation invalid");
    return from_monomials(identities::merged_monomials(r));
}

namespace {

// the main-theorem display: per family, the top-row E offset and columns 2..4,
// and the bottom rows of columns 1..4; within each SJ pair the second theta
// has bottom padding 1...1, the first 0...0; top padding is the summation
// characteristic for both.
struct SFamily {
    int eoff[8];
    const char* top234[8];
    const char* bot1234[8];
};
constexpr SFamily kS[3] = {
    {{0, 0, 0, 0, 1, 1, 1, 1},
     {"000", "000", "011", "011", "100", "100", "111", "111"},
     {"0000", "1111", "0100", "1011", "0001", "1110", "0101", "1010"}},
    {{1, 1, 1, 1, 0, 0, 0, 0},
     {"010", "010", "001", "001", "110", "110", "101", "101"},
     {"0000", "1111", "0100", "1011", "0001", "1110", "0101", "1010"}},
    {{0, 0, 0, 0, 1, 1, 1, 1},
     {"000", "000", "011", "011", "100", "100", "111", "111"},
     {"0011", "1100", "0111", "1000", "0010", "1101", "0110", "1001"}},
};

}  // namespace

SJIdentity build_S(int g, int j, int k) {
    if (g < 4) throw std::invalid_argument("build_S: genus must be >= 4");
    if (!(3 <= j && j < k && k <= g)) throw std::invalid_argument("build_S: need 3 <= j < k <= g");
    if (g - 1 > charalg::CharOrder::kMaxOrderGenus) throw std::invalid_argument("build_S: genus too large");

    SJIdentity s;
    s.source_genus = g - 1;
    s.target_genus = g;
    s.fixed_slot = 0;

    const char* fam_name = "abc";
    for (int f = 0; f < 3; ++f) {
        for (std::uint32_t ep = 0; ep < (1u << (g - 4)); ++ep) {
            int E = std::popcount(ep) & 1;
            SJMonomial mono;
            for (int c = 0; c < 8; ++c) {
                std::uint32_t e = static_cast<std::uint32_t>((kS[f].eoff[c] + E) & 1);
                std::uint32_t d = 0;
                for (int i = 0; i < 3; ++i)
                    if (kS[f].top234[c][i] == '1') e |= 1u << (i + 1);
                for (int i = 0; i < 4; ++i)
                    if (kS[f].bot1234[c][i] == '1') d |= 1u << i;
                e |= ep << 4;
                if (c % 2 == 1) d |= ((1u << (g - 4)) - 1u) << 4;  // bold-1 padding
                Characteristic ch(g, e, d);
                mono.chars[c] = swap_columns(swap_columns(ch, 3, j), 4, k);
            }
            s.terms.push_back(mono);
            s.slot_labels.push_back(std::string(1, fam_name[f]) + "[" + std::to_string(ep) + "]");
        }
    }

    SJIdentity ref = build_SJ(identities::build_R(g - 1, j, k));
    if (!structurally_equal(s, ref))
        throw std::logic_error("build_S: transcription does not match SJ(R_jk) (build bug)");
    return s;
}

namespace {
std::array<Characteristic, 8> sorted_chars(const SJMonomial& m) {
    auto c = m.chars;
    std::sort(c.begin(), c.end());
    return c;
}
}  // namespace

bool structurally_equal(const SJIdentity& a, const SJIdentity& b) {
    if (a.source_genus != b.source_genus || a.target_genus != b.target_genus) return false;
    if (a.terms.size() != b.terms.size()) return false;
    std::vector<std::array<Characteristic, 8>> sa, sb;
    for (const auto& t : a.terms) sa.push_back(sorted_chars(t));
    for (const auto& t : b.terms) sb.push_back(sorted_chars(t));
    if (sorted_chars(a.terms[a.fixed_slot]) != sorted_chars(b.terms[b.fixed_slot])) return false;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    return sa == sb;
}

SJValue evaluate_SJ(const SJIdentity& s, const PeriodMatrix& tau, int digits, std::uint64_t branch_seed,
                    const EvalOptions& opts) {
    if (tau.genus != s.target_genus) throw std::invalid_argument("evaluate_SJ: genus mismatch");
    mpfr_prec_t prec = bits_for_digits(digits + opts.guard_digits);
    const int T = static_cast<int>(s.terms.size());

    SJValue out;
    out.value = LogComplex(prec);

    // each distinct theta once (the monomial cache)
    theta::ThetaBatch batch(tau, digits, opts);
    for (const auto& t : s.terms)
        for (const auto& c : t.chars) batch.request(c);
    batch.run();
    out.distinct_thetas = batch.distinct_evaluations();

    std::vector<HPComplex> monomials;
    monomials.reserve(T);
    for (int i = 0; i < T; ++i) {
        HPComplex prod(1.0, 0.0, prec);
        for (const auto& c : s.terms[i].chars) prod = prod * batch.value(c);
        if (prod.is_exact_zero()) out.zero_monomials.push_back(i);
        monomials.push_back(std::move(prod));
    }

    if (!out.zero_monomials.empty()) {
        out.exact_zero = true;
        out.zero_anomaly = !tau.is_diagonal_exact();
        return out;
    }

    // one square root per monomial, branch chosen by the seed
    Rng rng(branch_seed);
    std::vector<HPComplex> roots;
    roots.reserve(T);
    for (int i = 0; i < T; ++i) {
        HPComplex r = sqrt(monomials[i]);
        if (rng.next_u64() & 1) r = -r;
        roots.push_back(std::move(r));
    }

    // product over all sign patterns with the fixed slot at +1, Gray-code
    // enumeration, fixed accumulation order
    LogComplex acc = LogComplex::one(prec);
    const std::uint64_t npat = 1ULL << (T - 1);
    for (std::uint64_t p = 0; p < npat; ++p) {
        std::uint64_t gray = p ^ (p >> 1);
        HPComplex f(prec);
        for (int i = 0; i < T; ++i) {
            int slot_bit;
            if (i == s.fixed_slot)
                slot_bit = 0;
            else {
                int pos = i < s.fixed_slot ? i : i - 1;
                slot_bit = static_cast<int>((gray >> pos) & 1);
            }
            f = slot_bit ? f - roots[i] : f + roots[i];
        }
        acc.mul(LogComplex::from(f));
        if (acc.zero) break;
    }
    out.value = acc;
    out.exact_zero = acc.zero;
    return out;
}

HPComplex genus4_symmetrized_value(const PeriodMatrix& tau, int digits, const EvalOptions& opts) {
    if (tau.genus != 4) throw std::invalid_argument("genus4_symmetrized_value: needs genus 4");
    mpfr_prec_t prec = bits_for_digits(digits + opts.guard_digits);
    SJIdentity s = build_S(4, 3, 4);

    theta::ThetaBatch batch(tau, digits, opts);
    for (const auto& t : s.terms)
        for (const auto& c : t.chars) batch.request(c);
    batch.run();

    std::vector<HPComplex> R;
    for (const auto& t : s.terms) {
        HPComplex prod(1.0, 0.0, prec);
        for (const auto& c : t.chars) prod = prod * batch.value(c);
        R.push_back(std::move(prod));
    }
    HPComplex sym = R[0] * R[0] + R[1] * R[1] + R[2] * R[2] - (R[0] * R[1]) * 2L - (R[0] * R[2]) * 2L -
                    (R[1] * R[2]) * 2L;

    // dual-path check against the sign-pattern product
    SJValue prodval = evaluate_SJ(s, tau, digits, /*branch_seed=*/1, opts);
    if (prodval.exact_zero || sym.is_exact_zero()) {
        if (!(prodval.exact_zero && sym.is_exact_zero()))
            throw std::logic_error("genus4_symmetrized_value: zero/nonzero mismatch between paths");
        return sym;
    }
    HPComplex ratio = prodval.value.ratio(LogComplex::from(sym));
    HPReal dev = (ratio - HPComplex(1.0, 0.0, prec)).abs();
    if (dev.to_double() > std::pow(10.0, -(digits - opts.guard_digits)))
        throw std::logic_error("genus4_symmetrized_value: product and symmetrized paths disagree");
    return sym;
}

}  // namespace skt::schottky
