#include "schottkykit/identities.hpp"

#include "schottkykit/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>

using namespace skt;
using namespace skt::identities;
using charalg::CharOrder;
using charalg::Characteristic;
using theta::PeriodMatrix;
using theta::random_period_matrix;
using weilmat::QuarticRelation;

namespace {

QuarticRelation x2_relation(const Characteristic& shift_a, const Characteristic& shift_s) {
    QuarticRelation r;
    r.genus = 2;
    r.coeffs = {1, -1, -1, 0, 0, 0, 1, -1, -1, 0};
    r.shift_a = shift_a;
    r.shift_s = shift_s;
    return r;
}

}  // namespace

TEST_CASE("riemann quartic relation residuals, genus 1..3") {
    Rng rng(404);
    for (int g : {1, 2, 3}) {
        for (int it = 0; it < (g == 3 ? 4 : 8); ++it) {
            PeriodMatrix tau = random_period_matrix(g, 1000 * g + it, 0.5, 40);
            auto pick = [&] {
                return Characteristic(g, static_cast<std::uint32_t>(rng.next_below(1u << g)),
                                      static_cast<std::uint32_t>(rng.next_below(1u << g)));
            };
            IdentityValue v = riemann_relation_residual(pick(), pick(), pick(), tau, 40);
            CHECK(v.relative() < 1e-30);
        }
    }
}

TEST_CASE("paper genus-3 relation with all distinct characteristics") {
    PeriodMatrix tau = random_period_matrix(3, 99, 0.4, 40);
    IdentityValue v = riemann_relation_residual(Characteristic::of("000", "000"), Characteristic::of("011", "100"),
                                                Characteristic::of("100", "001"), tau, 40);
    CHECK(v.relative() < 1e-30);
}

TEST_CASE("X2 eigenvector identities at genus 2") {
    Characteristic z = Characteristic::of("00", "00");
    PeriodMatrix tau = random_period_matrix(2, 7, 0.5, 40);

    SUBCASE("alpha = sigma = 0: six fourth powers") {
        QuarticRelation r = x2_relation(z, z);
        IdentityValue v = eigenvector_quartic_value(r, tau, 40);
        CHECK(v.relative() < 1e-30);
        QuarticMonomialList l = expand(r);
        CHECK(l.terms.size() == 6);
        for (const auto& t : l.terms) CHECK(t.chars[0] == t.chars[1]);
    }
    SUBCASE("shifts [01;00],[01;00]: three squared pairs") {
        Characteristic s = Characteristic::of("01", "00");
        QuarticRelation r = x2_relation(s, s);
        IdentityValue v = eigenvector_quartic_value(r, tau, 40);
        CHECK(v.relative() < 1e-30);
    }
    SUBCASE("random non-eigenvector does not vanish") {
        QuarticRelation r = x2_relation(z, z);
        r.coeffs = {1, 1, 0, 0, 2, 0, -1, 0, 0, 1};
        CHECK(!weilmat::is_valid_relation(r));
        IdentityValue v = eigenvector_quartic_value(r, tau, 40);
        CHECK(v.relative() > 1e-5);
    }
}

TEST_CASE("build_R structure") {
    SUBCASE("genus 3 is the three-monomial paper relation") {
        RJK r = build_R(3, 3, 4);
        CHECK(r.monomials.terms.size() == 3);
        CHECK(r.monomials.terms[0].coeff == 1);
        CHECK(r.monomials.terms[1].coeff == -1);
        CHECK(r.monomials.terms[2].coeff == 1);
        CHECK(r.monomials.terms[0].chars[0] == Characteristic::of("000", "000"));
        CHECK(r.monomials.terms[0].chars[1] == Characteristic::of("011", "100"));
        CHECK(r.monomials.terms[0].chars[2] == Characteristic::of("100", "001"));
        CHECK(r.monomials.terms[0].chars[3] == Characteristic::of("111", "101"));
        CHECK(r.monomials.terms[1].chars[0] == Characteristic::of("010", "000"));
        CHECK(r.monomials.terms[2].chars[3] == Characteristic::of("111", "110"));
    }
    SUBCASE("monomial count law 3 * 2^(h-3)") {
        for (int h = 3; h <= 6; ++h)
            for (int j = 3; j < h + 1; ++j)
                CHECK(build_R(h, j, h + 1).monomials.terms.size() == 3u << (h - 3));
    }
    SUBCASE("index constraints") {
        CHECK_THROWS(build_R(2, 3, 4));
        CHECK_THROWS(build_R(4, 3, 6));
        CHECK_THROWS(build_R(4, 4, 4));
    }
    SUBCASE("coefficient vectors are valid relations") {
        for (int h = 3; h <= 5; ++h) CHECK(weilmat::is_valid_relation(build_R(h, 3, 4).relation));
        CHECK(weilmat::is_valid_relation(build_R(5, 4, 6).relation));
    }
}

TEST_CASE("R_jk residuals at random period matrices") {
    for (int h : {3, 4}) {
        for (int jk = 0; jk < 2; ++jk) {
            int j = 3, k = jk == 0 ? 4 : h + 1;
            if (j >= k) continue;
            RJK r = build_R(h, j, k);
            for (int it = 0; it < 2; ++it) {
                PeriodMatrix tau = random_period_matrix(h, 50 * h + 10 * jk + it, 0.4, 40);
                IdentityValue v = evaluate_monomials(r.monomials, tau, 40);
                CHECK(v.relative() < 1e-30);
            }
        }
    }
}

TEST_CASE("merged expansion of build_R is the monomial list up to a common positive scale") {
    for (int h : {3, 4, 5}) {
        RJK r = build_R(h, 3, h + 1);
        QuarticMonomialList ex = merged_monomials(r.relation);
        REQUIRE(ex.terms.size() == r.monomials.terms.size());
        auto key = [](const QuarticTerm& t) {
            auto c = t.chars;
            std::sort(c.begin(), c.end());
            return c;
        };
        std::map<std::array<Characteristic, 4>, long long> want, got;
        for (const auto& t : r.monomials.terms) want[key(t)] = t.coeff;
        for (const auto& t : ex.terms) got[key(t)] = t.coeff;
        REQUIRE(got.size() == want.size());
        long long scale = got.begin()->second / want.at(got.begin()->first);
        CHECK(scale > 0);
        for (const auto& [k, v] : got) CHECK(v == scale * want.at(k));
    }
}

TEST_CASE("column-swap covariance: R_jk at tau equals R_34 at permuted tau") {
    int h = 4, j = 3, k = 5;  // swaps columns 2 <-> 2 and 3 <-> 4
    PeriodMatrix tau = random_period_matrix(h, 31, 0.5, 40);
    // permuted tau: swap rows/cols 3 and 4 (the permutation matching the swaps)
    PeriodMatrix ptau = tau;
    for (int a = 0; a < h; ++a) {
        std::swap(ptau.at(a, 2), ptau.at(a, 3));
    }
    for (int b = 0; b < h; ++b) {
        std::swap(ptau.at(2, b), ptau.at(3, b));
    }
    IdentityValue v1 = evaluate_monomials(build_R(h, j, k).monomials, tau, 40);
    IdentityValue v2 = evaluate_monomials(build_R(h, 3, 4).monomials, ptau, 40);
    // both vanish; their max monomials coincide as multisets
    CHECK(v1.relative() < 1e-30);
    CHECK(v2.relative() < 1e-30);
    CHECK(((v1.max_monomial - v2.max_monomial) / v1.max_monomial).to_double() < 1e-35);
}

TEST_CASE("doubling transport") {
    SUBCASE("genus 1 relation transports to the X2 relation") {
        QuarticRelation r1;
        r1.genus = 1;
        r1.coeffs = {1, -1, -1};
        r1.shift_a = Characteristic(1, 0, 0);
        r1.shift_s = Characteristic(1, 0, 0);
        QuarticRelation r2 = doubling_transport(r1);
        CHECK(r2.coeffs == std::vector<long long>{1, -1, -1, 0, 0, 0, 1, -1, -1, 0});
        CHECK(r2.coeffs == weilmat::doubling_lift(2, r1.coeffs, weilmat::LiftVariant::U2));
    }
    SUBCASE("transport twice from genus 3 gives R_34 at genus 5 up to reordering") {
        QuarticRelation r = doubling_transport(doubling_transport(build_R(3, 3, 4).relation));
        RJK direct = build_R(5, 3, 4);
        CHECK(r.coeffs == direct.relation.coeffs);
        CHECK(r.shift_a == direct.relation.shift_a);
        CHECK(r.shift_s == direct.relation.shift_s);
    }
    SUBCASE("transported relation vanishes numerically") {
        QuarticRelation r = doubling_transport(build_R(3, 3, 4).relation);
        for (int it = 0; it < 2; ++it) {
            PeriodMatrix tau = random_period_matrix(4, 800 + it, 0.4, 40);
            CHECK(eigenvector_quartic_value(r, tau, 40).relative() < 1e-30);
        }
    }
    SUBCASE("invalid input is rejected") {
        QuarticRelation bad;
        bad.genus = 1;
        bad.coeffs = {1, 1, 1};
        bad.shift_a = Characteristic(1, 0, 0);
        bad.shift_s = Characteristic(1, 0, 0);
        CHECK_THROWS(doubling_transport(bad));
    }
}

TEST_CASE("negative controls: random non-eigenvectors stay visibly nonzero") {
    Rng rng(606);
    int g = 2;
    CharOrder ord(g);
    for (int it = 0; it < 10; ++it) {
        QuarticRelation r;
        r.genus = g;
        r.coeffs.assign(ord.even_list.size(), 0);
        do {
            for (auto& c : r.coeffs) c = static_cast<long long>(rng.next_below(7)) - 3;
        } while (weilmat::is_valid_relation(r));
        r.shift_a = Characteristic(g, static_cast<std::uint32_t>(rng.next_below(4)),
                                   static_cast<std::uint32_t>(rng.next_below(4)));
        r.shift_s = Characteristic(g, static_cast<std::uint32_t>(rng.next_below(4)),
                                   static_cast<std::uint32_t>(rng.next_below(4)));
        if (!is_generically_nonvanishing(r)) continue;
        PeriodMatrix tau = random_period_matrix(g, 7000 + it, 0.5, 40);
        IdentityValue v = eigenvector_quartic_value(r, tau, 40);
        CHECK(v.relative() > 1e-5);
    }
}
