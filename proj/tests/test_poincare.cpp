#include "schottkykit/poincare.hpp"

#include "schottkykit/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace skt;
using namespace skt::poincare;
using theta::PeriodMatrix;

namespace {

Direction direction_from(const std::vector<std::vector<std::complex<double>>>& m, int digits = 40) {
    int g = static_cast<int>(m.size());
    Direction d;
    d.genus = g;
    mpfr_prec_t prec = bits_for_digits(digits);
    d.T.assign(static_cast<size_t>(g) * g, HPComplex(prec));
    for (int a = 0; a < g; ++a)
        for (int b = 0; b < g; ++b) d.T[static_cast<size_t>(a) * g + b] = HPComplex(m[a][b].real(), m[a][b].imag(), prec);
    return d;
}

std::vector<HPComplex> default_t(int g, int digits = 40) {
    mpfr_prec_t prec = bits_for_digits(digits + 10);
    std::vector<HPComplex> t;
    for (int i = 0; i < g; ++i) t.push_back(HPComplex(0.0, 1.0 + 0.3 * i, prec));
    return t;
}

}  // namespace

TEST_CASE("symmetrized polynomial on simple inputs") {
    SUBCASE("all off-diagonal entries 1 gives -3") {
        std::vector<std::vector<std::complex<double>>> m(4, std::vector<std::complex<double>>(4, 1.0));
        for (int i = 0; i < 4; ++i) m[i][i] = 0.0;
        HPComplex v = poincare_symmetrized(PoincareQuadruple(1, 2, 3, 4), direction_from(m));
        CHECK(v.re.to_double() == doctest::Approx(-3.0));
        CHECK(v.im.to_double() == doctest::Approx(0.0));
    }
    SUBCASE("P1 = P2, P3 = 0 degenerates to zero") {
        // tau_14 = 0 kills P1 and P3... choose tau_13 = 0 instead: P2 and P3 share it
        // direct algebra: plug P = (p, p, 0) into the polynomial
        mpfr_prec_t prec = bits_for_digits(40);
        HPComplex p(0.7, 0.1, prec), z(prec);
        HPComplex v = p * p + p * p + z * z - (p * p) * 2L - (p * z) * 2L - (p * z) * 2L;
        CHECK(v.abs().to_double() < 1e-35);
    }
}

TEST_CASE("symmetrized equals the brute-force branch product, 100 random directions") {
    Rng rng(77);
    for (int it = 0; it < 100; ++it) {
        std::vector<std::vector<std::complex<double>>> m(4, std::vector<std::complex<double>>(4, 0.0));
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
                std::complex<double> v(rng.uniform_pm1() + 1.5, rng.uniform_pm1());
                m[a][b] = m[b][a] = v;
            }
        auto P = [&](int a, int b, int c, int d) { return m[a][b] * m[b][c] * m[c][d] * m[d][a]; };
        std::complex<double> P1 = P(0, 1, 2, 3), P2 = P(0, 2, 3, 1), P3 = P(0, 3, 1, 2);
        std::complex<double> s1 = std::sqrt(P1), s2 = std::sqrt(P2), s3 = std::sqrt(P3);
        std::complex<double> brute = (s1 + s2 + s3) * (s1 + s2 - s3) * (s1 - s2 + s3) * (s1 - s2 - s3);
        HPComplex v = poincare_symmetrized(PoincareQuadruple(1, 2, 3, 4), direction_from(m));
        double rel = std::abs(brute - std::complex<double>(v.re.to_double(), v.im.to_double())) / std::abs(brute);
        CHECK(rel < 1e-12);
    }
}

TEST_CASE("homogeneity and quadruple symmetry") {
    Rng rng(5);
    std::vector<std::vector<std::complex<double>>> m(5, std::vector<std::complex<double>>(5, 0.0));
    for (int a = 0; a < 5; ++a)
        for (int b = a + 1; b < 5; ++b) {
            std::complex<double> v(rng.uniform_pm1() + 2.0, rng.uniform_pm1());
            m[a][b] = m[b][a] = v;
        }
    Direction d = direction_from(m);

    HPComplex v1 = poincare_symmetrized(PoincareQuadruple(1, 2, 4, 5), d);

    auto m2 = m;
    for (auto& row : m2)
        for (auto& v : row) v *= 1.375;
    HPComplex v2 = poincare_symmetrized(PoincareQuadruple(1, 2, 4, 5), direction_from(m2));
    double lam8 = std::pow(1.375, 8.0);
    CHECK(std::abs(v2.re.to_double() / v1.re.to_double() - lam8) / lam8 < 1e-12);

    // relabeling the four points permutes {P1,P2,P3}, so the value is
    // invariant under applying a permutation to the matrix indices
    int perm[5] = {2, 0, 1, 4, 3};  // a permutation of the 5 indices
    auto mp = m;
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) mp[a][b] = m[perm[a]][perm[b]];
    // positions holding the original points {0,1,3,4} under perm are {1,2,3,4}
    HPComplex v3 = poincare_symmetrized(PoincareQuadruple(2, 3, 4, 5), direction_from(mp));
    CHECK(v3.re.to_double() == doctest::Approx(v1.re.to_double()));
    CHECK(v3.im.to_double() == doctest::Approx(v1.im.to_double()));
}

TEST_CASE("exact partial derivatives vanish off the own variable") {
    auto pt = random_rational_point(5, 12);
    PoincareQuadruple q(1, 2, 3, 4);
    CHECK(poincare_partial_exact(q, 3, 5, pt) == 0);
    CHECK(poincare_partial_exact(q, 4, 5, pt) == 0);
    CHECK(poincare_partial_exact(q, 3, 4, pt) != 0);
}

TEST_CASE("independence rank of the Poincare system, genus 4..8") {
    for (int g = 4; g <= 8; ++g) {
        auto pt = random_rational_point(g, 1000 + g);
        int expect = (g - 2) * (g - 3) / 2;
        CHECK(independence_rank_poincare(g, pt, true) == expect);
        CHECK(independence_rank_poincare(g, pt, false) == expect);
    }
}

TEST_CASE("leading-order fit at genus 4: slope 8") {
    SJIdentity s = schottky::build_S(4, 3, 4);
    Direction T = random_direction(4, 2024, 40);
    std::vector<double> ladder = {1e-2, std::pow(10.0, -2.5), 1e-3};
    FitResult fr = leading_order_fit(s, default_t(4), T, ladder, 40);
    REQUIRE(fr.ok);
    CHECK(fr.slope == doctest::Approx(8.0).epsilon(0.05 / 8.0));
}

TEST_CASE("scaling the direction scales the coefficient by 2^d, slope unchanged") {
    SJIdentity s = schottky::build_S(4, 3, 4);
    Direction T = random_direction(4, 9, 40);
    Direction T2 = T;
    mpfr_prec_t prec = bits_for_digits(40);
    for (auto& v : T2.T) v = v * HPReal(2.0, prec);
    std::vector<double> ladder = {1e-2, std::pow(10.0, -2.5), 1e-3};
    FitResult a = leading_order_fit(s, default_t(4), T, ladder, 40);
    FitResult b = leading_order_fit(s, default_t(4), T2, ladder, 40);
    REQUIRE(a.ok);
    REQUIRE(b.ok);
    CHECK(std::fabs(b.slope - a.slope) < 0.05);
    CHECK(std::fabs((b.log_coefficient - a.log_coefficient) - 8.0 * std::log(2.0)) < 0.2);
}

TEST_CASE("ratio test at genus 4 across directions") {
    std::vector<Direction> dirs;
    for (int i = 0; i < 3; ++i) dirs.push_back(random_direction(4, 400 + i, 40));
    RatioReport rep = poincare_ratio_test(4, 3, 4, default_t(4), dirs, 1e-3, 40);
    REQUIRE(rep.error.empty());
    CHECK(rep.pass);
    CHECK(rep.max_pairwise_rel < 2e-2);
}

TEST_CASE("direction on the Poincare locus is rejected by the ratio test and decays faster") {
    // entries tau_12 = tau_34 = tau_14 = tau_23 = 2, tau_13 = tau_24 = 1:
    // P = (16, 4, 4) and sqrt(16) - sqrt(4) - sqrt(4) = 0
    std::vector<std::vector<std::complex<double>>> m(4, std::vector<std::complex<double>>(4, 0.0));
    auto set = [&](int a, int b, double v) { m[a][b] = m[b][a] = v; };
    set(0, 1, 2);
    set(2, 3, 2);
    set(0, 3, 2);
    set(1, 2, 2);
    set(0, 2, 1);
    set(1, 3, 1);
    Direction T = direction_from(m);
    HPComplex q = poincare_symmetrized(PoincareQuadruple(1, 2, 3, 4), T);
    CHECK(q.abs().to_double() < 1e-30);

    RatioReport rep = poincare_ratio_test(4, 3, 4, default_t(4), {T}, 1e-3, 40);
    CHECK(!rep.error.empty());

    SJIdentity s = schottky::build_S(4, 3, 4);
    std::vector<double> ladder = {std::pow(10.0, -1.75), 1e-2, std::pow(10.0, -2.25)};
    FitResult fr = leading_order_fit(s, default_t(4), T, ladder, 40);
    REQUIRE(fr.ok);
    CHECK(fr.slope > 8.5);
}

TEST_CASE("numeric S-Jacobian at genus 4 is nonsingular") {
    Direction T = random_direction(4, 33, 40);
    IndepSReport rep = independence_rank_S(4, default_t(4), T, 1e-3, 40);
    REQUIRE(rep.error.empty());
    CHECK(rep.pass);
    CHECK(rep.min_singular > 0.5);
}
