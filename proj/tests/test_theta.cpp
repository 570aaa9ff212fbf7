#include "schottkykit/theta.hpp"

#include "schottkykit/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace skt;
using namespace skt::theta;
using charalg::Characteristic;

namespace {

double rel_err(const HPComplex& a, const HPComplex& b) {
    HPReal d = (a - b).abs();
    HPReal s = a.abs();
    if (s.is_zero()) return d.to_double();
    return (d / s).to_double();
}

HPComplex mk(double re, double im, int digits = 40) { return HPComplex(re, im, bits_for_digits(digits + 10)); }

}  // namespace

TEST_CASE("theta00 at tau = i matches the closed form") {
    // pi^(1/4) / Gamma(3/4), frozen at 40 digits
    HPComplex t = mk(0.0, 1.0);
    HPComplex v = theta_genus1(0, 0, t, 40);
    HPReal expect("1.0864348112133080145753161215102234570702", bits_for_digits(50));
    CHECK((v.re - expect).to_double() == doctest::Approx(0.0).epsilon(1e-38));
    CHECK(std::fabs(v.im.to_double()) < 1e-38);
}

TEST_CASE("genus-1 fast path against the naive reference oracle at doubled precision and radius") {
    Rng rng(31);
    for (int it = 0; it < 4; ++it) {
        HPComplex t = mk(rng.uniform_pm1(), 0.6 + 0.5 * (rng.uniform_pm1() + 1), 80);
        for (auto [e, d] : {std::pair{0, 0}, {0, 1}, {1, 0}}) {
            HPComplex fast = theta_genus1(e, d, t, 40);
            EvalOptions oracle;
            oracle.mode = EvalMode::Reference;
            oracle.radius_boost = 8.0;
            HPComplex ref = theta_genus1(e, d, t, 80, oracle);
            CHECK(rel_err(ref, fast) < 1e-39);
        }
    }
}

TEST_CASE("odd characteristics vanish exactly") {
    HPComplex t = mk(0.3, 1.2);
    CHECK(theta_genus1(1, 1, t, 40).is_exact_zero());
    PeriodMatrix tau = random_period_matrix(3, 5, 0.4, 40);
    CHECK(theta_constant(Characteristic::of("101", "100"), tau, 40).is_exact_zero());
}

TEST_CASE("jacobi quartic identity at 10 random t") {
    Rng rng(7);
    for (int it = 0; it < 10; ++it) {
        HPComplex t = mk(rng.uniform_pm1(), 0.5 + 0.6 * (rng.uniform_pm1() + 1));
        HPComplex a = theta_genus1(0, 0, t, 40), b = theta_genus1(0, 1, t, 40), c = theta_genus1(1, 0, t, 40);
        auto p4 = [](const HPComplex& z) { return (z * z) * (z * z); };
        HPComplex resid = p4(a) - p4(b) - p4(c);
        CHECK((resid.abs() / p4(a).abs()).to_double() < 1e-35);
    }
}

TEST_CASE("multidim theta against the reference kernel, genus 2 and 3") {
    for (int g : {2, 3}) {
        PeriodMatrix tau = random_period_matrix(g, 101 + g, 0.5, 60);
        charalg::CharOrder ord(g);
        EvalOptions fast;
        EvalOptions ref;
        ref.mode = EvalMode::Reference;
        for (int i = 0; i < 3; ++i) {
            const Characteristic& m = ord.even_list[static_cast<size_t>(i * 2) % ord.even_list.size()];
            HPComplex a = theta_constant(m, tau, 40, fast);
            HPComplex b = theta_constant(m, tau, 40, ref);
            CHECK(rel_err(a, b) < 1e-38);
        }
    }
}

TEST_CASE("diagonal factorization cross-check at genus 2") {
    mpfr_prec_t prec = bits_for_digits(50);
    std::vector<HPComplex> t = {mk(0.0, 1.0), mk(0.0, 2.0)};
    PeriodMatrix tau(2, prec);
    tau.at(0, 0) = t[0];
    tau.at(1, 1) = t[1];

    Characteristic m = Characteristic::of("00", "00");
    HPComplex prod = theta_on_diagonal(m, t, 40);
    EvalOptions force;
    force.force_lattice = true;
    HPComplex sum2d = theta_constant(m, tau, 40, force);
    CHECK(rel_err(prod, sum2d) < 1e-38);

    // a [1;1] column kills the product exactly
    CHECK(theta_on_diagonal(Characteristic::of("01", "01"), t, 40).is_exact_zero());
    CHECK(theta_constant(Characteristic::of("01", "01"), tau, 40).is_exact_zero());
}

TEST_CASE("precision monotonicity") {
    PeriodMatrix tau = random_period_matrix(2, 8, 0.3, 70);
    Characteristic m = Characteristic::of("10", "01");
    HPComplex a = theta_constant(m, tau, 40);
    HPComplex b = theta_constant(m, tau, 50);
    CHECK(rel_err(b, a) < 1e-39);
}

TEST_CASE("radius bump changes nothing above the certified tail") {
    PeriodMatrix tau = random_period_matrix(3, 21, 0.4, 60);
    Characteristic m = Characteristic::of("110", "000");
    HPComplex a = theta_constant(m, tau, 40);
    EvalOptions bump;
    bump.radius_boost = 2.0;
    HPComplex b = theta_constant(m, tau, 40, bump);
    CHECK(rel_err(b, a) < 1e-40);
}

TEST_CASE("deterministic across repeated evaluation") {
    PeriodMatrix tau = random_period_matrix(3, 77, 0.5, 45);
    Characteristic m = Characteristic::of("010", "110");
    HPComplex a = theta_constant(m, tau, 40);
    HPComplex b = theta_constant(m, tau, 40);
    CHECK(a.re == b.re);
    CHECK(a.im == b.im);
}

TEST_CASE("triple product derivative: dual paths agree, shift periodicity, nonvanishing") {
    Rng rng(15);
    for (int it = 0; it < 10; ++it) {
        HPComplex t = mk(rng.uniform_pm1(), 0.5 + 0.5 * (rng.uniform_pm1() + 1));
        HPComplex d = theta11_z_derivative(t, 40);  // internal cross-check throws on mismatch
        CHECK(!d.is_exact_zero());
        CHECK(d.abs().to_double() > 1e-12);

        HPComplex t2 = t + mk(2.0, 0.0);
        HPComplex d2 = theta11_z_derivative(t2, 40);
        CHECK(std::fabs((d2.abs() / d.abs()).to_double() - 1.0) < 1e-30);
    }
}

TEST_CASE("random period matrices: determinism and imaginary-part bounds") {
    PeriodMatrix a = random_period_matrix(4, 42, 0.5, 40);
    PeriodMatrix b = random_period_matrix(4, 42, 0.5, 40);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(a.at(i, j).re == b.at(i, j).re);
            CHECK(a.at(i, j).im == b.at(i, j).im);
        }

    PeriodMatrix sigma0 = random_period_matrix(3, 9, 0.0, 40);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) CHECK(sigma0.at(i, j).re.is_zero());

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        PdCertificate cert = validate_period_matrix(random_period_matrix(3, seed, 0.6, 40));
        CHECK(cert.ok);
        CHECK(cert.lambda_min_lb >= 1.0);
    }
}

TEST_CASE("invalid period matrices are rejected") {
    mpfr_prec_t prec = bits_for_digits(50);
    PeriodMatrix tau(2, prec);
    tau.at(0, 0) = mk(0.0, 1.0);
    tau.at(1, 1) = mk(0.0, 1.0);
    tau.at(0, 1) = mk(0.1, 0.0);
    tau.at(1, 0) = mk(0.2, 0.0);  // asymmetric
    CHECK(!validate_period_matrix(tau).ok);
    CHECK_THROWS(theta_constant(Characteristic::of("00", "00"), tau, 40));

    PeriodMatrix neg(1, prec);
    neg.at(0, 0) = mk(0.0, -1.0);
    CHECK(!validate_period_matrix(neg).ok);
}

TEST_CASE("heat equation: three column patterns at a diagonal point") {
    std::vector<HPComplex> t = {mk(0.0, 1.0, 60), mk(0.0, 1.3, 60), mk(0.0, 1.7, 60), mk(0.0, 2.3, 60)};
    double h = 1.0 / 1024, h2 = h / 2;

    SUBCASE("no [1;1] columns: derivative vanishes") {
        Characteristic m = Characteristic::of("0110", "0000");
        auto r1 = heat_equation_residual(m, t, 1, 2, h, 40);
        CHECK((r1.residual / r1.scale).to_double() < 10 * h * h);
    }
    SUBCASE("exactly the differentiated pair is [1;1]: linear term matches with O(h^2) ratio") {
        Characteristic m = Characteristic::of("0110", "0110");  // columns 2,3 odd
        auto r1 = heat_equation_residual(m, t, 2, 3, h, 40);
        auto r2 = heat_equation_residual(m, t, 2, 3, h2, 40);
        CHECK((r1.residual / r1.scale).to_double() < 10 * h * h);
        CHECK(!r1.predicted.is_exact_zero());
        double ratio = (r1.residual / r2.residual).to_double();
        CHECK(ratio > 3.5);
        CHECK(ratio < 4.5);
    }
    SUBCASE("four [1;1] columns: lowest order is quadratic, derivative in one pair vanishes") {
        Characteristic m = Characteristic::of("1111", "1111");
        auto r1 = heat_equation_residual(m, t, 1, 2, h, 40);
        CHECK((r1.residual / r1.scale).to_double() < 10 * h * h);
    }
}
