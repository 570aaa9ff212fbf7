#include "schottkykit/suites.hpp"

#include "schottkykit/poincare.hpp"
#include "schottkykit/rng.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>

namespace skt::suites {

using charalg::CharOrder;
using charalg::Characteristic;
using theta::PeriodMatrix;
using theta::random_period_matrix;

namespace {

using Clock = std::chrono::steady_clock;

struct Runner {
    const SuiteConfig& cfg;
    std::vector<CheckResult>& out;

    void run(const std::string& name, int genus, const std::string& kind, double tolerance,
             const std::function<std::pair<double, std::string>()>& fn) {
        CheckResult r;
        r.name = name;
        r.genus = genus;
        r.metric_kind = kind;
        r.tolerance = tolerance;
        std::ostringstream dig;
        dig << "seed=" << cfg.seed << ";P=" << cfg.precision << ";g=" << genus;
        r.inputs_digest = dig.str();
        auto t0 = Clock::now();
        try {
            auto [metric, detail] = fn();
            r.metric = metric;
            r.detail = detail;
            r.pass = kind == "exact" ? metric == 0.0 : metric <= tolerance;
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
            r.metric = std::nan("");
        }
        r.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        out.push_back(r);
    }
};

std::vector<int> genus_or(const SuiteConfig& cfg, std::initializer_list<int> dflt) {
    if (!cfg.genus.empty()) return cfg.genus;
    return dflt;
}

std::vector<HPComplex> diag_entries(int g, int digits, double base = 2.0, double step = 0.3) {
    mpfr_prec_t prec = bits_for_digits(digits + 10);
    std::vector<HPComplex> t;
    for (int i = 0; i < g; ++i) t.push_back(HPComplex(0.0, base + step * i, prec));
    return t;
}

void suite_core(Runner& R) {
    const auto& cfg = R.cfg;
    int P = cfg.precision;

    for (int g : genus_or(cfg, {1, 2, 3, 4, 5, 6})) {
        R.run("charalg/pairing_symmetry_bilinearity", g, "exact", 0, [&cfg, g] {
            Rng rng(substream(cfg.seed, 10 + g));
            long long bad = 0;
            for (int it = 0; it < 2000; ++it) {
                auto pick = [&] {
                    return Characteristic(g, static_cast<std::uint32_t>(rng.next_below(1u << g)),
                                          static_cast<std::uint32_t>(rng.next_below(1u << g)));
                };
                Characteristic m = pick(), n = pick(), p = pick();
                if (charalg::weil_pairing(m, n) != charalg::weil_pairing(n, m)) ++bad;
                if (charalg::weil_pairing(m + n, p) !=
                    charalg::weil_pairing(m, p) * charalg::weil_pairing(n, p))
                    ++bad;
            }
            return std::pair<double, std::string>(static_cast<double>(bad), "2000 random triples");
        });
        R.run("charalg/orthogonality_count_eta_g", g, "exact", 0, [g] {
            Characteristic eta = charalg::special_two_torsion(charalg::TwoTorsionKind::EtaG, g);
            long long count = 0;
            for (std::uint32_t e = 0; e < (1u << g); ++e)
                for (std::uint32_t d = 0; d < (1u << g); ++d)
                    if (charalg::weil_pairing(eta, Characteristic(g, e, d)) == 1) ++count;
            return std::pair<double, std::string>(static_cast<double>(count - (1LL << (2 * g - 1))),
                                                  "|eta_g^perp| vs 2^(2g-1)");
        });
        if (g <= CharOrder::kMaxOrderGenus)
            R.run("charalg/order_counts", g, "exact", 0, [g] {
                CharOrder ord(g);
                bool ok = static_cast<long long>(ord.even_list.size()) == charalg::k_plus(g) &&
                          static_cast<long long>(ord.odd_list.size()) == charalg::k_minus(g);
                return std::pair<double, std::string>(ok ? 0.0 : 1.0, "k_g^+ and k_g^-");
            });
    }

    R.run("theta/genus1_literal_oracle", 1, "residual", std::pow(10.0, -(P - 5)) * cfg.tolerance_scale, [P] {
        HPComplex t(0.0, 1.0, bits_for_digits(P + 10));
        HPComplex v = theta::theta_genus1(0, 0, t, P);
        HPReal expect("1.0864348112133080145753161215102234570702", bits_for_digits(60));
        double m = std::fabs((v.re - expect).to_double()) + std::fabs(v.im.to_double());
        return std::pair<double, std::string>(m, "theta[0;0](i) vs pi^(1/4)/Gamma(3/4)");
    });
    R.run("theta/genus1_reference_oracle", 1, "residual", std::pow(10.0, -(P - 2)) * cfg.tolerance_scale,
          [&cfg, P] {
              Rng rng(substream(cfg.seed, 31));
              double worst = 0;
              for (int it = 0; it < 4; ++it) {
                  HPComplex t(rng.uniform_pm1(), 0.8 + 0.4 * (rng.uniform_pm1() + 1), bits_for_digits(2 * P + 10));
                  theta::EvalOptions oracle;
                  oracle.mode = theta::EvalMode::Reference;
                  oracle.radius_boost = 6.0;
                  for (auto [e, d] : {std::pair{0, 0}, {0, 1}, {1, 0}}) {
                      HPComplex fast = theta::theta_genus1(e, d, t, P);
                      HPComplex ref = theta::theta_genus1(e, d, t, 2 * P, oracle);
                      worst = std::max(worst, ((fast - ref).abs() / ref.abs()).to_double());
                  }
              }
              return std::pair<double, std::string>(worst, "fast kernel vs naive reference at 2P digits");
          });
    R.run("theta/jacobi_quartic", 1, "residual", std::pow(10.0, -(P - 5)) * cfg.tolerance_scale, [&cfg, P] {
        Rng rng(substream(cfg.seed, 32));
        double worst = 0;
        for (int it = 0; it < 10; ++it) {
            HPComplex t(rng.uniform_pm1(), 0.6 + 0.5 * (rng.uniform_pm1() + 1), bits_for_digits(P + 10));
            HPComplex a = theta::theta_genus1(0, 0, t, P), b = theta::theta_genus1(0, 1, t, P),
                      c = theta::theta_genus1(1, 0, t, P);
            auto p4 = [](const HPComplex& z) { return (z * z) * (z * z); };
            worst = std::max(worst, ((p4(a) - p4(b) - p4(c)).abs() / p4(a).abs()).to_double());
        }
        return std::pair<double, std::string>(worst, "theta^4[00] - theta^4[01] - theta^4[10], 10 random t");
    });
    R.run("theta/triple_product_dual_path", 1, "residual", 0.0, [&cfg, P] {
        Rng rng(substream(cfg.seed, 33));
        for (int it = 0; it < 10; ++it) {
            HPComplex t(rng.uniform_pm1(), 0.5 + 0.5 * (rng.uniform_pm1() + 1), bits_for_digits(P + 10));
            theta::theta11_z_derivative(t, P);  // throws on dual-path mismatch
        }
        return std::pair<double, std::string>(0.0, "series vs triple product, 10 random t");
    });
    R.run("theta/diagonal_factorization", 2, "residual", std::pow(10.0, -(P - 2)) * cfg.tolerance_scale, [P] {
        auto t = diag_entries(2, P, 1.0, 0.7);
        PeriodMatrix tau = theta::diagonal_period_matrix(t);
        theta::EvalOptions force;
        force.force_lattice = true;
        Characteristic m = Characteristic::of("00", "10");
        HPComplex a = theta::theta_on_diagonal(m, t, P);
        HPComplex b = theta::theta_constant(m, tau, P, force);
        return std::pair<double, std::string>(((a - b).abs() / a.abs()).to_double(),
                                              "product formula vs 2-dim lattice sum");
    });
    R.run("theta/precision_monotonicity", 2, "residual", std::pow(10.0, -(P - 2)) * cfg.tolerance_scale,
          [&cfg, P] {
              PeriodMatrix tau = random_period_matrix(2, substream(cfg.seed, 34), 0.4, P + 20);
              Characteristic m = Characteristic::of("10", "01");
              HPComplex a = theta::theta_constant(m, tau, P);
              HPComplex b = theta::theta_constant(m, tau, P + 10);
              return std::pair<double, std::string>(((a - b).abs() / b.abs()).to_double(), "P vs P+10 digits");
          });
    R.run("theta/tail_radius_stability", 3, "residual", std::pow(10.0, -P) * cfg.tolerance_scale, [&cfg, P] {
        PeriodMatrix tau = random_period_matrix(3, substream(cfg.seed, 35), 0.4, P + 10);
        Characteristic m = Characteristic::of("110", "000");
        HPComplex a = theta::theta_constant(m, tau, P);
        theta::EvalOptions bump;
        bump.radius_boost = 2.0;
        HPComplex b = theta::theta_constant(m, tau, P, bump);
        return std::pair<double, std::string>(((a - b).abs() / a.abs()).to_double(), "radius + 2 on every axis");
    });
    R.run("theta/random_period_matrix_contract", 3, "exact", 0, [&cfg, P] {
        int bad = 0;
        for (int it = 0; it < 50; ++it) {
            auto a = random_period_matrix(3, substream(cfg.seed, 36) + it, 0.5, P);
            auto b = random_period_matrix(3, substream(cfg.seed, 36) + it, 0.5, P);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    if (!(a.at(i, j).re == b.at(i, j).re) || !(a.at(i, j).im == b.at(i, j).im)) ++bad;
            auto cert = theta::validate_period_matrix(a);
            if (!cert.ok || cert.lambda_min_lb < 1.0) ++bad;
        }
        return std::pair<double, std::string>(bad, "determinism + lambda_min >= 1 over 50 seeds");
    });
    R.run("theta/heat_equation_cases", 4, "exact", 0, [P] {
        auto t = diag_entries(4, P, 1.0, 0.35);
        double h = 1.0 / 1024;
        int bad = 0;
        auto relr = [](const theta::HeatResidual& r) { return (r.residual / r.scale).to_double(); };
        auto rA = theta::heat_equation_residual(Characteristic::of("0110", "0000"), t, 1, 2, h, P);
        if (relr(rA) > 10 * h * h) ++bad;
        auto rB1 = theta::heat_equation_residual(Characteristic::of("0110", "0110"), t, 2, 3, h, P);
        auto rB2 = theta::heat_equation_residual(Characteristic::of("0110", "0110"), t, 2, 3, h / 2, P);
        double ratio = (rB1.residual / rB2.residual).to_double();
        if (relr(rB1) > 10 * h * h || ratio < 3.5 || ratio > 4.5) ++bad;
        auto rC = theta::heat_equation_residual(Characteristic::of("1111", "1111"), t, 1, 2, h, P);
        if (relr(rC) > 10 * h * h) ++bad;
        return std::pair<double, std::string>(bad, "expansion consistency, three column patterns");
    });
}

void suite_eigen(Runner& R) {
    const auto& cfg = R.cfg;
    for (int g : genus_or(cfg, {1, 2, 3, 4})) {
        if (g > 4) continue;
        R.run("weilmat/eigenstructure", g, "exact", 0, [g] {
            auto rep = weilmat::verify_eigenstructure(g);
            double fails = 0;
            std::string first;
            for (const auto& c : rep.checks)
                if (!c.pass) {
                    fails += 1;
                    if (first.empty()) first = c.name + (c.detail.empty() ? "" : " (" + c.detail + ")");
                }
            return std::pair<double, std::string>(
                fails, first.empty() ? std::to_string(rep.checks.size()) + " exact checks" : "failed: " + first);
        });
    }
    for (int g : genus_or(cfg, {1, 2, 3, 4})) {
        if (g > (cfg.deep ? 6 : 4)) continue;
        R.run("weilmat/neg_eigenspace_basis", g, "exact", 0, [g] {
            auto basis = weilmat::neg_eigenspace_basis(g);  // throws if a certificate fails
            return std::pair<double, std::string>(0.0, std::to_string(basis.size()) + " columns, rank (4^g-1)/3");
        });
    }
    R.run("weilmat/doubling_x2_literal", 2, "exact", 0, [] {
        auto x2 = weilmat::doubling_lift(2, {1, -1, -1}, weilmat::LiftVariant::U2);
        bool ok = x2 == std::vector<long long>{1, -1, -1, 0, 0, 0, 1, -1, -1, 0};
        return std::pair<double, std::string>(ok ? 0.0 : 1.0, "U2 lift of X_1 is the paper's X_2");
    });
    for (int g : genus_or(cfg, {2, 3, 4})) {
        if (g < 2 || g > 4) continue;
        R.run("weilmat/doubling_lift_variants", g, "exact", 0, [g] {
            int g1 = g - 1;
            IntMat N1 = weilmat::build_pairing_matrix(g1, weilmat::PairingKind::EvenOdd).m;
            std::vector<long long> X(N1.rows);
            for (int i = 0; i < N1.rows; ++i) X[i] = N1.at(i, 0);
            int bad = 0;
            if (!weilmat::is_neg_eigenvector(g, weilmat::doubling_lift(g, X, weilmat::LiftVariant::U1))) ++bad;
            if (!weilmat::is_neg_eigenvector(g, weilmat::doubling_lift(g, X, weilmat::LiftVariant::U2))) ++bad;
            std::vector<long long> Y(N1.cols, 0);
            Y[0] = -(1LL << (g1 - 1));
            if (!weilmat::is_neg_eigenvector(g, weilmat::doubling_lift(g, X, weilmat::LiftVariant::U3, Y))) ++bad;
            IntMat Mp1 = weilmat::build_pairing_matrix(g1, weilmat::PairingKind::EvenEven).m;
            IntMat big = add(Mp1, IntMat::identity(Mp1.rows, 1LL << (g1 - 1)));
            std::vector<long long> Xp(big.rows);
            for (int i = 0; i < big.rows; ++i) Xp[i] = big.at(i, 0);
            if (!weilmat::is_neg_eigenvector(g, weilmat::doubling_lift(g, Xp, weilmat::LiftVariant::U4))) ++bad;
            return std::pair<double, std::string>(bad, "U1..U4 exact eigenvector checks");
        });
    }
}

void suite_identities(Runner& R) {
    const auto& cfg = R.cfg;
    int P = cfg.precision;
    double tol = std::pow(10.0, -(P - 10)) * cfg.tolerance_scale;

    for (int g : genus_or(cfg, {2, 3})) {
        if (g > 3) continue;
        R.run("identities/riemann_random_triples", g, "residual", tol, [&cfg, g, P] {
            Rng rng(substream(cfg.seed, 50 + g));
            double worst = 0;
            for (int it = 0; it < 50; ++it) {
                PeriodMatrix tau = random_period_matrix(g, substream(cfg.seed, 60 + g) + it % 5, 0.5, P);
                auto pick = [&] {
                    return Characteristic(g, static_cast<std::uint32_t>(rng.next_below(1u << g)),
                                          static_cast<std::uint32_t>(rng.next_below(1u << g)));
                };
                worst =
                    std::max(worst, identities::riemann_relation_residual(pick(), pick(), pick(), tau, P).relative());
            }
            return std::pair<double, std::string>(worst, "50 random triples over 5 random tau");
        });
    }

    for (int g : genus_or(cfg, {3, 4, 5})) {
        if (g < 3 || g > 6) continue;
        R.run("identities/R_jk_residuals", g, "residual", tol, [&cfg, g, P] {
            double worst = 0;
            for (int j = 3; j <= g + 1; ++j)
                for (int k = j + 1; k <= g + 1; ++k) {
                    auto r = identities::build_R(g, j, k);
                    for (int it = 0; it < (cfg.deep ? 10 : 3); ++it) {
                        PeriodMatrix tau = random_period_matrix(g, substream(cfg.seed, 70 + g) + it, 0.5, P);
                        worst = std::max(worst, identities::evaluate_monomials(r.monomials, tau, P).relative());
                    }
                }
            return std::pair<double, std::string>(worst, "all (j,k), seeded random tau");
        });
    }

    R.run("identities/monomial_count_law", 0, "exact", 0, [] {
        int bad = 0;
        for (int h = 3; h <= 6; ++h)
            for (int j = 3; j <= h + 1; ++j)
                for (int k = j + 1; k <= h + 1; ++k)
                    if (identities::build_R(h, j, k).monomials.terms.size() != (3u << (h - 3))) ++bad;
        return std::pair<double, std::string>(bad, "3 * 2^(h-3) for h = 3..6, all (j,k)");
    });

    R.run("identities/doubling_transport", 3, "residual", tol, [&cfg, P] {
        auto r3 = identities::build_R(3, 3, 4).relation;
        auto r4 = identities::doubling_transport(r3);
        auto r5 = identities::doubling_transport(r4);
        auto direct = identities::build_R(5, 3, 4).relation;
        if (r5.coeffs != direct.coeffs)
            return std::pair<double, std::string>(1.0, "transport^2 differs from build_R(5,3,4)");
        PeriodMatrix tau = random_period_matrix(4, substream(cfg.seed, 80), 0.5, P);
        return std::pair<double, std::string>(identities::eigenvector_quartic_value(r4, tau, P).relative(),
                                              "transport^2 = build_R(5,3,4); residual at genus 4");
    });

    R.run("identities/negative_controls", 2, "exact", 0, [&cfg, P] {
        Rng rng(substream(cfg.seed, 90));
        CharOrder ord(2);
        int weak = 0;
        for (int it = 0; it < 10; ++it) {
            weilmat::QuarticRelation r;
            r.genus = 2;
            r.coeffs.assign(ord.even_list.size(), 0);
            do {
                for (auto& c : r.coeffs) c = static_cast<long long>(rng.next_below(7)) - 3;
            } while (weilmat::is_valid_relation(r));
            r.shift_a = Characteristic(2, static_cast<std::uint32_t>(rng.next_below(4)),
                                       static_cast<std::uint32_t>(rng.next_below(4)));
            r.shift_s = Characteristic(2, static_cast<std::uint32_t>(rng.next_below(4)),
                                       static_cast<std::uint32_t>(rng.next_below(4)));
            if (!identities::is_generically_nonvanishing(r)) continue;
            PeriodMatrix tau = random_period_matrix(2, substream(cfg.seed, 91) + it, 0.5, P);
            if (identities::eigenvector_quartic_value(r, tau, P).relative() <= 1e-5) ++weak;
        }
        return std::pair<double, std::string>(weak, "10 random non-eigenvectors stay above 1e-5");
    });
}

void suite_schottky(Runner& R) {
    const auto& cfg = R.cfg;
    int P = cfg.precision;
    double tol = std::pow(10.0, -(P - 10)) * cfg.tolerance_scale;

    R.run("schottky/lemma_SR_structural", 0, "exact", 0, [] {
        int bad = 0;
        for (int g : {4, 5, 6})
            for (int j = 3; j <= g; ++j)
                for (int k = j + 1; k <= g; ++k)
                    if (!schottky::structurally_equal(schottky::build_S(g, j, k),
                                                      schottky::build_SJ(identities::build_R(g - 1, j, k))))
                        ++bad;
        return std::pair<double, std::string>(bad, "build_S vs SJ(build_R), g = 4,5,6, all (j,k)");
    });

    for (int g : genus_or(cfg, {4, 5})) {
        if (g < 4 || g > 5) continue;
        R.run("schottky/branch_invariance", g, "residual", tol, [&cfg, g, P] {
            auto s = schottky::build_S(g, 3, 4);
            double worst = 0;
            for (int it = 0; it < 3; ++it) {
                PeriodMatrix tau = random_period_matrix(g, substream(cfg.seed, 100 + g) + it, 0.5, P);
                auto ref = schottky::evaluate_SJ(s, tau, P, cfg.branch_seed);
                for (std::uint64_t bs : {cfg.branch_seed + 1, cfg.branch_seed + 77}) {
                    auto v = schottky::evaluate_SJ(s, tau, P, bs);
                    HPComplex r = v.value.ratio(ref.value);
                    worst = std::max(worst, (r - HPComplex(1.0, 0.0, r.prec())).abs().to_double());
                }
            }
            return std::pair<double, std::string>(worst, "3 tau x 3 branch seeds");
        });
        R.run("schottky/diagonal_exact_zero", g, "exact", 0, [&cfg, g, P] {
            auto s = schottky::build_S(g, 3, g);
            int bad = 0;
            for (int it = 0; it < 5; ++it) {
                Rng rng(substream(cfg.seed, 110 + g) + it);
                mpfr_prec_t prec = bits_for_digits(P + 10);
                std::vector<HPComplex> t;
                for (int i = 0; i < g; ++i)
                    t.push_back(HPComplex(0.2 * rng.uniform_pm1(), 1.0 + rng.uniform(0, 1), prec));
                auto v = schottky::evaluate_SJ(s, theta::diagonal_period_matrix(t), P, cfg.branch_seed);
                if (!v.exact_zero || v.zero_anomaly) ++bad;
            }
            return std::pair<double, std::string>(bad, "5 random diagonal tau, flagged exact zeros");
        });
        R.run("schottky/monomial_cache_count", g, "exact", 0, [&cfg, g, P] {
            auto s = schottky::build_S(g, 3, 4);
            PeriodMatrix tau = random_period_matrix(g, substream(cfg.seed, 120 + g), 0.5, P);
            auto v = schottky::evaluate_SJ(s, tau, P, cfg.branch_seed);
            long long expect = 8LL * static_cast<long long>(s.terms.size());
            return std::pair<double, std::string>(static_cast<double>(std::llabs(v.distinct_thetas - expect)),
                                                  "distinct theta evaluations = 8 * terms");
        });
    }

    R.run("schottky/genus4_dual_path", 4, "residual", tol, [&cfg, P] {
        for (int it = 0; it < 5; ++it) {
            PeriodMatrix tau = random_period_matrix(4, substream(cfg.seed, 130) + it, 0.5, P);
            schottky::genus4_symmetrized_value(tau, P);  // throws on dual-path mismatch
        }
        return std::pair<double, std::string>(0.0, "product form vs symmetrized polynomial, 5 random tau");
    });
}

void suite_poincare(Runner& R) {
    const auto& cfg = R.cfg;
    int P = cfg.precision;

    R.run("poincare/symmetrized_oracle", 4, "residual", 1e-10, [&cfg] {
        Rng rng(substream(cfg.seed, 140));
        double worst = 0;
        for (int it = 0; it < 100; ++it) {
            std::vector<std::complex<double>> m(16, 0.0);
            auto at = [&](int a, int b) -> std::complex<double>& { return m[a * 4 + b]; };
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b) at(a, b) = at(b, a) = {rng.uniform_pm1() + 1.5, rng.uniform_pm1()};
            auto Pm = [&](int a, int b, int c, int d) { return at(a, b) * at(b, c) * at(c, d) * at(d, a); };
            std::complex<double> P1 = Pm(0, 1, 2, 3), P2 = Pm(0, 2, 3, 1), P3 = Pm(0, 3, 1, 2);
            std::complex<double> s1 = std::sqrt(P1), s2 = std::sqrt(P2), s3 = std::sqrt(P3);
            std::complex<double> brute = (s1 + s2 + s3) * (s1 + s2 - s3) * (s1 - s2 + s3) * (s1 - s2 - s3);
            std::complex<double> sym = P1 * P1 + P2 * P2 + P3 * P3 - 2.0 * (P1 * P2 + P1 * P3 + P2 * P3);
            worst = std::max(worst, std::abs(brute - sym) / std::abs(sym));
        }
        return std::pair<double, std::string>(worst, "branch product vs polynomial, 100 directions");
    });

    R.run("poincare/slope_genus4", 4, "slope", 0.05, [&cfg, P] {
        auto s = schottky::build_S(4, 3, 4);
        auto T = poincare::random_direction(4, substream(cfg.seed, 141), P);
        std::vector<double> ladder = {1e-2, std::pow(10.0, -2.5), 1e-3};
        auto fr = poincare::leading_order_fit(s, diag_entries(4, P, 1.0, 0.3), T, ladder, P, cfg.branch_seed);
        if (!fr.ok) throw std::runtime_error(fr.error);
        return std::pair<double, std::string>(std::fabs(fr.slope - 8.0),
                                              "fitted slope " + std::to_string(fr.slope) + " vs 8");
    });

    R.run("poincare/ratio_test_genus4", 4, "residual", 2e-2, [&cfg, P] {
        std::vector<poincare::Direction> dirs;
        for (int i = 0; i < 5; ++i) dirs.push_back(poincare::random_direction(4, substream(cfg.seed, 142) + i, P));
        auto rep = poincare::poincare_ratio_test(4, 3, 4, diag_entries(4, P, 1.0, 0.3), dirs, 1e-3, P);
        if (!rep.error.empty()) throw std::runtime_error(rep.error);
        return std::pair<double, std::string>(rep.max_pairwise_rel, "5 directions at eps = 1e-3");
    });

    R.run("poincare/on_locus_decay", 4, "exact", 0, [&cfg, P] {
        mpfr_prec_t prec = bits_for_digits(P + 10);
        poincare::Direction T;
        T.genus = 4;
        T.T.assign(16, HPComplex(prec));
        auto set = [&](int a, int b, double v) {
            T.T[a * 4 + b] = HPComplex(v, 0.0, prec);
            T.T[b * 4 + a] = HPComplex(v, 0.0, prec);
        };
        set(0, 1, 2);
        set(2, 3, 2);
        set(0, 3, 2);
        set(1, 2, 2);
        set(0, 2, 1);
        set(1, 3, 1);
        HPComplex q = poincare::poincare_symmetrized(poincare::PoincareQuadruple(1, 2, 3, 4), T);
        if (q.abs().to_double() > 1e-25) return std::pair<double, std::string>(1.0, "direction not on the locus");
        auto s = schottky::build_S(4, 3, 4);
        std::vector<double> ladder = {std::pow(10.0, -1.75), 1e-2, std::pow(10.0, -2.25)};
        auto fr = poincare::leading_order_fit(s, diag_entries(4, P, 1.0, 0.3), T, ladder, P, cfg.branch_seed);
        if (!fr.ok) throw std::runtime_error(fr.error);
        return std::pair<double, std::string>(fr.slope > 8.5 ? 0.0 : 1.0,
                                              "on-locus slope " + std::to_string(fr.slope) + " > 8.5");
    });

    R.run("poincare/ratio_prefactor_common_shift", 4, "residual", 5e-2, [&cfg, P] {
        // changing the diagonal entries rescales every rho(T) by a common factor
        std::vector<poincare::Direction> dirs;
        for (int i = 0; i < 2; ++i) dirs.push_back(poincare::random_direction(4, substream(cfg.seed, 147) + i, P));
        auto repA = poincare::poincare_ratio_test(4, 3, 4, diag_entries(4, P, 1.0, 0.3), dirs, 1e-3, P);
        auto repB = poincare::poincare_ratio_test(4, 3, 4, diag_entries(4, P, 1.4, 0.45), dirs, 1e-3, P);
        if (!repA.error.empty() || !repB.error.empty()) throw std::runtime_error(repA.error + repB.error);
        // per-direction rho_B/rho_A must not depend on the direction
        HPComplex rA = repA.ratios_vs_first[0], rB = repB.ratios_vs_first[0];
        double dev = (rB - rA).abs().to_double() / rA.abs().to_double();
        return std::pair<double, std::string>(dev, "theta prefactor shifts all directions by a common factor");
    });

    R.run("poincare/independence_rank_exact", 0, "exact", 0, [&cfg] {
        int bad = 0;
        for (int g = 4; g <= 8; ++g) {
            auto pt = poincare::random_rational_point(g, substream(cfg.seed, 143) + g);
            if (poincare::independence_rank_poincare(g, pt, true) != (g - 2) * (g - 3) / 2) ++bad;
        }
        return std::pair<double, std::string>(bad, "rank = (g-2)(g-3)/2 at random rational points, g = 4..8");
    });

    R.run("poincare/independence_S_genus4", 4, "exact", 0, [&cfg, P] {
        auto T = poincare::random_direction(4, substream(cfg.seed, 144), P);
        auto rep = poincare::independence_rank_S(4, diag_entries(4, P, 1.0, 0.3), T, 1e-3, P);
        if (!rep.error.empty()) throw std::runtime_error(rep.error);
        return std::pair<double, std::string>(rep.pass ? 0.0 : 1.0,
                                              "min singular " + std::to_string(rep.min_singular) + " > 0.5");
    });

    if (cfg.deep) {
        R.run("poincare/slope_genus5_deep", 5, "slope", 0.5, [&cfg, P] {
            int Pdeep = std::max(P, 120);
            auto s = schottky::build_S(5, 3, 4);
            auto T = poincare::random_direction(5, substream(cfg.seed, 145), Pdeep);
            std::vector<double> ladder = {1e-2, std::pow(10.0, -2.5), 1e-3};
            auto fr = poincare::leading_order_fit(s, diag_entries(5, Pdeep), T, ladder, Pdeep, cfg.branch_seed);
            if (!fr.ok) throw std::runtime_error(fr.error);
            return std::pair<double, std::string>(std::fabs(fr.slope - 64.0),
                                                  "fitted slope " + std::to_string(fr.slope) + " vs 64");
        });
        R.run("poincare/independence_S_genus5_deep", 5, "exact", 0, [&cfg, P] {
            int Pdeep = std::max(P, 120);
            auto T = poincare::random_direction(5, substream(cfg.seed, 146), Pdeep);
            auto rep = poincare::independence_rank_S(5, diag_entries(5, Pdeep), T, 1e-3, Pdeep);
            if (!rep.error.empty()) throw std::runtime_error(rep.error);
            return std::pair<double, std::string>(rep.pass ? 0.0 : 1.0,
                                                  "min singular " + std::to_string(rep.min_singular) + " > 0.5");
        });
    }
}

}  // namespace

VerificationReport run_suite(const SuiteConfig& cfg) {
    VerificationReport rep;
    rep.tool_version = kToolVersion;
    rep.config = cfg;
    if (cfg.jobs > 0) omp_set_num_threads(cfg.jobs);

    Runner R{cfg, rep.checks};
    auto t0 = Clock::now();
    bool any = false;
    auto want = [&](const char* name) { return cfg.suite == "all" || cfg.suite == name; };
    if (want("core")) {
        suite_core(R);
        any = true;
    }
    if (want("eigen")) {
        suite_eigen(R);
        any = true;
    }
    if (want("identities")) {
        suite_identities(R);
        any = true;
    }
    if (want("schottky")) {
        suite_schottky(R);
        any = true;
    }
    if (want("poincare")) {
        suite_poincare(R);
        any = true;
    }
    if (!any) throw std::invalid_argument("unknown suite '" + cfg.suite + "'");

    std::stable_sort(rep.checks.begin(), rep.checks.end(), [](const CheckResult& a, const CheckResult& b) {
        return std::tie(a.name, a.genus) < std::tie(b.name, b.genus);
    });
    rep.total_wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    return rep;
}

jsonio::json report_to_json(const VerificationReport& rep, bool include_timings) {
    using jsonio::json;
    json cfg{{"suite", rep.config.suite},
             {"genus", rep.config.genus},
             {"precision", rep.config.precision},
             {"guard", rep.config.guard},
             {"seed", rep.config.seed},
             {"tolerance_scale", rep.config.tolerance_scale},
             {"jobs", rep.config.jobs},
             {"deep", rep.config.deep},
             {"branch_seed", rep.config.branch_seed}};
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json jc{{"name", c.name},
                {"genus", c.genus},
                {"inputs_digest", c.inputs_digest},
                {"metric_kind", c.metric_kind},
                {"metric", c.metric},
                {"tolerance", c.tolerance},
                {"pass", c.pass},
                {"detail", c.detail}};
        if (include_timings) jc["wall_ms"] = c.wall_ms;
        checks.push_back(jc);
    }
    json out{{"tool_version", rep.tool_version}, {"config", cfg}, {"checks", checks}, {"pass", rep.all_pass()}};
    if (include_timings) out["total_wall_ms"] = rep.total_wall_ms;
    return out;
}

}  // namespace skt::suites
