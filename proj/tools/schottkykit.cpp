// Command-line driver: builds relation/identity catalogs, runs the named
// verification suites, evaluates identities at supplied period matrices, and
// runs the near-diagonal scaling analysis. Output is JSON (stdout or --out);
// a failed check exits nonzero. All randomness is derived from --seed, so
// reports are reproducible byte for byte apart from timings.

#include "schottkykit/poincare.hpp"
#include "schottkykit/rng.hpp"
#include "schottkykit/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace skt;
using jsonio::json;

namespace {

void emit(const json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot open output file: " + out);
        f << j.dump(2) << "\n";
    }
}

theta::PeriodMatrix load_tau(const std::string& path, int digits) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open tau file: " + path);
    json j;
    f >> j;
    auto tau = jsonio::period_matrix_from_json(j, digits);
    auto cert = theta::validate_period_matrix(tau);
    if (!cert.ok) throw std::runtime_error("invalid period matrix: " + cert.message);
    return tau;
}

struct JK {
    int j = 3, k = 4;
};

JK parse_jk(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError("--jk expects 'j,k'");
    return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
}

std::vector<HPComplex> seeded_diag(int g, std::uint64_t seed, int digits, double base = 2.0) {
    mpfr_prec_t prec = bits_for_digits(digits + 10);
    Rng rng(seed);
    std::vector<HPComplex> t;
    for (int i = 0; i < g; ++i)
        t.push_back(HPComplex(0.25 * rng.uniform_pm1(), base + 0.3 * i + 0.2 * (rng.uniform_pm1() + 1), prec));
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"schottkykit: numerical certification of theta-constant identities"};
    app.require_subcommand(1);

    suites::SuiteConfig cfg;
    std::string genus_csv;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--precision", cfg.precision, "working precision, decimal digits")
            ->envname("SCHOTTKYKIT_PRECISION");
        sub->add_option("--guard", cfg.guard, "guard digits for lattice truncation")->envname("SCHOTTKYKIT_GUARD");
        sub->add_option("--seed", cfg.seed, "master seed for all randomness")->envname("SCHOTTKYKIT_SEED");
        sub->add_option("--tolerance", cfg.tolerance_scale, "multiplier on every tolerance")
            ->envname("SCHOTTKYKIT_TOLERANCE");
        sub->add_option("--out", cfg.out, "write the JSON output to this file")->envname("SCHOTTKYKIT_OUT");
        sub->add_option("--jobs", cfg.jobs, "worker threads (0 = library default)")->envname("SCHOTTKYKIT_JOBS");
        sub->add_flag("--deep", cfg.deep, "include the long high-precision runs")->envname("SCHOTTKYKIT_DEEP");
        sub->add_option("--branch-seed", cfg.branch_seed, "square-root branch seed")
            ->envname("SCHOTTKYKIT_BRANCH_SEED");
    };

    // verify
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", cfg.suite, "core | eigen | identities | schottky | poincare | all")
        ->envname("SCHOTTKYKIT_SUITE");
    verify->add_option("--genus", genus_csv, "comma-separated genus list (suite defaults otherwise)");
    add_common(verify);

    // catalog
    std::string cat_kind = "R";
    int cat_genus = 4;
    auto* catalog = app.add_subcommand("catalog", "export relation / identity catalogs as JSON");
    catalog->add_option("--kind", cat_kind, "R | S | eigenbasis")->required();
    catalog->add_option("--genus", cat_genus, "genus of the catalog")->required();
    add_common(catalog);

    // eval
    std::string eval_identity, eval_tau_file;
    auto* eval = app.add_subcommand("eval", "evaluate an identity at a period matrix from a JSON file");
    eval->add_option("--identity", eval_identity, "R_jk or S_jk, e.g. R_34, S_35")->required();
    eval->add_option("--tau", eval_tau_file, "period matrix JSON file")->required();
    add_common(eval);

    // sj
    std::string sj_jk = "3,4", sj_tau_file;
    int sj_genus = 4;
    auto* sj = app.add_subcommand("sj", "evaluate a Schottky-Jung form S_jk");
    sj->add_option("--genus", sj_genus, "target genus")->required();
    sj->add_option("--jk", sj_jk, "indices 'j,k' with 3 <= j < k <= genus");
    sj->add_option("--tau", sj_tau_file, "period matrix JSON (default: seeded random)");
    add_common(sj);

    // expand
    int ex_genus = 4;
    std::string ex_jk = "3,4", ex_ladder = "1e-2,3.162e-3,1e-3";
    auto* expand = app.add_subcommand("expand", "near-diagonal scaling: slope fit and ratio test");
    expand->add_option("--genus", ex_genus, "genus (4 or 5)")->required();
    expand->add_option("--jk", ex_jk, "indices 'j,k'");
    expand->add_option("--ladder", ex_ladder, "comma-separated epsilon ladder");
    add_common(expand);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*verify) {
            if (!genus_csv.empty()) {
                size_t pos = 0;
                while (pos < genus_csv.size()) {
                    size_t comma = genus_csv.find(',', pos);
                    if (comma == std::string::npos) comma = genus_csv.size();
                    cfg.genus.push_back(std::stoi(genus_csv.substr(pos, comma - pos)));
                    pos = comma + 1;
                }
            }
            auto rep = suites::run_suite(cfg);
            emit(suites::report_to_json(rep), cfg.out);
            for (const auto& c : rep.checks)
                std::cerr << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " (genus " << c.genus << ") "
                          << c.detail << "\n";
            return rep.all_pass() ? 0 : 1;
        }

        if (*catalog) {
            json out{{"tool_version", suites::kToolVersion},
                     {"kind", cat_kind},
                     {"genus", cat_genus},
                     {"seed", cfg.seed},
                     {"precision", cfg.precision}};
            if (cat_kind == "R") {
                json rels = json::array();
                for (int j = 3; j <= cat_genus; ++j)
                    for (int k = j + 1; k <= cat_genus; ++k) {
                        auto r = identities::build_R(cat_genus - 1, j, k);
                        json jr = jsonio::relation_to_json(r.relation, &r.monomials);
                        jr["name"] = "R_" + std::to_string(j) + std::to_string(k);
                        rels.push_back(jr);
                    }
                out["relations"] = rels;
            } else if (cat_kind == "S") {
                json ids = json::array();
                for (int j = 3; j <= cat_genus; ++j)
                    for (int k = j + 1; k <= cat_genus; ++k) {
                        json js = jsonio::sj_identity_to_json(schottky::build_S(cat_genus, j, k));
                        js["name"] = "S_" + std::to_string(j) + std::to_string(k);
                        ids.push_back(js);
                    }
                out["identities"] = ids;
            } else if (cat_kind == "eigenbasis") {
                auto basis = weilmat::neg_eigenspace_basis(cat_genus);
                json cols = json::array();
                for (const auto& col : basis) cols.push_back(col);
                out["columns"] = cols;
                out["rank"] = ((1LL << (2 * cat_genus)) - 1) / 3;
            } else {
                throw CLI::ValidationError("--kind must be R, S or eigenbasis");
            }
            emit(out, cfg.out);
            return 0;
        }

        if (*eval) {
            if (eval_identity.size() < 4 || (eval_identity[0] != 'R' && eval_identity[0] != 'S') ||
                eval_identity[1] != '_')
                throw CLI::ValidationError("--identity must look like R_34 or S_34");
            int j = eval_identity[2] - '0', k = eval_identity[3] - '0';
            theta::PeriodMatrix tau = load_tau(eval_tau_file, cfg.precision);
            json out{{"tool_version", suites::kToolVersion},
                     {"identity", eval_identity},
                     {"genus", tau.genus},
                     {"precision", cfg.precision},
                     {"tau_ref", eval_tau_file}};
            if (eval_identity[0] == 'R') {
                auto r = identities::build_R(tau.genus, j, k);
                auto v = identities::evaluate_monomials(r.monomials, tau, cfg.precision);
                out["value"] = json::array({v.value.re.str(20), v.value.im.str(20)});
                out["max_monomial"] = v.max_monomial.str(20);
                out["relative_residual"] = v.relative();
                out["tolerance"] = std::pow(10.0, -(cfg.precision - 10)) * cfg.tolerance_scale;
                out["pass"] = v.relative() <= std::pow(10.0, -(cfg.precision - 10)) * cfg.tolerance_scale;
            } else {
                auto s = schottky::build_S(tau.genus, j, k);
                auto v = schottky::evaluate_SJ(s, tau, cfg.precision, cfg.branch_seed);
                out["branch_seed"] = cfg.branch_seed;
                out["value"] = jsonio::log_complex_to_json(v.value, 20);
                out["exact_zero"] = v.exact_zero;
                out["pass"] = !v.zero_anomaly;
            }
            emit(out, cfg.out);
            return out.value("pass", true) ? 0 : 1;
        }

        if (*sj) {
            JK jk = parse_jk(sj_jk);
            theta::PeriodMatrix tau = sj_tau_file.empty()
                                          ? theta::random_period_matrix(sj_genus, cfg.seed, 0.5, cfg.precision)
                                          : load_tau(sj_tau_file, cfg.precision);
            if (tau.genus != sj_genus) throw std::runtime_error("tau genus does not match --genus");
            auto s = schottky::build_S(sj_genus, jk.j, jk.k);
            auto v = schottky::evaluate_SJ(s, tau, cfg.precision, cfg.branch_seed);
            json out{{"identity", "S_" + std::to_string(jk.j) + std::to_string(jk.k)},
                     {"genus", sj_genus},
                     {"tau_ref", sj_tau_file.empty() ? ("seeded:" + std::to_string(cfg.seed)) : sj_tau_file},
                     {"exact_zero", v.exact_zero},
                     {"precision", cfg.precision},
                     {"branch_seed", cfg.branch_seed}};
            json lv = jsonio::log_complex_to_json(v.value, 30);
            out["log_magnitude"] = lv["log_magnitude"];
            out["phase"] = lv["phase"];
            emit(out, cfg.out);
            return 0;
        }

        if (*expand) {
            JK jk = parse_jk(ex_jk);
            std::vector<double> ladder;
            {
                size_t pos = 0;
                while (pos < ex_ladder.size()) {
                    size_t comma = ex_ladder.find(',', pos);
                    if (comma == std::string::npos) comma = ex_ladder.size();
                    ladder.push_back(std::stod(ex_ladder.substr(pos, comma - pos)));
                    pos = comma + 1;
                }
            }
            int P = cfg.deep && ex_genus >= 5 ? std::max(cfg.precision, 120) : cfg.precision;
            auto s = schottky::build_S(ex_genus, jk.j, jk.k);
            auto t = seeded_diag(ex_genus, substream(cfg.seed, 1), P);
            auto T = poincare::random_direction(ex_genus, substream(cfg.seed, 2), P);
            auto fr = poincare::leading_order_fit(s, t, T, ladder, P, cfg.branch_seed);
            double expect = static_cast<double>(poincare::leading_degree(ex_genus));

            json jt = json::array();
            for (const auto& ti : t) {
                json cell = json::array();
                cell.push_back(ti.re.str(20));
                cell.push_back(ti.im.str(20));
                jt.push_back(cell);
            }
            json out{{"identity", "S_" + std::to_string(jk.j) + std::to_string(jk.k)},
                     {"genus", ex_genus},
                     {"t", jt},
                     {"T_seed", substream(cfg.seed, 2)},
                     {"ladder", ladder},
                     {"precision", P},
                     {"slope", fr.ok ? json(fr.slope) : json(nullptr)},
                     {"slope_expected", expect},
                     {"log_coefficient", fr.ok ? json(fr.log_coefficient) : json(nullptr)},
                     {"error", fr.error}};

            bool pass = fr.ok && std::fabs(fr.slope - expect) <= (ex_genus >= 5 ? 0.5 : 0.05);
            json ratios = json::array();
            if (ex_genus == 4) {
                std::vector<poincare::Direction> dirs;
                for (int i = 0; i < 5; ++i)
                    dirs.push_back(poincare::random_direction(4, substream(cfg.seed, 3) + i, P));
                auto rep = poincare::poincare_ratio_test(4, jk.j, jk.k, t, dirs, 1e-3, P);
                if (rep.error.empty()) {
                    for (const auto& r : rep.ratios_vs_first)
                        ratios.push_back(json::array({r.re.to_double(), r.im.to_double()}));
                    out["ratio_max_pairwise_rel"] = rep.max_pairwise_rel;
                    pass = pass && rep.pass;
                } else {
                    out["ratio_error"] = rep.error;
                    pass = false;
                }
            }
            out["ratios"] = ratios;
            out["pass"] = pass;
            emit(out, cfg.out);
            return pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
