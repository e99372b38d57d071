// Command-line surface over the auxiliary-equation toolkit: catalog
// inspection, auxiliary-solution verification, the full travelling-wave
// pipeline, curve sampling for figure data, and the reported-coefficient
// cross-check. Exit codes: 0 success/pass, 1 verification fail, 2 usage
// error, 3 numeric failure.
#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "auxwave/bernoulli.hpp"
#include "auxwave/io.hpp"
#include "auxwave/parse.hpp"
#include "auxwave/wave.hpp"

using namespace auxwave;
namespace fs = std::filesystem;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "1", "-2.5", "1+2i", "-i", "2i" (convenience complex literal), or any
// constant expression the grammar accepts ("1+2*I", "1/4", "exp(1)").
Expr scalar_expr(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!isspace((unsigned char)c)) s += c;
    if (s.empty()) throw UsageError("empty parameter value");
    bool literal = s.back() == 'i' &&
                   s.find_first_not_of("0123456789.eE+-i") == std::string::npos &&
                   s.find('i') == s.size() - 1;
    if (literal) {
        std::string body = s.substr(0, s.size() - 1);
        size_t split = std::string::npos;
        for (size_t k = body.size(); k-- > 1;) {
            if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' &&
                body[k - 1] != 'E') {
                split = k;
                break;
            }
        }
        std::string re = split == std::string::npos ? "" : body.substr(0, split);
        std::string im = split == std::string::npos ? body : body.substr(split);
        if (im.empty() || im == "+") im = "1";
        if (im == "-") im = "-1";
        Expr imag_part = mul(parse(im), Expr::imag());
        return re.empty() ? imag_part : add(parse(re), imag_part);
    }
    return parse(s);
}

CNum scalar_cnum(const std::string& raw) {
    EvalCtx empty;
    return eval(scalar_expr(raw), empty);
}

// name=value pairs separated by commas
std::map<std::string, std::string> split_params(const std::string& csv) {
    std::map<std::string, std::string> out;
    size_t pos = 0;
    while (pos < csv.size()) {
        size_t comma = csv.find(',', pos);
        std::string item = csv.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        pos = comma == std::string::npos ? csv.size() : comma + 1;
        if (item.empty()) continue;
        size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw UsageError("bad parameter '" + item + "', expected name=value");
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

double tol_or_env(const CLI::Option* opt, double value, double fallback) {
    if (opt->count()) return value;
    if (const char* s = std::getenv("AUXWAVE_TOL")) {
        char* end = nullptr;
        double v = std::strtod(s, &end);
        if (end && *end == '\0' && v > 0) return v;
    }
    return fallback;
}

bool complex_valued(const std::vector<Sample>& samples) {
    for (const auto& s : samples) {
        if (s.excluded) continue;
        if (std::abs(s.value.imag()) > 1e-9 * (1.0 + std::abs(s.value.real())))
            return true;
    }
    return false;
}

void write_out(const std::string& path, const std::string& content) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    atomic_write_file(path, content);
}

// ---------------------------------------------------------------- catalog

struct CatalogArgs {
    int show_index = 0;
    std::string export_path;
};

int run_catalog_list() {
    for (const auto& c : catalog())
        std::printf("case %2d: P = %s, Q = %s%s\n", c.index,
                    render(c.eq.P).c_str(), render(c.eq.Q).c_str(),
                    c.sol.form == SolutionForm::Quadrature ? "  [quadrature z]"
                                                           : "");
    return kExitPass;
}

int run_catalog_show(int k) {
    const CatalogEntry& c = catalog_case(k); // out_of_range -> usage error
    std::printf("case %d\n", c.index);
    std::printf("P = %s\n", render(c.eq.P).c_str());
    std::printf("Q = %s\n", render(c.eq.Q).c_str());
    std::printf("z = %s\n", render(c.sol.z).c_str());
    std::printf("form = %s\n",
                c.sol.form == SolutionForm::Closed ? "closed" : "quadrature");
    std::printf("notes = %s\n", c.sol.notes.c_str());
    std::printf("C1 correspondence: %s\n", c.c1_map.c_str());
    return kExitPass;
}

int run_catalog_export(const std::string& path) {
    write_out(path, catalog_json());
    std::printf("wrote %s\n", path.c_str());
    return kExitPass;
}

// -------------------------------------------------------------- verify-aux

struct VerifyArgs {
    int case_index = 0;
    std::string params;
    std::vector<double> interval;
    int npoints = 200;
    double tol = 1e-8;
    std::string out;
};

int run_verify_aux(const VerifyArgs& a, double tol) {
    const CatalogEntry& c = catalog_case(a.case_index);
    Bindings b;
    for (const auto& [name, val] : split_params(a.params))
        b[name] = scalar_cnum(val);

    std::set<std::string> free_syms;
    collect_symbols(c.sol.z, free_syms);
    collect_symbols(c.eq.P, free_syms);
    collect_symbols(c.eq.Q, free_syms);
    std::string defaulted;
    for (const char* name : {"A", "B", "C", "C1"})
        if (free_syms.count(name) && !b.count(name)) {
            b[name] = CNum(1.0, 0.0);
            defaulted += defaulted.empty() ? name : std::string(", ") + name;
        }
    if (!defaulted.empty())
        std::printf("defaulted to 1: %s\n", defaulted.c_str());

    double lo, hi;
    if (a.interval.size() == 2) {
        lo = a.interval[0];
        hi = a.interval[1];
        if (!(lo < hi)) throw UsageError("interval must satisfy lo < hi");
    } else {
        PoleFreeWindow w = find_pole_free_interval(c.sol.z, b);
        if (!w.found)
            throw NumericError("no pole-free window of width >= 2 in [-6, 6]");
        lo = w.lo;
        hi = w.hi;
        std::printf("auto-selected window [%g, %g]\n", lo, hi);
    }

    ResidualReport rep = verify_aux(c.eq, c.sol, b, lo, hi, a.npoints, tol);

    EvalCtx ctx;
    ctx.bindings = b;
    bool cplx = complex_valued(
        sample_curve(c.sol.z, "xi", lo, hi, std::min(a.npoints, 41), ctx));

    std::printf("case %d: P = %s, Q = %s\n", c.index, render(c.eq.P).c_str(),
                render(c.eq.Q).c_str());
    if (!c.sol.notes.empty()) std::printf("notes: %s\n", c.sol.notes.c_str());
    std::printf("window [%g, %g], %d points, tol %g\n", lo, hi, a.npoints, tol);
    std::printf("max |residual| = %.6e (mean %.6e) at xi = %g, %zu excluded\n",
                rep.max_abs, rep.mean_abs, rep.worst_point,
                rep.excluded.size());
    if (cplx) std::printf("z is complex-valued on this window\n");
    std::printf("%s\n", rep.pass ? "PASS" : "FAIL");

    std::string j = residual_report_json(rep);
    if (!a.out.empty()) {
        write_out(a.out, j);
        std::printf("wrote %s\n", a.out.c_str());
    } else {
        std::fputs(j.c_str(), stdout);
    }
    return rep.pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- pipeline

struct PipelineArgs {
    std::string pde = "b-equation";
    std::string b = "-2";
    int aux_case = 0;
    std::string aux_p, aux_q;
    std::string ode = "mechanical";
    std::string strategy = "constant";
    long long order = 0;
    std::string params;
    std::vector<double> interval{-5.0, 5.0};
    int npoints = 101;
    double tol = 1e-6;
    std::string out = "auxwave-out";
};

int run_pipeline(const PipelineArgs& a, double tol) {
    if (a.pde != "b-equation")
        throw UsageError("unsupported --pde '" + a.pde + "'");
    if ((a.aux_case != 0) == (!a.aux_p.empty() || !a.aux_q.empty()))
        throw UsageError("pick exactly one of --aux-case or --aux-p/--aux-q");
    if (a.aux_p.empty() != a.aux_q.empty())
        throw UsageError("--aux-p and --aux-q go together");

    ReduceMode mode;
    if (a.ode == "mechanical") mode = ReduceMode::Mechanical;
    else if (a.ode == "paper-eq8") mode = ReduceMode::PaperEq8;
    else throw UsageError("--ode must be mechanical or paper-eq8");

    PDEProblem pde = b_equation(parse(a.b));
    TravellingODE ode = reduce_travelling(pde, mode); // rejects paper-eq8 b != -2

    long long N = a.order;
    if (N == 0) {
        BalanceResult bal = balance(ode);
        N = bal.N;
        std::printf("balance: N = %lld\n", N);
    } else {
        std::printf("ansatz order overridden: N = %lld\n", N);
    }

    AuxEquation aux;
    AuxSolution zsol;
    std::string label;
    if (a.aux_case != 0) {
        const CatalogEntry& c = catalog_case(a.aux_case);
        aux = c.eq;
        zsol = c.sol;
        label = "case-" + std::to_string(a.aux_case);
    } else {
        aux = AuxEquation{parse(a.aux_p), parse(a.aux_q), 2};
        zsol = solve_general(aux);
        label = "P=" + render(aux.P) + "; Q=" + render(aux.Q);
    }

    SolveOptions opts;
    for (const auto& [name, val] : split_params(a.params))
        opts.params[name] = scalar_expr(val);

    std::set<std::string> free_syms;
    collect_symbols(aux.P, free_syms);
    collect_symbols(aux.Q, free_syms);
    free_syms.insert("mu");
    std::string defaulted;
    for (const char* name : {"A", "B", "C", "mu"})
        if (free_syms.count(name) && !opts.params.count(name)) {
            opts.params[name] = Expr::num(1);
            defaulted += defaulted.empty() ? name : std::string(", ") + name;
        }
    if (!defaulted.empty())
        std::printf("parameters defaulted to 1: %s\n", defaulted.c_str());

    CoeffSystem sys = derive_system(ode, make_ansatz(N), aux);
    sys.aux_label = label;

    fs::create_directories(a.out);
    auto under_out = [&](const char* name) {
        return (fs::path(a.out) / name).string();
    };
    atomic_write_file(under_out("system.txt"), export_system_text(sys));
    atomic_write_file(under_out("system.json"), export_system_sidecar(sys));

    SolveStrategy strat;
    if (a.strategy == "constant") strat = SolveStrategy::Constant;
    else if (a.strategy == "pointwise") strat = SolveStrategy::Pointwise;
    else if (a.strategy == "export") strat = SolveStrategy::Export;
    else throw UsageError("--strategy must be constant, pointwise or export");

    if (strat == SolveStrategy::Pointwise && a.interval.size() == 2) {
        opts.xi_lo = a.interval[0];
        opts.xi_hi = a.interval[1];
    }

    SolveResult r = solve_system(sys, strat, opts);
    atomic_write_file(under_out("solutions.json"), solution_json(sys, r));
    for (const auto& n : r.notes) std::printf("note: %s\n", n.c_str());

    if (a.aux_case == 1 && mode == ReduceMode::PaperEq8) {
        atomic_write_file(under_out("crosscheck.txt"),
                          reported_case1_crosscheck().text);
        std::printf("wrote %s (reported-coefficient reproduction record)\n",
                    under_out("crosscheck.txt").c_str());
    }

    int exit_code = kExitPass;
    if (strat == SolveStrategy::Constant && r.solved) {
        Bindings compose_bind;
        for (const auto& [name, e] : opts.params) {
            EvalCtx empty;
            compose_bind[name] = eval(e, empty);
        }
        std::set<std::string> zsyms;
        collect_symbols(zsol.z, zsyms);
        if (zsyms.count("C1") && !compose_bind.count("C1")) {
            compose_bind["C1"] = CNum(1.0, 0.0);
            std::printf("integration constant defaulted: C1 = 1\n");
        }
        double mu = compose_bind.count("mu") ? compose_bind["mu"].real() : 1.0;

        nlohmann::ordered_json reports = nlohmann::ordered_json::array();
        for (size_t i = 0; i < r.assignments.size(); ++i) {
            const Assignment& asg = r.assignments[i];
            CNum c = asg.values.count("c") ? asg.values.at("c") : CNum(0, 0);
            ComposedSolution sol =
                compose(asg, zsol, c, mu, compose_bind, "solver");
            sol.tolerance = tol;
            ResidualReport rep = verify_solution(
                ode, sol, a.interval[0], a.interval[1], a.npoints, tol);
            std::printf(
                "assignment %zu: max |residual| = %.6e on %zu points -> %s\n",
                i, rep.max_abs, rep.n_points, rep.pass ? "PASS" : "FAIL");
            if (!rep.pass) exit_code = kExitFail;
            reports.push_back(
                {{"assignment", i},
                 {"report",
                  nlohmann::ordered_json::parse(residual_report_json(rep))}});
        }
        atomic_write_file(under_out("residuals.json"), reports.dump(2) + "\n");
    } else if (strat == SolveStrategy::Constant && !r.solved) {
        std::printf("system not solved; exported for external tooling\n");
    }

    std::printf("artifacts in %s\n", a.out.c_str());
    return exit_code;
}

// ------------------------------------------------------------------ sample

struct SampleArgs {
    std::string expr_file, solution_file;
    std::vector<double> interval;
    int npoints = 0;
    std::string out;
};

int run_sample(const SampleArgs& a) {
    if (a.expr_file.empty() == a.solution_file.empty())
        throw UsageError("pick exactly one of --expr-file or --solution-file");
    const std::string& path = a.expr_file.empty() ? a.solution_file
                                                  : a.expr_file;
    Recipe rec = load_recipe(path);
    if (!a.expr_file.empty() && !rec.has("expr"))
        throw UsageError("--expr-file recipe has no expr= key");
    if (!a.solution_file.empty() && !rec.has("aux_case"))
        throw UsageError("--solution-file recipe has no aux_case= key");

    RecipeCurve curve = recipe_curve(rec);
    double lo = curve.lo, hi = curve.hi;
    if (a.interval.size() == 2) {
        lo = a.interval[0];
        hi = a.interval[1];
    } else if (!curve.has_interval) {
        throw UsageError("no interval in recipe or flags");
    }
    if (!(lo < hi)) throw UsageError("interval must satisfy lo < hi");
    int n = a.npoints > 0 ? a.npoints : curve.npoints;
    if (n < 2) throw UsageError("npoints must be >= 2");
    std::string out = !a.out.empty() ? a.out : curve.out;
    if (out.empty()) throw UsageError("no output path in recipe or flags");

    EvalCtx ctx;
    ctx.bindings = curve.bindings;
    std::vector<Sample> samples = sample_curve(curve.u, "xi", lo, hi, n, ctx);
    size_t excluded = 0;
    for (const auto& s : samples) excluded += s.excluded;
    if (excluded == samples.size())
        throw NumericError("every sample point was excluded");

    write_out(out, csv_from_samples(samples));
    std::printf("wrote %zu rows to %s (%zu excluded)%s\n",
                samples.size() - excluded, out.c_str(), excluded,
                complex_valued(samples) ? ", complex-valued" : "");
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"auxiliary-equation travelling-wave toolkit"};
    app.require_subcommand(1);

    CatalogArgs cat;
    CLI::App* catalog_cmd =
        app.add_subcommand("catalog", "inspect the auxiliary-equation catalog");
    catalog_cmd->require_subcommand(1);
    CLI::App* cat_list = catalog_cmd->add_subcommand("list", "one row per case");
    CLI::App* cat_show =
        catalog_cmd->add_subcommand("show", "P, Q, z and validity notes");
    cat_show->add_option("index", cat.show_index, "case index (1..20)")
        ->required();
    CLI::App* cat_export =
        catalog_cmd->add_subcommand("export", "write the catalog as JSON");
    cat_export->add_option("--out", cat.export_path, "output file")->required();

    VerifyArgs va;
    CLI::App* verify =
        app.add_subcommand("verify-aux", "residual-check a catalog solution");
    verify->add_option("--case", va.case_index, "case index (1..20)")
        ->required();
    verify->add_option("--params", va.params, "name=value, comma separated");
    verify->add_option("--interval", va.interval, "xi window (default: auto)")
        ->expected(2);
    verify->add_option("--npoints", va.npoints, "grid size")
        ->check(CLI::Range(2, 1000000));
    CLI::Option* vtol = verify->add_option("--tol", va.tol, "pass threshold");
    verify->add_option("--out", va.out, "write the JSON report here");

    PipelineArgs pa;
    CLI::App* pipe =
        app.add_subcommand("pipeline", "reduce, balance, derive, solve, verify");
    pipe->add_option("--pde", pa.pde, "PDE family (b-equation)");
    pipe->add_option("--b", pa.b, "family parameter b (exact, e.g. -2 or 1/3)");
    pipe->add_option("--aux-case", pa.aux_case, "catalog auxiliary equation");
    pipe->add_option("--aux-p", pa.aux_p, "custom P(xi)");
    pipe->add_option("--aux-q", pa.aux_q, "custom Q(xi)");
    pipe->add_option("--ode", pa.ode, "mechanical | paper-eq8");
    pipe->add_option("--strategy", pa.strategy, "constant | pointwise | export");
    pipe->add_option("--order", pa.order, "override the balance order N");
    pipe->add_option("--params", pa.params, "name=value, comma separated");
    pipe->add_option("--interval", pa.interval,
                     "verification window (also the pointwise grid)")
        ->expected(2);
    pipe->add_option("--npoints", pa.npoints, "verification grid size")
        ->check(CLI::Range(2, 1000000));
    CLI::Option* ptol = pipe->add_option("--tol", pa.tol, "residual threshold");
    pipe->add_option("--out", pa.out, "artifact directory");

    SampleArgs sa;
    CLI::App* sample =
        app.add_subcommand("sample", "sample a recipe curve to CSV");
    sample->add_option("--expr-file", sa.expr_file, "expression recipe");
    sample->add_option("--solution-file", sa.solution_file, "solution recipe");
    sample->add_option("--interval", sa.interval, "override the recipe window")
        ->expected(2);
    sample->add_option("--npoints", sa.npoints, "override the recipe grid");
    sample->add_option("--out", sa.out, "override the recipe output path");

    std::string cc_out;
    CLI::App* cc = app.add_subcommand(
        "crosscheck", "reported Case-1 coefficient reproduction record");
    cc->add_option("--out", cc_out, "also write the report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cat_list->parsed()) return run_catalog_list();
        if (cat_show->parsed()) return run_catalog_show(cat.show_index);
        if (cat_export->parsed()) return run_catalog_export(cat.export_path);
        if (verify->parsed())
            return run_verify_aux(va, tol_or_env(vtol, va.tol, 1e-8));
        if (pipe->parsed())
            return run_pipeline(pa, tol_or_env(ptol, pa.tol, 1e-6));
        if (sample->parsed()) return run_sample(sa);
        if (cc->parsed()) {
            const CrosscheckReport& rep = reported_case1_crosscheck();
            std::fputs(rep.text.c_str(), stdout);
            if (!cc_out.empty()) {
                write_out(cc_out, rep.text);
                std::printf("wrote %s\n", cc_out.c_str());
            }
            return kExitPass;
        }
        return kExitUsage;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const UnboundSymbol& e) {
        std::fprintf(stderr, "error: %s (missing --params entry?)\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return kExitNumeric;
    }
}
