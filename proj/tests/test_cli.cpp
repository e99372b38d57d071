#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "schema_check.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

#ifndef AUXWAVE_CLI_PATH
#error "AUXWAVE_CLI_PATH must be defined"
#endif
#ifndef AUXWAVE_SOURCE_DIR
#error "AUXWAVE_SOURCE_DIR must be defined"
#endif

static const std::string kCli = AUXWAVE_CLI_PATH;
static const std::string kSrc = AUXWAVE_SOURCE_DIR;

struct RunResult {
    int code = -1;
    std::string output; // stdout + stderr
};

static RunResult run_cli(const std::string& args,
                         const std::string& env = "") {
    std::string cmd = env + kCli + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    RunResult r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.output.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

static json load_schema(const char* name) {
    return json::parse(slurp(fs::path(kSrc) / "schemas" / name));
}

static void check_schema(const char* schema_name, const json& value) {
    std::string err;
    bool ok = schemacheck::validate(load_schema(schema_name), value, err);
    INFO(schema_name << ": " << err);
    CHECK(ok);
}

static fs::path work_dir() {
    fs::path d = fs::current_path() / "test_cli_out";
    fs::create_directories(d);
    return d;
}

TEST_CASE("catalog commands and exit codes") {
    RunResult list = run_cli("catalog list");
    CHECK(list.code == 0);
    size_t rows = 0;
    for (char c : list.output) rows += c == '\n';
    CHECK(rows == 20);

    RunResult show = run_cli("catalog show 4");
    CHECK(show.code == 0);
    CHECK(show.output.find("P = A") != std::string::npos);
    CHECK(show.output.find("Q = B") != std::string::npos);
    CHECK(show.output.find("z = A/(-B + A*C1*exp(-A*xi))") != std::string::npos);

    CHECK(run_cli("catalog show 21").code == 2);
    CHECK(run_cli("catalog show 0").code == 2);
    CHECK(run_cli("nonsense").code == 2);
    CHECK(run_cli("catalog").code == 2);
}

TEST_CASE("catalog export: schema-valid and byte-stable") {
    fs::path a = work_dir() / "catalog_a.json";
    fs::path b = work_dir() / "catalog_b.json";
    CHECK(run_cli("catalog export --out " + a.string()).code == 0);
    CHECK(run_cli("catalog export --out " + b.string()).code == 0);
    std::string ja = slurp(a);
    CHECK(ja == slurp(b));
    json parsed = json::parse(ja);
    CHECK(parsed.size() == 20);
    check_schema("catalog.schema.json", parsed);
}

TEST_CASE("verify-aux: logistic, quadrature-near-pole, complex cases") {
    CHECK(run_cli("verify-aux --case 4 --params A=1,B=-1,C1=1 --interval -5 5")
              .code == 0);

    // explicit window straddling the pole: near-pole points are excluded,
    // the rest must clear 1e-8
    RunResult c1 = run_cli(
        "verify-aux --case 1 --params A=0.25,B=1,C1=1 --interval -2 2");
    CHECK(c1.code == 0);
    CHECK(c1.output.find("PASS") != std::string::npos);
    CHECK(c1.output.find("noise floor") != std::string::npos);

    RunResult c11 = run_cli("verify-aux --case 11 --params A=1,B=1,C=1,C1=1");
    CHECK(c11.code == 0);
    CHECK(c11.output.find("auto-selected window") != std::string::npos);
    CHECK(c11.output.find("complex-valued") != std::string::npos);

    fs::path rep = work_dir() / "verify4.json";
    CHECK(run_cli("verify-aux --case 4 --params A=1,B=-1,C1=1 --interval -5 5 "
                  "--out " +
                  rep.string())
              .code == 0);
    check_schema("residual_report.schema.json", json::parse(slurp(rep)));
}

TEST_CASE("verify-aux: AUXWAVE_TOL environment override") {
    RunResult r = run_cli(
        "verify-aux --case 4 --params A=1,B=-1,C1=1 --interval -5 5",
        "AUXWAVE_TOL=1e-30 ");
    CHECK(r.code == 1); // nothing clears 1e-30
    RunResult flag = run_cli(
        "verify-aux --case 4 --params A=1,B=-1,C1=1 --interval -5 5 "
        "--tol 1e-10",
        "AUXWAVE_TOL=1e-30 ");
    CHECK(flag.code == 0); // explicit flag beats the environment
}

TEST_CASE("pipeline constant: artifacts, schemas, byte-stable reruns") {
    fs::path d1 = work_dir() / "pipe_a";
    fs::path d2 = work_dir() / "pipe_b";
    std::string common =
        "pipeline --b -2 --aux-case 4 --strategy constant --params "
        "A=1,B=1,mu=1 --out ";
    RunResult r = run_cli(common + d1.string());
    CHECK(r.code == 0);
    CHECK(r.output.find("balance: N = 2") != std::string::npos);
    CHECK(run_cli(common + d2.string()).code == 0);

    for (const char* name :
         {"system.txt", "system.json", "solutions.json", "residuals.json"}) {
        CAPTURE(name);
        CHECK(slurp(d1 / name) == slurp(d2 / name));
    }
    check_schema("system.schema.json", json::parse(slurp(d1 / "system.json")));
    json sol = json::parse(slurp(d1 / "solutions.json"));
    check_schema("solution.schema.json", sol);
    CHECK(sol["solved"] == true);
    CHECK(!sol["assignments"].empty());
    json res = json::parse(slurp(d1 / "residuals.json"));
    check_schema("residuals.schema.json", res);
    REQUIRE(res.size() == sol["assignments"].size());
    for (const auto& row : res) CHECK(row["report"]["pass"] == true);
}

TEST_CASE("pipeline export: text format for the xi-dependent case") {
    fs::path d = work_dir() / "pipe_export";
    CHECK(run_cli("pipeline --b -2 --aux-case 1 --strategy export --out " +
                  d.string())
              .code == 0);
    std::string text = slurp(d / "system.txt");
    CHECK(text.rfind("eq[1] := ", 0) == 0);
    size_t lines = 0, closes = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        lines += text[i] == '\n';
        if (text.compare(i, 6, " = 0;\n") == 0) ++closes;
    }
    CHECK(lines == 6);
    CHECK(closes == 6);
}

TEST_CASE("pipeline pointwise paper-eq8: reproduction record") {
    fs::path d1 = work_dir() / "pipe_pw_a";
    fs::path d2 = work_dir() / "pipe_pw_b";
    std::string common =
        "pipeline --b -2 --aux-case 1 --ode paper-eq8 --strategy pointwise "
        "--out ";
    CHECK(run_cli(common + d1.string()).code == 0);
    CHECK(run_cli(common + d2.string()).code == 0);
    CHECK(slurp(d1 / "crosscheck.txt") == slurp(d2 / "crosscheck.txt"));
    CHECK(slurp(d1 / "crosscheck.txt").find("reproduction record") !=
          std::string::npos);
    json sol = json::parse(slurp(d1 / "solutions.json"));
    check_schema("solution.schema.json", sol);
    CHECK(sol["ode_mode"] == "paper-eq8");
    CHECK(sol["pointwise"].size() == 9);
}

TEST_CASE("pipeline usage errors") {
    CHECK(run_cli("pipeline --b -3 --aux-case 4 --ode paper-eq8").code == 2);
    CHECK(run_cli("pipeline --b -2 --aux-case 4 --aux-p A --aux-q B").code == 2);
    CHECK(run_cli("pipeline --b -2").code == 2);
    CHECK(run_cli("pipeline --b -2 --aux-case 4 --strategy bogus").code == 2);
}

TEST_CASE("sample: recipes to CSV, finite and byte-stable") {
    fs::path fig1a = work_dir() / "fig1_a.csv";
    fs::path fig1b = work_dir() / "fig1_b.csv";
    std::string rec1 = (fs::path(kSrc) / "docs/recipes/figure1.recipe").string();
    std::string rec2 =
        (fs::path(kSrc) / "docs/recipes/figure2a.recipe").string();

    CHECK(run_cli("sample --solution-file " + rec1 + " --out " +
                  fig1a.string())
              .code == 0);
    CHECK(run_cli("sample --solution-file " + rec1 + " --out " +
                  fig1b.string())
              .code == 0);
    std::string csv1 = slurp(fig1a);
    CHECK(csv1 == slurp(fig1b));
    CHECK(csv1.rfind("xi,re,im\n", 0) == 0);
    size_t rows = 0;
    for (char c : csv1) rows += c == '\n';
    CHECK(rows == 212); // header + 211 samples, none excluded

    fs::path fig2 = work_dir() / "fig2a.csv";
    CHECK(run_cli("sample --expr-file " + rec2 + " --out " + fig2.string())
              .code == 0);
    std::istringstream in(slurp(fig2));
    std::string line;
    std::getline(in, line);
    CHECK(line == "xi,re,im");
    size_t nrows = 0;
    while (std::getline(in, line)) {
        double xi, re, im;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &xi, &re, &im) == 3);
        CHECK(std::isfinite(re));
        CHECK(std::isfinite(im));
        CHECK(std::abs(im) < 1e-12);
        ++nrows;
    }
    CHECK(nrows == 111);

    CHECK(run_cli("sample --expr-file " + rec1 + " --solution-file " + rec2)
              .code == 2);
    CHECK(run_cli("sample --expr-file " + rec1).code == 2);
    CHECK(run_cli("sample").code == 2);
}

TEST_CASE("crosscheck command is deterministic") {
    RunResult a = run_cli("crosscheck");
    RunResult b = run_cli("crosscheck");
    CHECK(a.code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.find("reported eq6") != std::string::npos);
}
