#include "auxwave/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "auxwave/bernoulli.hpp"
#include "auxwave/parse.hpp"

namespace auxwave {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::ordered_json cnum_json(const CNum& v) {
    return {{"re", v.real()}, {"im", v.imag()}};
}

} // namespace

void atomic_write_file(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out.write(content.data(), (std::streamsize)content.size());
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("rename failed: " + path);
    }
}

std::string csv_from_samples(const std::vector<Sample>& samples) {
    std::string out = "xi,re,im\n";
    for (const auto& s : samples) {
        if (s.excluded) continue;
        out += fmt17(s.x);
        out += ',';
        out += fmt17(s.value.real());
        out += ',';
        out += fmt17(s.value.imag());
        out += '\n';
    }
    return out;
}

Recipe parse_recipe_text(const std::string& text) {
    Recipe r;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("recipe line " + std::to_string(lineno) +
                                     ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("recipe line " + std::to_string(lineno) +
                                     ": empty key");
        r.kv[key] = val;
    }
    return r;
}

Recipe load_recipe(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read recipe: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_recipe_text(buf.str());
}

RecipeCurve recipe_curve(const Recipe& r) {
    RecipeCurve out;
    static const std::set<std::string> structural = {"expr", "aux_case",
                                                     "interval", "npoints",
                                                     "out"};
    auto is_series_key = [](const std::string& k) {
        if (k.size() < 2 || k[0] != 'g') return false;
        return k.find_first_not_of("0123456789", 1) == std::string::npos;
    };
    auto scalar = [](const std::string& key, const std::string& val) {
        try {
            EvalCtx empty;
            return eval(parse(val), empty);
        } catch (const std::exception& e) {
            throw std::runtime_error("recipe key '" + key +
                                     "' is not a numeric scalar: " + e.what());
        }
    };

    if (r.has("expr")) {
        out.u = parse(r.get("expr"));
    } else if (r.has("aux_case")) {
        int k = 0;
        try {
            k = std::stoi(r.get("aux_case"));
        } catch (const std::exception&) {
            throw std::runtime_error("recipe aux_case must be an integer");
        }
        Expr z = catalog_case(k).sol.z;
        long long top = -1;
        for (const auto& [key, val] : r.kv) {
            (void)val;
            if (is_series_key(key))
                top = std::max(top, (long long)std::stoll(key.substr(1)));
        }
        if (top < 0)
            throw std::runtime_error(
                "solution recipe needs series coefficients g0..gN");
        Expr u = Expr::num(0);
        for (long long i = 0; i <= top; ++i) {
            std::string key = "g" + std::to_string(i);
            if (!r.has(key))
                throw std::runtime_error("unbound coefficient " + key);
            std::string val = r.get(key);
            Expr gi = val == "reported-case1" ? reported_case1_g2() : parse(val);
            u = add(u, mul(gi, powi(z, i)));
        }
        out.u = normalize(u);
    } else {
        throw std::runtime_error("recipe needs either expr= or aux_case=");
    }

    for (const auto& [key, val] : r.kv) {
        if (structural.count(key)) continue;
        if (is_series_key(key) && !r.has("expr")) {
            // scalar series values double as bindings so a reported block
            // referencing g0 sees the pinned value; expressions fold in above
            try {
                EvalCtx empty;
                out.bindings[key] = eval(parse(val), empty);
            } catch (const std::exception&) {
            }
            continue;
        }
        out.bindings[key] = scalar(key, val);
    }

    if (r.has("interval")) {
        std::istringstream iv(r.get("interval"));
        if (!(iv >> out.lo >> out.hi) || !(out.lo < out.hi))
            throw std::runtime_error("recipe interval must be 'lo hi', lo < hi");
        out.has_interval = true;
    }
    if (r.has("npoints")) {
        try {
            out.npoints = std::stoi(r.get("npoints"));
        } catch (const std::exception&) {
            out.npoints = 0;
        }
        if (out.npoints < 2)
            throw std::runtime_error("recipe npoints must be an integer >= 2");
    }
    out.out = r.get("out");
    return out;
}

std::string catalog_json() {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : catalog()) {
        nlohmann::ordered_json e;
        e["index"] = c.index;
        e["P"] = render(c.eq.P);
        e["Q"] = render(c.eq.Q);
        e["z"] = render(c.sol.z);
        e["form"] = c.sol.form == SolutionForm::Closed ? "closed" : "quadrature";
        e["notes"] = c.sol.notes;
        arr.push_back(std::move(e));
    }
    return arr.dump(2) + "\n";
}

std::string residual_report_json(const ResidualReport& r) {
    nlohmann::ordered_json j;
    j["max_abs"] = r.max_abs;
    j["mean_abs"] = r.mean_abs;
    j["worst_point"] = r.worst_point;
    j["n_points"] = r.n_points;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["excluded"] = nlohmann::ordered_json::array();
    for (const auto& e : r.excluded)
        j["excluded"].push_back({{"x", e.x}, {"reason", e.reason}});
    j["per_term"] = nlohmann::ordered_json::array();
    for (const auto& [term, mx] : r.per_term)
        j["per_term"].push_back({{"term", term}, {"max_abs", mx}});
    return j.dump(2) + "\n";
}

std::string solution_json(const CoeffSystem& sys, const SolveResult& r) {
    nlohmann::ordered_json j;
    j["solved"] = r.solved;
    j["ode_mode"] = sys.ode_mode;
    j["aux_case"] = sys.aux_label;
    j["unknowns"] = sys.unknowns;
    j["parameters"] = sys.parameters;
    auto assignment_json = [](const Assignment& a) {
        nlohmann::ordered_json out;
        nlohmann::ordered_json vals;
        for (const auto& [name, v] : a.values) vals[name] = cnum_json(v);
        out["values"] = std::move(vals);
        out["residual"] = a.residual;
        return out;
    };
    j["assignments"] = nlohmann::ordered_json::array();
    for (const auto& a : r.assignments)
        j["assignments"].push_back(assignment_json(a));
    j["pointwise"] = nlohmann::ordered_json::array();
    for (const auto& rec : r.pointwise) {
        nlohmann::ordered_json p;
        p["xi"] = rec.xi;
        p["assignments"] = nlohmann::ordered_json::array();
        for (const auto& a : rec.assignments)
            p["assignments"].push_back(assignment_json(a));
        j["pointwise"].push_back(std::move(p));
    }
    j["notes"] = r.notes;
    return j.dump(2) + "\n";
}

} // namespace auxwave
