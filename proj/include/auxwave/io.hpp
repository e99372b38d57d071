#pragma once

#include <map>
#include <string>
#include <vector>

#include "auxwave/numeric.hpp"
#include "auxwave/wave.hpp"

namespace auxwave {

// Writes content to a sibling temp file, then renames it over path, so a
// crash mid-write never leaves a truncated artifact behind.
void atomic_write_file(const std::string& path, const std::string& content);

// "xi,re,im" header, 17 significant digits, ascending rows; excluded samples
// are skipped (their reasons belong in the residual report, not the curve).
std::string csv_from_samples(const std::vector<Sample>& samples);

// Flat key=value config ('#' starts a comment, blank lines ignored).
struct Recipe {
    std::map<std::string, std::string> kv;

    bool has(const std::string& key) const { return kv.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback = "") const {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    }
};

Recipe parse_recipe_text(const std::string& text);
Recipe load_recipe(const std::string& path);

// A sampling job assembled from a recipe. Two flavors:
//   expr flavor:     expr = <expression in xi>
//   solution flavor: aux_case = <k>, g0..gN = <scalar | expression |
//                    "reported-case1">, giving u = sum g_i z^i with z the
//                    catalog solution of case k.
// Every other key except interval/npoints/out must be a numeric scalar and
// becomes a binding (complex literals use I, e.g. 1+2*I).
struct RecipeCurve {
    Expr u;
    Bindings bindings;
    bool has_interval = false;
    double lo = 0, hi = 0;
    int npoints = 0; // 0 when the recipe does not pin it
    std::string out; // suggested output path, may be empty
};
RecipeCurve recipe_curve(const Recipe& r);

std::string catalog_json();
std::string residual_report_json(const ResidualReport& r);
std::string solution_json(const CoeffSystem& sys, const SolveResult& r);

} // namespace auxwave
