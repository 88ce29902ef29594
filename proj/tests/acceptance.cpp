// One line per acceptance criterion.  Exit status is the number of failures.
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "qdrg/report.hpp"

using namespace qdrg;

namespace {

const std::vector<std::string> kGraphs{"hamming:3,3", "hamming:3,4", "johnson:6,3",
                                       "johnson:7,3", "grassmann:2,4,2", "cycle:8"};

struct Runs {
  std::map<std::string, Report> base;    // vertex 0, full pipeline, exact
  std::map<std::string, Report> sweep;   // extra vertices, tmod only
  std::map<std::string, std::string> sweep_vertex;
};

Report run_spec(const std::string& spec, const std::string& vertex, std::set<std::string> checks, std::uint64_t seed = 1) {
  RunConfig c;
  c.spec = spec;
  c.vertex = vertex;
  c.domain = "exact";
  c.seed = seed;
  c.checks = std::move(checks);
  return run(c);
}

const Check* find(const Report& r, const std::string& anchor) {
  for (const auto& c : r.checks) {
    if (c.anchor == anchor) return &c;
  }
  return nullptr;
}

// Present, passing, and with zero residual when `exact_zero`.
bool holds(const Report& r, const std::string& anchor, std::string& why, bool exact_zero = false) {
  const Check* c = find(r, anchor);
  if (c == nullptr) {
    why += " missing " + anchor + " on " + r.data.value("spec", "?") + ";";
    return false;
  }
  if (!c->pass || (exact_zero && c->residual != 0.0)) {
    why += " " + anchor + " failed on " + r.data.value("spec", "?") + " (" + c->detail + ");";
    return false;
  }
  return true;
}

bool stage_clean(const Report& r, std::string& why) {
  bool ok = true;
  for (const auto& c : r.checks) {
    if (c.anchor.rfind("stage-", 0) == 0) {
      why += " " + c.anchor + ": " + c.detail + ";";
      ok = false;
    }
  }
  return ok;
}

int failures = 0;

void report(int n, bool pass, const std::string& what, const std::string& detail) {
  std::cout << "criterion " << n << ": " << (pass ? "PASS" : "FAIL") << "  " << what << "  [" << detail << "]"
            << std::endl;
  if (!pass) ++failures;
}

std::vector<const Report*> module_runs(const Runs& runs) {
  std::vector<const Report*> out;
  for (const auto& [k, r] : runs.base) out.push_back(&r);
  for (const auto& [k, r] : runs.sweep) out.push_back(&r);
  return out;
}

long count_modules(const std::vector<const Report*>& rs) {
  long n = 0;
  for (const auto* r : rs) {
    for (const auto& v : r->data["vertices"]) {
      if (v.contains("modules")) n += v["modules"]["count"].get<long>();
    }
  }
  return n;
}

Json strip_timings(const Report& r) {
  Json j = r.to_json();
  j.erase("timings");
  return j;
}

}  // namespace

int main() {
  Runs runs;
  std::mt19937_64 rng(20240601);
  for (const auto& g : kGraphs) {
    runs.base.emplace(g, run_spec(g, "0", all_check_groups()));
    const long n = runs.base.at(g).data["graph"]["order"].get<long>();
    std::string v = "all";
    if (g.rfind("cycle", 0) != 0) {
      v = std::to_string(std::uniform_int_distribution<long>(1, n - 1)(rng));
    }
    runs.sweep_vertex[g] = v;
    runs.sweep.emplace(g, run_spec(g, v, {"tmod"}));
  }
  const auto mods = module_runs(runs);

  {
    std::string why;
    bool ok = true;
    for (const auto& [g, r] : runs.base) {
      ok = r.data["domain"] == "exact" && ok;
      for (const char* a : {"distance-partition", "intersection-products", "primitive-idempotents",
                            "dual-idempotents", "dual-distance-products"}) {
        ok = holds(r, a, why, true) && ok;
      }
    }
    report(1, ok, "Bose-Mesner and dual axioms, exact, zero residual, 6 graphs", why.empty() ? "all residuals 0" : why);
  }
  {
    std::string why, counts;
    bool ok = true;
    for (const auto& [g, r] : runs.base) {
      const auto n = r.data["bose_mesner"]["q_polynomial_orderings"].size();
      counts += g + ":" + std::to_string(n) + " ";
      ok = n >= 1 && holds(r, "q-polynomial-ordering", why) && ok;
    }
    report(2, ok, "at least one Q-polynomial ordering per graph", "orderings " + counts + why);
  }
  {
    std::string why, where;
    bool ok = true;
    for (const auto* r : mods) {
      ok = stage_clean(*r, why) && holds(*r, "sharpness", why) && ok;
      ok = (r->data["domain"] != "exact" || holds(*r, "exact-recheck", why)) && ok;
    }
    for (const auto& [g, v] : runs.sweep_vertex) where += g + "@0," + v + " ";
    report(3, ok, "rho_0 = 1 for every irreducible module",
           std::to_string(count_modules(mods)) + " modules; vertices " + where + why);
  }
  {
    std::string why;
    bool ok = true;
    for (const auto* r : mods) ok = holds(*r, "shape-laws", why) && ok;
    report(4, ok, "shape symmetric and unimodal, dim E*_{r+i}W = dim E_{s+i}W, d = d*",
           std::to_string(count_modules(mods)) + " modules" + why);
  }
  {
    std::string why, dims;
    bool ok = true;
    for (const auto* r : mods) {
      for (const char* a : {"wedderburn-sum", "commutant-dimension", "primary-module"}) ok = holds(*r, a, why) && ok;
    }
    for (const auto& [g, r] : runs.base) {
      const auto& m = r.data["vertices"][0]["modules"];
      dims += g + " " + std::to_string(m["sum_squares"].get<long>()) + "=" + std::to_string(m["dim_T"].get<long>()) + " ";
    }
    report(5, ok, "sum n_i^2 = dim T, dim commutant = sum mult_i^2, primary multiplicity 1 and dimension D+1",
           dims + why);
  }
  {
    std::string why;
    bool ok = true;
    long mu = 0, mu_ok = 0, phi = 0, phi_ok = 0;
    for (const auto* r : mods) {
      ok = holds(*r, "irreducible-end-dimension", why) && holds(*r, "isomorphism-criteria", why) && ok;
      for (const auto& v : r->data["vertices"]) {
        const auto& c = v["modules"]["criteria"];
        mu += c["mu_pairs"].get<long>();
        mu_ok += c["mu_agree"].get<long>();
        phi += c["phi_pairs"].get<long>();
        phi_ok += c["phi_agree"].get<long>();
      }
    }
    ok = ok && mu == mu_ok && phi == phi_ok && mu + phi > 0;
    report(6, ok, "End(W) = 1, isomorphism test agrees with mu and phi criteria",
           "mu " + std::to_string(mu_ok) + "/" + std::to_string(mu) + ", phi " + std::to_string(phi_ok) + "/" +
               std::to_string(phi) + why);
  }
  {
    std::string why;
    bool ok = true;
    double worst = 0.0;
    for (const auto& [g, r] : runs.base) {
      ok = holds(r, "corner-algebras", why, true) && ok;
      for (const auto& c : r.data["vertices"][0]["terwilliger"]["corners"]) {
        worst = std::max({worst, c["commutator"].get<double>(), c["asymmetry"].get<double>()});
      }
    }
    std::ostringstream os;
    os << "max commutator/asymmetry residual " << worst << why;
    report(7, ok && worst == 0.0, "E*_1, E_1, E*_D, E_D corners commutative and symmetric", os.str());
  }
  {
    std::string why;
    bool ok = true;
    int n = 0;
    for (const auto& [g, r] : runs.base) {
      const auto& t = r.data["vertices"][0]["terwilliger"];
      for (const auto& c : t["identities"]) {
        ok = holds(r, c["anchor"].get<std::string>(), why, true) && ok;
        ++n;
      }
      for (const auto& c : t["generation"]) {
        ok = holds(r, c["anchor"].get<std::string>(), why) && ok;
        ++n;
      }
      ok = t["identities"].size() == 12 && t["generation"].size() == 6 && ok;
    }
    report(8, ok, "reduction and ideal identities, corner generation dimensions, exact",
           std::to_string(n) + " checks" + why);
  }
  {
    std::string why;
    auto classes = [&](const Report& r) {
      const auto& v = r.data["vertices"][0]["schemes"]["first"];
      return v.value("is_scheme", false) ? v["classes"].get<int>() : -1;
    };
    const int h = classes(runs.base.at("hamming:3,3"));
    const int j = classes(runs.base.at("johnson:7,3"));
    RunConfig c;
    c.spec = "grassmann:2,5,2";
    c.domain = "exact";
    c.checks = {"scheme"};
    c.cells = {"first"};
    const int q = classes(run(c));
    bool ok = h == 3 && j == 4 && q == 5;
    ok = holds(runs.base.at("hamming:3,3"), "last-subconstituent-model", why) && ok;
    ok = holds(runs.base.at("johnson:7,3"), "last-subconstituent-model", why) && ok;
    const int j6 = classes(runs.base.at("johnson:6,3"));
    const int q4 = classes(runs.base.at("grassmann:2,4,2"));
    report(9, ok, "subconstituent schemes: 3 / 4 / 5 classes, last subconstituent models",
           "hamming:3,3 " + std::to_string(h) + ", johnson:7,3 " + std::to_string(j) + ", grassmann:2,5,2 " +
               std::to_string(q) + "; also johnson:6,3 " + std::to_string(j6) + ", grassmann:2,4,2 " +
               std::to_string(q4) + "; H(3,2) and J(4,1) models" + why);
  }
  {
    bool ok = true;
    std::string why;
    for (const char* g : {"johnson:6,3", "hamming:3,3", "cycle:8"}) {
      const auto a = run_spec(g, "0", all_check_groups(), 5);
      const auto b = run_spec(g, "0", all_check_groups(), 5);
      if (strip_timings(a) != strip_timings(b)) {
        ok = false;
        why += std::string(" same-seed JSON differs on ") + g + ";";
      }
      const auto c = run_spec(g, "0", all_check_groups(), 12345);
      if (a.data["vertices"][0]["modules"]["classes"] != c.data["vertices"][0]["modules"]["classes"]) {
        ok = false;
        why += std::string(" class table depends on seed on ") + g + ";";
      }
    }
    report(10, ok, "same seed gives identical JSON, seeds 5 and 12345 give identical class tables",
           why.empty() ? "3 graphs" : why);
  }
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria FAILED") << std::endl;
  return failures;
}
