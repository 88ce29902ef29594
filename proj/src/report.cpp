#include "qdrg/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

namespace qdrg {

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::stod(buf);
}

void RunConfig::validate() const {
  tol.validate();
  for (const auto& c : checks) {
    if (!all_check_groups().count(c)) throw UsageError("unknown check group '" + c + "' (bm, dual, talg, tmod, scheme)");
  }
  for (const auto& c : cells) {
    if (c != "first" && c != "last") throw UsageError("unknown cell '" + c + "' (first, last)");
  }
  if (domain != "exact" && domain != "float" && domain != "auto") {
    throw UsageError("unknown domain '" + domain + "' (exact, float, auto)");
  }
}

std::vector<int> parse_ordering(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad ordering '" + text + "': expected comma-separated indices");
    }
  }
  if (out.empty()) throw UsageError("empty ordering");
  return out;
}

void apply_tolerance(ToleranceContext& ctx, const std::string& key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string::npos) throw UsageError("bad tolerance '" + key_value + "': expected key=value");
  const std::string key = key_value.substr(0, eq);
  double value = 0.0;
  try {
    value = std::stod(key_value.substr(eq + 1));
  } catch (const std::exception&) {
    throw UsageError("bad tolerance value in '" + key_value + "'");
  }
  if (key == "rank") {
    ctx.rank_threshold = value;
  } else if (key == "cluster") {
    ctx.cluster_width = value;
  } else if (key == "residual") {
    ctx.residual_bound = value;
  } else {
    throw UsageError("unknown tolerance '" + key + "' (rank, cluster, residual)");
  }
}

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Json Report::to_json() const {
  Json j = data;
  Json cs = Json::array();
  for (const auto& c : checks) {
    cs.push_back(Json{{"anchor", c.anchor},
                      {"statement", c.statement},
                      {"pass", c.pass},
                      {"residual", round12(c.residual)},
                      {"detail", c.detail}});
  }
  j["checks"] = cs;
  j["status"] = pass() ? "pass" : "fail";
  j["timings"] = timings;
  return j;
}

Report Report::from_json(const Json& j) {
  Report r;
  if (!j.is_object() || !j.contains("schema_version")) throw UsageError("report JSON lacks schema_version");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "checks" || it.key() == "status" || it.key() == "timings") continue;
    r.data[it.key()] = it.value();
  }
  if (j.contains("checks")) {
    for (const auto& c : j.at("checks")) {
      r.checks.push_back(Check{c.at("anchor").get<std::string>(), c.at("statement").get<std::string>(),
                               c.at("pass").get<bool>(), c.at("residual").get<double>(),
                               c.at("detail").get<std::string>()});
    }
  }
  if (j.contains("timings")) r.timings = j.at("timings");
  return r;
}

int exit_code(const Report& report) { return report.pass() ? 0 : 1; }

void emit_json(const Report& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write JSON to '" + path + "'");
  out << report.to_json().dump(2) << '\n';
  if (!out) throw UsageError("write failed for '" + path + "'");
}

Report load_golden(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
  return Report::from_json(j);
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return round12(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
}

template <class S>
Json scalar_json(const S& x) {
  if constexpr (is_exact_v<S>) {
    return x.to_json_string();
  } else {
    return round12(x);
  }
}

template <class S>
bool within(double res, const ToleranceContext& ctx) {
  return is_exact_v<S> ? res == 0.0 : res <= ctx.residual_bound;
}

class Scoreboard {
 public:
  void add(const std::string& anchor, const std::string& statement, bool pass, double residual = 0.0,
           const std::string& detail = {}) {
    auto it = index_.find(anchor);
    if (it == index_.end()) {
      index_.emplace(anchor, list_.size());
      list_.push_back(Check{anchor, statement, pass, round12(residual), pass ? std::string{} : detail});
      return;
    }
    Check& c = list_[it->second];
    c.pass = c.pass && pass;
    c.residual = std::max(c.residual, round12(residual));
    if (!pass && !detail.empty()) c.detail += (c.detail.empty() ? "" : "; ") + detail;
  }
  void merge(const Scoreboard& other) {
    for (const auto& c : other.list_) add(c.anchor, c.statement, c.pass, c.residual, c.detail);
  }
  const std::vector<Check>& list() const { return list_; }

 private:
  std::vector<Check> list_;
  std::map<std::string, std::size_t> index_;
};

template <class S>
Mat<S> ones(Index n) {
  return Mat<S>::Constant(n, n, S(1));
}

template <class S>
void bose_mesner_checks(const IntersectionData& data, const BoseMesnerData<S>& bm, const ToleranceContext& ctx,
                        Scoreboard& sb) {
  const int d = bm.diameter;
  const Index n = bm.order;
  Mat<S> sum = Mat<S>::Zero(n, n);
  for (const auto& a : bm.A) sum += a;
  const double part = std::max(residual<S>(sum, ones<S>(n)), residual<S>(bm.A[0], Mat<S>::Identity(n, n)));
  sb.add("distance-partition", "A_0 = I, sum_i A_i = J", within<S>(part, ctx), part);

  double prod = 0.0;
  for (int i = 0; i <= d; ++i) {
    for (int j = i; j <= d; ++j) {
      Mat<S> rhs = Mat<S>::Zero(n, n);
      for (int h = 0; h <= d; ++h) {
        if (data(h, i, j) != 0) rhs += S(data(h, i, j)) * bm.A[static_cast<std::size_t>(h)];
      }
      prod = std::max(prod, residual<S>(multiply<S>(bm.A[static_cast<std::size_t>(i)], bm.A[static_cast<std::size_t>(j)]), rhs));
    }
  }
  sb.add("intersection-products", "A_i A_j = sum_h p^h_ij A_h", within<S>(prod, ctx), prod);

  Mat<S> esum = Mat<S>::Zero(n, n), spectral = Mat<S>::Zero(n, n);
  double idem = 0.0;
  for (int i = 0; i <= d; ++i) {
    const auto is = static_cast<std::size_t>(i);
    esum += bm.E[is];
    spectral += bm.theta[is] * bm.E[is];
    for (int j = 0; j <= d; ++j) {
      const Mat<S> ee = multiply<S>(bm.E[is], bm.E[static_cast<std::size_t>(j)]);
      idem = std::max(idem, i == j ? residual<S>(ee, bm.E[is]) : max_abs<S>(ee));
    }
  }
  idem = std::max({idem, residual<S>(esum, Mat<S>::Identity(n, n)), residual<S>(spectral, bm.A[1]),
                   residual<S>(bm.E[0], Mat<S>(ones<S>(n) / S(static_cast<long>(n))))});
  sb.add("primitive-idempotents", "sum_i E_i = I, E_i E_j = delta_ij E_i, E_0 = |X|^-1 J, A = sum_i theta_i E_i",
         within<S>(idem, ctx), idem);

  double worst = 0.0;
  for (const auto& qh : bm.krein) {
    for (const auto& qi : qh) {
      for (const auto& q : qi) worst = std::min(worst, ScalarTraits<S>::to_double(q));
    }
  }
  const bool nonneg = is_exact_v<S> ? worst >= 0.0 : worst >= -ctx.residual_bound;
  sb.add("krein-nonnegative", "q^h_ij >= 0", nonneg, -worst);

  std::vector<int> identity(static_cast<std::size_t>(d + 1));
  for (int i = 0; i <= d; ++i) identity[static_cast<std::size_t>(i)] = i;
  const bool qpoly = is_q_polynomial_ordering(bm.krein, identity);
  sb.add("q-polynomial-ordering",
         "q^h_ij = 0 when one of h, i, j exceeds the sum of the other two, nonzero when it equals it",
         qpoly, 0.0, qpoly ? "" : "selected ordering is not Q-polynomial");
}

template <class S>
void dual_checks(const IntersectionData& data, const BoseMesnerData<S>& bm, const DualData<S>& dual,
                 const ToleranceContext& ctx, Scoreboard& sb) {
  const int d = bm.diameter;
  const Index n = bm.order;
  Mat<S> esum = Mat<S>::Zero(n, n), spectral = Mat<S>::Zero(n, n), asum = Mat<S>::Zero(n, n);
  double idem = 0.0;
  for (int i = 0; i <= d; ++i) {
    const auto is = static_cast<std::size_t>(i);
    esum += dual.Estar[is];
    spectral += dual.theta_star[is] * dual.Estar[is];
    asum += dual.Astar[is];
    for (int j = 0; j <= d; ++j) {
      const Mat<S> ee = multiply<S>(dual.Estar[is], dual.Estar[static_cast<std::size_t>(j)]);
      idem = std::max(idem, i == j ? residual<S>(ee, dual.Estar[is]) : max_abs<S>(ee));
    }
  }
  idem = std::max({idem, residual<S>(esum, Mat<S>::Identity(n, n)), residual<S>(spectral, dual.Astar1())});
  sb.add("dual-idempotents", "sum_i E*_i = I, E*_i E*_j = delta_ij E*_i, A* = sum_i theta*_i E*_i",
         within<S>(idem, ctx), idem);

  double prod = std::max(residual<S>(dual.Astar[0], Mat<S>::Identity(n, n)),
                         residual<S>(asum, Mat<S>(S(static_cast<long>(n)) * dual.Estar[0])));
  for (int i = 0; i <= d; ++i) {
    for (int j = i; j <= d; ++j) {
      Mat<S> rhs = Mat<S>::Zero(n, n);
      for (int h = 0; h <= d; ++h) {
        rhs += bm.krein[static_cast<std::size_t>(h)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
               dual.Astar[static_cast<std::size_t>(h)];
      }
      prod = std::max(prod, residual<S>(multiply<S>(dual.Astar[static_cast<std::size_t>(i)],
                                                    dual.Astar[static_cast<std::size_t>(j)]),
                                        rhs));
    }
  }
  sb.add("dual-distance-products", "A*_0 = I, sum_i A*_i = |X| E*_0, A*_i A*_j = sum_h q^h_ij A*_h",
         within<S>(prod, ctx), prod);

  const auto tri = verify_triple_products(data, bm, dual, ctx);
  sb.add("triple-products", "E*_i A_h E*_j = 0 iff p^h_ij = 0, E_i A*_h E_j = 0 iff q^h_ij = 0", tri.ok(), 0.0,
         tri.ok() ? "" : tri.violations.front());
}

template <class S>
Json dimension_json(const std::vector<DimensionCheck>& dims) {
  Json out = Json::array();
  for (const auto& c : dims) {
    out.push_back(Json{{"anchor", c.anchor}, {"statement", c.description}, {"lhs", c.lhs}, {"rhs", c.rhs}});
  }
  return out;
}

template <class S>
Json scheme_json(const SchemeVerdict& v) {
  Json j{{"is_scheme", v.is_scheme}, {"classes", v.classes()}, {"relation_sizes", v.relation_sizes()}};
  if (!v.is_scheme) j["failure"] = v.failure;
  if (v.is_scheme) j["p"] = v.p;
  return j;
}

struct VertexResult {
  Json data;
  Json timings;
  Scoreboard sb;
};

template <class S>
VertexResult run_vertex(const RunConfig& cfg, const GraphSpec& spec, const Graph& g, const IntersectionData& data,
                        const BoseMesnerData<S>& bm, Index x) {
  const ToleranceContext& ctx = cfg.tol;
  const auto& want = cfg.checks;
  VertexResult out;
  out.data["vertex"] = x;
  out.data["label"] = g.labels()[static_cast<std::size_t>(x)];
  out.timings["vertex"] = x;
  std::string stage = "dual";
  try {
    auto t0 = Clock::now();
    const auto dual = build_dual(g, bm, x, ctx);
    Json sizes = Json::array(), ts = Json::array();
    for (Index s : dual.sizes) sizes.push_back(s);
    for (const auto& v : dual.theta_star) ts.push_back(scalar_json(v));
    out.data["subconstituent_sizes"] = sizes;
    out.data["dual_eigenvalues"] = ts;
    if (want.count("dual")) dual_checks(data, bm, dual, ctx, out.sb);
    out.timings["dual_ms"] = ms_since(t0);

    const bool need_t = want.count("talg") || want.count("tmod") || want.count("scheme");
    if (!need_t) return out;
    stage = "talg";
    t0 = Clock::now();
    const auto t = terwilliger_algebra(g, bm, dual, ctx);
    const int dd = bm.diameter;
    Json tj{{"dim_T", t.dim()}};
    if (want.count("talg")) {
      const auto& cert = t.certificate;
      const bool closed = cert.closed && cert.transpose_closed && cert.contains_unit;
      out.sb.add("T-closure", "T closed under products and transpose, I in T", closed, cert.max_residual);
      std::vector<Mat<S>> all = t.basis;
      for (const auto& a : bm.A) all.push_back(a);
      for (const auto& e : dual.Estar) all.push_back(e);
      const bool contains = matrix_set_rank<S>(all, ctx) == t.dim() && t.dim() >= 2 * dd + 1;
      out.sb.add("T-contains-M-and-M*", "A_i, E*_j in T, dim T >= 2D+1", contains);

      const auto corners = corner_algebras(t, bm, dual, ctx);
      const auto suite = check_corners(corners, ctx);
      Json cj = Json::array();
      double comm = 0.0, asym = 0.0;
      for (std::size_t i = 0; i < suite.names.size(); ++i) {
        cj.push_back(Json{{"name", suite.names[i]},
                          {"dim", suite.dims[i]},
                          {"commutator", round12(suite.commutator[i])},
                          {"asymmetry", round12(suite.asymmetry[i])}});
        comm = std::max(comm, suite.commutator[i]);
        asym = std::max(asym, suite.asymmetry[i]);
      }
      tj["corners"] = cj;
      out.sb.add("corner-algebras", "E*_1TE*_1, E_1TE_1, E*_DTE*_D, E_DTE_D are commutative and symmetric",
                 suite.commutative && suite.symmetric, std::max(comm, asym));
      out.sb.add("local-symmetry", "E*_i M E*_i and E_i M* E_i consist of symmetric matrices",
                 local_symmetry(bm, dual, ctx));

      const auto gen = verify_corner_generation(corners, bm, dual, ctx);
      tj["generation"] = dimension_json<S>(gen);
      for (const auto& c : gen) {
        out.sb.add(c.anchor, c.description, c.pass(), 0.0,
                   std::to_string(c.lhs) + " != " + std::to_string(c.rhs));
      }
      const auto ids = verify_identities(data, bm, dual, ctx);
      Json ij = Json::array();
      for (const auto& c : ids) {
        ij.push_back(Json{{"anchor", c.anchor}, {"identity", c.identity}, {"residual", round12(c.residual)}, {"pass", c.pass}});
        out.sb.add(c.anchor, c.identity, c.pass, c.residual);
      }
      tj["identities"] = ij;
    }
    out.data["terwilliger"] = tj;
    out.timings["talg_ms"] = ms_since(t0);

    if (want.count("tmod")) {
      stage = "tmod";
      t0 = Clock::now();
      const auto st = module_setting(t, bm, dual);
      const auto comm = commutant<double>(st.generators, ctx);
      const auto dec = decompose_standard_module(st, comm, ctx, cfg.seed);
      const auto w = wedderburn_report(dec, dd);

      Json table = Json::array();
      bool sharp = true, shape = true, ends = true, exact_ok = true;
      int rechecked = 0;
      for (const auto& m : dec.modules) {
        Json mj{{"class", m.cls}, {"dim", m.dim()}, {"r", m.r}, {"s", m.s}, {"d", m.d}, {"shape", m.shape}};
        if (m.mu) mj["mu"] = round12(*m.mu);
        if (m.phi) {
          Json ph = Json::array();
          for (double v : *m.phi) ph.push_back(round12(v));
          mj["phi"] = ph;
        }
        mj["end_dim"] = m.end_dim;
        const auto ex = exact_recheck(m, bm, dual);
        mj["exact_checked"] = ex ? Json(*ex) : Json(nullptr);
        if (ex) {
          ++rechecked;
          exact_ok = exact_ok && *ex;
        }
        table.push_back(mj);
        sharp = sharp && m.shape.front() == 1;
        ends = ends && m.end_dim == 1;
        bool laws = m.d == m.dual_d && m.shape == m.dual_shape;
        for (int i = 0; i <= m.d; ++i) {
          laws = laws && m.shape[static_cast<std::size_t>(i)] == m.shape[static_cast<std::size_t>(m.d - i)];
        }
        for (int i = 1; i <= m.d / 2; ++i) {
          laws = laws && m.shape[static_cast<std::size_t>(i - 1)] <= m.shape[static_cast<std::size_t>(i)];
        }
        shape = shape && laws;
      }
      Json classes = Json::array();
      for (std::size_t c = 0; c < dec.class_dims.size(); ++c) {
        const auto rep = std::find_if(dec.modules.begin(), dec.modules.end(),
                                      [&](const TModule& m) { return m.cls == static_cast<int>(c); });
        classes.push_back(Json{{"class", c},
                               {"dim", dec.class_dims[c]},
                               {"multiplicity", dec.multiplicities[c]},
                               {"r", rep->r},
                               {"s", rep->s},
                               {"d", rep->d},
                               {"shape", rep->shape}});
      }
      Index total = 0;
      for (const auto& m : dec.modules) total += m.dim();
      const auto bridge = endpoint_one_bridge(dec, st, ctx);
      int top_classes = 0, one_classes = 0;
      for (std::size_t c = 0; c < dec.class_dims.size(); ++c) {
        const auto rep = std::find_if(dec.modules.begin(), dec.modules.end(),
                                      [&](const TModule& m) { return m.cls == static_cast<int>(c); });
        top_classes += rep->r + rep->d == dd;
        one_classes += rep->r == 1;
      }
      const Index e1 = corner(t, dual.Estar[1], "E*_1 T E*_1", ctx).dim();
      const Index ed = corner(t, dual.Estar[static_cast<std::size_t>(dd)], "E*_D T E*_D", ctx).dim();

      out.data["modules"] = Json{{"seed", cfg.seed},
                                 {"draws", dec.draws},
                                 {"count", dec.modules.size()},
                                 {"classes", classes},
                                 {"table", table},
                                 {"wedderburn_summands", w.summands},
                                 {"sum_squares", w.sum_squares},
                                 {"dim_T", w.dim_t},
                                 {"dim_commutant", w.dim_commutant},
                                 {"sum_multiplicity_squares", w.sum_mult_squares},
                                 {"exact_rechecked", rechecked},
                                 {"criteria", Json{{"mu_pairs", dec.criteria.mu_pairs},
                                                   {"mu_agree", dec.criteria.mu_agree},
                                                   {"phi_pairs", dec.criteria.phi_pairs},
                                                   {"phi_agree", dec.criteria.phi_agree}}},
                                 {"coefficients", dec.coefficients}};

      out.sb.add("orthogonal-decomposition", "V is the orthogonal direct sum of the modules found",
                 total == st.order && dec.max_overlap <= ctx.residual_bound, dec.max_overlap);
      out.sb.add("irreducible-end-dimension", "End_T(W) has dimension 1 for every module", ends);
      out.sb.add("sharpness", "rho_0 = 1 for every irreducible module", sharp);
      out.sb.add("shape-laws", "rho_i = rho_{d-i}, rho_{i-1} <= rho_i for i <= d/2, dim E*_{r+i}W = dim E_{s+i}W, d = d*",
                 shape);
      out.sb.add("wedderburn-sum", "sum_i n_i^2 = dim T", w.wedderburn_ok(), 0.0,
                 std::to_string(w.sum_squares) + " != " + std::to_string(w.dim_t));
      out.sb.add("commutant-dimension", "dim commutant = sum_i mult_i^2", w.commutant_ok(), 0.0,
                 std::to_string(w.sum_mult_squares) + " != " + std::to_string(w.dim_commutant));
      out.sb.add("primary-module", "primary class has multiplicity 1 and dimension D+1", w.primary_ok());
      out.sb.add("isomorphism-criteria", "intertwiner test agrees with the mu and phi criteria", dec.criteria.ok(), 0.0,
                 "mu " + std::to_string(dec.criteria.mu_agree) + "/" + std::to_string(dec.criteria.mu_pairs) + ", phi " +
                     std::to_string(dec.criteria.phi_agree) + "/" + std::to_string(dec.criteria.phi_pairs));
      out.sb.add("endpoint-one-classes",
                 "classes with r = 1 = distinct eigenvalues of E*_1 A E*_1 on the endpoint-1 part; dim E*_1 T E*_1 = 1 + that count",
                 bridge.first == bridge.second && e1 == 1 + one_classes);
      out.sb.add("top-cell-classes", "dim E*_D T E*_D = number of classes with r + d = D", ed == top_classes);
      if (is_exact_v<S>) out.sb.add("exact-recheck", "rationalized module projectors reproduce the shape exactly", exact_ok);
      out.timings["tmod_ms"] = ms_since(t0);
    }

    if (want.count("scheme")) {
      stage = "scheme";
      t0 = Clock::now();
      Json sj = Json::object();
      const bool example_family = spec.family != Family::cycle;
      for (const auto& cell : cfg.cells) {
        const int i = cell == "first" ? 1 : dd;
        const auto c = corner(t, dual.Estar[static_cast<std::size_t>(i)], cell, ctx);
        const auto ra = restrict_corner(c, g.sphere(x, i));
        const bool cs = check_commutative<S>(ra.basis, ctx) && check_all_symmetric<S>(ra.basis, ctx);
        out.sb.add("subconstituent-algebra-" + cell, "restricted corner on Gamma_i(x) is commutative and symmetric", cs);
        const auto v = detect_scheme(ra, ctx);
        Json vj = scheme_json<S>(v);
        vj["cell"] = i;
        vj["size"] = ra.cell.size();
        vj["dim"] = ra.dim();
        if (example_family) {
          out.sb.add("subconstituent-scheme-" + cell, "restricted corner is the Bose-Mesner algebra of a scheme",
                     v.is_scheme, 0.0, v.failure);
        }
        if (cell == "last") {
          if (const auto model = last_subconstituent_model(spec)) {
            const bool match = match_named_scheme(v, *model);
            vj["model"] = model->to_string();
            vj["model_match"] = match;
            out.sb.add("last-subconstituent-model", "last subconstituent scheme has the parameters of the named graph",
                       match, 0.0, "model " + model->to_string());
          }
        }
        sj[cell] = vj;
      }
      out.data["schemes"] = sj;
      out.timings["scheme_ms"] = ms_since(t0);
    }
  } catch (const VerificationError& e) {
    out.sb.add("stage-" + stage, e.anchor(), false, e.residual(), e.what());
  }
  return out;
}

std::vector<Index> select_vertices(const Graph& g, const std::string& sel) {
  if (sel == "all") {
    std::vector<Index> out(static_cast<std::size_t>(g.order()));
    for (Index i = 0; i < g.order(); ++i) out[static_cast<std::size_t>(i)] = i;
    return out;
  }
  if (auto v = g.find_label(sel)) return {*v};
  try {
    std::size_t used = 0;
    const long idx = std::stol(sel, &used);
    if (used == sel.size() && idx >= 0 && idx < g.order()) return {static_cast<Index>(idx)};
  } catch (const std::exception&) {
  }
  throw UsageError("unknown vertex '" + sel + "': expected an index below " + std::to_string(g.order()) +
                   ", a vertex label or 'all'");
}

template <class S>
Report run_domain(const RunConfig& cfg, const GraphSpec& spec, const Graph& g, const IntersectionData& data) {
  Report report;
  Json& j = report.data;
  j["schema_version"] = "1";
  j["spec"] = spec.to_string();
  j["domain"] = ScalarTraits<S>::domain;
  j["seed"] = cfg.seed;
  j["tolerances"] = Json{{"rank", cfg.tol.rank_threshold}, {"cluster", cfg.tol.cluster_width}, {"residual", cfg.tol.residual_bound}};
  Json groups = Json::array();
  for (const auto& c : cfg.checks) groups.push_back(c);
  j["checks_enabled"] = groups;
  j["graph"] = Json{{"order", g.order()}, {"diameter", g.diameter()}, {"valency", data.k},
                    {"b", std::vector<long>(data.b.begin(), data.b.end() - 1)},
                    {"c", std::vector<long>(data.c.begin() + 1, data.c.end())}};

  Scoreboard sb;
  auto t0 = Clock::now();
  BoseMesnerData<S> bm;
  try {
    bm = build_bose_mesner<S>(g, data, cfg.tol);
  } catch (const VerificationError& e) {
    sb.add("stage-bm", e.anchor(), false, e.residual(), e.what());
    report.checks = sb.list();
    return report;
  }
  const std::vector<std::vector<int>> found = bm.orderings;
  if (found.empty()) {
    sb.add("q-polynomial-ordering", "some ordering of the E_i is Q-polynomial", false, 0.0, "no Q-polynomial ordering");
    report.checks = sb.list();
    return report;
  }
  const std::vector<int> sigma = cfg.ordering ? *cfg.ordering : found.front();
  if (cfg.ordering) {
    std::vector<int> sorted = sigma;
    std::sort(sorted.begin(), sorted.end());
    bool perm = static_cast<int>(sorted.size()) == bm.diameter + 1 && sigma.front() == 0;
    for (std::size_t i = 0; perm && i < sorted.size(); ++i) perm = sorted[i] == static_cast<int>(i);
    if (!perm) throw UsageError("ordering must be a permutation of 0.." + std::to_string(bm.diameter) + " fixing 0");
    if (!is_q_polynomial_ordering(bm.krein, sigma)) throw UsageError("ordering is not Q-polynomial");
  }
  bm = apply_ordering(bm, sigma);
  report.timings["bm_ms"] = ms_since(t0);

  Json theta = Json::array(), mult = Json::array();
  for (const auto& v : bm.theta) theta.push_back(scalar_json(v));
  for (Index m : bm.multiplicity) mult.push_back(m);
  j["bose_mesner"] = Json{{"eigenvalues", theta}, {"multiplicities", mult}, {"q_polynomial_orderings", found},
                          {"ordering", sigma}};
  if (cfg.checks.count("bm")) bose_mesner_checks(data, bm, cfg.tol, sb);

  const auto vertices = select_vertices(g, cfg.vertex);
  const bool per_vertex = cfg.checks.size() > 1 || !cfg.checks.count("bm");
  std::vector<VertexResult> results(vertices.size());
  if (per_vertex) {
    const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t start = 0; start < vertices.size(); start += width) {
      std::vector<std::future<VertexResult>> jobs;
      for (std::size_t k = start; k < std::min(vertices.size(), start + width); ++k) {
        jobs.push_back(std::async(std::launch::async, [&, k] { return run_vertex<S>(cfg, spec, g, data, bm, vertices[k]); }));
      }
      for (std::size_t k = 0; k < jobs.size(); ++k) results[start + k] = jobs[k].get();
    }
  }
  Json vj = Json::array(), vt = Json::array();
  for (auto& r : results) {
    sb.merge(r.sb);
    vj.push_back(std::move(r.data));
    vt.push_back(std::move(r.timings));
  }
  if (per_vertex) j["vertices"] = vj;
  if (vertices.size() > 1 && cfg.checks.count("tmod")) {
    // Vertex-transitivity is observed, not assumed.
    std::set<std::string> profiles;
    for (const auto& v : j["vertices"]) {
      if (v.contains("modules")) profiles.insert(v["modules"]["classes"].dump());
    }
    j["identical_vertex_profiles"] = profiles.size() == 1;
  }
  report.timings["vertices"] = vt;
  report.checks = sb.list();
  return report;
}

}  // namespace

Report run(const RunConfig& config) {
  config.validate();
  const auto t0 = Clock::now();
  const GraphSpec spec = GraphSpec::parse(config.spec);
  spec.validate();
  const Graph g = build_graph(spec);
  const auto cert = certify_distance_regular(g);
  if (const auto* bad = std::get_if<NotDRG>(&cert)) {
    throw UsageError("graph is not distance-regular: " + bad->describe(g));
  }
  const auto& data = std::get<IntersectionData>(cert);
  std::string domain = config.domain;
  if (domain == "auto") domain = has_exact_spectrum(g) ? "exact" : "float";
  Report r = domain == "exact" ? run_domain<Exact>(config, spec, g, data) : run_domain<double>(config, spec, g, data);
  r.timings["total_ms"] = ms_since(t0);
  return r;
}

std::string render_text(const Report& report) {
  std::ostringstream os;
  const Json& j = report.data;
  os << "graph " << j.value("spec", "?") << "  |X| = " << j["graph"].value("order", 0)
     << "  D = " << j["graph"].value("diameter", 0) << "  domain " << j.value("domain", "?") << "  seed "
     << j.value("seed", 0) << '\n';
  if (j.contains("bose_mesner")) {
    os << "eigenvalues";
    for (const auto& v : j["bose_mesner"]["eigenvalues"]) os << ' ' << (v.is_string() ? v.get<std::string>() : v.dump());
    os << "  multiplicities " << j["bose_mesner"]["multiplicities"].dump() << '\n';
  }
  if (j.contains("vertices")) {
    for (const auto& v : j["vertices"]) {
      os << "\nvertex " << v.value("vertex", 0) << " " << v.value("label", "") << "  cells "
         << v.value("subconstituent_sizes", Json::array()).dump();
      if (v.contains("terwilliger")) os << "  dim T = " << v["terwilliger"].value("dim_T", 0);
      os << '\n';
      if (v.contains("modules")) {
        os << "  class  r  s  d  dim  mult  shape\n";
        for (const auto& c : v["modules"]["classes"]) {
          os << "  " << std::setw(5) << c.value("class", 0) << std::setw(3) << c.value("r", 0) << std::setw(3)
             << c.value("s", 0) << std::setw(3) << c.value("d", 0) << std::setw(5) << c.value("dim", 0) << std::setw(6)
             << c.value("multiplicity", 0) << "  " << c["shape"].dump() << '\n';
        }
      }
      if (v.contains("schemes")) {
        for (auto it = v["schemes"].begin(); it != v["schemes"].end(); ++it) {
          os << "  " << it.key() << " subconstituent: " << (it.value().value("is_scheme", false) ? "scheme" : "not a scheme")
             << " with " << it.value().value("classes", 0) << " relations";
          if (it.value().contains("model")) {
            os << ", model " << it.value()["model"].get<std::string>() << (it.value().value("model_match", false) ? " matches" : " does not match");
          }
          os << '\n';
        }
      }
    }
  }
  if (j.contains("identical_vertex_profiles")) {
    os << "\nmodule profiles " << (j["identical_vertex_profiles"].get<bool>() ? "identical" : "DIFFER") << " across "
       << j["vertices"].size() << " vertices\n";
  }
  os << "\nscoreboard\n";
  for (const auto& c : report.checks) {
    os << (c.pass ? "  PASS  " : "  FAIL  ") << std::left << std::setw(34) << c.anchor << std::right << c.statement;
    if (!c.pass && !c.detail.empty()) os << "  [" << c.detail << "]";
    os << '\n';
  }
  os << (report.pass() ? "all checks pass\n" : "some checks FAILED\n");
  return os.str();
}

}  // namespace qdrg
