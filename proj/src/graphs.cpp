#include "qdrg/graphs.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

namespace qdrg {

namespace {

bool is_prime(long q) {
  if (q < 2) return false;
  for (long d = 2; d * d <= q; ++d) {
    if (q % d == 0) return false;
  }
  return true;
}

bool is_prime_power(long q) {
  if (q < 2) return false;
  long p = 2;
  while (q % p != 0) ++p;
  while (q % p == 0) q /= p;
  return q == 1;
}

long binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long gaussian_binomial(long q, long n, long k) {
  long num = 1, den = 1;
  for (long i = 0; i < k; ++i) {
    long a = 1, b = 1;
    for (long t = 0; t < n - i; ++t) a *= q;
    for (long t = 0; t < i + 1; ++t) b *= q;
    num *= a - 1;
    den *= b - 1;
  }
  return num / den;
}

std::string join(const std::vector<int>& v, char open, char close) {
  std::string s(1, open);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s + close;
}

// Vertices as canonical integer keys; the label is derived from the key.
struct Vertex {
  std::vector<int> key;
  std::string label;
};

std::vector<Vertex> hamming_vertices(int d, int n) {
  std::vector<Vertex> out;
  std::vector<int> t(static_cast<std::size_t>(d), 0);
  while (true) {
    out.push_back({t, join(t, '(', ')')});
    int p = d - 1;
    while (p >= 0 && t[static_cast<std::size_t>(p)] == n - 1) t[static_cast<std::size_t>(p--)] = 0;
    if (p < 0) break;
    ++t[static_cast<std::size_t>(p)];
  }
  return out;
}

std::vector<Vertex> johnson_vertices(int n, int d) {
  std::vector<Vertex> out;
  std::vector<int> s(static_cast<std::size_t>(d));
  std::iota(s.begin(), s.end(), 1);
  while (true) {
    out.push_back({s, join(s, '{', '}')});
    int p = d - 1;
    while (p >= 0 && s[static_cast<std::size_t>(p)] == n - d + p + 1) --p;
    if (p < 0) break;
    ++s[static_cast<std::size_t>(p)];
    for (int r = p + 1; r < d; ++r) s[static_cast<std::size_t>(r)] = s[static_cast<std::size_t>(r - 1)] + 1;
  }
  return out;
}

// Rank of a row-major matrix over F_q, q prime.
int rank_mod(std::vector<std::vector<int>> m, int q) {
  int r = 0;
  const int cols = m.empty() ? 0 : static_cast<int>(m[0].size());
  std::vector<int> inv(static_cast<std::size_t>(q), 0);
  for (int a = 1; a < q; ++a) {
    for (int b = 1; b < q; ++b) {
      if (a * b % q == 1) inv[static_cast<std::size_t>(a)] = b;
    }
  }
  for (int c = 0; c < cols && r < static_cast<int>(m.size()); ++c) {
    int sel = -1;
    for (int i = r; i < static_cast<int>(m.size()); ++i) {
      if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] != 0) {
        sel = i;
        break;
      }
    }
    if (sel < 0) continue;
    std::swap(m[static_cast<std::size_t>(sel)], m[static_cast<std::size_t>(r)]);
    auto& piv = m[static_cast<std::size_t>(r)];
    const int f = inv[static_cast<std::size_t>(piv[static_cast<std::size_t>(c)])];
    for (auto& x : piv) x = x * f % q;
    for (int i = 0; i < static_cast<int>(m.size()); ++i) {
      auto& row = m[static_cast<std::size_t>(i)];
      const int g = row[static_cast<std::size_t>(c)];
      if (i == r || g == 0) continue;
      for (int j = 0; j < cols; ++j) {
        row[static_cast<std::size_t>(j)] = ((row[static_cast<std::size_t>(j)] - g * piv[static_cast<std::size_t>(j)]) % q + q) % q;
      }
    }
    ++r;
  }
  return r;
}

// D-dimensional subspaces of F_q^N as D x N reduced row-echelon matrices.
std::vector<Vertex> grassmann_vertices(int q, int n, int d) {
  std::vector<Vertex> out;
  for (const auto& pv : johnson_vertices(n, d)) {
    std::vector<int> piv = pv.key;
    for (auto& p : piv) --p;
    // free positions: (row r, column c) with c > piv[r] and c not a pivot column
    std::vector<std::pair<int, int>> slots;
    for (int r = 0; r < d; ++r) {
      for (int c = piv[static_cast<std::size_t>(r)] + 1; c < n; ++c) {
        if (std::find(piv.begin(), piv.end(), c) == piv.end()) slots.emplace_back(r, c);
      }
    }
    std::vector<int> vals(slots.size(), 0);
    while (true) {
      std::vector<int> m(static_cast<std::size_t>(d * n), 0);
      for (int r = 0; r < d; ++r) m[static_cast<std::size_t>(r * n + piv[static_cast<std::size_t>(r)])] = 1;
      for (std::size_t s = 0; s < slots.size(); ++s) {
        m[static_cast<std::size_t>(slots[s].first * n + slots[s].second)] = vals[s];
      }
      std::string label = "[";
      for (int r = 0; r < d; ++r) {
        if (r) label += ';';
        for (int c = 0; c < n; ++c) label += std::to_string(m[static_cast<std::size_t>(r * n + c)]);
      }
      out.push_back({m, label + "]"});
      std::size_t p = 0;
      while (p < vals.size() && vals[p] == q - 1) vals[p++] = 0;
      if (p == vals.size()) break;
      ++vals[p];
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// GraphSpec

GraphSpec GraphSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("graph spec '" + text + "': expected family:params");
  const std::string fam = text.substr(0, colon);
  GraphSpec spec;
  if (fam == "hamming") spec.family = Family::hamming;
  else if (fam == "johnson") spec.family = Family::johnson;
  else if (fam == "grassmann") spec.family = Family::grassmann;
  else if (fam == "cycle") spec.family = Family::cycle;
  else throw UsageError("graph spec '" + text + "': unknown family '" + fam + "'");
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      spec.params.push_back(std::stol(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("graph spec '" + text + "': bad integer '" + item + "'");
    }
  }
  spec.validate();
  return spec;
}

std::string GraphSpec::to_string() const {
  static const char* names[] = {"hamming", "johnson", "grassmann", "cycle"};
  std::string s = names[static_cast<int>(family)];
  s += ':';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(params[i]);
  }
  return s;
}

void GraphSpec::validate() const {
  const std::size_t want[] = {2, 2, 3, 1};
  if (params.size() != want[static_cast<int>(family)]) {
    throw UsageError(to_string() + ": expected " + std::to_string(want[static_cast<int>(family)]) + " parameters");
  }
  switch (family) {
    case Family::hamming:
      if (params[0] < 1 || params[1] < 2) throw UsageError(to_string() + ": hamming needs D >= 1, N >= 2");
      break;
    case Family::johnson:
      if (params[1] < 1 || params[0] < 2 * params[1]) throw UsageError(to_string() + ": johnson needs N >= 2D >= 2");
      break;
    case Family::grassmann:
      if (!is_prime_power(params[0])) throw UsageError(to_string() + ": q must be a prime power");
      if (!is_prime(params[0])) throw UsageError(to_string() + ": only prime q is supported");
      if (params[2] < 1 || params[1] < 2 * params[2]) throw UsageError(to_string() + ": grassmann needs N >= 2D >= 2");
      break;
    case Family::cycle:
      if (params[0] < 3) throw UsageError(to_string() + ": cycle needs n >= 3");
      break;
  }
  if (expected_order() > 2000) throw UsageError(to_string() + ": graph too large (more than 2000 vertices)");
}

long GraphSpec::expected_order() const {
  switch (family) {
    case Family::hamming: {
      long v = 1;
      for (long i = 0; i < params[0] && v <= 1'000'000; ++i) v *= params[1];
      return v;
    }
    case Family::johnson:
      return binomial(params[0], params[1]);
    case Family::grassmann:
      return gaussian_binomial(params[0], params[1], params[2]);
    case Family::cycle:
      return params[0];
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(std::string name, std::vector<std::string> labels, Eigen::MatrixXi adjacency)
    : name_(std::move(name)), labels_(std::move(labels)), adjacency_(std::move(adjacency)) {
  const Index n = adjacency_.rows();
  if (adjacency_.cols() != n) throw UsageError("adjacency matrix must be square");
  if (static_cast<Index>(labels_.size()) != n) throw UsageError("label count does not match vertex count");
  for (Index y = 0; y < n; ++y) {
    if (adjacency_(y, y) != 0) throw UsageError("adjacency matrix has a loop");
    for (Index z = 0; z < n; ++z) {
      if (adjacency_(y, z) != 0 && adjacency_(y, z) != 1) throw UsageError("adjacency matrix must be 0/1");
      if (adjacency_(y, z) != adjacency_(z, y)) throw UsageError("adjacency matrix must be symmetric");
    }
  }
  std::vector<std::vector<Index>> nbr(static_cast<std::size_t>(n));
  for (Index y = 0; y < n; ++y) {
    for (Index z = 0; z < n; ++z) {
      if (adjacency_(y, z)) nbr[static_cast<std::size_t>(y)].push_back(z);
    }
  }
  dist_ = Eigen::MatrixXi::Constant(n, n, -1);
  for (Index s = 0; s < n; ++s) {
    std::deque<Index> queue{s};
    dist_(s, s) = 0;
    while (!queue.empty()) {
      const Index y = queue.front();
      queue.pop_front();
      for (Index z : nbr[static_cast<std::size_t>(y)]) {
        if (dist_(s, z) < 0) {
          dist_(s, z) = dist_(s, y) + 1;
          queue.push_back(z);
        }
      }
    }
  }
  connected_ = n == 0 || dist_.minCoeff() >= 0;
  diameter_ = n == 0 ? 0 : dist_.maxCoeff();
}

Graph Graph::build(const GraphSpec& spec) {
  spec.validate();
  std::vector<Vertex> vs;
  const auto& p = spec.params;
  switch (spec.family) {
    case Family::hamming:
      vs = hamming_vertices(static_cast<int>(p[0]), static_cast<int>(p[1]));
      break;
    case Family::johnson:
      vs = johnson_vertices(static_cast<int>(p[0]), static_cast<int>(p[1]));
      break;
    case Family::grassmann:
      vs = grassmann_vertices(static_cast<int>(p[0]), static_cast<int>(p[1]), static_cast<int>(p[2]));
      break;
    case Family::cycle:
      for (int i = 0; i < p[0]; ++i) vs.push_back({{i}, std::to_string(i)});
      break;
  }
  std::sort(vs.begin(), vs.end(), [](const Vertex& x, const Vertex& y) { return x.key < y.key; });
  const Index n = static_cast<Index>(vs.size());
  if (n != spec.expected_order()) throw Error(spec.to_string() + ": vertex enumeration count mismatch");

  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
  for (Index y = 0; y < n; ++y) {
    for (Index z = y + 1; z < n; ++z) {
      const auto& u = vs[static_cast<std::size_t>(y)].key;
      const auto& v = vs[static_cast<std::size_t>(z)].key;
      bool edge = false;
      switch (spec.family) {
        case Family::hamming: {
          int diff = 0;
          for (std::size_t t = 0; t < u.size(); ++t) diff += u[t] != v[t];
          edge = diff == 1;
          break;
        }
        case Family::johnson: {
          std::vector<int> common;
          std::set_intersection(u.begin(), u.end(), v.begin(), v.end(), std::back_inserter(common));
          edge = static_cast<long>(common.size()) == p[1] - 1;
          break;
        }
        case Family::grassmann: {
          // dim(y & z) = D - 1  <=>  dim(y + z) = D + 1
          const int d = static_cast<int>(p[2]);
          const int cols = static_cast<int>(p[1]);
          std::vector<std::vector<int>> m;
          for (const auto* w : {&u, &v}) {
            for (int r = 0; r < d; ++r) {
              m.emplace_back(w->begin() + r * cols, w->begin() + (r + 1) * cols);
            }
          }
          edge = rank_mod(m, static_cast<int>(p[0])) == d + 1;
          break;
        }
        case Family::cycle:
          edge = (v[0] - u[0] + p[0]) % p[0] == 1 || (u[0] - v[0] + p[0]) % p[0] == 1;
          break;
      }
      adj(y, z) = adj(z, y) = edge ? 1 : 0;
    }
  }
  std::vector<std::string> labels;
  for (auto& v : vs) labels.push_back(std::move(v.label));
  return Graph(spec.to_string(), std::move(labels), std::move(adj));
}

Graph Graph::from_adjacency(const Eigen::MatrixXi& adjacency, std::vector<std::string> labels, std::string name) {
  if (labels.empty()) {
    for (Index i = 0; i < adjacency.rows(); ++i) labels.push_back(std::to_string(i));
  }
  return Graph(std::move(name), std::move(labels), adjacency);
}

std::optional<Index> Graph::find_label(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<Index>(it - labels_.begin());
}

std::vector<Index> Graph::sphere(Index x, int i) const {
  std::vector<Index> out;
  for (Index y = 0; y < order(); ++y) {
    if (dist_(x, y) == i) out.push_back(y);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distance-regularity

std::string NotDRG::describe(const Graph& g) const {
  std::ostringstream os;
  os << "not distance-regular: pairs (" << g.labels()[static_cast<std::size_t>(y1)] << ","
     << g.labels()[static_cast<std::size_t>(z1)] << ") and (" << g.labels()[static_cast<std::size_t>(y2)] << ","
     << g.labels()[static_cast<std::size_t>(z2)] << ") at distance " << h << " have |G_" << i << " & G_" << j
     << "| = " << count1 << " vs " << count2;
  return os.str();
}

std::variant<IntersectionData, NotDRG> certify_distance_regular(const Graph& g) {
  if (!g.connected()) throw UsageError(g.name() + ": graph is disconnected");
  const int d = g.diameter();
  const Index n = g.order();
  const auto sz = static_cast<std::size_t>(d + 1);
  std::vector<std::vector<std::vector<long>>> p(sz, std::vector<std::vector<long>>(sz, std::vector<long>(sz, 0)));
  std::vector<std::pair<Index, Index>> first(sz, {-1, -1});
  std::vector<std::vector<long>> count(sz, std::vector<long>(sz));
  const Eigen::MatrixXi& dist = g.distances();
  for (Index y = 0; y < n; ++y) {
    for (Index z = 0; z < n; ++z) {
      for (auto& row : count) std::fill(row.begin(), row.end(), 0);
      for (Index w = 0; w < n; ++w) ++count[static_cast<std::size_t>(dist(y, w))][static_cast<std::size_t>(dist(z, w))];
      const auto h = static_cast<std::size_t>(dist(y, z));
      if (first[h].first < 0) {
        first[h] = {y, z};
        p[h] = count;
        continue;
      }
      for (std::size_t i = 0; i < sz; ++i) {
        for (std::size_t j = 0; j < sz; ++j) {
          if (count[i][j] != p[h][i][j]) {
            NotDRG w;
            w.y1 = first[h].first;
            w.z1 = first[h].second;
            w.y2 = y;
            w.z2 = z;
            w.h = static_cast<int>(h);
            w.i = static_cast<int>(i);
            w.j = static_cast<int>(j);
            w.count1 = p[h][i][j];
            w.count2 = count[i][j];
            return w;
          }
        }
      }
    }
  }
  IntersectionData data;
  data.diameter = d;
  data.p = std::move(p);
  for (int i = 0; i <= d; ++i) {
    data.ki.push_back(data(0, i, i));
    data.c.push_back(i == 0 ? 0 : data(i, 1, i - 1));
    data.a.push_back(data(i, 1, i));
    data.b.push_back(i == d ? 0 : data(i, 1, i + 1));
  }
  data.k = d >= 1 ? data.ki[1] : 0;
  return data;
}

IntersectionData require_distance_regular(const Graph& g) {
  auto r = certify_distance_regular(g);
  if (auto* w = std::get_if<NotDRG>(&r)) throw VerificationError(g.name() + ": " + w->describe(g), "DRG");
  return std::get<IntersectionData>(std::move(r));
}

}  // namespace qdrg
