#include "flw/corpus.hpp"

#include <cmath>

#include "flw/rng.hpp"

namespace flw {

double OracleComponent::order(double q) const {
  double inv = std::isinf(q) ? 0.0 : 1.0 / q;
  return order1 + gamma * (1 - inv);
}

double CorpusEntry::min_order(double q) const {
  double m = kInf;
  for (const auto& c : oracle_wf) m = std::min(m, c.order(q));
  return m;
}

namespace {

void fill_membership(CorpusEntry& e) {
  for (double q : {1.0, 2.0, kInf})
    for (int s = -3; s <= 7; ++s) {
      double o = e.min_order(q);
      bool in = s < o || (std::isinf(q) && s <= o);
      e.oracle_fl.push_back({q, static_cast<double>(s), in});
    }
}

}  // namespace

CorpusEntry make_smooth(const TorusGrid& g, std::uint64_t seed, int degree) {
  if (degree < 0 || degree > g.n / 4) throw Error("smooth degree must lie in [0, n/4]");
  Spectrum F = Spectrum::zeros(g);
  const FrequencyLattice& L = lattice(g);
  std::mt19937_64 rng(splitmix64(seed));
  std::normal_distribution<double> N(0, 1);
  for (std::size_t i = 0; i < L.size(); ++i) {
    auto k = L.k(i);
    bool inside = true;
    for (int c : k) inside = inside && std::abs(c) <= degree;
    if (inside) F.coeffs[i] = cplx(N(rng), N(rng));
  }
  Signal f = inverse_transform(F);
  // real part: symmetric spectrum, still of the same degree
  for (auto& v : f.values) v = v.real();
  CorpusEntry e;
  e.id = "smooth";
  e.signal = std::move(f);
  e.params = {{"seed", seed}, {"degree", degree}};
  fill_membership(e);
  return e;
}

CorpusEntry make_delta(const TorusGrid& g, std::vector<int> x) {
  if (static_cast<int>(x.size()) != g.d) throw Error("delta position dimension mismatch");
  for (int c : x)
    if (c < 0 || c >= g.n) throw Error("delta position off grid");
  CorpusEntry e;
  e.id = "delta";
  e.signal = Signal::zeros(g);
  e.signal.values[ravel(g, x)] = 1.0;
  OracleComponent c;
  c.support = {x};
  c.order1 = -g.d;
  c.gamma = g.d;
  c.decay = 0;
  e.oracle_wf.push_back(c);
  e.params = {{"x", x}};
  fill_membership(e);
  return e;
}

CorpusEntry make_edge(const TorusGrid& g, int axis, int offset, EdgeProfile profile) {
  if (g.d != 2) throw Error("edge entries require d = 2");
  if (axis < 0 || axis >= g.d) throw Error("edge axis out of range");
  offset = wrap(offset, g.n);
  CorpusEntry e;
  e.id = "edge";
  e.signal = Signal::zeros(g);
  std::vector<int> idx(g.d);
  auto row_value = [&](int j) {
    int t = wrap(j - offset, g.n);
    if (profile == EdgeProfile::sawtooth) return static_cast<double>(t) / g.n - 0.5;
    return t < g.n / 2 ? 1.0 : 0.0;
  };
  for (std::size_t i = 0; i < e.signal.values.size(); ++i) {
    unravel(g, i, idx);
    e.signal.values[i] = row_value(idx[axis]);
  }
  std::vector<double> normal(g.d, 0.0), anti(g.d, 0.0);
  normal[axis] = 1;
  anti[axis] = -1;
  std::vector<int> lines{offset};
  if (profile == EdgeProfile::step) lines.push_back(wrap(offset + g.n / 2, g.n));
  for (int line : lines) {
    OracleComponent c;
    for (int j = 0; j < g.n; ++j) {
      std::vector<int> p(g.d);
      p[axis] = line;
      p[1 - axis] = j;
      c.support.push_back(p);
    }
    c.directions = {normal, anti};
    c.order1 = 0;
    c.gamma = 1;
    c.decay = 1;
    e.oracle_wf.push_back(c);
  }
  e.params = {{"axis", axis}, {"offset", offset},
              {"profile", profile == EdgeProfile::sawtooth ? "sawtooth" : "step"}};
  fill_membership(e);
  return e;
}

CorpusEntry make_power_cusp(const TorusGrid& g, double a, int x) {
  if (g.d != 1) throw Error("power cusps require d = 1");
  if (!(a > 0)) throw Error("cusp exponent must be positive");
  if (std::abs(a / 2 - std::round(a / 2)) < 1e-12)
    throw Error("even-integer cusp exponents give a trigonometric polynomial");
  CorpusEntry e;
  e.id = "cusp";
  e.signal = Signal::zeros(g);
  for (int j = 0; j < g.n; ++j)
    e.signal.values[j] = std::pow(std::abs(2 * std::sin(0.5 * g.h() * (j - x))), a);
  OracleComponent c;
  c.support = {{wrap(x, g.n)}};
  c.order1 = a;
  c.gamma = 1;
  c.decay = a + 1;
  e.oracle_wf.push_back(c);
  e.params = {{"a", a}, {"x", x}};
  fill_membership(e);
  return e;
}

CorpusEntry make_example_2_10(const TorusGrid& g, int count, double q) {
  if (g.d != 1) throw Error("accumulating-cusp entries require d = 1");
  if (count < 1 || count > 4) throw Error("count must lie in [1, 4] (grid resolution limit)");
  if (!(q >= 1)) throw Error("exponent must be >= 1");
  static const double kFrac[4] = {0.2, 0.8, 0.2, 0.8};
  double inv = std::isinf(q) ? 0.0 : 1.0 / q;
  CorpusEntry e;
  e.id = "example-2.10";
  e.signal = Signal::zeros(g);
  nlohmann::json pieces = nlohmann::json::array();
  for (int j = 1; j <= count; ++j) {
    // FL^q order a + 1 - 1/q lands in (j+2, j+3]
    double a = j + 1 + inv + kFrac[j - 1];
    int pos = count + 1 - j;
    double M = std::pow(2.0, a);  // sup |2 sin(·/2)|^a
    double scale = 1.0 / (static_cast<double>(j) * j * M);
    for (int i = 0; i < g.n; ++i)
      e.signal.values[i] += scale * std::pow(std::abs(2 * std::sin(0.5 * g.h() * (i - pos))), a);
    OracleComponent c;
    c.support = {{pos}};
    c.order1 = a;
    c.gamma = 1;
    c.decay = a + 1;
    e.oracle_wf.push_back(c);
    pieces.push_back({{"index", j}, {"a", a}, {"position", pos}, {"weight", scale}});
  }
  e.params = {{"count", count}, {"q", format_exponent(q)}, {"pieces", pieces}};
  fill_membership(e);
  return e;
}

CorpusEntry combine(const std::string& id, const CorpusEntry& a, const CorpusEntry& b) {
  if (!(a.signal.grid == b.signal.grid)) throw Error("grid mismatch");
  CorpusEntry e;
  e.id = id;
  e.signal = a.signal;
  for (std::size_t i = 0; i < e.signal.values.size(); ++i) e.signal.values[i] += b.signal.values[i];
  e.oracle_wf = a.oracle_wf;
  e.oracle_wf.insert(e.oracle_wf.end(), b.oracle_wf.begin(), b.oracle_wf.end());
  e.params = {{"parts", {a.id, b.id}}};
  fill_membership(e);
  return e;
}

std::vector<std::string> corpus_ids() {
  return {"smooth-1d", "smooth-2d", "delta-1d",  "delta-2d", "edge-2d",     "edge-2d-x",
          "cusp-0.5",  "cusp-2.5",  "cusp-8.5",  "example-2.10", "example-2.10-1"};
}

CorpusEntry corpus_entry(const std::string& id, int n) {
  bool two = id.size() > 3 && id.substr(id.size() - 3) == "-2d";
  two = two || id.rfind("edge", 0) == 0;
  if (id == "edge-2d-x") two = true;
  int d = two ? 2 : 1;
  if (n == 0) n = two ? 128 : 256;
  TorusGrid g = TorusGrid::make(d, n);
  CorpusEntry e;
  if (id == "smooth-1d" || id == "smooth-2d")
    e = make_smooth(g, 1, 3);
  else if (id == "delta-1d" || id == "delta-2d")
    e = make_delta(g, std::vector<int>(d, n / 2));
  else if (id == "edge-2d")
    e = make_edge(g, 1, n / 2);
  else if (id == "edge-2d-x")
    e = make_edge(g, 0, n / 2);
  else if (id == "cusp-0.5")
    e = make_power_cusp(g, 0.5, n / 2);
  else if (id == "cusp-2.5")
    e = make_power_cusp(g, 2.5, n / 2);
  else if (id == "cusp-8.5")
    e = make_power_cusp(g, 8.5, n / 2);
  else if (id == "example-2.10")
    e = make_example_2_10(g, 3, 1);
  else if (id == "example-2.10-1")
    e = make_example_2_10(g, 1, 1);
  else
    throw Error("unknown corpus id: " + id);
  e.id = id;
  return e;
}

std::vector<CorpusEntry> standard_corpus() {
  std::vector<CorpusEntry> out;
  for (const char* id : {"smooth-1d", "smooth-2d", "delta-1d", "delta-2d", "edge-2d", "edge-2d-x",
                         "cusp-0.5", "cusp-2.5", "example-2.10"})
    out.push_back(corpus_entry(id));
  return out;
}

}  // namespace flw
