#include "flw/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "flw/bilinear.hpp"
#include "flw/calculus.hpp"
#include "flw/corpus.hpp"
#include "flw/modulation.hpp"
#include "flw/rng.hpp"
#include "flw/semilinear.hpp"

namespace flw {

void SuiteResult::add(const std::string& key, bool pass, nlohmann::json detail) {
  detail["ok"] = pass;
  report[key] = std::move(detail);
  ok = ok && pass;
}

namespace {

double dqc(int d, double q) { return std::isinf(q) ? d : d * (1 - 1 / q); }

// Instance grids of the random suites, cycled by trial number.
TorusGrid trial_grid(int t) {
  static const int kShapes[5][2] = {{1, 8}, {1, 16}, {1, 32}, {2, 8}, {2, 16}};
  return TorusGrid::make(kShapes[t % 5][0], kShapes[t % 5][1]);
}

Signal random_signal(const TorusGrid& g, std::uint64_t seed, std::uint64_t trial,
                     std::uint64_t slot) {
  auto rng = trial_stream(seed, 4 * trial + slot);
  std::normal_distribution<double> N;
  Signal f = Signal::zeros(g);
  for (auto& v : f.values) v = cplx(N(rng), N(rng));
  return f;
}

// Spectra from the lattice source: Gaussian, one-hot and heavy-tailed mixes.
Signal lattice_signal(const TorusGrid& g, std::uint64_t seed, std::uint64_t trial,
                      std::uint64_t slot) {
  return inverse_transform(RandomLatticeSource{seed}.array(g, trial, slot));
}

double uniform(std::uint64_t seed, std::uint64_t trial, std::uint64_t slot, double lo,
               double hi) {
  return lo + (hi - lo) * hashed_uniform(seed, trial, slot);
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const std::vector<cplx>& a) {
  double m = 0;
  for (const auto& v : a) m = std::max(m, std::abs(v));
  return m;
}

struct Worst {
  double value = 0;
  std::int64_t trial = -1;
  void update(double v, std::int64_t t) {
    if (!(v <= value)) {
      value = v;
      trial = t;
    }
  }
  nlohmann::json to_json() const { return {{"max", value}, {"trial", trial}}; }
};

nlohmann::json ratio_summary(const Worst& w, int trials) {
  nlohmann::json j = w.to_json();
  j["trials"] = trials;
  return j;
}

std::vector<double> order_probes(double o) {
  if (std::isfinite(o)) return {o - 1.5, o + 1.5};
  return {0, 3, 6};
}

}  // namespace

SuiteResult identity_suite(int trials, std::uint64_t seed, double tolerance) {
  SuiteResult res{"identities"};
  Worst parseval, roundtrip, conv, duality;
  for (int t = 0; t < trials; ++t) {
    TorusGrid g = trial_grid(t);
    Signal f = random_signal(g, seed, t, 0), u = random_signal(g, seed, t, 1);
    Spectrum F = forward_transform(f);

    double l2 = lp_norm(f, 2), k2 = lattice_norm(F, 2);
    parseval.update(std::abs(l2 * l2 - k2 * k2) / (l2 * l2), t);

    Signal back = inverse_transform(F);
    roundtrip.update(max_abs_diff(back.values, f.values) / max_abs(f.values), t);

    Spectrum C = forward_transform(cyclic_convolve(f, u));
    Spectrum U = forward_transform(u);
    double factor = std::pow(2 * kPi, 0.5 * g.d);
    std::vector<cplx> rhs(C.coeffs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = factor * F.coeffs[i] * U.coeffs[i];
    conv.update(max_abs_diff(C.coeffs, rhs) / max_abs(rhs), t);

    RandomLatticeSource src{seed};
    DualPair dp = tf_dual_pair(src.kernel(g, t), src.array(g, t, 0), src.array(g, t, 1),
                               src.array(g, t, 2));
    duality.update(dp.defect(), t);
  }
  nlohmann::json common = {{"trials", trials}, {"seed", seed}, {"tolerance", tolerance}};
  auto part = [&](const char* name, const Worst& w) {
    nlohmann::json j = common;
    j["max_relative_error"] = w.value;
    j["worst_trial"] = w.trial;
    res.add(name, w.value <= tolerance, j);
  };
  part("parseval", parseval);
  part("round_trip", roundtrip);
  part("convolution_theorem", conv);
  part("tf_duality", duality);
  return res;
}

SuiteResult tf_bound_suite(int trials, std::uint64_t seed) {
  SuiteResult res{"tf-bounds"};
  for (double q : {1.0, 2.0, 4.0, kInf}) {
    TFBoundReport r = verify_tf_bound(1, q, 0, trials, seed);
    res.add("case1_q" + format_exponent(q), r.ok(), r.to_json());
  }
  for (double q : {1.0, 1.5, 2.0}) {
    TFBoundReport r = verify_tf_bound(3, q, 0, trials, seed);
    res.add("case3_q" + format_exponent(q), r.ok(), r.to_json());
  }
  return res;
}

SuiteResult tf_case2_stability(int trials, std::uint64_t seed) {
  SuiteResult res{"tf-case2"};
  TFBoundReport a = verify_tf_bound(2, 4, 0.6, trials, seed, TorusGrid::make(1, 16));
  TFBoundReport b = verify_tf_bound(2, 4, 0.6, trials, seed, TorusGrid::make(1, 32));
  res.add("n16", a.ok(), a.to_json());
  res.add("n32", b.ok(), b.to_json());
  StabilityReport st;
  st.name = "tf-case2";
  st.n = 16;
  st.at_n = a.max_ratio;
  st.at_2n = b.max_ratio;
  res.add("stability", st.ok(), st.to_json());
  return res;
}

SuiteResult young_suite(int trials, std::uint64_t seed) {
  SuiteResult res{"young-conv"};
  // (q, q1, q2) with 1/q1 + 1/q2 = 1/q
  static const double kTriples[][3] = {{1, 1, kInf}, {1, 2, 2},      {2, 2, kInf},
                                       {2, 4, 4},    {kInf, kInf, kInf}, {1.5, 3, 3}};
  Worst w;
  bool all = true;
  for (int t = 0; t < trials; ++t) {
    const auto& e = kTriples[t % 6];
    TorusGrid g = trial_grid(t);
    Weight ws[3] = {Weight::power(uniform(seed, t, 0, -1, 1)),
                    Weight::power(uniform(seed, t, 1, -1, 1)),
                    Weight::power(uniform(seed, t, 2, -1, 1))};
    NormRatioReport r = convolve_norm_check(lattice_signal(g, seed, t, 0),
                                            lattice_signal(g, seed, t, 1), e[0], e[1], e[2],
                                            ws[0], ws[1], ws[2]);
    all = all && r.ok();
    w.update(r.ratio / r.bound, t);
  }
  nlohmann::json j = ratio_summary(w, trials);
  j["seed"] = seed;
  j["tolerance"] = 1e-10;
  res.add("normalized_ratio", all && w.value <= 1 + 1e-10, j);
  return res;
}

SuiteResult product_suite(int trials, std::uint64_t seed) {
  SuiteResult res{"product"};
  // (q, q1, q2) with 1/q1 + 1/q2 >= 1 + 1/q
  static const double kTriples[][3] = {{1, 1, 1},    {2, 1, 2},    {2, 2, 1},   {kInf, 2, 2},
                                       {kInf, 1, kInf}, {kInf, kInf, 1}, {2, 1, 1}};
  Worst w;
  bool all = true;
  for (int t = 0; t < trials; ++t) {
    const auto& e = kTriples[t % 7];
    TorusGrid g = trial_grid(t);
    Weight ws[3] = {Weight::power(uniform(seed, t, 0, -1, 1)),
                    Weight::power(uniform(seed, t, 1, -1, 1)),
                    Weight::power(uniform(seed, t, 2, -1, 1))};
    NormRatioReport r = product_norm_check(lattice_signal(g, seed, t, 0),
                                           lattice_signal(g, seed, t, 1), e[0], e[1], e[2],
                                           ws[0], ws[1], ws[2]);
    all = all && r.ok() && r.certified;
    w.update(r.ratio / r.bound, t);
  }
  nlohmann::json j = ratio_summary(w, trials);
  j["seed"] = seed;
  j["tolerance"] = 1e-10;
  res.add("normalized_ratio", all && w.value <= 1 + 1e-10, j);
  return res;
}

SuiteResult critical_product_suite(int trials, std::uint64_t seed) {
  SuiteResult res{"product-critical"};
  StabilityReport a = critical_product_stability(4, 1, 1, 0.6, 1, 16, trials, seed);
  res.add("q4", a.ok(), a.to_json());
  StabilityReport b = critical_product_stability(2, 1, 0.5, 0, 0.5, 16, trials, seed);
  res.add("q2", b.ok(), b.to_json());
  return res;
}

SuiteResult algebra_suite(int trials, std::uint64_t seed) {
  SuiteResult res{"algebra"};
  Worst w;
  bool all = true;
  for (int t = 0; t < trials; ++t) {
    TorusGrid g = trial_grid(t);
    std::vector<Signal> fs;
    for (int i = 0; i <= t % 3; ++i) fs.push_back(lattice_signal(g, seed, t, i));
    NormRatioReport r = algebra_check(fs, lattice_signal(g, seed, t, 3), 1, 1, 0);
    all = all && r.ok();
    w.update(r.ratio / r.bound, t);
  }
  nlohmann::json j = ratio_summary(w, trials);
  j["seed"] = seed;
  res.add("certified_q1_s0", all, j);
  return res;
}

SuiteResult slice_suite(int range) {
  SuiteResult res{"slice-norms"};
  struct Config {
    double t0, t1, t2;
    int region;
    double p;
  };
  static const Config kOmega[] = {
      {0, 0, -2, 1, 1},    {0, 0, -1, 1, 1},     {0, 0, 0, 1, 1},     {1, -1, -0.5, 1, 2},
      {0, 0, -0.5, 1, 2},  {0, -2, 0, 2, 1},     {0, -1, 0, 2, 1},    {0.5, 0.5, 0, 2, 1},
      {0, 0, 0, 3, kInf},  {1, -1, 2, 3, 1},     {0, 0, -3, 4, 1},    {-1, 0, -3, 4, 1},
      {-2, 1, -3, 4, 1},   {0.5, -1, -1, 5, 1},  {-1, -1, -1, 5, 1},  {-2, 0, -1, 5, 1},
      {0, 0, -2, 1, kInf}, {0, -1, 0, 2, 2}};
  static const Config kTail[] = {
      {0, 0, -2, 0, 1}, {1, -2, 0, 0, 1}, {0, 1, -3, 0, 1}, {0, -1, -1, 0, kInf}, {2, 0, -2, 0, 2}};
  std::set<std::string> seen;
  nlohmann::json rows = nlohmann::json::array();
  bool all = true;
  for (const auto& c : kOmega) {
    SliceReport r = kernel_slice_norms({c.t0, c.t1, c.t2}, SliceRegion::omega(c.region), c.p, range);
    int group = c.region >= 4 ? 4 : c.region;
    seen.insert(std::to_string(group) + ":" + r.branch);
    all = all && r.ok();
    nlohmann::json j = r.to_json();
    j["ok"] = r.ok();
    rows.push_back(j);
  }
  res.add("omega_regions", all, {{"configs", rows}});

  // Every branch of the bound table, Ω_4 and Ω_5 sharing one.
  static const char* kBranches[] = {"1:t2 < -d/p", "1:t2 = -d/p", "1:t2 > -d/p",
                                    "2:t1 < -d/p", "2:t1 = -d/p", "2:t1 > -d/p",
                                    "3:bounded xi", "4:t0 < -d/p", "4:t0 = -d/p",
                                    "4:t0 > -d/p"};
  nlohmann::json missing = nlohmann::json::array();
  for (const char* b : kBranches)
    if (!seen.count(b)) missing.push_back(b);
  res.add("branch_coverage", missing.empty(),
          {{"configs", std::size(kOmega)}, {"missing", missing}});

  rows = nlohmann::json::array();
  all = true;
  for (const auto& c : kTail) {
    SliceReport r = kernel_slice_norms({c.t0, c.t1, c.t2}, SliceRegion::tail(0.5, 2), c.p, range);
    all = all && r.ok();
    nlohmann::json j = r.to_json();
    j["ok"] = r.ok();
    rows.push_back(j);
  }
  res.add("tail_region", all, {{"configs", rows}});
  return res;
}

SuiteResult wf_product_suite() {
  SuiteResult res{"wf-product"};
  CorpusEntry s1d = corpus_entry("smooth-1d"), s2d = corpus_entry("smooth-2d"),
              e2 = corpus_entry("edge-2d"), ex = corpus_entry("edge-2d-x"),
              c05 = corpus_entry("cusp-0.5"), c25 = corpus_entry("cusp-2.5");
  struct Case {
    const char* name;
    const CorpusEntry* a;
    const CorpusEntry* b;
    ProductMode mode;
    ProductWFParams p;
  };
  auto params = [](double q, double s1, double s2, double s, double N1, double N2,
                   const CorpusEntry& a, const CorpusEntry& b) {
    ProductWFParams p;
    p.q = q;
    p.s1 = s1;
    p.s2 = s2;
    p.s = s;
    p.N1 = N1;
    p.N2 = N2;
    p.order1 = a.min_order(q);
    p.order2 = b.min_order(q);
    return p;
  };
  std::vector<Case> cases = {
      {"case1_smooth2d_edge", &s2d, &e2, ProductMode::thm4_1_case1,
       params(1, 3, -1.5, 0, 0, 0, s2d, e2)},
      {"case1_cusp2.5_smooth", &c25, &s1d, ProductMode::thm4_1_case1,
       params(1, 2, 2, 0, 0, 0, c25, s1d)},
      {"case2_cusp2.5_smooth", &c25, &s1d, ProductMode::thm4_1_case2,
       params(1, 1, 3, 2, 0, 0, c25, s1d)},
      {"case2_edge_smooth2d", &e2, &s2d, ProductMode::thm4_1_case2,
       params(1, -1.5, 3, 1, 0, 0, e2, s2d)},
      {"mixed_edge_edgex_q2", &e2, &ex, ProductMode::thm4_3,
       params(2, 0.25, 0.25, 0, 0.6, 0.6, e2, ex)},
      {"mixed_cusp0.5_cusp2.5", &c05, &c25, ProductMode::thm4_3,
       params(1, 0.25, 1, 0, 1.5, 1.5, c05, c25)},
  };
  for (const auto& c : cases) {
    InclusionReport r = wf_product_check(c.a->signal, c.b->signal, c.mode, c.p);
    nlohmann::json j = r.to_json();
    j["pair"] = {c.a->id, c.b->id};
    j["mode"] = product_mode_name(c.mode);
    res.add(c.name, r.ok(), j);
  }
  return res;
}

SuiteResult wf_convolution_suite() {
  SuiteResult res{"wf-conv"};
  CorpusEntry d1 = corpus_entry("delta-1d"), e2 = corpus_entry("edge-2d"),
              c05 = corpus_entry("cusp-0.5");
  WindowSpec bw;
  bw.width = 8;
  Signal bump1 = make_window(d1.signal.grid, std::vector<int>{0}, bw);
  Signal bump2 = make_window(e2.signal.grid, std::vector<int>{0, 0}, bw);
  auto add = [&](const char* name, const Signal& a, const CorpusEntry& b, double s) {
    InclusionReport r = wf_convolution_check(a, b.signal, 1, s);
    nlohmann::json j = r.to_json();
    j["pair"] = {"bspline-bump-8", b.id};
    res.add(name, r.ok(), j);
  };
  add("bump_delta", bump1, d1, 0);
  add("bump_edge", bump2, e2, 0);
  add("bump_cusp0.5", bump1, c05, 1);
  return res;
}

SuiteResult wf_nonlinearity_suite() {
  SuiteResult res{"wf-nonlinearity"};
  for (const char* id : {"cusp-0.5", "cusp-2.5", "edge-2d", "example-2.10"}) {
    CorpusEntry e = corpus_entry(id);
    for (double s : {0.0, 0.5, 1.0})
      for (double sigma : {s, 2 * s}) {
        if (s == 0 && sigma > s) continue;
        for (int m : {2, 3}) {
          InclusionReport r =
              wf_nonlinearity_check(PolynomialNonlinearity::monomial(1, 0, m), {e.signal}, 1, s,
                                    sigma, 0.5);
          nlohmann::json j = r.to_json();
          j["entry"] = id;
          char key[96];
          std::snprintf(key, sizeof key, "%s_m%d_s%g_sigma%g", id, m, s, sigma);
          res.add(key, r.ok(), j);
        }
      }
  }
  return res;
}

Symbol elliptic_test_symbol() {
  Symbol::XPart b = [](std::span<const double> x) { return cplx(2 + std::sin(x[0])); };
  return Symbol::differential("(2+sin x1)(1+|k|^2)", 2, {{b, 1, {}}, {b, 1, {}, true}});
}

SuiteResult transport_suite() {
  SuiteResult res{"transport"};
  std::vector<Symbol> symbols{elliptic_test_symbol(), Symbol::polynomial({0, 1}),
                              Symbol::laplace_plus_one()};
  for (const CorpusEntry& e : standard_corpus())
    for (const Symbol& a : symbols)
      for (double s : order_probes(e.min_order(1))) {
        TransportReport r = transport_check(a, e.signal, 1, s);
        nlohmann::json j = r.to_json();
        j["entry"] = e.id;
        j["symbol"] = a.name;
        j["s"] = s;
        char key[128];
        std::snprintf(key, sizeof key, "%s|%s|s=%g", e.id.c_str(), a.name.c_str(), s);
        res.add(key, r.ok() && r.certificate.finite(), j);
      }
  return res;
}

SuiteResult inclusion_suite() {
  SuiteResult res{"inclusions"};
  WindowSpec cutoff;
  cutoff.shape = WindowShape::gaussian;
  cutoff.width = 96;
  for (const CorpusEntry& e : standard_corpus()) {
    const TorusGrid& g = e.signal.grid;
    double o = e.min_order(1);
    // The window sits on the first oracle support point, or the origin.
    std::vector<int> center(g.d, 0);
    if (!e.oracle_wf.empty() && !e.oracle_wf[0].support.empty())
      center = e.oracle_wf[0].support[0];
    for (double s : order_probes(o)) {
      InclusionReport w = windowing_check(e.signal, center, cutoff, 1, s);
      nlohmann::json j = w.to_json();
      j["entry"] = e.id;
      res.add("windowing|" + e.id + "|s=" + nlohmann::json(s).dump(), w.ok(), j);

      InclusionReport d = derivative_check(e.signal, 0, 1, s);
      j = d.to_json();
      j["entry"] = e.id;
      res.add("derivative|" + e.id + "|s=" + nlohmann::json(s).dump(), d.ok(), j);
    }
    double top = std::isfinite(o) ? o + 1.5 : 6;
    std::vector<Rung> ladder{{1, top}, {2, top - 0.5}, {kInf, top - 1}};
    InclusionReport m = monotonicity_check(e.signal, ladder);
    nlohmann::json j = m.to_json();
    j["entry"] = e.id;
    res.add("monotonicity|" + e.id, m.ok(), j);
  }
  return res;
}

SuiteResult oracle_suite() {
  SuiteResult res{"oracles"};
  for (const CorpusEntry& e : standard_corpus()) {
    const TorusGrid& g = e.signal.grid;
    for (double s : order_probes(e.min_order(1))) {
      WavefrontQuery q = WavefrontQuery::standard(g, {1, Weight::power(s)});
      WavefrontReport r = estimate_wavefront(e.signal, q);
      OracleMatch m = match_oracle(r, e.oracle_wf, s);
      nlohmann::json j = m.to_json();
      j["singular_cells"] = r.singular_count();
      res.add(e.id + "|fl|s=" + nlohmann::json(s).dump(), m.ok(), j);
    }
    WavefrontQuery q = WavefrontQuery::standard(g, {});
    WavefrontReport r = classical_wavefront(e.signal, q);
    // Reported only: the classical rule widens edge normals by up to two bins.
    OracleMatch m = match_oracle(r, e.oracle_wf, 0);
    nlohmann::json j = m.to_json();
    j["singular_cells"] = r.singular_count();
    j["matches"] = m.ok();
    j.erase("ok");
    res.report["classical"][e.id] = j;
  }
  return res;
}

SuiteResult strictness_suite() {
  SuiteResult res{"strictness"};
  CorpusEntry e = corpus_entry("example-2.10");
  WavefrontQuery q = WavefrontQuery::standard(e.signal.grid, {1, Weight::power(0)});
  std::size_t origin = q.positions.size();
  for (std::size_t p = 0; p < q.positions.size(); ++p)
    if (q.positions[p][0] == 0) origin = p;
  if (origin == q.positions.size()) throw Error("position lattice misses x = 0");

  WavefrontReport c = classical_wavefront(e.signal, q);
  std::size_t classical = 0;
  for (std::size_t t = 0; t < c.directions(); ++t) classical += c.at(origin, t).singular;
  res.add("classical_singular_at_0", classical > 0, {{"directions", classical}});

  std::vector<double> s_list{0, 1, 2};
  SuperiorReport sr = superior_scan(e.signal, q, s_list);
  nlohmann::json passes = nlohmann::json::array();
  bool all = true;
  for (std::size_t si = 0; si < s_list.size(); ++si) {
    bool pass = true;
    for (std::size_t t = 0; t < sr.ndir; ++t) pass = pass && sr.per_s_pass[origin * sr.ndir + t][si];
    passes.push_back({{"s", s_list[si]}, {"pass", pass}});
    all = all && pass;
  }
  res.add("fl1_per_s_pass_at_0", all, {{"scans", passes}});
  return res;
}

SuiteResult bootstrap_case(double q, int d, double s, int k, int m, double r, int n,
                           int variant) {
  SuiteResult res{"bootstrap"};
  BootstrapLedger L = bootstrap_indices(q, d, s, k, m, r, n, variant);
  nlohmann::json j = L.to_json();
  if (L.rejected) {
    res.add("ledger", false, j);
    return res;
  }
  double expected = 2 * s + n - dqc(d, q);
  j["expected_final_index"] = expected;
  res.add("ledger", L.final_index == expected, j);
  return res;
}

SuiteResult bootstrap_table() {
  SuiteResult res{"bootstrap-table"};
  struct Row {
    double q;
    int d;
    double s;
    int k, m;
    double r;
    int n, variant;
    const char* rejection;  // nullptr: accepted
  };
  static const Row kRows[] = {
      {1, 1, 1, 0, 2, 0, 2, 1, nullptr},
      {1, 2, 1.5, 1, 3, 0.5, 3, 1, nullptr},
      {1, 1, 0, 0, 2, 0, 1, 1, nullptr},
      {1, 3, 2, 1, 2, 1, 4, 1, nullptr},
      {2, 1, 1, 0, 2, 0.5, 2, 1, nullptr},
      {2, 2, 2, 1, 3, 1, 5, 1, nullptr},
      {2, 1, 0.75, 0, 4, 0.5, 3, 1, nullptr},
      {kInf, 1, 2, 0, 2, 1.5, 3, 1, nullptr},
      {kInf, 2, 3.5, 1, 3, 2, 6, 1, nullptr},
      {1, 1, 1, 0, 2, 0.5, 1, 2, nullptr},
      {1, 2, 1.5, 1, 2, 0.7, 3, 2, nullptr},
      {1, 2, 1.5, 1, 3, 0.7, 3, 2, nullptr},
      {1, 2, 1.5, 1, 5, 0.7, 3, 2, nullptr},
      {2, 1, 0.25, 0, 2, 1, 2, 1, "s >= d/q'"},
      {2, 2, 0.5, 0, 2, 1, 2, 1, "s >= d/q'"},
      {kInf, 1, 1, 0, 2, 0.5, 3, 1, "r >= d/q'"},
      {1, 1, 1, 2, 3, 1, 3, 1, "n > k + (m - 1)r"},
      {2, 1, 1, 0, 4, 1, 1, 1, "s + n >= d/q' + k + (m - 1)r"},
      {2, 1, 1, 0, 2, 1, 2, 2, "q = 1 for variant 2"},
      {1, 1, 1, 1, 2, 0, 1, 2, "n > k"},
  };
  nlohmann::json rows = nlohmann::json::array();
  bool all = true;
  for (const auto& row : kRows) {
    BootstrapLedger L =
        bootstrap_indices(row.q, row.d, row.s, row.k, row.m, row.r, row.n, row.variant);
    nlohmann::json j = L.to_json();
    bool pass;
    if (row.rejection) {
      pass = L.rejected && L.rejection == row.rejection;
      j["expected_rejection"] = row.rejection;
    } else {
      double expected = 2 * row.s + row.n - dqc(row.d, row.q);
      pass = !L.rejected && L.final_index == expected;
      j["expected_final_index"] = expected;
    }
    j["ok"] = pass;
    all = all && pass;
    rows.push_back(j);
  }
  res.add("table", all, {{"cases", rows}});

  nlohmann::json finals = nlohmann::json::array();
  std::set<double> distinct;
  for (int m : {2, 3, 5}) {
    BootstrapLedger L = bootstrap_indices(1, 2, 1.5, 1, m, 0.7, 3, 2);
    finals.push_back({{"m", m}, {"final_index", L.rejected ? nlohmann::json(nullptr) : nlohmann::json(L.final_index)}});
    distinct.insert(L.rejected ? kInf : L.final_index);
  }
  res.add("variant2_m_invariance", distinct.size() == 1 && !distinct.count(kInf),
          {{"finals", finals}});
  return res;
}

SuiteResult modulation_suite(int trials, int signals, std::uint64_t seed) {
  SuiteResult res{"modulation-equiv"};
  TorusGrid g = TorusGrid::make(1, 256);
  WindowSpec hann{WindowShape::hann, 32, 0}, gauss{WindowShape::gaussian, 64, 0};
  // Windowed random trigonometric polynomial centered at n/2.
  auto bump = [&](std::uint64_t salt, int t, int width, int degree) {
    Signal w = make_window(g, std::vector<int>{g.n / 2}, {WindowShape::bspline, width, 0});
    Signal f = Signal::zeros(g);
    for (int j = 0; j < g.n; ++j) {
      cplx v = 0;
      double x = g.h() * j;
      for (int m = -degree; m <= degree; ++m)
        v += cplx(hashed_normal(seed ^ salt, 2 * t, m + 100),
                  hashed_normal(seed ^ salt, 2 * t + 1, m + 100)) *
             std::exp(cplx(0, m * x));
      f.values[j] = v * w.values[j];
    }
    return f;
  };

  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    Signal f = bump(0x6d6f6e6f, t, 32 + (t % 3) * 16, 3 + t % 10);
    for (double q : {1.0, 1.5, 2.0, 4.0}) {
      double qc = conjugate(q);
      EmbeddingReport e = embedding_check(f, q, std::min(q, qc), std::max(q, qc), hann);
      worst = std::max(worst, e.monotone_ratio);
    }
  }
  res.add("monotonicity", worst <= 1 + 1e-10,
          {{"trials", trials}, {"max_ratio", worst}, {"tolerance", 1e-10}});

  nlohmann::json rows = nlohmann::json::array();
  bool all = true;
  for (int width : {16, 32, 64}) {
    std::vector<Signal> fs;
    for (int t = 0; t < signals; ++t) fs.push_back(bump(0x65717576, t, width, 4 + 12 * (t % 2)));
    for (double q : {1.0, 2.0})
      for (double p : {1.0, 2.0, kInf}) {
        EquivalenceReport a = equivalence_check(fs, q, 0, p, hann);
        EquivalenceReport b = equivalence_check(fs, q, 1, p, gauss);
        for (auto* r : {&a, &b}) {
          nlohmann::json j = r->to_json();
          j["window"] = r == &a ? "hann-32" : "gaussian-64";
          j["width"] = width;
          all = all && r->spread() < 10;
          rows.push_back(j);
        }
      }
  }
  res.add("equivalence_spread", all, {{"limit", 10}, {"signals", signals}, {"runs", rows}});

  for (const CorpusEntry& e : standard_corpus())
    for (double s : {-1.0, 0.0, 1.0, 2.0, 3.0}) {
      InclusionReport r = modulation_wf_agreement(e.signal, 1, s);
      nlohmann::json j = r.to_json();
      j["entry"] = e.id;
      res.add("wf_agreement|" + e.id + "|s=" + nlohmann::json(s).dump(), r.ok(), j);
    }
  return res;
}

}  // namespace flw
