// One line per acceptance criterion; the full JSON goes to acceptance_report.json.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "flw/cli.hpp"
#include "flw/verify.hpp"

using namespace flw;

namespace {

constexpr std::uint64_t kSeed = 7;

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<std::vector<SuiteResult>()> run;
};

void failing_keys(const nlohmann::json& report, const std::string& prefix,
                  std::vector<std::string>& out) {
  for (auto it = report.begin(); it != report.end(); ++it) {
    if (!it.value().is_object()) continue;
    if (it.value().contains("ok") && it.value()["ok"].is_boolean()) {
      if (!it.value()["ok"].get<bool>()) out.push_back(prefix + it.key());
    } else {
      failing_keys(it.value(), prefix + it.key() + "/", out);
    }
  }
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  std::vector<Criterion> criteria = {
      {1, "lattice identities (500 instances, 1e-10 relative)", 60,
       [] { return std::vector<SuiteResult>{identity_suite(500, kSeed, 1e-10)}; }},
      {2, "certified inequalities (TF 1/3 x1000, Young and product x500)", 120,
       [] {
         return std::vector<SuiteResult>{tf_bound_suite(1000, kSeed), young_suite(500, kSeed),
                                         product_suite(500, kSeed)};
       }},
      {3, "empirical-constant stability n=16 -> 32 (200 trials, < 50%)", 600,
       [] {
         return std::vector<SuiteResult>{tf_case2_stability(200, kSeed),
                                         critical_product_suite(200, kSeed)};
       }},
      {4, "slice-norm constants, residual <= 0, range 128", 120,
       [] { return std::vector<SuiteResult>{slice_suite(128)}; }},
      {5, "wave-front oracle recovery on the corpus", 300,
       [] { return std::vector<SuiteResult>{oracle_suite()}; }},
      {6, "inclusion theorems at verdict level", 600,
       [] {
         return std::vector<SuiteResult>{inclusion_suite(), wf_convolution_suite(),
                                         wf_product_suite(), wf_nonlinearity_suite(),
                                         transport_suite()};
       }},
      {7, "strictness exhibit (accumulating cusps at x = 0)", 600,
       [] { return std::vector<SuiteResult>{strictness_suite()}; }},
      {8, "bootstrap ledger (20 cases)", 1,
       [] { return std::vector<SuiteResult>{bootstrap_table()}; }},
      {9, "modulation monotonicity, equivalence spread, WF agreement", 600,
       [] { return std::vector<SuiteResult>{modulation_suite(200, 100, kSeed)}; }},
  };

  nlohmann::json all = {{"build", build_id()}, {"seed", kSeed}};
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<SuiteResult> parts;
    std::string error;
    try {
      parts = c.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = error.empty();
    nlohmann::json rep = nlohmann::json::object();
    std::vector<std::string> bad;
    for (auto& p : parts) {
      ok = ok && p.ok;
      failing_keys(p.report, p.name + "/", bad);
      rep[p.name] = p.report;
    }
    bool in_time = secs <= c.budget_s;
    ok = ok && in_time;
    failed += !ok;
    std::printf("[%s] criterion %d: %s  (%.1f s, budget %.0f s)", ok ? "PASS" : "FAIL", c.id,
                c.name, secs, c.budget_s);
    if (!error.empty()) std::printf("  error: %s", error.c_str());
    if (!in_time) std::printf("  over budget");
    for (std::size_t i = 0; i < bad.size() && i < 8; ++i) std::printf("\n    failed: %s", bad[i].c_str());
    if (bad.size() > 8) std::printf("\n    ... %zu more", bad.size() - 8);
    std::printf("\n");
    all["criterion_" + std::to_string(c.id)] = {{"ok", ok}, {"seconds", secs}, {"report", rep}};
  }
  std::ofstream("acceptance_report.json") << all.dump(2) << "\n";
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
