#include "flw/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "flw/corpus.hpp"
#include "flw/modulation.hpp"
#include "flw/parallel.hpp"
#include "flw/signal_io.hpp"
#include "flw/verify.hpp"

#ifndef FLW_BUILD_ID
#define FLW_BUILD_ID "unknown"
#endif

namespace flw {

const char* build_id() { return FLW_BUILD_ID; }

const std::vector<std::string>& verify_targets() {
  static const std::vector<std::string> t{
      "tf-bounds", "duality",   "young-conv", "product",   "product-critical",
      "wf-product", "wf-conv",  "algebra",    "slice-norms", "transport",
      "bootstrap", "modulation-equiv", "corpus-oracles"};
  return t;
}

namespace {

struct UsageError : Error {
  using Error::Error;
};

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// {"d", "n", "re", "im"} with (n^d)^2 entries, row-major in the first lattice index.
KernelGrid load_kernel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  TorusGrid g = TorusGrid::make(j.at("d").get<int>(), j.at("n").get<int>());
  KernelGrid F = KernelGrid::zeros(g);
  auto re = j.at("re").get<std::vector<double>>();
  auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != F.values.size() || im.size() != F.values.size())
    throw Error("kernel size does not match (n^d)^2");
  for (std::size_t i = 0; i < re.size(); ++i) F.values[i] = cplx(re[i], im[i]);
  return F;
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

struct VerifyArgs {
  std::string target;
  std::uint64_t seed = 7;
  int trials = 0;
  int signals = 100;
  int range = 128;
  bool table = false;
  std::string q = "1";
  int d = 1;
  double s = 1;
  int k = 0, m = 2;
  double r = 0;
  int n = 2;
  int variant = 1;
};

SuiteResult merge(const std::string& name, std::vector<SuiteResult> parts) {
  SuiteResult out{name};
  for (auto& p : parts) {
    out.ok = out.ok && p.ok;
    out.report[p.name] = std::move(p.report);
  }
  return out;
}

int trials_or(int trials, int fallback) { return trials > 0 ? trials : fallback; }

std::pair<SuiteResult, nlohmann::json> run_target(const VerifyArgs& a) {
  nlohmann::json params = {{"seed", a.seed}};
  auto with_trials = [&](int fallback) {
    int t = trials_or(a.trials, fallback);
    params["trials"] = t;
    return t;
  };
  const std::string& t = a.target;
  if (t == "duality") return {identity_suite(with_trials(500), a.seed), params};
  if (t == "tf-bounds") {
    int n = with_trials(1000);
    return {merge(t, {tf_bound_suite(n, a.seed), tf_case2_stability(trials_or(a.trials, 200), a.seed)}),
            params};
  }
  if (t == "young-conv") return {young_suite(with_trials(500), a.seed), params};
  if (t == "product") return {product_suite(with_trials(500), a.seed), params};
  if (t == "product-critical") return {critical_product_suite(with_trials(200), a.seed), params};
  if (t == "algebra") return {algebra_suite(with_trials(200), a.seed), params};
  if (t == "slice-norms") {
    params["range"] = a.range;
    return {slice_suite(a.range), params};
  }
  if (t == "wf-product")
    return {merge(t, {wf_product_suite(), wf_nonlinearity_suite()}), params};
  if (t == "wf-conv") return {wf_convolution_suite(), params};
  if (t == "transport") return {transport_suite(), params};
  if (t == "corpus-oracles")
    return {merge(t, {oracle_suite(), strictness_suite(), inclusion_suite()}), params};
  if (t == "modulation-equiv") {
    int n = with_trials(200);
    params["signals"] = a.signals;
    return {modulation_suite(n, a.signals, a.seed), params};
  }
  if (t == "bootstrap") {
    if (a.table) {
      params["table"] = true;
      return {bootstrap_table(), params};
    }
    double q = parse_exponent(a.q);
    params.update({{"q", format_exponent(q)}, {"d", a.d}, {"s", a.s}, {"k", a.k}, {"m", a.m},
                   {"r", a.r}, {"n", a.n}, {"variant", a.variant}});
    return {bootstrap_case(q, a.d, a.s, a.k, a.m, a.r, a.n, a.variant), params};
  }
  throw UsageError("unknown verify target: " + t);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fourier-Lebesgue wave-front toolkit", "flw"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

  // norm
  auto* norm = app.add_subcommand("norm", "norm of an input file");
  std::string n_input, n_space = "fl", n_q = "2", n_p = "2", n_weight = "s:0", n_window = "hann";
  double n_t = 0;
  int n_width = 32, n_order = 1;
  norm->add_option("--input", n_input, "signal file (kernel file for mixed)")->required();
  norm->add_option("--space", n_space, "fl | mixed | mod")
      ->check(CLI::IsMember({"fl", "mixed", "mod"}));
  norm->add_option("--q", n_q, "outer exponent");
  norm->add_option("--p", n_p, "inner exponent (mixed, mod)");
  norm->add_option("--weight", n_weight, "s:<order> or table:<path>");
  norm->add_option("--t", n_t, "spatial weight order <x>^t (mod)");
  norm->add_option("--window", n_window, "bspline | hann | gaussian | plateau (mod)");
  norm->add_option("--width", n_width, "window width in cells (mod)");
  norm->add_option("--order", n_order, "mixed-norm order 1 or 2")->check(CLI::Range(1, 2));

  // wavefront
  auto* wf = app.add_subcommand("wavefront", "wave-front scan with a report");
  std::string w_input, w_mode = "fl", w_q = "1", w_weight = "s:0", w_format = "json", w_output;
  int w_step = 16;
  wf->add_option("--input", w_input, "signal file")->required();
  wf->add_option("--mode", w_mode, "fl | classical | modulation")
      ->check(CLI::IsMember({"fl", "classical", "modulation"}));
  wf->add_option("--q", w_q, "exponent");
  wf->add_option("--weight", w_weight, "s:<order> or table:<path>");
  wf->add_option("--step", w_step, "position lattice spacing")->check(CLI::PositiveNumber);
  wf->add_option("--format", w_format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  wf->add_option("--output", w_output, "report path (default stdout)");

  // verify
  auto* ver = app.add_subcommand("verify", "run a verification target");
  VerifyArgs va;
  ver->add_option("target", va.target, "target")->required()->check(CLI::IsMember(verify_targets()));
  ver->add_option("--seed", va.seed, "master seed");
  ver->add_option("--trials", va.trials, "random trials (0: target default)")
      ->check(CLI::NonNegativeNumber);
  ver->add_option("--signals", va.signals, "signals per equivalence run")
      ->check(CLI::PositiveNumber);
  ver->add_option("--range", va.range, "slice lattice range")->check(CLI::PositiveNumber);
  ver->add_flag("--table", va.table, "bootstrap: run the parameter table");
  ver->add_option("--q", va.q, "bootstrap: exponent");
  ver->add_option("--d", va.d, "bootstrap: dimension");
  ver->add_option("--s", va.s, "bootstrap: starting index");
  ver->add_option("--k", va.k, "bootstrap: jet order");
  ver->add_option("--m", va.m, "bootstrap: nonlinearity degree");
  ver->add_option("--r", va.r, "bootstrap: r");
  ver->add_option("--n", va.n, "bootstrap: operator order");
  ver->add_option("--variant", va.variant, "bootstrap: 1 or 2");

  // corpus
  auto* corp = app.add_subcommand("corpus", "list or emit corpus entries");
  corp->require_subcommand(1);
  auto* list = corp->add_subcommand("list", "list entry ids");
  auto* emit = corp->add_subcommand("emit", "write one entry as a signal file");
  std::string c_id, c_output;
  int c_n = 0;
  bool c_binary = false, c_oracle = false;
  emit->add_option("id,--id", c_id, "entry id")->required()->check(CLI::IsMember(corpus_ids()));
  emit->add_option("--n", c_n, "samples per axis (0: default)")->check(CLI::NonNegativeNumber);
  emit->add_option("--output", c_output, "signal path (default stdout, JSON)");
  emit->add_flag("--binary", c_binary, "binary format (needs --output)");
  emit->add_flag("--oracle", c_oracle, "print the oracle instead of the signal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return 2;
  }

  try {
    set_jobs(jobs);
    if (*norm) {
      double q = parse_exponent(n_q), p = parse_exponent(n_p);
      double v = 0;
      if (n_space == "mixed") {
        v = mixed_norm(load_kernel(n_input), p, q, n_order);
      } else {
        Signal f = load_signal(n_input);
        Weight w = parse_weight(n_weight);
        if (n_space == "fl") {
          v = fl_norm(f, {q, w});
        } else {
          if (w.kind != Weight::Kind::power) throw UsageError("mod norms take s:<order> weights");
          v = modulation_norm(f, p, q, {w.s, n_t}, {parse_window_shape(n_window), n_width, 0});
        }
      }
      out << format_number(v) << "\n";
      return 0;
    }
    if (*wf) {
      Signal f = load_signal(w_input);
      FLNormSpec spec{parse_exponent(w_q), parse_weight(w_weight)};
      WavefrontQuery q = WavefrontQuery::standard(f.grid, spec, w_step);
      WavefrontReport r = w_mode == "classical"    ? classical_wavefront(f, q)
                          : w_mode == "modulation" ? modulation_wavefront(f, q)
                                                   : estimate_wavefront(f, q);
      std::string text;
      if (w_format == "csv") {
        text = r.to_csv();
      } else {
        nlohmann::json j = r.to_json();
        j["build"] = build_id();
        j["input"] = w_input;
        text = j.dump(2) + "\n";
      }
      write_text(text, w_output, out);
      return 0;
    }
    if (*ver) {
      auto [res, params] = run_target(va);
      nlohmann::json j = {{"target", va.target}, {"build", build_id()}, {"params", params},
                          {"ok", res.ok},        {"report", res.report}};
      out << j.dump(2) << "\n";
      return res.ok ? 0 : 1;
    }
    if (*list) {
      for (const auto& id : corpus_ids()) out << id << "\n";
      return 0;
    }
    if (*emit) {
      CorpusEntry e = corpus_entry(c_id, c_n);
      if (c_oracle) {
        nlohmann::json comps = nlohmann::json::array();
        for (const auto& c : e.oracle_wf)
          comps.push_back({{"support", c.support},
                           {"directions", c.directions},
                           {"order1", c.order1},
                           {"gamma", c.gamma},
                           {"decay", c.decay}});
        nlohmann::json j = {{"id", e.id}, {"d", e.signal.grid.d}, {"n", e.signal.grid.n},
                            {"params", e.params}, {"oracle", comps}};
        write_text(j.dump(2) + "\n", c_output, out);
        return 0;
      }
      if (c_output.empty()) {
        if (c_binary) throw UsageError("--binary needs --output");
        out << signal_to_json(e.signal).dump() << "\n";
      } else {
        save_signal(e.signal, c_output, c_binary);
      }
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    nlohmann::json j = {{"build", build_id()}, {"ok", false}, {"error", e.what()}};
    out << j.dump(2) << "\n";
    return 1;
  }
  return 2;
}

}  // namespace flw
