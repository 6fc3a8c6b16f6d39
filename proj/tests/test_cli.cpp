#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "flw/cli.hpp"
#include "flw/signal_io.hpp"
#include "json.hpp"

using namespace flw;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "flw");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("verify duality passes") {
  Run r = run({"verify", "duality", "--trials", "100", "--seed", "7"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("ok") == true);
  CHECK(j.at("target") == "duality");
  CHECK(j.at("params").at("seed") == 7);
}

TEST_CASE("verify output is byte-identical across runs") {
  Run a = run({"verify", "duality", "--trials", "20", "--seed", "3"});
  Run b = run({"verify", "duality", "--trials", "20", "--seed", "3"});
  CHECK(a.out == b.out);
}

TEST_CASE("verify bootstrap") {
  Run r = run({"verify", "bootstrap"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("report").at("ledger").at("final_index") == 4);

  Run rej = run({"verify", "bootstrap", "--q", "inf", "--r", "0.5", "--s", "0.5"});
  CHECK(rej.code == 1);
  CHECK(nlohmann::json::parse(rej.out).at("ok") == false);
}

TEST_CASE("usage errors") {
  CHECK(run({"verify", "duality", "--frobnicate"}).code == 2);
  CHECK(run({"verify", "nothing"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"corpus", "emit", "no-such-id"}).code == 2);
  CHECK(run({"corpus", "emit", "delta-1d", "--binary"}).code == 2);
}

TEST_CASE("corpus list and emit") {
  Run l = run({"corpus", "list"});
  CHECK(l.code == 0);
  CHECK(std::count(l.out.begin(), l.out.end(), '\n') == 11);
  CHECK(l.out.find("cusp-0.5\n") != std::string::npos);

  auto dir = std::filesystem::temp_directory_path() / "flw_cli_test";
  std::filesystem::create_directories(dir);
  std::string bin = (dir / "cusp.bin").string(), js = (dir / "cusp.json").string();
  CHECK(run({"corpus", "emit", "cusp-0.5", "--n", "64", "--output", bin, "--binary"}).code == 0);
  CHECK(run({"corpus", "emit", "--id", "cusp-0.5", "--n", "64", "--output", js}).code == 0);
  Signal a = load_signal(bin), b = load_signal(js);
  CHECK(a.grid.n == 64);
  CHECK(a.values == b.values);

  Run o = run({"corpus", "emit", "delta-1d", "--oracle"});
  CHECK(o.code == 0);
  CHECK(nlohmann::json::parse(o.out).at("oracle").size() == 1);
}

TEST_CASE("norm and wavefront on files") {
  auto dir = std::filesystem::temp_directory_path() / "flw_cli_test";
  std::filesystem::create_directories(dir);
  std::string zero = (dir / "zero.json").string();
  save_signal(Signal::zeros(TorusGrid::make(1, 32)), zero);
  Run n = run({"norm", "--input", zero, "--q", "2", "--weight", "s:1"});
  CHECK(n.code == 0);
  CHECK(n.out == "0\n");
  CHECK(run({"norm", "--input", (dir / "missing.json").string()}).code != 0);

  std::string delta = (dir / "delta.json").string();
  CHECK(run({"corpus", "emit", "delta-1d", "--n", "128", "--output", delta}).code == 0);
  Run w1 = run({"wavefront", "--input", delta, "--weight", "s:0.5"});
  Run w2 = run({"wavefront", "--input", delta, "--weight", "s:0.5"});
  CHECK(w1.code == 0);
  CHECK(w1.out == w2.out);
  Run csv = run({"wavefront", "--input", delta, "--weight", "s:0.5", "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.find(',') != std::string::npos);
}

TEST_CASE("installed binary") {
  std::string cmd = std::string("\"") + FLW_CLI_PATH + "\" verify bootstrap > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  cmd = std::string("\"") + FLW_CLI_PATH + "\" --bogus > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
