#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flw/grid.hpp"
#include "json.hpp"

namespace flw {

// One connected piece of the known singular structure.
struct OracleComponent {
  std::vector<std::vector<int>> support;        // singular sample points
  std::vector<std::vector<double>> directions;  // empty: every direction
  // FL^q_s,loc membership holds exactly for s < order(q), with
  // order(q) = order1 + gamma (1 - 1/q).
  double order1 = 0;
  double gamma = 0;
  // Decay rate of the localized spectrum along the singular directions.
  double decay = 0;

  double order(double q) const;
};

struct MembershipRow {
  double q, s;
  bool in;
};

struct CorpusEntry {
  std::string id;
  Signal signal;
  std::vector<OracleComponent> oracle_wf;
  std::vector<MembershipRow> oracle_fl;
  nlohmann::json params = nlohmann::json::object();

  // Smallest FL^q order over components, +inf when smooth.
  double min_order(double q) const;
};

// Random real trigonometric polynomial of the given degree.
CorpusEntry make_smooth(const TorusGrid& g, std::uint64_t seed, int degree = 3);
// Unit impulse at x.
CorpusEntry make_delta(const TorusGrid& g, std::vector<int> x);

enum class EdgeProfile { sawtooth, step };
// d = 2: a jump across the grid line {x_axis = offset}; normal ±e_axis.
// sawtooth has that single jump; step is a periodic box with a second jump
// half a period away.
CorpusEntry make_edge(const TorusGrid& g, int axis, int offset,
                      EdgeProfile profile = EdgeProfile::sawtooth);
// d = 1: |2 sin((x - x*)/2)|^a, the periodic version of |x - x*|^a.
CorpusEntry make_power_cusp(const TorusGrid& g, double a, int x);
// d = 1: Σ_{j=1..count} f_j / (j² M_j) with f_j a cusp of FL^q order in
// (j+2, j+3] singular at sample count+1-j, so the pieces accumulate toward 0
// with rising regularity.
CorpusEntry make_example_2_10(const TorusGrid& g, int count, double q = 1);

// Sum of entries on the same grid; the oracle is the union.
CorpusEntry combine(const std::string& id, const CorpusEntry& a, const CorpusEntry& b);

// Ids accepted by corpus_entry; the grid defaults to n = 256 (d = 1) or
// n = 128 (d = 2) when n = 0.
std::vector<std::string> corpus_ids();
CorpusEntry corpus_entry(const std::string& id, int n = 0);
// The oracle-recovery set: smooth, delta and edge entries, cusps 0.5 and 2.5,
// the accumulating-cusp entry with three pieces.
std::vector<CorpusEntry> standard_corpus();

}  // namespace flw
