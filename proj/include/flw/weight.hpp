#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flw/grid.hpp"

namespace flw {

// Polynomially moderate weight. Power kinds take any argument; table kind is
// defined on one centered lattice only.
struct Weight {
  enum class Kind { power, block_power, table };

  Kind kind = Kind::power;
  double s = 0;                     // power: <ξ>^s
  std::vector<int> block_sizes;     // block_power: Π_b <ξ_b>^{s_b}
  std::vector<double> block_orders;
  TorusGrid table_grid{};
  std::vector<double> table;        // centered lattice order
  std::optional<double> witness;    // order of the moderating v = <·>^witness

  static Weight power(double s);
  static Weight blocks(std::vector<int> sizes, std::vector<double> orders);
  static Weight from_table(const TorusGrid& g, std::vector<double> values);

  double at(std::span<const int> k) const;
  double at_real(std::span<const double> x) const;
  // Values on every lattice point of g, in centered order.
  std::vector<double> on_lattice(const TorusGrid& g) const;
  std::string describe() const;
};

// "s:<float>" or "table:<path>" (JSON {"d","n","values"}).
Weight parse_weight(const std::string& spec);

struct ModerationReport {
  double max_ratio = 0;
  std::vector<int> x, y;  // witness pair
  std::size_t pairs = 0;
};

// Sup of ω(x+y)/(ω(x)v(y)) over lattice pairs in [-range, range]^d. Exhaustive
// when sample_count covers every pair, otherwise seeded sampling.
ModerationReport check_moderate(const Weight& w, const Weight& v, int d, int range,
                                std::size_t sample_count, std::uint64_t seed);

// ω(x,ξ) = <ξ>^s <x>^t, reduced to ξ-sections at a fixed x.
struct SectionedWeight {
  double s = 0;
  double t = 0;

  Weight section(const TorusGrid& g, std::span<const double> x) const;
  // Moderation bound for two sections: C·v(x1-x2) with v = <·>^{|t|}.
  double section_ratio_bound(std::span<const double> x1, std::span<const double> x2) const;
};

}  // namespace flw
