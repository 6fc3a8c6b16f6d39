#include "flw/weight.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "flw/rng.hpp"
#include "json.hpp"

namespace flw {

Weight Weight::power(double s) {
  if (!std::isfinite(s)) throw Error("weight order must be finite");
  Weight w;
  w.kind = Kind::power;
  w.s = s;
  w.witness = std::abs(s);
  return w;
}

Weight Weight::blocks(std::vector<int> sizes, std::vector<double> orders) {
  if (sizes.size() != orders.size() || sizes.empty()) throw Error("block weight shape mismatch");
  double wit = 0;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    if (sizes[b] < 1) throw Error("empty weight block");
    wit = std::max(wit, std::abs(orders[b]));
  }
  Weight w;
  w.kind = Kind::block_power;
  w.block_sizes = std::move(sizes);
  w.block_orders = std::move(orders);
  w.witness = wit;
  return w;
}

Weight Weight::from_table(const TorusGrid& g, std::vector<double> values) {
  if (values.size() != g.size()) throw Error("weight table length does not match grid");
  for (double v : values)
    if (!(v > 0) || !std::isfinite(v)) throw Error("weight table must be positive and finite");
  Weight w;
  w.kind = Kind::table;
  w.table_grid = g;
  w.table = std::move(values);
  return w;
}

namespace {

double bracket_pow(double r2, double s) {
  if (s == 0) return 1.0;
  return std::pow(1.0 + r2, 0.5 * s);
}

}  // namespace

double Weight::at_real(std::span<const double> x) const {
  switch (kind) {
    case Kind::power: {
      double r2 = 0;
      for (double c : x) r2 += c * c;
      return bracket_pow(r2, s);
    }
    case Kind::block_power: {
      std::size_t off = 0;
      double v = 1;
      for (std::size_t b = 0; b < block_sizes.size(); ++b) {
        double r2 = 0;
        for (int i = 0; i < block_sizes[b]; ++i) {
          if (off >= x.size()) throw Error("block weight dimension mismatch");
          r2 += x[off] * x[off];
          ++off;
        }
        v *= bracket_pow(r2, block_orders[b]);
      }
      if (off != x.size()) throw Error("block weight dimension mismatch");
      return v;
    }
    case Kind::table:
      throw Error("table weight has no continuous argument");
  }
  return 1;
}

double Weight::at(std::span<const int> k) const {
  if (kind == Kind::table) {
    if (static_cast<int>(k.size()) != table_grid.d) throw Error("table lookup off-lattice");
    for (int c : k)
      if (c < -table_grid.n / 2 || c >= table_grid.n / 2) throw Error("table lookup off-lattice");
    return table[lattice(table_grid).index(k)];
  }
  std::vector<double> x(k.begin(), k.end());
  return at_real(x);
}

std::vector<double> Weight::on_lattice(const TorusGrid& g) const {
  if (kind == Kind::table) {
    if (!(g == table_grid)) throw Error("table weight defined on a different lattice");
    return table;
  }
  const FrequencyLattice& L = lattice(g);
  std::vector<double> out(L.size());
  if (kind == Kind::power) {
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = s == 0 ? 1.0 : std::pow(L.bracket[i], s);
    return out;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(L.k(i));
  return out;
}

std::string Weight::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::power:
      os << "s:" << s;
      break;
    case Kind::block_power:
      os << "blocks:";
      for (std::size_t b = 0; b < block_sizes.size(); ++b)
        os << (b ? "," : "") << block_sizes[b] << "@" << block_orders[b];
      break;
    case Kind::table:
      os << "table:" << table_grid.d << "x" << table_grid.n;
      break;
  }
  return os.str();
}

Weight parse_weight(const std::string& spec) {
  if (spec.rfind("s:", 0) == 0) {
    std::size_t pos = 0;
    std::string body = spec.substr(2);
    double s = std::stod(body, &pos);
    if (pos != body.size()) throw Error("bad weight spec: " + spec);
    return Weight::power(s);
  }
  if (spec.rfind("table:", 0) == 0) {
    std::ifstream in(spec.substr(6));
    if (!in) throw Error("cannot open weight table: " + spec.substr(6));
    nlohmann::json j;
    in >> j;
    TorusGrid g = TorusGrid::make(j.at("d").get<int>(), j.at("n").get<int>());
    return Weight::from_table(g, j.at("values").get<std::vector<double>>());
  }
  throw Error("unknown weight spec: " + spec);
}

ModerationReport check_moderate(const Weight& w, const Weight& v, int d, int range,
                                std::size_t sample_count, std::uint64_t seed) {
  if (range < 0) throw Error("negative range");
  int lo = -range, hi = range;
  auto clamp_to = [&](const Weight& u) {
    if (u.kind == Weight::Kind::table) {
      lo = std::max(lo, -u.table_grid.n / 2);
      hi = std::min(hi, u.table_grid.n / 2 - 1);
    }
  };
  clamp_to(w);
  clamp_to(v);
  const int side = hi - lo + 1;
  auto in_range = [&](std::span<const int> z) {
    for (int c : z)
      if (c < lo || c > hi) return false;
    return true;
  };
  bool table = w.kind == Weight::Kind::table || v.kind == Weight::Kind::table;

  ModerationReport rep;
  std::vector<int> x(d), y(d), z(d);
  auto visit = [&] {
    for (int a = 0; a < d; ++a) z[a] = x[a] + y[a];
    if (table && !in_range(z)) return;
    double r = w.at(z) / (w.at(x) * v.at(y));
    ++rep.pairs;
    if (r > rep.max_ratio) {
      rep.max_ratio = r;
      rep.x = x;
      rep.y = y;
    }
  };

  double points = std::pow(static_cast<double>(side), d);
  double all_pairs = points * points;
  if (static_cast<double>(sample_count) >= all_pairs) {
    std::size_t npts = static_cast<std::size_t>(points);
    for (std::size_t i = 0; i < npts; ++i) {
      std::size_t t = i;
      for (int a = d - 1; a >= 0; --a) {
        x[a] = lo + static_cast<int>(t % side);
        t /= side;
      }
      for (std::size_t j = 0; j < npts; ++j) {
        std::size_t u = j;
        for (int a = d - 1; a >= 0; --a) {
          y[a] = lo + static_cast<int>(u % side);
          u /= side;
        }
        visit();
      }
    }
    return rep;
  }
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_int_distribution<int> pick(lo, hi);
  for (std::size_t s = 0; s < sample_count; ++s) {
    for (int a = 0; a < d; ++a) {
      x[a] = pick(rng);
      y[a] = pick(rng);
    }
    visit();
  }
  return rep;
}

Weight SectionedWeight::section(const TorusGrid& g, std::span<const double> x) const {
  Weight u = Weight::power(t);
  double ux = u.at_real(x);
  std::vector<double> vals = Weight::power(s).on_lattice(g);
  for (double& v : vals) v *= ux;
  return Weight::from_table(g, std::move(vals));
}

double SectionedWeight::section_ratio_bound(std::span<const double> x1,
                                            std::span<const double> x2) const {
  std::vector<double> dx(x1.size());
  for (std::size_t a = 0; a < dx.size(); ++a) dx[a] = x1[a] - x2[a];
  double c = std::pow(2.0, 0.5 * std::abs(t));
  return c * Weight::power(std::abs(t)).at_real(dx);
}

}  // namespace flw
