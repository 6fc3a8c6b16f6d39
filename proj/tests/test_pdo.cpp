#include <cmath>
#include <fstream>
#include <random>

#include "doctest.h"
#include "flw/corpus.hpp"
#include "flw/pdo.hpp"
#include "flw/rng.hpp"
#include "flw/verify.hpp"

using namespace flw;

namespace {

Signal mode(const TorusGrid& g, int k) {
  Signal f = Signal::zeros(g);
  for (int j = 0; j < g.n; ++j) f.values[j] = std::exp(cplx(0, k * g.h() * j));
  return f;
}

double max_dev(const Signal& a, const Signal& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return d;
}

}  // namespace

TEST_CASE("quantization of multipliers") {
  TorusGrid g = TorusGrid::make(1, 32);
  Signal e3 = mode(g, 3);
  Signal d = quantize_apply(Symbol::dx1(), e3);
  for (int j = 0; j < g.n; ++j) CHECK(std::abs(d.values[j] - cplx(0, 3) * e3.values[j]) < 1e-12);

  Signal l = quantize_apply(Symbol::laplace_plus_one(), e3);
  for (int j = 0; j < g.n; ++j) CHECK(std::abs(l.values[j] - 10.0 * e3.values[j]) < 1e-11);

  Signal p = quantize_apply(Symbol::polynomial({1, 0, 2}), e3);
  for (int j = 0; j < g.n; ++j) CHECK(std::abs(p.values[j] - 19.0 * e3.values[j]) < 1e-11);
  CHECK(quantize_apply(Symbol::dx1(), Signal::zeros(g)).values == Signal::zeros(g).values);
}

TEST_CASE("x-dependent symbol against the defining sum") {
  TorusGrid g = TorusGrid::make(1, 16);
  Symbol a = elliptic_test_symbol();
  auto rng = trial_stream(3, 0);
  std::normal_distribution<double> N;
  Signal f = Signal::zeros(g);
  for (auto& v : f.values) v = cplx(N(rng), N(rng));
  Spectrum F = forward_transform(f);
  const FrequencyLattice& L = lattice(g);
  Signal out = quantize_apply(a, f);
  for (int j = 0; j < g.n; ++j) {
    cplx acc = 0;
    for (std::size_t k = 0; k < L.size(); ++k)
      acc += a.eval(g, j, L.k(k)) * F.coeffs[k] * std::exp(cplx(0, L.k(k)[0] * g.h() * j));
    acc /= std::sqrt(2 * kPi);
    CHECK(std::abs(acc - out.values[j]) < 1e-10);
  }

  std::vector<cplx> table(g.size() * g.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    for (std::size_t k = 0; k < L.size(); ++k) table[j * g.size() + k] = a.eval(g, j, L.k(k));
  Symbol t = Symbol::from_table(g, 2, table);
  CHECK(max_dev(quantize_apply(t, f), out) < 1e-10);
  CHECK_THROWS_AS(quantize_apply(t, Signal::zeros(TorusGrid::make(1, 8))), Error);
}

TEST_CASE("finite differences approximate the symbol at low frequency") {
  TorusGrid g = TorusGrid::make(2, 64);
  Signal f = Signal::zeros(g);
  std::vector<int> idx(2);
  for (std::size_t i = 0; i < g.size(); ++i) {
    unravel(g, i, idx);
    f.values[i] = std::exp(cplx(0, g.h() * (2 * idx[0] - 3 * idx[1])));
  }
  for (const Symbol& a : {Symbol::dx1(), Symbol::laplace_plus_one(), elliptic_test_symbol()}) {
    Signal fd = apply_differential(a, f), sp = quantize_apply(a, f);
    CHECK(max_dev(fd, sp) < 1e-6 * 30);
  }
  Symbol local = Symbol::differential("d2", 1, {{{}, cplx(0, 1), {0, 1}}});
  Signal d2 = apply_differential(local, f);
  CHECK(std::abs(d2.values[5] - cplx(0, -3) * f.values[5]) < 1e-6);

  Signal imp = Signal::zeros(TorusGrid::make(1, 64));
  imp.values[32] = 1;
  Signal k = apply_differential(Symbol::laplace_plus_one(), imp);
  for (int j = 0; j < 64; ++j)
    if (std::abs(j - 32) > 4) CHECK(k.values[j] == cplx(0));
  CHECK_THROWS_AS(apply_differential(Symbol::multiplier("m", 0, [](std::span<const int>) { return cplx(1); }), imp),
                  Error);
}

TEST_CASE("symbol parsing") {
  CHECK(parse_symbol("dx1").name == "dx1");
  CHECK(parse_symbol("laplace+1").order == 2);
  Symbol p = parse_symbol("poly:0,1,0");
  CHECK(p.order == 1);
  CHECK(p.is_differential());
  CHECK_THROWS_AS(parse_symbol("poly:1,x"), Error);
  CHECK_THROWS_AS(parse_symbol("poly:0"), Error);
  CHECK_THROWS_AS(parse_symbol("wave"), Error);
  CHECK_THROWS_AS(parse_symbol("table:/nonexistent/symbol.json"), Error);

  {
    std::ofstream out("symbol_table_test.json");
    out << R"({"order": 0, "d": 1, "n": 4, "re": [)";
    for (int i = 0; i < 16; ++i) out << (i ? "," : "") << 1;
    out << R"(], "im": [)";
    for (int i = 0; i < 16; ++i) out << (i ? "," : "") << 0;
    out << "]}";
  }
  Symbol t = parse_symbol("table:symbol_table_test.json");
  CHECK(t.is_table());
  Signal f = mode(TorusGrid::make(1, 4), 1);
  CHECK(max_dev(quantize_apply(t, f), f) < 1e-12);
}

TEST_CASE("symbol certificates") {
  TorusGrid g = TorusGrid::make(1, 32);
  SymbolCertificate c = Symbol::laplace_plus_one().certificate(g);
  CHECK(c.finite());
  CHECK(c.sup == doctest::Approx(1));
  CHECK(c.dx == 0);
  SymbolCertificate e = elliptic_test_symbol().certificate(g);
  CHECK(e.sup == doctest::Approx(3).epsilon(0.01));
  CHECK(e.dx > 0);
  CHECK(e.to_json().at("finite") == true);
}

TEST_CASE("characteristic sets") {
  TorusGrid g = TorusGrid::make(2, 64);
  CharQuery cq;
  cq.R = 8;
  std::vector<int> x0{32, 32};
  Symbol d1 = Symbol::dx1();
  CHECK(noncharacteristic_at(d1, g, x0, std::vector<double>{1, 0}, cq));
  CHECK_FALSE(noncharacteristic_at(d1, g, x0, std::vector<double>{0, 1}, cq));
  CHECK(noncharacteristic_at(Symbol::laplace_plus_one(), g, x0, std::vector<double>{0, 1}, cq));
  auto pts = char_set_scan(d1, g, {x0}, {{1, 0}, {0, 1}, {0, -1}}, cq);
  CHECK(pts.size() == 2);
  cq.R = 40;
  CHECK_THROWS_AS(noncharacteristic_at(d1, g, x0, std::vector<double>{1, 0}, cq), Error);
}

TEST_CASE("dealiasing keeps the low band") {
  TorusGrid g = TorusGrid::make(1, 64);
  Symbol a = dealiased(Symbol::dx1(), g);
  CHECK(a.eval(g, 0, std::vector<int>{16}) == cplx(0, 16));
  CHECK(a.eval(g, 0, std::vector<int>{-32}) == cplx(0));
  CHECK(std::abs(a.eval(g, 0, std::vector<int>{24})) < 24);
  WavefrontQuery q = transport_query(g, 1, 0);
  CHECK(q.m_hi == WavefrontQuery::standard(g, {}).m_hi - 1);
}

TEST_CASE("transport on an impulse and an edge") {
  CorpusEntry d = corpus_entry("delta-1d");
  for (double s : {-2.5, 0.5}) {
    TransportReport r = transport_check(Symbol::laplace_plus_one(), d.signal, 1, s);
    CHECK(r.ok());
    CHECK(r.char_points == 0);
    CHECK(r.lowered.notes.at("realization") == "differences");
  }
  CorpusEntry e = corpus_entry("edge-2d");
  TransportReport r = transport_check(Symbol::dx1(), e.signal, 1, 1.5);
  CHECK(r.ok());
  CHECK(r.char_points > 0);
  CHECK(r.lowered.lhs == 0);

  TorusGrid g = d.signal.grid;
  std::vector<cplx> table(g.size() * g.size(), 1.0);
  TransportReport t = transport_check(Symbol::from_table(g, 0, table), d.signal, 1, 0.5);
  CHECK(t.lowered.notes.at("realization") == "dealiased");
}

TEST_CASE("derivative inclusion") {
  CorpusEntry c = corpus_entry("cusp-2.5");
  double o = c.min_order(1);
  for (double s : {o - 1.5, o + 1.5}) CHECK(derivative_check(c.signal, 0, 1, s).ok());
  CHECK_THROWS_AS(derivative_check(c.signal, 1, 1, 0), Error);
}
