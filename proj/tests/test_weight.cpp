#include <cmath>
#include <fstream>

#include "doctest.h"
#include "flw/weight.hpp"

using namespace flw;

TEST_CASE("power weight values") {
  std::vector<int> k3{3}, k10{1, 0}, k0{0, 0};
  CHECK(Weight::power(0).at(k3) == 1);
  CHECK(Weight::power(2).at(k10) == doctest::Approx(2));
  CHECK(Weight::power(-1.5).at(k3) == doctest::Approx(0.17783).epsilon(1e-4));
  CHECK(Weight::power(-1.5).at(k3) == doctest::Approx(std::pow(10.0, -0.75)));
  CHECK(Weight::power(5).at(k0) == 1);
  CHECK_THROWS_AS(Weight::power(kInf), Error);
}

TEST_CASE("block weights multiply per block") {
  Weight w = Weight::blocks({1, 1}, {1, -2});
  std::vector<int> k{2, 3};
  CHECK(w.at(k) == doctest::Approx(std::sqrt(5.0) / 10.0));
  CHECK_THROWS_AS(Weight::blocks({1}, {1, 2}), Error);
}

TEST_CASE("table weights and on_lattice") {
  TorusGrid g = TorusGrid::make(1, 8);
  std::vector<double> vals(8);
  for (int i = 0; i < 8; ++i) vals[i] = 1 + i;
  Weight w = Weight::from_table(g, vals);
  CHECK(w.at(std::vector<int>{-4}) == 1);
  CHECK(w.at(std::vector<int>{3}) == 8);
  CHECK(w.on_lattice(g) == vals);
  vals[2] = 0;
  CHECK_THROWS_AS(Weight::from_table(g, vals), Error);

  auto p = Weight::power(1).on_lattice(g);
  CHECK(p[lattice(g).origin()] == 1);
}

TEST_CASE("weight specs") {
  CHECK(parse_weight("s:2.5").s == 2.5);
  CHECK_THROWS_AS(parse_weight("s:2x"), Error);
  CHECK_THROWS_AS(parse_weight("q:1"), Error);
  const char* path = "weight_table_test.json";
  std::ofstream(path) << R"({"d":1,"n":4,"values":[1,2,3,4]})";
  Weight w = parse_weight(std::string("table:") + path);
  CHECK(w.kind == Weight::Kind::table);
  CHECK(w.at(std::vector<int>{1}) == 4);
}

TEST_CASE("moderation checks") {
  CHECK(check_moderate(Weight::power(0), Weight::power(0), 1, 8, 1000, 1).max_ratio == 1);
  auto r = check_moderate(Weight::power(1), Weight::power(1), 1, 8, 1000, 1);
  CHECK(r.max_ratio <= std::sqrt(2.0) + 1e-12);
  CHECK(r.pairs == 17 * 17);
  auto bad = check_moderate(Weight::power(2), Weight::power(1), 1, 64, 1u << 20, 1);
  CHECK(bad.max_ratio > 10);
  // Peetre: <x+y>^s <= 2^{|s|/2} <x>^s <y>^{|s|}
  for (double s : {-2.0, -0.5, 0.7, 3.0}) {
    auto m = check_moderate(Weight::power(s), Weight::power(std::abs(s)), 2, 6, 1u << 20, 1);
    CHECK(m.max_ratio <= std::pow(2.0, std::abs(s) / 2) * (1 + 1e-12));
  }
  auto sampled = check_moderate(Weight::power(1), Weight::power(1), 2, 64, 5000, 9);
  CHECK(sampled.pairs == 5000);
  CHECK(sampled.max_ratio <= std::sqrt(2.0) + 1e-12);
}

TEST_CASE("sectioned weights") {
  SectionedWeight w{1, -1};
  TorusGrid g = TorusGrid::make(1, 8);
  std::vector<double> x{1.0};
  Weight sec = w.section(g, x);
  std::vector<int> k{2};
  CHECK(sec.at(k) == doctest::Approx(std::sqrt(5.0) / std::sqrt(2.0)));
  std::vector<double> x2{-1.0};
  CHECK(w.section_ratio_bound(x, x2) >= 1);
}
