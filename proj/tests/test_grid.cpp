#include <cmath>
#include <cstdio>
#include <random>

#include "doctest.h"
#include "luxor/grid.hpp"

using namespace luxor;

namespace {

// Oracle: integrate the piecewise-constant function by explicit per-cell
// overlap, independent of the prefix-interpolation path.
double integral_oracle(const GridFunction& f, double a, double b) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double clo = -f.half_length() + i * f.step();
    double chi = clo + f.step();
    double o = std::min(chi, b) - std::max(clo, a);
    if (o > 0.0) s += o * f[i];
  }
  return s;
}

GridFunction random_function(double L, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return GridFunction(L, std::move(v));
}

}  // namespace

TEST_CASE("interval geometry") {
  Interval I(1.0, 2.0);
  CHECK(I.lo() == -1.0);
  CHECK(I.hi() == 3.0);
  CHECK(I.length() == 4.0);
  CHECK(I.dilated(2.0).radius == 4.0);
  CHECK(I.dilated(2.0).center == 1.0);
  CHECK(Interval::from_endpoints(-3.0, 5.0).center == 1.0);
  CHECK_THROWS_AS(Interval(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Interval::from_endpoints(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("grid constructor validates input") {
  CHECK_THROWS_AS(GridFunction(1.0, std::vector<double>{1.0, 2.0, 3.0}), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(-1.0, std::vector<double>(8, 0.0)), std::invalid_argument);
  std::vector<double> bad(8, 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(GridFunction(1.0, bad), std::invalid_argument);
}

TEST_CASE("integral of a constant is exact") {
  GridFunction f(8.0, std::vector<double>(256, 1.0));
  CHECK(integrate(f, Interval(0.0, 1.0)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(integrate(f, Interval(0.3, 0.7)) == doctest::Approx(1.4).epsilon(1e-14));
  CHECK(f.total_integral() == doctest::Approx(16.0).epsilon(1e-14));
}

TEST_CASE("prefix integral matches the per-cell oracle on random intervals") {
  auto f = random_function(4.0, 512, 11);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> d(-4.0, 4.0);
  for (int t = 0; t < 400; ++t) {
    double a = d(rng), b = d(rng);
    if (a > b) std::swap(a, b);
    if (a == b) continue;
    double got = f.integral(a, b);
    double want = integral_oracle(f, a, b);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("integral is additive over adjacent intervals") {
  auto f = random_function(4.0, 512, 13);
  double whole = f.integral(-3.1, 2.9);
  double split = f.integral(-3.1, -0.4) + f.integral(-0.4, 2.9);
  CHECK(whole == doctest::Approx(split).epsilon(1e-13));
}

TEST_CASE("integrate rejects intervals outside the domain") {
  auto f = random_function(2.0, 64, 14);
  CHECK_THROWS_AS(integrate(f, Interval(2.0, 1.0)), std::domain_error);
}

TEST_CASE("sliding window average of a constant is the constant") {
  GridFunction f(8.0, std::vector<double>(512, 3.0));
  auto g = sliding_window_average(f, 1.0);
  // interior points see a full window
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::abs(g.x_at(i)) < 6.5) CHECK(g[i] == doctest::Approx(3.0).epsilon(1e-13));
  }
  CHECK_THROWS_AS(sliding_window_average(f, 0.001), std::invalid_argument);
}

TEST_CASE("sliding window average matches direct integration") {
  auto f = random_function(4.0, 256, 15);
  auto g = sliding_window_average(f, 0.75);
  for (std::size_t i = 0; i < g.size(); i += 7) {
    double x = f.x_at(i);
    double want = integral_oracle(f, x - 0.75, x + 0.75) / 1.5;
    CHECK(g[i] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("ess sup over a window") {
  std::vector<double> v(64, 0.0);
  v[40] = -5.0;
  GridFunction f(1.0, v);  // h = 1/32
  double x40 = f.x_at(40);
  CHECK(f.ess_sup_abs(x40 - 0.01, x40 + 0.01) == 5.0);
  CHECK(f.ess_sup_abs(-1.0, 0.0) == 0.0);
  // window touching the cell only at its boundary has measure-zero overlap
  double edge = -1.0 + 40 * f.step();
  CHECK(f.ess_sup_abs(edge - 0.02, edge) == 0.0);
}

TEST_CASE("step generator is the unit indicator") {
  GeneratorSpec g;
  g.kind = "step";
  auto f = generate(g, 8.0, 1024);
  CHECK(f.total_integral() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.value_at(0.5) == 1.0);
  CHECK(f.value_at(-0.5) == 0.0);
  CHECK(f.value_at(1.5) == 0.0);
}

TEST_CASE("bump generator is compactly supported and bounded by its height") {
  GeneratorSpec g;
  g.kind = "bump";
  g.center = 1.0;
  g.width = 0.5;
  g.height = 2.0;
  auto f = generate(g, 8.0, 1024);
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f.x_at(i) - 1.0) >= 0.5) CHECK(f[i] == 0.0);
    m = std::max(m, f[i]);
  }
  CHECK(m <= 2.0);
  CHECK(m > 1.9);  // peak is near the center cell
}

TEST_CASE("unknown generator kind is rejected") {
  GeneratorSpec g;
  g.kind = "sawtooth";
  CHECK_THROWS_AS(generate(g, 1.0, 8), std::invalid_argument);
}

TEST_CASE("csv round trip is exact") {
  auto f = random_function(4.0, 128, 16);
  std::string path = "test_grid_roundtrip.csv";
  save_csv(f, path);
  auto g = load_csv(path);
  REQUIRE(g.size() == f.size());
  CHECK(g.half_length() == doctest::Approx(f.half_length()).epsilon(1e-12));
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(f[i] == g[i]);
  std::remove(path.c_str());
}

TEST_CASE("csv loader reports malformed input") {
  std::string path = "test_grid_bad.csv";
  {
    std::ofstream os(path);
    os << "x,value\n0.5,1.0\n1.5,oops\n";
  }
  CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains("line 3"), std::runtime_error);
  {
    std::ofstream os(path);
    os << "t,value\n";
  }
  CHECK_THROWS_AS(load_csv(path), std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("vector csv round trip") {
  VectorGridFunction F;
  F.l_min = -2;
  F.levels.push_back(random_function(2.0, 64, 17));
  F.levels.push_back(random_function(2.0, 64, 18));
  F.levels.push_back(random_function(2.0, 64, 19));
  std::string path = "test_grid_vec.csv";
  save_csv(F, path);
  auto G = load_vector_csv(path);
  REQUIRE(G.levels.size() == 3);
  CHECK(G.l_min == -2);
  CHECK(G.l_max() == 0);
  for (int l = -2; l <= 0; ++l)
    for (std::size_t i = 0; i < 64; ++i) CHECK(G.level(l)[i] == F.level(l)[i]);
  std::remove(path.c_str());
}
