#include "luxor/kernel.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

using namespace luxor;

namespace {

double closed_upper_bound(int k) {
  // entries m^k / log(1 + 2^{m+3})^{k+1} are below (1/log 2)^{k+1} / m, so the
  // l2 norm is below (1/log 2)^{k+1} sqrt(pi^2/6)
  const double pi = std::acos(-1.0);
  return std::pow(1.0 / std::log(2.0), k + 1) * std::sqrt(pi * pi / 6.0);
}

}  // namespace

TEST_CASE("level values match hand-computed points and the open-box convention") {
  // level 0: boxes (-1,1) at height 1/2 and (-1/2,1/2) at height 1
  CHECK(DyadicKernel::raw_level_value(0, 0.25) == -0.5);
  CHECK(DyadicKernel::raw_level_value(0, 0.75) == 0.5);
  CHECK(DyadicKernel::raw_level_value(0, 0.5) == 0.5);  // inner box is open
  CHECK(DyadicKernel::raw_level_value(0, 1.0) == 0.0);  // outer box is open
  CHECK(DyadicKernel::raw_level_value(0, -1.0) == 0.0);
  CHECK(DyadicKernel::raw_level_value(0, 0.0) == -0.5);
  CHECK(DyadicKernel::raw_level_value(3, 5.0) == 0.0625);
  CHECK(DyadicKernel::raw_level_value(3, 3.0) == -0.0625);
  CHECK(DyadicKernel::raw_level_value(-2, 0.2) == 2.0);
}

TEST_CASE("levels are bounded, supported in the outer box, and integrate to zero") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int l = -4; l <= 6; ++l) {
    const double r_out = std::ldexp(1.0, l);
    const double bound = std::ldexp(1.0, -l);
    for (int t = 0; t < 200; ++t) {
      const double z = unit(rng) * 3.0 * r_out;
      const double v = DyadicKernel::raw_level_value(l, z);
      CHECK(std::abs(v) <= bound);
      if (std::abs(z) >= r_out) CHECK(v == 0.0);
    }
    // piecewise-constant, so the integral is a two-term sum: the inner box of
    // measure 2^l at height -2^{-(l+1)} against the ring of measure 2^l at
    // height +2^{-(l+1)}
    const double inner = std::ldexp(1.0, l) * DyadicKernel::raw_level_value(l, 0.0);
    const double ring = std::ldexp(1.0, l) * DyadicKernel::raw_level_value(l, 0.75 * r_out);
    CHECK(inner + ring == 0.0);
  }
}

TEST_CASE("kernel construction and level window are validated") {
  CHECK_THROWS_AS(DyadicKernel(3, 2), std::invalid_argument);
  CHECK_THROWS_AS(DyadicKernel(-2, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DyadicKernel(-2, 2, -0.1), std::invalid_argument);
  DyadicKernel kern(-2, 5, 0.5);
  CHECK(kern.levels() == 8);
  CHECK_THROWS_AS(kern.level_value(6, 0.1), std::domain_error);
  CHECK_THROWS_AS(kern.level_value(-3, 0.1), std::domain_error);
  // weighted value is |z|^alpha times the unweighted one
  CHECK(kern.level_value(1, 0.64) ==
        doctest::Approx(std::sqrt(0.64) * DyadicKernel::raw_level_value(1, 0.64)).epsilon(1e-15));
}

TEST_CASE("difference table preconditions throw") {
  CHECK_THROWS_AS(difference_table(3, 3, 0.1, 0.0, 3, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(difference_table(4, 3, 0.1, 0.0, 3, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(difference_table(0, 3, 1.5, 0.0, 3, 10.0), std::invalid_argument);  // |x-x0|>=2^i
  CHECK_THROWS_AS(difference_table(0, 3, 0.5, 0.0, 3, 8.0), std::invalid_argument);   // on edge
  CHECK_THROWS_AS(difference_table(0, 3, 0.5, 0.0, 3, 17.0), std::invalid_argument);  // outside
  CHECK_NOTHROW(difference_table(0, 3, 0.5, 0.0, 3, 10.0));
  CHECK_NOTHROW(difference_table(0, 3, 0.5, 0.0, 3, -10.0));
}

TEST_CASE("difference table hand-verified shells") {
  // x = 0.75, x0 = 0, i = 0, j = 3: near shell (8, 8.75) at height 1/16 for
  // levels 3 and 4; far shell (-16, -15.25) at height 1/32 for levels 4 and 5
  CHECK(difference_table(0, 3, 0.75, 0.0, 3, 8.5) == 0.0625);
  CHECK(difference_table(0, 3, 0.75, 0.0, 4, 8.5) == 0.0625);
  CHECK(difference_table(0, 3, 0.75, 0.0, 5, 8.5) == 0.0);
  CHECK(difference_table(0, 3, 0.75, 0.0, 4, -15.5) == 0.03125);
  CHECK(difference_table(0, 3, 0.75, 0.0, 5, -15.5) == 0.03125);
  CHECK(difference_table(0, 3, 0.75, 0.0, 3, -15.5) == 0.0);
  CHECK(difference_table(0, 3, 0.75, 0.0, 6, -15.5) == 0.0);
  CHECK(difference_table(0, 3, 0.75, 0.0, 2, 8.5) == 0.0);
  // a point of the annulus off both shells
  CHECK(difference_table(0, 3, 0.75, 0.0, 3, 12.0) == 0.0);
  CHECK(difference_table(0, 3, 0.75, 0.0, 4, 12.0) == 0.0);
  // negative displacement mirrors into the other members of each pair
  CHECK(difference_table(0, 3, -0.75, 0.0, 3, -8.5) == 0.0625);
  CHECK(difference_table(0, 3, -0.75, 0.0, 4, 15.5) == 0.03125);
}

TEST_CASE("difference table equals the direct two-translate difference exactly") {
  // all coordinates live on the dyadic lattice 2^{j-20}, with magnitudes below
  // 2^{j+2}, so translate differences and box-edge comparisons are exact and
  // both routes can be required to agree bit for bit
  std::mt19937_64 rng(0x6b65726eULL);
  std::uniform_int_distribution<int> jd(-6, 6);
  std::uniform_int_distribution<int> gapd(1, 3);
  std::uniform_int_distribution<int> loff(-3, 5);
  std::uniform_int_distribution<long> nx(-(1L << 10), 1L << 10);
  std::uniform_int_distribution<long> nd(-(1L << 10) + 1, (1L << 10) - 1);
  std::uniform_int_distribution<long> nu(1, (1L << 20) - 1);
  std::bernoulli_distribution negside(0.5), farlevel(0.1);
  int nonzero = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int j = jd(rng);
    const int i = j - gapd(rng);
    const int l = farlevel(rng) ? j + 17 : j + loff(rng);
    const double step = std::ldexp(1.0, j - 20);
    const double x0 = static_cast<double>(nx(rng)) * step;
    const double x = x0 + static_cast<double>(nd(rng)) * std::ldexp(1.0, i - 10);
    const double u = std::ldexp(1.0, j) + static_cast<double>(nu(rng)) * step;
    const double y = negside(rng) ? x0 - u : x0 + u;
    const double direct = std::abs(DyadicKernel::raw_level_value(l, y - x) -
                                   DyadicKernel::raw_level_value(l, y - x0));
    const double table = difference_table(i, j, x, x0, l, y);
    REQUIRE(table == direct);
    if (table != 0.0) ++nonzero;
  }
  CHECK(nonzero > 200);
}

TEST_CASE("annulus query validation") {
  AnnulusQuery q;
  q.x = 0.1;
  q.R = 1.0;
  CHECK_NOTHROW(validate_annulus_query(q));
  AnnulusQuery bad = q;
  bad.k = -1;
  CHECK_THROWS_AS(validate_annulus_query(bad), std::invalid_argument);
  bad = q;
  bad.m_max = 0;
  CHECK_THROWS_AS(validate_annulus_query(bad), std::invalid_argument);
  bad = q;
  bad.c_gate = 1.0;
  CHECK_THROWS_AS(validate_annulus_query(bad), std::invalid_argument);
  bad = q;
  bad.R = 0.0;
  CHECK_THROWS_AS(validate_annulus_query(bad), std::invalid_argument);
  bad = q;
  bad.x = 0.3;  // R = 1 is not above c_gate |x| = 1.2
  CHECK_THROWS_AS(validate_annulus_query(bad), std::invalid_argument);
}

TEST_CASE("zero displacement gives exactly zero sums") {
  DyadicKernel kern(-4, 20);
  AnnulusQuery q;
  q.x = 0.0;
  q.R = 1.0;
  q.m_max = 16;
  const AnnulusReport lv = levelwise_annulus_sum(kern, q);
  CHECK(lv.value == 0.0);
  for (double t : lv.terms) CHECK(t == 0.0);
  const AnnulusReport pw = pointwise_annulus_sum(kern, q);
  CHECK(pw.value == 0.0);
  CHECK(pw.terms.size() == 16);
}

TEST_CASE("step norms: indicator identity, merging, and a two-height closed form") {
  const YoungFunction phi = YoungFunction::power(2.0);
  // one piece is exactly the indicator identity
  const double one = detail::step_luxemburg({{0.5, 3.0}}, 8.0, phi);
  CHECK(one == indicator_luxemburg(3.0, 0.5, 8.0, phi));
  // equal heights merge into one indicator
  const double merged = detail::step_luxemburg({{0.5, 3.0}, {0.25, 3.0}}, 8.0, phi);
  CHECK(merged == indicator_luxemburg(3.0, 0.75, 8.0, phi));
  // for phi(t)=t^2 the norm is sqrt(sum h_i^2 w_i / total)
  const double expect = std::sqrt((4.0 * 0.5 + 1.0 * 0.25) / 8.0);
  const double two = detail::step_luxemburg({{0.5, 2.0}, {0.25, 1.0}}, 8.0, phi);
  CHECK(two == doctest::Approx(expect).epsilon(1e-12));
  // zero-mass and zero-height pieces are ignored
  CHECK(detail::step_luxemburg({{0.0, 5.0}, {0.5, 0.0}}, 8.0, phi) == 0.0);
}

TEST_CASE("weighted piece norm matches the linear-case closed form") {
  // for phi(t)=t the Luxemburg norm is the plain average, and the piece value
  // |y|^{1/2} on (1,2) integrates in closed form
  const double got = detail::weighted_piece_luxemburg({{1.0, 2.0, 1.0, 0.0}}, 0.0, 0.5, 4.0,
                                                      YoungFunction::power(1.0));
  const double expect = (std::pow(2.0, 1.5) - 1.0) / (1.5 * 4.0);
  CHECK(got == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("closed form sequence: linear case has an elementary l2 value") {
  // entries 1/(8 2^m): sum of squares (1/64)(1/3), norm 1/(8 sqrt 3)
  const ClosedFormReport rep =
      levelwise_closed_form(YoungFunction::linear(), 0, SeqNorm::lp(2.0), 60);
  CHECK(rep.value == doctest::Approx(0.07216878364870323).epsilon(1e-13));
  CHECK(rep.stabilized);
  REQUIRE(rep.checkpoints.size() == 3);
  CHECK(rep.checkpoints.front().first == 15);
  CHECK(rep.checkpoints.back().first == 60);
  CHECK(rep.checkpoints[0].second <= rep.checkpoints[1].second);
  CHECK(rep.checkpoints[1].second <= rep.checkpoints[2].second);
}

TEST_CASE("closed form sequence: exponential-type gauges are summable, l1 harmonic is not") {
  for (int k = 0; k <= 2; ++k) {
    const YoungFunction phi = YoungFunction::exp_power(1.0 / (1.0 + k), 1.0);
    const ClosedFormReport rep = levelwise_closed_form(phi, k, SeqNorm::lp(2.0), 80);
    CHECK(rep.value > 0.0);
    CHECK(rep.value <= closed_upper_bound(k));
    CHECK(rep.stabilized);
  }
  // under l1 the same entries grow like the harmonic series: not stabilized,
  // and still visibly growing between m_max 40 and 80
  const YoungFunction phi0 = YoungFunction::exp_power(1.0, 1.0);
  const ClosedFormReport a = levelwise_closed_form(phi0, 0, SeqNorm::lp(1.0), 40);
  const ClosedFormReport b = levelwise_closed_form(phi0, 0, SeqNorm::lp(1.0), 80);
  CHECK_FALSE(b.stabilized);
  CHECK(b.value > a.value + 0.1);
  CHECK_THROWS_AS(levelwise_closed_form(phi0, 0, SeqNorm::lp(2.0), 1), std::invalid_argument);
  CHECK_THROWS_AS(levelwise_closed_form(phi0, -1, SeqNorm::lp(2.0), 8), std::invalid_argument);
}

TEST_CASE("levelwise sum is supported on the expected level range") {
  // R = 1, x = 1/8: level l differs from its translate on shells at radii
  // 2^{l-1} and 2^l, which meet annuli m in {l-2,...,l} only; with m_max = 40
  // that leaves levels 1..42
  DyadicKernel kern(-6, 46);
  AnnulusQuery q;
  q.x = 0.125;
  q.R = 1.0;
  q.m_max = 40;
  const AnnulusReport rep = levelwise_annulus_sum(kern, q);
  REQUIRE(rep.terms.size() == 53);
  REQUIRE(rep.first_index == -6);
  for (int l = -6; l <= 46; ++l) {
    const double term = rep.terms[static_cast<std::size_t>(l + 6)];
    if (l >= 1 && l <= 42)
      CHECK(term > 0.0);
    else
      CHECK(term == 0.0);
  }
}

TEST_CASE("levelwise sum is symmetric under reflecting the displacement") {
  DyadicKernel kern(-5, 30);
  AnnulusQuery q;
  q.phi = YoungFunction::exp_power(0.5, 1.0);
  q.k = 1;
  q.x = 3.0 / 16.0;
  q.R = 1.0;
  q.m_max = 24;
  const double plus = levelwise_annulus_sum(kern, q).value;
  q.x = -q.x;
  const double minus = levelwise_annulus_sum(kern, q).value;
  CHECK(plus == doctest::Approx(minus).epsilon(1e-12));
  CHECK(plus > 0.0);
}

TEST_CASE("levelwise sum is sandwiched by the closed form") {
  // displacement u 2^{i-2} with u < 1 keeps the scale gate and the two-sided
  // comparison against the closed-form sequence valid, per sample
  for (int k = 0; k <= 1; ++k) {
    const YoungFunction phi = YoungFunction::exp_power(1.0 / (1.0 + k), 1.0);
    const SeqNorm X = SeqNorm::lp(2.0);
    const int m_max = 40;
    const double closed = levelwise_closed_form(phi, k, X, m_max).value;
    REQUIRE(closed > 0.0);
    for (int i : {-2, 0, 3}) {
      for (double u : {0.7, 0.9}) {
        for (double sign : {1.0, -1.0}) {
          DyadicKernel kern(i - 2, i + m_max + 2);
          AnnulusQuery q;
          q.phi = phi;
          q.k = k;
          q.X = X;
          q.R = std::ldexp(1.0, i);
          q.x = sign * u * std::ldexp(1.0, i - 2);
          q.m_max = m_max;
          const double value = levelwise_annulus_sum(kern, q).value;
          CHECK(value >= 0.5 * closed);
          CHECK(value <= 2.0 * closed);
        }
      }
    }
  }
}

TEST_CASE("pointwise sum keeps growing with the level window, levelwise saturates") {
  const YoungFunction phi = YoungFunction::exp_power(1.0 / 3.0, 1.0);
  // pointwise: each new level extends the range of annuli that see a nonzero
  // difference, and the per-annulus terms decay only harmonically
  {
    AnnulusQuery q;
    q.phi = phi;
    q.k = 2;
    q.x = 0.125;
    q.R = 1.0;
    q.m_max = 80;
    const double narrow = pointwise_annulus_sum(DyadicKernel(-10, 10), q).value;
    const double wide = pointwise_annulus_sum(DyadicKernel(-20, 20), q).value;
    REQUIRE(narrow > 0.0);
    CHECK(wide / narrow > 1.25);
  }
  // levelwise: once the window contains every level whose shells meet an
  // admissible annulus, widening it adds exact zeros
  {
    AnnulusQuery q;
    q.phi = phi;
    q.k = 2;
    q.R = std::ldexp(1.0, -4);
    q.x = q.R / 8.0;
    q.m_max = 12;
    const double narrow = levelwise_annulus_sum(DyadicKernel(-10, 10), q).value;
    const double wide = levelwise_annulus_sum(DyadicKernel(-20, 20), q).value;
    REQUIRE(narrow > 0.0);
    CHECK(std::abs(wide - narrow) / narrow < 1e-9);
  }
}

TEST_CASE("weighted family: levelwise sum stays finite and positive") {
  DyadicKernel kern(-4, 24, 0.25);
  AnnulusQuery q;
  q.x = 1.0 / 16.0;
  q.R = 1.0;
  q.m_max = 20;
  const AnnulusReport rep = levelwise_annulus_sum(kern, q);
  CHECK(rep.value > 0.0);
  CHECK(std::isfinite(rep.value));
  CHECK_THROWS_AS(pointwise_annulus_sum(kern, q), std::invalid_argument);
}

TEST_CASE("size scaling: the per-scale trace is flat for the weighted family") {
  // doubling the scale maps level norms to each other (one level down, factor
  // 2^{alpha-1}), so s^{1-alpha} times the norm is the same at every dyadic
  // scale, up to window truncation
  for (double alpha : {0.0, 0.25, 0.5}) {
    DyadicKernel kern(-15, 15, alpha);
    const ScalingReport rep = size_scaling_report(kern, YoungFunction::power(2.0),
                                                  SeqNorm::lp(2.0), {1.0, 2.0, 4.0});
    REQUIRE(rep.per_scale.size() == 3);
    for (const auto& [s, v] : rep.per_scale) {
      CHECK(v > 0.0);
      CHECK(v == doctest::Approx(rep.constant).epsilon(0.005));
    }
  }
}

TEST_CASE("size scaling: a level contributes nothing once the scale passes its support") {
  DyadicKernel kern(3, 3, 0.5);
  const ScalingReport rep =
      size_scaling_report(kern, YoungFunction::power(2.0), SeqNorm::lp(2.0), {8.0, 16.0});
  CHECK(rep.constant == 0.0);
  CHECK_THROWS_AS(
      size_scaling_report(kern, YoungFunction::power(2.0), SeqNorm::lp(2.0), {0.0}),
      std::invalid_argument);
}

TEST_CASE("halving the level index halves the kernel after rescaling the argument") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int l = -3; l <= 6; ++l) {
    for (int t = 0; t < 100; ++t) {
      const double z = unit(rng) * 3.0 * std::ldexp(1.0, l);
      CHECK(DyadicKernel::raw_level_value(l, z) ==
            0.5 * DyadicKernel::raw_level_value(l - 1, z / 2.0));
    }
    const double edge = std::ldexp(1.0, l - 1);
    CHECK(DyadicKernel::raw_level_value(l, edge) ==
          0.5 * DyadicKernel::raw_level_value(l - 1, edge / 2.0));
  }
}
