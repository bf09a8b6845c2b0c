#pragma once

// Muckenhoupt weight constants, BMO norms, and John-Nirenberg style checks on
// grid functions. Interval suprema for the A_p product run over the aligned
// window family with a pattern refinement of the winning interval; the A_1
// constant goes through the exact plain maximal engine. Membership in a weight
// class is never decided here: callers compare constants across refinements.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "luxor/grid.hpp"
#include "luxor/maximal.hpp"
#include "luxor/young.hpp"

namespace luxor {

struct IntervalReport {
  double constant = 0.0;
  Interval argmax{0.0, 1.0};
};

namespace detail {

inline void require_weight(const GridFunction& w, const char* who) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!(w[i] > 0.0) || !std::isfinite(w[i]))
      throw std::domain_error(std::string(who) + ": weight samples must be positive and finite");
}

// Maximize a two-sided interval score over the aligned window family plus all
// edge-anchored prefix and suffix intervals (singular weights peak on lopsided
// intervals pinned to the domain edge), then pattern-refine around the winner
// (anchored at its center, which every nearby candidate keeps inside).
template <class Score>
IntervalReport max_over_intervals(double L, std::size_t n, Score&& score, bool refine) {
  const double h = 2.0 * L / static_cast<double>(n);
  IntervalReport rep;
  rep.constant = -kInf;
  auto consider = [&](double a, double b) {
    double v = score(a, b);
    if (v > rep.constant) {
      rep.constant = v;
      rep.argmax = Interval::from_endpoints(a, b);
    }
  };
  for (std::size_t w : window_widths(n)) {
    std::size_t stride = std::max<std::size_t>(w / 4, 1);
    for (std::size_t s = 0; s + w <= n; s += stride)
      consider(-L + static_cast<double>(s) * h, -L + static_cast<double>(s + w) * h);
  }
  for (std::size_t j = 1; j < n; ++j) {
    double t = -L + static_cast<double>(j) * h;
    consider(-L, t);
    consider(t, L);
  }
  if (refine) {
    double lo = rep.argmax.lo(), hi = rep.argmax.hi();
    rep.constant = pattern_refine(rep.argmax.center, L, 0.25 * h, lo, hi, rep.constant, score, 400);
    rep.argmax = Interval::from_endpoints(lo, hi);
  }
  return rep;
}

}  // namespace detail

inline IntervalReport ap_report(const GridFunction& w, double p, bool refine = true) {
  detail::require_weight(w, "ap_report");
  if (!(p > 1.0) || !std::isfinite(p)) throw std::domain_error("ap_report: need 1 < p < inf");
  const double e = -1.0 / (p - 1.0);
  GridFunction sigma = w.map([e](double t) { return std::pow(t, e); });
  auto score = [&](double a, double b) {
    double len = b - a;
    return (w.integral(a, b) / len) * std::pow(sigma.integral(a, b) / len, p - 1.0);
  };
  return detail::max_over_intervals(w.half_length(), w.size(), score, refine);
}

inline double ap_constant(const GridFunction& w, double p, bool refine = true) {
  return ap_report(w, p, refine).constant;
}

// sup_x Mw(x)/w(x), equal to the interval form sup_B (avg_B w) * ess sup_B 1/w.
inline IntervalReport a1_report(const GridFunction& w) {
  detail::require_weight(w, "a1_report");
  GridFunction m = hl_maximal(w);
  IntervalReport rep;
  rep.constant = -detail::kInf;
  const double h = w.step();
  for (std::size_t i = 0; i < w.size(); ++i) {
    double v = m[i] / w[i];
    if (v > rep.constant) {
      double lo = -w.half_length() + static_cast<double>(i) * h;
      rep.constant = v;
      rep.argmax = Interval::from_endpoints(lo, lo + h);
    }
  }
  return rep;
}

inline double a1_constant(const GridFunction& w) { return a1_report(w).constant; }

// A_{p,q} through the characterization w in A_{p,q} iff w^q in A_{1+q/p'};
// the p = 1 limit collapses to the A_1 constant of w^q.
inline double apq_constant(const GridFunction& w, double p, double q, bool refine = true) {
  detail::require_weight(w, "apq_constant");
  if (!(p >= 1.0) || !(q >= 1.0) || !std::isfinite(p) || !std::isfinite(q))
    throw std::domain_error("apq_constant: need 1 <= p, q < inf");
  GridFunction v = w.map([q](double t) { return std::pow(t, q); });
  if (p == 1.0) return a1_constant(v);
  double r = 1.0 + q * (p - 1.0) / p;
  return ap_constant(v, r, refine);
}

inline double bmo_norm(const GridFunction& b) { return sharp_maximal(b).max_abs(); }

// Grid function with its mean-oscillation norm cached at construction.
class BmoFunction {
 public:
  explicit BmoFunction(GridFunction b) : f_(std::move(b)), norm_(bmo_norm(f_)) {}
  const GridFunction& function() const { return f_; }
  double norm() const { return norm_; }

 private:
  GridFunction f_;
  double norm_;
};

// Chain of John-Nirenberg quantities on one interval: the normalized L^q
// average of (b - b_B)^k, its Luxemburg average with exp(t^{1/k}) - 1, and the
// k-th power of the exp L Luxemburg average of b - b_B. The middle and right
// entries are equal functions evaluated through different Young functions, and
// the left is dominated by the middle; constant is the middle normalized by
// the k-th power of the BMO norm.
struct JnExpReport {
  double lq = 0.0;
  double orlicz = 0.0;
  double exp_pow = 0.0;
  double bmo = 0.0;
  double constant = 0.0;
  bool chain_holds = false;
};

inline JnExpReport jn_exp_check(const GridFunction& b, const Interval& B, int k, double q = 0.0) {
  if (k < 1) throw std::invalid_argument("jn_exp_check: need k >= 1");
  if (q == 0.0) q = 1.0 / static_cast<double>(k);
  if (!(q > 0.0)) throw std::invalid_argument("jn_exp_check: need q > 0");
  const double kk = static_cast<double>(k);
  const double len = B.length();
  const double mean = b.integral(B.lo(), B.hi()) / len;

  GridFunction dev = b.map([mean](double t) { return std::abs(t - mean); });
  GridFunction devk = dev.map([kk](double t) { return std::pow(t, kk); });
  GridFunction devkq = devk.map([q](double t) { return std::pow(t, q); });

  JnExpReport rep;
  rep.lq = std::pow(devkq.integral(B.lo(), B.hi()) / len, 1.0 / q);
  rep.orlicz = luxemburg_average(devk, B, YoungFunction::exp_power(1.0 / kk, 1.0));
  rep.exp_pow = std::pow(luxemburg_average(dev, B, YoungFunction::exp_power(1.0, 1.0)), kk);
  rep.bmo = bmo_norm(b);
  rep.constant = rep.bmo > 0.0 ? rep.orlicz / std::pow(rep.bmo, kk) : 0.0;
  double id_gap = std::abs(rep.orlicz - rep.exp_pow);
  rep.chain_holds = rep.lq <= rep.orlicz * (1.0 + 1e-8) + 1e-15 &&
                    id_gap <= std::max(rep.orlicz, rep.exp_pow) * 1e-6 + 1e-15;
  return rep;
}

// Telescoping estimate between the averages of b on B and on the 2^j-fold
// dilate: each quantity is computed directly on the actual intervals, and the
// final bound uses the global BMO norm with the one-dimensional doubling
// factor 2.
struct JnTelescopeReport {
  double direct = 0.0;
  double telescoped = 0.0;
  double averaged = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool holds = false;
};

inline JnTelescopeReport jn_telescope_check(const GridFunction& b, const Interval& B, int j) {
  if (j < 1) throw std::invalid_argument("jn_telescope_check: need j >= 1");
  const double L = b.half_length();
  Interval top = B.dilated(std::pow(2.0, j));
  if (!(top.lo() >= -L && top.hi() <= L))
    throw std::invalid_argument("jn_telescope_check: dilated interval leaves the domain");

  auto mean_on = [&](const Interval& I) { return b.integral(I.lo(), I.hi()) / I.length(); };

  JnTelescopeReport rep;
  double prev_mean = mean_on(B);
  const double mean_b = prev_mean;
  for (int m = 1; m <= j; ++m) {
    Interval Im = B.dilated(std::pow(2.0, m));
    double mm = mean_on(Im);
    rep.telescoped += std::abs(prev_mean - mm);
    GridFunction dev = b.map([mm](double t) { return std::abs(t - mm); });
    rep.averaged += 2.0 * dev.integral(Im.lo(), Im.hi()) / Im.length();
    prev_mean = mm;
  }
  rep.direct = std::abs(mean_b - prev_mean);
  rep.bound = 2.0 * static_cast<double>(j) * bmo_norm(b);
  rep.slack = rep.bound - rep.direct;
  rep.holds = rep.direct <= rep.telescoped * (1.0 + 1e-12) + 1e-15 &&
              rep.telescoped <= rep.averaged * (1.0 + 1e-12) + 1e-15 &&
              rep.direct <= rep.bound * (1.0 + 1e-12) + 1e-15;
  return rep;
}

}  // namespace luxor
