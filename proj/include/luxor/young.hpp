#pragma once

// Young functions, their generalized inverses and complementary (Legendre)
// functions, and Luxemburg averages of grid functions over intervals:
//
//   ||f||_{phi,I} = inf{ lambda > 0 : (1/|I|) int_I phi(|f|/lambda) <= 1 }.
//
// The integrand runs over the support of f: for proper Young functions
// (phi(0) = 0) this changes nothing, and it keeps the offset-0 exponential
// variant (phi(0) = 1, a Young function only at infinity) consistent with the
// indicator identity ||c chi_E||_{phi,I} = c / phi^{-1}(|I|/|E|).
//
// The ess_sup_dual variant is the degenerate complementary of t -> c*t: its
// Luxemburg average is the essential supremum over I divided by c, and its
// generalized inverse is identically c.

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "luxor/grid.hpp"

namespace luxor {

enum class LogForm {
  one_plus_log_plus,  // t^r * (1 + log^+ t)^beta
  log_one_plus        // t^r * log(t + 1)^beta
};

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double exp_checked(double u) { return u > 700.0 ? kInf : std::exp(u); }

// std::pow with branches for the small integer exponents that dominate use
inline double pow_small(double t, double e) {
  if (e == 1.0) return t;
  if (e == 2.0) return t * t;
  if (e == 3.0) return t * t * t;
  if (e == 0.0) return 1.0;
  return std::pow(t, e);
}

// inf{ lambda : avg(lambda) <= 1 } for a non-increasing avg. Seeds only
// orient the search; brackets are verified and expanded as needed.
template <class Avg>
double lux_infimum(Avg&& avg, double lo_seed, double hi_seed, double rel_tol = 1e-12) {
  double hi = std::max(hi_seed, 1e-300);
  for (int guard = 0; avg(hi) > 1.0; ++guard) {
    hi *= 4.0;
    if (guard > 1200 || !std::isfinite(hi))
      throw std::runtime_error("luxemburg: no admissible lambda found");
  }
  double lo = std::min(std::max(lo_seed, 0.0), hi);
  if (lo <= 0.0) lo = hi * 0x1p-60;
  while (avg(lo) <= 1.0) {
    hi = lo;
    lo *= 0.25;
    if (lo < 1e-300) return 0.0;
  }
  for (int it = 0; it < 200 && (hi - lo) > rel_tol * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (avg(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

class YoungFunction {
 public:
  enum class Kind { power, power_log, exp_power, linear, ess_sup_dual, table, conjugate };

  static YoungFunction power(double r, double scale = 1.0) {
    if (!(r >= 1.0)) throw std::invalid_argument("YoungFunction::power: need r >= 1");
    if (!(scale > 0.0)) throw std::invalid_argument("YoungFunction::power: need scale > 0");
    YoungFunction y(Kind::power);
    y.r_ = r;
    y.scale_ = scale;
    return y;
  }

  static YoungFunction power_log(double r, double beta,
                                 LogForm form = LogForm::one_plus_log_plus) {
    if (!(r >= 1.0) || !(beta >= 0.0))
      throw std::invalid_argument("YoungFunction::power_log: need r >= 1, beta >= 0");
    YoungFunction y(Kind::power_log);
    y.r_ = r;
    y.beta_ = beta;
    y.log_form_ = form;
    return y;
  }

  static YoungFunction exp_power(double gamma, double offset) {
    if (!(gamma > 0.0)) throw std::invalid_argument("YoungFunction::exp_power: need gamma > 0");
    if (offset != 0.0 && offset != 1.0)
      throw std::invalid_argument("YoungFunction::exp_power: offset must be 0 or 1");
    YoungFunction y(Kind::exp_power);
    y.gamma_ = gamma;
    y.offset_ = offset;
    return y;
  }

  static YoungFunction linear() { return YoungFunction(Kind::linear); }

  static YoungFunction ess_sup_dual(double threshold = 1.0) {
    if (!(threshold > 0.0))
      throw std::invalid_argument("YoungFunction::ess_sup_dual: need threshold > 0");
    YoungFunction y(Kind::ess_sup_dual);
    y.threshold_ = threshold;
    return y;
  }

  // Piecewise-linear monotone convex table through (t_i, v_i); extrapolates
  // with the final slope.
  static YoungFunction table(std::vector<std::pair<double, double>> pts) {
    if (pts.size() < 2) throw std::invalid_argument("YoungFunction::table: need >= 2 points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!(pts[i].first >= 0.0) || !(pts[i].second >= 0.0))
        throw std::invalid_argument("YoungFunction::table: points must be nonnegative");
      if (i > 0 && !(pts[i].first > pts[i - 1].first && pts[i].second >= pts[i - 1].second))
        throw std::invalid_argument("YoungFunction::table: points must increase");
    }
    YoungFunction y(Kind::table);
    y.table_ = std::make_shared<const std::vector<std::pair<double, double>>>(std::move(pts));
    return y;
  }

  Kind kind() const { return kind_; }
  double param_r() const { return r_; }
  double param_beta() const { return beta_; }
  double param_gamma() const { return gamma_; }
  double param_offset() const { return offset_; }
  double param_scale() const { return scale_; }
  double threshold() const { return threshold_; }
  LogForm log_form() const { return log_form_; }
  bool is_ess_sup_dual() const { return kind_ == Kind::ess_sup_dual; }
  const YoungFunction* conjugate_base() const { return base_ ? base_.get() : nullptr; }

  double value(double t) const {
    if (!(t >= 0.0)) throw std::domain_error("YoungFunction: argument must be >= 0");
    switch (kind_) {
      case Kind::power:
        return scale_ * detail::pow_small(t, r_);
      case Kind::power_log: {
        if (t == 0.0) return 0.0;
        double lg = (log_form_ == LogForm::one_plus_log_plus)
                        ? 1.0 + std::max(0.0, std::log(t))
                        : std::log1p(t);
        return detail::pow_small(t, r_) * detail::pow_small(lg, beta_);
      }
      case Kind::exp_power:
        return detail::exp_checked(std::pow(t, gamma_)) - offset_;
      case Kind::linear:
        return t;
      case Kind::ess_sup_dual:
        return t <= threshold_ ? 0.0 : detail::kInf;
      case Kind::table:
        return table_value(t);
      case Kind::conjugate:
        return conjugate_value(t);
    }
    return 0.0;
  }

  double operator()(double t) const { return value(t); }

  // Generalized inverse sup{ t : value(t) <= s }; the true inverse wherever
  // the function is strictly increasing.
  double inverse(double s) const {
    if (!(s >= 0.0)) throw std::domain_error("YoungFunction::inverse: argument must be >= 0");
    switch (kind_) {
      case Kind::power:
        return std::pow(s / scale_, 1.0 / r_);
      case Kind::exp_power:
        if (offset_ == 1.0) return std::pow(std::log1p(s), 1.0 / gamma_);
        return s <= 1.0 ? 0.0 : std::pow(std::log(s), 1.0 / gamma_);
      case Kind::linear:
        return s;
      case Kind::ess_sup_dual:
        return threshold_;
      default:
        return inverse_by_bisection(s);
    }
  }

  YoungFunction complementary() const {
    switch (kind_) {
      case Kind::power: {
        if (r_ == 1.0) return ess_sup_dual(scale_);
        double rp = r_ / (r_ - 1.0);
        double cp = ((r_ - 1.0) / r_) * std::pow(scale_ * r_, -1.0 / (r_ - 1.0));
        return power(rp, cp);
      }
      case Kind::linear:
        return ess_sup_dual(1.0);
      case Kind::ess_sup_dual:
        return power(1.0, threshold_);
      case Kind::conjugate:
        return *base_;  // biconjugate of a closed convex function
      default: {
        YoungFunction y(Kind::conjugate);
        y.base_ = std::make_shared<const YoungFunction>(*this);
        return y;
      }
    }
  }

 private:
  explicit YoungFunction(Kind k) : kind_(k) {}

  double table_value(double t) const {
    const auto& pts = *table_;
    if (t <= pts.front().first) {
      // extend linearly through the origin over the leading segment
      if (pts.front().first == 0.0) return pts.front().second;
      return pts.front().second * (t / pts.front().first);
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (t <= pts[i].first) {
        double u = (t - pts[i - 1].first) / (pts[i].first - pts[i - 1].first);
        return pts[i - 1].second + u * (pts[i].second - pts[i - 1].second);
      }
    }
    const auto& a = pts[pts.size() - 2];
    const auto& b = pts.back();
    double slope = (b.second - a.second) / (b.first - a.first);
    return b.second + slope * (t - b.first);
  }

  // sup_{t in [1e-8, 1e8]} (s*t - base(t)): coarse log scan, then golden
  // section on the bracketing sub-range. The objective is concave in t for
  // convex base, so one local refinement suffices.
  double conjugate_value(double s) const {
    const YoungFunction& A = *base_;
    auto g = [&](double t) {
      double a = A.value(t);
      return std::isinf(a) ? -detail::kInf : s * t - a;
    };
    const double lo = std::log(1e-8), hi = std::log(1e8);
    const int M = 257;
    double best = 0.0;  // t = 0 contributes s*0 - A(0) <= 0; floor at 0
    int best_i = -1;
    for (int i = 0; i < M; ++i) {
      double t = std::exp(lo + (hi - lo) * i / (M - 1));
      double v = g(t);
      if (v > best) {
        best = v;
        best_i = i;
      }
    }
    if (best_i < 0) return 0.0;
    double a = lo + (hi - lo) * std::max(0, best_i - 1) / (M - 1);
    double b = lo + (hi - lo) * std::min(M - 1, best_i + 1) / (M - 1);
    const double phi_ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi_ratio * (b - a), x2 = a + phi_ratio * (b - a);
    double f1 = g(std::exp(x1)), f2 = g(std::exp(x2));
    for (int it = 0; it < 90; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + phi_ratio * (b - a);
        f2 = g(std::exp(x2));
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - phi_ratio * (b - a);
        f1 = g(std::exp(x1));
      }
    }
    return std::max(best, std::max(f1, f2));
  }

  double inverse_by_bisection(double s) const {
    double t = 1.0;
    int guard = 0;
    while (value(t) <= s) {
      t *= 4.0;
      if (!(t < 1e300)) return detail::kInf;
      if (++guard > 600) return detail::kInf;
    }
    // value(t) > s; walk down to an admissible point
    double hi = t, lo = t;
    guard = 0;
    do {
      lo *= 0.25;
      if (lo < 1e-300) return 0.0;
      if (++guard > 600) return 0.0;
    } while (value(lo) > s);
    for (int it = 0; it < 110 && (hi - lo) > 1e-14 * hi; ++it) {
      double mid = 0.5 * (lo + hi);
      if (value(mid) <= s)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  }

  Kind kind_;
  double r_ = 1.0;
  double beta_ = 0.0;
  double gamma_ = 1.0;
  double offset_ = 1.0;
  double scale_ = 1.0;
  double threshold_ = 1.0;
  LogForm log_form_ = LogForm::one_plus_log_plus;
  std::shared_ptr<const YoungFunction> base_;
  std::shared_ptr<const std::vector<std::pair<double, double>>> table_;
};

// ||c * chi_E||_{phi,I} = c / phi^{-1}(|I|/|E|), exact for indicators.
inline double indicator_luxemburg(double height, double subset_measure, double total_measure,
                                  const YoungFunction& phi) {
  if (!(total_measure > 0.0))
    throw std::invalid_argument("indicator_luxemburg: need |I| > 0");
  height = std::abs(height);
  if (height == 0.0 || subset_measure <= 0.0) return 0.0;
  double inv = phi.inverse(total_measure / std::min(subset_measure, total_measure));
  if (inv == 0.0) return detail::kInf;
  return height / inv;
}

inline double luxemburg_average(const GridFunction& f, const Interval& I,
                                const YoungFunction& phi) {
  const double L = f.half_length();
  if (I.lo() < -L - 1e-12 || I.hi() > L + 1e-12)
    throw std::domain_error("luxemburg_average: interval leaves the grid domain");
  const double a = std::max(I.lo(), -L), b = std::min(I.hi(), L);

  if (phi.is_ess_sup_dual()) return f.ess_sup_abs(a, b) / phi.threshold();

  // cells meeting I, with exact overlap weights
  const double h = f.step();
  auto i0 = static_cast<std::size_t>(std::floor((a + L) / h));
  auto i1 = std::min(static_cast<std::size_t>(std::ceil((b + L) / h)), f.size());
  std::vector<double> vals, weights;
  vals.reserve(i1 - i0);
  weights.reserve(i1 - i0);
  double vmax = 0.0, vsum = 0.0;
  for (std::size_t i = i0; i < i1; ++i) {
    double clo = -L + static_cast<double>(i) * h;
    double w = std::min(clo + h, b) - std::max(clo, a);
    if (w <= 0.0) continue;
    double v = std::abs(f[i]);
    vals.push_back(v);
    weights.push_back(w);
    vmax = std::max(vmax, v);
    vsum += v * w;
  }
  if (vmax == 0.0) return 0.0;

  const double measure = I.length();
  auto avg = [&](double lam) {
    double s = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (vals[i] == 0.0) continue;
      s += weights[i] * phi.value(vals[i] / lam);
      if (!(s < measure * 1e6)) return detail::kInf;  // early exit once clearly inadmissible
    }
    return s / measure;
  };

  double inv1 = phi.inverse(1.0);
  double hi_seed = inv1 > 0.0 ? vmax / inv1 : vmax;
  double lo_seed = inv1 > 0.0 ? (vsum / measure) / inv1 : hi_seed * 1e-6;
  return detail::lux_infimum(avg, lo_seed, hi_seed);
}

}  // namespace luxor
