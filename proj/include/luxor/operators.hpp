#pragma once

// Vector-valued convolution operators for the dyadic difference-of-boxes
// family. Each level of the unweighted transform is a difference of two
// normalized box averages, evaluated exactly through prefix sums; every level
// is bounded with compact support, so no principal value is involved.
// Commutators with a BMO symbol expand binomially into box convolutions of
// symbol-weighted inputs. The |z|^alpha-weighted variants convolve with
// exactly integrated per-cell kernel weights via FFT. On top of the raw
// transforms: pointwise sequence norms, Bochner norms, and a Kolmogorov
// weak-integrability check.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "luxor/detail/fft.hpp"
#include "luxor/grid.hpp"
#include "luxor/kernel.hpp"
#include "luxor/seqnorm.hpp"
#include "luxor/weights.hpp"

namespace luxor {

struct OperatorSpec {
  DyadicKernel kernel{-4, 14};
  SeqNorm X = SeqNorm::lp(2.0);
  int k = 0;                     // commutator order
  std::optional<BmoFunction> b;  // symbol, required iff k >= 1
};

inline void validate_operator_spec(const OperatorSpec& spec, const GridFunction& f) {
  if (spec.k < 0) throw std::invalid_argument("operator spec: need k >= 0");
  if (!spec.X.structurally_monotone())
    throw std::invalid_argument("operator spec: the sequence norm must be monotone");
  if (spec.k >= 1) {
    if (!spec.b)
      throw std::invalid_argument("operator spec: commutator order k >= 1 needs a symbol");
    const GridFunction& b = spec.b->function();
    if (b.size() != f.size() || b.half_length() != f.half_length())
      throw std::invalid_argument("operator spec: symbol grid does not match the input grid");
  }
  if (std::ldexp(1.0, spec.kernel.level_min() - 1) < 0.5 * f.step())
    throw std::invalid_argument("operator spec: level window falls below the grid resolution");
}

namespace detail {

// sign(z) |z|^{1+alpha} / (1+alpha), an antiderivative of |z|^alpha.
inline double power_antiderivative(double alpha, double z) {
  const double a1 = 1.0 + alpha;
  const double v = std::pow(std::abs(z), a1) / a1;
  return z < 0.0 ? -v : v;
}

// Exact integral of |z|^alpha K_l(z) over (a, b): the level is two centered
// boxes, each contributing its height times an antiderivative difference on
// the clipped overlap.
inline double weighted_box_integral(int l, double alpha, double a, double b) {
  const double radius[2] = {std::ldexp(1.0, l), std::ldexp(1.0, l - 1)};
  const double height[2] = {std::ldexp(1.0, -(l + 1)), -std::ldexp(1.0, -l)};
  double acc = 0.0;
  for (int t = 0; t < 2; ++t) {
    const double lo = std::max(a, -radius[t]);
    const double hi = std::min(b, radius[t]);
    if (hi > lo)
      acc += height[t] * (power_antiderivative(alpha, hi) - power_antiderivative(alpha, lo));
  }
  return acc;
}

// Per-cell weights w_d = integral of |z|^alpha K_l(z) over the z-cell
// ((d-1/2)h, (d+1/2)h), for d = -center..center. Convolving the samples with
// these weights reproduces the continuous convolution exactly, because the
// input is constant on cells. Displacements beyond the sample count never
// meet a nonzero sample and are dropped.
inline std::vector<double> level_cell_weights(int l, double alpha, double h, std::size_t n,
                                              std::size_t& center) {
  auto reach = static_cast<std::size_t>(std::ceil(std::ldexp(1.0, l) / h + 0.5));
  center = std::min(reach, n - 1);
  std::vector<double> w(2 * center + 1, 0.0);
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double d = static_cast<double>(j) - static_cast<double>(center);
    w[j] = weighted_box_integral(l, alpha, (d - 0.5) * h, (d + 0.5) * h);
  }
  return w;
}

// One level of the transform applied to a scalar input: exact prefix-sum box
// averages for the unweighted family, exact-weight FFT convolution otherwise.
inline VectorGridFunction level_transform(const DyadicKernel& kernel, const GridFunction& f) {
  VectorGridFunction out;
  out.l_min = kernel.level_min();
  out.levels.reserve(static_cast<std::size_t>(kernel.levels()));
  const std::size_t n = f.size();
  for (int l = kernel.level_min(); l <= kernel.level_max(); ++l) {
    if (kernel.alpha() == 0.0) {
      const GridFunction wide = sliding_window_average(f, std::ldexp(1.0, l));
      const GridFunction narrow = sliding_window_average(f, std::ldexp(1.0, l - 1));
      std::vector<double> s(n);
      for (std::size_t i = 0; i < n; ++i) s[i] = wide[i] - narrow[i];
      out.levels.push_back(GridFunction(f.half_length(), std::move(s)));
    } else {
      std::size_t center = 0;
      const std::vector<double> w = level_cell_weights(l, kernel.alpha(), f.step(), n, center);
      out.levels.push_back(GridFunction(f.half_length(), convolve_displaced(f.samples(), w, center)));
    }
  }
  return out;
}

// (b(x) - b(y))^k expanded binomially: the transform is applied to the k+1
// symbol-weighted inputs (-b)^j f, and the outputs are recombined pointwise
// with coefficients C(k,j) b(x)^{k-j}.
inline VectorGridFunction commutator_transform(const OperatorSpec& spec, const GridFunction& f) {
  const int k = spec.k;
  std::vector<VectorGridFunction> parts;
  parts.reserve(static_cast<std::size_t>(k) + 1);
  {
    GridFunction g = f;
    for (int j = 0; j <= k; ++j) {
      parts.push_back(level_transform(spec.kernel, g));
      if (j < k) {
        const GridFunction& b = spec.b->function();
        std::vector<double> s(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) s[i] = -b[i] * g[i];
        g = GridFunction(f.half_length(), std::move(s));
      }
    }
  }
  if (k == 0) return std::move(parts.front());
  std::vector<double> binom(static_cast<std::size_t>(k) + 1, 1.0);
  for (int j = 1; j <= k; ++j)
    binom[static_cast<std::size_t>(j)] =
        binom[static_cast<std::size_t>(j - 1)] * static_cast<double>(k - j + 1) /
        static_cast<double>(j);
  const GridFunction& b = spec.b->function();
  const std::size_t n = f.size(), nl = parts.front().levels.size();
  VectorGridFunction out;
  out.l_min = spec.kernel.level_min();
  out.levels.reserve(nl);
  for (std::size_t li = 0; li < nl; ++li) {
    std::vector<double> s(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double pw = 1.0;  // b(x)^{k-j}, built up from j = k down to 0
      double acc = 0.0;
      for (int j = k; j >= 0; --j) {
        acc += binom[static_cast<std::size_t>(j)] * pw * parts[static_cast<std::size_t>(j)].levels[li][i];
        pw *= b[i];
      }
      s[i] = acc;
    }
    out.levels.push_back(GridFunction(f.half_length(), std::move(s)));
  }
  return out;
}

}  // namespace detail

// The plain vector-valued transform {K_l * f}_l for the unweighted family.
inline VectorGridFunction apply(const OperatorSpec& spec, const GridFunction& f) {
  validate_operator_spec(spec, f);
  if (spec.kernel.alpha() != 0.0)
    throw std::invalid_argument("apply: weighted kernel, use fractional_apply");
  if (spec.k != 0) throw std::invalid_argument("apply: commutator order set, use apply_commutator");
  return detail::level_transform(spec.kernel, f);
}

// The order-k commutator with the BMO symbol; k = 0 reduces to apply.
inline VectorGridFunction apply_commutator(const OperatorSpec& spec, const GridFunction& f) {
  validate_operator_spec(spec, f);
  if (spec.kernel.alpha() != 0.0)
    throw std::invalid_argument("apply_commutator: weighted kernel, use fractional_apply");
  return detail::commutator_transform(spec, f);
}

// The |z|^alpha-weighted transform (with the commutator expansion when k >= 1).
inline VectorGridFunction fractional_apply(const OperatorSpec& spec, const GridFunction& f) {
  validate_operator_spec(spec, f);
  if (!(spec.kernel.alpha() > 0.0))
    throw std::invalid_argument("fractional_apply: needs alpha > 0, use apply");
  return detail::commutator_transform(spec, f);
}

// Pointwise sequence norm across levels.
inline GridFunction pointwise_norm(const VectorGridFunction& F, const SeqNorm& X) {
  if (F.levels.empty()) throw std::invalid_argument("pointwise_norm: no levels");
  const std::size_t n = F.levels.front().size(), nl = F.levels.size();
  std::vector<double> buf(nl), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t li = 0; li < nl; ++li) buf[li] = F.levels[li][i];
    s[i] = X.norm_consecutive(buf.data(), nl, F.l_min);
  }
  return GridFunction(F.levels.front().half_length(), std::move(s));
}

// The generalized square operator: pointwise X-norm of the transform output,
// dispatching on the weighting and commutator order in the spec.
inline GridFunction s_norm(const OperatorSpec& spec, const GridFunction& f) {
  const VectorGridFunction F = spec.kernel.alpha() > 0.0
                                   ? fractional_apply(spec, f)
                                   : (spec.k == 0 ? apply(spec, f) : apply_commutator(spec, f));
  return pointwise_norm(F, spec.X);
}

// (integral of ||F(x)||_X^p dx)^{1/p} by exact cell quadrature.
inline double bochner_norm(const VectorGridFunction& F, const SeqNorm& X, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("bochner_norm: need finite p > 0");
  if (F.levels.empty()) return 0.0;
  const GridFunction s = pointwise_norm(F, X);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) acc += std::pow(s[i], p);
  return std::pow(acc * s.step(), 1.0 / p);
}

// Scalar L^p norm on the grid, for operator-norm surrogates.
inline double lp_norm(const GridFunction& f, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("lp_norm: need finite p > 0");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += std::pow(std::abs(f[i]), p);
  return std::pow(acc * f.step(), 1.0 / p);
}

// Weak-integrability check: the normalized L^eps average of the transform
// norm over the outer ball against the normalized L^1 average of the input
// over the inner ball that supports it.
struct KolmogorovReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool degenerate = false;
};

inline KolmogorovReport kolmogorov_check(const OperatorSpec& spec, const GridFunction& f,
                                         const Interval& inner, const Interval& outer,
                                         double eps) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("kolmogorov_check: need eps in (0,1)");
  if (!(inner.lo() >= outer.lo()) || !(inner.hi() <= outer.hi()))
    throw std::invalid_argument("kolmogorov_check: inner ball must sit inside the outer ball");
  if (outer.lo() < -f.half_length() || outer.hi() > f.half_length())
    throw std::domain_error("kolmogorov_check: outer ball leaves the grid domain");
  if (f.integral_abs(-f.half_length(), inner.lo()) != 0.0 ||
      f.integral_abs(inner.hi(), f.half_length()) != 0.0)
    throw std::invalid_argument("kolmogorov_check: input not supported in the inner ball");
  const GridFunction s = s_norm(spec, f);
  const GridFunction se = s.map([eps](double v) { return std::pow(std::abs(v), eps); });
  KolmogorovReport rep;
  rep.lhs = std::pow(se.integral(outer.lo(), outer.hi()) / outer.length(), 1.0 / eps);
  rep.rhs = f.integral_abs(inner.lo(), inner.hi()) / inner.length();
  rep.degenerate = rep.rhs == 0.0;
  rep.ratio = rep.degenerate ? 0.0 : rep.lhs / rep.rhs;
  return rep;
}

}  // namespace luxor
