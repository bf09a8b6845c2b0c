#pragma once

// Uncentered maximal operators over grid functions.
//
// For the reducible Young functions (linear, powers) with no length factor the
// supremum over all intervals containing x is computed exactly: the interval
// average of |f|^r is a chord slope of the piecewise linear prefix integral,
// so the sup reduces to convex hull tangents (see exact_plain_scores).
//
// Everywhere else (generic Young functions, fractional length factors) the sup
// is discretized by a deterministic candidate family:
//
//   - per-point geometric arms [x - a*s, x + b*s], a,b in {0,1,2,3}, s = h*2^j,
//     clipped to the domain (only where each candidate is O(1) to score);
//   - aligned multiscale windows of 1, 2, 3, 2^j and 3*2^{j-1} cells with
//     starts every max(width/4, 1) cells, shared by every point they cover;
//   - the single cell containing x;
//   - greedy pattern refinement of the winning interval.
//
// For reducible kinds every candidate is exact via prefix sums and refinement
// runs per point. For generic Young functions each aligned window gets an
// exact bisected Luxemburg average, per-point arms are dropped (each arm is
// contained in a window of comparable length, which bounds the loss by a fixed
// factor), and refinement runs once per distinct winning window under a global
// cell budget.
//
// Outputs are deterministic and independent of evaluation order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "luxor/grid.hpp"
#include "luxor/young.hpp"

namespace luxor {

struct MaximalOptions {
  bool refine = true;         // pattern-refine winning intervals
  bool include_arms = true;   // per-point geometric arms (reducible kinds only)
  bool family_only = false;   // force the candidate-family path even where the
                              // exact prefix route applies (dual-route tests)
  double lux_rel_tol = 1e-9;  // bisection tolerance for generic window averages
  std::size_t refine_budget_cells = 0;  // generic winner refinement; 0 = 4N
};

namespace detail {

inline std::vector<std::size_t> window_widths(std::size_t n) {
  std::vector<std::size_t> ws = {1, 2, 3};
  for (std::size_t w = 4; w <= n; w *= 2) {
    ws.push_back(w);
    std::size_t w3 = w / 2 * 3;
    if (w3 <= n) ws.push_back(w3);
  }
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
  while (!ws.empty() && ws.back() > n) ws.pop_back();
  return ws;
}

struct ChordPoint {
  double x, y;
};

inline double chord_slope(const ChordPoint& a, const ChordPoint& b) {
  return (b.y - a.y) / (b.x - a.x);
}

// Max slope between an outside point q and a convex chain; at(0) must be the
// leftmost chain vertex. Seen from q the slope sequence along the chain rises,
// has at most one flat step, then falls, so a local comparison bisects to the
// peak.
template <class At>
double hull_tangent_slope(const ChordPoint& q, std::size_t size, At&& at, bool q_is_left) {
  std::size_t lo = 0, hi = size - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    double s0 = q_is_left ? chord_slope(q, at(mid)) : chord_slope(at(mid), q);
    double s1 = q_is_left ? chord_slope(q, at(mid + 1)) : chord_slope(at(mid + 1), q);
    if (s1 > s0)
      lo = mid + 1;
    else
      hi = mid;
  }
  return q_is_left ? chord_slope(q, at(lo)) : chord_slope(at(lo), q);
}

// Exact plain maximal of a nonnegative step function: per cell center x, the
// sup over all intervals containing x of the interval average. The prefix
// integral S is piecewise linear and an interval average is the slope of a
// chord of its graph, so the sup is attained with both chord endpoints at cell
// boundaries or at x itself (within a cell the average is monotone in each
// endpoint). Boundary-to-boundary chords are maximized by divide and conquer
// on a shared middle boundary: tangents from each left vertex to the upper
// hull of the right block give, after a running prefix max, the best crossing
// chord for every left cell, and symmetrically on the right. The x-anchored
// chords are tangents from the in-cell point to the suffix upper hull and to
// the prefix lower hull.
inline std::vector<double> exact_plain_scores(const GridFunction& g) {
  const std::size_t n = g.size();
  const double L = g.half_length(), h = g.step();
  std::vector<ChordPoint> P(n + 1);
  {
    double s = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      P[j] = {-L + static_cast<double>(j) * h, s};
      if (j < n) s += g[j] * h;
    }
  }

  std::vector<double> best(n);
  for (std::size_t i = 0; i < n; ++i) best[i] = g[i];

  // chords [x_i, t_k], k > i: suffix upper hull grown leftward, leftmost at back
  {
    std::vector<ChordPoint> H;
    H.reserve(n + 1);
    H.push_back(P[n]);
    for (std::size_t i = n; i-- > 0;) {
      if (i + 1 < n) {
        const ChordPoint& p = P[i + 1];
        while (H.size() >= 2 && chord_slope(p, H.back()) <= chord_slope(H.back(), H[H.size() - 2]))
          H.pop_back();
        H.push_back(p);
      }
      ChordPoint q{-L + (static_cast<double>(i) + 0.5) * h, P[i].y + 0.5 * h * g[i]};
      double s = hull_tangent_slope(
          q, H.size(), [&](std::size_t m) -> const ChordPoint& { return H[H.size() - 1 - m]; },
          true);
      best[i] = std::max(best[i], s);
    }
  }

  // chords [t_j, x_i], j <= i: prefix lower hull grown rightward
  {
    std::vector<ChordPoint> H;
    H.reserve(n + 1);
    H.push_back(P[0]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) {
        const ChordPoint& p = P[i];
        while (H.size() >= 2 && chord_slope(H[H.size() - 2], H.back()) >= chord_slope(H.back(), p))
          H.pop_back();
        H.push_back(p);
      }
      ChordPoint q{-L + (static_cast<double>(i) + 0.5) * h, P[i].y + 0.5 * h * g[i]};
      double s = hull_tangent_slope(
          q, H.size(), [&](std::size_t m) -> const ChordPoint& { return H[m]; }, false);
      best[i] = std::max(best[i], s);
    }
  }

  // boundary chords (t_j, t_k), credited to every covered cell j..k-1
  {
    std::vector<ChordPoint> UH, LH;
    auto solve = [&](auto&& self, std::size_t lo, std::size_t hi) -> void {
      if (hi - lo < 2) return;
      std::size_t mid = (lo + hi) / 2;

      UH.clear();
      for (std::size_t k = mid; k <= hi; ++k) {
        while (UH.size() >= 2 &&
               chord_slope(UH[UH.size() - 2], UH.back()) <= chord_slope(UH.back(), P[k]))
          UH.pop_back();
        UH.push_back(P[k]);
      }
      double run = 0.0;
      for (std::size_t j = lo; j < mid; ++j) {
        double t = hull_tangent_slope(
            P[j], UH.size(), [&](std::size_t m) -> const ChordPoint& { return UH[m]; }, true);
        run = std::max(run, t);
        best[j] = std::max(best[j], run);
      }

      LH.clear();
      for (std::size_t j = lo; j <= mid; ++j) {
        while (LH.size() >= 2 &&
               chord_slope(LH[LH.size() - 2], LH.back()) >= chord_slope(LH.back(), P[j]))
          LH.pop_back();
        LH.push_back(P[j]);
      }
      run = 0.0;
      for (std::size_t k = hi; k > mid; --k) {
        double t = hull_tangent_slope(
            P[k], LH.size(), [&](std::size_t m) -> const ChordPoint& { return LH[m]; }, false);
        run = std::max(run, t);
        best[k - 1] = std::max(best[k - 1], run);
      }

      self(self, lo, mid);
      self(self, mid, hi);
    };
    solve(solve, 0, n);
  }

  return best;
}

// Greedy pattern search over containing intervals; score must accept any
// subinterval of [-L, L]. Returns the best value, refines lo/hi in place.
template <class Score>
double pattern_refine(double x, double L, double min_len, double& lo, double& hi, double best,
                      Score&& score, int eval_cap) {
  int evals = 0;
  for (double step = 0.35; step > 3e-5 && evals < eval_cap; step *= 0.6) {
    for (int moves = 0; moves < 10; ++moves) {
      double d = step * (hi - lo);
      const double clo[6] = {lo - d, lo + d, lo, lo, lo - d, lo + d};
      const double chi[6] = {hi, hi, hi - d, hi + d, hi + d, hi - d};
      double b_lo = lo, b_hi = hi, b_v = best;
      for (int c = 0; c < 6; ++c) {
        double a = std::max(clo[c], -L);
        double b = std::min(chi[c], L);
        if (a > x || b < x || b - a < min_len) continue;
        ++evals;
        double v = score(a, b);
        if (v > b_v * (1.0 + 1e-15)) {
          b_v = v;
          b_lo = a;
          b_hi = b;
        }
      }
      if (b_v <= best) break;
      lo = b_lo;
      hi = b_hi;
      best = b_v;
      if (evals >= eval_cap) break;
    }
  }
  return best;
}

// Exact Luxemburg average of n equal-width cells (the aligned-window case).
inline double cells_lux(const double* v, std::size_t n, const YoungFunction& phi, double inv1,
                        double rel_tol) {
  double vmax = 0.0, vsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    vmax = std::max(vmax, v[i]);
    vsum += v[i];
  }
  if (vmax == 0.0) return 0.0;
  const double cap = static_cast<double>(n) * 1e6;
  auto avg = [&](double lam) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (v[i] == 0.0) continue;
      s += phi.value(v[i] / lam);
      if (!(s < cap)) return kInf;
    }
    return s / static_cast<double>(n);
  };
  return lux_infimum(avg, (vsum / static_cast<double>(n)) / inv1, vmax / inv1, rel_tol);
}

// Maximal operator for kinds whose Luxemburg average reduces to a power of an
// L^1 average: score(I) = |I|^alpha * (scale * avg_I |f|^r)^(1/r), exact and
// O(1) per candidate through the prefix integral of g = |f|^r.
inline GridFunction reducible_maximal(const GridFunction& f, double r, double scale, double alpha,
                                      const MaximalOptions& opt) {
  const std::size_t n = f.size();
  const double L = f.half_length(), h = f.step();
  GridFunction g = (r == 1.0) ? f.map([](double t) { return std::abs(t); })
                              : f.map([r](double t) { return pow_small(std::abs(t), r); });

  if (alpha == 0.0 && !opt.family_only) {
    std::vector<double> out = exact_plain_scores(g);
    for (double& v : out) {
      v *= scale;
      if (r != 1.0) v = std::pow(v, 1.0 / r);
    }
    return GridFunction(L, std::move(out));
  }

  // With alpha = 0 every comparison runs on the raw average of g and the
  // monotone map t -> (scale*t)^(1/r) is applied on output only, so the
  // search decisions match a plain maximal of g bit for bit. With alpha != 0
  // the length factor enters the comparison and the composed score is used.
  auto score = [&](double a, double b) {
    double len = b - a;
    double base = g.integral(a, b) / len;
    if (alpha == 0.0) return base;
    base *= scale;
    if (r != 1.0) base = std::pow(base, 1.0 / r);
    return std::pow(len, alpha) * base;
  };

  std::vector<double> out(n), lo_best(n), hi_best(n);
  for (std::size_t i = 0; i < n; ++i) {
    double clo = -L + static_cast<double>(i) * h;
    lo_best[i] = clo;
    hi_best[i] = clo + h;
    out[i] = score(clo, clo + h);
  }

  for (std::size_t w : window_widths(n)) {
    std::size_t stride = std::max<std::size_t>(w / 4, 1);
    for (std::size_t s = 0; s + w <= n; s += stride) {
      double a = -L + static_cast<double>(s) * h;
      double b = a + static_cast<double>(w) * h;
      double v = score(a, b);
      for (std::size_t i = s; i < s + w; ++i) {
        if (v > out[i]) {
          out[i] = v;
          lo_best[i] = a;
          hi_best[i] = b;
        }
      }
    }
  }

  // Per-point arms, then refinement seeded from the global winner plus the
  // best arm of each dyadic scale: the average landscape over intervals is
  // multimodal for clustered mass, so a single seed can strand the search in
  // the wrong basin while some scale's arm sits in the right one.
  struct Seed {
    double v, lo, hi;
  };
  std::vector<Seed> seeds;
  for (std::size_t i = 0; i < n; ++i) {
    double x = f.x_at(i);
    double best = out[i], blo = lo_best[i], bhi = hi_best[i];
    seeds.clear();
    if (opt.include_arms) {
      // One-sided arms matter: the optimal interval can be far more lopsided
      // than 3:1 when the mass sits entirely on one side of x.
      static constexpr int kArm[11][2] = {{1, 1}, {1, 2}, {2, 1}, {1, 3}, {3, 1}, {2, 2},
                                          {2, 3}, {3, 2}, {3, 3}, {1, 0}, {0, 1}};
      for (double s = h; s <= 2.0 * L; s *= 2.0) {
        double sv = 0.0, slo = 0.0, shi = 0.0;
        for (const auto& ab : kArm) {
          double aa = std::max(x - ab[0] * s, -L);
          double bb = std::min(x + ab[1] * s, L);
          if (!(bb - aa > 0.0)) continue;
          double v = score(aa, bb);
          if (v > sv) {
            sv = v;
            slo = aa;
            shi = bb;
          }
        }
        if (sv > best) {
          best = sv;
          blo = slo;
          bhi = shi;
        }
        if (sv > 0.0) seeds.push_back({sv, slo, shi});
      }
    }
    if (opt.refine) {
      double rl = blo, rh = bhi;
      best = std::max(best, pattern_refine(x, L, 0.25 * h, rl, rh, best, score, 200));
      std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.v > b.v; });
      int used = 0;
      for (const Seed& sd : seeds) {
        if (used >= 5 || sd.v < 0.55 * best) break;
        rl = sd.lo;
        rh = sd.hi;
        best = std::max(best, pattern_refine(x, L, 0.25 * h, rl, rh, sd.v, score, 120));
        ++used;
      }
    }
    out[i] = best;
  }
  if (alpha == 0.0) {
    for (double& v : out) {
      v *= scale;
      if (r != 1.0) v = std::pow(v, 1.0 / r);
    }
  }
  return GridFunction(L, std::move(out));
}

inline GridFunction constant_like(const GridFunction& f, double c) {
  return GridFunction(f.half_length(), std::vector<double>(f.size(), c));
}

inline GridFunction generic_orlicz_maximal(const GridFunction& f, const YoungFunction& phi,
                                           double alpha, const MaximalOptions& opt) {
  if (phi.value(0.0) != 0.0)
    throw std::invalid_argument("orlicz_maximal: phi must vanish at 0");
  const double inv1 = phi.inverse(1.0);
  if (!(inv1 > 0.0) || !std::isfinite(inv1))
    throw std::invalid_argument("orlicz_maximal: phi has no usable inverse at 1");

  const std::size_t n = f.size();
  const double L = f.half_length(), h = f.step();
  std::vector<double> absf(n);
  for (std::size_t i = 0; i < n; ++i) absf[i] = std::abs(f[i]);

  struct Window {
    std::size_t lo, w;
    double value;
  };
  std::vector<Window> wins;
  std::vector<double> out(n);
  std::vector<int> wid(n, -1);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = (alpha == 0.0 ? 1.0 : std::pow(h, alpha)) * absf[i] / inv1;

  for (std::size_t w : window_widths(n)) {
    if (w == 1) continue;  // the single-cell pass above is this scale, exactly
    std::size_t stride = std::max<std::size_t>(w / 4, 1);
    double lenpow = alpha == 0.0 ? 1.0 : std::pow(static_cast<double>(w) * h, alpha);
    for (std::size_t s = 0; s + w <= n; s += stride) {
      double v = lenpow * cells_lux(&absf[s], w, phi, inv1, opt.lux_rel_tol);
      int id = static_cast<int>(wins.size());
      wins.push_back({s, w, v});
      for (std::size_t i = s; i < s + w; ++i) {
        if (v > out[i]) {
          out[i] = v;
          wid[i] = id;
        }
      }
    }
  }

  if (opt.refine && !wins.empty()) {
    long budget = static_cast<long>(opt.refine_budget_cells ? opt.refine_budget_cells : 4 * n);
    std::vector<int> ids;
    for (std::size_t i = 0; i < n; ++i)
      if (wid[i] >= 0 && (ids.empty() || ids.back() != wid[i])) ids.push_back(wid[i]);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::sort(ids.begin(), ids.end(),
              [&](int a, int b) { return wins[a].value > wins[b].value; });

    for (int id : ids) {
      if (budget <= 0) break;
      const Window& W = wins[id];
      double lo = -L + static_cast<double>(W.lo) * h;
      double hi = lo + static_cast<double>(W.w) * h;
      double x = 0.5 * (lo + hi);
      auto score = [&](double a, double b) {
        budget -= static_cast<long>((b - a) / h) + 1;
        double v = luxemburg_average(f, Interval::from_endpoints(a, b), phi);
        return alpha == 0.0 ? v : std::pow(b - a, alpha) * v;
      };
      int cap = static_cast<int>(std::min<long>(48, budget / (static_cast<long>(W.w) + 1)));
      if (cap < 6) continue;
      double v = pattern_refine(x, L, 0.25 * h, lo, hi, W.value, score, cap);
      if (v > W.value) {
        auto i0 = static_cast<std::size_t>(std::ceil((lo + L) / h - 1e-9));
        auto i1 = static_cast<std::size_t>(std::floor((hi + L) / h + 1e-9));
        i1 = std::min(i1, n);
        for (std::size_t i = i0; i < i1; ++i) out[i] = std::max(out[i], v);
      }
    }
  }
  return GridFunction(L, std::move(out));
}

inline GridFunction maximal_dispatch(const GridFunction& f, const YoungFunction& phi, double alpha,
                                     const MaximalOptions& opt) {
  switch (phi.kind()) {
    case YoungFunction::Kind::linear:
      return reducible_maximal(f, 1.0, 1.0, alpha, opt);
    case YoungFunction::Kind::power:
      return reducible_maximal(f, phi.param_r(), phi.param_scale(), alpha, opt);
    case YoungFunction::Kind::ess_sup_dual: {
      // both |I|^alpha and the essential sup grow with I: the domain wins
      double v = (alpha == 0.0 ? 1.0 : std::pow(2.0 * f.half_length(), alpha)) * f.max_abs() /
                 phi.threshold();
      return constant_like(f, v);
    }
    default:
      return generic_orlicz_maximal(f, phi, alpha, opt);
  }
}

}  // namespace detail

inline GridFunction hl_maximal(const GridFunction& f, const MaximalOptions& opt = {}) {
  return detail::reducible_maximal(f, 1.0, 1.0, 0.0, opt);
}

inline GridFunction orlicz_maximal(const GridFunction& f, const YoungFunction& phi,
                                   const MaximalOptions& opt = {}) {
  return detail::maximal_dispatch(f, phi, 0.0, opt);
}

inline GridFunction iterated_maximal(const GridFunction& f, int k, const MaximalOptions& opt = {}) {
  if (k < 1) throw std::invalid_argument("iterated_maximal: need k >= 1");
  GridFunction out = hl_maximal(f, opt);
  for (int i = 1; i < k; ++i) out = hl_maximal(out, opt);
  return out;
}

inline GridFunction fractional_orlicz_maximal(const GridFunction& f, const YoungFunction& phi,
                                              double alpha, const MaximalOptions& opt = {}) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("fractional_orlicz_maximal: need 0 < alpha < 1");
  return detail::maximal_dispatch(f, phi, alpha, opt);
}

// Mean oscillation over the aligned window family only; every window is also
// an hl candidate, so M# <= 2*M holds pointwise by construction.
inline GridFunction sharp_maximal(const GridFunction& f) {
  const std::size_t n = f.size();
  const double L = f.half_length(), h = f.step();
  std::vector<double> out(n, 0.0);
  for (std::size_t w : detail::window_widths(n)) {
    if (w < 2) continue;
    std::size_t stride = std::max<std::size_t>(w / 4, 1);
    for (std::size_t s = 0; s + w <= n; s += stride) {
      double a = -L + static_cast<double>(s) * h;
      double mean = f.integral(a, a + static_cast<double>(w) * h) / (static_cast<double>(w) * h);
      double osc = 0.0;
      for (std::size_t i = s; i < s + w; ++i) osc += std::abs(f[i] - mean);
      osc /= static_cast<double>(w);
      for (std::size_t i = s; i < s + w; ++i) out[i] = std::max(out[i], osc);
    }
  }
  return GridFunction(L, std::move(out));
}

inline GridFunction sharp_maximal_delta(const GridFunction& f, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("sharp_maximal_delta: need 0 < delta < 1");
  auto g = f.map([delta](double t) { return std::pow(std::abs(t), delta); });
  return sharp_maximal(g).map([delta](double t) { return std::pow(t, 1.0 / delta); });
}

}  // namespace luxor
