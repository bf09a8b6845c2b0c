#pragma once

// Norms on finitely supported real sequences over Z: the l^p scale, Orlicz
// sequence norms inf{ lambda : sum_n E(|a_n|/lambda) <= 1 } (plain sums, no
// measure normalization), and the quadratic counterexample norm
//
//   ||x|| = ( (x_1 - x_2)^2 + sum_{n != 1} x_n^2 )^{1/2},
//
// which is a genuine norm that fails coordinatewise monotonicity.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "luxor/young.hpp"

namespace luxor {

class SparseSeq {
 public:
  SparseSeq() = default;
  SparseSeq(std::initializer_list<std::pair<int, double>> init) {
    for (const auto& e : init) set(e.first, e.second);
  }

  void set(int index, double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("SparseSeq: value must be finite");
    auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                               [](const auto& e, int i) { return e.first < i; });
    if (it != entries_.end() && it->first == index)
      it->second = value;
    else
      entries_.insert(it, {index, value});
  }

  double at(int index) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                               [](const auto& e, int i) { return e.first < i; });
    return (it != entries_.end() && it->first == index) ? it->second : 0.0;
  }

  const std::vector<std::pair<int, double>>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }

 private:
  std::vector<std::pair<int, double>> entries_;  // sorted by index
};

class SeqNorm {
 public:
  enum class Kind { lp, orlicz, counterexample };

  static SeqNorm lp(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("SeqNorm::lp: need p >= 1 (or infinity)");
    SeqNorm x(Kind::lp);
    x.p_ = p;
    return x;
  }

  static SeqNorm orlicz(YoungFunction E) {
    if (E.is_ess_sup_dual())
      throw std::invalid_argument("SeqNorm::orlicz: use lp(infinity) for the sup norm");
    SeqNorm x(Kind::orlicz);
    x.E_ = std::move(E);
    return x;
  }

  static SeqNorm counterexample() { return SeqNorm(Kind::counterexample); }

  Kind kind() const { return kind_; }
  double p() const { return p_; }
  const YoungFunction& young() const {
    if (!E_) throw std::logic_error("SeqNorm: no Young function");
    return *E_;
  }

  // The lp and Orlicz norms are coordinatewise monotone by construction; the
  // counterexample norm is the point of the counterexample.
  bool structurally_monotone() const { return kind_ != Kind::counterexample; }

  double operator()(const SparseSeq& a) const {
    switch (kind_) {
      case Kind::lp:
      case Kind::orlicz: {
        std::vector<double> v;
        v.reserve(a.support_size());
        for (const auto& e : a.entries()) v.push_back(std::abs(e.second));
        return norm_of_values(v.data(), v.size());
      }
      case Kind::counterexample: {
        double d = a.at(1) - a.at(2);
        double s = d * d;
        for (const auto& e : a.entries())
          if (e.first != 1) s += e.second * e.second;
        return std::sqrt(s);
      }
    }
    return 0.0;
  }

  // Norm of the finite sequence (values[0], ..., values[n-1]) placed at the
  // consecutive indices first_index, first_index + 1, ...
  double norm_consecutive(const double* values, std::size_t n, int first_index) const {
    if (kind_ != Kind::counterexample) return norm_of_values(values, n);
    double a1 = 0.0, a2 = 0.0, s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      int idx = first_index + static_cast<int>(i);
      if (idx == 1)
        a1 = values[i];
      else
        s += values[i] * values[i];
      if (idx == 2) a2 = values[i];
    }
    double d = a1 - a2;
    return std::sqrt(d * d + s);
  }

  // Index-free fast path; valid for the lp and Orlicz kinds.
  double norm_of_values(const double* values, std::size_t n) const {
    if (kind_ == Kind::counterexample)
      throw std::logic_error("SeqNorm: counterexample norm needs indices");
    if (n == 0) return 0.0;
    if (kind_ == Kind::lp) return lp_norm(values, n);
    return orlicz_norm(values, n);
  }

 private:
  explicit SeqNorm(Kind k) : kind_(k) {}

  double lp_norm(const double* v, std::size_t n) const {
    if (std::isinf(p_)) {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(v[i]));
      return m;
    }
    double s = 0.0;
    if (p_ == 2.0) {
      for (std::size_t i = 0; i < n; ++i) s += v[i] * v[i];
      return std::sqrt(s);
    }
    if (p_ == 1.0) {
      for (std::size_t i = 0; i < n; ++i) s += std::abs(v[i]);
      return s;
    }
    for (std::size_t i = 0; i < n; ++i) s += std::pow(std::abs(v[i]), p_);
    return std::pow(s, 1.0 / p_);
  }

  double orlicz_norm(const double* v, std::size_t n) const {
    const YoungFunction& E = *E_;
    double vmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) vmax = std::max(vmax, std::abs(v[i]));
    if (vmax == 0.0) return 0.0;
    auto budget = [&](double lam) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (v[i] == 0.0) continue;
        s += E.value(std::abs(v[i]) / lam);
        if (!(s < 1e6)) return detail::kInf;
      }
      return s;
    };
    double inv1 = E.inverse(1.0);
    double invn = E.inverse(1.0 / static_cast<double>(n));
    double lo_seed = inv1 > 0.0 ? vmax / inv1 : vmax;
    double hi_seed = invn > 0.0 ? vmax / invn : lo_seed * static_cast<double>(n);
    return detail::lux_infimum(budget, lo_seed, hi_seed);
  }

  Kind kind_;
  double p_ = 2.0;
  std::optional<YoungFunction> E_;
};

// ---------------------------------------------------------------------------

struct MonotonicityResult {
  bool pass = true;
  int violating_trial = -1;
  std::optional<std::pair<SparseSeq, SparseSeq>> witness;  // (a, b) with |a| <= |b|, ||a|| > ||b||
  double norm_a = 0.0, norm_b = 0.0;
};

// Random pairs with |a| <= |b| coordinatewise; returns the first violating
// pair if the norm fails to be monotone on the sample.
inline MonotonicityResult check_monotone(const SeqNorm& X, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> support_size(1, 6);
  std::uniform_int_distribution<int> index(-4, 6);
  std::uniform_real_distribution<double> mag(0.05, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  MonotonicityResult out;
  for (int t = 0; t < trials; ++t) {
    SparseSeq b, a;
    int k = support_size(rng);
    for (int j = 0; j < k; ++j) {
      int idx = index(rng);
      double vb = mag(rng) * (unit(rng) < 0.5 ? -1.0 : 1.0);
      double va = vb * unit(rng) * (unit(rng) < 0.5 ? -1.0 : 1.0);
      b.set(idx, vb);
      a.set(idx, va);
    }
    double na = X(a), nb = X(b);
    if (na > nb * (1.0 + 1e-12) + 1e-12) {
      out.pass = false;
      out.violating_trial = t;
      out.witness = {a, b};
      out.norm_a = na;
      out.norm_b = nb;
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

enum class IndexSet { nonzero_integers, positive_integers };

struct HarmonicNormResult {
  double value = 0.0;
  bool stabilized = false;
  std::optional<double> tail_bound;  // analytic bound on the truncation error, when available
  std::vector<std::pair<long, double>> partials;
};

// || {1/m} ||_X truncated to |m| <= m_max, with partial values along a
// doubling schedule. Stabilization means the last doubling moved the value
// by less than 1e-8 (relative to max(1, value)).
inline HarmonicNormResult harmonic_norm(const SeqNorm& X, IndexSet set, long m_max) {
  if (m_max < 2) throw std::invalid_argument("harmonic_norm: need m_max >= 2");
  const double mult = (set == IndexSet::nonzero_integers) ? 2.0 : 1.0;

  std::vector<long> checkpoints;
  for (long d = 16; d >= 2; d /= 2)
    if (m_max / d >= 2) checkpoints.push_back(m_max / d);
  checkpoints.push_back(m_max);

  auto value_at = [&](long M) -> double {
    switch (X.kind()) {
      case SeqNorm::Kind::lp: {
        double p = X.p();
        if (std::isinf(p)) return 1.0;
        double s = 0.0;
        for (long m = M; m >= 1; --m) s += mult * std::pow(1.0 / m, p);
        return std::pow(s, 1.0 / p);
      }
      case SeqNorm::Kind::orlicz: {
        const YoungFunction& E = X.young();
        auto budget = [&](double lam) {
          double s = 0.0;
          for (long m = 1; m <= M; ++m) {
            s += mult * E.value(1.0 / (m * lam));
            if (!(s < 1e6)) return detail::kInf;
          }
          return s;
        };
        double inv1 = E.inverse(1.0);
        double invn = E.inverse(1.0 / (mult * M));
        double lo_seed = inv1 > 0.0 ? 1.0 / inv1 : 1.0;
        double hi_seed = invn > 0.0 ? 1.0 / invn : lo_seed * M;
        return detail::lux_infimum(budget, lo_seed, hi_seed);
      }
      case SeqNorm::Kind::counterexample: {
        // (a_1 - a_2)^2 + sum_{n != 1} a_n^2 with a_n = 1/n on the index set
        double s2 = 0.0;
        for (long m = M; m >= 1; --m) s2 += mult * 1.0 / (static_cast<double>(m) * m);
        double a1 = 1.0, a2 = 0.5;
        return std::sqrt((a1 - a2) * (a1 - a2) + s2 - a1 * a1);
      }
    }
    return 0.0;
  };

  HarmonicNormResult out;
  for (long cp : checkpoints) out.partials.push_back({cp, value_at(cp)});
  out.value = out.partials.back().second;
  if (out.partials.size() >= 2) {
    double prev = out.partials[out.partials.size() - 2].second;
    out.stabilized =
        std::abs(out.value - prev) < 1e-8 * std::max(1.0, std::abs(out.value));
  }
  if (X.kind() == SeqNorm::Kind::lp && !std::isinf(X.p()) && X.p() > 1.0) {
    // sum_{m > M} m^{-p} < M^{1-p}/(p-1); propagate through the p-th root
    double p = X.p();
    double tail = mult * std::pow(static_cast<double>(m_max), 1.0 - p) / (p - 1.0);
    double s = std::pow(out.value, p);
    out.tail_bound = std::pow(s + tail, 1.0 / p) - out.value;
  }
  return out;
}

}  // namespace luxor
