// Experiment harness: batteries of compactly supported inputs and gated
// weights driven through the vector-valued dyadic operators, with ratio
// suites against Orlicz maximal majorants, a sharp-maximal pointwise suite,
// a weak-type modular suite, level-window growth probes for the two annulus
// gauges, and fractional variants.  Reports carry per-case ratios, named
// constants locked against a regression store, and trajectory data for
// plots.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "luxor/grid.hpp"
#include "luxor/kernel.hpp"
#include "luxor/maximal.hpp"
#include "luxor/operators.hpp"
#include "luxor/serialize.hpp"
#include "luxor/weights.hpp"
#include "luxor/young.hpp"

namespace luxor {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  // grid
  double half_length = 16.0;
  std::size_t samples = 4096;
  // operator
  int level_min = -4;
  int level_max = 3;
  double alpha = 0.0;  // 0 = singular family, >0 = fractional family
  int k = 0;           // commutator order
  std::string x_norm = "l2";
  std::string symbol = "log-abs";  // commutator symbol, used when k >= 1
  // batteries
  std::vector<GeneratorSpec> battery;
  std::vector<std::string> weights;
  std::vector<double> dilations;
  double translation = 0.0;  // whole-cell shift applied to battery and weights
  // exponents and sharp/weak parameters
  std::vector<double> exponents = {1.0, 2.0};
  double q = 0.0;  // fractional target exponent; 0 derives q from 1/q = 1/p - alpha
  double delta = 1.0 / 3.0;
  double eps = 0.5;
  // weak-type lambda sweep, as multiples of ||f||_inf
  double lambda_lo = 1e-3;
  double lambda_hi = 1e3;
  int lambda_count = 25;
  std::uint64_t seed = 1;
};

inline ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.battery = {
      {"bump", 0.0, 1.0, 1.0, 0.0, 1.0, 4},
      {"bump", 0.5, 0.5, -2.0, 0.0, 1.0, 4},
      {"step", 0.0, 0.0, 1.0, 0.0, 1.0, 4},
      {"dyadic-chirp", 0.0, 1.0, 1.0, 0.0, 1.0, 4},
      {"step", 0.0, 0.0, 0.0, 0.0, 1.0, 4},  // identically zero: exercises the skip path
  };
  cfg.weights = {"one", "power:-0.5", "power:0.5", "oscillating"};
  cfg.dilations = {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  return cfg;
}

inline Json config_to_json(const ExperimentConfig& cfg) {
  Json j;
  j["half_length"] = cfg.half_length;
  j["samples"] = cfg.samples;
  j["level_min"] = cfg.level_min;
  j["level_max"] = cfg.level_max;
  j["alpha"] = cfg.alpha;
  j["k"] = cfg.k;
  j["x_norm"] = cfg.x_norm;
  j["symbol"] = cfg.symbol;
  j["battery"] = Json::array();
  for (const auto& g : cfg.battery) j["battery"].push_back(generator_to_json(g));
  j["weights"] = cfg.weights;
  j["dilations"] = cfg.dilations;
  j["translation"] = cfg.translation;
  j["exponents"] = cfg.exponents;
  j["q"] = cfg.q;
  j["delta"] = cfg.delta;
  j["eps"] = cfg.eps;
  j["lambda_lo"] = cfg.lambda_lo;
  j["lambda_hi"] = cfg.lambda_hi;
  j["lambda_count"] = cfg.lambda_count;
  j["seed"] = cfg.seed;
  return j;
}

inline ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig base = default_config();
  ExperimentConfig cfg;
  cfg.half_length = j.value("half_length", base.half_length);
  cfg.samples = j.value("samples", base.samples);
  cfg.level_min = j.value("level_min", base.level_min);
  cfg.level_max = j.value("level_max", base.level_max);
  cfg.alpha = j.value("alpha", base.alpha);
  cfg.k = j.value("k", base.k);
  cfg.x_norm = j.value("x_norm", base.x_norm);
  cfg.symbol = j.value("symbol", base.symbol);
  if (j.contains("battery")) {
    for (const auto& item : j.at("battery")) cfg.battery.push_back(generator_from_json(item));
  } else {
    cfg.battery = base.battery;
  }
  cfg.weights = j.value("weights", base.weights);
  cfg.dilations = j.value("dilations", base.dilations);
  cfg.translation = j.value("translation", base.translation);
  cfg.exponents = j.value("exponents", base.exponents);
  cfg.q = j.value("q", base.q);
  cfg.delta = j.value("delta", base.delta);
  cfg.eps = j.value("eps", base.eps);
  cfg.lambda_lo = j.value("lambda_lo", base.lambda_lo);
  cfg.lambda_hi = j.value("lambda_hi", base.lambda_hi);
  cfg.lambda_count = j.value("lambda_count", base.lambda_count);
  cfg.seed = j.value("seed", base.seed);
  return cfg;
}

inline std::string config_hash(const ExperimentConfig& cfg) {
  return hex64(fnv1a(config_to_json(cfg).dump()));
}

// A-infinity surrogate gate: the A_p constant must be stable under one grid
// refinement for some p in {2, 4, 8}.
struct GateReport {
  std::string weight;
  bool pass = false;
  double p = 0.0;
  double drift = std::numeric_limits<double>::infinity();
};

inline GateReport a_infty_gate(const WeightSpec& w, double half_length, std::size_t n) {
  GateReport rep;
  rep.weight = weight_label(w);
  if (n < 16) throw std::invalid_argument("weight gate: need at least 16 samples");
  for (double p : {2.0, 4.0, 8.0}) {
    double coarse = ap_constant(make_weight(w, half_length, n / 2), p);
    double fine = ap_constant(make_weight(w, half_length, n), p);
    if (!std::isfinite(coarse) || !std::isfinite(fine) || coarse <= 0.0) continue;
    double drift = std::abs(fine - coarse) / coarse;
    if (drift < rep.drift) {
      rep.drift = drift;
      rep.p = p;
    }
    if (drift <= 0.25) {
      rep.pass = true;
      rep.p = p;
      rep.drift = drift;
      return rep;
    }
  }
  return rep;
}

// A_{p,q} gate for the fractional strong-type surrogate.
inline GateReport apq_gate(const WeightSpec& w, double half_length, std::size_t n, double p,
                           double q) {
  GateReport rep;
  rep.weight = weight_label(w);
  rep.p = p;
  double coarse = apq_constant(make_weight(w, half_length, n / 2), p, q);
  double fine = apq_constant(make_weight(w, half_length, n), p, q);
  if (std::isfinite(coarse) && std::isfinite(fine) && coarse > 0.0) {
    rep.drift = std::abs(fine - coarse) / coarse;
    // genuine A_{p,q} weights refine below 2% here; log-divergent ones stay
    // above 14% across the grid sizes this harness runs at
    rep.pass = rep.drift <= 0.10;
  }
  return rep;
}

namespace harness_detail {

inline long translation_cells(const ExperimentConfig& cfg) {
  const double h = 2.0 * cfg.half_length / static_cast<double>(cfg.samples);
  const double cells = cfg.translation / h;
  const double rounded = std::nearbyint(cells);
  if (std::abs(cells - rounded) > 1e-9)
    throw std::invalid_argument("config: translation must be a whole number of cells");
  if (std::abs(rounded) > static_cast<double>(cfg.samples) / 8.0)
    throw std::invalid_argument("config: translation must stay within a quarter of the domain");
  return static_cast<long>(rounded);
}

}  // namespace harness_detail

inline void validate_config(const ExperimentConfig& cfg) {
  if (cfg.battery.empty()) throw std::invalid_argument("config: battery must be nonempty");
  if (cfg.weights.empty()) throw std::invalid_argument("config: weights must be nonempty");
  if (!(cfg.delta > 0.0 && cfg.delta < cfg.eps && cfg.eps < 1.0))
    throw std::invalid_argument("config: need 0 < delta < eps < 1");
  if (!(cfg.half_length > 0.0) || cfg.samples < 16)
    throw std::invalid_argument("config: bad grid");
  if (cfg.level_min > cfg.level_max) throw std::invalid_argument("config: bad level window");
  if (!(cfg.alpha >= 0.0 && cfg.alpha < 1.0))
    throw std::invalid_argument("config: need 0 <= alpha < 1");
  if (cfg.k < 0) throw std::invalid_argument("config: need k >= 0");
  if (cfg.exponents.empty()) throw std::invalid_argument("config: exponents must be nonempty");
  for (double p : cfg.exponents)
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("config: exponents must be positive");
  if (cfg.dilations.empty()) throw std::invalid_argument("config: dilations must be nonempty");
  for (double s : cfg.dilations)
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("config: dilations must be positive");
  if (!(cfg.lambda_lo > 0.0 && cfg.lambda_lo < cfg.lambda_hi))
    throw std::invalid_argument("config: need 0 < lambda_lo < lambda_hi");
  if (cfg.lambda_count < 2) throw std::invalid_argument("config: need lambda_count >= 2");
  harness_detail::translation_cells(cfg);
  for (const std::string& desc : cfg.weights) {
    GateReport gate = a_infty_gate(parse_weight(desc), cfg.half_length, cfg.samples);
    if (!gate.pass)
      throw std::invalid_argument("config: weight '" + desc +
                                  "' fails the A_infinity surrogate gate");
  }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct CaseRow {
  std::string f_label;
  std::string w_label;
  double p = 0.0;
  double q = 0.0;
  double dilation = 1.0;
  double lambda = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
  bool skipped = false;
  std::string note;
};

struct ExperimentReport {
  std::string suite;
  std::string config_hash;
  std::uint64_t seed = 0;
  bool pass = true;
  std::vector<CaseRow> rows;
  std::map<std::string, double> constants;
  std::map<std::string, std::vector<std::array<double, 2>>> trajectories;
  std::vector<std::string> notes;     // informational only
  std::vector<std::string> failures;  // empty on a healthy run
};

inline Json report_to_json(const ExperimentReport& rep) {
  Json j;
  j["suite"] = rep.suite;
  j["config_hash"] = rep.config_hash;
  j["seed"] = rep.seed;
  j["pass"] = rep.pass;
  j["rows"] = Json::array();
  for (const CaseRow& row : rep.rows) {
    Json r;
    r["f"] = row.f_label;
    r["w"] = row.w_label;
    r["p"] = row.p;
    r["q"] = row.q;
    r["dilation"] = row.dilation;
    r["lambda"] = row.lambda;
    r["numerator"] = row.numerator;
    r["denominator"] = row.denominator;
    r["ratio"] = row.ratio;
    r["skipped"] = row.skipped;
    r["note"] = row.note;
    j["rows"].push_back(std::move(r));
  }
  j["constants"] = Json::object();
  for (const auto& [name, value] : rep.constants) j["constants"][name] = value;
  j["trajectories"] = Json::object();
  for (const auto& [name, points] : rep.trajectories) {
    Json arr = Json::array();
    for (const auto& pt : points) arr.push_back(Json::array({pt[0], pt[1]}));
    j["trajectories"][name] = std::move(arr);
  }
  j["notes"] = rep.notes;
  j["failures"] = rep.failures;
  return j;
}

inline ExperimentReport report_from_json(const Json& j) {
  ExperimentReport rep;
  rep.suite = j.value("suite", std::string{});
  rep.config_hash = j.value("config_hash", std::string{});
  rep.seed = j.value("seed", std::uint64_t{0});
  rep.pass = j.value("pass", false);
  for (const Json& r : j.value("rows", Json::array())) {
    CaseRow row;
    row.f_label = r.value("f", std::string{});
    row.w_label = r.value("w", std::string{});
    row.p = r.value("p", 0.0);
    row.q = r.value("q", 0.0);
    row.dilation = r.value("dilation", 0.0);
    row.lambda = r.value("lambda", 0.0);
    row.numerator = r.value("numerator", 0.0);
    row.denominator = r.value("denominator", 0.0);
    row.ratio = r.value("ratio", 0.0);
    row.skipped = r.value("skipped", false);
    row.note = r.value("note", std::string{});
    rep.rows.push_back(std::move(row));
  }
  if (j.contains("constants"))
    for (const auto& [name, value] : j.at("constants").items())
      rep.constants[name] = value.get<double>();
  if (j.contains("trajectories"))
    for (const auto& [name, points] : j.at("trajectories").items())
      for (const Json& pt : points)
        rep.trajectories[name].push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
  rep.notes = j.value("notes", std::vector<std::string>{});
  rep.failures = j.value("failures", std::vector<std::string>{});
  return rep;
}

inline CsvTable report_rows_csv(const ExperimentReport& rep) {
  CsvTable t;
  t.header = {"suite", "f",         "w",           "p",     "q",       "dilation",
              "lambda", "numerator", "denominator", "ratio", "skipped", "note"};
  for (const CaseRow& row : rep.rows)
    t.add_row({rep.suite, row.f_label, row.w_label, detail::format_double(row.p),
               detail::format_double(row.q), detail::format_double(row.dilation),
               detail::format_double(row.lambda), detail::format_double(row.numerator),
               detail::format_double(row.denominator), detail::format_double(row.ratio),
               row.skipped ? "1" : "0", row.note});
  return t;
}

inline CsvTable report_trajectories_csv(const ExperimentReport& rep) {
  CsvTable t;
  t.header = {"suite", "trajectory", "t", "value"};
  for (const auto& [name, points] : rep.trajectories)
    for (const auto& pt : points)
      t.add_row({rep.suite, name, detail::format_double(pt[0]), detail::format_double(pt[1])});
  return t;
}

// ---------------------------------------------------------------------------
// Shared suite plumbing
// ---------------------------------------------------------------------------

namespace harness_detail {

inline GridFunction translate_cells(const GridFunction& g, long c) {
  if (c == 0) return g;
  const std::size_t n = g.size();
  std::vector<double> v(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    long src = static_cast<long>(i) - c;
    if (src >= 0 && src < static_cast<long>(n)) v[i] = g[static_cast<std::size_t>(src)];
  }
  return GridFunction(g.half_length(), std::move(v));
}

// f(x) = generator((x - shift) / dilation) sampled at cell centers.
inline GridFunction sample_battery(const GeneratorSpec& gen, const ExperimentConfig& cfg,
                                   double dilation, bool with_translation = true) {
  const std::size_t n = cfg.samples;
  const double shift = with_translation ? cfg.translation : 0.0;
  std::vector<double> v(n);
  GridFunction probe = GridFunction::zeros(cfg.half_length, n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = generator_value(gen, (probe.x_at(i) - shift) / dilation);
  return GridFunction(cfg.half_length, std::move(v));
}

inline BmoFunction sample_symbol(const ExperimentConfig& cfg) {
  GeneratorSpec gen;
  gen.kind = cfg.symbol;
  const std::size_t n = cfg.samples;
  std::vector<double> v(n);
  GridFunction probe = GridFunction::zeros(cfg.half_length, n);
  for (std::size_t i = 0; i < n; ++i) v[i] = generator_value(gen, probe.x_at(i) - cfg.translation);
  return BmoFunction(GridFunction(cfg.half_length, std::move(v)));
}

// Central window of half the domain, shifted along with the battery so that
// whole-cell translation moves the integration cells rigidly.
struct CoreWindow {
  std::size_t i0 = 0;
  std::size_t i1 = 0;
  double h = 0.0;
};

inline CoreWindow core_window(const ExperimentConfig& cfg) {
  CoreWindow cw;
  const long c = translation_cells(cfg);
  const long n = static_cast<long>(cfg.samples);
  cw.i0 = static_cast<std::size_t>(n / 4 + c);
  cw.i1 = static_cast<std::size_t>(3 * n / 4 + c);
  cw.h = 2.0 * cfg.half_length / static_cast<double>(cfg.samples);
  return cw;
}

inline double core_power_integral(const GridFunction& g, const GridFunction& w, double p,
                                  const CoreWindow& cw) {
  double acc = 0.0;
  for (std::size_t i = cw.i0; i < cw.i1; ++i) acc += std::pow(std::abs(g[i]), p) * w[i];
  return acc * cw.h;
}

// Pointwise sup of num/den over the core; cells with den == 0 must have
// num == 0 (reported through the violation flag) and do not contribute.
inline double core_sup_ratio(const GridFunction& num, const GridFunction& den,
                             const CoreWindow& cw, bool& zero_violation) {
  double sup = 0.0;
  for (std::size_t i = cw.i0; i < cw.i1; ++i) {
    if (den[i] == 0.0) {
      if (num[i] != 0.0) zero_violation = true;
      continue;
    }
    sup = std::max(sup, num[i] / den[i]);
  }
  return sup;
}

// M_eps g = (M |g|^eps)^(1/eps), the small-exponent maximal used on the
// lower-order commutator terms.
inline GridFunction m_eps(const GridFunction& g, double eps) {
  auto powered = g.map([eps](double t) { return std::pow(std::abs(t), eps); });
  return hl_maximal(powered).map([eps](double t) { return std::pow(t, 1.0 / eps); });
}

inline OperatorSpec make_operator(const ExperimentConfig& cfg, int k) {
  OperatorSpec op;
  op.kernel = DyadicKernel(cfg.level_min, cfg.level_max, cfg.alpha);
  op.X = parse_seq_norm(cfg.x_norm);
  op.k = k;
  if (k >= 1) op.b = sample_symbol(cfg);
  return op;
}

inline void lock_constant(ExperimentReport& rep, RegressionStore& store, const std::string& name,
                          double value, double tol = 0.10) {
  rep.constants[name] = value;
  const std::string key = rep.suite + "/" + name + "@" + rep.config_hash;
  RegressionStore::Status st = store.check(key, value, tol);
  if (st == RegressionStore::Status::locked_fail) {
    rep.pass = false;
    rep.failures.push_back("regression lock failed: " + name + " = " +
                           detail::format_double(value) + " vs stored " +
                           detail::format_double(store.stored(key)));
  }
}

inline void require(ExperimentReport& rep, bool cond, const std::string& what) {
  if (!cond) {
    rep.pass = false;
    rep.failures.push_back(what);
  }
}

inline double drift_band(const std::map<double, double>& per_dilation) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& [s, v] : per_dilation) {
    if (v <= 0.0) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(lo < std::numeric_limits<double>::infinity()) || hi == 0.0) return 1.0;
  return hi / lo;
}

}  // namespace harness_detail

// ---------------------------------------------------------------------------
// Ratio suite: integrals of ||T_b^k f||_X^p against the Orlicz maximal
// majorant with gauge t (1 + log+ t)^(k+1), and secondarily against the
// (k+2)-fold iterated maximal.  Reports sup ratios, the dilation drift band,
// and the denominator ordering constant.
// ---------------------------------------------------------------------------

inline ExperimentReport coifman_suite(const ExperimentConfig& cfg, RegressionStore& store) {
  using namespace harness_detail;
  validate_config(cfg);
  if (cfg.alpha != 0.0)
    throw std::invalid_argument("ratio suite: needs alpha = 0; use the fractional suite");

  ExperimentReport rep;
  rep.suite = "coifman";
  rep.config_hash = config_hash(cfg);
  rep.seed = cfg.seed;

  const long c = translation_cells(cfg);
  const CoreWindow core = core_window(cfg);
  const YoungFunction abar =
      YoungFunction::power_log(1.0, static_cast<double>(cfg.k) + 1.0, LogForm::one_plus_log_plus);
  const OperatorSpec op = make_operator(cfg, cfg.k);

  std::vector<std::pair<std::string, GridFunction>> ws;
  for (const std::string& desc : cfg.weights)
    ws.emplace_back(desc, make_weight(parse_weight(desc), cfg.half_length, cfg.samples,
                                      cfg.translation));

  double sup_ratio = 0.0, order_sup = 0.0;
  std::map<double, double> per_dilation;

  for (const GeneratorSpec& gen : cfg.battery) {
    const std::string flabel = generator_label(gen);
    for (double s : cfg.dilations) {
      GridFunction f = sample_battery(gen, cfg, s);
      if (f.max_abs() == 0.0) {
        for (const auto& [wl, w] : ws)
          for (double p : cfg.exponents) {
            CaseRow row;
            row.f_label = flabel;
            row.w_label = wl;
            row.p = p;
            row.dilation = s;
            row.skipped = true;
            row.note = "zero input";
            rep.rows.push_back(std::move(row));
          }
        continue;
      }
      GridFunction sf = s_norm(op, f);
      // Maximal-function window candidates anchor to the array, so evaluate
      // them in the battery frame and shift: whole-cell translation then
      // remains an exact symmetry of the reported ratios.
      GridFunction f0 = (c == 0) ? f : sample_battery(gen, cfg, s, /*with_translation=*/false);
      GridFunction ma = translate_cells(orlicz_maximal(f0, abar), c);
      GridFunction mi = translate_cells(iterated_maximal(f0, cfg.k + 2), c);
      for (const auto& [wl, w] : ws) {
        for (double p : cfg.exponents) {
          CaseRow row;
          row.f_label = flabel;
          row.w_label = wl;
          row.p = p;
          row.dilation = s;
          row.numerator = core_power_integral(sf, w, p, core);
          row.denominator = core_power_integral(ma, w, p, core);
          const double den2 = core_power_integral(mi, w, p, core);
          row.ratio = row.numerator / row.denominator;
          require(rep, std::isfinite(row.ratio),
                  "non-finite ratio at " + flabel + " w=" + wl + " p=" + detail::format_double(p));
          require(rep, den2 > 0.0 && std::isfinite(row.denominator / den2),
                  "degenerate iterated-maximal denominator at " + flabel);
          order_sup = std::max(order_sup, row.denominator / den2);
          sup_ratio = std::max(sup_ratio, row.ratio);
          auto [it, inserted] = per_dilation.try_emplace(s, row.ratio);
          if (!inserted) it->second = std::max(it->second, row.ratio);
          rep.rows.push_back(std::move(row));
        }
      }
    }
  }

  for (const auto& [s, v] : per_dilation)
    rep.trajectories["sup_ratio_by_dilation"].push_back({s, v});

  const double drift = drift_band(per_dilation);
  rep.constants["dilation_drift"] = drift;
  require(rep, drift <= 2.0, "dilation drift " + detail::format_double(drift) + " exceeds 2");
  lock_constant(rep, store, "sup_ratio", sup_ratio);
  lock_constant(rep, store, "denominator_order_sup", order_sup);
  return rep;
}

// ---------------------------------------------------------------------------
// Sharp-maximal suite: pointwise comparison of the delta-sharp maximal of
// ||T_b^k f||_X against the commutator ladder
//   sum_{j<k} ||b||^(k-j) M_eps ||T_b^j f||_X + ||b||^k M_abar f.
// ---------------------------------------------------------------------------

inline ExperimentReport sharp_suite(const ExperimentConfig& cfg, RegressionStore& store) {
  using namespace harness_detail;
  validate_config(cfg);
  if (cfg.alpha != 0.0) throw std::invalid_argument("sharp suite: needs alpha = 0");

  ExperimentReport rep;
  rep.suite = "sharp";
  rep.config_hash = config_hash(cfg);
  rep.seed = cfg.seed;

  const CoreWindow core = core_window(cfg);
  const YoungFunction abar =
      YoungFunction::power_log(1.0, static_cast<double>(cfg.k) + 1.0, LogForm::one_plus_log_plus);
  std::vector<OperatorSpec> ops;
  for (int j = 0; j <= cfg.k; ++j) ops.push_back(make_operator(cfg, j));
  const double bnorm = cfg.k >= 1 ? ops.back().b->norm() : 0.0;

  double sup_ratio = 0.0;
  std::map<double, double> per_dilation;

  for (const GeneratorSpec& gen : cfg.battery) {
    const std::string flabel = generator_label(gen);
    for (double s : cfg.dilations) {
      GridFunction f = sample_battery(gen, cfg, s);
      CaseRow row;
      row.f_label = flabel;
      row.w_label = "-";
      row.dilation = s;
      if (f.max_abs() == 0.0) {
        row.note = "zero input: both sides vanish";
        rep.rows.push_back(std::move(row));
        continue;
      }
      GridFunction sk = s_norm(ops.back(), f);
      GridFunction lhs = sharp_maximal_delta(sk, cfg.delta);
      GridFunction rhs = orlicz_maximal(f, abar);
      if (cfg.k >= 1) {
        rhs = rhs.map([&](double t) { return std::pow(bnorm, cfg.k) * t; });
        for (int j = 0; j < cfg.k; ++j) {
          GridFunction mj = m_eps(s_norm(ops[static_cast<std::size_t>(j)], f), cfg.eps);
          const double coef = std::pow(bnorm, cfg.k - j);
          std::vector<double> acc(rhs.size());
          for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = rhs[i] + coef * mj[i];
          rhs = GridFunction(rhs.half_length(), std::move(acc));
        }
      }
      bool zero_violation = false;
      row.ratio = core_sup_ratio(lhs, rhs, core, zero_violation);
      row.numerator = lhs.max_abs();
      row.denominator = rhs.max_abs();
      require(rep, !zero_violation, "sharp bound vanished where the left side did not: " + flabel);
      require(rep, std::isfinite(row.ratio), "non-finite sharp ratio at " + flabel);
      sup_ratio = std::max(sup_ratio, row.ratio);
      auto [it, inserted] = per_dilation.try_emplace(s, row.ratio);
      if (!inserted) it->second = std::max(it->second, row.ratio);
      rep.rows.push_back(std::move(row));
    }
  }

  for (const auto& [s, v] : per_dilation)
    rep.trajectories["sup_ratio_by_dilation"].push_back({s, v});
  const double drift = drift_band(per_dilation);
  rep.constants["dilation_drift"] = drift;
  require(rep, drift <= 2.0, "dilation drift " + detail::format_double(drift) + " exceeds 2");
  lock_constant(rep, store, "sup_ratio", sup_ratio);
  return rep;
}

// ---------------------------------------------------------------------------
// Weak-type modular suite: superlevel w-measure of ||T_b^k f||_X against the
// modular integral of abar(||b||^k |f| / lambda) M w, swept over lambda.
// ---------------------------------------------------------------------------

inline ExperimentReport weak_type_suite(const ExperimentConfig& cfg, RegressionStore& store) {
  using namespace harness_detail;
  validate_config(cfg);
  if (cfg.alpha != 0.0) throw std::invalid_argument("weak-type suite: needs alpha = 0");

  ExperimentReport rep;
  rep.suite = "weak";
  rep.config_hash = config_hash(cfg);
  rep.seed = cfg.seed;

  const CoreWindow core = core_window(cfg);
  const YoungFunction abar =
      YoungFunction::power_log(1.0, static_cast<double>(cfg.k) + 1.0, LogForm::one_plus_log_plus);
  const OperatorSpec op = make_operator(cfg, cfg.k);
  const double bfactor = cfg.k >= 1 ? std::pow(op.b->norm(), cfg.k) : 1.0;

  std::vector<std::pair<std::string, GridFunction>> ws;
  std::vector<GridFunction> mws;
  for (const std::string& desc : cfg.weights) {
    ws.emplace_back(desc, make_weight(parse_weight(desc), cfg.half_length, cfg.samples,
                                      cfg.translation));
    mws.push_back(hl_maximal(ws.back().second));
  }

  double sup_ratio = 0.0;

  for (const GeneratorSpec& gen : cfg.battery) {
    const std::string flabel = generator_label(gen);
    GridFunction f = sample_battery(gen, cfg, 1.0);
    const double fmax = f.max_abs();
    if (fmax == 0.0) {
      for (const auto& [wl, w] : ws) {
        CaseRow row;
        row.f_label = flabel;
        row.w_label = wl;
        row.skipped = true;
        row.note = "zero input";
        rep.rows.push_back(std::move(row));
      }
      continue;
    }
    GridFunction sk = s_norm(op, f);
    for (std::size_t wi = 0; wi < ws.size(); ++wi) {
      const auto& [wl, w] = ws[wi];
      const GridFunction& mw = mws[wi];
      CaseRow row;
      row.f_label = flabel;
      row.w_label = wl;
      double case_sup = 0.0, case_arg = 0.0, last_lhs = 0.0;
      double prev_lhs = std::numeric_limits<double>::infinity();
      auto& traj = rep.trajectories["ratio|" + flabel + "|" + wl];
      for (int j = 0; j < cfg.lambda_count; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(cfg.lambda_count - 1);
        const double lambda = fmax * cfg.lambda_lo * std::pow(cfg.lambda_hi / cfg.lambda_lo, t);
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = core.i0; i < core.i1; ++i) {
          if (sk[i] > lambda) lhs += w[i];
          rhs += abar.value(bfactor * std::abs(f[i]) / lambda) * mw[i];
        }
        lhs *= core.h;
        rhs *= core.h;
        require(rep, lhs <= prev_lhs,
                "superlevel measure not monotone in lambda at " + flabel + " w=" + wl);
        prev_lhs = lhs;
        last_lhs = lhs;
        const double ratio = lhs / rhs;
        require(rep, std::isfinite(ratio), "non-finite weak-type ratio at " + flabel);
        if (ratio > case_sup) {
          case_sup = ratio;
          case_arg = lambda;
        }
        traj.push_back({lambda, ratio});
      }
      require(rep, last_lhs == 0.0,
              "superlevel measure did not vanish at the top of the lambda sweep: " + flabel);
      row.lambda = case_arg;
      row.ratio = case_sup;
      sup_ratio = std::max(sup_ratio, case_sup);
      rep.rows.push_back(std::move(row));
    }
  }

  lock_constant(rep, store, "sup_ratio", sup_ratio);
  return rep;
}

// ---------------------------------------------------------------------------
// Gap probe: growth of the pointwise annulus gauge versus stability of the
// levelwise gauge, for the exponential Young function and its eps-softened
// variant. Three axes: level-window growth of the pointwise sum, level-window
// stability of the levelwise sum, and the annulus-tail index m * term_m,
// which rises toward a positive limit when the per-annulus terms have a
// harmonic (divergent) tail and falls once the tail is summable.
// ---------------------------------------------------------------------------

inline ExperimentReport gap_probe(const ExperimentConfig& cfg, RegressionStore& store) {
  using namespace harness_detail;
  validate_config(cfg);
  ExperimentReport rep;
  rep.suite = "gap";
  rep.config_hash = config_hash(cfg);
  rep.seed = cfg.seed;

  const SeqNorm X = parse_seq_norm(cfg.x_norm);
  const int k = cfg.k;
  const std::array<std::pair<std::string, YoungFunction>, 2> gauges = {
      std::make_pair(std::string("a0"),
                     YoungFunction::exp_power(1.0 / (static_cast<double>(k) + 1.0), 1.0)),
      std::make_pair(std::string("a0.5"),
                     YoungFunction::exp_power(1.0 / (static_cast<double>(k) + 1.5), 1.0)),
  };
  const std::array<int, 3> windows = {10, 15, 20};

  for (const auto& [name, phi] : gauges) {
    double plain_first = 0.0, plain_last = 0.0;
    double dag_first = 0.0, dag_last = 0.0;
    for (int W : windows) {
      DyadicKernel kern(-W, W);
      AnnulusQuery plain_q;
      plain_q.phi = phi;
      plain_q.k = k;
      plain_q.X = X;
      plain_q.x = 0.125;
      plain_q.R = 1.0;
      plain_q.m_max = 80;
      const double plain = pointwise_annulus_sum(kern, plain_q).value;
      rep.trajectories["plain_" + name].push_back({static_cast<double>(W), plain});

      AnnulusQuery dag_q = plain_q;
      dag_q.R = std::ldexp(1.0, -4);
      dag_q.x = dag_q.R / 8.0;
      dag_q.m_max = 12;  // annulus levels then sit well inside the narrowest window
      const double dag = levelwise_annulus_sum(kern, dag_q).value;
      rep.trajectories["dagger_" + name].push_back({static_cast<double>(W), dag});

      if (W == windows.front()) {
        plain_first = plain;
        dag_first = dag;
      }
      if (W == windows.back()) {
        plain_last = plain;
        dag_last = dag;
      }
    }
    // truncation trajectory on a window wide enough to hold every annulus
    DyadicKernel sat(-4, 55);
    double dag_value = 0.0;
    for (int m = 10; m <= 80; m += 10) {
      AnnulusQuery q;
      q.phi = phi;
      q.k = k;
      q.X = X;
      q.x = 0.125;
      q.R = 1.0;
      q.m_max = m;
      dag_value = levelwise_annulus_sum(sat, q).value;
      rep.trajectories["dagger_mmax_" + name].push_back({static_cast<double>(m), dag_value});
    }
    // Annulus-tail index on a window wide enough to hold every annulus. Stay
    // below m ~ 50: past that, translate and original coincide in doubles and
    // the computed terms collapse to zero.
    DyadicKernel tail_kern(-53, 53);
    AnnulusQuery tail_q;
    tail_q.phi = phi;
    tail_q.k = k;
    tail_q.X = X;
    tail_q.x = 0.125;
    tail_q.R = 1.0;
    tail_q.m_max = 48;
    const AnnulusReport tail = pointwise_annulus_sum(tail_kern, tail_q);
    for (int m = 4; m <= 48; m += 4)
      rep.trajectories["annulus_tail_" + name].push_back(
          {static_cast<double>(m), m * tail.terms[static_cast<std::size_t>(m - 1)]});
    const double tail_index = (48.0 * tail.terms[47]) / (24.0 * tail.terms[23]);
    rep.constants["tail_index_" + name] = tail_index;

    const double growth = plain_last / plain_first;
    const double dag_drift = std::abs(dag_last - dag_first) / dag_first;
    rep.constants["dagger_window_drift_" + name] = dag_drift;
    require(rep, dag_drift < 0.01,
            "levelwise gauge moved by " + detail::format_double(dag_drift) +
                " across level windows (" + name + ")");
    if (name == "a0") {
      require(rep, growth >= 1.1, "pointwise gauge failed to grow across level windows");
      require(rep, tail_index > 1.03, "exponential-gauge annulus terms lost their harmonic tail");
    } else {
      require(rep, tail_index <= 1.03, "softened-gauge annulus terms failed to decay summably");
    }
    lock_constant(rep, store, "plain_growth_" + name, growth);
    lock_constant(rep, store, "dagger_value_" + name, dag_value);
    lock_constant(rep, store, "tail_index_" + name, tail_index);

    ClosedFormReport closed = levelwise_closed_form(phi, k, X, 80);
    rep.constants["closed_form_" + name] = closed.value;
    require(rep, closed.stabilized, "closed-form sequence did not stabilize (" + name + ")");
  }
  // the gap itself: the exponential gauge grows strictly faster than its
  // softened variant across the same windows
  require(rep, rep.constants.at("plain_growth_a0") > rep.constants.at("plain_growth_a0.5"),
          "pointwise gauge did not outgrow the softened gauge");
  return rep;
}

// ---------------------------------------------------------------------------
// Fractional suite: ratio battery for the fractional family against the
// fractional Orlicz maximal, plus the (p, q) strong-type surrogate with
// A_{p,q}-gated weights (1/q = 1/p - alpha).
// ---------------------------------------------------------------------------

inline ExperimentReport fractional_suite(const ExperimentConfig& cfg, RegressionStore& store) {
  using namespace harness_detail;
  validate_config(cfg);
  if (!(cfg.alpha > 0.0))
    throw std::invalid_argument("fractional suite: needs alpha > 0");

  ExperimentReport rep;
  rep.suite = "fractional";
  rep.config_hash = config_hash(cfg);
  rep.seed = cfg.seed;

  const long c = translation_cells(cfg);
  const CoreWindow core = core_window(cfg);
  const YoungFunction abar =
      YoungFunction::power_log(1.0, static_cast<double>(cfg.k) + 1.0, LogForm::one_plus_log_plus);
  const OperatorSpec op = make_operator(cfg, cfg.k);

  std::vector<std::pair<std::string, GridFunction>> ws;
  for (const std::string& desc : cfg.weights)
    ws.emplace_back(desc, make_weight(parse_weight(desc), cfg.half_length, cfg.samples,
                                      cfg.translation));

  // (p, q) pairs: derived from the exponent relation, optionally pinned by
  // cfg.q. The strong-type bound needs 1 < p < 1/alpha strictly: at p = 1 the
  // surrogate ratio follows a genuine power law in the dilation instead of
  // staying flat, so p = 1 exponents feed only the ratio battery.
  std::vector<std::pair<double, double>> pq;
  for (double p : cfg.exponents) {
    if (p <= 1.0 || p * cfg.alpha >= 1.0) continue;
    double q = 1.0 / (1.0 / p - cfg.alpha);
    if (cfg.q > 0.0 && std::abs(1.0 / cfg.q - (1.0 / p - cfg.alpha)) > 1e-9) continue;
    pq.emplace_back(p, q);
  }
  if (cfg.q > 0.0 && pq.empty())
    throw std::invalid_argument("fractional suite: q is inconsistent with 1/q = 1/p - alpha");

  std::map<std::string, GateReport> gates;
  for (const auto& [pp, qq] : pq)
    for (const std::string& desc : cfg.weights) {
      const std::string key = desc + "@" + detail::format_double(pp);
      if (!gates.count(key))
        gates.emplace(key, apq_gate(parse_weight(desc), cfg.half_length, cfg.samples, pp, qq));
    }

  double sup_ratio = 0.0, pq_sup = 0.0, assumed_sup = 0.0;
  std::map<double, double> per_dilation, pq_per_dilation;

  for (const GeneratorSpec& gen : cfg.battery) {
    const std::string flabel = generator_label(gen);
    for (double s : cfg.dilations) {
      GridFunction f = sample_battery(gen, cfg, s);
      if (f.max_abs() == 0.0) {
        for (const auto& [wl, w] : ws)
          for (double p : cfg.exponents) {
            CaseRow row;
            row.f_label = flabel;
            row.w_label = wl;
            row.p = p;
            row.dilation = s;
            row.skipped = true;
            row.note = "zero input";
            rep.rows.push_back(std::move(row));
          }
        continue;
      }
      GridFunction sf = s_norm(op, f);
      GridFunction f0 = (c == 0) ? f : sample_battery(gen, cfg, s, /*with_translation=*/false);
      GridFunction ma = translate_cells(fractional_orlicz_maximal(f0, abar, cfg.alpha), c);
      for (const auto& [wl, w] : ws) {
        for (double p : cfg.exponents) {
          CaseRow row;
          row.f_label = flabel;
          row.w_label = wl;
          row.p = p;
          row.dilation = s;
          row.numerator = core_power_integral(sf, w, p, core);
          row.denominator = core_power_integral(ma, w, p, core);
          row.ratio = row.numerator / row.denominator;
          require(rep, std::isfinite(row.ratio),
                  "non-finite fractional ratio at " + flabel + " w=" + wl);
          sup_ratio = std::max(sup_ratio, row.ratio);
          auto [it, inserted] = per_dilation.try_emplace(s, row.ratio);
          if (!inserted) it->second = std::max(it->second, row.ratio);
          rep.rows.push_back(std::move(row));
        }
      }
      // strong-type surrogate rows
      for (const auto& [pp, qq] : pq) {
        for (const auto& [wl, w] : ws) {
          CaseRow row;
          row.f_label = flabel;
          row.w_label = wl;
          row.p = pp;
          row.q = qq;
          row.dilation = s;
          row.note = "pq-surrogate";
          const GateReport& gate = gates.at(wl + "@" + detail::format_double(pp));
          if (!gate.pass) {
            row.skipped = true;
            row.note = "apq gate failed";
            rep.rows.push_back(std::move(row));
            continue;
          }
          double num = 0.0, den = 0.0;
          for (std::size_t i = core.i0; i < core.i1; ++i) {
            num += std::pow(sf[i], qq) * std::pow(w[i], qq);
            den += std::pow(std::abs(f[i]), pp) * std::pow(w[i], pp);
          }
          row.numerator = std::pow(num * core.h, 1.0 / qq);
          row.denominator = std::pow(den * core.h, 1.0 / pp);
          row.ratio = row.numerator / row.denominator;
          require(rep, std::isfinite(row.ratio),
                  "non-finite pq-surrogate ratio at " + flabel + " w=" + wl);
          pq_sup = std::max(pq_sup, row.ratio);
          if (wl == "one") assumed_sup = std::max(assumed_sup, row.ratio);
          auto [it, inserted] = pq_per_dilation.try_emplace(s, row.ratio);
          if (!inserted) it->second = std::max(it->second, row.ratio);
          rep.rows.push_back(std::move(row));
        }
      }
    }
  }

  for (const auto& [s, v] : per_dilation)
    rep.trajectories["sup_ratio_by_dilation"].push_back({s, v});
  for (const auto& [s, v] : pq_per_dilation)
    rep.trajectories["pq_bound_by_dilation"].push_back({s, v});

  const double drift = drift_band(per_dilation);
  rep.constants["dilation_drift"] = drift;
  require(rep, drift <= 2.0, "dilation drift " + detail::format_double(drift) + " exceeds 2");
  lock_constant(rep, store, "sup_ratio", sup_ratio);
  if (!pq.empty()) {
    const double pq_drift = drift_band(pq_per_dilation);
    rep.constants["pq_dilation_drift"] = pq_drift;
    require(rep, pq_drift <= 2.0,
            "pq-surrogate dilation drift " + detail::format_double(pq_drift) + " exceeds 2");
    lock_constant(rep, store, "pq_bound", pq_sup);
    // the assumed strong-type hypothesis, verified on the unweighted battery
    lock_constant(rep, store, "assumed_pq_bound", assumed_sup);
  }
  return rep;
}

inline ExperimentReport run_suite(const std::string& name, const ExperimentConfig& cfg,
                                  RegressionStore& store) {
  if (name == "coifman") return coifman_suite(cfg, store);
  if (name == "sharp") return sharp_suite(cfg, store);
  if (name == "weak") return weak_type_suite(cfg, store);
  if (name == "gap") return gap_probe(cfg, store);
  if (name == "fractional") return fractional_suite(cfg, store);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace luxor
