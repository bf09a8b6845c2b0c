// luxor: command-line front end for the dyadic harmonic-analysis toolkit.
//
// Subcommands: young, lux, maximal, weights, hormander, operator, suite,
// report. Exit codes: 0 = success / all gates pass, 1 = a suite gate failed,
// 2 = usage or configuration error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "luxor/grid.hpp"
#include "luxor/harness.hpp"
#include "luxor/kernel.hpp"
#include "luxor/maximal.hpp"
#include "luxor/operators.hpp"
#include "luxor/seqnorm.hpp"
#include "luxor/serialize.hpp"
#include "luxor/weights.hpp"
#include "luxor/young.hpp"

namespace {

using luxor::CsvTable;
using luxor::GridFunction;
using luxor::Json;

std::string trimmed(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// One sample per line; the last comma-separated field is the value, so both
// bare columns and "x,value" exports load. A single non-numeric header line
// is tolerated.
std::vector<double> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file '" + path + "'");
  std::vector<double> vals;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trimmed(line);
    if (t.empty()) continue;
    const auto pos = t.find_last_of(',');
    const std::string field = trimmed(pos == std::string::npos ? t : t.substr(pos + 1));
    try {
      vals.push_back(luxor::detail::parse_number(field, "sample"));
    } catch (const std::exception&) {
      if (lineno == 1) continue;  // header
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": non-numeric value '" +
                                  field + "'");
    }
  }
  if (vals.empty()) throw std::invalid_argument(path + ": no samples found");
  return vals;
}

GridFunction load_grid_function(const std::string& path, const std::vector<double>& grid) {
  std::vector<double> vals = read_samples(path);
  const auto n = static_cast<std::size_t>(grid.at(1));
  if (vals.size() != n)
    throw std::invalid_argument(path + ": expected " + std::to_string(n) + " samples (--grid), got " +
                                std::to_string(vals.size()));
  return GridFunction(grid.at(0), std::move(vals));
}

Json grid_function_json(const GridFunction& g) {
  Json j;
  j["half_length"] = g.half_length();
  j["step"] = g.step();
  j["samples"] = g.samples();
  return j;
}

CsvTable grid_function_csv(const GridFunction& g) {
  CsvTable t;
  t.header = {"x", "value"};
  for (std::size_t i = 0; i < g.size(); ++i)
    t.add_row({luxor::detail::format_double(g.x_at(i)), luxor::detail::format_double(g[i])});
  return t;
}

CsvTable pairs_csv(const std::string& tname, const std::vector<std::pair<double, double>>& pts) {
  CsvTable t;
  t.header = {tname, "value"};
  for (const auto& [a, b] : pts)
    t.add_row({luxor::detail::format_double(a), luxor::detail::format_double(b)});
  return t;
}

void print_csv(std::ostream& os, const CsvTable& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

// Emit a result as JSON or CSV, to stdout or under --out with the given stem.
void emit(const Json& j, const CsvTable& csv, const std::string& format, const std::string& out_dir,
          const std::string& stem) {
  if (format == "csv") {
    if (out_dir.empty()) {
      print_csv(std::cout, csv);
    } else {
      std::filesystem::create_directories(out_dir);
      csv.save(out_dir + "/" + stem + ".csv");
      std::cout << out_dir + "/" + stem + ".csv" << '\n';
    }
  } else {
    if (out_dir.empty()) {
      std::cout << j.dump(2) << '\n';
    } else {
      write_json_file(out_dir + "/" + stem + ".json", j);
      std::cout << out_dir + "/" + stem + ".json" << '\n';
    }
  }
}

// Options shared by several subcommands.
struct CommonOpts {
  std::vector<double> grid;  // L, N
  std::string format = "json";
  std::string out_dir;
};

void add_grid_option(CLI::App* sc, CommonOpts& c, bool required) {
  auto* o = sc->add_option("--grid", c.grid, "half-length L and sample count N, as L,N")
                ->delimiter(',')
                ->expected(2);
  if (required) o->required();
}

void add_io_options(CLI::App* sc, CommonOpts& c) {
  sc->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sc->add_option("--out", c.out_dir, "directory for output files (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"luxor: Orlicz averages, maximal functions and dyadic vector kernels on 1-d grids"};
  app.require_subcommand(1);
  int rc = 0;

  // ---------------------------------------------------------------- young --
  struct {
    std::string phi;
    std::string action = "evaluate";
    std::vector<double> t;
    CommonOpts c;
  } yo;
  {
    auto* sc = app.add_subcommand("young", "Evaluate a Young function, its generalized inverse, or "
                                           "its complementary function");
    sc->add_option("--phi", yo.phi, "Young function descriptor, e.g. power:2 or exp_power:0.5")
        ->required();
    sc->add_option("--action", yo.action, "what to evaluate")
        ->check(CLI::IsMember({"evaluate", "invert", "complement"}))
        ->capture_default_str();
    sc->add_option("--t", yo.t, "evaluation points")->required()->delimiter(',');
    add_io_options(sc, yo.c);
    sc->callback([&] {
      const luxor::YoungFunction phi = luxor::parse_young(yo.phi);
      const luxor::YoungFunction target = yo.action == "complement" ? phi.complementary() : phi;
      Json results = Json::array();
      CsvTable csv;
      csv.header = {"t", "value"};
      for (double t : yo.t) {
        const double v = yo.action == "invert" ? target.inverse(t) : target.value(t);
        results.push_back(Json{{"t", t}, {"value", v}});
        csv.add_row({luxor::detail::format_double(t), luxor::detail::format_double(v)});
      }
      Json j;
      j["phi"] = luxor::young_descriptor(phi);
      j["action"] = yo.action;
      j["results"] = std::move(results);
      emit(j, csv, yo.c.format, yo.c.out_dir, "young");
    });
  }

  // ------------------------------------------------------------------ lux --
  struct {
    std::string phi;
    std::string input;
    std::vector<double> interval;
    CommonOpts c;
  } lx;
  {
    auto* sc = app.add_subcommand("lux", "Luxemburg average of a sampled function over an interval");
    sc->add_option("--phi", lx.phi, "Young function descriptor")->required();
    sc->add_option("input", lx.input, "CSV file of samples")->required();
    add_grid_option(sc, lx.c, true);
    sc->add_option("--interval", lx.interval, "interval endpoints a,b (default: whole domain)")
        ->delimiter(',')
        ->expected(2);
    add_io_options(sc, lx.c);
    sc->callback([&] {
      const luxor::YoungFunction phi = luxor::parse_young(lx.phi);
      const GridFunction f = load_grid_function(lx.input, lx.c.grid);
      const double a = lx.interval.empty() ? -f.half_length() : lx.interval[0];
      const double b = lx.interval.empty() ? f.half_length() : lx.interval[1];
      const double v = luxor::luxemburg_average(f, luxor::Interval::from_endpoints(a, b), phi);
      Json j;
      j["phi"] = luxor::young_descriptor(phi);
      j["interval"] = Json::array({a, b});
      j["value"] = v;
      CsvTable csv;
      csv.header = {"a", "b", "value"};
      csv.add_row({luxor::detail::format_double(a), luxor::detail::format_double(b),
                   luxor::detail::format_double(v)});
      emit(j, csv, lx.c.format, lx.c.out_dir, "lux");
    });
  }

  // -------------------------------------------------------------- maximal --
  struct {
    std::string phi = "linear";
    std::string input;
    double alpha = 0.0;
    int iterate = 0;
    double sharp = 0.0;
    CommonOpts c;
  } mx;
  {
    auto* sc = app.add_subcommand("maximal", "Run a maximal operator on a sampled function");
    sc->add_option("input", mx.input, "CSV file of samples")->required();
    add_grid_option(sc, mx.c, true);
    auto* phi_opt =
        sc->add_option("--phi", mx.phi, "Young function for the Orlicz maximal")->capture_default_str();
    auto* alpha_opt = sc->add_option("--alpha", mx.alpha, "fractional order in [0, 1)")
                          ->check(CLI::Range(0.0, 1.0))
                          ->capture_default_str();
    auto* iter_opt =
        sc->add_option("--iterate", mx.iterate, "k-fold Hardy-Littlewood composition M^k")
            ->check(CLI::PositiveNumber);
    auto* sharp_opt = sc->add_option("--sharp", mx.sharp, "delta-sharp maximal with this delta")
                          ->check(CLI::Range(1e-9, 1.0));
    sharp_opt->excludes(phi_opt, alpha_opt, iter_opt);
    iter_opt->excludes(phi_opt, alpha_opt);
    add_io_options(sc, mx.c);
    sc->callback([&, sc] {
      const GridFunction f = load_grid_function(mx.input, mx.c.grid);
      GridFunction g = GridFunction::zeros(f.half_length(), f.size());
      std::string kind;
      if (sc->count("--sharp") != 0) {
        g = luxor::sharp_maximal_delta(f, mx.sharp);
        kind = "sharp_delta:" + luxor::detail::format_double(mx.sharp);
      } else if (mx.iterate >= 1) {
        g = luxor::iterated_maximal(f, mx.iterate);
        kind = "iterated:" + std::to_string(mx.iterate);
      } else {
        const luxor::YoungFunction phi = luxor::parse_young(mx.phi);
        g = mx.alpha > 0.0 ? luxor::fractional_orlicz_maximal(f, phi, mx.alpha)
                           : luxor::orlicz_maximal(f, phi);
        kind = "orlicz:" + luxor::young_descriptor(phi) +
               (mx.alpha > 0.0 ? ",alpha=" + luxor::detail::format_double(mx.alpha) : "");
      }
      Json j;
      j["operator"] = kind;
      j["function"] = grid_function_json(g);
      emit(j, grid_function_csv(g), mx.c.format, mx.c.out_dir, "maximal");
    });
  }

  // -------------------------------------------------------------- weights --
  struct {
    std::string weight;
    std::string bmo_input;
    std::vector<double> p{2.0};
    double q = 0.0;
    CommonOpts c;
  } wt;
  {
    auto* sc = app.add_subcommand("weights", "Muckenhoupt constants of a weight, or the mean-"
                                             "oscillation norm of a sampled function");
    auto* w_opt = sc->add_option("--weight", wt.weight, "weight descriptor: one, power:a, oscillating");
    auto* b_opt = sc->add_option("--bmo", wt.bmo_input, "CSV file: report its mean-oscillation norm");
    w_opt->excludes(b_opt);
    add_grid_option(sc, wt.c, true);
    sc->add_option("--p", wt.p, "exponents for the A_p constant")->delimiter(',')->capture_default_str();
    sc->add_option("--q", wt.q, "if set, also report the A_{p,q} constant for each p");
    add_io_options(sc, wt.c);
    sc->callback([&] {
      Json j;
      CsvTable csv;
      csv.header = {"quantity", "param", "value"};
      if (!wt.bmo_input.empty()) {
        const GridFunction f = load_grid_function(wt.bmo_input, wt.c.grid);
        const double v = luxor::bmo_norm(f);
        j["bmo_norm"] = v;
        csv.add_row({"bmo_norm", "", luxor::detail::format_double(v)});
      } else {
        if (wt.weight.empty())
          throw std::invalid_argument("weights: need --weight or --bmo");
        const luxor::WeightSpec spec = luxor::parse_weight(wt.weight);
        const GridFunction w = luxor::make_weight(
            spec, wt.c.grid.at(0), static_cast<std::size_t>(wt.c.grid.at(1)));
        j["weight"] = luxor::weight_label(spec);
        const double a1 = luxor::a1_constant(w);
        j["a1"] = a1;
        csv.add_row({"a1", "", luxor::detail::format_double(a1)});
        j["ap"] = Json::object();
        for (double p : wt.p) {
          const double v = luxor::ap_constant(w, p);
          j["ap"][luxor::detail::format_double(p)] = v;
          csv.add_row({"ap", luxor::detail::format_double(p), luxor::detail::format_double(v)});
        }
        if (wt.q > 0.0) {
          j["apq"] = Json::object();
          for (double p : wt.p) {
            const double v = luxor::apq_constant(w, p, wt.q);
            j["apq"][luxor::detail::format_double(p)] = v;
            csv.add_row({"apq", luxor::detail::format_double(p) + ";" +
                                    luxor::detail::format_double(wt.q),
                         luxor::detail::format_double(v)});
          }
        }
      }
      emit(j, csv, wt.c.format, wt.c.out_dir, "weights");
    });
  }

  // ------------------------------------------------------------ hormander --
  struct {
    std::string config;
    std::string mode;
    std::vector<int> levels{-4, 14};
    double alpha = 0.0;
    int k = 0;
    double x = 0.125;
    double R = 1.0;
    int m_max = 80;
    std::string phi;
    std::string x_norm = "l2";
    std::vector<double> scales{0.5, 1.0, 2.0, 4.0};
    CommonOpts c;
  } ho;
  {
    auto* sc = app.add_subcommand("hormander", "Kernel gauge queries: levelwise/pointwise annulus "
                                               "sums, the levelwise closed form, and size scaling");
    sc->add_option("--config", ho.config, "JSON query file; flags override its fields");
    sc->add_option("--mode", ho.mode, "query kind")
        ->check(CLI::IsMember({"levelwise", "pointwise", "closed-form", "scaling"}));
    sc->add_option("--levels", ho.levels, "kernel level window lmin,lmax")
        ->delimiter(',')
        ->expected(2);
    sc->add_option("--alpha", ho.alpha, "kernel weight exponent")->check(CLI::Range(0.0, 1.0));
    sc->add_option("--k", ho.k, "annulus order weight m^k")->check(CLI::NonNegativeNumber);
    sc->add_option("--x", ho.x, "translate displacement");
    sc->add_option("--R", ho.R, "base annulus scale");
    sc->add_option("--m-max", ho.m_max, "annulus truncation");
    sc->add_option("--phi", ho.phi, "Young function (default: exp_power:1/(k+1))");
    sc->add_option("--x-norm", ho.x_norm, "sequence norm across levels")->capture_default_str();
    sc->add_option("--scales", ho.scales, "scales for the scaling report")->delimiter(',');
    add_io_options(sc, ho.c);
    sc->callback([&, sc] {
      if (!ho.config.empty()) {
        std::ifstream in(ho.config);
        if (!in) throw std::invalid_argument("cannot open config '" + ho.config + "'");
        const Json q = Json::parse(in);
        if (sc->count("--mode") == 0) ho.mode = q.value("mode", ho.mode);
        if (sc->count("--levels") == 0) {
          ho.levels[0] = q.value("level_min", ho.levels[0]);
          ho.levels[1] = q.value("level_max", ho.levels[1]);
        }
        if (sc->count("--alpha") == 0) ho.alpha = q.value("alpha", ho.alpha);
        if (sc->count("--k") == 0) ho.k = q.value("k", ho.k);
        if (sc->count("--x") == 0) ho.x = q.value("x", ho.x);
        if (sc->count("--R") == 0) ho.R = q.value("R", ho.R);
        if (sc->count("--m-max") == 0) ho.m_max = q.value("m_max", ho.m_max);
        if (sc->count("--phi") == 0) ho.phi = q.value("phi", ho.phi);
        if (sc->count("--x-norm") == 0) ho.x_norm = q.value("x_norm", ho.x_norm);
        if (sc->count("--scales") == 0)
          ho.scales = q.value("scales", ho.scales);
      }
      if (ho.mode.empty())
        throw std::invalid_argument("hormander: need --mode or a config file with a mode field");
      const luxor::YoungFunction phi =
          ho.phi.empty()
              ? luxor::YoungFunction::exp_power(1.0 / (static_cast<double>(ho.k) + 1.0), 1.0)
              : luxor::parse_young(ho.phi);
      const luxor::SeqNorm X = luxor::parse_seq_norm(ho.x_norm);
      Json j;
      j["mode"] = ho.mode;
      j["phi"] = luxor::young_descriptor(phi);
      j["x_norm"] = ho.x_norm;
      j["k"] = ho.k;
      CsvTable csv;
      if (ho.mode == "closed-form") {
        const luxor::ClosedFormReport rep = luxor::levelwise_closed_form(phi, ho.k, X, ho.m_max);
        j["value"] = rep.value;
        j["stabilized"] = rep.stabilized;
        j["checkpoints"] = Json::array();
        std::vector<std::pair<double, double>> pts;
        for (const auto& [m, v] : rep.checkpoints) {
          j["checkpoints"].push_back(Json::array({m, v}));
          pts.emplace_back(m, v);
        }
        csv = pairs_csv("m_max", pts);
      } else if (ho.mode == "scaling") {
        const luxor::DyadicKernel kernel(ho.levels[0], ho.levels[1], ho.alpha);
        const luxor::ScalingReport rep = luxor::size_scaling_report(kernel, phi, X, ho.scales);
        j["constant"] = rep.constant;
        j["per_scale"] = Json::array();
        for (const auto& [s, v] : rep.per_scale) j["per_scale"].push_back(Json::array({s, v}));
        csv = pairs_csv("scale", rep.per_scale);
      } else {
        const luxor::DyadicKernel kernel(ho.levels[0], ho.levels[1], ho.alpha);
        luxor::AnnulusQuery q;
        q.phi = phi;
        q.k = ho.k;
        q.X = X;
        q.x = ho.x;
        q.R = ho.R;
        q.m_max = ho.m_max;
        const luxor::AnnulusReport rep = ho.mode == "levelwise"
                                             ? luxor::levelwise_annulus_sum(kernel, q)
                                             : luxor::pointwise_annulus_sum(kernel, q);
        j["value"] = rep.value;
        j["first_index"] = rep.first_index;
        j["terms"] = rep.terms;
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < rep.terms.size(); ++i)
          pts.emplace_back(rep.first_index + static_cast<int>(i), rep.terms[i]);
        csv = pairs_csv("index", pts);
      }
      emit(j, csv, ho.c.format, ho.c.out_dir, "hormander");
    });
  }

  // ------------------------------------------------------------- operator --
  struct {
    std::string input;
    std::vector<int> levels{-4, 14};
    double alpha = 0.0;
    int k = 0;
    std::string x_norm = "l2";
    std::string symbol = "log-abs";
    CommonOpts c;
  } op;
  {
    auto* sc = app.add_subcommand("operator", "Apply the vector transform (or its order-k "
                                              "commutator) to a sampled function; outputs the "
                                              "pointwise sequence norm");
    sc->add_option("input", op.input, "CSV file of samples")->required();
    add_grid_option(sc, op.c, true);
    sc->add_option("--levels", op.levels, "kernel level window lmin,lmax")
        ->delimiter(',')
        ->expected(2)
        ->capture_default_str();
    sc->add_option("--alpha", op.alpha, "kernel weight exponent")->check(CLI::Range(0.0, 1.0));
    sc->add_option("--k", op.k, "commutator order")->check(CLI::NonNegativeNumber);
    sc->add_option("--x-norm", op.x_norm, "sequence norm across levels")->capture_default_str();
    sc->add_option("--symbol", op.symbol, "commutator symbol generator kind")->capture_default_str();
    add_io_options(sc, op.c);
    sc->callback([&] {
      const GridFunction f = load_grid_function(op.input, op.c.grid);
      luxor::OperatorSpec spec;
      spec.kernel = luxor::DyadicKernel(op.levels[0], op.levels[1], op.alpha);
      spec.X = luxor::parse_seq_norm(op.x_norm);
      spec.k = op.k;
      if (op.k >= 1) {
        luxor::GeneratorSpec g;
        g.kind = op.symbol;
        std::vector<double> b(f.size());
        for (std::size_t i = 0; i < b.size(); ++i) b[i] = luxor::generator_value(g, f.x_at(i));
        spec.b = luxor::BmoFunction(GridFunction(f.half_length(), std::move(b)));
      }
      const GridFunction s = luxor::s_norm(spec, f);
      Json j;
      j["levels"] = Json::array({op.levels[0], op.levels[1]});
      j["alpha"] = op.alpha;
      j["k"] = op.k;
      j["x_norm"] = op.x_norm;
      if (op.k >= 1) {
        j["symbol"] = op.symbol;
        j["symbol_norm"] = spec.b->norm();
      }
      j["function"] = grid_function_json(s);
      emit(j, grid_function_csv(s), op.c.format, op.c.out_dir, "operator");
    });
  }

  // ---------------------------------------------------------------- suite --
  struct {
    std::string name;
    std::string config;
    std::string store = "data/regression.json";
    std::uint64_t seed = 0;
    CommonOpts c;
  } su;
  {
    auto* sc = app.add_subcommand("suite", "Run a named experiment suite from a config file");
    sc->add_option("name", su.name, "suite name")
        ->required()
        ->check(CLI::IsMember({"coifman", "sharp", "weak", "gap", "fractional"}));
    sc->add_option("--config", su.config, "experiment config JSON (default: built-in defaults)");
    sc->add_option("--store", su.store, "regression-constant store")->capture_default_str();
    auto* seed_opt = sc->add_option("--seed", su.seed, "override the config seed");
    add_io_options(sc, su.c);
    sc->callback([&, seed_opt] {
      luxor::ExperimentConfig cfg = luxor::default_config();
      if (!su.config.empty()) {
        std::ifstream in(su.config);
        if (!in) throw std::invalid_argument("cannot open config '" + su.config + "'");
        cfg = luxor::config_from_json(Json::parse(in));
      }
      if (seed_opt->count() != 0) cfg.seed = su.seed;
      luxor::RegressionStore store = luxor::RegressionStore::load(su.store);
      const luxor::ExperimentReport rep = luxor::run_suite(su.name, cfg, store);
      if (store.dirty()) store.save();
      const Json j = luxor::report_to_json(rep);
      if (su.c.out_dir.empty()) {
        if (su.c.format == "csv") {
          print_csv(std::cout, luxor::report_rows_csv(rep));
        } else {
          std::cout << j.dump(2) << '\n';
        }
      } else {
        std::filesystem::create_directories(su.c.out_dir);
        const std::string stem = su.c.out_dir + "/" + rep.suite + "_" + rep.config_hash;
        write_json_file(stem + ".json", j);
        luxor::report_rows_csv(rep).save(stem + "_rows.csv");
        luxor::report_trajectories_csv(rep).save(stem + "_trajectories.csv");
        std::cout << "suite " << rep.suite << " config " << rep.config_hash << ": "
                  << (rep.pass ? "PASS" : "FAIL") << ", " << rep.rows.size() << " rows -> " << stem
                  << ".json" << '\n';
      }
      for (const std::string& f : rep.failures) std::cerr << "gate failure: " << f << '\n';
      if (!rep.pass) rc = 1;
    });
  }

  // --------------------------------------------------------------- report --
  struct {
    std::vector<std::string> files;
    CommonOpts c;
  } re;
  {
    auto* sc = app.add_subcommand("report", "Merge suite reports and emit combined plot-data CSV");
    sc->add_option("files", re.files, "report JSON files")->required()->expected(-1);
    add_io_options(sc, re.c);
    sc->callback([&] {
      Json merged;
      merged["reports"] = Json::array();
      CsvTable rows;
      CsvTable trajectories;
      std::size_t total_rows = 0;
      bool all_pass = true;
      for (const std::string& path : re.files) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open report '" + path + "'");
        const Json j = Json::parse(in);
        const luxor::ExperimentReport rep = luxor::report_from_json(j);
        const CsvTable r = luxor::report_rows_csv(rep);
        const CsvTable t = luxor::report_trajectories_csv(rep);
        if (rows.header.empty()) rows.header = r.header;
        if (trajectories.header.empty()) trajectories.header = t.header;
        rows.rows.insert(rows.rows.end(), r.rows.begin(), r.rows.end());
        trajectories.rows.insert(trajectories.rows.end(), t.rows.begin(), t.rows.end());
        total_rows += rep.rows.size();
        all_pass = all_pass && rep.pass;
        merged["reports"].push_back(j);
      }
      merged["report_count"] = re.files.size();
      merged["total_rows"] = total_rows;
      merged["all_pass"] = all_pass;
      if (re.c.out_dir.empty()) {
        if (re.c.format == "csv") {
          print_csv(std::cout, rows);
        } else {
          std::cout << merged.dump(2) << '\n';
        }
      } else {
        std::filesystem::create_directories(re.c.out_dir);
        write_json_file(re.c.out_dir + "/merged.json", merged);
        rows.save(re.c.out_dir + "/rows.csv");
        trajectories.save(re.c.out_dir + "/trajectories.csv");
        std::cout << "merged " << re.files.size() << " reports, " << total_rows << " rows -> "
                  << re.c.out_dir << '\n';
      }
      if (!all_pass) rc = 1;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "usage: " << app.get_name() << " <";
    bool first = true;
    for (const CLI::App* sub : app.get_subcommands(nullptr)) {
      std::cerr << (first ? "" : "|") << sub->get_name();
      first = false;
    }
    std::cerr << "> [options]  (see --help)\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return rc;
}
