#include <cstdio>
#include <filesystem>

#include <doctest.h>

#include "luxor/harness.hpp"

using namespace luxor;

namespace {

ExperimentConfig smoke_config() {
  ExperimentConfig cfg = default_config();
  cfg.samples = 1024;
  cfg.level_min = -4;
  cfg.level_max = 3;
  cfg.dilations = {0.5, 1.0, 2.0};
  cfg.exponents = {1.0, 2.0};
  cfg.lambda_count = 9;
  return cfg;
}

}  // namespace

TEST_CASE("young descriptors: parse and round trip") {
  for (const char* desc : {"linear", "power:2", "power:1.5,3", "power_log:1,2",
                           "power_log:2,1,log1p", "exp_power:0.5", "exp_power:1,0"}) {
    YoungFunction phi = parse_young(desc);
    YoungFunction again = parse_young(young_descriptor(phi));
    for (double t : {0.3, 1.0, 7.5}) CHECK(again.value(t) == phi.value(t));
  }
  CHECK(parse_young("power:2").value(3.0) == doctest::Approx(9.0));
  CHECK(parse_young("exp_power:1").value(2.0) == doctest::Approx(std::exp(2.0) - 1.0));
  CHECK_THROWS_AS(parse_young("power"), std::invalid_argument);
  CHECK_THROWS_AS(parse_young("power:two"), std::invalid_argument);
  CHECK_THROWS_AS(parse_young("power_log:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_young("power_log:1,2,weird"), std::invalid_argument);
  CHECK_THROWS_AS(parse_young("mystery:1"), std::invalid_argument);
}

TEST_CASE("sequence norm descriptors: parse and round trip") {
  CHECK(parse_seq_norm("l2").p() == 2.0);
  CHECK(parse_seq_norm("l1").p() == 1.0);
  CHECK(std::isinf(parse_seq_norm("linf").p()));
  CHECK(parse_seq_norm("lp:3.5").p() == 3.5);
  SeqNorm orl = parse_seq_norm("orlicz:power_log:2,1");
  CHECK(orl.kind() == SeqNorm::Kind::orlicz);
  CHECK(seq_norm_descriptor(orl) == "orlicz:power_log:2,1");
  CHECK(seq_norm_descriptor(parse_seq_norm("l2")) == "l2");
  CHECK_THROWS_AS(parse_seq_norm("l3"), std::invalid_argument);
}

TEST_CASE("weight descriptors and sampling") {
  WeightSpec one = parse_weight("one");
  WeightSpec pw = parse_weight("power:0.5");
  WeightSpec osc = parse_weight("oscillating");
  CHECK(weight_label(pw) == "power:0.5");
  GridFunction wone = make_weight(one, 8.0, 256);
  GridFunction wpw = make_weight(pw, 8.0, 256);
  GridFunction wosc = make_weight(osc, 8.0, 256);
  for (std::size_t i = 0; i < wone.size(); ++i) {
    CHECK(wone[i] == 1.0);
    CHECK(wpw[i] == doctest::Approx(std::sqrt(std::abs(wone.x_at(i)))));
    CHECK(wosc[i] >= 0.5);
    CHECK(wosc[i] <= 2.5);
  }
  CHECK_THROWS_AS(parse_weight("negative"), std::invalid_argument);
}

TEST_CASE("a-infinity gate: battery weights pass, a degenerate power fails") {
  for (const char* desc : {"one", "power:-0.5", "power:0.5", "oscillating"}) {
    GateReport gate = a_infty_gate(parse_weight(desc), 16.0, 2048);
    CAPTURE(desc);
    CHECK(gate.pass);
  }
  GateReport bad = a_infty_gate(parse_weight("power:-2"), 16.0, 2048);
  CHECK_FALSE(bad.pass);
}

TEST_CASE("regression store: record, lock, persist") {
  const std::string path = (std::filesystem::temp_directory_path() / "luxor_store_test.json").string();
  std::filesystem::remove(path);
  {
    RegressionStore store = RegressionStore::load(path);
    CHECK(store.check("suite/v@abc", 10.0) == RegressionStore::Status::recorded);
    CHECK(store.check("suite/v@abc", 10.5) == RegressionStore::Status::locked_pass);
    CHECK(store.check("suite/v@abc", 11.5) == RegressionStore::Status::locked_fail);
    CHECK(store.check("suite/v@abc", 9.5, 0.01) == RegressionStore::Status::locked_fail);
    CHECK(store.dirty());
    store.save();
  }
  RegressionStore reloaded = RegressionStore::load(path);
  CHECK(reloaded.has("suite/v@abc"));
  CHECK(reloaded.stored("suite/v@abc") == 10.0);
  CHECK_FALSE(reloaded.dirty());
  std::filesystem::remove(path);
}

TEST_CASE("experiment config: json round trip preserves the hash") {
  ExperimentConfig cfg = default_config();
  Json j = config_to_json(cfg);
  ExperimentConfig back = config_from_json(j);
  CHECK(config_hash(back) == config_hash(cfg));
  ExperimentConfig fresh = config_from_json(Json::object());
  CHECK(config_hash(fresh) == config_hash(cfg));
  ExperimentConfig tweaked = cfg;
  tweaked.k = 1;
  CHECK(config_hash(tweaked) != config_hash(cfg));
}

TEST_CASE("experiment config: validation rejects bad settings") {
  ExperimentConfig cfg = smoke_config();
  CHECK_NOTHROW(validate_config(cfg));

  ExperimentConfig bad = cfg;
  bad.battery.clear();
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

  bad = cfg;
  bad.delta = 0.7;  // delta >= eps
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

  bad = cfg;
  bad.translation = 0.01;  // not a whole cell
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

  bad = cfg;
  bad.translation = 10.0;  // beyond a quarter of the domain
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

  bad = cfg;
  bad.weights = {"power:-2"};  // fails the gate
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

  bad = cfg;
  bad.exponents = {-1.0};
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
}

TEST_CASE("ratio suite: passes on the smoke battery with full bookkeeping") {
  ExperimentConfig cfg = smoke_config();
  RegressionStore store;
  ExperimentReport rep = coifman_suite(cfg, store);
  CHECK(rep.pass);
  CHECK(rep.failures.empty());
  CHECK(rep.suite == "coifman");
  CHECK(rep.config_hash == config_hash(cfg));
  // rows: battery x dilations x weights x exponents, zero rows included as skipped
  CHECK(rep.rows.size() == cfg.battery.size() * cfg.dilations.size() * cfg.weights.size() *
                               cfg.exponents.size());
  std::size_t skipped = 0;
  for (const CaseRow& row : rep.rows) {
    if (row.skipped) {
      ++skipped;
      CHECK(row.note == "zero input");
    } else {
      CHECK(std::isfinite(row.ratio));
      CHECK(row.ratio > 0.0);
    }
  }
  CHECK(skipped == cfg.dilations.size() * cfg.weights.size() * cfg.exponents.size());
  CHECK(rep.constants.at("sup_ratio") > 0.0);
  CHECK(rep.constants.at("dilation_drift") <= 2.0);
  CHECK(rep.constants.at("denominator_order_sup") > 0.0);
  CHECK(rep.trajectories.at("sup_ratio_by_dilation").size() == cfg.dilations.size());
}

TEST_CASE("ratio suite: identical config and store state give bit-identical reports") {
  ExperimentConfig cfg = smoke_config();
  RegressionStore s1, s2;
  std::string a = report_to_json(coifman_suite(cfg, s1)).dump();
  std::string b = report_to_json(coifman_suite(cfg, s2)).dump();
  CHECK(a == b);
}

TEST_CASE("ratio suite: sup ratio invariant under positive scaling of the battery") {
  ExperimentConfig cfg = smoke_config();
  cfg.dilations = {1.0, 2.0};
  ExperimentConfig scaled = cfg;
  for (GeneratorSpec& g : scaled.battery) g.height *= 3.0;
  RegressionStore s1, s2;
  double r1 = coifman_suite(cfg, s1).constants.at("sup_ratio");
  double r2 = coifman_suite(scaled, s2).constants.at("sup_ratio");
  CHECK(std::abs(r2 - r1) <= 1e-10 * r1);
}

TEST_CASE("ratio suite: whole-cell translation leaves every ratio bit-identical") {
  for (int k : {0, 1}) {
    ExperimentConfig cfg = smoke_config();
    cfg.k = k;
    cfg.dilations = {0.5, 1.0, 2.0};
    ExperimentConfig moved = cfg;
    const double h = 2.0 * cfg.half_length / static_cast<double>(cfg.samples);
    moved.translation = 16.0 * h;
    RegressionStore s1, s2;
    ExperimentReport base = coifman_suite(cfg, s1);
    ExperimentReport shifted = coifman_suite(moved, s2);
    REQUIRE(base.rows.size() == shifted.rows.size());
    for (std::size_t i = 0; i < base.rows.size(); ++i) {
      CAPTURE(k);
      CAPTURE(base.rows[i].f_label);
      CHECK(base.rows[i].ratio == shifted.rows[i].ratio);
      CHECK(base.rows[i].numerator == shifted.rows[i].numerator);
      CHECK(base.rows[i].denominator == shifted.rows[i].denominator);
    }
    CHECK(base.constants.at("sup_ratio") == shifted.constants.at("sup_ratio"));
  }
}

TEST_CASE("ratio suite: commutator order runs against its own gauge") {
  ExperimentConfig cfg = smoke_config();
  cfg.k = 1;
  cfg.dilations = {1.0, 2.0};
  cfg.exponents = {2.0};
  RegressionStore store;
  ExperimentReport rep = coifman_suite(cfg, store);
  CHECK(rep.pass);
  CHECK(rep.constants.at("sup_ratio") > 0.0);
}

TEST_CASE("ratio suite: rejects fractional configs") {
  ExperimentConfig cfg = smoke_config();
  cfg.alpha = 0.25;
  RegressionStore store;
  CHECK_THROWS_AS(coifman_suite(cfg, store), std::invalid_argument);
}

TEST_CASE("sharp suite: pointwise bound holds on the battery for k in {0,1}") {
  for (int k : {0, 1}) {
    ExperimentConfig cfg = smoke_config();
    cfg.k = k;
    cfg.dilations = {0.5, 1.0, 2.0};
    RegressionStore store;
    ExperimentReport rep = sharp_suite(cfg, store);
    CAPTURE(k);
    CHECK(rep.pass);
    CHECK(rep.constants.at("sup_ratio") > 0.0);
    CHECK(rep.constants.at("dilation_drift") <= 2.0);
    bool saw_zero = false;
    for (const CaseRow& row : rep.rows)
      if (row.note == "zero input: both sides vanish") {
        saw_zero = true;
        CHECK(row.ratio == 0.0);
      }
    CHECK(saw_zero);
  }
}

TEST_CASE("weak-type suite: lambda sweep is monotone with vanishing tail") {
  ExperimentConfig cfg = smoke_config();
  RegressionStore store;
  ExperimentReport rep = weak_type_suite(cfg, store);
  CHECK(rep.pass);
  CHECK(rep.constants.at("sup_ratio") > 0.0);
  CHECK(std::isfinite(rep.constants.at("sup_ratio")));
  // four nonzero battery entries x four weights, plus skipped zero rows
  std::size_t live = 0, skipped = 0;
  for (const CaseRow& row : rep.rows) (row.skipped ? skipped : live)++;
  CHECK(live == 4 * cfg.weights.size());
  CHECK(skipped == cfg.weights.size());
  // trajectories carry the full sweep
  for (const auto& [name, points] : rep.trajectories)
    CHECK(points.size() == static_cast<std::size_t>(cfg.lambda_count));
}

TEST_CASE("gap probe: pointwise gauge grows, levelwise gauge is flat") {
  for (int k : {0, 2}) {
    ExperimentConfig cfg = smoke_config();
    cfg.k = k;
    RegressionStore store;
    ExperimentReport rep = gap_probe(cfg, store);
    CAPTURE(k);
    CHECK(rep.pass);
    CHECK(rep.constants.at("plain_growth_a0") > rep.constants.at("plain_growth_a0.5"));
    CHECK(rep.constants.at("dagger_window_drift_a0") < 0.01);
    CHECK(rep.constants.at("dagger_window_drift_a0.5") < 0.01);
    // harmonic tail keeps m*term growing; summable tail sends it down
    CHECK(rep.constants.at("tail_index_a0") > 1.03);
    CHECK(rep.constants.at("tail_index_a0.5") <= 1.03);
    CHECK(rep.trajectories.at("plain_a0").size() == 3);
    CHECK(rep.trajectories.at("annulus_tail_a0").size() == 12);
    CHECK(rep.trajectories.at("dagger_mmax_a0").size() == 8);
    // saturation trajectory is nondecreasing in the truncation
    const auto& tr = rep.trajectories.at("dagger_mmax_a0");
    for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr[i][1] >= tr[i - 1][1]);
  }
}

TEST_CASE("fractional suite: ratio battery and gated pq surrogate") {
  ExperimentConfig cfg = smoke_config();
  cfg.alpha = 0.25;
  cfg.exponents = {2.0};  // q = 4
  cfg.weights = {"one", "power:0.5"};
  cfg.dilations = {0.5, 1.0, 2.0};
  RegressionStore store;
  ExperimentReport rep = fractional_suite(cfg, store);
  CHECK(rep.pass);
  CHECK(rep.constants.at("sup_ratio") > 0.0);
  CHECK(rep.constants.at("pq_bound") > 0.0);
  CHECK(rep.constants.at("assumed_pq_bound") > 0.0);
  CHECK(rep.constants.at("assumed_pq_bound") <= rep.constants.at("pq_bound"));
  bool saw_surrogate = false, saw_gate_skip = false;
  for (const CaseRow& row : rep.rows) {
    if (row.q > 0.0 && !row.skipped) {
      saw_surrogate = true;
      CHECK(row.q == doctest::Approx(4.0));
    }
    if (row.note == "apq gate failed") saw_gate_skip = true;
  }
  CHECK(saw_surrogate);
  CHECK(saw_gate_skip);  // |x|^{1/2} sits outside the A_{p,q} range for q = 4
  CHECK_THROWS_AS(fractional_suite(smoke_config(), store), std::invalid_argument);
}

TEST_CASE("suite dispatch and report serialization") {
  ExperimentConfig cfg = smoke_config();
  cfg.dilations = {1.0};
  cfg.battery.resize(2);
  RegressionStore store;
  CHECK_THROWS_AS(run_suite("mystery", cfg, store), std::invalid_argument);
  ExperimentReport rep = run_suite("coifman", cfg, store);
  Json j = report_to_json(rep);
  CHECK(j.at("suite") == "coifman");
  CHECK(j.at("rows").size() == rep.rows.size());
  CsvTable rows = report_rows_csv(rep);
  CHECK(rows.rows.size() == rep.rows.size());
  CsvTable traj = report_trajectories_csv(rep);
  CHECK(traj.rows.size() == rep.trajectories.at("sup_ratio_by_dilation").size());
  // lock failure path: feed the store a contradictory constant
  RegressionStore fussy;
  fussy.check("coifman/sup_ratio@" + config_hash(cfg), rep.constants.at("sup_ratio") * 2.0);
  ExperimentReport rejected = coifman_suite(cfg, fussy);
  CHECK_FALSE(rejected.pass);
  CHECK_FALSE(rejected.failures.empty());
}
