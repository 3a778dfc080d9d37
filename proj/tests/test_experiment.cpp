#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "fredlab/errors.hpp"
#include "fredlab/experiment.hpp"

using namespace fredlab;
using namespace fredlab::experiment;
namespace fs = std::filesystem;

namespace {

ordered_json base_experiment_config(const std::string& outdir, int sites = 100, int t_grid = 3) {
  return ordered_json{
      {"mode", "experiment"},
      {"seed", 7},
      {"model",
       {{"half_length", 10.0},
        {"sites", sites},
        {"wilson_r", 1.0},
        {"mass", {{"pattern", "-++"}}},
        {"mass_tilde", {{"pattern", "++-"}}},
        {"middle", {-5.0, 5.0}},
        {"thresholds",
         {{"kernel_cutoff_rel", 0.001}, {"gap_ratio_min", 10.0}, {"bulk_floor", 0.5}}}}},
      {"surgery", {{"c_choice", "from_x"}, {"t_grid", t_grid}}},
      {"output", {{"directory", outdir}, {"formats", {"json", "csv"}}}}};
}

fs::path temp_dir(const std::string& leaf) {
  fs::path p = fs::temp_directory_path() / "fredlab_tests" / leaf;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing materializes defaults into the echo") {
  auto j = base_experiment_config("outdir");
  j["model"].erase("half_length");
  j["model"].erase("wilson_r");
  j["model"].erase("thresholds");
  j.erase("surgery");
  auto cfg = config_from_json(j);
  CHECK(cfg.mode == "experiment");
  CHECK(cfg.seed == 7);
  CHECK(cfg.model.half_length == 10.0);
  CHECK(cfg.model.wilson_r == 1.0);
  CHECK(cfg.model.thresholds.bulk_floor == 0.5);
  CHECK(cfg.surgery.c_choice == surgery::CChoice::FromX);
  CHECK(cfg.surgery.t_grid == 11);
  CHECK(cfg.output.json);
  CHECK(cfg.output.csv);
  // the echo records the effective values, not just what was written
  CHECK(cfg.echo["model"]["half_length"] == 10.0);
  CHECK(cfg.echo["surgery"]["t_grid"] == 11);
  CHECK(cfg.echo["model"]["mass"]["pattern"] == "-++");
}

TEST_CASE("config parsing rejects malformed input") {
  auto good = base_experiment_config("o");
  config_from_json(good);  // sanity

  auto check_bad = [&](ordered_json j) { CHECK_THROWS_AS(config_from_json(j), ConfigError); };

  {
    auto j = good;
    j["mystery"] = 1;
    check_bad(j);
  }
  {
    auto j = good;
    j["model"]["mystery"] = 1;
    check_bad(j);
  }
  {
    auto j = good;
    j["model"]["thresholds"]["mystery"] = 1;
    check_bad(j);
  }
  {
    auto j = good;
    j["surgery"]["mystery"] = 1;
    check_bad(j);
  }
  {
    auto j = good;
    j["output"]["mystery"] = 1;
    check_bad(j);
  }
  {
    auto j = good;
    j["mode"] = "explore";
    check_bad(j);
  }
  {
    auto j = good;
    j.erase("mode");
    check_bad(j);
  }
  {
    auto j = good;
    j["seed"] = -3;
    check_bad(j);
  }
  {
    auto j = good;
    j["model"].erase("mass");
    check_bad(j);
  }
  {
    auto j = good;
    j["model"]["mass"] = {{"pattern", "-++"}, {"values", {1.0, 2.0}}};
    check_bad(j);  // pattern and explicit profile are mutually exclusive
  }
  {
    auto j = good;
    j["model"]["middle"] = {-5.0, 0.0, 5.0};
    check_bad(j);
  }
  {
    auto j = good;
    j["surgery"]["t_grid"] = 1;
    check_bad(j);
  }
  {
    auto j = good;
    j["surgery"]["c_choice"] = "left";
    check_bad(j);
  }
  {
    auto j = good;
    j["output"]["formats"] = ordered_json::array();
    check_bad(j);
  }
  {
    auto j = good;
    j["output"]["formats"] = {"yaml"};
    check_bad(j);
  }
  {
    auto j = good;
    j["output"]["directory"] = "";
    check_bad(j);
  }
  {
    auto j = good;
    j["sweep"] = {{"sites", {100, 200}}};
    check_bad(j);  // sweep section is only legal in sweep mode
  }

  // sweep-mode shape errors
  ordered_json sw = good;
  sw["mode"] = "sweep";
  sw["model"].erase("sites");
  sw["sweep"] = {{"sites", {100, 200}}};
  config_from_json(sw);  // sanity
  {
    auto j = sw;
    j.erase("sweep");
    check_bad(j);
  }
  {
    auto j = sw;
    j["sweep"]["sites"] = {100};
    j["sweep"]["patterns"] = ordered_json::array({ordered_json::array({"-++", "++-"})});
    check_bad(j);  // exactly one axis
  }
  {
    auto j = sw;
    j["sweep"] = {{"sites", ordered_json::array()}};
    check_bad(j);
  }
  {
    auto j = sw;
    j["model"]["sites"] = 100;
    check_bad(j);  // refinement owns model.sites
  }
  auto one_pattern = ordered_json::array({ordered_json::array({"-++", "++-"})});
  {
    auto j = sw;
    j["sweep"] = ordered_json{{"patterns", one_pattern}};
    check_bad(j);  // pattern sweep owns the mass profiles
  }
  {
    auto j = sw;
    j["sweep"] = ordered_json{{"patterns", one_pattern}};
    j["model"].erase("mass");
    j["model"].erase("mass_tilde");
    config_from_json(j);  // and is valid once they are gone
  }
}

TEST_CASE("CLI overrides rewrite both the struct and the echo") {
  auto cfg = config_from_json(base_experiment_config("before"));
  override_output_dir(cfg, "after");
  CHECK(cfg.output.directory == "after");
  CHECK(cfg.echo["output"]["directory"] == "after");
  override_seed(cfg, 99);
  CHECK(cfg.seed == 99);
  CHECK(cfg.echo["seed"] == 99);
  override_format(cfg, "csv");
  CHECK_FALSE(cfg.output.json);
  CHECK(cfg.output.csv);
  CHECK(cfg.echo["output"]["formats"] == ordered_json::array({"csv"}));
  CHECK_THROWS_AS(override_format(cfg, "yaml"), ConfigError);
}

TEST_CASE("JSON shapes for results") {
  index::IndexResult r;
  r.index = -1;
  r.kernel_plus = 0;
  r.kernel_minus = 1;
  r.spectral_gap = std::numeric_limits<double>::infinity();
  r.threshold_used = 1e-3;
  r.bulk_min = 0.8;
  auto j = index_json(r);
  CHECK(j["index"] == -1);
  CHECK(j["spectral_gap"] == -1.0);  // infinity is serialized as -1
  CHECK(j["bulk_min"] == 0.8);

  CompactnessProfile p;
  p.sv = Eigen::VectorXd::LinSpaced(20, 20.0, 1.0);
  auto pj = profile_json(p, 4);
  CHECK(pj["sigma"].size() == 4);
  CHECK(pj["sigma"][0] == 20.0);
  CHECK(pj["norm"] == 20.0);

  auto cert = symbolic::verify_proposition();
  auto cj = certificate_json(cert);
  CHECK(cj["name"] == cert.name);
  CHECK(cj["pass"] == true);
  CHECK(cj["entries"].size() == 9);
  CHECK(cj["entries"][0].contains("normal_form"));
}

TEST_CASE("write_text_file creates parents") {
  auto dir = temp_dir("writer");
  auto p = dir / "a" / "b" / "c.txt";
  write_text_file(p.string(), "hello\n");
  CHECK(slurp(p) == "hello\n");
  fs::remove_all(dir);
}

TEST_CASE("experiment run: reports, determinism, gates") {
  auto dir = temp_dir("exp100");
  auto cfg = config_from_json(base_experiment_config((dir / "run1").string()));
  auto out = run_experiment(cfg);
  CHECK(out.exit_code == 0);
  CHECK(out.violations.empty());

  // frozen small-model values: walls -++ / ++- carry indices (1, -1), the
  // diamonds flatten both walls, and the residual vanishes
  CHECK(out.report["indices"]["x"]["index"] == 1);
  CHECK(out.report["indices"]["x_tilde"]["index"] == -1);
  CHECK(out.report["indices"]["diamond"]["index"] == 0);
  CHECK(out.report["indices"]["mirror"]["index"] == 0);
  CHECK(out.report["residual"] == 0);
  CHECK(out.report["endpoint_residual"].get<double>() <= 1e-12);
  CHECK(out.report.begin().key() == "config_echo");
  REQUIRE(out.report["homotopy_trace"].size() == 3);
  CHECK(out.report["homotopy_trace"][0]["index"] == 0);

  CHECK(fs::exists(dir / "run1" / "report.json"));
  CHECK(fs::exists(dir / "run1" / "homotopy_trace.csv"));
  CHECK(fs::exists(dir / "run1" / "report.meta.json"));
  auto csv = slurp(dir / "run1" / "homotopy_trace.csv");
  CHECK(csv.rfind("t,selfadjoint_defect,square_sigma1,square_sigma2,square_sigma3,"
                  "square_sigma4,square_sigma5,index\n", 0) == 0);

  // byte determinism: a second run into another directory differs only by the
  // echoed output directory
  auto cfg2 = config_from_json(base_experiment_config((dir / "run2").string()));
  auto out2 = run_experiment(cfg2);
  auto a = out.report, b = out2.report;
  a["config_echo"]["output"].erase("directory");
  b["config_echo"]["output"].erase("directory");
  CHECK(a.dump() == b.dump());

  fs::remove_all(dir);
}

TEST_CASE("experiment run respects the format filter") {
  auto dir = temp_dir("expfmt");
  auto cfg = config_from_json(base_experiment_config(dir.string()));
  override_format(cfg, "csv");
  auto out = run_experiment(cfg);
  CHECK(out.exit_code == 0);
  CHECK_FALSE(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "homotopy_trace.csv"));
  CHECK(fs::exists(dir / "report.meta.json"));  // sidecar is unconditional
  fs::remove_all(dir);
}

TEST_CASE("refinement sweep emits monotone rows") {
  auto dir = temp_dir("sweepref");
  auto j = base_experiment_config(dir.string());
  j["mode"] = "sweep";
  j["model"].erase("sites");
  j.erase("surgery");
  j["sweep"] = {{"sites", {200, 100}}};  // rows come out sorted by N
  auto out = run_sweep(config_from_json(j));
  CHECK(out.exit_code == 0);
  REQUIRE(out.report["rows"].size() == 2);
  CHECK(out.report["rows"][0]["N"] == 100);
  CHECK(out.report["rows"][1]["N"] == 200);
  CHECK(out.report["rows"][0]["residual"] == 0);
  CHECK(out.report["rows"][0]["indices"]["x"]["index"] == 1);
  CHECK(out.report["rows"][1]["defects"]["comm_bump_tail"].get<double>() <
        out.report["rows"][0]["defects"]["comm_bump_tail"].get<double>());
  CHECK(out.report["pass"] == true);

  auto csv = slurp(dir / "sweep.csv");
  CHECK(csv.rfind("N,comm_bump_norm,comm_bump_tail,corner_sigma5,agreement_sigma5,"
                  "ind_x,ind_xt,ind_diamond,ind_mirror,residual\n", 0) == 0);
  int lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 3);  // header + two rows
  CHECK(fs::exists(dir / "sweep_report.json"));
  fs::remove_all(dir);
}

TEST_CASE("pattern sweep rows carry the boundary signs") {
  auto dir = temp_dir("sweeppat");
  auto j = base_experiment_config(dir.string());
  j["mode"] = "sweep";
  j["model"].erase("mass");
  j["model"].erase("mass_tilde");
  j["sweep"] = ordered_json{{"patterns", ordered_json::array({
                   ordered_json::array({"-++", "++-"}),
                   ordered_json::array({"+++", "+++"})})}};
  auto out = run_sweep(config_from_json(j));
  CHECK(out.exit_code == 0);
  REQUIRE(out.report["rows"].size() == 2);
  CHECK(out.report["rows"][0]["pattern"] == "-++/++-");
  CHECK(out.report["rows"][0]["indices"]["x"]["index"] == 1);
  CHECK(out.report["rows"][0]["indices"]["x_tilde"]["index"] == -1);
  CHECK(out.report["rows"][1]["indices"]["x"]["index"] == 0);
  auto csv = slurp(dir / "sweep.csv");
  CHECK(csv.rfind("pattern,ind_x,ind_xt,ind_diamond,ind_mirror,residual\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("mode mismatch is a config error") {
  auto j = base_experiment_config("o");
  auto cfg = config_from_json(j);
  CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
  j["mode"] = "sweep";
  j["model"].erase("sites");
  j["sweep"] = {{"sites", {100}}};
  auto sw = config_from_json(j);
  CHECK_THROWS_AS(run_experiment(sw), ConfigError);
}
