// fredlab: batch front door for the symbolic verifier, single experiments,
// and N-sweeps.  Exit codes: 0 ok, 1 contract/certificate failure,
// 2 numerical error (ambiguous kernel, internal), 3 config error.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fredlab/errors.hpp"
#include "fredlab/experiment.hpp"
#include "fredlab/symbolic.hpp"

namespace {

using fredlab::experiment::certificate_json;
using fredlab::experiment::ordered_json;

void print_certificate(const fredlab::symbolic::Certificate& c) {
  std::printf("== %s ==\n", c.name.c_str());
  for (const auto& e : c.entries) {
    if (e.pass) {
      std::printf("  (%d,%d) PASS\n", e.row, e.col);
    } else {
      std::printf("  (%d,%d) FAIL  normal form: %s\n", e.row, e.col, e.normal_form.c_str());
    }
  }
  if (c.name == "homotopy") {
    std::printf("  adjoint symmetry: %s\n", c.adjoint_symmetric ? "PASS" : "FAIL");
    std::printf("  endpoint factorization (s=1, k=0): %s\n", c.endpoint_match ? "PASS" : "FAIL");
  }
  if (!c.pass) {
    for (const auto& e : c.entries) {
      if (!e.pass) {
        std::printf("  first failing entry (%d,%d): %s\n", e.row, e.col, e.normal_form.c_str());
        break;
      }
    }
  }
}

int run_verify(const std::vector<std::string>& drops, std::string trace_path,
               const std::string& out_dir) {
  fredlab::symbolic::VerifyOptions opts;
  opts.drop_axioms = drops;
  auto prop = fredlab::symbolic::verify_proposition(opts);
  auto hom = fredlab::symbolic::verify_homotopy(opts);
  print_certificate(prop);
  print_certificate(hom);

  int passed = 0, total = 0;
  for (const auto* c : {&prop, &hom}) {
    for (const auto& e : c->entries) {
      ++total;
      passed += e.pass;
    }
  }
  bool ok = prop.pass && hom.pass;
  if (ok)
    std::printf("%d entries PASS\n", total);
  else
    std::printf("%d of %d entries PASS\n", passed, total);
  std::printf("note: %s\n", prop.note.c_str());

  if (trace_path.empty()) trace_path = out_dir + "/verify_trace.json";
  ordered_json trace{{"proposition", certificate_json(prop)},
                     {"homotopy", certificate_json(hom)}};
  fredlab::experiment::write_text_file(trace_path, trace.dump(2) + "\n");
  std::printf("trace written to %s\n", trace_path.c_str());
  return ok ? 0 : 1;
}

int run_batch(const std::string& subcommand, const std::string& config_path,
              const std::string& out_dir, bool out_set, std::uint64_t seed, bool seed_set,
              const std::string& format, bool format_set) {
  auto cfg = fredlab::experiment::load_config(config_path);
  if (out_set) fredlab::experiment::override_output_dir(cfg, out_dir);
  if (seed_set) fredlab::experiment::override_seed(cfg, seed);
  if (format_set) fredlab::experiment::override_format(cfg, format);

  fredlab::experiment::RunOutcome outcome;
  if (subcommand == "experiment") {
    outcome = fredlab::experiment::run_experiment(cfg);
    const auto& r = outcome.report;
    std::printf("indices: x=%d x~=%d diamond=%d mirror=%d  residual=%d\n",
                r["indices"]["x"]["index"].get<int>(),
                r["indices"]["x_tilde"]["index"].get<int>(),
                r["indices"]["diamond"]["index"].get<int>(),
                r["indices"]["mirror"]["index"].get<int>(), r["residual"].get<int>());
    std::printf("endpoint residual: %.3e\n", r["endpoint_residual"].get<double>());
  } else {
    outcome = fredlab::experiment::run_sweep(cfg);
    std::printf("sweep rows: %zu\n", outcome.report["rows"].size());
  }
  for (const auto& v : outcome.violations) std::printf("VIOLATION: %s\n", v.c_str());
  std::printf("%s; outputs under %s\n", outcome.violations.empty() ? "OK" : "CONTRACT VIOLATIONS",
              cfg.output.directory.c_str());
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale laboratory for cut-and-paste index surgery"};
  app.require_subcommand(1);

  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::string format;
  std::vector<CLI::Option*> out_opts, seed_opts, format_opts;

  auto add_common = [&](CLI::App* sub) {
    out_opts.push_back(sub->add_option("--out", out_dir, "output directory"));
    seed_opts.push_back(sub->add_option("--seed", seed, "override the config seed"));
    format_opts.push_back(sub->add_option("--format", format, "json|csv")
                              ->check(CLI::IsMember({"json", "csv"})));
  };

  auto* verify = app.add_subcommand("verify", "machine-check the block-calculus identities");
  std::vector<std::string> drops;
  std::string trace_path;
  verify->add_option("--drop-axiom", drops, "ablate an axiom (A1..A6, tilde ids, KILL)");
  verify->add_option("--trace", trace_path, "path for the JSON reduction trace");
  add_common(verify);

  std::string exp_config, sweep_config;
  auto* experiment = app.add_subcommand("experiment", "run one relative-index experiment");
  experiment->add_option("config", exp_config, "JSON config file")->required();
  add_common(experiment);

  auto* sweep = app.add_subcommand("sweep", "run a refinement or boundary-sign sweep");
  sweep->add_option("config", sweep_config, "JSON config file")->required();
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;  // bad usage is a config error
  }

  auto any_set = [](const std::vector<CLI::Option*>& v) {
    for (auto* o : v)
      if (o->count()) return true;
    return false;
  };

  try {
    if (app.got_subcommand(verify)) return run_verify(drops, trace_path, out_dir);
    const bool is_exp = app.got_subcommand(experiment);
    return run_batch(is_exp ? "experiment" : "sweep", is_exp ? exp_config : sweep_config,
                     out_dir, any_set(out_opts), seed, any_set(seed_opts), format,
                     any_set(format_opts));
  } catch (const fredlab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 3;
  } catch (const fredlab::symbolic::ParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 3;
  } catch (const fredlab::AmbiguousKernelError& e) {
    std::fprintf(stderr, "ambiguous kernel: %s\n", e.what());
    return 2;
  } catch (const fredlab::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
}
