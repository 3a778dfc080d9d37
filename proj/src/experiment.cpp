#include "fredlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fredlab/errors.hpp"

namespace fredlab::experiment {

namespace {

constexpr double kNearZeroDefect = 1e-10;  // monotonicity slack at machine floor
constexpr double kEndpointTol = 1e-12;

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double finite_or_flag(double v) { return std::isinf(v) ? -1.0 : v; }

// --- strict config parsing -------------------------------------------------

void check_keys(const ordered_json& j, const char* where,
                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known) throw ConfigError(std::string("unknown key '") + it.key() + "' in " + where);
  }
}

const ordered_json* maybe(const ordered_json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const ordered_json& require_obj(const ordered_json& j, const char* where, const char* key) {
  const ordered_json* v = maybe(j, key);
  if (!v) throw ConfigError(std::string(where) + " requires '" + key + "'");
  if (!v->is_object()) throw ConfigError(std::string("'") + key + "' must be an object");
  return *v;
}

double get_num(const ordered_json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

long long get_int(const ordered_json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ConfigError(what + " must be an integer");
  return v.get<long long>();
}

std::string get_str(const ordered_json& v, const std::string& what) {
  if (!v.is_string()) throw ConfigError(what + " must be a string");
  return v.get<std::string>();
}

std::pair<models::MassProfile, ordered_json> parse_mass(const ordered_json& j,
                                                        const std::string& where,
                                                        double half_length) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  check_keys(j, where.c_str(), {"pattern", "breakpoints", "values"});
  const ordered_json* pat = maybe(j, "pattern");
  const ordered_json* bps = maybe(j, "breakpoints");
  const ordered_json* vals = maybe(j, "values");
  if (pat && (bps || vals))
    throw ConfigError(where + ": give either a pattern or breakpoints/values, not both");
  if (pat) {
    std::string p = get_str(*pat, where + ".pattern");
    return {models::profile_from_pattern(p, half_length), ordered_json{{"pattern", p}}};
  }
  if (!bps || !vals) throw ConfigError(where + " needs both breakpoints and values");
  if (!bps->is_array() || !vals->is_array())
    throw ConfigError(where + ": breakpoints and values must be arrays");
  models::MassProfile m;
  for (const auto& b : *bps) m.breakpoints.push_back(get_num(b, where + ".breakpoints[]"));
  for (const auto& v : *vals) m.values.push_back(get_num(v, where + ".values[]"));
  m.validate(half_length);
  return {m, ordered_json{{"breakpoints", m.breakpoints}, {"values", m.values}}};
}

// --- shared per-configuration computation ----------------------------------

struct Row {
  models::ModelBundle bundle;
  FredholmModule dia, mir;
  index::IndexResult ix, ixt, idia, imir;
  int residual = 0;
  double comm_norm = 0.0, comm_tail = 0.0;  // fixed-bump commutator on x
};

Row compute_row(const models::DomainWallConfig& m, std::uint64_t seed,
                surgery::CChoice choice) {
  Row r;
  r.bundle = models::build_agreeing_pair(m, seed);
  const auto& p = r.bundle.pair;
  r.dia = surgery::diamond(p, choice);
  r.mir = surgery::diamond(p.swapped(), choice);
  auto opts = m.index_options();
  r.ix = index::graded_index(p.x, opts, "F");
  r.ixt = index::graded_index(p.xt, opts, "F~");
  r.idia = index::graded_index(r.dia, opts, "F<>F~");
  r.imir = index::graded_index(r.mir, opts, "F~<>F");
  r.residual = (r.idia.index - r.ix.index) - (r.ixt.index - r.imir.index);
  auto bump = models::bump_element(*r.bundle.dirac_x, 0.0, 0.4 * m.half_length);
  linalg::Matrix B = algebra::rep_apply(p.x.rep, bump);
  auto prof = CompactnessProfile::of(p.x.F * B - B * p.x.F);
  r.comm_norm = prof.norm();
  r.comm_tail = prof.tail();
  return r;
}

double row_bulk_min(const Row& r) {
  return std::min(std::min(r.ix.bulk_min, r.ixt.bulk_min),
                  std::min(r.idia.bulk_min, r.imir.bulk_min));
}

void gate_row(const Row& r, const models::DomainWallConfig& m, const std::string& id,
              std::vector<std::string>& violations) {
  if (r.residual != 0)
    violations.push_back(id + ": residual = " + std::to_string(r.residual) + ", expected 0");
  if (r.ix.index != r.bundle.oracle_x)
    violations.push_back(id + ": ind(x) = " + std::to_string(r.ix.index) +
                         " disagrees with kernel oracle " + std::to_string(r.bundle.oracle_x));
  if (r.ixt.index != r.bundle.oracle_xt)
    violations.push_back(id + ": ind(x~) = " + std::to_string(r.ixt.index) +
                         " disagrees with kernel oracle " + std::to_string(r.bundle.oracle_xt));
  double floor = m.thresholds.bulk_floor;
  if (row_bulk_min(r) < floor)
    violations.push_back(id + ": bulk spectrum " + fmt_double(row_bulk_min(r)) +
                         " under the health floor " + fmt_double(floor));
}

ordered_json row_indices_json(const Row& r) {
  ordered_json j;
  j["x"] = index_json(r.ix);
  j["x_tilde"] = index_json(r.ixt);
  j["diamond"] = index_json(r.idia);
  j["mirror"] = index_json(r.imir);
  j["oracle_x"] = r.bundle.oracle_x;
  j["oracle_x_tilde"] = r.bundle.oracle_xt;
  return j;
}

// --- output ------------------------------------------------------------------

void write_sidecar(const std::string& dir, double elapsed_seconds) {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  ordered_json meta{{"written_at", buf}, {"elapsed_seconds", elapsed_seconds}};
  write_text_file(dir + "/report.meta.json", meta.dump(2) + "\n");
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

}  // namespace

void write_text_file(const std::string& path, const std::string& body) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot open for writing: " + path);
  f << body;
  if (!f.good()) throw ConfigError("short write: " + path);
}

ordered_json profile_json(const CompactnessProfile& p, int keep) {
  std::vector<double> head;
  for (int k = 1; k <= keep && k <= p.sv.size(); ++k) head.push_back(p.sigma(k));
  return ordered_json{{"norm", p.norm()}, {"tail", p.tail()}, {"sigma", head}};
}

ordered_json defects_json(const DefectReport& r) {
  ordered_json loc = ordered_json::array();
  for (std::size_t i = 0; i < r.locality_defects.size(); ++i)
    loc.push_back(ordered_json{{"element", r.locality_defects[i].first},
                               {"norm", r.locality_defects[i].second},
                               {"tail", r.locality_tails[i].second}});
  ordered_json j;
  j["selfadjoint"] = r.selfadjoint_defect;
  j["square"] = profile_json(r.square_profile);
  if (r.odd_defect)
    j["odd"] = *r.odd_defect;
  else
    j["odd"] = nullptr;
  j["locality"] = loc;
  return j;
}

ordered_json index_json(const index::IndexResult& r) {
  return ordered_json{{"index", r.index},
                      {"kernel_plus", r.kernel_plus},
                      {"kernel_minus", r.kernel_minus},
                      {"spectral_gap", finite_or_flag(r.spectral_gap)},
                      {"threshold_used", r.threshold_used},
                      {"bulk_min", finite_or_flag(r.bulk_min)}};
}

ordered_json certificate_json(const symbolic::Certificate& c) {
  ordered_json entries = ordered_json::array();
  for (const auto& e : c.entries) {
    ordered_json steps = ordered_json::array();
    for (const auto& s : e.steps) steps.push_back(ordered_json::array({s.rule, s.position}));
    entries.push_back(ordered_json{{"row", e.row},
                                   {"col", e.col},
                                   {"pass", e.pass},
                                   {"normal_form", e.normal_form},
                                   {"steps", steps}});
  }
  return ordered_json{{"name", c.name},
                      {"pass", c.pass},
                      {"adjoint_symmetric", c.adjoint_symmetric},
                      {"endpoint_match", c.endpoint_match},
                      {"total_steps", c.total_steps},
                      {"note", c.note},
                      {"entries", entries}};
}

ExperimentConfig config_from_json(const ordered_json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  check_keys(j, "config", {"mode", "seed", "model", "surgery", "sweep", "output"});

  ExperimentConfig cfg;
  const ordered_json* mode = maybe(j, "mode");
  if (!mode) throw ConfigError("config requires 'mode'");
  cfg.mode = get_str(*mode, "mode");
  if (cfg.mode != "verify" && cfg.mode != "experiment" && cfg.mode != "sweep")
    throw ConfigError("mode must be one of verify/experiment/sweep, got '" + cfg.mode + "'");

  if (const ordered_json* s = maybe(j, "seed")) {
    long long v = get_int(*s, "seed");
    if (v < 0) throw ConfigError("seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(v);
  }

  // sweep section first: it decides which model keys are allowed
  if (cfg.mode == "sweep") {
    const ordered_json& sw = require_obj(j, "sweep config", "sweep");
    check_keys(sw, "sweep", {"sites", "patterns"});
    const ordered_json* sites = maybe(sw, "sites");
    const ordered_json* pats = maybe(sw, "patterns");
    if (sites && pats) throw ConfigError("sweep: give sites or patterns, not both");
    if (sites) {
      if (!sites->is_array()) throw ConfigError("sweep.sites must be an array");
      for (const auto& v : *sites)
        cfg.sweep.sites.push_back(static_cast<int>(get_int(v, "sweep.sites[]")));
      if (cfg.sweep.sites.empty()) throw ConfigError("sweep.sites must not be empty");
    } else if (pats) {
      if (!pats->is_array()) throw ConfigError("sweep.patterns must be an array");
      for (const auto& v : *pats) {
        if (!v.is_array() || v.size() != 2)
          throw ConfigError("sweep.patterns entries must be [pattern, pattern_tilde]");
        cfg.sweep.patterns.push_back(
            {get_str(v[0], "sweep.patterns[][0]"), get_str(v[1], "sweep.patterns[][1]")});
      }
      if (cfg.sweep.patterns.empty()) throw ConfigError("sweep.patterns must not be empty");
    } else {
      throw ConfigError("sweep requires a sites list or a patterns list");
    }
  } else if (maybe(j, "sweep")) {
    throw ConfigError("'sweep' section is only valid in sweep mode");
  }
  bool refinement = cfg.mode == "sweep" && cfg.sweep.refinement();
  bool pattern_sweep = cfg.mode == "sweep" && !refinement;

  ordered_json model_echo;
  if (const ordered_json* mj0 = maybe(j, "model"); mj0 || cfg.mode != "verify") {
    const ordered_json& mj = require_obj(j, "config", "model");
    check_keys(mj, "model", {"half_length", "sites", "wilson_r", "mass", "mass_tilde",
                             "middle", "thresholds"});
    auto& m = cfg.model;
    if (const ordered_json* v = maybe(mj, "half_length"))
      m.half_length = get_num(*v, "model.half_length");
    if (const ordered_json* v = maybe(mj, "sites")) {
      if (refinement)
        throw ConfigError("model.sites is set per row by sweep.sites; remove it");
      m.sites = static_cast<int>(get_int(*v, "model.sites"));
    }
    if (const ordered_json* v = maybe(mj, "wilson_r")) m.wilson_r = get_num(*v, "model.wilson_r");
    if (const ordered_json* v = maybe(mj, "middle")) {
      if (!v->is_array() || v->size() != 2) throw ConfigError("model.middle must be [lo, hi]");
      m.middle_lo = get_num((*v)[0], "model.middle[0]");
      m.middle_hi = get_num((*v)[1], "model.middle[1]");
    }
    ordered_json th_echo;
    if (const ordered_json* v = maybe(mj, "thresholds")) {
      check_keys(*v, "model.thresholds", {"kernel_cutoff_rel", "gap_ratio_min", "bulk_floor"});
      if (const ordered_json* t = maybe(*v, "kernel_cutoff_rel"))
        m.thresholds.kernel_cutoff_rel = get_num(*t, "kernel_cutoff_rel");
      if (const ordered_json* t = maybe(*v, "gap_ratio_min"))
        m.thresholds.gap_ratio_min = get_num(*t, "gap_ratio_min");
      if (const ordered_json* t = maybe(*v, "bulk_floor"))
        m.thresholds.bulk_floor = get_num(*t, "bulk_floor");
    }
    th_echo = ordered_json{{"kernel_cutoff_rel", m.thresholds.kernel_cutoff_rel},
                           {"gap_ratio_min", m.thresholds.gap_ratio_min},
                           {"bulk_floor", m.thresholds.bulk_floor}};

    const ordered_json* mass = maybe(mj, "mass");
    const ordered_json* mass_t = maybe(mj, "mass_tilde");
    ordered_json mass_echo, mass_t_echo;
    if (pattern_sweep) {
      if (mass || mass_t)
        throw ConfigError("pattern sweeps take mass profiles from sweep.patterns; remove model.mass");
    } else {
      if (!mass || !mass_t) throw ConfigError("model requires 'mass' and 'mass_tilde'");
      std::tie(m.mass, mass_echo) = parse_mass(*mass, "model.mass", m.half_length);
      std::tie(m.mass_tilde, mass_t_echo) = parse_mass(*mass_t, "model.mass_tilde", m.half_length);
    }

    model_echo["half_length"] = m.half_length;
    if (!refinement) model_echo["sites"] = m.sites;
    model_echo["wilson_r"] = m.wilson_r;
    if (!pattern_sweep) {
      model_echo["mass"] = mass_echo;
      model_echo["mass_tilde"] = mass_t_echo;
    }
    model_echo["middle"] = {m.middle_lo, m.middle_hi};
    model_echo["thresholds"] = th_echo;

    if (cfg.mode == "experiment") m.validate();  // sweeps validate per row
  }

  if (const ordered_json* sj = maybe(j, "surgery")) {
    check_keys(*sj, "surgery", {"c_choice", "t_grid"});
    if (const ordered_json* v = maybe(*sj, "c_choice"))
      cfg.surgery.c_choice = surgery::c_choice_from_string(get_str(*v, "surgery.c_choice"));
    if (const ordered_json* v = maybe(*sj, "t_grid")) {
      long long g = get_int(*v, "surgery.t_grid");
      if (g < 2 || g > 201) throw ConfigError("surgery.t_grid must lie in [2, 201]");
      cfg.surgery.t_grid = static_cast<int>(g);
    }
  }

  if (const ordered_json* oj = maybe(j, "output")) {
    check_keys(*oj, "output", {"directory", "formats"});
    if (const ordered_json* v = maybe(*oj, "directory")) {
      cfg.output.directory = get_str(*v, "output.directory");
      if (cfg.output.directory.empty()) throw ConfigError("output.directory must not be empty");
    }
    if (const ordered_json* v = maybe(*oj, "formats")) {
      if (!v->is_array() || v->empty()) throw ConfigError("output.formats must be a nonempty array");
      cfg.output.json = cfg.output.csv = false;
      for (const auto& f : *v) {
        std::string s = get_str(f, "output.formats[]");
        if (s == "json")
          cfg.output.json = true;
        else if (s == "csv")
          cfg.output.csv = true;
        else
          throw ConfigError("output format must be json or csv, got '" + s + "'");
      }
    }
  }

  cfg.echo["mode"] = cfg.mode;
  cfg.echo["seed"] = cfg.seed;
  if (!model_echo.is_null()) cfg.echo["model"] = model_echo;
  cfg.echo["surgery"] = ordered_json{{"c_choice", surgery::c_choice_name(cfg.surgery.c_choice)},
                                     {"t_grid", cfg.surgery.t_grid}};
  if (cfg.mode == "sweep") {
    if (refinement) {
      cfg.echo["sweep"] = ordered_json{{"sites", cfg.sweep.sites}};
    } else {
      ordered_json pats = ordered_json::array();
      for (const auto& p : cfg.sweep.patterns) pats.push_back({p[0], p[1]});
      cfg.echo["sweep"] = ordered_json{{"patterns", pats}};
    }
  }
  std::vector<std::string> formats;
  if (cfg.output.json) formats.push_back("json");
  if (cfg.output.csv) formats.push_back("csv");
  cfg.echo["output"] = ordered_json{{"directory", cfg.output.directory}, {"formats", formats}};
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config: " + path);
  ordered_json j;
  try {
    j = ordered_json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

void override_output_dir(ExperimentConfig& cfg, const std::string& dir) {
  if (dir.empty()) throw ConfigError("--out must not be empty");
  cfg.output.directory = dir;
  cfg.echo["output"]["directory"] = dir;
}

void override_seed(ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  cfg.echo["seed"] = seed;
}

void override_format(ExperimentConfig& cfg, const std::string& format) {
  if (format == "json") {
    cfg.output.json = true;
    cfg.output.csv = false;
  } else if (format == "csv") {
    cfg.output.json = false;
    cfg.output.csv = true;
  } else {
    throw ConfigError("--format must be json or csv, got '" + format + "'");
  }
  cfg.echo["output"]["formats"] = {format};
}

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  if (cfg.mode != "experiment")
    throw ConfigError("config mode '" + cfg.mode + "' does not match the experiment subcommand");
  Timer timer;
  cfg.model.validate();
  const auto choice = cfg.surgery.c_choice;
  Row row = compute_row(cfg.model, cfg.seed, choice);
  const auto& p = row.bundle.pair;
  const auto opts = cfg.model.index_options();

  auto rx = defect_report(p.x, row.bundle.tests);
  auto rxt = defect_report(p.xt, row.bundle.tests);
  auto rdia = defect_report(row.dia, row.bundle.tests);
  auto rmir = defect_report(row.mir, row.bundle.tests);

  std::vector<double> grid = index::uniform_grid(cfg.surgery.t_grid);
  ordered_json trace = ordered_json::array();
  std::vector<std::string> trace_csv_rows;
  std::vector<int> trace_indices;
  for (double t : grid) {
    auto sample = surgery::homotopy_operator(p, t);
    double sa = linalg::hermiticity_defect(sample.Ft);
    // F_t is exactly Hermitian, so sigma(F_t^2 - 1) = |lambda(F_t)^2 - 1|;
    // one eigenvalues-only solve replaces a large product + SVD.
    Eigen::SelfAdjointEigenSolver<linalg::Matrix> es(sample.Ft, Eigen::EigenvaluesOnly);
    Eigen::VectorXd sqv = (es.eigenvalues().array().square() - 1.0).abs();
    std::sort(sqv.data(), sqv.data() + sqv.size(), std::greater<double>());
    char label[48];
    std::snprintf(label, sizeof label, "F_t at t=%.6f", t);
    auto gi = index::graded_index(sample.Ft, sample.grading, opts, label);
    trace_indices.push_back(gi.index);
    std::vector<double> sq_sigma;
    for (int k = 1; k <= 5 && k <= sqv.size(); ++k) sq_sigma.push_back(sqv[k - 1]);
    ordered_json trow;
    trow["t"] = t;
    trow["selfadjoint_defect"] = sa;
    trow["square_sigma"] = sq_sigma;
    trow["index"] = gi.index;
    trow["kernel_plus"] = gi.kernel_plus;
    trow["kernel_minus"] = gi.kernel_minus;
    trace.push_back(trow);
    std::ostringstream line;
    line << fmt_double(t) << ',' << fmt_double(sa);
    for (double s : sq_sigma) line << ',' << fmt_double(s);
    line << ',' << gi.index;
    trace_csv_rows.push_back(line.str());
  }

  double endpoint = surgery::endpoint_check(p);
  double ms_x = index::mckean_singer(row.bundle.dirac_x->D, p.x.grading(), 1.0);
  double ms_xt = index::mckean_singer(row.bundle.dirac_xt->D, p.xt.grading(), 1.0);

  std::vector<std::string> violations;
  gate_row(row, cfg.model, "experiment", violations);
  bool constant =
      std::all_of(trace_indices.begin(), trace_indices.end(),
                  [&](int v) { return v == trace_indices.front(); });
  if (!constant) violations.push_back("experiment: homotopy index trace is not constant");
  if (trace_indices.front() != row.ix.index + row.ixt.index)
    violations.push_back("experiment: trace at t=0 differs from ind(x) + ind(x~)");
  if (trace_indices.back() != row.idia.index + row.imir.index)
    violations.push_back("experiment: trace at t=pi/2 differs from ind(x<>x~) + ind(x~<>x)");
  if (!(endpoint <= kEndpointTol))
    violations.push_back("experiment: endpoint residual " + fmt_double(endpoint) +
                         " above 1e-12");

  ordered_json report;
  report["config_echo"] = cfg.echo;
  ordered_json defects;
  defects["x"] = defects_json(rx);
  defects["x_tilde"] = defects_json(rxt);
  defects["diamond"] = defects_json(rdia);
  defects["mirror"] = defects_json(rmir);
  defects["corner_x"] = profile_json(p.bx.corner_profile);
  defects["corner_x_tilde"] = profile_json(p.bt.corner_profile);
  defects["agreement"] = profile_json(row.bundle.agreement);
  defects["comm_bump"] = ordered_json{{"norm", row.comm_norm}, {"tail", row.comm_tail}};
  report["defects"] = defects;
  ordered_json indices = row_indices_json(row);
  indices["wall_heuristic_x"] = models::wall_heuristic(*row.bundle.dirac_x);
  indices["wall_heuristic_x_tilde"] = models::wall_heuristic(*row.bundle.dirac_xt);
  indices["mckean_singer_x"] = ms_x;
  indices["mckean_singer_x_tilde"] = ms_xt;
  report["indices"] = indices;
  report["residual"] = row.residual;
  report["homotopy_trace"] = trace;
  report["endpoint_residual"] = endpoint;
  report["checks"] =
      ordered_json{{"residual_zero", row.residual == 0},
                   {"endpoint_ok", endpoint <= kEndpointTol},
                   {"trace_constant", constant},
                   {"trace_matches_endpoints",
                    trace_indices.front() == row.ix.index + row.ixt.index &&
                        trace_indices.back() == row.idia.index + row.imir.index},
                   {"oracle_match", row.ix.index == row.bundle.oracle_x &&
                                        row.ixt.index == row.bundle.oracle_xt},
                   {"bulk_floor", row_bulk_min(row) >= cfg.model.thresholds.bulk_floor}};
  report["violations"] = violations;

  const std::string dir = cfg.output.directory;
  if (cfg.output.json) write_text_file(dir + "/report.json", report.dump(2) + "\n");
  if (cfg.output.csv) {
    std::ostringstream csv;
    csv << "t,selfadjoint_defect,square_sigma1,square_sigma2,square_sigma3,square_sigma4,"
           "square_sigma5,index\n";
    for (const auto& line : trace_csv_rows) csv << line << '\n';
    write_text_file(dir + "/homotopy_trace.csv", csv.str());
  }
  write_sidecar(dir, timer.seconds());

  return {violations.empty() ? 0 : 1, violations, report};
}

RunOutcome run_sweep(const ExperimentConfig& cfg) {
  if (cfg.mode != "sweep")
    throw ConfigError("config mode '" + cfg.mode + "' does not match the sweep subcommand");
  Timer timer;
  const auto choice = cfg.surgery.c_choice;
  std::vector<std::string> violations;
  ordered_json rows = ordered_json::array();
  std::ostringstream csv;

  if (cfg.sweep.refinement()) {
    std::vector<int> sites = cfg.sweep.sites;
    std::sort(sites.begin(), sites.end());  // report assembly ordered by N
    csv << "N,comm_bump_norm,comm_bump_tail,corner_sigma5,agreement_sigma5,"
           "ind_x,ind_xt,ind_diamond,ind_mirror,residual\n";
    struct Monitored {
      double comm_tail, corner_s5, agreement_s5;
    };
    std::vector<Monitored> monitored;
    for (int N : sites) {
      models::DomainWallConfig m = cfg.model;
      m.sites = N;
      m.validate();
      Row r = compute_row(m, cfg.seed, choice);
      double corner_s5 = r.bundle.pair.bx.corner_profile.sigma(5);
      double agree_s5 = r.bundle.agreement.sigma(5);
      monitored.push_back({r.comm_tail, corner_s5, agree_s5});
      gate_row(r, m, "N=" + std::to_string(N), violations);
      csv << N << ',' << fmt_double(r.comm_norm) << ',' << fmt_double(r.comm_tail) << ','
          << fmt_double(corner_s5) << ',' << fmt_double(agree_s5) << ',' << r.ix.index << ','
          << r.ixt.index << ',' << r.idia.index << ',' << r.imir.index << ',' << r.residual
          << '\n';
      ordered_json row;
      row["N"] = N;
      row["defects"] = ordered_json{{"comm_bump_norm", r.comm_norm},
                                    {"comm_bump_tail", r.comm_tail},
                                    {"corner_sigma5", corner_s5},
                                    {"agreement_sigma5", agree_s5}};
      row["indices"] = row_indices_json(r);
      row["residual"] = r.residual;
      rows.push_back(row);
    }
    auto check_monotone = [&](const char* name, auto pick) {
      for (std::size_t i = 1; i < monitored.size(); ++i) {
        double prev = pick(monitored[i - 1]), cur = pick(monitored[i]);
        if (cur > prev && cur > kNearZeroDefect)
          violations.push_back(std::string(name) + " is not monotone nonincreasing: " +
                               fmt_double(prev) + " -> " + fmt_double(cur) + " at N=" +
                               std::to_string(sites[i]));
      }
    };
    check_monotone("comm_bump_tail", [](const Monitored& m) { return m.comm_tail; });
    check_monotone("corner_sigma5", [](const Monitored& m) { return m.corner_s5; });
    check_monotone("agreement_sigma5", [](const Monitored& m) { return m.agreement_s5; });
  } else {
    csv << "pattern,ind_x,ind_xt,ind_diamond,ind_mirror,residual\n";
    for (const auto& pat : cfg.sweep.patterns) {
      models::DomainWallConfig m = cfg.model;
      m.mass = models::profile_from_pattern(pat[0], m.half_length);
      m.mass_tilde = models::profile_from_pattern(pat[1], m.half_length);
      m.validate();
      const std::string id = pat[0] + "/" + pat[1];
      Row r = compute_row(m, cfg.seed, choice);
      gate_row(r, m, id, violations);
      csv << id << ',' << r.ix.index << ',' << r.ixt.index << ',' << r.idia.index << ','
          << r.imir.index << ',' << r.residual << '\n';
      ordered_json row;
      row["pattern"] = id;
      row["indices"] = row_indices_json(r);
      row["residual"] = r.residual;
      rows.push_back(row);
    }
  }

  ordered_json report;
  report["config_echo"] = cfg.echo;
  report["rows"] = rows;
  report["pass"] = violations.empty();
  report["violations"] = violations;

  const std::string dir = cfg.output.directory;
  if (cfg.output.csv) write_text_file(dir + "/sweep.csv", csv.str());
  if (cfg.output.json) write_text_file(dir + "/sweep_report.json", report.dump(2) + "\n");
  write_sidecar(dir, timer.seconds());

  return {violations.empty() ? 0 : 1, violations, report};
}

}  // namespace fredlab::experiment
