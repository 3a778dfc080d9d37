// Python face of the laboratory: the symbolic verifier, term reduction, and
// the numerical relative-index experiment in one call each.  Errors derive
// from std::runtime_error and surface as RuntimeError.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "fredlab/experiment.hpp"
#include "fredlab/index.hpp"
#include "fredlab/models.hpp"
#include "fredlab/surgery.hpp"
#include "fredlab/symbolic.hpp"

namespace py = pybind11;
using namespace fredlab;

namespace {

py::dict certificate_dict(const symbolic::Certificate& cert) {
  py::dict d;
  d["name"] = cert.name;
  d["pass"] = cert.pass;
  d["entries"] = static_cast<int>(cert.entries.size());
  py::list failed;
  for (const auto& e : cert.entries)
    if (!e.pass) failed.append(py::make_tuple(e.row, e.col, e.normal_form));
  d["failed"] = failed;
  d["adjoint_symmetric"] = cert.adjoint_symmetric;
  d["endpoint_match"] = cert.endpoint_match;
  d["total_steps"] = cert.total_steps;
  d["note"] = cert.note;
  return d;
}

py::dict verify(const std::vector<std::string>& drop_axioms) {
  symbolic::VerifyOptions opts;
  opts.drop_axioms = drop_axioms;
  auto prop = symbolic::verify_proposition(opts);
  auto hom = symbolic::verify_homotopy(opts);
  py::dict d;
  d["pass"] = prop.pass && hom.pass;
  d["proposition"] = certificate_dict(prop);
  d["homotopy"] = certificate_dict(hom);
  return d;
}

std::string reduce_term(const std::string& text, const std::vector<std::string>& drop_axioms) {
  auto rs = symbolic::RewriteSystem::standard();
  for (const auto& id : drop_axioms) rs.drop(id);
  return rs.reduce(symbolic::parse_term(text)).str();
}

py::dict toy_summary(int n1, int n0, int n2, int nt1, int nt2, std::uint64_t seed) {
  auto toy = models::toy_exact_pair(n1, n0, n2, nt1, nt2, seed);
  auto rep = defect_report(toy.pair.x, toy.tests);
  py::dict d;
  d["max_defect"] = rep.max_defect();
  d["endpoint_residual"] = surgery::endpoint_check(toy.pair);
  d["index"] =
      index::graded_index(surgery::diamond(toy.pair), index::IndexOptions{}, "toy diamond").index;
  return d;
}

py::dict relative_index(const std::string& pattern, const std::string& pattern_tilde, int sites,
                        std::uint64_t seed) {
  models::DomainWallConfig cfg;
  cfg.sites = sites;
  cfg.mass = models::profile_from_pattern(pattern, cfg.half_length);
  cfg.mass_tilde = models::profile_from_pattern(pattern_tilde, cfg.half_length);
  cfg.validate();
  auto b = models::build_agreeing_pair(cfg, seed);
  auto opts = cfg.index_options();
  py::dict d;
  d["ind_x"] = index::graded_index(b.pair.x, opts, "F").index;
  d["ind_xt"] = index::graded_index(b.pair.xt, opts, "F~").index;
  d["ind_diamond"] = index::graded_index(surgery::diamond(b.pair), opts, "F<>F~").index;
  d["ind_mirror"] =
      index::graded_index(surgery::diamond(b.pair.swapped()), opts, "F~<>F").index;
  d["residual"] = (d["ind_diamond"].cast<int>() - d["ind_x"].cast<int>()) -
                  (d["ind_xt"].cast<int>() - d["ind_mirror"].cast<int>());
  d["endpoint_residual"] = surgery::endpoint_check(b.pair);
  return d;
}

std::string load_config_echo(const std::string& path) {
  return experiment::load_config(path).echo.dump(2);
}

}  // namespace

PYBIND11_MODULE(fredlab, m) {
  m.doc() = "cut-and-paste index surgery on finite-dimensional operator models";

  m.def("verify", &verify, py::arg("drop_axioms") = std::vector<std::string>{},
        "machine-check the block-calculus identities; optionally ablate axioms");
  m.def("reduce_term", &reduce_term, py::arg("text"),
        py::arg("drop_axioms") = std::vector<std::string>{},
        "normal form of a *-polynomial in the block generators");
  m.def("toy_summary", &toy_summary, py::arg("n1"), py::arg("n0"), py::arg("n2"), py::arg("nt1"),
        py::arg("nt2"), py::arg("seed") = 1,
        "defects, endpoint residual, and diamond index of an exact toy pair");
  m.def("relative_index", &relative_index, py::arg("pattern"), py::arg("pattern_tilde"),
        py::arg("sites") = 100, py::arg("seed") = 1,
        "indices of a domain-wall pair, its diamonds, and the residual");
  m.def("load_config_echo", &load_config_echo, py::arg("path"),
        "validate a JSON config and return the normalized echo");
}
