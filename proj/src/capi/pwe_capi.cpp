#include "pwe/pwe.h"

#include <new>
#include <string>
#include <utility>

#include "core/common.hpp"
#include "core/config.hpp"
#include "core/driver.hpp"
#include "core/dual.hpp"
#include "core/solvers.hpp"

namespace {

thread_local std::string g_last_error = "no error";

// Translate exceptions at the library boundary; nothing may escape extern "C".
template <typename Fn>
pwe_status guarded(Fn&& fn) {
  try {
    fn();
    return PWE_OK;
  } catch (const pwe::UsageError& e) {
    g_last_error = e.what();
    return PWE_ERR_USAGE;
  } catch (const pwe::SizeError& e) {
    g_last_error = e.what();
    return PWE_ERR_SIZE;
  } catch (const pwe::ConfigError& e) {
    g_last_error = e.what();
    return PWE_ERR_CONFIG;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PWE_ERR_NOMEM;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PWE_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return PWE_ERR_INTERNAL;
  }
}

pwe_status require(bool ok, const char* message) {
  if (ok) return PWE_OK;
  g_last_error = message;
  return PWE_ERR_USAGE;
}

}  // namespace

struct pwe_pointset {
  pwe::PointSet ps;
};

struct pwe_solution {
  pwe::Solution sol;
};

struct pwe_report {
  pwe::DriverResult result;
};

extern "C" {

const char* pwe_last_error(void) { return g_last_error.c_str(); }

pwe_status pwe_pointset_create(int dim, pwe_pointset** out) {
  if (pwe_status s = require(out != nullptr, "pwe_pointset_create: out is NULL")) return s;
  return guarded([&] { *out = new pwe_pointset{pwe::PointSet(dim)}; });
}

pwe_status pwe_pointset_push(pwe_pointset* ps, const double* coords) {
  if (pwe_status s = require(ps && coords, "pwe_pointset_push: NULL argument")) return s;
  return guarded([&] { ps->ps.push(coords); });
}

pwe_status pwe_pointset_parse(const char* text, pwe_pointset** out) {
  if (pwe_status s = require(text && out, "pwe_pointset_parse: NULL argument")) return s;
  return guarded([&] { *out = new pwe_pointset{pwe::read_pointset_text(text)}; });
}

pwe_status pwe_pointset_size(const pwe_pointset* ps, long* out) {
  if (pwe_status s = require(ps && out, "pwe_pointset_size: NULL argument")) return s;
  *out = ps->ps.size();
  return PWE_OK;
}

pwe_status pwe_pointset_dim(const pwe_pointset* ps, int* out) {
  if (pwe_status s = require(ps && out, "pwe_pointset_dim: NULL argument")) return s;
  *out = ps->ps.dim;
  return PWE_OK;
}

void pwe_pointset_free(pwe_pointset* ps) { delete ps; }

pwe_status pwe_solve(const pwe_pointset* ps, const char* functional, const char* variant,
                     const char* mode, const char* factor, double p, pwe_solution** out) {
  if (pwe_status s = require(ps && functional && variant && mode && factor && out,
                             "pwe_solve: NULL argument"))
    return s;
  return guarded([&] {
    pwe::Instance inst;
    inst.points = ps->ps;
    inst.box = pwe::unit_box(ps->ps.dim == 0 ? 1 : ps->ps.dim);
    inst.p = p;

    const std::string f = functional;
    if (f == "mm")
      inst.functional = pwe::Functional::MM;
    else if (f == "mst")
      inst.functional = pwe::Functional::MST;
    else if (f == "tsp")
      inst.functional = pwe::Functional::TSP;
    else
      throw pwe::UsageError("unknown functional '" + f + "' (expected mm|mst|tsp)");

    const std::string v = variant;
    if (v == "plain")
      inst.variant = pwe::Variant::Plain;
    else if (v == "dual")
      inst.variant = pwe::Variant::Dual;
    else
      throw pwe::UsageError("unknown variant '" + v + "' (expected plain|dual)");

    const std::string m = mode;
    if (m == "exact")
      inst.mode = pwe::Mode::Exact;
    else if (m == "heuristic")
      inst.mode = pwe::Mode::Heuristic;
    else
      throw pwe::UsageError("unknown mode '" + m + "' (expected exact|heuristic)");

    const std::string fc = factor;
    if (fc == "auto")
      inst.factor = pwe::BoundaryFactor::Auto;
    else if (fc == "full")
      inst.factor = pwe::BoundaryFactor::Full;
    else if (fc == "half")
      inst.factor = pwe::BoundaryFactor::Half;
    else
      throw pwe::UsageError("unknown factor '" + fc + "' (expected auto|full|half)");

    *out = new pwe_solution{pwe::solve(inst)};
  });
}

pwe_status pwe_solution_value(const pwe_solution* s, double* out) {
  if (pwe_status st = require(s && out, "pwe_solution_value: NULL argument")) return st;
  *out = s->sol.value;
  return PWE_OK;
}

pwe_status pwe_solution_certified(const pwe_solution* s, int* out) {
  if (pwe_status st = require(s && out, "pwe_solution_certified: NULL argument")) return st;
  *out = s->sol.certified ? 1 : 0;
  return PWE_OK;
}

pwe_status pwe_solution_edge_count(const pwe_solution* s, long* out) {
  if (pwe_status st = require(s && out, "pwe_solution_edge_count: NULL argument")) return st;
  *out = static_cast<long>(s->sol.edges.size());
  return PWE_OK;
}

pwe_status pwe_solution_edge(const pwe_solution* s, long idx, long* a, long* b) {
  if (pwe_status st = require(s && a && b, "pwe_solution_edge: NULL argument")) return st;
  if (pwe_status st = require(idx >= 0 && idx < static_cast<long>(s->sol.edges.size()),
                              "pwe_solution_edge: index out of range"))
    return st;
  *a = s->sol.edges[static_cast<size_t>(idx)].a;
  *b = s->sol.edges[static_cast<size_t>(idx)].b;
  return PWE_OK;
}

pwe_status pwe_solution_boundary(const pwe_solution* s, long* n_b, double* l_b) {
  if (pwe_status st = require(s && n_b && l_b, "pwe_solution_boundary: NULL argument"))
    return st;
  return guarded([&] {
    const pwe::BoundaryDiagnostics d = pwe::boundary_diagnostics(s->sol);
    *n_b = d.n_b;
    *l_b = d.l_b;
  });
}

void pwe_solution_free(pwe_solution* s) { delete s; }

pwe_status pwe_run_experiment(const char* request_text, pwe_report** out) {
  if (pwe_status s = require(request_text && out, "pwe_run_experiment: NULL argument"))
    return s;
  return guarded([&] {
    const pwe::ConfigDoc doc = pwe::read_config_text(request_text);
    *out = new pwe_report{pwe::run_request(doc)};
  });
}

pwe_status pwe_report_exit_code(const pwe_report* r, int* out) {
  if (pwe_status s = require(r && out, "pwe_report_exit_code: NULL argument")) return s;
  *out = r->result.exit_code;
  return PWE_OK;
}

pwe_status pwe_report_text(const pwe_report* r, const char** out) {
  if (pwe_status s = require(r && out, "pwe_report_text: NULL argument")) return s;
  *out = r->result.text.c_str();
  return PWE_OK;
}

pwe_status pwe_report_artifact_count(const pwe_report* r, long* out) {
  if (pwe_status s = require(r && out, "pwe_report_artifact_count: NULL argument")) return s;
  *out = static_cast<long>(r->result.artifacts.size());
  return PWE_OK;
}

pwe_status pwe_report_artifact(const pwe_report* r, long idx, const char** name,
                               const char** data) {
  if (pwe_status s = require(r && name && data, "pwe_report_artifact: NULL argument"))
    return s;
  if (pwe_status s = require(idx >= 0 && idx < static_cast<long>(r->result.artifacts.size()),
                             "pwe_report_artifact: index out of range"))
    return s;
  const pwe::DriverArtifact& a = r->result.artifacts[static_cast<size_t>(idx)];
  *name = a.name.c_str();
  *data = a.content.c_str();
  return PWE_OK;
}

void pwe_report_free(pwe_report* r) { delete r; }

}  // extern "C"
