#pragma once

// Scenario runner: turns parsed configuration into model objects, executes
// each scenario kind, evaluates its checks, and writes deterministic
// artifacts.  A scenario is one [scenario] section with a name, a kind
// (curvature, congruence, certificate, rigidity, flow, bransdicke), model
// keys, optional `run` entries selecting checkers, and `check` entries the
// report grades.  Scenarios are independent and run in parallel; artifact
// bytes depend only on the configuration.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "raylab/bransdicke.hpp"
#include "raylab/certificates.hpp"
#include "raylab/config.hpp"
#include "raylab/focusing.hpp"
#include "raylab/geometry.hpp"
#include "raylab/mcf.hpp"

namespace raylab {

struct CheckSpec {
  std::string name;
  std::vector<ConfigValue> args;
  int line = 0, col = 0;
};

struct ScenarioSpec {
  std::string name;
  std::string kind;
  ConfigSection section;
  std::vector<CheckSpec> checks;
};

struct ScenarioBuild {
  std::vector<ScenarioSpec> scenarios;
  std::vector<ParseError> errors;
  bool ok() const { return errors.empty(); }
};

struct CheckOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunReport {
  std::string scenario;
  bool ok = false;
  std::vector<CheckOutcome> checks;
  std::vector<std::string> artifacts;
  double wall_seconds = 0.0;
  std::string error;  // nonempty when the scenario aborted before grading
};

enum class ArtifactFormat { Csv, Records };

struct RunOptions {
  ArtifactFormat format = ArtifactFormat::Csv;
  int threads = 0;  // 0 = hardware concurrency
  std::optional<double> tol_override;
};

namespace runner_detail {

inline const std::vector<std::string>& kind_names() {
  static const std::vector<std::string> v{"curvature", "congruence", "certificate",
                                          "rigidity",  "flow",       "bransdicke"};
  return v;
}

inline const std::vector<std::string>& profile_names() {
  static const std::vector<std::string> v{"const", "power",    "exponential", "cosh", "cos",
                                          "sinh_pow", "poly", "sinusoid",    "zero"};
  return v;
}

inline const std::vector<std::string>& initial_data_names() {
  static const std::vector<std::string> v{"const", "sin4bump", "cos_mode"};
  return v;
}

inline const std::vector<std::string>& geometry_checker_names() {
  static const std::vector<std::string> v{"t11", "t12i", "t12ii", "rigidity"};
  return v;
}

inline const std::vector<std::string>& bd_checker_names() {
  static const std::vector<std::string> v{"t46", "t47i", "t47ii", "t48"};
  return v;
}

inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> v{
      "verdict_is",        "conclusion_is",   "hypothesis_pass",
      "hypothesis_fails",  "delta_is",        "t_bound_is",
      "t_bound_over_age",  "blowup_at",       "no_blowup",
      "violation_below",   "fd_max_below",    "sign_propagation_holds",
      "evolution_resid_below", "stop_is",     "residuals_below",
      "lambda_is",         "threshold_relation_holds"};
  return v;
}

inline bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

inline std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i];
  }
  return out;
}

// Expected argument counts for the profile registry (numbers after the name);
// -1 means one-or-more.
inline int profile_arity(const std::string& name) {
  if (name == "zero") return 0;
  if (name == "const" || name == "cosh" || name == "cos") return 1;
  if (name == "power" || name == "exponential" || name == "sinh_pow") return 2;
  if (name == "sinusoid") return 3;
  return -1;  // poly
}

struct RunnerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline RunnerError err(const std::string& msg) { return RunnerError(msg); }

inline double num_arg(const ConfigValue& v, const std::string& what) {
  if (!v.is_number()) throw err(what + " must be a number");
  return v.num;
}

inline std::string text_arg(const ConfigValue& v, const std::string& what) {
  if (!v.is_text()) throw err(what + " must be a name or string");
  return v.str;
}

inline bool bool_key(const ConfigSection& sec, const std::string& key, bool dflt) {
  const ConfigValue* v = sec.find(key);
  if (!v) return dflt;
  if (v->is_text() && v->str == "true") return true;
  if (v->is_text() && v->str == "false") return false;
  throw err("key '" + key + "' must be true or false");
}

inline double num_key(const ConfigSection& sec, const std::string& key, double dflt) {
  const ConfigValue* v = sec.find(key);
  if (!v) return dflt;
  return num_arg(*v, "key '" + key + "'");
}

inline double require_num_key(const ConfigSection& sec, const std::string& key) {
  const ConfigValue* v = sec.find(key);
  if (!v) throw err("missing required key '" + key + "'");
  return num_arg(*v, "key '" + key + "'");
}

inline Interval read_domain(const ConfigSection& sec, const std::string& key = "domain") {
  const ConfigValue* v = sec.find(key);
  if (!v) throw err("missing required key '" + key + "'");
  if (!v->is_list() || v->items.size() != 2)
    throw err("key '" + key + "' must be a two-number list [lo, hi]");
  Interval dom;
  dom.lo = num_arg(v->items[0], key + " lo");
  dom.hi = num_arg(v->items[1], key + " hi");
  dom.open_lo = bool_key(sec, "open_lo", false);
  dom.open_hi = bool_key(sec, "open_hi", false);
  if (!(dom.lo < dom.hi)) throw err("key '" + key + "' needs lo < hi");
  return dom;
}

inline ScalarProfile make_profile(const ConfigValue& v, const std::string& key, Interval dom) {
  if (!v.is_list() || v.items.empty() || !v.items[0].is_text())
    throw err("key '" + key + "' must be a list [profile_name, params...]");
  std::string name = v.items[0].str;
  std::vector<double> args;
  for (std::size_t i = 1; i < v.items.size(); ++i)
    args.push_back(num_arg(v.items[i], key + " parameter"));
  if (!contains(profile_names(), name))
    throw err("unknown profile '" + name + "' for key '" + key + "' (valid: " +
              join(profile_names()) + ")");
  int want = profile_arity(name);
  if (want >= 0 && static_cast<int>(args.size()) != want)
    throw err("profile '" + name + "' takes " + std::to_string(want) + " parameters");
  if (want < 0 && args.empty()) throw err("profile 'poly' needs at least one coefficient");

  if (name == "zero") return ScalarProfile::constant(0.0, dom);
  if (name == "const") return ScalarProfile::constant(args[0], dom);
  if (name == "power") return ScalarProfile::power(args[0], args[1], dom);
  if (name == "exponential") return ScalarProfile::exponential(args[0], args[1], dom);
  if (name == "cosh") return ScalarProfile::cosh_profile(args[0], dom);
  if (name == "cos") return ScalarProfile::cos_profile(args[0], dom);
  if (name == "sinh_pow") return ScalarProfile::sinh_pow(args[0], args[1], dom);
  if (name == "sinusoid") return ScalarProfile::sinusoid(args[0], args[1], args[2], dom);
  return ScalarProfile::polynomial(args, dom);
}

inline ScalarProfile read_profile(const ConfigSection& sec, const std::string& key,
                                  Interval dom) {
  const ConfigValue* v = sec.find(key);
  if (!v) throw err("missing required key '" + key + "'");
  return make_profile(*v, key, dom);
}

inline SpaceForm read_kappa(const ConfigSection& sec) {
  const ConfigValue* v = sec.find("kappa");
  if (!v) return SpaceForm::Flat;
  std::string s = text_arg(*v, "key 'kappa'");
  if (s == "flat") return SpaceForm::Flat;
  if (s == "spherical") return SpaceForm::Spherical;
  if (s == "hyperbolic") return SpaceForm::Hyperbolic;
  throw err("key 'kappa' must be flat, spherical, or hyperbolic");
}

inline WarpedSpacetime read_geometry(const ConfigSection& sec) {
  Interval dom = read_domain(sec);
  int n = static_cast<int>(num_key(sec, "n", 4));
  return WarpedSpacetime(n, read_kappa(sec), read_profile(sec, "a", dom), dom);
}

// Same classification sweep the scalar-tensor weight uses: declare the
// gradient causal only when the sampled sign is one-sided.
inline CausalDir classify_grad(const ScalarProfile& f) {
  double tol = 1e-12 * std::max(1.0, f.sampled_max_abs_d1());
  Interval in = f.domain().inner();
  bool le = true, ge = true;
  for (int i = 0; i <= 512; ++i) {
    double t = in.lo + (in.hi - in.lo) * i / 512.0;
    double d = f.d1(t);
    if (d > tol) le = false;
    if (d < -tol) ge = false;
  }
  return le ? CausalDir::Future : (ge ? CausalDir::Past : CausalDir::None);
}

// Weight from the `f` key (default zero), declared sup from `f_sup` (a
// number, `none`, or absent for the sampled max), causal character
// classified from the profile itself.
inline WeightProfile read_weight(const ConfigSection& sec, Interval dom) {
  const ConfigValue* v = sec.find("f");
  ScalarProfile f =
      v ? make_profile(*v, "f", dom) : ScalarProfile::constant(0.0, dom);
  std::optional<double> sup = f.sampled_max();
  if (const ConfigValue* sv = sec.find("f_sup")) {
    if (sv->is_text() && sv->str == "none")
      sup = std::nullopt;
    else
      sup = num_arg(*sv, "key 'f_sup'");
  }
  CausalDir gc = classify_grad(f);
  return WeightProfile(std::move(f), sup, gc);
}

// Tabular artifact: one row of doubles per record.  CSV writes a header and
// %.17g cells; the records format writes one JSON object per line.
struct Table {
  std::vector<std::string> cols;
  std::vector<std::vector<double>> rows;
};

inline std::string write_table(const Table& tb, const std::filesystem::path& dir,
                               const std::string& base, ArtifactFormat fmt) {
  std::filesystem::path path = dir / (base + (fmt == ArtifactFormat::Csv ? ".csv" : ".jsonl"));
  std::ofstream os(path);
  if (!os) throw err("cannot open artifact file " + path.string());
  char buf[64];
  if (fmt == ArtifactFormat::Csv) {
    for (std::size_t i = 0; i < tb.cols.size(); ++i)
      os << (i ? "," : "") << tb.cols[i];
    os << "\n";
    for (const auto& row : tb.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", row[i]);
        os << (i ? "," : "") << buf;
      }
      os << "\n";
    }
  } else {
    for (const auto& row : tb.rows) {
      nlohmann::ordered_json j;
      for (std::size_t i = 0; i < row.size() && i < tb.cols.size(); ++i) j[tb.cols[i]] = row[i];
      os << j.dump() << "\n";
    }
  }
  if (!os.good()) throw err("write failed for artifact file " + path.string());
  return path.string();
}

struct CertRun {
  std::string label;
  Certificate cert;
};

// Everything a scenario run produced that checks may reference.
struct ScenarioData {
  std::vector<CertRun> certs;
  std::optional<CongruenceTrajectory> traj;
  std::optional<FocusingBound> bound;
  std::optional<FlowResult> flow;
  std::optional<WarpedSpacetime> flow_M;
  std::optional<WeightProfile> flow_w;
  std::optional<double> fd_worst;
  std::optional<double> worst_rel_resid;
  std::optional<double> lambda_val;
  std::optional<double> threshold_gap;
  double t_S = std::numeric_limits<double>::quiet_NaN();
  double age_origin = 0.0;
};

inline std::string write_cert_artifact(const ScenarioData& d, const std::filesystem::path& dir,
                                       const std::string& scenario) {
  std::filesystem::path path = dir / (scenario + "_certificates.jsonl");
  std::ofstream os(path);
  if (!os) throw err("cannot open artifact file " + path.string());
  for (const auto& cr : d.certs) {
    nlohmann::ordered_json row;
    row["run"] = cr.label;
    nlohmann::ordered_json body = cr.cert.to_json();
    for (auto& [k, v] : body.items()) row[k] = v;
    os << row.dump() << "\n";
  }
  if (!os.good()) throw err("write failed for artifact file " + path.string());
  return path.string();
}

inline const Certificate& pick_cert(const ScenarioData& d, const std::string& target) {
  const Certificate* exact = nullptr;
  std::vector<const CertRun*> prefix;
  for (const auto& cr : d.certs) {
    if (cr.label == target) exact = &cr.cert;
    std::string head = cr.label.substr(0, cr.label.find('.'));
    if (head == target) prefix.push_back(&cr);
  }
  if (exact) return *exact;
  if (prefix.size() == 1) return prefix[0]->cert;
  std::vector<std::string> labels;
  for (const auto& cr : d.certs) labels.push_back(cr.label);
  if (prefix.size() > 1) throw err("check target '" + target + "' is ambiguous among: " + join(labels));
  throw err("check target '" + target + "' matches no run (have: " + join(labels) + ")");
}

// Cert-addressed checks take an optional leading run label; it may be left
// out only when the scenario has exactly one run.
inline const Certificate& cert_for_check(const ScenarioData& d,
                                         const std::vector<ConfigValue>& args,
                                         std::size_t needed, std::size_t& first) {
  if (d.certs.empty()) throw err("check needs a certificate run");
  if (args.size() > needed && args[0].is_text()) {
    first = 1;
    return pick_cert(d, args[0].str);
  }
  first = 0;
  if (d.certs.size() != 1)
    throw err("check must name its run when the scenario has several");
  return d.certs[0].cert;
}

inline void need_args(const std::vector<ConfigValue>& args, std::size_t first, std::size_t n,
                      const std::string& check) {
  if (args.size() != first + n)
    throw err("check '" + check + "' takes " + std::to_string(n) +
              " arguments after the optional run label");
}

inline double tol_of(const ConfigValue& v, const std::optional<double>& override_,
                     const std::string& check) {
  double tol = num_arg(v, "tolerance of '" + check + "'");
  return override_ ? *override_ : tol;
}

inline const char* stop_name(FlowStop s) {
  switch (s) {
    case FlowStop::SMaxReached: return "smax";
    case FlowStop::Steady: return "steady";
    case FlowStop::CausalViolation: return "causal_violation";
    case FlowStop::DomainEdge: return "domain_edge";
    default: return "max_steps";
  }
}

inline CheckOutcome evaluate_check(const CheckSpec& ck, const ScenarioData& d,
                                   const std::optional<double>& tol_override) {
  CheckOutcome out;
  out.name = ck.name;
  const auto& args = ck.args;

  if (ck.name == "verdict_is") {
    std::size_t i = 0;
    const Certificate& c = cert_for_check(d, args, 1, i);
    need_args(args, i, 1, ck.name);
    std::string want = text_arg(args[i], "expected verdict");
    out.pass = to_string(c.verdict) == want;
    out.detail = detail::strf("%s verdict %s (expected %s)", c.theorem.c_str(),
                              to_string(c.verdict), want.c_str());
    return out;
  }
  if (ck.name == "conclusion_is") {
    std::size_t i = 0;
    const Certificate& c = cert_for_check(d, args, 1, i);
    need_args(args, i, 1, ck.name);
    std::string want = text_arg(args[i], "expected conclusion");
    out.pass = c.conclusion == want;
    out.detail = "conclusion \"" + c.conclusion + "\" (expected \"" + want + "\")";
    return out;
  }
  if (ck.name == "hypothesis_pass" || ck.name == "hypothesis_fails") {
    std::size_t i = 0;
    const Certificate& c = cert_for_check(d, args, 1, i);
    need_args(args, i, 1, ck.name);
    std::string want = text_arg(args[i], "hypothesis name");
    bool expect_pass = ck.name == "hypothesis_pass";
    for (const auto& h : c.hypotheses) {
      if (h.name != want) continue;
      out.pass = h.pass == expect_pass;
      out.detail = want + (h.pass ? " passed" : " failed") + " (" + h.witness + ")";
      return out;
    }
    out.pass = false;
    out.detail = "no hypothesis named '" + want + "' on " + c.theorem;
    return out;
  }
  if (ck.name == "delta_is" || ck.name == "t_bound_is") {
    std::size_t i = 0;
    const Certificate& c = cert_for_check(d, args, 2, i);
    need_args(args, i, 2, ck.name);
    double want = num_arg(args[i], "expected value");
    double tol = tol_of(args[i + 1], tol_override, ck.name);
    double got = ck.name == "delta_is" ? c.delta : c.t_bound;
    out.pass = std::isfinite(got) && std::fabs(got - want) <= tol;
    out.detail = detail::strf("%s = %.12g (expected %.12g within %g)", ck.name == "delta_is" ?
                              "delta" : "t_bound", got, want, tol);
    return out;
  }
  if (ck.name == "t_bound_over_age") {
    std::size_t i = 0;
    const Certificate& c = cert_for_check(d, args, 2, i);
    need_args(args, i, 2, ck.name);
    double want = num_arg(args[i], "expected ratio");
    double tol = tol_of(args[i + 1], tol_override, ck.name);
    double age = std::fabs(d.t_S - d.age_origin);
    double ratio = c.t_bound / age;
    out.pass = std::isfinite(ratio) && std::fabs(ratio - want) <= tol;
    out.detail = detail::strf("t_bound/age = %.12g over age %.12g (expected %.12g within %g)",
                              ratio, age, want, tol);
    return out;
  }

  if (ck.name == "blowup_at") {
    if (!d.traj) throw err("check 'blowup_at' needs a congruence trajectory");
    need_args(args, 0, 2, ck.name);
    double want = num_arg(args[0], "expected blow-up time");
    double tol = tol_of(args[1], tol_override, ck.name);
    if (d.traj->status != TrajectoryStatus::BlowUp || !d.traj->blowup) {
      out.pass = false;
      out.detail = "no blow-up detected";
      return out;
    }
    double got = d.traj->blowup->t_blow;
    out.pass = std::fabs(got - want) <= tol;
    out.detail = detail::strf("blow-up at t = %.12g (expected %.12g within %g)", got, want, tol);
    return out;
  }
  if (ck.name == "no_blowup") {
    if (!d.traj) throw err("check 'no_blowup' needs a congruence trajectory");
    need_args(args, 0, 0, ck.name);
    out.pass = d.traj->status == TrajectoryStatus::ReachedTmax ||
               d.traj->status == TrajectoryStatus::ReachedDomainEdge;
    out.detail = out.pass ? "trajectory stayed finite" : "trajectory blew up or lost the rhs";
    return out;
  }
  if (ck.name == "violation_below") {
    if (!d.traj) throw err("check 'violation_below' needs a congruence trajectory");
    if (!d.bound) throw err("check 'violation_below' needs a 'bound' key on the scenario");
    need_args(args, 0, 1, ck.name);
    double tol = tol_of(args[0], tol_override, ck.name);
    ComparisonReport rep = check_comparison(*d.traj, *d.bound, tol);
    out.pass = rep.passed;
    out.detail = detail::strf("max violation %.3g at t = %.9g over %zu samples (tol %g)",
                              rep.max_violation, rep.argmax_t, rep.n_checked, tol);
    return out;
  }

  if (ck.name == "fd_max_below") {
    if (!d.fd_worst) throw err("check 'fd_max_below' needs a curvature scenario");
    need_args(args, 0, 1, ck.name);
    double tol = tol_of(args[0], tol_override, ck.name);
    out.pass = *d.fd_worst <= tol;
    out.detail = detail::strf("worst cross-check discrepancy %.3g (tol %g)", *d.fd_worst, tol);
    return out;
  }

  if (ck.name == "sign_propagation_holds") {
    if (!d.flow) throw err("check 'sign_propagation_holds' needs a flow scenario");
    need_args(args, 0, 0, ck.name);
    SignPropagationReport rep = verify_sign_propagation(*d.flow);
    out.pass = rep.holds;
    out.detail = detail::strf("%s (worst recorded max = %.3g)", rep.note.c_str(),
                              rep.worst_max_phi);
    return out;
  }
  if (ck.name == "evolution_resid_below") {
    if (!d.flow || !d.flow_M) throw err("check 'evolution_resid_below' needs a flow scenario");
    need_args(args, 0, 1, ck.name);
    double tol = tol_of(args[0], tol_override, ck.name);
    std::size_t mid = d.flow->records.size() / 2;
    mid = std::max<std::size_t>(1, std::min(mid, d.flow->records.size() - 2));
    PhiEvolutionReport rep = verify_phi_evolution(*d.flow_M, *d.flow_w, *d.flow, mid);
    out.pass = rep.max_resid <= tol;
    out.detail = detail::strf("max residual %.3g at s = %.6g (tol %g)", rep.max_resid, rep.at_s,
                              tol);
    return out;
  }
  if (ck.name == "stop_is") {
    if (!d.flow) throw err("check 'stop_is' needs a flow scenario");
    need_args(args, 0, 1, ck.name);
    std::string want = text_arg(args[0], "expected stop reason");
    out.pass = stop_name(d.flow->stop) == want;
    out.detail = detail::strf("flow stopped: %s (expected %s)", stop_name(d.flow->stop),
                              want.c_str());
    return out;
  }

  if (ck.name == "residuals_below") {
    if (!d.worst_rel_resid) throw err("check 'residuals_below' needs a bransdicke scenario");
    need_args(args, 0, 1, ck.name);
    double tol = tol_of(args[0], tol_override, ck.name);
    out.pass = *d.worst_rel_resid <= tol;
    out.detail = detail::strf("worst relative field residual %.3g (tol %g)", *d.worst_rel_resid,
                              tol);
    return out;
  }
  if (ck.name == "lambda_is") {
    if (!d.lambda_val) throw err("check 'lambda_is' needs a bransdicke scenario");
    need_args(args, 0, 2, ck.name);
    double want = num_arg(args[0], "expected value");
    double tol = tol_of(args[1], tol_override, ck.name);
    out.pass = std::fabs(*d.lambda_val - want) <= tol;
    out.detail = detail::strf("Lambda = %.12g (expected %.12g within %g)", *d.lambda_val, want,
                              tol);
    return out;
  }
  if (ck.name == "threshold_relation_holds") {
    if (!d.threshold_gap) throw err("check 'threshold_relation_holds' needs a bransdicke scenario");
    need_args(args, 0, 1, ck.name);
    double tol = tol_of(args[0], tol_override, ck.name);
    out.pass = *d.threshold_gap <= tol;
    out.detail = detail::strf("frame threshold gap %.3g (tol %g)", *d.threshold_gap, tol);
    return out;
  }

  throw err("unknown check '" + ck.name + "'");
}

// ---- kind executors ----

inline void common_surface_keys(const ConfigSection& sec, SurfaceData& S) {
  S.cauchy = bool_key(sec, "cauchy", true);
  S.compact = bool_key(sec, "compact", true);
  if (const ConfigValue* v = sec.find("phi0")) S.phi0 = num_arg(*v, "key 'phi0'");
  if (const ConfigValue* v = sec.find("phi1")) S.phi1 = num_arg(*v, "key 'phi1'");
}

inline Direction read_direction(const ConfigValue* v, Direction dflt) {
  if (!v) return dflt;
  std::string s = text_arg(*v, "direction");
  if (s == "future") return Direction::Future;
  if (s == "past") return Direction::Past;
  throw err("direction must be future or past");
}

inline CertOptions read_cert_options(const ConfigSection& sec) {
  CertOptions opts;
  if (const ConfigValue* v = sec.find("k_scope")) {
    std::string s = text_arg(*v, "key 'k_scope'");
    if (s == "global")
      opts.k_scope = KScope::Global;
    else if (s == "causal")
      opts.k_scope = KScope::Causal;
    else
      throw err("key 'k_scope' must be global or causal");
  }
  return opts;
}

inline ScenarioData run_certificate(const ScenarioSpec& spec,
                                    const std::filesystem::path& out_dir,
                                    std::vector<std::string>& artifacts) {
  const ConfigSection& sec = spec.section;
  WarpedSpacetime M = read_geometry(sec);
  WeightProfile w = read_weight(sec, M.tdomain);
  double t_S = require_num_key(sec, "t_S");
  bool complete = bool_key(sec, "complete", true);
  CertOptions opts = read_cert_options(sec);

  SurfaceData S = SurfaceData::homogeneous(M, w, t_S);
  common_surface_keys(sec, S);

  ScenarioData data;
  data.t_S = t_S;
  data.age_origin = num_key(sec, "age_origin", 0.0);

  std::vector<const ConfigValue*> runs = sec.find_all("run");
  if (spec.kind == "rigidity") {
    Direction dir = read_direction(sec.find("direction"), Direction::Future);
    Certificate c = classify_rigidity(M, w, S, dir, complete, opts);
    data.certs.push_back({std::string("rigidity.") + to_string(dir), c});
  } else {
    if (runs.empty()) throw err("certificate scenario needs at least one 'run' entry");
    for (const ConfigValue* rv : runs) {
      if (!rv->is_list() || rv->items.empty() || !rv->items[0].is_text())
        throw err("'run' must be a list [checker, direction]");
      std::string checker = rv->items[0].str;
      Direction dir = read_direction(rv->items.size() > 1 ? &rv->items[1] : nullptr,
                                     Direction::Future);
      Certificate c;
      if (checker == "t11")
        c = check_t11(M, w, S, dir, opts);
      else if (checker == "t12i")
        c = check_t12(M, w, S, dir, T12Case::I, opts);
      else if (checker == "t12ii")
        c = check_t12(M, w, S, dir, T12Case::II, opts);
      else if (checker == "rigidity")
        c = classify_rigidity(M, w, S, dir, complete, opts);
      else
        throw err("unknown checker '" + checker + "' (valid: " +
                  join(geometry_checker_names()) + ")");
      data.certs.push_back({checker + "." + to_string(dir), c});
    }
  }
  artifacts.push_back(write_cert_artifact(data, out_dir, spec.name));
  return data;
}

inline ScenarioData run_curvature(const ScenarioSpec& spec, const std::filesystem::path& out_dir,
                                  ArtifactFormat fmt, std::vector<std::string>& artifacts) {
  const ConfigSection& sec = spec.section;
  WarpedSpacetime M = read_geometry(sec);
  WeightProfile w = read_weight(sec, M.tdomain);
  int samples = static_cast<int>(num_key(sec, "samples", 129));
  if (samples < 2) throw err("key 'samples' must be at least 2");

  Interval in = M.tdomain.inner();
  Table tb;
  tb.cols = {"t", "ric_nn", "ric_ee", "H", "H_f"};
  for (int i = 0; i < samples; ++i) {
    double t = in.lo + (in.hi - in.lo) * i / (samples - 1);
    tb.rows.push_back({t, ricci_normal(M, t), ricci_spatial(M, t), mean_curvature(M, t),
                       f_mean_curvature(M, w, t)});
  }
  artifacts.push_back(write_table(tb, out_dir, spec.name + "_curvature", fmt));

  // cross-check samples stay clear of the edges so the stencil fits
  double len = in.hi - in.lo;
  double h = num_key(sec, "fd_h", 1e-3 * std::max(1.0, len / 4.0));
  double beta = num_key(sec, "beta", 0.3);
  double lo = in.lo + 2.0 * h + 0.02 * len, hi = in.hi - 2.0 * h - 0.02 * len;
  if (!(lo < hi)) throw err("domain too short for the finite-difference cross-check");
  double worst = 0.0;
  for (int i = 0; i <= 64; ++i) {
    double t = lo + (hi - lo) * i / 64.0;
    worst = std::max(worst, fd_validate(M, w, t, beta, h));
  }
  ScenarioData data;
  data.fd_worst = worst;
  return data;
}

inline ScenarioData run_congruence(const ScenarioSpec& spec, const std::filesystem::path& out_dir,
                                   ArtifactFormat fmt, std::vector<std::string>& artifacts) {
  const ConfigSection& sec = spec.section;
  WarpedSpacetime M = read_geometry(sec);
  WeightProfile w = read_weight(sec, M.tdomain);
  double t0 = require_num_key(sec, "t0");
  double tmax = num_key(sec, "tmax", M.tdomain.hi);
  std::optional<double> H0;
  if (const ConfigValue* v = sec.find("H0")) H0 = num_arg(*v, "key 'H0'");

  RayOptions ropts;
  ropts.fixed_step = num_key(sec, "fixed_step", 0.0);

  ScenarioData data;
  data.traj = integrate_raychaudhuri(M, w, t0, tmax, H0, ropts);

  if (const ConfigValue* bv = sec.find("bound")) {
    if (!bv->is_list() || bv->items.empty() || !bv->items[0].is_text())
      throw err("key 'bound' must be [l21, delta, k, f0] or [l22, delta]");
    std::string kindb = bv->items[0].str;
    if (kindb == "l21") {
      if (bv->items.size() != 4) throw err("bound l21 takes delta, k, f0");
      data.bound = lemma21_deadline(num_arg(bv->items[1], "delta"), num_arg(bv->items[2], "k"),
                                    num_arg(bv->items[3], "f0"), M.n);
    } else if (kindb == "l22") {
      if (bv->items.size() != 2) throw err("bound l22 takes delta");
      FocusingBound b = lemma22_deadline(num_arg(bv->items[1], "delta"));
      double k = w.sup_bound ? *w.sup_bound : w.f.sampled_max();
      data.bound = with_weight(b, w, k, M.n, t0);
    } else {
      throw err("unknown bound kind '" + kindb + "' (valid: l21, l22)");
    }
  }

  Table tb;
  tb.cols = {"t", "H", "H_f", "x", "f", "fprime"};
  for (const auto& s : data.traj->samples)
    tb.rows.push_back({s.t, s.H, s.H_f, s.x, s.f, s.fprime});
  artifacts.push_back(write_table(tb, out_dir, spec.name + "_trajectory", fmt));
  return data;
}

inline ScenarioData run_flow(const ScenarioSpec& spec, const std::filesystem::path& out_dir,
                             ArtifactFormat fmt, std::vector<std::string>& artifacts) {
  const ConfigSection& sec = spec.section;
  WarpedSpacetime M = read_geometry(sec);
  WeightProfile w = read_weight(sec, M.tdomain);
  int d = static_cast<int>(num_key(sec, "d", 1));
  int n_pts = static_cast<int>(num_key(sec, "n_pts", 128));

  const ConfigValue* uv = sec.find("u0");
  if (!uv || !uv->is_list() || uv->items.empty() || !uv->items[0].is_text())
    throw err("flow scenario needs u0 = [const|sin4bump|cos_mode, params...]");
  std::string uname = uv->items[0].str;
  std::vector<double> uargs;
  for (std::size_t i = 1; i < uv->items.size(); ++i)
    uargs.push_back(num_arg(uv->items[i], "u0 parameter"));

  GraphHypersurface g0;
  if (uname == "const") {
    if (uargs.size() != 1) throw err("u0 const takes one value");
    g0 = GraphHypersurface::constant(d, n_pts, uargs[0]);
  } else if (uname == "sin4bump") {
    if (uargs.size() != 1) throw err("u0 sin4bump takes the amplitude");
    double amp = uargs[0];
    g0 = GraphHypersurface::from_function(d, n_pts, [amp, d](double x, double y) {
      auto s4 = [](double z) { double s = std::sin(z / 2.0); return s * s * s * s; };
      return d == 1 ? amp * s4(x) : amp * s4(x) * s4(y);
    });
  } else if (uname == "cos_mode") {
    if (uargs.size() != 2) throw err("u0 cos_mode takes amplitude and mode number");
    double amp = uargs[0], m = uargs[1];
    g0 = GraphHypersurface::from_function(d, n_pts, [amp, m, d](double x, double y) {
      return d == 1 ? amp * std::cos(m * x) : amp * std::cos(m * x) * std::cos(m * y);
    });
  } else {
    throw err("unknown initial data '" + uname + "' (valid: " + join(initial_data_names()) +
              ")");
  }

  FlowOptions fopts;
  fopts.s_max = require_num_key(sec, "s_max");
  fopts.c = num_key(sec, "c", 0.0);
  fopts.record_every = static_cast<int>(num_key(sec, "record_every", 16));
  fopts.cfl = num_key(sec, "cfl", 0.2);

  ScenarioData data;
  data.flow = flow_run(M, w, g0, fopts);
  data.flow_M = M;
  data.flow_w = w;

  Table tb;
  tb.cols = {"s", "min_phi", "max_phi", "max_speed"};
  for (const auto& r : data.flow->records)
    tb.rows.push_back({r.s, r.min_phi, r.max_phi, r.max_speed});
  artifacts.push_back(write_table(tb, out_dir, spec.name + "_flow", fmt));
  return data;
}

inline BDModel read_bd_model(const ConfigSection& sec) {
  std::string source = "synthesize";
  if (const ConfigValue* v = sec.find("source")) source = text_arg(*v, "key 'source'");

  Interval vdom{1e-300, 1e300, false, false};
  if (sec.find("V_domain")) vdom = read_domain(sec, "V_domain");
  ScalarProfile V = sec.find("V") ? make_profile(*sec.find("V"), "V", vdom)
                                  : ScalarProfile::constant(0.0, vdom);

  if (source == "synthesize") {
    BDSynthesisSpec ss;
    ss.omega = num_key(sec, "omega", ss.omega);
    ss.kappa = read_kappa(sec);
    ss.V = V;
    ss.w_fluid = num_key(sec, "w_fluid", ss.w_fluid);
    ss.rho0 = num_key(sec, "rho0", ss.rho0);
    ss.t0 = num_key(sec, "t0", ss.t0);
    ss.a0 = num_key(sec, "a0", ss.a0);
    ss.phi0 = num_key(sec, "phi0_anchor", ss.phi0);
    ss.dphi0 = num_key(sec, "dphi0_anchor", ss.dphi0);
    ss.expanding = bool_key(sec, "expanding", true);
    ss.span_past = num_key(sec, "span_past", ss.span_past);
    ss.span_future = num_key(sec, "span_future", ss.span_future);
    ss.drift_tol = num_key(sec, "drift_tol", ss.drift_tol);
    return synthesize_bd_flrw(ss);
  }
  if (source == "profiles") {
    WarpedSpacetime geom = read_geometry(sec);
    ScalarProfile phi = read_profile(sec, "phi", geom.tdomain);
    ScalarProfile rho = sec.find("rho") ? make_profile(*sec.find("rho"), "rho", geom.tdomain)
                                        : ScalarProfile::constant(0.0, geom.tdomain);
    ScalarProfile p = sec.find("p") ? make_profile(*sec.find("p"), "p", geom.tdomain)
                                    : ScalarProfile::constant(0.0, geom.tdomain);
    return BDModel(require_num_key(sec, "omega"), std::move(geom), std::move(phi), std::move(V),
                   std::move(rho), std::move(p));
  }
  throw err("key 'source' must be synthesize or profiles");
}

inline ScenarioData run_bransdicke(const ScenarioSpec& spec, const std::filesystem::path& out_dir,
                                   ArtifactFormat fmt, std::vector<std::string>& artifacts) {
  const ConfigSection& sec = spec.section;
  BDModel m = read_bd_model(sec);
  CertOptions opts = read_cert_options(sec);

  ScenarioData data;
  data.age_origin = num_key(sec, "age_origin", 0.0);

  Interval in = m.geom.tdomain.inner();
  double worst = 0.0;
  const int ns = 512;
  for (int i = 0; i <= ns; ++i) {
    double t = in.lo + (in.hi - in.lo) * i / ns;
    worst = std::max(worst, field_residuals(m, t).worst_rel());
  }
  data.worst_rel_resid = worst;

  double t_ref = 0.5 * (in.lo + in.hi);
  if (const ConfigValue* v = sec.find("t_S")) t_ref = num_arg(*v, "key 't_S'");
  data.lambda_val = potential_functionals(m, -std::log(m.phi.value(t_ref))).Lambda;

  Table tb;
  tb.cols = {"t", "a", "phi", "rel42", "rel43", "rel47", "rel48"};
  for (int i = 0; i < 129; ++i) {
    double t = in.lo + (in.hi - in.lo) * i / 128.0;
    FieldResiduals r = field_residuals(m, t);
    tb.rows.push_back({t, m.geom.a.value(t), m.phi.value(t), r.rel42(), r.rel43(), r.rel47(),
                       r.rel48()});
  }
  artifacts.push_back(write_table(tb, out_dir, spec.name + "_residuals", fmt));

  std::vector<const ConfigValue*> runs = sec.find_all("run");
  bool wants_certs = !runs.empty();
  bool wants_frames = false;
  for (const auto& ck : spec.checks)
    if (ck.name == "threshold_relation_holds") wants_frames = true;

  if (wants_certs || wants_frames || sec.find("t_S")) {
    double t_S = require_num_key(sec, "t_S");
    data.t_S = t_S;
    WeightProfile w = weight_from_scalar(m.phi);
    SurfaceData S = SurfaceData::homogeneous(m.geom, w, t_S);
    common_surface_keys(sec, S);

    for (const ConfigValue* rv : runs) {
      if (!rv->is_list() || rv->items.empty() || !rv->items[0].is_text())
        throw err("'run' must be a list [checker]");
      std::string checker = rv->items[0].str;
      Certificate c;
      if (checker == "t46")
        c = check_t46(m, S, opts);
      else if (checker == "t47i")
        c = check_t47(m, S, T12Case::I, opts);
      else if (checker == "t47ii")
        c = check_t47(m, S, T12Case::II, opts);
      else if (checker == "t48")
        c = check_t48(m, S, opts);
      else
        throw err("unknown checker '" + checker + "' (valid: " + join(bd_checker_names()) + ")");
      data.certs.push_back({checker, c});
    }
    if (wants_certs) artifacts.push_back(write_cert_artifact(data, out_dir, spec.name));

    if (wants_frames) {
      FramePair fp = einstein_frame(m);
      double tau = fp.time_map.value(t_S);
      double lhs = mean_curvature(fp.einstein, tau) * std::sqrt(m.phi.value(t_S));
      double rhs = mean_curvature(m.geom, t_S) + 1.5 * m.phi.d1(t_S) / m.phi.value(t_S);
      data.threshold_gap = std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs));
    }
  }
  return data;
}

}  // namespace runner_detail

// Parse + semantic validation.  Unknown kinds, profiles, checkers, and check
// names become positioned errors; well-formed sections become ScenarioSpecs.
inline ScenarioBuild build_scenarios(const ParseResult& parsed) {
  using namespace runner_detail;
  ScenarioBuild out;
  out.errors = parsed.errors;

  for (const auto& sec : parsed.sections) {
    if (sec.name != "scenario") {
      out.errors.push_back({sec.line, sec.col, "unknown section '" + sec.name +
                                                   "' (expected [scenario])"});
      continue;
    }
    ScenarioSpec spec;
    spec.section = sec;

    const ConfigValue* nv = sec.find("name");
    if (!nv || !nv->is_text()) {
      out.errors.push_back({sec.line, sec.col, "scenario needs a 'name' key"});
      continue;
    }
    spec.name = nv->str;
    for (const auto& prior : out.scenarios)
      if (prior.name == spec.name)
        out.errors.push_back({nv->line, nv->col, "duplicate scenario name '" + spec.name + "'"});

    const ConfigValue* kv = sec.find("kind");
    if (!kv || !kv->is_text() || !contains(kind_names(), kv->str)) {
      out.errors.push_back({kv ? kv->line : sec.line, kv ? kv->col : sec.col,
                            "scenario '" + spec.name + "' needs kind in: " + join(kind_names())});
      continue;
    }
    spec.kind = kv->str;

    // profile-valued keys are validated by name and arity up front
    for (const auto& entry : sec.entries) {
      static const std::vector<std::string> prof_keys{"a", "f", "phi", "V", "rho", "p"};
      if (contains(prof_keys, entry.key)) {
        const ConfigValue& v = entry.value;
        if (!v.is_list() || v.items.empty() || !v.items[0].is_text()) {
          out.errors.push_back({entry.line, entry.col,
                                "key '" + entry.key + "' must be [profile_name, params...]"});
          continue;
        }
        if (!contains(profile_names(), v.items[0].str)) {
          out.errors.push_back({v.items[0].line, v.items[0].col,
                                "unknown profile '" + v.items[0].str +
                                    "' (valid: " + join(profile_names()) + ")"});
          continue;
        }
        int want = profile_arity(v.items[0].str);
        int got = static_cast<int>(v.items.size()) - 1;
        if ((want >= 0 && got != want) || (want < 0 && got < 1))
          out.errors.push_back({v.line, v.col,
                                "profile '" + v.items[0].str + "' has the wrong parameter count"});
      }
      if (entry.key == "u0") {
        const ConfigValue& v = entry.value;
        if (!v.is_list() || v.items.empty() || !v.items[0].is_text() ||
            !contains(initial_data_names(), v.items[0].str))
          out.errors.push_back({v.line, v.col, "key 'u0' must name initial data in: " +
                                                   join(initial_data_names())});
      }
      if (entry.key == "run") {
        const ConfigValue& v = entry.value;
        const auto& valid = spec.kind == "bransdicke" ? bd_checker_names()
                                                      : geometry_checker_names();
        if (!v.is_list() || v.items.empty() || !v.items[0].is_text() ||
            !contains(valid, v.items[0].str))
          out.errors.push_back({v.line, v.col,
                                "'run' must name a checker in: " + join(valid)});
      }
      if (entry.key == "check") {
        const ConfigValue& v = entry.value;
        if (!v.is_list() || v.items.empty() || !v.items[0].is_text()) {
          out.errors.push_back({entry.line, entry.col, "'check' must be [check_name, args...]"});
          continue;
        }
        if (!contains(check_names(), v.items[0].str)) {
          out.errors.push_back({v.items[0].line, v.items[0].col,
                                "unknown check '" + v.items[0].str +
                                    "' (valid: " + join(check_names()) + ")"});
          continue;
        }
        CheckSpec ck;
        ck.name = v.items[0].str;
        ck.args.assign(v.items.begin() + 1, v.items.end());
        ck.line = entry.line;
        ck.col = entry.col;
        spec.checks.push_back(std::move(ck));
      }
    }

    // required keys per kind, reported against the section header
    auto need = [&](const char* key) {
      if (!sec.find(key))
        out.errors.push_back({sec.line, sec.col, "scenario '" + spec.name +
                                                     "' (kind " + spec.kind +
                                                     ") needs key '" + key + "'"});
    };
    if (spec.kind != "bransdicke") {
      need("domain");
      need("a");
    }
    if (spec.kind == "certificate" || spec.kind == "rigidity") need("t_S");
    if (spec.kind == "certificate" && sec.find_all("run").empty())
      out.errors.push_back({sec.line, sec.col,
                            "scenario '" + spec.name + "' needs at least one 'run' entry"});
    if (spec.kind == "congruence") need("t0");
    if (spec.kind == "flow") {
      need("u0");
      need("s_max");
    }
    if (spec.kind == "bransdicke") {
      std::string source = "synthesize";
      if (const ConfigValue* v = sec.find("source"); v && v->is_text()) source = v->str;
      if (source == "profiles") {
        need("domain");
        need("a");
        need("phi");
        need("omega");
      } else if (source != "synthesize") {
        out.errors.push_back({sec.line, sec.col,
                              "scenario '" + spec.name +
                                  "': key 'source' must be synthesize or profiles"});
      }
      if (!sec.find_all("run").empty()) need("t_S");
    }

    out.scenarios.push_back(std::move(spec));
  }
  return out;
}

inline ScenarioBuild load_scenarios(std::string_view config_text) {
  return build_scenarios(parse_config_text(config_text));
}

// Execute one scenario; exceptions become the report's error field.
inline RunReport execute_scenario(const ScenarioSpec& spec, const std::filesystem::path& out_dir,
                                  const RunOptions& ropts) {
  using namespace runner_detail;
  RunReport rep;
  rep.scenario = spec.name;
  auto t0 = std::chrono::steady_clock::now();
  try {
    ScenarioData data;
    if (spec.kind == "curvature")
      data = run_curvature(spec, out_dir, ropts.format, rep.artifacts);
    else if (spec.kind == "congruence")
      data = run_congruence(spec, out_dir, ropts.format, rep.artifacts);
    else if (spec.kind == "certificate" || spec.kind == "rigidity")
      data = run_certificate(spec, out_dir, rep.artifacts);
    else if (spec.kind == "flow")
      data = run_flow(spec, out_dir, ropts.format, rep.artifacts);
    else if (spec.kind == "bransdicke")
      data = run_bransdicke(spec, out_dir, ropts.format, rep.artifacts);
    else
      throw err("unknown scenario kind '" + spec.kind + "'");

    rep.ok = true;
    for (const auto& ck : spec.checks) {
      rep.checks.push_back(evaluate_check(ck, data, ropts.tol_override));
      if (!rep.checks.back().pass) rep.ok = false;
    }
  } catch (const std::exception& e) {
    rep.ok = false;
    rep.error = e.what();
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// Run all scenarios against an output directory.  The directory must be
// creatable and writable; that is verified before any scenario starts.
// Scenarios execute in parallel and reports come back in input order.
inline std::vector<RunReport> run_scenarios(const std::vector<ScenarioSpec>& specs,
                                            const std::string& out_dir,
                                            const RunOptions& ropts = {}) {
  namespace fs = std::filesystem;
  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out_dir + ": " +
                                   ec.message());
  {
    fs::path probe = dir / ".write_probe";
    std::ofstream os(probe);
    os << "ok";
    bool good = os.good();
    os.close();
    fs::remove(probe, ec);
    if (!good) throw std::runtime_error("output directory " + out_dir + " is not writable");
  }

  std::vector<RunReport> reports(specs.size());
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t nthreads = ropts.threads > 0 ? static_cast<std::size_t>(ropts.threads)
                                           : std::max(1u, hw);
  nthreads = std::min(nthreads, specs.size());
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < specs.size(); ++i)
      reports[i] = execute_scenario(specs[i], dir, ropts);
    return reports;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < specs.size(); i = next.fetch_add(1))
      reports[i] = execute_scenario(specs[i], dir, ropts);
  };
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return reports;
}

inline nlohmann::ordered_json report_to_json(const RunReport& rep) {
  nlohmann::ordered_json j;
  j["scenario"] = rep.scenario;
  j["ok"] = rep.ok;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : rep.checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["detail"] = c.detail;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["artifacts"] = rep.artifacts;
  j["wall_seconds"] = rep.wall_seconds;
  if (!rep.error.empty()) j["error"] = rep.error;
  return j;
}

// 0 all checks pass, 1 a check failed, 3 a scenario aborted; config errors
// map to 2 at the call site, before any run starts.
inline int exit_code_for(const std::vector<RunReport>& reports) {
  int code = 0;
  for (const auto& r : reports) {
    if (!r.error.empty()) return 3;
    if (!r.ok) code = 1;
  }
  return code;
}

// Built-in scenario library, in the same configuration grammar files use.
inline const char* builtin_config_text() {
  return R"CFG(# Built-in scenario library.

# Static spherical universe with an unbounded exponential weight: the
# weighted energy condition holds and the slice contracts, but no finite
# sup for f exists, so none of the singularity checkers may fire.
[scenario]
name = einstein_static_footnote
kind = certificate
n = 4
kappa = spherical
domain = [-2, 2]
a = [const, 1]
f = [exponential, 1, 1]
f_sup = none
t_S = 0
run = [t11, future]
run = [t12i, future]
run = [t12ii, future]
check = [verdict_is, t11.future, FAILS]
check = [verdict_is, t12i.future, FAILS]
check = [verdict_is, t12ii.future, FAILS]

# Flat static product: every singularity checker fails and the rigidity
# classifier recognises the product splitting.
[scenario]
name = minkowski_product
kind = certificate
n = 4
kappa = flat
domain = [-2, 2]
a = [const, 1]
f = [zero]
t_S = 0
complete = true
run = [t11, future]
run = [t12i, future]
run = [t12ii, future]
run = [rigidity, future]
check = [verdict_is, t11.future, FAILS]
check = [verdict_is, t12i.future, FAILS]
check = [verdict_is, t12ii.future, FAILS]
check = [verdict_is, rigidity.future, RIGID]
check = [conclusion_is, rigidity.future, "splits (product)"]

# Matter-dominated flat expansion a = t^(2/3): the past-directed certificate
# fires and its proper-time bound is exactly 3/2 of the slice age.
[scenario]
name = einstein_de_sitter_past
kind = certificate
n = 4
kappa = flat
domain = [0, 4]
open_lo = true
a = [power, 1, 0.66666666666666663]
f = [zero]
t_S = 1
age_origin = 0
run = [t11, past]
check = [verdict_is, FIRES]
check = [t_bound_over_age, 1.5, 1e-6]

# Matter plus positive cosmological constant, a = sinh(3t/2)^(2/3): the
# relaxed energy bound applies and the bound-to-age ratio is again 3/2.
[scenario]
name = lcdm_past_bound
kind = certificate
n = 4
kappa = flat
domain = [0, 3]
open_lo = true
a = [sinh_pow, 0.66666666666666663, 1.5]
f = [zero]
t_S = 1
age_origin = 0
run = [t12ii, past]
check = [verdict_is, FIRES]
check = [t_bound_over_age, 1.5, 1e-6]

# Contracting exponential warp with constant weight: the borderline case
# H_f = -(n-1) everywhere, classified as the warped splitting.
[scenario]
name = desitter_rigidity_warped
kind = rigidity
n = 4
kappa = flat
domain = [-2, 2]
a = [exponential, 1, -1]
f = [const, 0.25]
t_S = 0
direction = future
complete = true
check = [verdict_is, RIGID]
check = [conclusion_is, "splits (warped e^{-2t})"]

# Static spherical product with a constant weight: the product splitting,
# two-sided across a Cauchy slice.
[scenario]
name = product_rigidity
kind = rigidity
n = 4
kappa = spherical
domain = [-2, 2]
a = [const, 1]
f = [const, 0.3]
t_S = 0
direction = future
complete = true
check = [verdict_is, RIGID]
check = [conclusion_is, "splits (product)"]

# Graph flow over the circle: a one-signed speed field must stay one-signed,
# strictly, once the flow starts.
[scenario]
name = mcf_sign_propagation
kind = flow
n = 2
kappa = flat
domain = [-1, 1]
a = [cosh, 2]
f = [zero]
d = 1
n_pts = 128
u0 = [sin4bump, -0.001]
c = 0
s_max = 0.02
record_every = 8
check = [sign_propagation_holds]

# Synthesized dust cosmology at omega = 10: the scalar-tensor certificate
# fires on an expanding slice and the synthesized window satisfies all four
# field equations to high relative accuracy.
[scenario]
name = bd_dust_t46
kind = bransdicke
source = synthesize
omega = 10
w_fluid = 0
rho0 = 1
phi0_anchor = 1
dphi0_anchor = 0
span_past = 0.35
span_future = 1
t_S = 0.25
run = [t46]
check = [verdict_is, t46, FIRES]
check = [residuals_below, 1e-8]

# Fluid tuned so the scalar-tensor energy condition holds while the strong
# energy condition fails: the direct checker fires, the conformal one does
# not, and the two frames agree on the expansion threshold.
[scenario]
name = bd_frame_comparison_t48
kind = bransdicke
source = synthesize
omega = 0.5
w_fluid = -0.5
rho0 = 1
phi0_anchor = 1
dphi0_anchor = 0
span_past = 0.5
span_future = 0.5
t_S = 0.25
run = [t46]
run = [t48]
check = [verdict_is, t46, FIRES]
check = [verdict_is, t48, FAILS]
check = [threshold_relation_holds, 1e-8]
)CFG";
}

}  // namespace raylab
