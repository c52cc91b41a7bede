#include "cli_app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "expansion_io.hpp"
#include "jtheta/jtheta.h"

namespace jtcli {
namespace {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

// Error that ends the run with exit code 2.
struct RunError : std::runtime_error {
  RunError(std::string c, const std::string& msg) : std::runtime_error(msg), code(std::move(c)) {}
  std::string code;
};

void check(jt_status s) {
  if (s != JT_OK) throw RunError(jt_status_name(s), jt_last_error_message());
}

struct FormDel { void operator()(jt_form* p) const { jt_form_destroy(p); } };
struct SpecDel { void operator()(jt_spec* p) const { jt_spec_destroy(p); } };
struct ExpDel { void operator()(jt_expansion* p) const { jt_expansion_destroy(p); } };
struct RepDel { void operator()(jt_report* p) const { jt_report_destroy(p); } };
using FormPtr = std::unique_ptr<jt_form, FormDel>;
using SpecPtr = std::unique_ptr<jt_spec, SpecDel>;
using ExpPtr = std::unique_ptr<jt_expansion, ExpDel>;
using RepPtr = std::unique_ptr<jt_report, RepDel>;

struct Options {
  std::string config_path;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
  Format format = Format::kJsonRecords;
  bool quiet = false;
};

const std::set<std::string> kTopKeys = {"schema_version", "command", "form", "directions",
                                        "v", "k", "params"};

const std::set<std::string>& params_for(const std::string& command) {
  static const std::map<std::string, std::set<std::string>> table = {
      {"coeffs", {"lmax", "series", "derivative"}},
      {"eval", {"series", "tau", "z", "p", "ell", "eps"}},
      {"verify-modular", {"series", "gammas", "points", "eps", "tolerance"}},
      {"verify-elliptic", {"series", "lambda", "mu", "points", "eps", "tolerance"}},
      {"verify-translation", {"lambda", "mu", "points", "eps", "tolerance"}},
      {"verify-generating", {"gammas", "T", "points", "eps", "tolerance"}},
      {"verify-congruence", {"p", "ell", "gammas", "points", "eps", "tolerance"}},
      {"verify-support", {"lmax", "series", "tolerance"}},
      {"quasi-depth", {"smax", "tmax", "max_modular_degree", "fit_tol", "eps", "tolerance"}},
  };
  const auto it = table.find(command);
  if (it == table.end()) throw RunError("SchemaError", "unknown command '" + command + "'");
  return it->second;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw RunError("SchemaError", where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key))
      throw RunError("SchemaError", "unknown key '" + key + "' in " + where);
}

template <class T>
T get_as(const json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw RunError("SchemaError", what + " has the wrong type");
  }
}

const json& require_key(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw RunError("SchemaError", "missing '" + key + "' in " + where);
  return obj.at(key);
}

jt_complex parse_complex(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw RunError("SchemaError", what + " must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<jt_complex> parse_complex_vec(const json& j, const std::string& what) {
  if (!j.is_array()) throw RunError("SchemaError", what + " must be a list of [re, im] pairs");
  std::vector<jt_complex> out;
  for (const auto& e : j) out.push_back(parse_complex(e, what));
  return out;
}

std::vector<std::int64_t> parse_int_vec(const json& j, const std::string& what) {
  if (!j.is_array()) throw RunError("SchemaError", what + " must be a list of integers");
  std::vector<std::int64_t> out;
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw RunError("SchemaError", what + " must be integers");
    out.push_back(e.get<std::int64_t>());
  }
  return out;
}

json complex_json(jt_complex c) { return json::array({c.re, c.im}); }

struct Points {
  std::vector<jt_complex> taus;
  std::vector<jt_complex> zs;
  std::size_t count() const { return taus.size(); }
};

// The whole parsed run; `resolved` is the config with defaults filled in.
struct Run {
  json resolved;
  std::string command;
  FormPtr form;
  SpecPtr spec;
  std::size_t n = 0;
  std::size_t f = 0;
  json params;
  double tolerance = 1e-8;
  double eps = 1e-10;
};

Points resolve_points(Run& run, const Options& opt) {
  json spec = run.params.contains("points") ? run.params.at("points") : json::object();
  Points pts;
  if (spec.is_array()) {
    for (const auto& p : spec) {
      reject_unknown(p, {"tau", "z"}, "points entry");
      pts.taus.push_back(parse_complex(require_key(p, "tau", "points entry"), "tau"));
      const auto z = parse_complex_vec(require_key(p, "z", "points entry"), "z");
      if (z.size() != run.n) throw RunError("DimensionMismatch", "point z has wrong length");
      pts.zs.insert(pts.zs.end(), z.begin(), z.end());
    }
    return pts;
  }
  reject_unknown(spec, {"count", "seed"}, "points");
  const auto count = spec.contains("count") ? get_as<std::size_t>(spec["count"], "points.count") : 8;
  std::uint64_t seed = spec.contains("seed") ? get_as<std::uint64_t>(spec["seed"], "points.seed") : 1;
  if (opt.seed) seed = *opt.seed;
  run.resolved["params"]["points"] = json{{"count", count}, {"seed", seed}};
  pts.taus.resize(count);
  pts.zs.resize(count * run.n);
  check(jt_default_points(run.n, count, seed, pts.taus.data(), pts.zs.data()));
  return pts;
}

std::vector<jt_gamma> resolve_gammas(const Run& run) {
  const auto& g = require_key(run.params, "gammas", "params");
  if (!g.is_array() || g.empty()) throw RunError("SchemaError", "gammas must be a non-empty list");
  std::vector<jt_gamma> out;
  for (const auto& e : g) {
    const auto v = parse_int_vec(e, "gamma");
    if (v.size() != 4) throw RunError("SchemaError", "gamma must be [a, b, c, d]");
    out.push_back({v[0], v[1], v[2], v[3]});
  }
  return out;
}

std::vector<std::int64_t> resolve_shift(const Run& run, const std::string& key) {
  if (!run.params.contains(key)) return std::vector<std::int64_t>(run.n, 0);
  auto v = parse_int_vec(run.params.at(key), key);
  if (v.size() != run.n) throw RunError("DimensionMismatch", key + " must have length n");
  return v;
}

std::string series_param(Run& run, std::initializer_list<const char*> allowed) {
  std::string s = run.params.contains("series") ? get_as<std::string>(run.params["series"], "series")
                                                : std::string(*allowed.begin());
  if (std::find(allowed.begin(), allowed.end(), s) == allowed.end())
    throw RunError("SchemaError", "unsupported series '" + s + "'");
  run.resolved["params"]["series"] = s;
  return s;
}

Run parse_config(const json& cfg, const Options& opt) {
  reject_unknown(cfg, kTopKeys, "config");
  const auto version = get_as<int>(require_key(cfg, "schema_version", "config"), "schema_version");
  if (version != kSchemaVersion)
    throw RunError("SchemaError", "unsupported schema_version " + std::to_string(version));
  Run run;
  run.resolved = cfg;
  run.command = get_as<std::string>(require_key(cfg, "command", "config"), "command");
  run.params = cfg.contains("params") ? cfg.at("params") : json::object();
  reject_unknown(run.params, params_for(run.command), "params");
  if (!run.resolved.contains("params")) run.resolved["params"] = json::object();

  const auto& form = require_key(cfg, "form", "config");
  reject_unknown(form, {"matrix"}, "form");
  const auto& rows = require_key(form, "matrix", "form");
  if (!rows.is_array()) throw RunError("SchemaError", "form.matrix must be a list of rows");
  run.f = rows.size();
  std::vector<std::int64_t> flat;
  for (const auto& row : rows) {
    const auto r = parse_int_vec(row, "form.matrix row");
    if (r.size() != run.f) throw RunError("NotSymmetric", "form.matrix must be square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  jt_form* fp = nullptr;
  check(jt_form_create(flat.data(), run.f, &fp));
  run.form.reset(fp);

  const auto& dirs = require_key(cfg, "directions", "config");
  if (!dirs.is_array()) throw RunError("SchemaError", "directions must be a list");
  run.n = dirs.size();
  std::vector<std::int64_t> hflat;
  for (const auto& h : dirs) {
    const auto hv = parse_int_vec(h, "direction");
    if (hv.size() != run.f) throw RunError("DimensionMismatch", "direction length must equal f");
    hflat.insert(hflat.end(), hv.begin(), hv.end());
  }
  const auto v = parse_complex_vec(require_key(cfg, "v", "config"), "v");
  if (v.size() != run.f) throw RunError("DimensionMismatch", "v length must equal f");
  const auto& kj = require_key(cfg, "k", "config");
  if (!kj.is_number_unsigned()) throw RunError("SchemaError", "k must be a non-negative integer");
  const auto k = kj.get<unsigned>();
  jt_spec* sp = nullptr;
  check(jt_spec_create(run.form.get(), hflat.data(), run.n, v.data(), k, &sp));
  run.spec.reset(sp);

  const double default_tol = run.command == "quasi-depth" ? 1e-6
                             : run.command == "verify-support" ? 0.0
                                                               : 1e-8;
  run.tolerance = run.params.contains("tolerance")
                      ? get_as<double>(run.params["tolerance"], "tolerance")
                      : default_tol;
  if (opt.tolerance) run.tolerance = *opt.tolerance;
  run.eps = run.params.contains("eps") ? get_as<double>(run.params["eps"], "eps") : 1e-10;
  if (params_for(run.command).contains("tolerance"))
    run.resolved["params"]["tolerance"] = run.tolerance;
  if (params_for(run.command).contains("eps")) run.resolved["params"]["eps"] = run.eps;
  return run;
}

struct Outcome {
  bool has_verdict = false;
  bool passed = true;
  double max_residual = 0.0;
  json truncation = json::object();
  json extra = json::object();
};

class Emitter {
 public:
  Emitter(std::ostream& out, Format format) : out_(out), format_(format) {}

  void record(const json& rec) {
    if (format_ == Format::kJsonRecords) out_ << rec.dump() << '\n';
  }

  void sample_row(const json& context, const jt_sample& s) {
    if (format_ == Format::kJsonRecords) {
      json rec;
      rec["record"] = "sample";
      for (const auto& [k, v] : context.items()) rec[k] = v;
      rec["point"] = s.point_index;
      if (s.degree >= 0) rec["degree"] = s.degree;
      rec["lhs"] = complex_json(s.lhs);
      rec["rhs"] = complex_json(s.rhs);
      rec["abs_residual"] = s.abs_residual;
      rec["rel_residual"] = s.rel_residual;
      out_ << rec.dump() << '\n';
      return;
    }
    if (!csv_header_) {
      out_ << "identity,context,point,degree,lhs_re,lhs_im,rhs_re,rhs_im,abs_residual,rel_residual\n";
      csv_header_ = true;
    }
    std::string ctx = context.contains("gamma") ? context["gamma"].dump() : "";
    std::replace(ctx.begin(), ctx.end(), ',', ' ');
    out_ << context.value("identity", "") << ',' << ctx << ',' << s.point_index << ','
         << s.degree << ',' << format_double(s.lhs.re) << ',' << format_double(s.lhs.im) << ','
         << format_double(s.rhs.re) << ',' << format_double(s.rhs.im) << ','
         << format_double(s.abs_residual) << ',' << format_double(s.rel_residual) << '\n';
  }

  Format format() const { return format_; }
  std::ostream& stream() { return out_; }

 private:
  std::ostream& out_;
  Format format_;
  bool csv_header_ = false;
};

json truncation_json(const jt_report* r) {
  double eps = 0.0;
  std::int64_t radius = 0;
  std::size_t points = 0, evals = 0;
  check(jt_report_truncation(r, &eps, &radius, &points, &evals));
  return json{{"eval_eps", eps}, {"max_radius", radius}, {"max_points", points},
              {"evaluations", evals}};
}

void merge_truncation(json& into, const json& t) {
  if (into.empty()) {
    into = t;
    return;
  }
  into["max_radius"] = std::max(into["max_radius"].get<std::int64_t>(), t["max_radius"].get<std::int64_t>());
  into["max_points"] = std::max(into["max_points"].get<std::size_t>(), t["max_points"].get<std::size_t>());
  into["evaluations"] = into["evaluations"].get<std::size_t>() + t["evaluations"].get<std::size_t>();
}

void emit_report(Emitter& em, const jt_report* r, json context, Outcome& outcome) {
  context["identity"] = jt_report_identity(r);
  const std::size_t count = jt_report_sample_count(r);
  for (std::size_t i = 0; i < count; ++i) {
    jt_sample s{};
    check(jt_report_sample(r, i, &s, nullptr, 0));
    em.sample_row(context, s);
  }
  const json trunc = truncation_json(r);
  json rec;
  rec["record"] = "report";
  for (const auto& [k, v] : context.items()) rec[k] = v;
  rec["passed"] = static_cast<bool>(jt_report_passed(r));
  rec["max_residual"] = jt_report_max_residual(r);
  rec["tolerance"] = jt_report_tolerance(r);
  rec["samples"] = count;
  rec["truncation"] = trunc;
  em.record(rec);
  outcome.has_verdict = true;
  outcome.passed = outcome.passed && jt_report_passed(r);
  outcome.max_residual = std::max(outcome.max_residual, jt_report_max_residual(r));
  merge_truncation(outcome.truncation, trunc);
}

jt_verify_options verify_options(const Run& run) { return {run.tolerance, run.eps}; }

Outcome cmd_coeffs(Run& run, Emitter& em) {
  const auto lmax = get_as<std::int64_t>(require_key(run.params, "lmax", "params"), "lmax");
  const auto series = series_param(run, {"theta", "psi"});
  jt_expansion* raw = nullptr;
  check(series == "theta" ? jt_theta_coeffs(run.spec.get(), lmax, &raw)
                          : jt_psi_coeffs(run.spec.get(), lmax, &raw));
  ExpPtr e(raw);
  if (run.params.contains("derivative")) {
    const auto i = get_as<std::size_t>(run.params["derivative"], "derivative");
    jt_expansion* d = nullptr;
    check(jt_expansion_z_derivative(e.get(), i, &d));
    e.reset(d);
  }
  write_expansion(em.stream(), e.get(), em.format());
  Outcome o;
  o.extra["entries"] = jt_expansion_size(e.get());
  return o;
}

Outcome cmd_eval(Run& run, Emitter& em) {
  const auto series = series_param(run, {"theta", "psi", "congruence", "e2"});
  const jt_complex tau = parse_complex(require_key(run.params, "tau", "params"), "tau");
  jt_complex value{};
  std::int64_t radius = 0;
  std::size_t points = 0;
  if (series == "e2") {
    check(jt_e2_eval(tau, run.eps, &value));
  } else {
    const auto z = parse_complex_vec(require_key(run.params, "z", "params"), "z");
    if (z.size() != run.n) throw RunError("DimensionMismatch", "z must have length n");
    if (series == "theta") {
      check(jt_theta_eval(run.spec.get(), tau, z.data(), run.eps, &value, &radius, &points));
    } else if (series == "psi") {
      check(jt_psi_eval(run.spec.get(), tau, z.data(), run.eps, &value, &radius, &points));
    } else {
      const auto p = parse_int_vec(require_key(run.params, "p", "params"), "p");
      const auto ell = parse_complex_vec(require_key(run.params, "ell", "params"), "ell");
      if (p.size() != run.f || ell.size() != run.f)
        throw RunError("DimensionMismatch", "p and ell must have length f");
      check(jt_congruence_theta_eval(run.spec.get(), p.data(), ell.data(),
                                     run.resolved["k"].get<unsigned>(), tau, z.data(), run.eps,
                                     &value, &radius, &points));
    }
  }
  json rec;
  rec["record"] = "value";
  rec["series"] = series;
  rec["value"] = complex_json(value);
  em.record(rec);
  if (em.format() == Format::kCsv)
    em.stream() << "series,re,im\n" << series << ',' << format_double(value.re) << ','
                << format_double(value.im) << '\n';
  Outcome o;
  o.truncation = json{{"eval_eps", run.eps}, {"max_radius", radius}, {"max_points", points},
                      {"evaluations", 1}};
  o.extra["value"] = complex_json(value);
  return o;
}

Outcome cmd_verify(Run& run, Emitter& em, const Options& opt) {
  Outcome outcome;
  const auto opts = verify_options(run);
  jt_report* r = nullptr;
  auto run_one = [&](jt_status status, json context) {
    RepPtr owned(r);
    r = nullptr;
    check(status);
    emit_report(em, owned.get(), std::move(context), outcome);
  };
  if (run.command == "verify-support") {
    const auto lmax = get_as<std::int64_t>(require_key(run.params, "lmax", "params"), "lmax");
    const auto series = series_param(run, {"theta", "psi"});
    jt_expansion* raw = nullptr;
    check(series == "theta" ? jt_theta_coeffs(run.spec.get(), lmax, &raw)
                            : jt_psi_coeffs(run.spec.get(), lmax, &raw));
    ExpPtr e(raw);
    std::vector<std::int64_t> gram(run.n * run.n);
    check(jt_spec_gram(run.spec.get(), gram.data()));
    check(jt_verify_support(e.get(), gram.data(), run.tolerance, &r));
    RepPtr rep(r);
    // Support samples carry (l, nu) keys instead of sample points.
    std::size_t boundary = 0;
    for (std::size_t i = 0; i < jt_report_sample_count(rep.get()); ++i) {
      jt_sample s{};
      std::vector<std::int64_t> nu(run.n);
      check(jt_report_sample(rep.get(), i, &s, nu.data(), nu.size()));
      if (s.lhs.re == s.rhs.re) ++boundary;
      json rec{{"record", "support"}, {"l", s.l}, {"nu", nu}, {"four_l", s.lhs.re},
               {"index_norm", s.rhs.re}, {"violation", s.abs_residual}};
      em.record(rec);
      if (em.format() == Format::kCsv) {
        if (i == 0) {
          em.stream() << 'l';
          for (std::size_t j = 1; j <= run.n; ++j) em.stream() << ",nu_" << j;
          em.stream() << ",four_l,index_norm,violation\n";
        }
        em.stream() << s.l;
        for (auto x : nu) em.stream() << ',' << x;
        em.stream() << ',' << format_double(s.lhs.re) << ',' << format_double(s.rhs.re) << ','
                    << format_double(s.abs_residual) << '\n';
      }
    }
    json rec{{"record", "report"}, {"identity", jt_report_identity(rep.get())},
             {"passed", static_cast<bool>(jt_report_passed(rep.get()))},
             {"max_residual", jt_report_max_residual(rep.get())},
             {"tolerance", jt_report_tolerance(rep.get())},
             {"samples", jt_report_sample_count(rep.get())}, {"boundary_entries", boundary}};
    em.record(rec);
    outcome.has_verdict = true;
    outcome.passed = jt_report_passed(rep.get());
    outcome.max_residual = jt_report_max_residual(rep.get());
    outcome.extra["boundary_entries"] = boundary;
    return outcome;
  }

  const Points pts = resolve_points(run, opt);
  if (run.command == "verify-modular") {
    const bool psi = series_param(run, {"theta", "psi"}) == "psi";
    for (const auto& g : resolve_gammas(run))
      run_one(jt_verify_modular(run.spec.get(), psi, g, pts.count(), pts.taus.data(),
                                pts.zs.data(), &opts, &r),
              json{{"gamma", {g.a, g.b, g.c, g.d}}});
  } else if (run.command == "verify-elliptic") {
    const bool psi = series_param(run, {"theta", "psi"}) == "psi";
    const auto lambda = resolve_shift(run, "lambda");
    const auto mu = resolve_shift(run, "mu");
    run.resolved["params"]["lambda"] = lambda;
    run.resolved["params"]["mu"] = mu;
    run_one(jt_verify_elliptic(run.spec.get(), psi, lambda.data(), mu.data(), pts.count(),
                               pts.taus.data(), pts.zs.data(), &opts, &r),
            json{{"lambda", lambda}, {"mu", mu}});
  } else if (run.command == "verify-translation") {
    const auto lambda = resolve_shift(run, "lambda");
    const auto mu = resolve_shift(run, "mu");
    run.resolved["params"]["lambda"] = lambda;
    run.resolved["params"]["mu"] = mu;
    run_one(jt_verify_translation(run.spec.get(), lambda.data(), mu.data(), pts.count(),
                                  pts.taus.data(), pts.zs.data(), &opts, &r),
            json{{"lambda", lambda}, {"mu", mu}});
  } else if (run.command == "verify-generating") {
    const auto T = get_as<unsigned>(require_key(run.params, "T", "params"), "T");
    for (const auto& g : resolve_gammas(run))
      run_one(jt_verify_generating(run.spec.get(), g, T, pts.count(), pts.taus.data(),
                                   pts.zs.data(), &opts, &r),
              json{{"gamma", {g.a, g.b, g.c, g.d}}});
  } else if (run.command == "verify-congruence") {
    const auto p = parse_int_vec(require_key(run.params, "p", "params"), "p");
    const auto ell = parse_complex_vec(require_key(run.params, "ell", "params"), "ell");
    if (p.size() != run.f || ell.size() != run.f)
      throw RunError("DimensionMismatch", "p and ell must have length f");
    const auto k = run.resolved["k"].get<unsigned>();
    for (const auto& g : resolve_gammas(run))
      run_one(jt_verify_congruence(run.spec.get(), p.data(), ell.data(), k, g, pts.count(),
                                   pts.taus.data(), pts.zs.data(), &opts, &r),
              json{{"gamma", {g.a, g.b, g.c, g.d}}});
  }
  return outcome;
}

Outcome cmd_quasi_depth(Run& run, Emitter& em) {
  jt_depth_options o = jt_depth_options_default();
  auto uint_param = [&](const char* key, unsigned& field) {
    if (run.params.contains(key)) field = get_as<unsigned>(run.params[key], key);
    run.resolved["params"][key] = field;
  };
  uint_param("smax", o.smax);
  uint_param("tmax", o.tmax);
  uint_param("max_modular_degree", o.max_modular_degree);
  if (run.params.contains("fit_tol")) o.tol = get_as<double>(run.params["fit_tol"], "fit_tol");
  run.resolved["params"]["fit_tol"] = o.tol;
  o.eps = run.eps;
  std::vector<std::int64_t> s(run.n);
  jt_depth_result res{};
  check(jt_quasi_depth(run.spec.get(), &o, s.data(), &res));
  json rec{{"record", "depth"}, {"lambda_depth", s}, {"t", res.t},
           {"modular_degree", res.modular_degree}, {"fit_residual", res.fit_residual},
           {"condition", res.condition}};
  em.record(rec);
  if (em.format() == Format::kCsv) {
    em.stream() << "direction,s\n";
    for (std::size_t j = 0; j < s.size(); ++j) em.stream() << j << ',' << s[j] << '\n';
    em.stream() << "t," << res.t << '\n';
  }
  Outcome out;
  out.has_verdict = true;
  out.max_residual = res.fit_residual;
  out.passed = res.fit_residual <= run.tolerance;
  json depth = s;
  depth.push_back(res.t);
  out.extra["depth"] = depth;
  return out;
}

void write_error(std::ostream& out, std::ostream& err, const Options& opt, const std::string& code,
                 const std::string& message) {
  json rec{{"record", "error"}, {"code", code}, {"message", message},
           {"version", jt_version()}};
  out << rec.dump() << '\n';
  if (!opt.quiet) err << "error: " << code << ": " << message << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Generalized Jacobi theta series: expansions, evaluation and verification"};
  app.set_version_flag("--version", std::string(jt_version()));
  app.add_option("--config", opt.config_path, "Run configuration (JSON)")->required();
  app.add_option("--tolerance", opt.tolerance, "Override the verdict tolerance");
  app.add_option("--seed", opt.seed, "Override the sample point seed");
  std::string format = "json-records";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json-records", "csv"}));
  app.add_flag("--quiet", opt.quiet, "No human summary on standard error");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help / --version
      out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? std::string(jt_version()) + "\n"
                                                          : app.help());
      return kExitOk;
    }
    write_error(out, err, opt, "UsageError", e.what());
    return kExitConfigError;
  }
  opt.format = format == "csv" ? Format::kCsv : Format::kJsonRecords;

  try {
    std::ifstream in(opt.config_path);
    if (!in) throw RunError("ConfigError", "cannot read config '" + opt.config_path + "'");
    json cfg;
    try {
      cfg = json::parse(in);
    } catch (const json::parse_error& e) {
      throw RunError("ConfigError", std::string("invalid JSON: ") + e.what());
    }
    Run run = parse_config(cfg, opt);

    // Records are buffered so a late failure leaves only the error record.
    std::ostringstream body;
    Emitter em(body, opt.format);
    Outcome outcome;
    if (run.command == "coeffs") {
      outcome = cmd_coeffs(run, em);
    } else if (run.command == "eval") {
      outcome = cmd_eval(run, em);
    } else if (run.command == "quasi-depth") {
      outcome = cmd_quasi_depth(run, em);
    } else {
      outcome = cmd_verify(run, em, opt);
    }

    json summary;
    summary["record"] = "summary";
    summary["command"] = run.command;
    summary["status"] = !outcome.has_verdict ? "ok" : outcome.passed ? "pass" : "fail";
    if (outcome.has_verdict) {
      summary["max_residual"] = outcome.max_residual;
      summary["tolerance"] = run.tolerance;
    }
    for (const auto& [k, v] : outcome.extra.items()) summary[k] = v;
    summary["truncation"] = outcome.truncation;
    summary["config"] = run.resolved;
    summary["version"] = jt_version();

    out << body.str();
    if (opt.format == Format::kJsonRecords)
      out << summary.dump() << '\n';
    else if (!opt.quiet)
      err << summary.dump() << '\n';
    if (!opt.quiet) {
      err << run.command << ": " << summary["status"].get<std::string>();
      if (outcome.has_verdict)
        err << " (max residual " << outcome.max_residual << ", tolerance " << run.tolerance << ")";
      err << '\n';
    }
    return outcome.passed ? kExitOk : kExitVerificationFailed;
  } catch (const RunError& e) {
    write_error(out, err, opt, e.code, e.what());
  } catch (const std::exception& e) {
    write_error(out, err, opt, "Internal", e.what());
  }
  return kExitConfigError;
}

}  // namespace jtcli
