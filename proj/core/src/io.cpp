#include "sbl/io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace sbl {

using nlohmann::json;

namespace {

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t k) { return path + "/" + std::to_string(k); }

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw FormatError(path.empty() ? "/" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(child(path, key), "missing required field '" + key + "'");
  return *it;
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) throw FormatError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw FormatError(path, "expected a finite number");
  return v;
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw FormatError(path, "expected an integer");
  return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw FormatError(path, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw FormatError(path, "expected a string");
  return j.get<std::string>();
}

const json& as_array(const json& j, const std::string& path, std::size_t expected = std::string::npos) {
  if (!j.is_array()) throw FormatError(path, "expected an array");
  if (expected != std::string::npos && j.size() != expected)
    throw FormatError(path, "expected " + std::to_string(expected) + " entries, found " + std::to_string(j.size()));
  return j;
}

Vec to_vec(const json& j, const std::string& path, Eigen::Index expected = -1) {
  as_array(j, path, expected < 0 ? std::string::npos : static_cast<std::size_t>(expected));
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = as_double(j[k], child(path, k));
  return v;
}

Mat to_mat(const json& j, const std::string& path, Eigen::Index rows = -1, Eigen::Index cols = -1) {
  as_array(j, path, rows < 0 ? std::string::npos : static_cast<std::size_t>(rows));
  const auto r = static_cast<Eigen::Index>(j.size());
  Eigen::Index c = cols;
  if (c < 0) c = r > 0 && j[0].is_array() ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Mat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) m.row(i) = to_vec(j[static_cast<std::size_t>(i)], child(path, static_cast<std::size_t>(i)), c).transpose();
  return m;
}

json from_vec(const Vec& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

json from_mat(const Mat& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(from_vec(m.row(i).transpose()));
  return a;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("", std::string("malformed JSON: ") + e.what());
  }
}

template <class F>
auto rethrow_invariants(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const FormatError&) {
    throw;
  } catch (const InputError& e) {
    throw FormatError(path, e.what());
  }
}

json hyper_to_json(const HyperState& s) {
  return json{{"omega_sq", from_vec(s.omega_sq)}, {"phi", from_vec(s.phi)}, {"rho", from_vec(s.rho)},
              {"tau", from_vec(s.tau)},           {"eta", s.eta},           {"nu", s.nu},
              {"alpha", from_vec(s.alpha)},       {"beta", s.beta},         {"a0", s.a0},
              {"b0", s.b0},                       {"kappa", s.kappa}};
}

HyperState hyper_from_json(const json& j, const std::string& path) {
  HyperState s;
  s.omega_sq = to_vec(field(j, "omega_sq", path), child(path, "omega_sq"));
  s.phi = to_vec(field(j, "phi", path), child(path, "phi"));
  s.rho = to_vec(field(j, "rho", path), child(path, "rho"));
  s.tau = to_vec(field(j, "tau", path), child(path, "tau"));
  s.eta = as_double(field(j, "eta", path), child(path, "eta"));
  s.nu = as_double(field(j, "nu", path), child(path, "nu"));
  s.alpha = to_vec(field(j, "alpha", path), child(path, "alpha"));
  s.beta = as_double(field(j, "beta", path), child(path, "beta"));
  s.a0 = as_double(field(j, "a0", path), child(path, "a0"));
  s.b0 = as_double(field(j, "b0", path), child(path, "b0"));
  s.kappa = as_double(field(j, "kappa", path), child(path, "kappa"));
  return s;
}

json trace_to_json(const Trace& t) {
  json a = json::array();
  for (const TraceRecord& r : t)
    a.push_back({{"iteration", r.iteration},
                 {"objective", r.objective},
                 {"max_delta_mu", r.max_delta_mu},
                 {"n_active", r.n_active},
                 {"beta", r.beta},
                 {"eta", r.eta},
                 {"b0", r.b0},
                 {"pruning_event", r.pruning_event},
                 {"note", r.note}});
  return a;
}

Trace trace_from_json(const json& j, const std::string& path) {
  Trace t;
  as_array(j, path);
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string p = child(path, k);
    TraceRecord r;
    r.iteration = as_int(field(j[k], "iteration", p), child(p, "iteration"));
    r.objective = as_double(field(j[k], "objective", p), child(p, "objective"));
    r.max_delta_mu = as_double(field(j[k], "max_delta_mu", p), child(p, "max_delta_mu"));
    r.n_active = as_int(field(j[k], "n_active", p), child(p, "n_active"));
    r.beta = as_double(field(j[k], "beta", p), child(p, "beta"));
    r.eta = as_double(field(j[k], "eta", p), child(p, "eta"));
    r.b0 = as_double(field(j[k], "b0", p), child(p, "b0"));
    r.pruning_event = as_bool(field(j[k], "pruning_event", p), child(p, "pruning_event"));
    r.note = as_string(field(j[k], "note", p), child(p, "note"));
    t.push_back(r);
  }
  return t;
}

json strings_to_json(const std::vector<std::string>& v) { return json(v); }

std::vector<std::string> strings_from_json(const json& j, const std::string& path) {
  as_array(j, path);
  std::vector<std::string> v;
  for (std::size_t k = 0; k < j.size(); ++k) v.push_back(as_string(j[k], child(path, k)));
  return v;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json spec_to_json(const ShearBuildingSpec& spec) {
  json faces = json::array();
  for (const auto& f : spec.face_stiffness) faces.push_back({{"+x", f[0]}, {"+y", f[1]}, {"-x", f[2]}, {"-y", f[3]}});
  json inertia = json::array();
  for (double v : spec.floor_inertia) inertia.push_back(v);
  return json{{"n_stories", spec.n_stories},
              {"face_stiffness", faces},
              {"floor_mass", spec.floor_mass},
              {"floor_inertia", inertia},
              {"half_width_x", spec.half_width_x},
              {"half_width_y", spec.half_width_y}};
}

ShearBuildingSpec spec_from_json(const json& j, const std::string& path) {
  ShearBuildingSpec spec;
  spec.n_stories = as_int(field(j, "n_stories", path), child(path, "n_stories"));
  if (spec.n_stories <= 0) throw FormatError(child(path, "n_stories"), "must be positive");
  const auto n = static_cast<std::size_t>(spec.n_stories);
  const std::string fp = child(path, "face_stiffness");
  const json& faces = as_array(field(j, "face_stiffness", path), fp, n);
  for (std::size_t s = 0; s < n; ++s) {
    std::array<double, 4> k{};
    for (Face f : kFaces) {
      const std::string name = face_name(f);
      k[static_cast<std::size_t>(f)] = as_double(field(faces[s], name, child(fp, s)), child(child(fp, s), name));
    }
    spec.face_stiffness.push_back(k);
  }
  const Vec m = to_vec(field(j, "floor_mass", path), child(path, "floor_mass"), spec.n_stories);
  spec.floor_mass.assign(m.data(), m.data() + m.size());
  spec.half_width_x = as_double(field(j, "half_width_x", path), child(path, "half_width_x"));
  spec.half_width_y = as_double(field(j, "half_width_y", path), child(path, "half_width_y"));
  if (j.contains("floor_inertia")) {
    const Vec r = to_vec(j["floor_inertia"], child(path, "floor_inertia"), spec.n_stories);
    spec.floor_inertia.assign(r.data(), r.data() + r.size());
  } else {
    for (double mass : spec.floor_mass) spec.floor_inertia.push_back(slab_inertia(mass, spec.half_width_x, spec.half_width_y));
  }
  return spec;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw InvalidArgument("failed writing '" + path + "'");
}

StructuralBasis parse_model(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw FormatError("/", "expected an object");
  if (j.contains("shear_building")) {
    const ShearBuildingSpec spec = spec_from_json(j["shear_building"], "/shear_building");
    return rethrow_invariants("/shear_building", [&] { return build_shear_building(spec); });
  }
  StructuralBasis b;
  b.mass = to_mat(field(j, "mass", ""), "/mass");
  b.n_dof = static_cast<int>(b.mass.rows());
  if (b.mass.cols() != b.n_dof) throw FormatError("/mass", "must be square");
  b.k0 = j.contains("k0") ? to_mat(j["k0"], "/k0", b.n_dof, b.n_dof) : Mat::Zero(b.n_dof, b.n_dof);
  const json& ks = as_array(field(j, "k_sub", ""), "/k_sub");
  for (std::size_t k = 0; k < ks.size(); ++k) b.k_sub.push_back(to_mat(ks[k], child("/k_sub", k), b.n_dof, b.n_dof));
  b.n_sub = static_cast<int>(b.k_sub.size());
  if (j.contains("labels")) {
    b.labels = strings_from_json(j["labels"], "/labels");
    if (b.labels.size() != b.k_sub.size()) throw FormatError("/labels", "must have one entry per k_sub matrix");
  } else {
    for (int k = 0; k < b.n_sub; ++k) b.labels.push_back("theta" + std::to_string(k + 1));
  }
  rethrow_invariants("", [&] {
    b.validate();
    return 0;
  });
  return b;
}

StructuralBasis load_model(const std::string& path) { return parse_model(read_text_file(path)); }

std::string model_to_string(const StructuralBasis& b) {
  json ks = json::array();
  for (const Mat& k : b.k_sub) ks.push_back(from_mat(k));
  return dump(json{{"mass", from_mat(b.mass)}, {"k0", from_mat(b.k0)}, {"k_sub", ks}, {"labels", b.labels}});
}

std::string shear_building_to_string(const ShearBuildingSpec& spec) {
  return dump(json{{"shear_building", spec_to_json(spec)}});
}

ShearBuildingSpec parse_shear_building(const std::string& text) {
  const json j = parse_json(text);
  return spec_from_json(field(j, "shear_building", ""), "/shear_building");
}

ModalDataset parse_dataset(const std::string& text) {
  const json j = parse_json(text);
  ModalDataset d;
  d.n_segments = as_int(field(j, "n_segments", ""), "/n_segments");
  d.n_modes = as_int(field(j, "n_modes", ""), "/n_modes");
  if (d.n_segments < 3)
    rethrow_invariants("/n_segments", [&] {
      d.validate();
      return 0;
    });
  if (d.n_modes <= 0) throw FormatError("/n_modes", "must be positive");
  const json& obs = as_array(field(j, "observed_dofs", ""), "/observed_dofs");
  for (std::size_t k = 0; k < obs.size(); ++k) d.observed_dofs.push_back(as_int(obs[k], child("/observed_dofs", k)));
  d.n_observed = static_cast<int>(d.observed_dofs.size());
  std::string unit = "rad2/s2";
  if (j.contains("freq_unit")) unit = as_string(j["freq_unit"], "/freq_unit");
  if (unit != "rad2/s2" && unit != "Hz") throw FormatError("/freq_unit", "must be \"rad2/s2\" or \"Hz\"");
  d.freq_sq = to_mat(field(j, "freq_sq", ""), "/freq_sq", d.n_segments, d.n_modes);
  if (unit == "Hz") d.freq_sq = (2.0 * M_PI * d.freq_sq.array()).square().matrix();
  const json& ms = as_array(field(j, "mode_shapes", ""), "/mode_shapes", static_cast<std::size_t>(d.n_segments));
  for (std::size_t r = 0; r < ms.size(); ++r)
    d.mode_shapes.push_back(to_mat(ms[r], child("/mode_shapes", r), d.n_modes, d.n_observed));
  rethrow_invariants("", [&] {
    d.validate();
    normalize_dataset(d);
    return 0;
  });
  return d;
}

ModalDataset load_dataset(const std::string& path) { return parse_dataset(read_text_file(path)); }

std::string dataset_to_string(const ModalDataset& d) {
  json ms = json::array();
  for (const Mat& m : d.mode_shapes) ms.push_back(from_mat(m));
  return dump(json{{"n_segments", d.n_segments},
                   {"n_modes", d.n_modes},
                   {"observed_dofs", d.observed_dofs},
                   {"freq_unit", "rad2/s2"},
                   {"freq_sq", from_mat(d.freq_sq)},
                   {"mode_shapes", ms}});
}

void save_dataset(const ModalDataset& d, const std::string& path) { write_text_file(path, dataset_to_string(d)); }

RunConfig parse_run_config(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw FormatError("/", "expected an object");
  RunConfig c;
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "solver" && it.key() != "assess") throw FormatError("/" + it.key(), "unknown section");
  if (j.contains("solver")) {
    const json& s = j["solver"];
    if (!s.is_object()) throw FormatError("/solver", "expected an object");
    for (auto it = s.begin(); it != s.end(); ++it) {
      const std::string k = it.key();
      const std::string p = "/solver/" + k;
      const json& v = it.value();
      if (k == "b0") c.solver.b0 = as_double(v, p);
      else if (k == "alpha_min") c.solver.alpha_min = as_double(v, p);
      else if (k == "alpha_large") c.solver.alpha_large = as_double(v, p);
      else if (k == "tol_theta") c.solver.tol_theta = as_double(v, p);
      else if (k == "tol_log_alpha") c.solver.tol_log_alpha = as_double(v, p);
      else if (k == "max_iters") c.solver.max_iters = as_int(v, p);
      else if (k == "enforce_no_increase") c.solver.enforce_no_increase = as_bool(v, p);
      else if (k == "warmup_iters_before_constraint") c.solver.warmup_iters_before_constraint = as_int(v, p);
      else if (k == "misfit_z_threshold") c.solver.misfit_z_threshold = as_double(v, p);
      else if (k == "inner_max_iters") c.solver.inner.max_inner = as_int(v, p);
      else if (k == "inner_tol") c.solver.inner.tol = as_double(v, p);
      else if (k == "ascent_slack") c.solver.inner.ascent_slack = as_double(v, p);
      else throw FormatError(p, "unknown solver setting");
    }
  }
  if (j.contains("assess")) {
    const json& a = j["assess"];
    if (!a.is_object()) throw FormatError("/assess", "expected an object");
    for (auto it = a.begin(); it != a.end(); ++it) {
      const std::string k = it.key();
      const std::string p = "/assess/" + k;
      if (k == "f_start") c.grid.start = as_double(it.value(), p);
      else if (k == "f_stop") c.grid.stop = as_double(it.value(), p);
      else if (k == "f_step") c.grid.step = as_double(it.value(), p);
      else if (k == "eq44_as_printed") c.eq44_as_printed = as_bool(it.value(), p);
      else throw FormatError(p, "unknown assess setting");
    }
  }
  rethrow_invariants("/solver", [&] {
    c.solver.validate();
    return 0;
  });
  rethrow_invariants("/assess", [&] { return c.grid.points().size(); });
  return c;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_text_file(path)); }

std::string run_config_to_string(const RunConfig& c) {
  const SolverConfig& s = c.solver;
  return dump(json{{"solver",
                    {{"b0", s.b0},
                     {"alpha_min", s.alpha_min},
                     {"alpha_large", s.alpha_large},
                     {"tol_theta", s.tol_theta},
                     {"tol_log_alpha", s.tol_log_alpha},
                     {"max_iters", s.max_iters},
                     {"enforce_no_increase", s.enforce_no_increase},
                     {"warmup_iters_before_constraint", s.warmup_iters_before_constraint},
                     {"misfit_z_threshold", s.misfit_z_threshold},
                     {"inner_max_iters", s.inner.max_inner},
                     {"inner_tol", s.inner.tol},
                     {"ascent_slack", s.inner.ascent_slack}}},
                   {"assess",
                    {{"f_start", c.grid.start},
                     {"f_stop", c.grid.stop},
                     {"f_step", c.grid.step},
                     {"eq44_as_printed", c.eq44_as_printed}}}});
}

std::string calibration_to_string(const CalibrationResult& r) {
  return dump(json{{"kind", "calibration"},
                   {"theta_u_hat", from_vec(r.theta_u_hat)},
                   {"sigma_u", from_mat(r.sigma_u)},
                   {"iterations", r.iterations},
                   {"delta_map", hyper_to_json(r.delta_map)},
                   {"warnings", strings_to_json(r.warnings)},
                   {"trace", trace_to_json(r.trace)}});
}

CalibrationResult parse_calibration(const std::string& text) {
  const json j = parse_json(text);
  CalibrationResult r;
  r.theta_u_hat = to_vec(field(j, "theta_u_hat", ""), "/theta_u_hat");
  const auto n = r.theta_u_hat.size();
  r.sigma_u = to_mat(field(j, "sigma_u", ""), "/sigma_u", n, n);
  r.iterations = as_int(field(j, "iterations", ""), "/iterations");
  r.delta_map = hyper_from_json(field(j, "delta_map", ""), "/delta_map");
  if (r.delta_map.alpha.size() != n) throw FormatError("/delta_map/alpha", "length differs from theta_u_hat");
  r.warnings = j.contains("warnings") ? strings_from_json(j["warnings"], "/warnings") : std::vector<std::string>{};
  r.trace = j.contains("trace") ? trace_from_json(j["trace"], "/trace") : Trace{};
  return r;
}

CalibrationResult load_calibration(const std::string& path) { return parse_calibration(read_text_file(path)); }

std::string monitoring_to_string(const MonitoringResult& r) {
  return dump(json{{"kind", "monitoring"},
                   {"theta_d", from_vec(r.theta_d)},
                   {"sigma_d", from_mat(r.sigma_d)},
                   {"alpha_final", from_vec(r.alpha_final)},
                   {"pruned_set", r.pruned_set},
                   {"stiffness_ratio", from_vec(r.stiffness_ratio)},
                   {"cov_percent", from_vec(r.cov_percent)},
                   {"theta_u_hat", from_vec(r.theta_u_hat)},
                   {"iterations", r.iterations},
                   {"all_pruned", r.all_pruned},
                   {"misfit_warning", r.misfit_warning},
                   {"misfit_z", r.misfit_z},
                   {"delta_map", hyper_to_json(r.delta_map)},
                   {"warnings", strings_to_json(r.warnings)},
                   {"trace", trace_to_json(r.trace)}});
}

MonitoringResult parse_monitoring(const std::string& text) {
  const json j = parse_json(text);
  MonitoringResult r;
  r.theta_d = to_vec(field(j, "theta_d", ""), "/theta_d");
  const auto n = r.theta_d.size();
  r.sigma_d = to_mat(field(j, "sigma_d", ""), "/sigma_d", n, n);
  r.alpha_final = to_vec(field(j, "alpha_final", ""), "/alpha_final", n);
  const json& pr = as_array(field(j, "pruned_set", ""), "/pruned_set");
  for (std::size_t k = 0; k < pr.size(); ++k) r.pruned_set.push_back(as_int(pr[k], child("/pruned_set", k)));
  r.stiffness_ratio = to_vec(field(j, "stiffness_ratio", ""), "/stiffness_ratio", n);
  r.cov_percent = to_vec(field(j, "cov_percent", ""), "/cov_percent", n);
  r.theta_u_hat = to_vec(field(j, "theta_u_hat", ""), "/theta_u_hat", n);
  r.iterations = as_int(field(j, "iterations", ""), "/iterations");
  r.all_pruned = as_bool(field(j, "all_pruned", ""), "/all_pruned");
  r.misfit_warning = as_bool(field(j, "misfit_warning", ""), "/misfit_warning");
  r.misfit_z = as_double(field(j, "misfit_z", ""), "/misfit_z");
  r.delta_map = hyper_from_json(field(j, "delta_map", ""), "/delta_map");
  r.warnings = j.contains("warnings") ? strings_from_json(j["warnings"], "/warnings") : std::vector<std::string>{};
  r.trace = j.contains("trace") ? trace_from_json(j["trace"], "/trace") : Trace{};
  return r;
}

MonitoringResult load_monitoring(const std::string& path) { return parse_monitoring(read_text_file(path)); }

std::string report_to_string(const DamageReport& rep) {
  json rows = json::array();
  for (const ReportRow& r : rep.rows)
    rows.push_back({{"substructure", r.label},
                    {"theta_u", r.theta_u},
                    {"cov_u_percent", r.cov_u_percent},
                    {"ratio", r.ratio},
                    {"cov_percent", r.cov_percent},
                    {"pruned", r.pruned},
                    {"damaged", r.damaged}});
  return dump(json{{"calibration", rep.calibration_id},
                   {"monitoring", rep.monitoring_id},
                   {"variance_pairing", rep.pairing},
                   {"rows", rows},
                   {"warnings", rep.warnings}});
}

std::string ground_truth_to_string(const GroundTruth& g) {
  return dump(json{{"scenario", g.scenario},
                   {"theta", from_vec(g.theta)},
                   {"omega_sq", from_vec(g.clean.omega_sq)},
                   {"mode_shapes", from_mat(g.clean.shapes)},
                   {"observed_dofs", g.observed_dofs},
                   {"n_segments", g.n_segments},
                   {"noise", {{"freq_cov", g.noise.freq_cov}, {"shape_sigma", g.noise.shape_sigma}, {"seed", g.noise.seed}}}});
}

std::string trace_to_csv(const Trace& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,objective,max_delta_mu,n_active,beta,eta,b0,pruning_event,note\n";
  for (const TraceRecord& r : trace)
    out << r.iteration << ',' << r.objective << ',' << r.max_delta_mu << ',' << r.n_active << ',' << r.beta << ','
        << r.eta << ',' << r.b0 << ',' << (r.pruning_event ? 1 : 0) << ",\"" << r.note << "\"\n";
  return out.str();
}

}  // namespace sbl
