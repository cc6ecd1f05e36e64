#include "config_io.hpp"

#include <fstream>

#include "rbsmc/errors.hpp"

namespace rbsmc::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing");
  return *it;
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::size_t as_index(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) fail(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

cplx as_complex(const json& j, const std::string& path) {
  if (j.is_number()) return cplx(j.get<double>());
  if (j.is_object()) {
    const double re = as_double(require(j, "re", path), path + ".re");
    const double im = as_double(require(j, "im", path), path + ".im");
    return cplx(re, im);
  }
  fail(path, "expected a number or {re, im}");
}

json complex_to_json(cplx v) {
  if (v.imag() == 0.0) return json(v.real());
  return json{{"re", v.real()}, {"im", v.imag()}};
}

Matrix vector_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array");
  Matrix v = Matrix::zero(j.size(), 1);
  for (std::size_t i = 0; i < j.size(); ++i)
    v(i, 0) = as_complex(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

json vector_to_json(const Matrix& v) {
  json j = json::array();
  for (std::size_t i = 0; i < v.rows(); ++i)
    j.push_back(complex_to_json(v(i, 0)));
  return j;
}

DelayedSystem system_from_json(const json& j, const std::string& path) {
  DelayedSystem sys;
  sys.a = matrix_from_json(require(j, "a", path), path + ".a");
  sys.a_d = matrix_from_json(require(j, "a_d", path), path + ".a_d");
  sys.b = matrix_from_json(require(j, "b", path), path + ".b");
  sys.c = matrix_from_json(require(j, "c", path), path + ".c");
  sys.d = matrix_from_json(require(j, "d", path), path + ".d");
  sys.tau = as_index(require(j, "tau", path), path + ".tau");
  sys.delta_max = as_double(require(j, "delta_max", path), path + ".delta_max");
  try {
    sys.validate();
  } catch (const DimensionMismatch& e) {
    fail(path, e.what());
  }
  return sys;
}

RotaBaxterOperator operator_from_json(const json& j, const std::string& path,
                                      std::size_t n) {
  const std::string kind = as_string(require(j, "kind", path), path + ".kind");
  try {
    if (kind == "scalar")
      return RotaBaxterOperator::scalar(
          as_complex(require(j, "lambda", path), path + ".lambda"), n);
    if (kind == "triangular") return RotaBaxterOperator::triangular(n);
    if (kind == "general")
      return RotaBaxterOperator::general(
          matrix_from_json(require(j, "map", path), path + ".map"),
          as_complex(require(j, "weight", path), path + ".weight"));
  } catch (const DimensionMismatch& e) {
    fail(path, e.what());
  }
  fail(path + ".kind", "expected scalar, triangular, or general");
}

json operator_to_json(const RotaBaxterOperator& op) {
  json j;
  switch (op.kind()) {
    case RotaBaxterOperator::Kind::ScalarScaling:
      j["kind"] = "scalar";
      j["lambda"] = complex_to_json(op.weight());
      break;
    case RotaBaxterOperator::Kind::TriangularProjection:
      j["kind"] = "triangular";
      break;
    case RotaBaxterOperator::Kind::GeneralLinear:
      j["kind"] = "general";
      j["weight"] = complex_to_json(op.weight());
      j["map"] = matrix_to_json(op.map());
      break;
  }
  return j;
}

DesignConfig design_from_json(const json& j, const std::string& path) {
  DesignConfig d;
  d.r0 = as_double(require(j, "r0", path), path + ".r0");
  d.r_d0 = as_double(require(j, "r_d0", path), path + ".r_d0");
  d.rho_max = as_double(require(j, "rho_max", path), path + ".rho_max");
  d.k = matrix_from_json(require(j, "k", path), path + ".k");
  d.phi = as_double(require(j, "phi", path), path + ".phi");
  d.rho = as_double(require(j, "rho", path), path + ".rho");
  return d;
}

LmiConfig lmi_from_json(const json& j, const std::string& path) {
  LmiConfig l;
  l.gamma_hi = as_double(require(j, "gamma_hi", path), path + ".gamma_hi");
  if (j.contains("epsilon_margin"))
    l.epsilon_margin =
        as_double(j["epsilon_margin"], path + ".epsilon_margin");
  if (!(l.gamma_hi > 0.0)) fail(path + ".gamma_hi", "must be positive");
  if (!(l.epsilon_margin > 0.0))
    fail(path + ".epsilon_margin", "must be positive");
  return l;
}

DisturbanceSpec disturbance_from_json(const json& j, const std::string& path) {
  const std::string kind = as_string(require(j, "kind", path), path + ".kind");
  if (kind == "zero") return DisturbanceSpec();  // direction fixed up at use
  if (kind == "constant")
    return DisturbanceSpec::constant(
        vector_from_json(require(j, "vector", path), path + ".vector"));
  if (kind == "sinusoid") {
    DisturbanceSpec spec = DisturbanceSpec::sinusoid(
        vector_from_json(require(j, "vector", path), path + ".vector"),
        as_double(require(j, "omega", path), path + ".omega"));
    if (j.contains("phase"))
      spec.phase = as_double(j["phase"], path + ".phase");
    return spec;
  }
  if (kind == "uniform") {
    const json& s = require(j, "seed", path);
    if (!s.is_number_unsigned()) fail(path + ".seed", "expected an unsigned integer");
    return DisturbanceSpec::uniform(s.get<std::uint64_t>());
  }
  if (kind == "explicit") {
    const json& seq = require(j, "sequence", path);
    if (!seq.is_array()) fail(path + ".sequence", "expected an array");
    std::vector<Matrix> vs;
    for (std::size_t i = 0; i < seq.size(); ++i)
      vs.push_back(vector_from_json(
          seq[i], path + ".sequence[" + std::to_string(i) + "]"));
    return DisturbanceSpec::explicit_sequence(std::move(vs));
  }
  fail(path + ".kind", "expected zero, constant, sinusoid, uniform, or explicit");
}

json disturbance_to_json(const DisturbanceSpec& spec) {
  json j;
  switch (spec.kind) {
    case DisturbanceSpec::Kind::Explicit: {
      j["kind"] = "explicit";
      json seq = json::array();
      for (const Matrix& v : spec.sequence) seq.push_back(vector_to_json(v));
      j["sequence"] = seq;
      break;
    }
    case DisturbanceSpec::Kind::Constant:
      if (spec.direction.rows() == 0) {
        j["kind"] = "zero";
      } else {
        j["kind"] = "constant";
        j["vector"] = vector_to_json(spec.direction);
      }
      break;
    case DisturbanceSpec::Kind::Sinusoid:
      j["kind"] = "sinusoid";
      j["vector"] = vector_to_json(spec.direction);
      j["omega"] = spec.omega;
      j["phase"] = spec.phase;
      break;
    case DisturbanceSpec::Kind::Uniform:
      j["kind"] = "uniform";
      j["seed"] = spec.seed;
      break;
  }
  return j;
}

SimConfig sim_from_json(const json& j, const std::string& path,
                        std::size_t n, std::size_t tau) {
  SimConfig s;
  s.horizon = as_index(require(j, "horizon", path), path + ".horizon");
  if (s.horizon < 1) fail(path + ".horizon", "must be >= 1");
  const std::string mode = as_string(require(j, "mode", path), path + ".mode");
  if (mode == "closed")
    s.mode = Trajectory::Mode::ClosedLoop;
  else if (mode == "reduced")
    s.mode = Trajectory::Mode::Reduced;
  else
    fail(path + ".mode", "expected closed or reduced");

  const json& hist = require(j, "initial_history", path);
  if (!hist.is_array()) fail(path + ".initial_history", "expected an array");
  if (hist.size() != tau + 1)
    fail(path + ".initial_history",
         "expected tau + 1 = " + std::to_string(tau + 1) + " states");
  for (std::size_t i = 0; i < hist.size(); ++i) {
    Matrix x = vector_from_json(
        hist[i], path + ".initial_history[" + std::to_string(i) + "]");
    if (x.rows() != n)
      fail(path + ".initial_history[" + std::to_string(i) + "]",
           "expected " + std::to_string(n) + " entries");
    s.initial_history.push_back(std::move(x));
  }
  s.disturbance = disturbance_from_json(require(j, "disturbance", path),
                                        path + ".disturbance");
  return s;
}

json sim_to_json(const SimConfig& s) {
  json j;
  j["horizon"] = s.horizon;
  j["mode"] = s.mode == Trajectory::Mode::ClosedLoop ? "closed" : "reduced";
  json hist = json::array();
  for (const Matrix& x : s.initial_history) hist.push_back(vector_to_json(x));
  j["initial_history"] = hist;
  j["disturbance"] = disturbance_to_json(s.disturbance);
  return j;
}

}  // namespace

const RotaBaxterOperator& RunConfig::require_op() const {
  if (!op) throw ConfigError("operator: missing");
  return *op;
}

Matrix matrix_from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    fail(path + "[0]", "expected a nonempty row array");
  const std::size_t cols = j[0].size();
  Matrix m = Matrix::zero(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != cols)
      fail(row_path, "expected " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k)
      m(i, k) = as_complex(j[i][k], row_path + "[" + std::to_string(k) + "]");
  }
  return m;
}

nlohmann::json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k)
      row.push_back(complex_to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

RunConfig parse_config(const nlohmann::json& j) {
  RunConfig cfg;
  cfg.system = system_from_json(require(j, "system", "config"), "system");
  cfg.op = operator_from_json(require(j, "operator", "config"), "operator",
                              cfg.system.n());
  if (j.contains("design"))
    cfg.design = design_from_json(j["design"], "design");
  if (j.contains("lmi")) cfg.lmi = lmi_from_json(j["lmi"], "lmi");
  if (j.contains("sim"))
    cfg.sim = sim_from_json(j["sim"], "sim", cfg.system.n(), cfg.system.tau);
  if (j.contains("output_dir"))
    cfg.output_dir = as_string(j["output_dir"], "output_dir");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  json j;
  json sys;
  sys["a"] = matrix_to_json(cfg.system.a);
  sys["a_d"] = matrix_to_json(cfg.system.a_d);
  sys["b"] = matrix_to_json(cfg.system.b);
  sys["c"] = matrix_to_json(cfg.system.c);
  sys["d"] = matrix_to_json(cfg.system.d);
  sys["tau"] = cfg.system.tau;
  sys["delta_max"] = cfg.system.delta_max;
  j["system"] = sys;
  if (cfg.op) j["operator"] = operator_to_json(*cfg.op);
  if (cfg.design) {
    json d;
    d["r0"] = cfg.design->r0;
    d["r_d0"] = cfg.design->r_d0;
    d["rho_max"] = cfg.design->rho_max;
    d["k"] = matrix_to_json(cfg.design->k);
    d["phi"] = cfg.design->phi;
    d["rho"] = cfg.design->rho;
    j["design"] = d;
  }
  if (cfg.lmi) {
    json l;
    l["gamma_hi"] = cfg.lmi->gamma_hi;
    l["epsilon_margin"] = cfg.lmi->epsilon_margin;
    j["lmi"] = l;
  }
  if (cfg.sim) j["sim"] = sim_to_json(*cfg.sim);
  j["output_dir"] = cfg.output_dir;
  return j;
}

void save_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path);
  out << config_to_json(cfg).dump(2) << '\n';
}

namespace {

bool op_equal(const std::optional<RotaBaxterOperator>& a,
              const std::optional<RotaBaxterOperator>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->kind() == b->kind() && a->weight() == b->weight() &&
         a->dimension() == b->dimension() &&
         (a->kind() != RotaBaxterOperator::Kind::GeneralLinear ||
          a->map() == b->map());
}

bool disturbance_equal(const DisturbanceSpec& a, const DisturbanceSpec& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case DisturbanceSpec::Kind::Explicit:
      return a.sequence == b.sequence;
    case DisturbanceSpec::Kind::Constant:
      return a.direction == b.direction;
    case DisturbanceSpec::Kind::Sinusoid:
      return a.direction == b.direction && a.omega == b.omega &&
             a.phase == b.phase;
    case DisturbanceSpec::Kind::Uniform:
      return a.seed == b.seed;
  }
  return false;
}

}  // namespace

bool config_equal(const RunConfig& a, const RunConfig& b) {
  const bool system_eq = a.system.a == b.system.a &&
                         a.system.a_d == b.system.a_d &&
                         a.system.b == b.system.b && a.system.c == b.system.c &&
                         a.system.d == b.system.d &&
                         a.system.tau == b.system.tau &&
                         a.system.delta_max == b.system.delta_max;
  if (!system_eq || !op_equal(a.op, b.op)) return false;

  if (a.design.has_value() != b.design.has_value()) return false;
  if (a.design &&
      !(a.design->r0 == b.design->r0 && a.design->r_d0 == b.design->r_d0 &&
        a.design->rho_max == b.design->rho_max && a.design->k == b.design->k &&
        a.design->phi == b.design->phi && a.design->rho == b.design->rho))
    return false;

  if (a.lmi.has_value() != b.lmi.has_value()) return false;
  if (a.lmi && !(a.lmi->gamma_hi == b.lmi->gamma_hi &&
                 a.lmi->epsilon_margin == b.lmi->epsilon_margin))
    return false;

  if (a.sim.has_value() != b.sim.has_value()) return false;
  if (a.sim &&
      !(a.sim->horizon == b.sim->horizon && a.sim->mode == b.sim->mode &&
        a.sim->initial_history == b.sim->initial_history &&
        disturbance_equal(a.sim->disturbance, b.sim->disturbance)))
    return false;

  return a.output_dir == b.output_dir;
}

}  // namespace rbsmc::cli
