#include "chd/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "chd/errors.hpp"

namespace chd {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_num(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + v + "'");
  }
}

long parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true/false: '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

HSpec parse_hspec(const std::string& key, const std::string& v) {
  if (v == "zero") return HSpec::zero();
  if (v == "linear_half") return HSpec::linear_half();
  if (v.rfind("constant:", 0) == 0)
    return HSpec::constant(parse_num(key, v.substr(9)));
  if (v.rfind("parabolic:", 0) == 0)
    return HSpec::parabolic(parse_num(key, v.substr(10)));
  if (v.rfind("spline:", 0) == 0) {
    const std::string path = v.substr(7);
    std::ifstream in(path);
    if (!in) throw ConfigError(key + ": cannot open spline file '" + path + "'");
    std::vector<double> s, y;
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      double a = 0, b = 0;
      if (!(ls >> a >> b))
        throw ConfigError(key + ": bad spline line '" + line + "'");
      s.push_back(a);
      y.push_back(b);
    }
    HSpec h = HSpec::spline(std::move(s), std::move(y));
    h.spline_path = path;
    return h;
  }
  throw ConfigError(key + ": unknown source shape '" + v + "'");
}

std::string hspec_to_string(const HSpec& h) {
  char buf[128];
  switch (h.kind) {
    case HSpec::Kind::Zero: return "zero";
    case HSpec::Kind::LinearHalf: return "linear_half";
    case HSpec::Kind::Constant:
      std::snprintf(buf, sizeof(buf), "constant:%.17g", h.c);
      return buf;
    case HSpec::Kind::Parabolic:
      std::snprintf(buf, sizeof(buf), "parabolic:%.17g", h.c);
      return buf;
    case HSpec::Kind::Spline: return "spline:" + h.spline_path;
  }
  return "zero";
}

InitSpec parse_init(const std::string& key, const std::string& v) {
  InitSpec spec;
  if (v.rfind("uniform:", 0) == 0) {
    spec.kind = InitSpec::Kind::Uniform;
    spec.value = parse_num(key, v.substr(8));
    return spec;
  }
  if (v.rfind("tanh_disc:", 0) == 0) {
    const auto parts = split(v.substr(10), ',');
    if (parts.size() != 6)
      throw ConfigError(key + ": tanh_disc needs cx,cy,radius,width,inner,outer");
    spec.kind = InitSpec::Kind::TanhDisc;
    spec.cx = parse_num(key, parts[0]);
    spec.cy = parse_num(key, parts[1]);
    spec.radius = parse_num(key, parts[2]);
    spec.width = parse_num(key, parts[3]);
    spec.inner = parse_num(key, parts[4]);
    spec.outer = parse_num(key, parts[5]);
    return spec;
  }
  if (v.rfind("random:", 0) == 0) {
    const auto parts = split(v.substr(7), ',');
    if (parts.size() != 3)
      throw ConfigError(key + ": random needs mean,amplitude,seed");
    spec.kind = InitSpec::Kind::Random;
    spec.mean = parse_num(key, parts[0]);
    spec.amplitude = parse_num(key, parts[1]);
    spec.seed = static_cast<std::uint64_t>(parse_int(key, parts[2]));
    return spec;
  }
  if (v.rfind("snapshot:", 0) == 0) {
    spec.kind = InitSpec::Kind::Snapshot;
    spec.path = v.substr(9);
    return spec;
  }
  throw ConfigError(key + ": unknown init kind '" + v + "'");
}

std::string init_to_string(const InitSpec& s) {
  char buf[256];
  switch (s.kind) {
    case InitSpec::Kind::Uniform:
      std::snprintf(buf, sizeof(buf), "uniform:%.17g", s.value);
      return buf;
    case InitSpec::Kind::TanhDisc:
      std::snprintf(buf, sizeof(buf), "tanh_disc:%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                    s.cx, s.cy, s.radius, s.width, s.inner, s.outer);
      return buf;
    case InitSpec::Kind::Random:
      std::snprintf(buf, sizeof(buf), "random:%.17g,%.17g,%llu", s.mean,
                    s.amplitude, static_cast<unsigned long long>(s.seed));
      return buf;
    case InitSpec::Kind::Snapshot:
      return "snapshot:" + s.path;
  }
  return "uniform:0";
}

}  // namespace

SimConfig SimConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

SimConfig SimConfig::parse(const std::string& text) {
  SimConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "grid.nx") c.nx = static_cast<int>(parse_int(key, val));
    else if (key == "grid.ny") c.ny = static_cast<int>(parse_int(key, val));
    else if (key == "grid.lx") c.lx = parse_num(key, val);
    else if (key == "grid.ly") c.ly = parse_num(key, val);
    else if (key == "source.m") c.params.m = parse_num(key, val);
    else if (key == "source.h") c.params.h = parse_hspec(key, val);
    else if (key == "source.eps_ext") c.params.eps_ext = parse_num(key, val);
    else if (key == "source.source_off") c.params.source_off = parse_bool(key, val);
    else if (key == "source.paper_mass_bounds")
      c.params.paper_mass_bounds = parse_bool(key, val);
    else if (key == "potential.mode") {
      if (val == "logarithmic") c.params.pot_mode = PotentialMode::Logarithmic;
      else if (val == "regularized") c.params.pot_mode = PotentialMode::Regularized;
      else throw ConfigError(key + ": expected logarithmic|regularized");
    }
    else if (key == "potential.theta") c.params.theta = parse_num(key, val);
    else if (key == "potential.theta0") c.params.theta0 = parse_num(key, val);
    else if (key == "potential.n") c.params.pot_n = static_cast<int>(parse_int(key, val));
    else if (key == "potential.kappa") c.params.pot_kappa = parse_num(key, val);
    else if (key == "init.kind") {
      const double margin = c.init.clip_margin;
      c.init = parse_init(key, val);
      c.init.clip_margin = margin;
    }
    else if (key == "init.clip_margin") c.init.clip_margin = parse_num(key, val);
    else if (key == "time.dt") c.dt = parse_num(key, val);
    else if (key == "time.t_end") c.t_end = parse_num(key, val);
    else if (key == "step.newton_tol") c.step.newton_tol = parse_num(key, val);
    else if (key == "step.newton_max") c.step.newton_max = static_cast<int>(parse_int(key, val));
    else if (key == "step.picard_iters") c.step.picard_iters = static_cast<int>(parse_int(key, val));
    else if (key == "step.picard_tol") c.step.picard_tol = parse_num(key, val);
    else if (key == "step.picard_max") c.step.picard_max = static_cast<int>(parse_int(key, val));
    else if (key == "step.damping") c.step.damping = parse_num(key, val);
    else if (key == "elliptic.tol") c.elliptic.tol = parse_num(key, val);
    else if (key == "elliptic.max_iter") c.elliptic.max_iter = static_cast<int>(parse_int(key, val));
    else if (key == "elliptic.method") {
      if (val == "cg") c.elliptic.method = EllipticOptions::Method::Cg;
      else if (val == "direct") c.elliptic.method = EllipticOptions::Method::Direct;
      else throw ConfigError(key + ": expected cg|direct");
    }
    else if (key == "output.csv_path") c.output.csv_path = val;
    else if (key == "output.snapshot_every") c.output.snapshot_every = static_cast<int>(parse_int(key, val));
    else if (key == "output.snapshot_dir") c.output.snapshot_dir = val;
    else if (key == "sweep.m_min") c.sweep.m_min = parse_num(key, val);
    else if (key == "sweep.m_max") c.sweep.m_max = parse_num(key, val);
    else if (key == "sweep.m_count") c.sweep.m_count = static_cast<int>(parse_int(key, val));
    else if (key == "sweep.c_min") c.sweep.c_min = parse_num(key, val);
    else if (key == "sweep.c_max") c.sweep.c_max = parse_num(key, val);
    else if (key == "sweep.c_count") c.sweep.c_count = static_cast<int>(parse_int(key, val));
    else if (key == "sweep.t_end") c.sweep.t_end = parse_num(key, val);
    else if (key == "sweep.workers") c.sweep.workers = static_cast<int>(parse_int(key, val));
    else if (key == "sweep.csv_path") c.sweep.csv_path = val;
    else if (key == "mms.a") c.mms.a = parse_num(key, val);
    else if (key == "mms.b") c.mms.b = parse_num(key, val);
    else if (key == "mms.spatial_t_end") c.mms.spatial_t_end = parse_num(key, val);
    else if (key == "mms.spatial_dt0") c.mms.spatial_dt0 = parse_num(key, val);
    else if (key == "mms.spatial_n0") c.mms.spatial_n0 = static_cast<int>(parse_int(key, val));
    else if (key == "mms.temporal_t_end") c.mms.temporal_t_end = parse_num(key, val);
    else if (key == "mms.temporal_dt0") c.mms.temporal_dt0 = parse_num(key, val);
    else if (key == "mms.temporal_n") c.mms.temporal_n = static_cast<int>(parse_int(key, val));
    else if (key == "mms.csv_path") c.mms.csv_path = val;
    else if (key == "perturb.delta") c.perturb.delta = parse_num(key, val);
    else if (key == "perturb.csv_path") c.perturb.csv_path = val;
    else if (key == "mode") {
      if (val != "run" && val != "mms" && val != "verify" && val != "sweep" &&
          val != "perturb")
        throw ConfigError("mode: expected run|mms|verify|sweep|perturb");
      c.mode = val;
    }
    else throw ConfigError("config: unknown key '" + key + "'");
  }
  c.step.dt = c.dt;
  return c;
}

std::string SimConfig::serialize() const {
  std::ostringstream o;
  char buf[256];
  auto num = [&](const char* key, double v) {
    std::snprintf(buf, sizeof(buf), "%s = %.17g\n", key, v);
    o << buf;
  };
  auto integer = [&](const char* key, long v) {
    o << key << " = " << v << "\n";
  };
  auto str = [&](const char* key, const std::string& v) {
    o << key << " = " << v << "\n";
  };
  integer("grid.nx", nx);
  integer("grid.ny", ny);
  num("grid.lx", lx);
  num("grid.ly", ly);
  num("source.m", params.m);
  str("source.h", hspec_to_string(params.h));
  num("source.eps_ext", params.eps_ext);
  str("source.source_off", params.source_off ? "true" : "false");
  str("source.paper_mass_bounds", params.paper_mass_bounds ? "true" : "false");
  str("potential.mode", params.pot_mode == PotentialMode::Logarithmic
                            ? "logarithmic" : "regularized");
  num("potential.theta", params.theta);
  num("potential.theta0", params.theta0);
  integer("potential.n", params.pot_n);
  num("potential.kappa", params.pot_kappa);
  str("init.kind", init_to_string(init));
  num("init.clip_margin", init.clip_margin);
  num("time.dt", dt);
  num("time.t_end", t_end);
  num("step.newton_tol", step.newton_tol);
  integer("step.newton_max", step.newton_max);
  integer("step.picard_iters", step.picard_iters);
  num("step.picard_tol", step.picard_tol);
  integer("step.picard_max", step.picard_max);
  num("step.damping", step.damping);
  num("elliptic.tol", elliptic.tol);
  integer("elliptic.max_iter", elliptic.max_iter);
  str("elliptic.method",
      elliptic.method == EllipticOptions::Method::Cg ? "cg" : "direct");
  str("output.csv_path", output.csv_path);
  integer("output.snapshot_every", output.snapshot_every);
  str("output.snapshot_dir", output.snapshot_dir);
  num("sweep.m_min", sweep.m_min);
  num("sweep.m_max", sweep.m_max);
  integer("sweep.m_count", sweep.m_count);
  num("sweep.c_min", sweep.c_min);
  num("sweep.c_max", sweep.c_max);
  integer("sweep.c_count", sweep.c_count);
  num("sweep.t_end", sweep.t_end);
  integer("sweep.workers", sweep.workers);
  str("sweep.csv_path", sweep.csv_path);
  num("mms.a", mms.a);
  num("mms.b", mms.b);
  num("mms.spatial_t_end", mms.spatial_t_end);
  num("mms.spatial_dt0", mms.spatial_dt0);
  integer("mms.spatial_n0", mms.spatial_n0);
  num("mms.temporal_t_end", mms.temporal_t_end);
  num("mms.temporal_dt0", mms.temporal_dt0);
  integer("mms.temporal_n", mms.temporal_n);
  str("mms.csv_path", mms.csv_path);
  num("perturb.delta", perturb.delta);
  str("perturb.csv_path", perturb.csv_path);
  str("mode", mode);
  return o.str();
}

void SimConfig::validate() const {
  if (nx < 4 || ny < 4) throw ConfigError("grid.nx/ny: must be >= 4");
  if (lx <= 0.0 || ly <= 0.0) throw ConfigError("grid.lx/ly: must be > 0");
  if (dt <= 0.0) throw ConfigError("time.dt: must be > 0");
  if (t_end <= 0.0) throw ConfigError("time.t_end: must be > 0");
  if (dt >= t_end) throw ConfigError("time.dt: must be < time.t_end");
  params.validate();
  StepOptions s = step;
  s.dt = dt;
  s.validate();
  if (!(elliptic.tol > 0.0 && elliptic.tol <= 1e-4))
    throw ConfigError("elliptic.tol: must lie in (0, 1e-4]");
  if (init.clip_margin <= 0.0 || init.clip_margin >= 1.0)
    throw ConfigError("init.clip_margin: must lie in (0,1)");
  if (output.snapshot_every < 0)
    throw ConfigError("output.snapshot_every: must be >= 0");
  if (sweep.m_count < 1 || sweep.c_count < 1)
    throw ConfigError("sweep.m_count/c_count: must be >= 1");
  if (sweep.workers < 1) throw ConfigError("sweep.workers: must be >= 1");
  if (perturb.delta < 0.0) throw ConfigError("perturb.delta: must be >= 0");
}

std::uint64_t SimConfig::hash() const {
  const std::string s = serialize();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace chd
