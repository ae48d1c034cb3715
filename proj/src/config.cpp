#include "wkb/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "wkb/log.hpp"
#include "wkb/snapshot.hpp"

namespace wkb {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_quotes(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

bool parse_double_token(const std::string& tok, double& out) {
  if (tok == "2pi") {
    out = kTwoPi;
    return true;
  }
  try {
    std::size_t pos = 0;
    out = std::stod(tok, &pos);
    return pos == tok.size();
  } catch (...) {
    return false;
  }
}

std::vector<std::string> split_list(const std::string& s, char extra = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == extra || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i]);
  }
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(v[i]);
  }
  return out;
}

using Setter = std::function<bool(const std::string&, RunConfig&)>;

bool set_double(double& field, const std::string& v) {
  return parse_double_token(v, field);
}

bool set_list_double(std::vector<double>& field, const std::string& v) {
  std::vector<double> out;
  for (const auto& tok : split_list(v)) {
    double x;
    if (!parse_double_token(tok, x)) return false;
    out.push_back(x);
  }
  field = std::move(out);
  return true;
}

bool set_list_int(std::vector<int>& field, const std::string& v) {
  std::vector<int> out;
  for (const auto& tok : split_list(v)) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stoi(tok, &pos));
      if (pos != tok.size()) return false;
    } catch (...) {
      return false;
    }
  }
  field = std::move(out);
  return true;
}

bool set_matrix(std::vector<double>& field, const std::string& v) {
  // rows separated by ';', entries by spaces or commas
  std::vector<double> out;
  std::size_t rows = 0, cols = 0;
  std::stringstream ss(v);
  std::string row;
  while (std::getline(ss, row, ';')) {
    const auto toks = split_list(trim(row));
    if (toks.empty()) return false;
    if (cols == 0)
      cols = toks.size();
    else if (cols != toks.size())
      return false;
    for (const auto& tok : toks) {
      double x;
      if (!parse_double_token(tok, x)) return false;
      out.push_back(x);
    }
    ++rows;
  }
  if (rows != cols || rows == 0) return false;
  field = std::move(out);
  return true;
}

bool set_bool(bool& field, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") {
    field = true;
    return true;
  }
  if (v == "false" || v == "0" || v == "no") {
    field = false;
    return true;
  }
  return false;
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"model.preset",
       [](const std::string& v, RunConfig& c) {
         if (v != "hyperbolic-nls" && v != "davey-stewartson-2" &&
             v != "free" && v != "custom")
           return false;
         c.preset = v;
         return true;
       }},
      {"model.d",
       [](const std::string& v, RunConfig& c) {
         try {
           c.d = std::stoi(v);
         } catch (...) {
           return false;
         }
         return c.d >= 1;
       }},
      {"model.H", [](const std::string& v, RunConfig& c) { return set_matrix(c.H, v); }},
      {"model.beta",
       [](const std::string& v, RunConfig& c) { return set_list_double(c.beta, v); }},
      {"model.alpha",
       [](const std::string& v, RunConfig& c) { return set_double(c.alpha, v); }},
      {"model.gamma",
       [](const std::string& v, RunConfig& c) {
         try {
           c.gamma = std::stoi(v);
         } catch (...) {
           return false;
         }
         return true;
       }},
      {"model.sigma",
       [](const std::string& v, RunConfig& c) { return set_list_int(c.sigma, v); }},
      {"model.kernels",
       [](const std::string& v, RunConfig& c) {
         c.kernels.clear();
         // comma-separated, but "ds(1,2)" keeps its inner comma
         std::string cur;
         int depth = 0;
         for (char ch : v + ",") {
           if (ch == '(') ++depth;
           if (ch == ')') --depth;
           if (ch == ',' && depth == 0) {
             const std::string tok = trim(cur);
             if (!tok.empty()) c.kernels.push_back(tok);
             cur.clear();
           } else {
             cur.push_back(ch);
           }
         }
         return !c.kernels.empty();
       }},
      {"model.kernel_weights",
       [](const std::string& v, RunConfig& c) {
         return set_list_double(c.kernel_weights, v);
       }},
      {"model.strength",
       [](const std::string& v, RunConfig& c) { return set_double(c.strength, v); }},
      {"model.chi",
       [](const std::string& v, RunConfig& c) { return set_double(c.chi, v); }},
      {"model.omega",
       [](const std::string& v, RunConfig& c) { return set_double(c.omega, v); }},
      {"model.ds_integrable",
       [](const std::string& v, RunConfig& c) { return set_bool(c.ds_integrable, v); }},
      {"model.epsilon",
       [](const std::string& v, RunConfig& c) { return set_list_double(c.epsilon, v); }},
      {"model.ell",
       [](const std::string& v, RunConfig& c) { return set_double(c.ell, v); }},
      {"model.w0",
       [](const std::string& v, RunConfig& c) { return set_double(c.w0, v); }},
      {"model.M",
       [](const std::string& v, RunConfig& c) {
         if (v == "auto") {
           c.M = v;
           return true;
         }
         double x;
         if (!parse_double_token(v, x) || !(x > 0)) return false;
         c.M = v;
         return true;
       }},
      {"model.safety",
       [](const std::string& v, RunConfig& c) { return set_double(c.safety, v); }},
      {"model.V", [](const std::string& v, RunConfig& c) {
         c.V = v;
         return !v.empty();
       }},
      {"grid.n",
       [](const std::string& v, RunConfig& c) { return set_list_int(c.n, v); }},
      {"grid.L",
       [](const std::string& v, RunConfig& c) { return set_list_double(c.L, v); }},
      {"data.profile",
       [](const std::string& v, RunConfig& c) {
         if (v != "analytic" && v != "snapshot") return false;
         c.data = v;
         return true;
       }},
      {"data.phi0", [](const std::string& v, RunConfig& c) { c.phi0_path = v; return true; }},
      {"data.a0", [](const std::string& v, RunConfig& c) { c.a0_path = v; return true; }},
      {"data.phi10", [](const std::string& v, RunConfig& c) { c.phi10_path = v; return true; }},
      {"data.a10", [](const std::string& v, RunConfig& c) { c.a10_path = v; return true; }},
      {"data.norm",
       [](const std::string& v, RunConfig& c) { return set_double(c.data_norm, v); }},
      {"data.normalize_index",
       [](const std::string& v, RunConfig& c) {
         if (v != "auto" && v != "base") return false;
         c.normalize_index = v;
         return true;
       }},
      {"plan.dt",
       [](const std::string& v, RunConfig& c) { return set_double(c.dt, v); }},
      {"plan.T",
       [](const std::string& v, RunConfig& c) {
         if (v == "auto") {
           c.T = v;
           return true;
         }
         double x;
         if (!parse_double_token(v, x) || !(x > 0)) return false;
         c.T = v;
         return true;
       }},
      {"plan.t_fraction",
       [](const std::string& v, RunConfig& c) { return set_double(c.t_fraction, v); }},
      {"plan.t_max",
       [](const std::string& v, RunConfig& c) { return set_double(c.t_max, v); }},
      {"run.system",
       [](const std::string& v, RunConfig& c) {
         if (v != "grenier" && v != "limit" && v != "linearized" && v != "nls")
           return false;
         c.system = v;
         return true;
       }},
      {"picard.jmax",
       [](const std::string& v, RunConfig& c) {
         try {
           c.picard_jmax = std::stoi(v);
         } catch (...) {
           return false;
         }
         return true;
       }},
      {"picard.tol",
       [](const std::string& v, RunConfig& c) { return set_double(c.picard_tol, v); }},
      {"check.trials",
       [](const std::string& v, RunConfig& c) {
         try {
           c.check_trials = std::stol(v);
         } catch (...) {
           return false;
         }
         return c.check_trials > 0;
       }},
      {"check.truncation",
       [](const std::string& v, RunConfig& c) {
         try {
           c.bilinear_truncation = std::stol(v);
         } catch (...) {
           return false;
         }
         return c.bilinear_truncation >= 8;
       }},
      {"seed", [](const std::string& v, RunConfig& c) {
         try {
           c.seed = std::stoull(v);
         } catch (...) {
           return false;
         }
         return true;
       }},
  };
  return table;
}

void validate(RunConfig& c, std::vector<ParseError>& errors) {
  auto fail = [&](const std::string& msg) { errors.push_back({0, msg}); };
  if (c.d < 1) fail("model.d must be >= 1");
  for (int v : c.n)
    if (v < 4 || v % 2 != 0) fail("grid.n entries must be even and >= 4");
  if (static_cast<int>(c.n.size()) != c.d) fail("grid.n must have model.d entries");
  if (!c.L.empty() && static_cast<int>(c.L.size()) != c.d)
    fail("grid.L must have model.d entries");
  if (!(c.ell > 0.5 * (c.d + 1)))
    fail("model.ell must exceed (d+1)/2");
  if (c.gamma < 1) fail("model.gamma must be >= 1");
  if (c.epsilon.empty()) fail("model.epsilon must not be empty");
  for (std::size_t i = 0; i < c.epsilon.size(); ++i) {
    if (!(c.epsilon[i] > 0.0 && c.epsilon[i] <= 1.0))
      fail("model.epsilon values must lie in (0, 1]");
    if (i > 0 && !(c.epsilon[i] < c.epsilon[i - 1]))
      fail("model.epsilon values must strictly decrease");
  }
  if (!(c.dt > 0.0)) fail("plan.dt must be positive");
  if (!(c.w0 > 0.0)) fail("model.w0 must be positive");
  if (!(c.safety >= 1.0)) fail("model.safety must be >= 1");
  if (c.preset == "custom") {
    if (c.H.size() != static_cast<std::size_t>(c.d) * c.d)
      fail("custom preset: model.H must be d x d");
    if (!c.sigma.empty() && c.sigma.size() != c.kernels.size())
      fail("model.sigma and model.kernels must have matching lengths");
    if (!c.kernel_weights.empty() &&
        c.kernel_weights.size() != c.kernels.size())
      fail("model.kernel_weights must match model.kernels");
    for (int s : c.sigma)
      if (s < 1) fail("model.sigma entries must be >= 1");
  }
  if (c.data == "snapshot" &&
      (c.phi0_path.empty() || c.a0_path.empty()))
    fail("snapshot data requires data.phi0 and data.a0 paths");
}

}  // namespace

ParseResult parse_config(const std::string& text) {
  ParseResult result;
  std::stringstream ss(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(ss, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      result.errors.push_back({line_no, "expected key = value"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = strip_quotes(trim(line.substr(eq + 1)));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      result.errors.push_back({line_no, "unknown key: " + key});
      continue;
    }
    if (!it->second(value, result.config))
      result.errors.push_back(
          {line_no, "invalid value for " + key + ": '" + value + "'"});
  }
  validate(result.config, result.errors);
  return result;
}

std::string print_config(const RunConfig& c) {
  std::string out;
  auto kv = [&](const std::string& k, const std::string& v) {
    out += k + " = " + v + "\n";
  };
  kv("model.preset", c.preset);
  kv("model.d", std::to_string(c.d));
  if (!c.H.empty()) {
    const int d = c.d;
    std::string h;
    for (int r = 0; r < d; ++r) {
      if (r) h += "; ";
      for (int col = 0; col < d; ++col) {
        if (col) h += " ";
        h += fmt(c.H[r * d + col]);
      }
    }
    kv("model.H", h);
  }
  if (!c.beta.empty()) kv("model.beta", join_doubles(c.beta));
  kv("model.alpha", fmt(c.alpha));
  kv("model.gamma", std::to_string(c.gamma));
  if (!c.sigma.empty()) kv("model.sigma", join_ints(c.sigma));
  if (!c.kernels.empty()) {
    std::string ks;
    for (std::size_t i = 0; i < c.kernels.size(); ++i) {
      if (i) ks += ", ";
      ks += c.kernels[i];
    }
    kv("model.kernels", ks);
  }
  if (!c.kernel_weights.empty())
    kv("model.kernel_weights", join_doubles(c.kernel_weights));
  kv("model.strength", fmt(c.strength));
  kv("model.chi", fmt(c.chi));
  kv("model.omega", fmt(c.omega));
  kv("model.ds_integrable", c.ds_integrable ? "true" : "false");
  kv("model.epsilon", join_doubles(c.epsilon));
  kv("model.ell", fmt(c.ell));
  kv("model.w0", fmt(c.w0));
  kv("model.M", c.M);
  kv("model.safety", fmt(c.safety));
  kv("model.V", c.V);
  kv("grid.n", join_ints(c.n));
  if (!c.L.empty()) kv("grid.L", join_doubles(c.L));
  kv("data.profile", c.data);
  if (!c.phi0_path.empty()) kv("data.phi0", c.phi0_path);
  if (!c.a0_path.empty()) kv("data.a0", c.a0_path);
  if (!c.phi10_path.empty()) kv("data.phi10", c.phi10_path);
  if (!c.a10_path.empty()) kv("data.a10", c.a10_path);
  kv("data.norm", fmt(c.data_norm));
  kv("data.normalize_index", c.normalize_index);
  kv("plan.dt", fmt(c.dt));
  kv("plan.T", c.T);
  kv("plan.t_fraction", fmt(c.t_fraction));
  kv("plan.t_max", fmt(c.t_max));
  kv("run.system", c.system);
  kv("picard.jmax", std::to_string(c.picard_jmax));
  kv("picard.tol", fmt(c.picard_tol));
  kv("check.trials", std::to_string(c.check_trials));
  kv("check.truncation", std::to_string(c.bilinear_truncation));
  kv("seed", std::to_string(c.seed));
  return out;
}

Grid grid_from_config(const RunConfig& c) {
  std::vector<double> box = c.L;
  if (box.empty()) box.assign(c.n.size(), kTwoPi);
  return Grid(c.n, box);
}

namespace {

KernelSpec kernel_from_string(const std::string& s, double weight) {
  if (s == "identity") return KernelSpec::identity(weight);
  if (s == "zero") return KernelSpec::zero();
  if (s.rfind("ds(", 0) == 0 && s.back() == ')') {
    const std::string inner = s.substr(3, s.size() - 4);
    const auto toks = split_list(inner);
    if (toks.size() != 2)
      throw std::invalid_argument("kernel: ds(p,q) needs two axes");
    return KernelSpec::davey_stewartson(std::stoi(toks[0]), std::stoi(toks[1]),
                                        weight);
  }
  if (s.rfind("tab(", 0) == 0 && s.back() == ')') {
    const std::string path = s.substr(4, s.size() - 5);
    return KernelSpec::tabulated(read_snapshot(path), weight);
  }
  throw std::invalid_argument("unknown kernel spec: " + s);
}

}  // namespace

ModelParams params_from_config(const RunConfig& c, const Grid& grid) {
  ModelParams p;
  if (c.preset != "custom") {
    PresetOptions opts;
    opts.strength = c.strength;
    opts.chi = c.chi;
    opts.omega = c.omega;
    opts.ds_integrable = c.ds_integrable;
    p = make_preset(c.preset, grid.dim(), opts);
  } else {
    p.H = Eigen::Map<const Eigen::MatrixXd>(c.H.data(), c.d, c.d).transpose();
    p.beta = Eigen::VectorXd::Zero(c.d);
    for (std::size_t i = 0; i < c.beta.size(); ++i) p.beta[i] = c.beta[i];
    for (std::size_t i = 0; i < c.kernels.size(); ++i) {
      const int sigma = i < c.sigma.size() ? c.sigma[i] : 1;
      const double weight =
          i < c.kernel_weights.size() ? c.kernel_weights[i] : 1.0;
      p.nonlocal.push_back({sigma, kernel_from_string(c.kernels[i], weight)});
    }
  }
  p.alpha = c.alpha;
  p.gamma = c.gamma;
  p.ell = c.ell;
  p.epsilon = c.epsilon.front();
  if (c.V != "zero") p.potential = Potential::constant(read_snapshot(c.V));
  p.schedule = {c.w0, 1.0};  // M resolved by setup_from_config
  return p;
}

CaseSetup setup_from_config(const RunConfig& c) {
  CaseSetup s;
  s.grid = grid_from_config(c);
  s.params = params_from_config(c, s.grid);
  s.safety = c.safety;

  const double w0 = c.w0;
  if (c.data == "analytic") {
    if (s.grid.dim() != 2)
      throw std::invalid_argument("analytic data profile expects d = 2");
    s.phi0 = analytic_profile(s.grid, w0, 4.0, {0.0, 0.0});
    s.a0 = analytic_profile(s.grid, w0, 4.0, {1.1, 2.3}) +
           std::complex<double>(0.0, 0.35) *
               analytic_profile(s.grid, w0, 4.0, {2.9, 0.7});
    s.phi10 = analytic_profile(s.grid, w0, 4.0, {0.6, 1.7});
    s.a10 = analytic_profile(s.grid, w0, 4.0, {2.2, 1.3}) +
            std::complex<double>(0.0, 0.2) *
                analytic_profile(s.grid, w0, 4.0, {0.4, 2.6});
    const double idx =
        c.normalize_index == "base" ? c.ell : c.ell + 2.0;
    s.select_index = idx;
    s.phi0 = scale_to_norm(std::move(s.phi0), idx + 1.0, w0, c.data_norm);
    s.a0 = scale_to_norm(std::move(s.a0), idx, w0, c.data_norm);
    s.phi10 = scale_to_norm(std::move(s.phi10), idx, w0, c.data_norm);
    s.a10 = scale_to_norm(std::move(s.a10), idx - 1.0, w0, c.data_norm);
  } else {
    s.phi0 = read_snapshot(c.phi0_path);
    s.a0 = read_snapshot(c.a0_path);
    s.phi10 = c.phi10_path.empty() ? SpectralField(s.grid)
                                   : read_snapshot(c.phi10_path);
    s.a10 = c.a10_path.empty() ? SpectralField(s.grid)
                               : read_snapshot(c.a10_path);
    s.select_index =
        c.normalize_index == "base" ? c.ell : c.ell + 2.0;
    require_same_grid(s.phi0.grid, s.grid, "data.phi0");
    require_same_grid(s.a0.grid, s.grid, "data.a0");
  }

  double M;
  if (c.M == "auto") {
    const double idx = s.select_index;
    s.bilinear_C = bilinear_constant(idx, idx, s.grid.dim(),
                                     c.bilinear_truncation) *
                   c.safety;
    int sigma_max = 0;
    for (const auto& term : s.params.nonlocal)
      sigma_max = std::max(sigma_max, term.sigma);
    const double norm_v = s.params.potential.l2_time_norm(
        c.ell, w0, std::max(c.t_max, 1.0));
    M = select_M(idx, s.grid.dim(),
                 analytic_norm(s.phi0, {idx + 1.0, w0}),
                 analytic_norm(s.a0, {idx, w0}), norm_v, sigma_max,
                 s.params.gamma, s.bilinear_C, c.safety);
  } else {
    M = std::stod(c.M);
  }
  s.params.schedule = {w0, M};

  if (c.T == "auto") {
    const double t_raw = c.t_fraction * std::min(w0 / M, c.t_max);
    const auto steps = static_cast<long>(std::floor(t_raw / c.dt + 1e-12));
    if (steps < 2)
      throw std::runtime_error(
          "config: auto horizon collapsed below two steps; lower M or dt");
    s.plan = StepPlan{c.dt, steps * c.dt, true};
  } else {
    s.plan = StepPlan{c.dt, std::stod(c.T), true};
    s.plan.validate();
  }
  log_info("resolved M = " + std::to_string(M) + ", T = " +
           std::to_string(s.plan.T));
  return s;
}

}  // namespace wkb
