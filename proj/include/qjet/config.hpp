#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qjet/integrate.hpp"
#include "qjet/potential.hpp"
#include "qjet/root_search.hpp"
#include "qjet/spectral.hpp"
#include "qjet/strategies.hpp"
#include "qjet/wavepacket.hpp"

namespace qjet {

struct FanSpec {
  int count = 2001;
  double min = 0.0;  // default: xc - 5 sigma, sigma = (4 Re alpha0)^{-1/2}
  double max = 0.0;  // default: xc + 5 sigma
};

struct WindowSpec {
  double min = -1.0;
  double max = 1.0;
  int points = 201;
  // error metrics ignore x below this (the turning-region divergence zone);
  // node matching still uses the full window
  double exclude_below = -std::numeric_limits<double>::infinity();
};

struct RunConfig {
  std::string label = "run";
  PhysicalConstants constants{};
  GaussianWavepacket wavepacket{};
  Potential potential = Free{};
  VelocityStrategy strategy = VelocityStrategy::Dpm;
  int truncation = 2;
  FanSpec fan;
  IntegrationConfig integration;
  GridSpec reference;
  double reference_dt = 5e-4;
  RootSearchConfig rootsearch;
  WindowSpec window;
  std::string compare_reference = "spectral";  // or "analytic"
  std::string compare_method;  // empty: use `strategy`; or a name, or "spectral"
  std::string output_prefix;
};

namespace detail {

inline void fail_key(const std::string& key, const std::string& why) {
  throw std::invalid_argument(key + ": " + why);
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    fail_key(key, "not a number: '" + v + "'");
  }
  if (used != v.size()) fail_key(key, "trailing characters in '" + v + "'");
  return out;
}

// a+bi / a-bi / a / bi / i forms
inline cplx parse_complex(const std::string& key, std::string v) {
  std::erase(v, ' ');
  if (v.empty()) fail_key(key, "empty value");
  if (v.back() != 'i' && v.back() != 'I')
    return cplx(parse_double(key, v), 0.0);
  v.pop_back();
  if (v.empty() || v == "+") return cplx(0.0, 1.0);
  if (v == "-") return cplx(0.0, -1.0);
  std::size_t split = std::string::npos;
  for (std::size_t k = v.size(); k-- > 1;) {
    if ((v[k] == '+' || v[k] == '-') && v[k - 1] != 'e' && v[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return cplx(0.0, parse_double(key, v));
  const std::string re = v.substr(0, split);
  std::string im = v.substr(split);
  double imag = 0.0;
  if (im == "+")
    imag = 1.0;
  else if (im == "-")
    imag = -1.0;
  else
    imag = parse_double(key, im);
  return cplx(parse_double(key, re), imag);
}

struct KeyValueReader {
  std::map<std::string, std::string> kv;
  std::map<std::string, bool> used;

  std::optional<std::string> raw(const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    used[key] = true;
    return it->second;
  }
  double number(const std::string& key, double fallback) {
    auto v = raw(key);
    return v ? parse_double(key, *v) : fallback;
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    auto v = raw(key);
    if (!v) return fallback;
    const double d = parse_double(key, *v);
    const auto n = static_cast<std::int64_t>(std::llround(d));
    if (static_cast<double>(n) != d) fail_key(key, "not an integer");
    return n;
  }
  std::optional<cplx> complex_opt(const std::string& key) {
    auto v = raw(key);
    if (!v) return std::nullopt;
    return parse_complex(key, *v);
  }
  std::string text(const std::string& key, const std::string& fallback) {
    auto v = raw(key);
    return v ? *v : fallback;
  }
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline RunConfig parse_config_text(const std::string& text) {
  detail::KeyValueReader r;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty()) detail::fail_key("config line " + std::to_string(lineno),
                                      "empty key");
    if (r.kv.count(key)) detail::fail_key(key, "duplicate key");
    r.kv[key] = val;
  }

  RunConfig c;
  c.label = r.text("run.label", "run");
  c.constants.hbar = r.number("constants.hbar", 1.0);
  c.constants.mass = r.number("constants.mass", 1.0);
  if (!(c.constants.hbar > 0)) detail::fail_key("constants.hbar", "must be > 0");
  if (!(c.constants.mass > 0)) detail::fail_key("constants.mass", "must be > 0");

  c.wavepacket.alpha0 =
      r.complex_opt("wavepacket.alpha0").value_or(cplx(0.5, 0.0));
  c.wavepacket.xc = r.number("wavepacket.xc", 0.0);
  c.wavepacket.pc = r.number("wavepacket.pc", 0.0);
  if (!(c.wavepacket.alpha0.real() > 0))
    detail::fail_key("wavepacket.alpha0", "Re(alpha0) must be > 0");
  if (auto g = r.complex_opt("wavepacket.gamma0"))
    c.wavepacket.gamma0 = *g;
  else
    c.wavepacket.gamma0 = GaussianWavepacket::default_gamma0(
        c.wavepacket.alpha0, c.constants);

  const std::string family = r.text("potential.family", "free");
  if (family == "free") {
    c.potential = Free{};
  } else if (family == "harmonic") {
    Harmonic h;
    h.omega = r.number("potential.omega", 1.0);
    h.mass = c.constants.mass;
    if (!(h.omega > 0)) detail::fail_key("potential.omega", "must be > 0");
    c.potential = h;
  } else if (family == "morse") {
    Morse m;
    m.depth = r.number("potential.depth", 1.0);
    m.range = r.number("potential.range", 1.0);
    if (!(m.depth > 0)) detail::fail_key("potential.depth", "must be > 0");
    if (!(m.range > 0)) detail::fail_key("potential.range", "must be > 0");
    c.potential = m;
  } else if (family == "polynomial") {
    Polynomial p;
    auto coeffs = r.raw("potential.coefficients");
    if (!coeffs)
      detail::fail_key("potential.coefficients",
                       "required for the polynomial family");
    std::string item;
    std::istringstream cs(*coeffs);
    while (std::getline(cs, item, ',')) {
      item = detail::trim(item);
      if (!item.empty())
        p.coefficients.push_back(
            detail::parse_double("potential.coefficients", item));
    }
    if (p.coefficients.empty())
      detail::fail_key("potential.coefficients", "no coefficients given");
    c.potential = p;
  } else {
    detail::fail_key("potential.family", "unknown family '" + family + "'");
  }

  const std::string strat = r.text("strategy", "dpm");
  if (strat == "zevca")
    c.strategy = VelocityStrategy::Zevca;
  else if (strat == "bomca")
    c.strategy = VelocityStrategy::Bomca;
  else if (strat == "dpm")
    c.strategy = VelocityStrategy::Dpm;
  else if (strat == "realclassical")
    c.strategy = VelocityStrategy::RealClassical;
  else
    detail::fail_key("strategy", "unknown strategy '" + strat + "'");

  c.truncation = static_cast<int>(r.integer("truncation", 2));
  if (c.truncation < 0 || c.truncation > kMaxJetOrder)
    detail::fail_key("truncation", "must be in [0, 32]");

  c.fan.count = static_cast<int>(r.integer("fan.count", 2001));
  if (c.fan.count < 1) detail::fail_key("fan.count", "must be >= 1");
  const double sigma = 1.0 / std::sqrt(4.0 * c.wavepacket.alpha0.real());
  c.fan.min = r.number("fan.min", c.wavepacket.xc - 5.0 * sigma);
  c.fan.max = r.number("fan.max", c.wavepacket.xc + 5.0 * sigma);
  if (c.fan.count > 1 && !(c.fan.max > c.fan.min))
    detail::fail_key("fan.max", "must exceed fan.min");

  c.integration.dt = r.number("integration.dt", 1e-3);
  c.integration.t_final = r.number("integration.t_final", 0.0);
  c.integration.store_every = r.integer("integration.store_every", 1);
  if (!(c.integration.dt > 0)) detail::fail_key("integration.dt", "must be > 0");
  if (c.integration.t_final < 0)
    detail::fail_key("integration.t_final", "must be >= 0");
  if (c.integration.store_every < 1)
    detail::fail_key("integration.store_every", "must be >= 1");

  c.reference.x_min = r.number("reference.x_min", -10.0);
  c.reference.x_max = r.number("reference.x_max", 10.0);
  c.reference.n_points =
      static_cast<std::size_t>(r.integer("reference.n_points", 1024));
  c.reference_dt = r.number("reference.dt", 5e-4);
  if (!(c.reference.x_max > c.reference.x_min))
    detail::fail_key("reference.x_max", "must exceed reference.x_min");
  if (c.reference.n_points < 2 ||
      (c.reference.n_points & (c.reference.n_points - 1)) != 0)
    detail::fail_key("reference.n_points", "must be a power of two >= 2");
  if (!(c.reference_dt > 0)) detail::fail_key("reference.dt", "must be > 0");

  c.rootsearch.max_iter = static_cast<int>(r.integer("rootsearch.max_iter", 25));
  c.rootsearch.tol_imag = r.number("rootsearch.tol_imag", 1e-10);
  c.rootsearch.step = r.number("rootsearch.step", 1e-6);
  c.rootsearch.dt = c.integration.dt;
  if (c.rootsearch.max_iter < 1)
    detail::fail_key("rootsearch.max_iter", "must be >= 1");
  if (!(c.rootsearch.tol_imag > 0))
    detail::fail_key("rootsearch.tol_imag", "must be > 0");
  if (c.rootsearch.step == 0.0) detail::fail_key("rootsearch.step", "must be nonzero");

  c.window.min = r.number("window.min", c.fan.min);
  c.window.max = r.number("window.max", c.fan.max);
  c.window.points = static_cast<int>(r.integer("window.points", 201));
  c.window.exclude_below = r.number("window.exclude_below",
                                    -std::numeric_limits<double>::infinity());
  if (!(c.window.max > c.window.min))
    detail::fail_key("window.max", "must exceed window.min");
  if (c.window.points < 2) detail::fail_key("window.points", "must be >= 2");

  c.compare_reference = r.text("compare.reference", "spectral");
  if (c.compare_reference != "spectral" && c.compare_reference != "analytic")
    detail::fail_key("compare.reference", "must be 'spectral' or 'analytic'");
  c.compare_method = r.text("compare.method", "");
  if (!c.compare_method.empty() && c.compare_method != "spectral" &&
      c.compare_method != "zevca" && c.compare_method != "bomca" &&
      c.compare_method != "dpm" && c.compare_method != "realclassical")
    detail::fail_key("compare.method",
                     "must be a strategy name or 'spectral'");

  c.output_prefix = r.text("output.prefix", c.label);

  for (const auto& [key, val] : r.kv)
    if (!r.used.count(key))
      detail::fail_key(key, "unknown config key");
  return c;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace qjet
