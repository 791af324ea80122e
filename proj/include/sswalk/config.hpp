#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "sswalk/birth.hpp"
#include "sswalk/error.hpp"
#include "sswalk/lattice.hpp"
#include "sswalk/params.hpp"

// Run configuration for the command-line tool: JSON in, JSON out.
//
// Complex numbers are two-element arrays [re, im] (a bare number is read as a
// real value); phi is one [[re, im], [re, im]] pair per axis.

namespace sswalk {

struct SweepConfig {
  std::vector<double> p;
  int axis = 0; ///< 1-based axis to vary; 0 varies every axis
  bool operator==(const SweepConfig &) const = default;
};

struct RunConfig {
  RawParameters params;
  std::int64_t torus = 64;
  std::int64_t steps = 100;
  std::int64_t horizon = 4000;
  Sign sign = Sign::Plus;
  std::int64_t radius = 0; ///< output trimming radius; 0 keeps everything
  std::int64_t sites_lo = -20;
  std::int64_t sites_hi = 20;
  std::vector<double> lambda{0.0, 1.0};
  std::vector<std::pair<std::int64_t, std::int64_t>> anchors;
  std::string initial;
  int levels = 4;
  std::string op = "U";
  double exclusion = 1e-6;
  SweepConfig sweep;
  std::uint64_t site_budget = std::uint64_t{1} << 22;
  std::int64_t max_dimension = 4096;
  std::string out;

  bool operator==(const RunConfig &o) const {
    return params == o.params &&
           torus == o.torus && steps == o.steps && horizon == o.horizon && sign == o.sign &&
           radius == o.radius && sites_lo == o.sites_lo && sites_hi == o.sites_hi &&
           lambda == o.lambda && anchors == o.anchors && initial == o.initial && levels == o.levels &&
           op == o.op && exclusion == o.exclusion && sweep == o.sweep && site_budget == o.site_budget &&
           max_dimension == o.max_dimension && out == o.out;
  }
};

namespace detail {

[[noreturn]] inline void config_error(const std::string &what) { throw WalkError(ErrorKind::ConfigError, what); }

inline cplx complex_from_json(const nlohmann::json &j, const std::string &where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  config_error("\"" + where + "\" must be a complex number [re, im]");
}

inline nlohmann::json complex_to_json(cplx c) { return nlohmann::json::array({c.real(), c.imag()}); }

template <typename T> T get_number(const nlohmann::json &j, const std::string &key) {
  if (!j.is_number()) config_error("\"" + key + "\" must be a number");
  if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer() && !j.is_number_unsigned()) config_error("\"" + key + "\" must be an integer");
  }
  return j.get<T>();
}

} // namespace detail

inline Sign parse_sign(const std::string &s) {
  if (s == "+" || s == "plus" || s == "+1") return Sign::Plus;
  if (s == "-" || s == "minus" || s == "-1") return Sign::Minus;
  detail::config_error("sign must be '+' or '-' (got '" + s + "')");
}

/// "A..B" -> (A, B)
inline std::pair<std::int64_t, std::int64_t> parse_site_range(const std::string &s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) detail::config_error("site range must look like A..B (got '" + s + "')");
  try {
    std::size_t used = 0;
    const std::string a = s.substr(0, dots), b = s.substr(dots + 2);
    const std::int64_t lo = std::stoll(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    const std::int64_t hi = std::stoll(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    if (hi < lo) detail::config_error("empty site range '" + s + "'");
    return {lo, hi};
  } catch (const std::logic_error &) {
    detail::config_error("bad site range '" + s + "'");
  }
}

/// "a,b;a,b;..." -> anchor list
inline std::vector<std::pair<std::int64_t, std::int64_t>> parse_anchors(const std::string &s) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = std::min(s.find(';', start), s.size());
    const std::string item = s.substr(start, end - start);
    if (!item.empty()) {
      const auto comma = item.find(',');
      if (comma == std::string::npos) detail::config_error("anchor '" + item + "' must be a,b");
      try {
        out.emplace_back(std::stoll(item.substr(0, comma)), std::stoll(item.substr(comma + 1)));
      } catch (const std::logic_error &) {
        detail::config_error("bad anchor '" + item + "'");
      }
    }
    start = end + 1;
  }
  return out;
}

/// Complex literal: "1", "-0.5", "2i", "-i", "0.3+0.4i", "1e-3-2.5e-1i".
inline cplx parse_complex_literal(std::string s) {
  std::erase_if(s, [](unsigned char c) { return std::isspace(c); });
  if (s.empty()) detail::config_error("empty complex literal");
  auto number = [&](const std::string &t) {
    try {
      std::size_t used = 0;
      const double v = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::logic_error &) {
      detail::config_error("bad complex literal '" + s + "'");
    }
  };
  if (s.back() != 'i') return {number(s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not an exponent sign and not leading.
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [&](const std::string &t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return number(t);
  };
  if (split == std::string::npos) return {0.0, imag_part(body)};
  return {number(body.substr(0, split)), imag_part(body.substr(split))};
}

/// Initial state "x:(c_1,...,c_2n); x:(...)" with x = "x1,...,xn".
inline WaveFunction parse_initial_state(const std::string &text, int n) {
  struct Entry {
    Site x;
    std::vector<cplx> c;
  };
  std::vector<Entry> entries;
  std::int64_t radius = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = std::min(text.find(';', start), text.size());
    std::string item = text.substr(start, end - start);
    start = end + 1;
    std::erase_if(item, [](unsigned char c) { return std::isspace(c); });
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos || item.size() < colon + 3 || item[colon + 1] != '(' || item.back() != ')')
      detail::config_error("initial state entry '" + item + "' must look like site:(c1,...,c2n)");
    Entry e;
    const std::string site = item.substr(0, colon);
    std::size_t s0 = 0;
    while (s0 <= site.size()) {
      const auto s1 = std::min(site.find(',', s0), site.size());
      try {
        e.x.push_back(std::stoll(site.substr(s0, s1 - s0)));
      } catch (const std::logic_error &) {
        detail::config_error("bad site '" + site + "' in initial state");
      }
      s0 = s1 + 1;
    }
    if (static_cast<int>(e.x.size()) != n)
      detail::config_error("initial state site '" + site + "' needs " + std::to_string(n) + " coordinates");
    const std::string comps = item.substr(colon + 2, item.size() - colon - 3);
    std::size_t c0 = 0;
    while (c0 <= comps.size()) {
      const auto c1 = std::min(comps.find(',', c0), comps.size());
      e.c.push_back(parse_complex_literal(comps.substr(c0, c1 - c0)));
      c0 = c1 + 1;
    }
    if (static_cast<int>(e.c.size()) != 2 * n)
      detail::config_error("initial state entry '" + item + "' needs " + std::to_string(2 * n) + " components");
    for (auto v : e.x) radius = std::max(radius, std::abs(v));
    entries.push_back(std::move(e));
  }
  if (entries.empty()) detail::config_error("initial state is empty");
  WaveFunction psi(LatticeWindow::zero_padded(n, radius));
  for (const Entry &e : entries) {
    auto dst = psi.site_view(psi.window().index(e.x));
    for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += e.c[c];
  }
  return psi;
}

/// delta_0 (x) (0, 1, 0, ..., 0) in the initial-state syntax.
inline std::string default_initial_state(int n) {
  std::string site, comps;
  for (int j = 0; j < n; ++j) site += (j ? ",0" : "0");
  for (int c = 0; c < 2 * n; ++c) comps += std::string(c ? "," : "") + (c == 1 ? "1" : "0");
  return site + ":(" + comps + ")";
}

inline std::vector<std::pair<std::int64_t, std::int64_t>> default_anchors() {
  std::vector<std::pair<std::int64_t, std::int64_t>> a;
  for (std::int64_t x = 0; x <= 2; ++x)
    for (std::int64_t y = 0; y <= 2; ++y) a.emplace_back(x, y);
  return a;
}

inline RunConfig parse_config(const nlohmann::json &j) {
  using detail::config_error;
  if (!j.is_object()) config_error("config must be a JSON object");
  static const std::set<std::string> known{"n",        "p",       "q",        "phi",       "torus",
                                           "steps",    "horizon", "sign",     "radius",    "sites",
                                           "lambda",   "anchors", "initial",  "levels",    "operator",
                                           "exclusion", "sweep",  "site_budget", "max_dimension", "out"};
  for (const auto &[key, _] : j.items())
    if (!known.contains(key)) config_error("unknown key \"" + key + "\"");
  for (const char *key : {"p", "q", "phi"})
    if (!j.contains(key)) config_error("missing required key \"" + std::string(key) + "\"");

  RunConfig cfg;
  if (!j["p"].is_array()) config_error("\"p\" must be an array of reals");
  for (const auto &v : j["p"]) cfg.params.p.push_back(detail::get_number<double>(v, "p"));
  if (!j["q"].is_array()) config_error("\"q\" must be an array of complex numbers");
  for (const auto &v : j["q"]) cfg.params.q.push_back(detail::complex_from_json(v, "q"));
  if (!j["phi"].is_array()) config_error("\"phi\" must be an array of [Phi_j1, Phi_j2] pairs");
  for (const auto &v : j["phi"]) {
    if (!v.is_array() || v.size() != 2) config_error("each \"phi\" entry must be [Phi_j1, Phi_j2]");
    cfg.params.phi.push_back({detail::complex_from_json(v[0], "phi"), detail::complex_from_json(v[1], "phi")});
  }
  const auto n = static_cast<int>(cfg.params.p.size());
  if (j.contains("n") && detail::get_number<int>(j["n"], "n") != n)
    config_error("\"n\" does not match the length of \"p\"");
  if (cfg.params.q.size() != cfg.params.p.size() || cfg.params.phi.size() != cfg.params.p.size())
    config_error("\"p\", \"q\" and \"phi\" must have the same length");

  if (j.contains("torus")) cfg.torus = detail::get_number<std::int64_t>(j["torus"], "torus");
  if (j.contains("steps")) cfg.steps = detail::get_number<std::int64_t>(j["steps"], "steps");
  if (j.contains("horizon")) cfg.horizon = detail::get_number<std::int64_t>(j["horizon"], "horizon");
  if (j.contains("sign")) {
    if (!j["sign"].is_string()) config_error("\"sign\" must be \"+\" or \"-\"");
    cfg.sign = parse_sign(j["sign"].get<std::string>());
  }
  if (j.contains("radius")) cfg.radius = detail::get_number<std::int64_t>(j["radius"], "radius");
  if (j.contains("sites")) {
    const auto &s = j["sites"];
    if (!s.is_array() || s.size() != 2) config_error("\"sites\" must be [A, B]");
    cfg.sites_lo = detail::get_number<std::int64_t>(s[0], "sites");
    cfg.sites_hi = detail::get_number<std::int64_t>(s[1], "sites");
    if (cfg.sites_hi < cfg.sites_lo) config_error("\"sites\" is empty");
  }
  if (j.contains("lambda")) {
    cfg.lambda.clear();
    if (j["lambda"].is_number()) {
      cfg.lambda.push_back(j["lambda"].get<double>());
    } else if (j["lambda"].is_array()) {
      for (const auto &v : j["lambda"]) cfg.lambda.push_back(detail::get_number<double>(v, "lambda"));
    } else {
      config_error("\"lambda\" must be a number or an array of numbers");
    }
  }
  if (j.contains("anchors")) {
    if (!j["anchors"].is_array()) config_error("\"anchors\" must be an array of [a, b]");
    for (const auto &v : j["anchors"]) {
      if (!v.is_array() || v.size() != 2) config_error("each anchor must be [a, b]");
      cfg.anchors.emplace_back(detail::get_number<std::int64_t>(v[0], "anchors"),
                               detail::get_number<std::int64_t>(v[1], "anchors"));
    }
  } else if (n >= 2) {
    cfg.anchors = default_anchors();
  }
  if (j.contains("initial")) {
    if (!j["initial"].is_string()) config_error("\"initial\" must be a string like \"0:(0,1)\"");
    cfg.initial = j["initial"].get<std::string>();
  } else {
    cfg.initial = default_initial_state(n);
  }
  if (j.contains("levels")) cfg.levels = detail::get_number<int>(j["levels"], "levels");
  if (j.contains("operator")) {
    if (!j["operator"].is_string()) config_error("\"operator\" must be \"U\" or \"T\"");
    cfg.op = j["operator"].get<std::string>();
    if (cfg.op != "U" && cfg.op != "T") config_error("\"operator\" must be \"U\" or \"T\"");
  }
  if (j.contains("exclusion")) cfg.exclusion = detail::get_number<double>(j["exclusion"], "exclusion");
  if (j.contains("sweep")) {
    const auto &s = j["sweep"];
    if (!s.is_object()) config_error("\"sweep\" must be an object");
    for (const auto &[key, _] : s.items())
      if (key != "p" && key != "axis") config_error("unknown key \"sweep." + key + "\"");
    if (s.contains("p")) {
      if (!s["p"].is_array()) config_error("\"sweep.p\" must be an array");
      for (const auto &v : s["p"]) cfg.sweep.p.push_back(detail::get_number<double>(v, "sweep.p"));
    }
    if (s.contains("axis")) cfg.sweep.axis = detail::get_number<int>(s["axis"], "sweep.axis");
    if (cfg.sweep.axis < 0 || cfg.sweep.axis > n) config_error("\"sweep.axis\" out of range");
  }
  if (j.contains("site_budget"))
    cfg.site_budget = detail::get_number<std::uint64_t>(j["site_budget"], "site_budget");
  if (j.contains("max_dimension"))
    cfg.max_dimension = detail::get_number<std::int64_t>(j["max_dimension"], "max_dimension");
  if (j.contains("out")) {
    if (!j["out"].is_string()) config_error("\"out\" must be a path string");
    cfg.out = j["out"].get<std::string>();
  }
  return cfg;
}

inline RunConfig parse_config_text(const std::string &text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    detail::config_error(std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

/// Every knob, defaults included; parse_config(dump_config(c)) == c.
inline nlohmann::json dump_config(const RunConfig &cfg) {
  nlohmann::json j;
  j["n"] = cfg.params.p.size();
  j["p"] = cfg.params.p;
  j["q"] = nlohmann::json::array();
  for (const cplx &q : cfg.params.q) j["q"].push_back(detail::complex_to_json(q));
  j["phi"] = nlohmann::json::array();
  for (const auto &pair : cfg.params.phi)
    j["phi"].push_back({detail::complex_to_json(pair[0]), detail::complex_to_json(pair[1])});
  j["torus"] = cfg.torus;
  j["steps"] = cfg.steps;
  j["horizon"] = cfg.horizon;
  j["sign"] = std::string(1, sign_char(cfg.sign));
  j["radius"] = cfg.radius;
  j["sites"] = {cfg.sites_lo, cfg.sites_hi};
  j["lambda"] = cfg.lambda;
  j["anchors"] = nlohmann::json::array();
  for (const auto &[a, b] : cfg.anchors) j["anchors"].push_back({a, b});
  j["initial"] = cfg.initial;
  j["levels"] = cfg.levels;
  j["operator"] = cfg.op;
  j["exclusion"] = cfg.exclusion;
  j["sweep"] = {{"p", cfg.sweep.p}, {"axis", cfg.sweep.axis}};
  j["site_budget"] = cfg.site_budget;
  j["max_dimension"] = cfg.max_dimension;
  j["out"] = cfg.out;
  return j;
}

} // namespace sswalk
