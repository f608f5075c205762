// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "magspec/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace magspec {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing junk");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value for '" + key + "': " + v);
  }
}

long parse_int(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  if (x != std::floor(x)) throw std::invalid_argument("config: '" + key + "' must be an integer");
  return static_cast<long>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: bad boolean for '" + key + "': " + v);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Envelope::Kind envelope_kind_from_name(const std::string& name) {
  if (name == "gaussian") return Envelope::Kind::Gaussian;
  if (name == "power_decay") return Envelope::Kind::PowerDecay;
  if (name == "compact_bump") return Envelope::Kind::CompactBump;
  if (name == "constant") return Envelope::Kind::Constant;
  throw std::invalid_argument("config: unknown envelope kind: " + name);
}

const char* envelope_kind_name(Envelope::Kind k) {
  switch (k) {
    case Envelope::Kind::Gaussian: return "gaussian";
    case Envelope::Kind::PowerDecay: return "power_decay";
    case Envelope::Kind::CompactBump: return "compact_bump";
    case Envelope::Kind::Constant: return "constant";
  }
  return "?";
}

// section -> key -> value with consumption tracking, so leftovers are errors.
struct KvStore {
  std::map<std::string, std::map<std::string, std::string>> kv;
  std::map<std::string, std::map<std::string, bool>> used;

  std::optional<std::string> take(const std::string& sec, const std::string& key) {
    auto s = kv.find(sec);
    if (s == kv.end()) return std::nullopt;
    auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    used[sec][key] = true;
    return k->second;
  }
  void fail_on_leftovers() const {
    for (const auto& [sec, keys] : kv)
      for (const auto& [key, val] : keys) {
        auto s = used.find(sec);
        if (s == used.end() || !s->second.count(key))
          throw std::invalid_argument("config: unknown key '" + key + "' in section [" + sec + "]");
      }
  }
};

Profile parse_profile(KvStore& store, int i, int j) {
  const std::string base = "entry." + std::to_string(i + 1) + "." + std::to_string(j + 1) + ".";
  Profile prof;
  bool any = false;
  if (auto v = store.take("potential", base + "amplitude_re")) {
    prof.amplitude.real(parse_double(base + "amplitude_re", *v));
    any = true;
  }
  if (auto v = store.take("potential", base + "amplitude_im")) {
    prof.amplitude.imag(parse_double(base + "amplitude_im", *v));
    any = true;
  }
  if (auto v = store.take("potential", base + "perp")) {
    prof.perp.kind = envelope_kind_from_name(*v);
    any = true;
  }
  if (auto v = store.take("potential", base + "perp_param"))
    prof.perp.param = parse_double(base + "perp_param", *v);
  if (auto v = store.take("potential", base + "long")) {
    prof.longitudinal = Envelope{envelope_kind_from_name(*v), 1.0};
  }
  if (auto v = store.take("potential", base + "long_param")) {
    if (!prof.longitudinal)
      throw std::invalid_argument("config: " + base + "long_param without " + base + "long");
    prof.longitudinal->param = parse_double(base + "long_param", *v);
  }
  (void)any;
  return prof;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  KvStore store;
  std::string section;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config: malformed section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (section.empty())
      throw std::invalid_argument("config: key '" + key + "' outside any section");
    if (store.kv[section].count(key))
      throw std::invalid_argument("config: duplicate key '" + key + "' in [" + section + "]");
    store.kv[section][key] = val;
  }

  ExperimentConfig cfg;
  if (auto v = store.take("model", "family")) cfg.model.family = family_from_name(*v);
  if (auto v = store.take("model", "b")) cfg.model.b = parse_double("b", *v);
  if (auto v = store.take("model", "d")) cfg.model.d = static_cast<int>(parse_int("d", *v));

  if (auto v = store.take("truncation", "n_levels"))
    cfg.trunc.n_levels = static_cast<int>(parse_int("n_levels", *v));
  if (auto v = store.take("truncation", "m_per_level"))
    cfg.trunc.m_per_level = static_cast<int>(parse_int("m_per_level", *v));
  {
    auto l = store.take("truncation", "box_half_length");
    auto n = store.take("truncation", "n_x");
    if (l.has_value() != n.has_value())
      throw std::invalid_argument("config: box_half_length and n_x must be given together");
    if (l) cfg.trunc.longitudinal = Longitudinal{parse_double("box_half_length", *l),
                                                 static_cast<int>(parse_int("n_x", *n))};
  }

  cfg.pot.rows = cfg.model.family == Family::Schrodinger2d ? 1 : 2;
  if (auto v = store.take("potential", "rows")) {
    const int r = static_cast<int>(parse_int("rows", *v));
    if (r != cfg.pot.rows)
      throw std::invalid_argument("config: potential rows inconsistent with the operator family");
  }
  for (int i = 0; i < cfg.pot.rows; ++i)
    for (int j = 0; j < cfg.pot.rows; ++j) cfg.pot.entry(i, j) = parse_profile(store, i, j);

  if (auto v = store.take("lt", "p")) cfg.lt_p = parse_double("p", *v);
  if (auto v = store.take("lt", "eps")) cfg.lt_eps = parse_double("eps", *v);
  if (auto v = store.take("lt", "gamma")) cfg.lt_gamma = parse_double("gamma", *v);
  if (auto v = store.take("lt", "tau")) cfg.lt_tau = parse_double("tau", *v);
  if (auto v = store.take("lt", "variants")) {
    for (const auto& name : split_list(*v)) cfg.lt_variants.push_back(lt_variant_from_name(name));
  }

  if (auto v = store.take("run", "seed")) cfg.run.seed = static_cast<std::uint64_t>(parse_int("seed", *v));
  if (auto v = store.take("run", "quad_order")) cfg.run.quad_order = static_cast<int>(parse_int("quad_order", *v));
  if (auto v = store.take("run", "sup_grid_n")) cfg.run.sup_grid_n = static_cast<int>(parse_int("sup_grid_n", *v));
  if (auto v = store.take("run", "detect_zeros")) cfg.run.detect_zeros = parse_bool("detect_zeros", *v);
  if (auto v = store.take("run", "hansmann")) cfg.run.hansmann = parse_bool("hansmann", *v);
  if (auto v = store.take("run", "profile")) cfg.run.profile = parse_bool("profile", *v);
  if (auto v = store.take("run", "distortion")) cfg.run.distortion = parse_bool("distortion", *v);
  if (auto v = store.take("run", "zero_tol")) cfg.run.zero_tol = parse_double("zero_tol", *v);
  if (auto v = store.take("run", "delta")) cfg.run.delta = parse_double("delta", *v);
  if (auto v = store.take("run", "zero_levels")) cfg.run.zero_levels = static_cast<int>(parse_int("zero_levels", *v));
  if (auto v = store.take("run", "region_y_min")) cfg.run.region_y_min = parse_double("region_y_min", *v);
  if (auto v = store.take("run", "distortion_samples"))
    cfg.run.distortion_samples = parse_int("distortion_samples", *v);
  if (auto v = store.take("run", "distortion_radius"))
    cfg.run.distortion_radius = parse_double("distortion_radius", *v);

  for (int axis = 1; axis <= 8; ++axis) {
    const std::string suffix = axis == 1 ? "" : "." + std::to_string(axis);
    auto p = store.take("sweep", "param" + suffix);
    auto v = store.take("sweep", "values" + suffix);
    if (p.has_value() != v.has_value())
      throw std::invalid_argument("config: sweep param and values must come in pairs");
    if (!p) continue;
    SweepAxis ax;
    ax.path = trim(*p);
    ExperimentConfig::check_path(ax.path);
    for (const auto& item : split_list(*v)) ax.values.push_back(parse_double("values", item));
    if (ax.values.empty()) throw std::invalid_argument("config: empty sweep value list");
    cfg.sweeps.push_back(std::move(ax));
  }

  if (auto v = store.take("output", "stem")) cfg.out_stem = *v;

  store.fail_on_leftovers();
  cfg.model.validate();
  cfg.trunc.validate(cfg.model);
  cfg.pot.validate(cfg.model);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void ExperimentConfig::check_path(const std::string& path) {
  static const std::vector<std::string> fixed = {
      "model.b",         "truncation.n_levels", "truncation.m_per_level",
      "truncation.n_x",  "truncation.box_half_length",
      "lt.p",            "lt.eps",              "lt.tau",
      "run.quad_order",
  };
  if (std::find(fixed.begin(), fixed.end(), path) != fixed.end()) return;
  // potential.entry.<i>.<j>.<field>
  if (path.rfind("potential.entry.", 0) == 0) {
    const std::string rest = path.substr(16);
    int i = 0, j = 0;
    char field[32] = {0};
    if (std::sscanf(rest.c_str(), "%d.%d.%31s", &i, &j, field) == 3 && i >= 1 && i <= 2 &&
        j >= 1 && j <= 2) {
      const std::string f = field;
      if (f == "amplitude_re" || f == "amplitude_im" || f == "perp_param" || f == "long_param")
        return;
    }
  }
  throw std::invalid_argument("config: sweep path does not name a sweepable field: " + path);
}

void ExperimentConfig::set_path(const std::string& path, double value) {
  check_path(path);
  if (path == "model.b") { model.b = value; return; }
  if (path == "truncation.n_levels") { trunc.n_levels = static_cast<int>(value); return; }
  if (path == "truncation.m_per_level") { trunc.m_per_level = static_cast<int>(value); return; }
  if (path == "truncation.n_x") {
    if (!trunc.longitudinal) throw std::invalid_argument("set_path: no longitudinal box");
    trunc.longitudinal->n_x = static_cast<int>(value);
    return;
  }
  if (path == "truncation.box_half_length") {
    if (!trunc.longitudinal) throw std::invalid_argument("set_path: no longitudinal box");
    trunc.longitudinal->box_half_length = value;
    return;
  }
  if (path == "lt.p") { lt_p = value; return; }
  if (path == "lt.eps") { lt_eps = value; return; }
  if (path == "lt.tau") { lt_tau = value; return; }
  if (path == "run.quad_order") { run.quad_order = static_cast<int>(value); return; }
  const std::string rest = path.substr(16);
  int i = 0, j = 0;
  char field[32] = {0};
  std::sscanf(rest.c_str(), "%d.%d.%31s", &i, &j, field);
  if (i > pot.rows || j > pot.rows)
    throw std::invalid_argument("set_path: potential entry out of range: " + path);
  Profile& prof = pot.entry(i - 1, j - 1);
  const std::string f = field;
  if (f == "amplitude_re") prof.amplitude.real(value);
  else if (f == "amplitude_im") prof.amplitude.imag(value);
  else if (f == "perp_param") prof.perp.param = value;
  else if (f == "long_param") {
    if (!prof.longitudinal) throw std::invalid_argument("set_path: entry has no longitudinal envelope");
    prof.longitudinal->param = value;
  }
}

std::vector<LTVariant> ExperimentConfig::effective_variants() const {
  if (!lt_variants.empty()) return lt_variants;
  std::vector<LTVariant> v{LTVariant::Abstract};
  switch (model.family) {
    case Family::Schrodinger2d:
      v.push_back(LTVariant::Schrodinger);
      v.push_back(LTVariant::SchrodingerBounded);
      break;
    case Family::Pauli2d:
    case Family::Pauli2dGeneral:
      v.push_back(LTVariant::Pauli2d);
      v.push_back(LTVariant::Pauli2dBounded);
      break;
    case Family::Pauli3d:
      v = {LTVariant::Pauli3d};
      break;
  }
  if (lt_tau) v.push_back(LTVariant::Tail);
  return v;
}

LTConfig ExperimentConfig::lt_config(LTVariant v) const {
  LTConfig c;
  c.variant = v;
  c.p = lt_p;
  c.eps = lt_eps;
  c.gamma = lt_gamma;
  c.tau = lt_tau;
  c.family = model.family;
  c.d = model.d;
  switch (model.family) {
    case Family::Schrodinger2d: c.tail_base = LTVariant::Schrodinger; break;
    case Family::Pauli2d:
    case Family::Pauli2dGeneral: c.tail_base = LTVariant::Pauli2d; break;
    case Family::Pauli3d: c.tail_base = LTVariant::Pauli3d; break;
  }
  return c;
}

namespace {

void emit(std::ostringstream& os, const std::string& key, double v) {
  os << key << "=";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf << "\n";
}

}  // namespace

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "model.family=" << family_name(model.family) << "\n";
  emit(os, "model.b", model.b);
  emit(os, "model.d", model.d);
  emit(os, "truncation.n_levels", trunc.n_levels);
  emit(os, "truncation.m_per_level", trunc.m_per_level);
  if (trunc.longitudinal) {
    emit(os, "truncation.box_half_length", trunc.longitudinal->box_half_length);
    emit(os, "truncation.n_x", trunc.longitudinal->n_x);
  }
  for (int i = 0; i < pot.rows; ++i)
    for (int j = 0; j < pot.rows; ++j) {
      const Profile& p = pot.entry(i, j);
      const std::string base =
          "potential.entry." + std::to_string(i + 1) + "." + std::to_string(j + 1) + ".";
      emit(os, base + "amplitude_re", p.amplitude.real());
      emit(os, base + "amplitude_im", p.amplitude.imag());
      os << base << "perp=" << envelope_kind_name(p.perp.kind) << "\n";
      emit(os, base + "perp_param", p.perp.param);
      if (p.longitudinal) {
        os << base << "long=" << envelope_kind_name(p.longitudinal->kind) << "\n";
        emit(os, base + "long_param", p.longitudinal->param);
      }
    }
  emit(os, "lt.p", lt_p);
  emit(os, "lt.eps", lt_eps);
  emit(os, "lt.gamma", lt_gamma);
  if (lt_tau) emit(os, "lt.tau", *lt_tau);
  for (LTVariant v : effective_variants()) os << "lt.variant=" << lt_variant_name(v) << "\n";
  emit(os, "run.seed", static_cast<double>(run.seed));
  emit(os, "run.quad_order", run.quad_order);
  emit(os, "run.zero_tol", run.zero_tol);
  emit(os, "run.delta", run.delta);
  emit(os, "run.zero_levels", run.zero_levels);
  if (run.region_y_min) emit(os, "run.region_y_min", *run.region_y_min);
  emit(os, "run.distortion_samples", static_cast<double>(run.distortion_samples));
  emit(os, "run.distortion_radius", run.distortion_radius);
  for (const auto& ax : sweeps) {
    os << "sweep.param=" << ax.path << "\n";
    for (double v : ax.values) emit(os, "sweep.value", v);
  }
  return os.str();
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(canonical()); }

}  // namespace magspec
