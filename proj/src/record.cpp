// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "magspec/record.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace magspec {

using nlohmann::json;

namespace {

json lt_to_json(const LTRecord& r) {
  json j{{"variant", r.variant}, {"p", r.p},     {"eps", r.eps}, {"gamma", r.gamma},
         {"sum", r.sum},         {"k", r.k},     {"ratio", r.ratio}, {"terms", r.terms}};
  if (r.tau) j["tau"] = *r.tau;
  else j["tau"] = nullptr;
  return j;
}

LTRecord lt_from_json(const json& j) {
  LTRecord r;
  r.variant = j.at("variant").get<std::string>();
  r.p = j.at("p").get<double>();
  r.eps = j.at("eps").get<double>();
  r.gamma = j.at("gamma").get<double>();
  if (!j.at("tau").is_null()) r.tau = j.at("tau").get<double>();
  r.sum = j.at("sum").get<double>();
  r.k = j.at("k").get<double>();
  r.ratio = j.at("ratio").get<double>();
  r.terms = j.at("terms").get<std::vector<double>>();
  return r;
}

// NaN/inf are not representable in strict JSON; box them as strings.
json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double unnum(const json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  throw std::invalid_argument("record: bad numeric field: " + s);
}

}  // namespace

std::string RunRecord::to_jsonl() const {
  json j;
  j["schema"] = schema;
  j["config_hash"] = config_hash;
  j["sweep_index"] = sweep_index;
  j["sweep"] = sweep;
  j["timestamp"] = timestamp;
  j["seed"] = seed;
  j["family"] = family;
  j["b"] = b;
  j["d"] = d;
  j["dim"] = dim;
  j["v_sup"] = v_sup;
  j["error"] = error;
  j["spectrum"] = spectrum;
  j["lt"] = json::array();
  for (const auto& r : lt) j["lt"].push_back(lt_to_json(r));
  j["hansmann"] = hansmann ? json(*hansmann) : json(nullptr);
  j["box_ok"] = box_ok ? json(*box_ok) : json(nullptr);
  if (resolvent) j["resolvent"] = json::array({num((*resolvent)[0]), num((*resolvent)[1])});
  else j["resolvent"] = nullptr;
  if (distortion) {
    json d6 = json::array();
    for (double v : *distortion) d6.push_back(num(v));
    j["distortion"] = d6;
  } else {
    j["distortion"] = nullptr;
  }
  if (zeros) {
    j["zeros"] = json{{"zero_count", zeros->zero_count},
                      {"eig_in_region", zeros->eig_in_region},
                      {"max_mismatch", num(zeros->max_mismatch)},
                      {"residual", num(zeros->residual)},
                      {"region", {zeros->region_x0, zeros->region_y0, zeros->region_x1, zeros->region_y1}}};
  } else {
    j["zeros"] = nullptr;
  }
  j["rects"] = json::array();
  for (const auto& r : rects) j["rects"].push_back({r.x_left, r.x_right, r.height, r.level});
  return j.dump();
}

RunRecord RunRecord::from_jsonl(const std::string& line) {
  const json j = json::parse(line);
  RunRecord r;
  r.schema = j.at("schema").get<std::string>();
  if (r.schema != "magspec.run.v1")
    throw std::invalid_argument("record: unsupported schema " + r.schema);
  r.config_hash = j.at("config_hash").get<std::string>();
  r.sweep_index = j.at("sweep_index").get<int>();
  r.sweep = j.at("sweep").get<std::map<std::string, double>>();
  r.timestamp = j.at("timestamp").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.family = j.at("family").get<std::string>();
  r.b = j.at("b").get<double>();
  r.d = j.at("d").get<int>();
  r.dim = j.at("dim").get<int>();
  r.v_sup = j.at("v_sup").get<double>();
  r.error = j.at("error").get<std::string>();
  r.spectrum = j.at("spectrum").get<std::vector<std::array<double, 3>>>();
  for (const auto& item : j.at("lt")) r.lt.push_back(lt_from_json(item));
  if (!j.at("hansmann").is_null()) r.hansmann = j.at("hansmann").get<std::array<double, 4>>();
  if (!j.at("box_ok").is_null()) r.box_ok = j.at("box_ok").get<bool>();
  if (!j.at("resolvent").is_null())
    r.resolvent = std::array<double, 2>{unnum(j.at("resolvent")[0]), unnum(j.at("resolvent")[1])};
  if (!j.at("distortion").is_null()) {
    std::array<double, 6> d6{};
    for (size_t i = 0; i < 6; ++i) d6[i] = unnum(j.at("distortion")[i]);
    r.distortion = d6;
  }
  if (!j.at("zeros").is_null()) {
    const json& z = j.at("zeros");
    ZeroRecord zr;
    zr.zero_count = z.at("zero_count").get<int>();
    zr.eig_in_region = z.at("eig_in_region").get<int>();
    zr.max_mismatch = unnum(z.at("max_mismatch"));
    zr.residual = unnum(z.at("residual"));
    zr.region_x0 = z.at("region")[0].get<double>();
    zr.region_y0 = z.at("region")[1].get<double>();
    zr.region_x1 = z.at("region")[2].get<double>();
    zr.region_y1 = z.at("region")[3].get<double>();
    r.zeros = zr;
  }
  for (const auto& item : j.at("rects"))
    r.rects.push_back({item[0].get<double>(), item[1].get<double>(), item[2].get<double>(),
                       item[3].get<double>()});
  return r;
}

bool RunRecord::same_results(const RunRecord& other) const {
  RunRecord a = *this, b2 = other;
  a.timestamp.clear();
  b2.timestamp.clear();
  return a.to_jsonl() == b2.to_jsonl();
}

std::vector<RunRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("records: cannot open " + path);
  std::vector<RunRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(RunRecord::from_jsonl(line));
  }
  return out;
}

void write_records(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("records: cannot write " + path);
  for (const auto& r : records) out << r.to_jsonl() << "\n";
}

namespace {

std::vector<std::string> scalar_columns(const std::vector<RunRecord>& records) {
  std::vector<std::string> cols{"sweep_index"};
  std::vector<std::string> sweep_keys;
  std::vector<std::string> variants;
  for (const auto& r : records) {
    for (const auto& [k, v] : r.sweep)
      if (std::find(sweep_keys.begin(), sweep_keys.end(), k) == sweep_keys.end())
        sweep_keys.push_back(k);
    for (const auto& l : r.lt)
      if (std::find(variants.begin(), variants.end(), l.variant) == variants.end())
        variants.push_back(l.variant);
  }
  for (const auto& k : sweep_keys) cols.push_back("sweep:" + k);
  cols.insert(cols.end(), {"dim", "v_sup", "box_ok"});
  for (const auto& v : variants) {
    cols.push_back("sum:" + v);
    cols.push_back("k:" + v);
    cols.push_back("ratio:" + v);
  }
  cols.insert(cols.end(), {"hansmann_ratio", "resolvent_sup_ratio", "resolvent_slope",
                           "distortion_inf", "zeros_count", "zeros_eig", "zeros_max_mismatch",
                           "error"});
  return cols;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string csv_header(const std::vector<RunRecord>& records) {
  const auto cols = scalar_columns(records);
  std::string out;
  for (size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ",";
    out += cols[i];
  }
  return out;
}

std::string csv_row(const RunRecord& r, const std::vector<RunRecord>& all) {
  const auto cols = scalar_columns(all);
  std::ostringstream os;
  for (size_t i = 0; i < cols.size(); ++i) {
    if (i) os << ",";
    const std::string& c = cols[i];
    if (c == "sweep_index") os << r.sweep_index;
    else if (c.rfind("sweep:", 0) == 0) {
      auto it = r.sweep.find(c.substr(6));
      if (it != r.sweep.end()) os << fmt(it->second);
    } else if (c == "dim") os << r.dim;
    else if (c == "v_sup") os << fmt(r.v_sup);
    else if (c == "box_ok") os << (r.box_ok ? (*r.box_ok ? "1" : "0") : "");
    else if (c.rfind("sum:", 0) == 0 || c.rfind("k:", 0) == 0 || c.rfind("ratio:", 0) == 0) {
      const auto colon = c.find(':');
      const std::string what = c.substr(0, colon), var = c.substr(colon + 1);
      for (const auto& l : r.lt)
        if (l.variant == var) {
          os << fmt(what == "sum" ? l.sum : what == "k" ? l.k : l.ratio);
          break;
        }
    } else if (c == "hansmann_ratio") {
      if (r.hansmann) os << fmt((*r.hansmann)[3]);
    } else if (c == "resolvent_sup_ratio") {
      if (r.resolvent) os << fmt((*r.resolvent)[0]);
    } else if (c == "resolvent_slope") {
      if (r.resolvent) os << fmt((*r.resolvent)[1]);
    } else if (c == "distortion_inf") {
      if (r.distortion) os << fmt((*r.distortion)[0]);
    } else if (c == "zeros_count") {
      if (r.zeros) os << r.zeros->zero_count;
    } else if (c == "zeros_eig") {
      if (r.zeros) os << r.zeros->eig_in_region;
    } else if (c == "zeros_max_mismatch") {
      if (r.zeros) os << fmt(r.zeros->max_mismatch);
    } else if (c == "error") {
      std::string e = r.error;
      for (char& ch : e)
        if (ch == ',' || ch == '\n') ch = ';';
      os << e;
    }
  }
  return os.str();
}

void write_csv(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("records: cannot write " + path);
  out << csv_header(records) << "\n";
  for (const auto& r : records) out << csv_row(r, records) << "\n";
}

}  // namespace magspec
