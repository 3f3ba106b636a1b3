// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

#include <polmoments/io.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

namespace polmoments::io {

namespace {

constexpr double kDeg = kPi / 180.0;

Json num(double v) { return round12(v); }

Json vec_json(const Vec3& v) { return Json::array({num(v(0)), num(v(1)), num(v(2))}); }

Json mat_json(const Mat3& m) {
  Json rows = Json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(vec_json(m.row(i).transpose()));
  return rows;
}

[[noreturn]] void schema(const std::string& msg) { throw SpecError("state spec: " + msg); }

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema(std::string("missing field '") + key + "'");
  return j.at(key);
}

int get_int(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number_integer()) schema(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

double get_double(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number()) schema(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::optional<int> opt_int(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_int(j, key);
}

Complex get_complex(const Json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  schema("complex entries must be numbers or [re, im] pairs");
}

Complex opt_complex(const Json& j, const char* key) {
  if (!j.contains(key)) return {0.0, 0.0};
  return get_complex(j.at(key));
}

Vec3 get_vec3(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_array() || v.size() != 3) schema(std::string("field '") + key + "' must be a 3-vector");
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) schema(std::string("field '") + key + "' must be numeric");
    out(i) = v[i].get<double>();
  }
  return out;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw SpecError("malformed number '" + s + "' in " + what);
  }
}

long parse_long(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw SpecError("malformed integer '" + s + "' in " + what);
  }
}

std::size_t column_index(const TableFile& t, const std::string& name, const std::string& what) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return i;
  throw SpecError(what + ": missing column '" + name + "'");
}

std::string manifold_label(const std::optional<int>& m) { return m ? std::to_string(*m) : "averaged"; }

std::optional<int> parse_manifold(const TableFile& t, const std::string& what) {
  const auto v = t.header_value("manifold");
  if (!v || *v == "averaged") return std::nullopt;
  return static_cast<int>(parse_long(*v, what));
}

void header_line(std::ostringstream& os, const std::string& key, const std::string& value) {
  os << "# " << key << ' ' << value << '\n';
}

}  // namespace

// ---------------------------------------------------------------------------

double round12(double v) {
  if (!std::isfinite(v)) return v;
  if (v == 0.0) return 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", round12(v));
  return buf;
}

// ---------------------------------------------------------------------------

StateSpec parse_state_spec(const Json& j) {
  try {
    const Json& t = require(j, "type");
    if (!t.is_string()) schema("'type' must be a string");
    const std::string type = t.get<std::string>();
    if (type == "fock") return FockSpec{get_int(j, "horizontal"), get_int(j, "vertical")};
    if (type == "su2_coherent") {
      double theta = j.contains("theta_degrees") ? get_double(j, "theta_degrees") * kDeg
                                                 : (j.contains("theta") ? get_double(j, "theta") : 0.0);
      double phi = j.contains("phi_degrees") ? get_double(j, "phi_degrees") * kDeg
                                             : (j.contains("phi") ? get_double(j, "phi") : 0.0);
      return Su2CoherentSpec{get_int(j, "photons"), theta, phi};
    }
    if (type == "nn") return TwinFockSpec{get_int(j, "n")};
    if (type == "coherent") return CoherentSpec{get_double(j, "amplitude"), opt_int(j, "cutoff")};
    if (type == "thermal") return ThermalSpec{get_double(j, "mean_photons"), opt_int(j, "cutoff")};
    if (type == "unpolarized") return UnpolarizedSpec{get_int(j, "photons")};
    if (type == "su2_invariant") {
      const Json& w = require(j, "weights");
      if (!w.is_array()) schema("'weights' must be an array");
      Su2InvariantSpec s;
      for (const auto& x : w) {
        if (!x.is_number()) schema("'weights' must be numeric");
        s.weights.push_back(x.get<double>());
      }
      return s;
    }
    if (type == "explicit") {
      ExplicitSpec s;
      s.photons = get_int(j, "photons");
      if (s.photons < 0) schema("'photons' must be non-negative");
      const Json& m = require(j, "matrix");
      const auto dim = static_cast<std::size_t>(s.photons + 1);
      if (!m.is_array() || m.size() != dim) schema("'matrix' must have N+1 rows");
      s.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
      for (std::size_t r = 0; r < dim; ++r) {
        if (!m[r].is_array() || m[r].size() != dim) schema("'matrix' must be square with N+1 columns");
        for (std::size_t c = 0; c < dim; ++c)
          s.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = get_complex(m[r][c]);
      }
      if (j.contains("weight")) s.weight = get_double(j, "weight");
      return s;
    }
    if (type == "superposition") {
      SuperpositionSpec s;
      s.photons = get_int(j, "photons");
      const Json& a = require(j, "amplitudes");
      if (!a.is_array()) schema("'amplitudes' must be an array");
      s.amplitudes.resize(static_cast<Eigen::Index>(a.size()));
      for (std::size_t i = 0; i < a.size(); ++i) s.amplitudes(static_cast<Eigen::Index>(i)) = get_complex(a[i]);
      return s;
    }
    if (type == "mixture") {
      const Json& comps = require(j, "components");
      if (!comps.is_array() || comps.empty()) schema("'components' must be a non-empty array");
      MixtureSpec s;
      for (const auto& c : comps) s.components.push_back({get_double(c, "weight"), parse_state_spec(require(c, "state"))});
      return s;
    }
    if (type == "rotated") {
      double angle = 0.0;
      if (j.contains("angle_degrees")) angle = get_double(j, "angle_degrees") * kDeg;
      else angle = get_double(j, "angle");
      return make_rotated(parse_state_spec(require(j, "state")), get_vec3(j, "axis"), angle);
    }
    if (type == "unpol_family") {
      UnpolFamilyParams p;
      p.rho11 = get_double(j, "rho11");
      p.rho12 = opt_complex(j, "rho12");
      p.rho13 = opt_complex(j, "rho13");
      p.rho14 = opt_complex(j, "rho14");
      const auto state = unpol_family(p);
      return ExplicitSpec{3, state.manifolds()[0].density.matrix(), 1.0};
    }
    schema("unknown type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    schema(e.what());
  }
}

Json load_json_argument(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw SpecError(std::string("malformed inline JSON: ") + e.what());
    }
  }
  return read_json_file(text);
}

std::string digest(const Json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError("malformed JSON in " + path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& content, std::ostream& stdout_stream) {
  if (path.empty() || path == "-") {
    stdout_stream << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string timestamp_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<std::string> TableFile::header_value(const std::string& key) const {
  for (const auto& [k, v] : header)
    if (k == key) return v;
  return std::nullopt;
}

TableFile parse_table(const std::string& text) {
  TableFile t;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      auto body = line.substr(first + 1);
      const auto start = body.find_first_not_of(" \t");
      if (start == std::string::npos) continue;
      body = body.substr(start);
      const auto sp = body.find_first_of(" \t");
      const std::string key = body.substr(0, sp);
      const auto value_start = sp == std::string::npos ? std::string::npos : body.find_first_not_of(" \t", sp);
      const std::string rest = value_start == std::string::npos ? "" : body.substr(value_start);
      if (key == "columns") t.columns = split_ws(rest);
      t.header.emplace_back(key, rest);
      continue;
    }
    auto tokens = split_ws(line);
    if (!t.columns.empty() && tokens.size() != t.columns.size())
      throw SpecError("table row has " + std::to_string(tokens.size()) + " fields, expected " +
                      std::to_string(t.columns.size()));
    t.rows.push_back(std::move(tokens));
  }
  return t;
}

// ---------------------------------------------------------------------------

std::string format_scan(const SphereScan& scan, const ScanMeta& meta) {
  std::ostringstream os;
  os << "# polmoments scan\n";
  if (meta.timestamp) header_line(os, "generated", timestamp_now());
  header_line(os, "state", meta.state_digest.empty() ? "-" : meta.state_digest);
  header_line(os, "order", std::to_string(scan.order));
  header_line(os, "quantity", scan.order % 2 == 1 ? "abs_central_moment" : "central_moment");
  header_line(os, "grid", to_string(scan.grid));
  header_line(os, "points", std::to_string(scan.directions.size()));
  header_line(os, "manifold", manifold_label(scan.manifold));
  header_line(os, "columns", "theta phi n1 n2 n3 value");
  for (std::size_t i = 0; i < scan.directions.size(); ++i) {
    const auto& d = scan.directions[i];
    os << format_number(d.theta()) << ' ' << format_number(d.phi()) << ' ' << format_number(d.unit()(0)) << ' '
       << format_number(d.unit()(1)) << ' ' << format_number(d.unit()(2)) << ' '
       << format_number(scan.display_value(i)) << '\n';
  }
  return os.str();
}

std::vector<ScanRow> parse_scan(const std::string& text) {
  const auto t = parse_table(text);
  const std::string what = "scan file";
  const auto it = column_index(t, "theta", what), ip = column_index(t, "phi", what);
  const auto i1 = column_index(t, "n1", what), i2 = column_index(t, "n2", what), i3 = column_index(t, "n3", what);
  const auto iv = column_index(t, "value", what);
  std::vector<ScanRow> rows;
  for (const auto& r : t.rows) {
    ScanRow s;
    s.theta = parse_double(r[it], what);
    s.phi = parse_double(r[ip], what);
    s.n = Vec3(parse_double(r[i1], what), parse_double(r[i2], what), parse_double(r[i3], what));
    s.value = parse_double(r[iv], what);
    rows.push_back(s);
  }
  if (const auto pts = t.header_value("points"); pts && parse_long(*pts, what) != static_cast<long>(rows.size()))
    throw SpecError("scan file row count does not match its header");
  return rows;
}

// ---------------------------------------------------------------------------

std::string format_observations(const MomentObservations& obs, bool timestamp) {
  std::ostringstream os;
  os << "# polmoments observations\n";
  if (timestamp) header_line(os, "generated", timestamp_now());
  header_line(os, "manifold", manifold_label(obs.manifold));
  header_line(os, "columns", "theta phi order value stderr");
  for (const auto& o : obs.items) {
    os << format_number(o.direction.theta()) << ' ' << format_number(o.direction.phi()) << ' ' << o.order << ' '
       << format_number(o.value) << ' ' << (o.stderr_value ? format_number(*o.stderr_value) : "-") << '\n';
  }
  return os.str();
}

MomentObservations parse_observations(const std::string& text) {
  const auto t = parse_table(text);
  const std::string what = "observations file";
  const auto it = column_index(t, "theta", what), ip = column_index(t, "phi", what);
  const auto io_ = column_index(t, "order", what), iv = column_index(t, "value", what);
  const auto is = column_index(t, "stderr", what);
  MomentObservations obs;
  obs.manifold = parse_manifold(t, what);
  for (const auto& r : t.rows) {
    Observation o;
    o.direction = Direction::from_angles(parse_double(r[it], what), parse_double(r[ip], what));
    o.order = static_cast<int>(parse_long(r[io_], what));
    if (o.order < 1) throw SpecError("observation order must be at least 1");
    o.value = parse_double(r[iv], what);
    if (r[is] != "-") {
      o.stderr_value = parse_double(r[is], what);
      if (*o.stderr_value < 0) throw SpecError("negative stderr in observations file");
    }
    obs.items.push_back(o);
  }
  obs.max_order();  // validates contiguity
  return obs;
}

// ---------------------------------------------------------------------------

std::string format_counts(const std::vector<CountsRecord>& records, bool timestamp) {
  std::ostringstream os;
  os << "# polmoments counts\n";
  if (timestamp) header_line(os, "generated", timestamp_now());
  if (!records.empty()) header_line(os, "trials", std::to_string(records.front().trials));
  header_line(os, "columns", "run theta phi N k raw calibrated");
  for (const auto& rec : records) {
    for (const auto& c : rec.counts) {
      os << rec.run << ' ' << format_number(rec.direction.theta()) << ' ' << format_number(rec.direction.phi()) << ' '
         << c.photons << ' ' << c.k << ' ' << c.raw << ' ' << format_number(c.calibrated) << '\n';
    }
  }
  return os.str();
}

std::vector<CountsRecord> parse_counts(const std::string& text) {
  const auto t = parse_table(text);
  const std::string what = "counts file";
  const auto ir = column_index(t, "run", what), it = column_index(t, "theta", what), ip = column_index(t, "phi", what);
  const auto in = column_index(t, "N", what), ik = column_index(t, "k", what);
  const auto iraw = column_index(t, "raw", what), ical = column_index(t, "calibrated", what);
  long trials = 0;
  if (const auto v = t.header_value("trials")) trials = parse_long(*v, what);
  std::vector<CountsRecord> out;
  std::string last_key;
  for (const auto& r : t.rows) {
    const std::string key = r[ir] + ' ' + r[it] + ' ' + r[ip];
    if (out.empty() || key != last_key) {
      CountsRecord rec;
      rec.run = static_cast<int>(parse_long(r[ir], what));
      rec.direction = Direction::from_angles(parse_double(r[it], what), parse_double(r[ip], what));
      rec.trials = trials;
      out.push_back(rec);
      last_key = key;
    }
    OutcomeCount c;
    c.photons = static_cast<int>(parse_long(r[in], what));
    c.k = static_cast<int>(parse_long(r[ik], what));
    c.raw = parse_long(r[iraw], what);
    c.calibrated = parse_double(r[ical], what);
    if (c.raw < 0 || c.calibrated < 0) throw SpecError("negative counts in counts file");
    out.back().counts.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string format_directions(const DirectionSet& set, bool timestamp) {
  std::ostringstream os;
  os << "# polmoments directions\n";
  if (timestamp) header_line(os, "generated", timestamp_now());
  header_line(os, "label", set.label);
  header_line(os, "points", std::to_string(set.size()));
  header_line(os, "columns", "theta phi");
  for (const auto& d : set.directions) os << format_number(d.theta()) << ' ' << format_number(d.phi()) << '\n';
  return os.str();
}

DirectionSet parse_directions(const std::string& text) {
  const auto t = parse_table(text);
  const std::string what = "directions file";
  const auto it = column_index(t, "theta", what), ip = column_index(t, "phi", what);
  std::vector<Direction> dirs;
  for (const auto& r : t.rows) dirs.push_back(Direction::from_angles(parse_double(r[it], what), parse_double(r[ip], what)));
  return make_direction_set(t.header_value("label").value_or("custom"), std::move(dirs));
}

DirectionSet resolve_directions(const std::string& label_or_path) {
  if (label_or_path == "canonical-2nd") return canonical_directions(2);
  if (label_or_path == "canonical-3rd-paper") return canonical_directions(3, DirectionVariant::Paper);
  if (label_or_path == "canonical-3rd-minimal") return canonical_directions(3, DirectionVariant::Minimal);
  return parse_directions(read_text_file(label_or_path));
}

// ---------------------------------------------------------------------------

DetectorConfig parse_detector_config(const Json& j) {
  if (!j.is_object()) throw SpecError("detector config must be a JSON object");
  try {
    DetectorConfig c;
    if (j.contains("preset")) c = DetectorConfig::preset(j.at("preset").get<std::string>());
    if (j.contains("channels")) {
      const auto& ch = j.at("channels");
      if (!ch.is_array() || ch.size() != 4) throw SpecError("detector config: 'channels' needs four values");
      for (int i = 0; i < 4; ++i) c.channels[i] = ch[i].get<double>();
    }
    if (j.contains("splitter")) c.splitter = j.at("splitter").get<double>();
    if (j.contains("class_overrides")) {
      for (const auto& o : j.at("class_overrides"))
        c.class_overrides[{o.at("photons").get<int>(), o.at("k").get<int>()}] = o.at("efficiency").get<double>();
    }
    if (j.contains("trials")) c.trials = j.at("trials").get<long>();
    if (j.contains("runs")) c.runs = j.at("runs").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("exact")) c.exact = j.at("exact").get<bool>();
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("detector config: ") + e.what());
  }
}

Json detector_config_to_json(const DetectorConfig& c) {
  Json j;
  j["channels"] = Json::array({num(c.channels[0]), num(c.channels[1]), num(c.channels[2]), num(c.channels[3])});
  j["splitter"] = num(c.splitter);
  Json overrides = Json::array();
  for (const auto& [key, e] : c.class_overrides)
    overrides.push_back({{"photons", key.first}, {"k", key.second}, {"efficiency", num(e)}});
  j["class_overrides"] = overrides;
  j["trials"] = c.trials;
  j["runs"] = c.runs;
  j["seed"] = c.seed;
  j["exact"] = c.exact;
  return j;
}

// ---------------------------------------------------------------------------

Json pack_to_json(const SymmetricPack& pack, const std::vector<double>* stderr_values) {
  Json entries = Json::array();
  const auto& idx = SymmetricPack::indices(pack.order());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    Json e;
    e["a"] = idx[i].a;
    e["b"] = idx[i].b;
    e["c"] = idx[i].c;
    e["value"] = num(pack[i]);
    e["hermitian_sum"] = num(multinomial(idx[i]) * pack[i]);
    if (stderr_values) e["stderr"] = num((*stderr_values)[i]);
    entries.push_back(e);
  }
  return {{"order", pack.order()}, {"entries", entries}};
}

SymmetricPack pack_from_json(const Json& j) {
  try {
    const int order = j.at("order").get<int>();
    SymmetricPack p(order);
    for (const auto& e : j.at("entries")) {
      const MultiIndex m{e.at("a").get<int>(), e.at("b").get<int>(), e.at("c").get<int>()};
      if (m.order() != order) throw SpecError("pack entry order mismatch");
      p.at(m) = e.at("value").get<double>();
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed pack: ") + e.what());
  }
}

Json covariance_to_json(const CovarianceMatrix& c) {
  Json vecs = Json::array();
  for (int i = 0; i < 3; ++i) vecs.push_back(vec_json(c.eigenvectors.col(i)));
  return {{"gamma", mat_json(c.gamma)},
          {"eigenvalues", vec_json(c.eigenvalues)},
          {"eigenvectors", vecs},
          {"degenerate", c.degenerate}};
}

namespace {

void tensors_json(Json& j, const MomentTensors& t, const std::vector<std::vector<double>>* raw_se,
                  const std::vector<std::vector<double>>* central_se) {
  j["stokes_vector"] = vec_json(t.stokes_vector());
  if (t.max_order >= 2) {
    j["second_raw"] = mat_json(t.second_raw_matrix());
    j["covariance"] = covariance_to_json(covariance(t));
  }
  Json raw = Json::array(), central = Json::array();
  for (int r = 0; r < t.max_order; ++r) {
    raw.push_back(pack_to_json(t.raw[r], raw_se ? &(*raw_se)[r] : nullptr));
    central.push_back(pack_to_json(t.central[r], central_se ? &(*central_se)[r] : nullptr));
  }
  j["raw_packs"] = raw;
  j["central_packs"] = central;
}

Json selection_json(const std::optional<int>& m) {
  if (m) return {{"mode", "manifold"}, {"photons", *m}};
  return {{"mode", "averaged"}};
}

}  // namespace

Json moments_report(const PolarizationState& state, const MomentTensors& tensors,
                    const std::optional<UncertaintyReport>& uncertainty) {
  Json j;
  j["kind"] = "moments";
  j["selection"] = selection_json(tensors.manifold);
  Json manifolds = Json::array();
  for (const auto& m : state.manifolds()) manifolds.push_back({{"photons", m.density.photons()}, {"weight", num(m.weight)}});
  j["manifolds"] = manifolds;
  j["vacuum_weight"] = num(state.vacuum_weight());
  if (tensors.manifold && *tensors.manifold == 0) j["notice"] = "vacuum has no polarization";
  j["max_order"] = tensors.max_order;
  tensors_json(j, tensors, nullptr, nullptr);
  if (uncertainty) {
    j["uncertainty"] = {{"lower", num(uncertainty->lower)},
                        {"sum", num(uncertainty->sum)},
                        {"upper", num(uncertainty->upper)},
                        {"lower_saturated", uncertainty->lower_saturated},
                        {"upper_saturated", uncertainty->upper_saturated}};
  }
  return j;
}

Json reconstruction_report(const ReconstructionResult& result, const std::optional<MisalignmentFit>& fit) {
  Json j;
  j["kind"] = "reconstruction";
  j["selection"] = selection_json(result.tensors.manifold);
  j["max_order"] = result.tensors.max_order;
  Json orders = Json::array();
  for (const auto& o : result.orders) {
    orders.push_back({{"order", o.order},
                      {"equations", o.equations},
                      {"rank", o.rank},
                      {"condition", num(o.condition)},
                      {"residual", num(o.residual)},
                      {"weighted", o.weighted}});
  }
  j["orders"] = orders;
  j["residual_norm"] = num(result.residual_norm);
  j["max_condition"] = num(result.max_condition);
  j["warnings"] = result.warnings;
  tensors_json(j, result.tensors, result.raw_stderr ? &*result.raw_stderr : nullptr,
               result.central_stderr ? &*result.central_stderr : nullptr);
  if (fit) {
    j["misalignment"] = {{"angle_degrees", num(fit->angle_degrees)},
                         {"axis", vec_json(fit->axis)},
                         {"rotation", mat_json(fit->rotation)},
                         {"residual_before", num(fit->residual_before)},
                         {"residual_after", num(fit->residual_after)},
                         {"degenerate", fit->degenerate},
                         {"note", fit->note}};
  }
  return j;
}

MomentTensors tensors_from_report(const Json& report) {
  if (!report.is_object() || !report.contains("raw_packs")) throw SpecError("report has no 'raw_packs'");
  std::vector<SymmetricPack> raw;
  for (const auto& p : report.at("raw_packs")) raw.push_back(pack_from_json(p));
  std::optional<int> manifold;
  if (report.contains("selection") && report["selection"].value("mode", "") == "manifold")
    manifold = report["selection"].at("photons").get<int>();
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (raw[i].order() != static_cast<int>(i) + 1) throw SpecError("report packs are not ordered 1..R");
  return MomentTensors::from_raw(std::move(raw), manifold);
}

Json classification_report(const IsotropyReport& report, const std::optional<PolarizationClass>& cls) {
  Json j;
  j["kind"] = "classification";
  j["selection"] = selection_json(report.manifold);
  j["tolerance"] = report.tolerance;
  j["grid_points"] = report.grid_points;
  Json orders = Json::array();
  for (const auto& o : report.orders) {
    Json e;
    e["order"] = o.order;
    e["isotropic"] = o.isotropic;
    e["criterion"] = o.order == 1 ? "raw" : "central";
    e["spread"] = num(o.spread);
    e["raw_isotropic"] = o.raw_isotropic;
    e["raw_spread"] = num(o.raw_spread);
    e["raw_constant"] = o.raw_constant ? Json(num(*o.raw_constant)) : Json(nullptr);
    e["central_isotropic"] = o.central_isotropic;
    e["central_spread"] = num(o.central_spread);
    e["central_constant"] = o.central_constant ? Json(num(*o.central_constant)) : Json(nullptr);
    orders.push_back(e);
  }
  j["orders"] = orders;
  if (cls) {
    Json inv = Json::array();
    for (bool b : cls->invariant) inv.push_back(b ? "Yes" : "No");
    j["class"] = {{"invariant", inv}, {"row", cls->row}, {"label", cls->label}};
  }
  return j;
}

Json parameter_counts_report(const ParameterCounts& c) {
  Json j;
  j["kind"] = "parameter_counts";
  j["photons"] = c.photons;
  j["per_order"] = c.per_order;
  j["cumulative"] = c.cumulative;
  j["full_tomography"] = c.full_tomography;
  j["state_parameters"] = c.state_parameters;
  j["coherence_matrix"] = c.coherence_matrix;
  return j;
}

}  // namespace polmoments::io
