// Copyright 2026 The qprof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Record tables and their CSV / JSON / SVG renderings.
//
// records.csv has a fixed column layout:
//
//   name, origin, <15 metric columns>, exact, degenerate, stage1, stage2,
//   then for every device D in table order:
//   D/device_hash, D/g_before, D/g_after, D/l_before, D/l_after, D/f_before,
//   D/f_after, D/swap_count, D/gate_overhead, D/latency_overhead,
//   D/fidelity_decrease, D/initial_layout, D/final_layout, D/config
//
// Missing values (no cluster label, a failed mapping) are empty cells.
// Reals use the shortest representation that reads back to the same double.

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qprof/analysis.hpp"
#include "qprof/circuit.hpp"
#include "qprof/error.hpp"
#include "qprof/interaction_graph.hpp"
#include "qprof/metrics.hpp"

namespace qprof {

/// One row of a corpus study.
struct CorpusRecord {
  std::string name;
  OriginTag origin = OriginTag::unknown;
  MetricVector metrics;
  std::optional<ClusterLabel> cluster;
  std::map<std::string, MappingResult> mappings;  // keyed by device fingerprint

  SizeProfile size() const { return {metrics.n_qubits, metrics.n_gates, metrics.two_qubit_fraction}; }
  bool operator==(const CorpusRecord&) const = default;
};

struct DeviceRef {
  std::string name;
  std::string fingerprint;
  bool operator==(const DeviceRef&) const = default;
};

struct RecordTable {
  std::vector<DeviceRef> devices;  // column order
  std::vector<CorpusRecord> records;
  bool operator==(const RecordTable&) const = default;
};

/// A non-fatal failure attached to one circuit (or one circuit/device pair).
struct CorpusError {
  std::string name;
  std::string stage;  // "parse", "profile", "map:<device>"
  std::string message;
  bool operator==(const CorpusError&) const = default;
};

/// 100*(after-before)/before, or nothing when the baseline is zero.
inline std::optional<double> overhead_or_none(double before, double after) {
  if (!(before > 0.0)) return std::nullopt;
  return relative_overhead(before, after);
}

inline std::optional<double> gate_overhead_of(const MappingResult& r) {
  return overhead_or_none(static_cast<double>(r.g_before), static_cast<double>(r.g_after));
}
inline std::optional<double> latency_overhead_of(const MappingResult& r) {
  return overhead_or_none(static_cast<double>(r.l_before), static_cast<double>(r.l_after));
}
inline std::optional<double> fidelity_decrease_of(const MappingResult& r) {
  if (!(r.f_before > 0.0)) return std::nullopt;
  return fidelity_decrease(r.f_before, r.f_after);
}

inline constexpr std::array<std::string_view, 3> kMappingMetricNames = {"gate_overhead", "latency_overhead",
                                                                        "fidelity_decrease"};

inline std::optional<double> mapping_metric(const MappingResult& r, std::string_view metric) {
  if (metric == "gate_overhead") return gate_overhead_of(r);
  if (metric == "latency_overhead") return latency_overhead_of(r);
  if (metric == "fidelity_decrease") return fidelity_decrease_of(r);
  throw InvalidArgument("unknown mapping metric '" + std::string(metric) + "'");
}

inline FeatureMatrix feature_matrix(const std::vector<CorpusRecord>& records) {
  FeatureMatrix fm;
  for (auto n : kMetricNames) fm.columns.emplace_back(n);
  for (const auto& r : records) {
    fm.row_ids.push_back(r.name);
    const auto v = metric_values(r.metrics);
    fm.rows.emplace_back(v.begin(), v.end());
  }
  return fm;
}

// ---------------------------------------------------------------- text utils

inline std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_real(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
    throw InvalidArgument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

inline std::uint64_t parse_uint(std::string_view s) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InvalidArgument("not an unsigned integer: '" + std::string(s) + "'");
  }
  return v;
}

namespace csv {

inline std::string escape(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += escape(cells[i]);
  }
  out += '\n';
  return out;
}

inline std::vector<std::vector<std::string>> parse(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> cur;
  std::string cell;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      cur.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      cur.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(cur));
      cur.clear();
      any = false;
    } else {
      cell += c;
      any = true;
    }
  }
  if (quoted) throw InvalidArgument("unterminated quoted CSV field");
  if (any || !cell.empty()) {
    cur.push_back(std::move(cell));
    rows.push_back(std::move(cur));
  }
  return rows;
}

}  // namespace csv

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through a temporary sibling and renames it into place.
inline void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "': " + ec.message());
}

// ------------------------------------------------------------------ records

namespace report_detail {

inline constexpr std::array<std::string_view, 14> kDeviceColumns = {
    "device_hash",   "g_before",       "g_after",          "l_before",          "l_after",
    "f_before",      "f_after",        "swap_count",       "gate_overhead",     "latency_overhead",
    "fidelity_decrease", "initial_layout", "final_layout", "config"};

inline std::string layout_text(const std::vector<Qubit>& l) {
  std::string s;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(l[i]);
  }
  return s;
}

inline std::vector<Qubit> parse_layout(std::string_view s) {
  std::vector<Qubit> out;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = s.find(' ', i);
    if (j == std::string_view::npos) j = s.size();
    if (j > i) out.push_back(static_cast<Qubit>(parse_uint(s.substr(i, j - i))));
    i = j + 1;
  }
  return out;
}

inline std::string opt_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

}  // namespace report_detail

inline std::vector<std::string> records_csv_header(const std::vector<DeviceRef>& devices) {
  std::vector<std::string> h = {"name", "origin"};
  for (auto n : kMetricNames) h.emplace_back(n);
  for (auto n : {"exact", "degenerate", "stage1", "stage2"}) h.emplace_back(n);
  for (const auto& d : devices) {
    for (auto c : report_detail::kDeviceColumns) h.push_back(d.name + "/" + std::string(c));
  }
  return h;
}

inline std::string records_to_csv(const RecordTable& t) {
  using report_detail::opt_real;
  std::set<std::string> names;
  for (const auto& d : t.devices) {
    if (!names.insert(d.name).second) throw InvalidArgument("duplicate device name '" + d.name + "'");
  }
  std::string out = csv::row(records_csv_header(t.devices));
  for (const auto& r : t.records) {
    std::vector<std::string> cells = {r.name, std::string(origin_name(r.origin))};
    const MetricVector& m = r.metrics;
    for (const std::string& s :
         {std::to_string(m.n_qubits), std::to_string(m.n_gates), format_real(m.two_qubit_fraction),
          std::to_string(m.min_degree), std::to_string(m.max_degree), format_real(m.avg_degree),
          format_real(m.avg_shortest_path), std::to_string(m.diameter), format_real(m.density),
          format_real(m.global_clustering_coefficient), std::to_string(m.edge_connectivity),
          std::to_string(m.vertex_connectivity), std::to_string(m.max_clique_size),
          format_real(m.adjacency_weight_std), std::to_string(m.n_components)}) {
      cells.push_back(s);
    }
    cells.push_back(m.exact ? "1" : "0");
    cells.push_back(m.degenerate ? "1" : "0");
    cells.push_back(r.cluster ? std::to_string(r.cluster->stage1) : "");
    cells.push_back(r.cluster ? std::to_string(r.cluster->stage2) : "");
    for (const auto& d : t.devices) {
      auto it = r.mappings.find(d.fingerprint);
      if (it == r.mappings.end()) {
        cells.insert(cells.end(), report_detail::kDeviceColumns.size(), "");
        continue;
      }
      const MappingResult& x = it->second;
      cells.push_back(x.device_fingerprint);
      cells.push_back(std::to_string(x.g_before));
      cells.push_back(std::to_string(x.g_after));
      cells.push_back(std::to_string(x.l_before));
      cells.push_back(std::to_string(x.l_after));
      cells.push_back(format_real(x.f_before));
      cells.push_back(format_real(x.f_after));
      cells.push_back(std::to_string(x.swap_count));
      cells.push_back(opt_real(gate_overhead_of(x)));
      cells.push_back(opt_real(latency_overhead_of(x)));
      cells.push_back(opt_real(fidelity_decrease_of(x)));
      cells.push_back(report_detail::layout_text(x.initial_layout));
      cells.push_back(report_detail::layout_text(x.final_layout));
      cells.push_back(x.config);
    }
    out += csv::row(cells);
  }
  return out;
}

inline RecordTable records_from_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw InvalidArgument("records CSV is empty");
  const auto& header = rows.front();
  const auto fixed = records_csv_header({});
  if (header.size() < fixed.size() || !std::equal(fixed.begin(), fixed.end(), header.begin())) {
    throw InvalidArgument("records CSV header does not match the expected layout");
  }
  const std::size_t per = report_detail::kDeviceColumns.size();
  if ((header.size() - fixed.size()) % per != 0) throw InvalidArgument("records CSV has a partial device block");
  RecordTable t;
  for (std::size_t c = fixed.size(); c < header.size(); c += per) {
    const std::string& h = header[c];
    const std::string suffix = "/device_hash";
    if (h.size() <= suffix.size() || h.compare(h.size() - suffix.size(), suffix.size(), suffix) != 0) {
      throw InvalidArgument("unexpected column '" + h + "'");
    }
    t.devices.push_back({h.substr(0, h.size() - suffix.size()), ""});
  }
  std::vector<bool> hash_known(t.devices.size(), false);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) throw InvalidArgument("records CSV row " + std::to_string(i) + " has wrong width");
    CorpusRecord r;
    r.name = row[0];
    r.origin = origin_from_name(row[1]);
    MetricVector& m = r.metrics;
    std::size_t k = 2;
    auto U = [&]() { return static_cast<std::size_t>(parse_uint(row[k++])); };
    auto R = [&]() { return parse_real(row[k++]); };
    m.n_qubits = U();
    m.n_gates = U();
    m.two_qubit_fraction = R();
    m.min_degree = U();
    m.max_degree = U();
    m.avg_degree = R();
    m.avg_shortest_path = R();
    m.diameter = U();
    m.density = R();
    m.global_clustering_coefficient = R();
    m.edge_connectivity = U();
    m.vertex_connectivity = U();
    m.max_clique_size = U();
    m.adjacency_weight_std = R();
    m.n_components = U();
    m.exact = row[k++] == "1";
    m.degenerate = row[k++] == "1";
    if (!row[k].empty()) {
      ClusterLabel l;
      l.stage1 = static_cast<std::size_t>(parse_uint(row[k]));
      l.stage2 = static_cast<std::size_t>(parse_uint(row[k + 1]));
      r.cluster = l;
    }
    k += 2;
    for (std::size_t d = 0; d < t.devices.size(); ++d, k += per) {
      if (row[k].empty()) continue;
      MappingResult x;
      x.device_name = t.devices[d].name;
      x.device_fingerprint = row[k];
      x.g_before = static_cast<std::size_t>(parse_uint(row[k + 1]));
      x.g_after = static_cast<std::size_t>(parse_uint(row[k + 2]));
      x.l_before = parse_uint(row[k + 3]);
      x.l_after = parse_uint(row[k + 4]);
      x.f_before = parse_real(row[k + 5]);
      x.f_after = parse_real(row[k + 6]);
      x.swap_count = static_cast<std::size_t>(parse_uint(row[k + 7]));
      x.initial_layout = report_detail::parse_layout(row[k + 11]);
      x.final_layout = report_detail::parse_layout(row[k + 12]);
      x.config = row[k + 13];
      if (!hash_known[d]) {
        t.devices[d].fingerprint = x.device_fingerprint;
        hash_known[d] = true;
      } else if (t.devices[d].fingerprint != x.device_fingerprint) {
        throw InvalidArgument("device '" + x.device_name + "' has inconsistent hashes");
      }
      r.mappings.emplace(x.device_fingerprint, std::move(x));
    }
    t.records.push_back(std::move(r));
  }
  return t;
}

inline nlohmann::json to_json(const MetricVector& m) {
  nlohmann::json j;
  const auto v = metric_values(m);
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
    const std::string name(kMetricNames[i]);
    if (name == "two_qubit_fraction" || name == "avg_degree" || name == "avg_shortest_path" || name == "density" ||
        name == "global_clustering_coefficient" || name == "adjacency_weight_std") {
      j[name] = v[i];
    } else {
      j[name] = static_cast<std::uint64_t>(v[i]);
    }
  }
  j["exact"] = m.exact;
  j["degenerate"] = m.degenerate;
  return j;
}

inline MetricVector metric_vector_from_json(const nlohmann::json& j) {
  MetricVector m;
  m.n_qubits = j.at("n_qubits").get<std::size_t>();
  m.n_gates = j.at("n_gates").get<std::size_t>();
  m.two_qubit_fraction = j.at("two_qubit_fraction").get<double>();
  m.min_degree = j.at("min_degree").get<std::size_t>();
  m.max_degree = j.at("max_degree").get<std::size_t>();
  m.avg_degree = j.at("avg_degree").get<double>();
  m.avg_shortest_path = j.at("avg_shortest_path").get<double>();
  m.diameter = j.at("diameter").get<std::size_t>();
  m.density = j.at("density").get<double>();
  m.global_clustering_coefficient = j.at("global_clustering_coefficient").get<double>();
  m.edge_connectivity = j.at("edge_connectivity").get<std::size_t>();
  m.vertex_connectivity = j.at("vertex_connectivity").get<std::size_t>();
  m.max_clique_size = j.at("max_clique_size").get<std::size_t>();
  m.adjacency_weight_std = j.at("adjacency_weight_std").get<double>();
  m.n_components = j.at("n_components").get<std::size_t>();
  m.exact = j.at("exact").get<bool>();
  m.degenerate = j.at("degenerate").get<bool>();
  return m;
}

inline nlohmann::json to_json(const MappingResult& x) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"device", x.device_name},
          {"device_hash", x.device_fingerprint},
          {"g_before", x.g_before},
          {"g_after", x.g_after},
          {"l_before", x.l_before},
          {"l_after", x.l_after},
          {"f_before", x.f_before},
          {"f_after", x.f_after},
          {"swap_count", x.swap_count},
          {"gate_overhead", opt(gate_overhead_of(x))},
          {"latency_overhead", opt(latency_overhead_of(x))},
          {"fidelity_decrease", opt(fidelity_decrease_of(x))},
          {"initial_layout", x.initial_layout},
          {"final_layout", x.final_layout},
          {"config", x.config}};
}

inline MappingResult mapping_result_from_json(const nlohmann::json& j) {
  MappingResult x;
  x.device_name = j.at("device").get<std::string>();
  x.device_fingerprint = j.at("device_hash").get<std::string>();
  x.g_before = j.at("g_before").get<std::size_t>();
  x.g_after = j.at("g_after").get<std::size_t>();
  x.l_before = j.at("l_before").get<std::uint64_t>();
  x.l_after = j.at("l_after").get<std::uint64_t>();
  x.f_before = j.at("f_before").get<double>();
  x.f_after = j.at("f_after").get<double>();
  x.swap_count = j.at("swap_count").get<std::size_t>();
  x.initial_layout = j.at("initial_layout").get<std::vector<Qubit>>();
  x.final_layout = j.at("final_layout").get<std::vector<Qubit>>();
  x.config = j.at("config").get<std::string>();
  return x;
}

inline nlohmann::json records_to_json(const RecordTable& t) {
  nlohmann::json devices = nlohmann::json::array();
  for (const auto& d : t.devices) devices.push_back({{"name", d.name}, {"hash", d.fingerprint}});
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.records) {
    nlohmann::json maps = nlohmann::json::array();
    for (const auto& d : t.devices) {
      auto it = r.mappings.find(d.fingerprint);
      if (it != r.mappings.end()) maps.push_back(to_json(it->second));
    }
    nlohmann::json cl = r.cluster ? nlohmann::json{{"stage1", r.cluster->stage1}, {"stage2", r.cluster->stage2}}
                                  : nlohmann::json(nullptr);
    rows.push_back({{"name", r.name},
                    {"origin", origin_name(r.origin)},
                    {"metrics", to_json(r.metrics)},
                    {"cluster", cl},
                    {"mappings", maps}});
  }
  return {{"format", "qprof.records"}, {"version", 1}, {"devices", devices}, {"records", rows}};
}

inline RecordTable records_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "qprof.records") throw InvalidArgument("not a records document");
    RecordTable t;
    for (const auto& d : j.at("devices")) t.devices.push_back({d.at("name"), d.at("hash")});
    for (const auto& row : j.at("records")) {
      CorpusRecord r;
      r.name = row.at("name").get<std::string>();
      r.origin = origin_from_name(row.at("origin").get<std::string>());
      r.metrics = metric_vector_from_json(row.at("metrics"));
      if (!row.at("cluster").is_null()) {
        r.cluster = ClusterLabel{row["cluster"].at("stage1").get<std::size_t>(), row["cluster"].at("stage2").get<std::size_t>()};
      }
      for (const auto& m : row.at("mappings")) {
        MappingResult x = mapping_result_from_json(m);
        r.mappings.emplace(x.device_fingerprint, std::move(x));
      }
      t.records.push_back(std::move(r));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed records document: ") + e.what());
  }
}

/// Reads a records table from .csv or .json.
inline RecordTable load_records(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  if (path.extension() == ".json") {
    try {
      return records_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
      throw InvalidArgument(std::string("records JSON: ") + e.what());
    }
  }
  return records_from_csv(text);
}

inline std::string errors_to_csv(const std::vector<CorpusError>& errors) {
  std::string out = csv::row({"name", "stage", "message"});
  for (const auto& e : errors) out += csv::row({e.name, e.stage, e.message});
  return out;
}

// -------------------------------------------------------------- statistics

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) return NAN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double median_of(std::vector<double> v) {
  if (v.empty()) return NAN;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline std::string correlation_to_csv(const CorrelationMatrix& m) {
  std::vector<std::string> head = {"feature"};
  head.insert(head.end(), m.names.begin(), m.names.end());
  head.push_back("constant");
  std::string out = csv::row(head);
  for (std::size_t i = 0; i < m.names.size(); ++i) {
    std::vector<std::string> cells = {m.names[i]};
    for (double v : m.values[i]) cells.push_back(format_real(v));
    cells.push_back(m.constant[i] ? "1" : "0");
    out += csv::row(cells);
  }
  return out;
}

struct RankCorrelation {
  std::string device;
  std::string feature;
  std::string metric;
  double rho = 0.0;
  std::size_t n = 0;
  bool constant = false;
};

/// Spearman rho between every metric column and every mapping metric, per
/// device, over the records that have a value for both.
inline std::vector<RankCorrelation> rank_correlations(const RecordTable& t) {
  std::vector<RankCorrelation> out;
  for (const auto& d : t.devices) {
    for (std::size_t f = 0; f < kMetricNames.size(); ++f) {
      for (auto metric : kMappingMetricNames) {
        std::vector<double> x;
        std::vector<double> y;
        for (const auto& r : t.records) {
          auto it = r.mappings.find(d.fingerprint);
          if (it == r.mappings.end()) continue;
          const auto v = mapping_metric(it->second, metric);
          if (!v) continue;
          x.push_back(metric_values(r.metrics)[f]);
          y.push_back(*v);
        }
        RankCorrelation rc{d.name, std::string(kMetricNames[f]), std::string(metric), 0.0, x.size(), true};
        if (x.size() >= 2) rc.rho = spearman(x, y, &rc.constant);
        out.push_back(std::move(rc));
      }
    }
  }
  return out;
}

inline std::string rank_correlations_to_csv(const std::vector<RankCorrelation>& rows) {
  std::string out = csv::row({"device", "feature", "metric", "spearman", "n", "constant"});
  for (const auto& r : rows) {
    out += csv::row({r.device, r.feature, r.metric, format_real(r.rho), std::to_string(r.n), r.constant ? "1" : "0"});
  }
  return out;
}

/// Mean and median of the mapping metrics grouped by a key.
template <typename KeyFn>
std::string group_summary_csv(const RecordTable& t, const std::string& key_name, KeyFn&& key) {
  std::vector<std::string> head = {"device", key_name, "count", "mapped"};
  for (auto m : kMappingMetricNames) {
    head.push_back("mean_" + std::string(m));
    head.push_back("median_" + std::string(m));
  }
  std::string out = csv::row(head);
  for (const auto& d : t.devices) {
    std::map<std::string, std::vector<const CorpusRecord*>> groups;
    for (const auto& r : t.records) {
      auto k = key(r);
      if (k) groups[*k].push_back(&r);
    }
    for (const auto& [k, members] : groups) {
      std::vector<std::string> cells = {d.name, k, std::to_string(members.size())};
      std::size_t mapped = 0;
      for (const auto* r : members) mapped += r->mappings.count(d.fingerprint);
      cells.push_back(std::to_string(mapped));
      for (auto metric : kMappingMetricNames) {
        std::vector<double> vals;
        for (const auto* r : members) {
          auto it = r->mappings.find(d.fingerprint);
          if (it == r->mappings.end()) continue;
          if (auto v = mapping_metric(it->second, metric)) vals.push_back(*v);
        }
        cells.push_back(vals.empty() ? "" : format_real(mean_of(vals)));
        cells.push_back(vals.empty() ? "" : format_real(median_of(vals)));
      }
      out += csv::row(cells);
    }
  }
  return out;
}

/// Per stage-1 cluster ("3") and per (stage-1, stage-2) sub-cluster ("3.1").
inline std::string cluster_summary_csv(const RecordTable& t) {
  std::string a = group_summary_csv(t, "cluster", [](const CorpusRecord& r) -> std::optional<std::string> {
    if (!r.cluster) return std::nullopt;
    return std::to_string(r.cluster->stage1);
  });
  std::string b = group_summary_csv(t, "cluster", [](const CorpusRecord& r) -> std::optional<std::string> {
    if (!r.cluster) return std::nullopt;
    return std::to_string(r.cluster->stage1) + "." + std::to_string(r.cluster->stage2);
  });
  return a + b.substr(b.find('\n') + 1);
}

inline std::string origin_summary_csv(const RecordTable& t) {
  return group_summary_csv(t, "origin", [](const CorpusRecord& r) -> std::optional<std::string> {
    return std::string(origin_name(r.origin));
  });
}

// --------------------------------------------------------------------- SVG

namespace svg {

inline std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline const char* color(std::size_t i) {
  static constexpr const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return palette[i % 10];
}

class Document {
 public:
  Document(double w, double h) : w_(w), h_(h) {}

  void rect(double x, double y, double w, double h, std::string_view fill, std::string_view stroke = "none") {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
             "\" fill=\"" + std::string(fill) + "\" stroke=\"" + std::string(stroke) + "\"/>\n";
  }
  void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1) {
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
             "\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" + num(width) + "\"/>\n";
  }
  void circle(double cx, double cy, double r, std::string_view fill, std::string_view title = {}) {
    body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" +
             std::string(fill) + "\" fill-opacity=\"0.75\"";
    if (title.empty()) {
      body_ += "/>\n";
    } else {
      body_ += "><title>" + escape(title) + "</title></circle>\n";
    }
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, std::string_view stroke, double opacity = 0.5) {
    body_ += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) + "\" stroke-opacity=\"" + num(opacity) +
             "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ += (i ? " " : "") + num(pts[i].first) + "," + num(pts[i].second);
    body_ += "\"/>\n";
  }
  void text(double x, double y, std::string_view s, std::string_view anchor = "start", double size = 11,
            double rotate = 0) {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) +
             "\" font-family=\"sans-serif\" text-anchor=\"" + std::string(anchor) + "\"";
    if (rotate != 0) body_ += " transform=\"rotate(" + num(rotate) + " " + num(x) + " " + num(y) + ")\"";
    body_ += ">" + escape(s) + "</text>\n";
  }

  std::string str() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           num(w_) + "\" height=\"" + num(h_) + "\" viewBox=\"0 0 " + num(w_) + " " + num(h_) + "\">\n" +
           "<rect x=\"0\" y=\"0\" width=\"" + num(w_) + "\" height=\"" + num(h_) + "\" fill=\"white\"/>\n" + body_ +
           "</svg>\n";
  }

 private:
  double w_;
  double h_;
  std::string body_;
};

struct Range {
  double lo = 0.0;
  double hi = 1.0;
  static Range of(const std::vector<double>& v) {
    Range r{INFINITY, -INFINITY};
    for (double x : v) {
      r.lo = std::min(r.lo, x);
      r.hi = std::max(r.hi, x);
    }
    if (v.empty()) r = {0.0, 1.0};
    if (r.hi - r.lo < 1e-12) {
      r.lo -= 0.5;
      r.hi += 0.5;
    }
    return r;
  }
  double unit(double x) const { return (x - lo) / (hi - lo); }
};

}  // namespace svg

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
  std::size_t group = 0;
  std::string label;
};

inline std::string scatter_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                               const std::vector<ScatterPoint>& pts, const std::vector<std::string>& group_names) {
  constexpr double W = 640, H = 440, L = 70, R = 150, T = 40, B = 60;
  svg::Document doc(W, H);
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : pts) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  const auto rx = svg::Range::of(xs);
  const auto ry = svg::Range::of(ys);
  const double pw = W - L - R;
  const double ph = H - T - B;
  auto X = [&](double x) { return L + rx.unit(x) * pw; };
  auto Y = [&](double y) { return T + (1.0 - ry.unit(y)) * ph; };
  doc.text(W / 2, 22, title, "middle", 14);
  doc.rect(L, T, pw, ph, "none", "#333333");
  for (int i = 0; i <= 4; ++i) {
    const double fx = rx.lo + (rx.hi - rx.lo) * i / 4.0;
    const double fy = ry.lo + (ry.hi - ry.lo) * i / 4.0;
    doc.line(X(fx), T + ph, X(fx), T + ph + 5, "#333333");
    doc.text(X(fx), T + ph + 18, svg::num(fx), "middle", 10);
    doc.line(L - 5, Y(fy), L, Y(fy), "#333333");
    doc.text(L - 8, Y(fy) + 4, svg::num(fy), "end", 10);
  }
  doc.text(L + pw / 2, H - 15, x_label, "middle", 12);
  doc.text(18, T + ph / 2, y_label, "middle", 12, -90);
  for (const auto& p : pts) doc.circle(X(p.x), Y(p.y), 4, svg::color(p.group), p.label);
  for (std::size_t g = 0; g < group_names.size(); ++g) {
    const double y = T + 10 + 18.0 * static_cast<double>(g);
    doc.circle(W - R + 20, y, 5, svg::color(g));
    doc.text(W - R + 30, y + 4, group_names[g], "start", 11);
  }
  return doc.str();
}

/// Parallel coordinates: one vertical axis per feature, one polyline per row.
inline std::string parallel_svg(const std::string& title, const std::vector<std::string>& axes, const Matrix& rows,
                                const std::vector<std::size_t>& groups, const std::vector<std::string>& group_names) {
  constexpr double H = 420, T = 50, B = 50, L = 60, R = 150;
  const double step = 130;
  const double W = L + R + step * static_cast<double>(std::max<std::size_t>(axes.size(), 2) - 1);
  svg::Document doc(W, H);
  doc.text(W / 2, 24, title, "middle", 14);
  const double ph = H - T - B;
  std::vector<svg::Range> ranges;
  for (std::size_t j = 0; j < axes.size(); ++j) {
    std::vector<double> col;
    for (const auto& r : rows) col.push_back(r[j]);
    ranges.push_back(svg::Range::of(col));
  }
  auto X = [&](std::size_t j) { return L + step * static_cast<double>(j); };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t j = 0; j < axes.size(); ++j) pts.emplace_back(X(j), T + (1.0 - ranges[j].unit(rows[i][j])) * ph);
    doc.polyline(pts, svg::color(groups[i]));
  }
  for (std::size_t j = 0; j < axes.size(); ++j) {
    doc.line(X(j), T, X(j), T + ph, "#333333", 1.5);
    doc.text(X(j), T + ph + 18, axes[j], "middle", 11);
    doc.text(X(j) + 4, T - 6, svg::num(ranges[j].hi), "start", 9);
    doc.text(X(j) + 4, T + ph + 32, svg::num(ranges[j].lo), "start", 9);
  }
  for (std::size_t g = 0; g < group_names.size(); ++g) {
    const double y = T + 10 + 18.0 * static_cast<double>(g);
    doc.line(W - R + 15, y, W - R + 35, y, svg::color(g), 3);
    doc.text(W - R + 40, y + 4, group_names[g], "start", 11);
  }
  return doc.str();
}

inline std::string heatmap_svg(const std::string& title, const CorrelationMatrix& m) {
  const double cell = 30;
  const double L = 200, T = 200;
  const double n = static_cast<double>(m.names.size());
  svg::Document doc(L + cell * n + 20, T + cell * n + 20);
  doc.text(10, 20, title, "start", 14);
  for (std::size_t i = 0; i < m.names.size(); ++i) {
    doc.text(L - 6, T + cell * (static_cast<double>(i) + 0.65), m.names[i], "end", 10);
    const double x = L + cell * (static_cast<double>(i) + 0.6);
    doc.text(x, T - 6, m.names[i], "start", 10, -60);
    for (std::size_t j = 0; j < m.names.size(); ++j) {
      const double v = std::clamp(m.values[i][j], -1.0, 1.0);
      // white at 0, red towards +1, blue towards -1
      const int fade = static_cast<int>(std::lround(255 * (1.0 - std::abs(v))));
      char fill[8];
      if (v >= 0) {
        std::snprintf(fill, sizeof fill, "#ff%02x%02x", fade, fade);
      } else {
        std::snprintf(fill, sizeof fill, "#%02x%02xff", fade, fade);
      }
      doc.rect(L + cell * static_cast<double>(j), T + cell * static_cast<double>(i), cell, cell, fill, "#dddddd");
      doc.text(L + cell * (static_cast<double>(j) + 0.5), T + cell * (static_cast<double>(i) + 0.62), svg::num(v),
               "middle", 8);
    }
  }
  return doc.str();
}

/// Scatter plots of each feature against each mapping metric for every
/// device, coloured by stage-1 cluster (or origin when unclustered).
/// Returns file name -> SVG text.
inline std::map<std::string, std::string> scatter_plots(const RecordTable& t, const std::vector<std::string>& features) {
  std::map<std::string, std::string> out;
  bool clustered = !t.records.empty();
  std::size_t n_groups = 0;
  for (const auto& r : t.records) {
    if (!r.cluster) clustered = false;
    else n_groups = std::max(n_groups, r.cluster->stage1 + 1);
  }
  std::vector<std::string> group_names;
  if (clustered) {
    for (std::size_t g = 0; g < n_groups; ++g) group_names.push_back("cluster " + std::to_string(g));
  } else {
    for (std::size_t g = 0; g < 6; ++g) group_names.emplace_back(origin_name(static_cast<OriginTag>(g)));
  }
  auto file_safe = [](std::string s) {
    for (char& c : s) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') c = '_';
    }
    return s;
  };
  for (std::size_t d = 0; d < t.devices.size(); ++d) {
    const auto& dev = t.devices[d];
    for (const auto& f : features) {
      const std::size_t fi = static_cast<std::size_t>(
          std::find(kMetricNames.begin(), kMetricNames.end(), f) - kMetricNames.begin());
      if (fi >= kMetricNames.size()) throw MissingFeature("feature '" + f + "' not present");
      for (auto metric : kMappingMetricNames) {
        std::vector<ScatterPoint> pts;
        for (const auto& r : t.records) {
          auto it = r.mappings.find(dev.fingerprint);
          if (it == r.mappings.end()) continue;
          auto v = mapping_metric(it->second, metric);
          if (!v) continue;
          const std::size_t g = clustered ? r.cluster->stage1 : static_cast<std::size_t>(r.origin);
          pts.push_back({metric_values(r.metrics)[fi], *v, g, r.name});
        }
        const std::string name =
            "scatter_" + file_safe(dev.name) + "_" + f + "_" + std::string(metric) + ".svg";
        out[name] = scatter_svg(dev.name + ": " + std::string(metric) + " vs " + f, f, std::string(metric) + " (%)",
                                pts, group_names);
      }
    }
  }
  return out;
}

}  // namespace qprof
