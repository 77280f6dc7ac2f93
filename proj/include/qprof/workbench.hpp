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

// Corpus ingestion, batch mapping and experiment bundles.

#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "qprof/analysis.hpp"
#include "qprof/device.hpp"
#include "qprof/generator.hpp"
#include "qprof/interaction_graph.hpp"
#include "qprof/mapper.hpp"
#include "qprof/qasm.hpp"
#include "qprof/random.hpp"
#include "qprof/report.hpp"

namespace qprof {

/// Called as (stage, done, total). May be invoked from worker threads, but
/// never concurrently.
using Progress = std::function<void(std::string_view, std::size_t, std::size_t)>;

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0: hardware
/// concurrency). fn must not throw.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn, const Progress& progress = {},
                  std::string_view stage = {}) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
      if (progress) {
        std::lock_guard lock(mu);
        progress(stage, ++done, n);
      }
    }
  };
  if (threads <= 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
}

// ------------------------------------------------------------------ corpus

/// Origin from a `// origin: <tag>` comment, else from the file name prefix.
inline OriginTag detect_origin(std::string_view text, std::string_view stem) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos) {
      line = line.substr(first);
      if (line.rfind("//", 0) == 0) {
        auto body = line.substr(2);
        body = body.substr(std::min(body.size(), body.find_first_not_of(" \t")));
        if (body.rfind("origin:", 0) == 0) {
          auto tag = body.substr(7);
          tag = tag.substr(std::min(tag.size(), tag.find_first_not_of(" \t")));
          tag = tag.substr(0, tag.find_first_of(" \t\r"));
          return origin_from_name(tag);
        }
      }
    }
    pos = end + 1;
  }
  static const std::vector<std::pair<std::string_view, OriginTag>> prefixes = {
      {"random", OriginTag::random},       {"queko", OriginTag::queko},
      {"qv", OriginTag::quantum_volume},   {"rev", OriginTag::reversible_arithmetic},
      {"real", OriginTag::real_algorithm},
  };
  for (const auto& [p, tag] : prefixes) {
    if (stem.rfind(p, 0) == 0) return tag;
  }
  return OriginTag::unknown;
}

/// Parses one QASM file; the circuit takes the file stem as its name.
inline Circuit load_circuit(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  Circuit c = parse_qasm(text);
  c.name = path.stem().string();
  c.origin = detect_origin(text, c.name);
  return c;
}

struct CorpusOptions {
  CountOptions count;
  MetricOptions metrics;
  std::size_t threads = 0;
};

struct Corpus {
  std::vector<Circuit> circuits;       // aligned with records
  std::vector<CorpusRecord> records;   // metrics only
  std::vector<CorpusError> errors;
};

inline CorpusRecord profile_record(const Circuit& c, const CorpusOptions& opts) {
  CorpusRecord r;
  r.name = c.name;
  r.origin = c.origin;
  r.metrics = profile_circuit(c, opts.count, opts.metrics);
  return r;
}

/// Profiles already-loaded circuits. Names must be unique.
inline Corpus profile_circuits(std::vector<Circuit> circuits, const CorpusOptions& opts = {},
                               const Progress& progress = {}) {
  Corpus out;
  std::vector<std::optional<CorpusRecord>> recs(circuits.size());
  std::vector<std::string> err(circuits.size());
  parallel_for(
      circuits.size(), opts.threads,
      [&](std::size_t i) {
        try {
          recs[i] = profile_record(circuits[i], opts);
        } catch (const std::exception& e) {
          err[i] = e.what();
        }
      },
      progress, "profile");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    if (!recs[i]) {
      out.errors.push_back({circuits[i].name, "profile", err[i]});
      continue;
    }
    if (!seen.insert(circuits[i].name).second) {
      out.errors.push_back({circuits[i].name, "profile", "duplicate circuit name"});
      continue;
    }
    out.records.push_back(std::move(*recs[i]));
    out.circuits.push_back(std::move(circuits[i]));
  }
  return out;
}

/// Every `*.qasm` file of `dir` in file name order. Unparseable files go to
/// the error list. Throws EmptyCorpus when the directory has no QASM files.
inline Corpus profile_corpus(const std::filesystem::path& dir, const CorpusOptions& opts = {},
                             const Progress& progress = {}) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("'" + dir.string() + "' is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".qasm") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw EmptyCorpus("no .qasm files in '" + dir.string() + "'");

  std::vector<std::optional<Circuit>> parsed(files.size());
  std::vector<std::string> err(files.size());
  parallel_for(
      files.size(), opts.threads,
      [&](std::size_t i) {
        try {
          parsed[i] = load_circuit(files[i]);
        } catch (const std::exception& e) {
          err[i] = e.what();
        }
      },
      progress, "parse");
  std::vector<Circuit> ok;
  std::vector<CorpusError> parse_errors;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (parsed[i]) {
      ok.push_back(std::move(*parsed[i]));
    } else {
      parse_errors.push_back({files[i].stem().string(), "parse", err[i]});
    }
  }
  Corpus out = profile_circuits(std::move(ok), opts, progress);
  out.errors.insert(out.errors.begin(), parse_errors.begin(), parse_errors.end());
  return out;
}

// ------------------------------------------------------------------ devices

/// Device from a short spec or a JSON path:
/// grid:RxC[:cz], line:N[:cz], complete:N[:cz], surface:D, surface97,
/// rochester53, aspen16. Paths are resolved against `base`.
inline Device resolve_device(const std::string& spec, const std::filesystem::path& base = {}) {
  auto parts = [&] {
    std::vector<std::string> p;
    std::size_t i = 0;
    while (true) {
      const std::size_t j = spec.find(':', i);
      p.push_back(spec.substr(i, j == std::string::npos ? std::string::npos : j - i));
      if (j == std::string::npos) break;
      i = j + 1;
    }
    return p;
  }();
  auto native = [&](std::size_t idx, GateKind def) {
    if (parts.size() <= idx) return def;
    if (parts[idx] == "cz") return GateKind::CZ;
    if (parts[idx] == "cnot" || parts[idx] == "cx") return GateKind::CNOT;
    throw InvalidArgument("unknown native gate '" + parts[idx] + "' in device spec '" + spec + "'");
  };
  auto number = [&](const std::string& s) {
    try {
      return static_cast<std::size_t>(parse_uint(s));
    } catch (const InvalidArgument&) {
      throw InvalidArgument("bad number in device spec '" + spec + "'");
    }
  };
  const std::string& head = parts[0];
  if (head == "grid" && parts.size() >= 2) {
    const auto x = parts[1].find('x');
    if (x == std::string::npos) throw InvalidArgument("grid spec needs RxC: '" + spec + "'");
    return grid_device(number(parts[1].substr(0, x)), number(parts[1].substr(x + 1)), native(2, GateKind::CNOT));
  }
  if (head == "line" && parts.size() >= 2) return line_device(number(parts[1]), native(2, GateKind::CNOT));
  if (head == "complete" && parts.size() >= 2) return complete_device(number(parts[1]), native(2, GateKind::CNOT));
  if (head == "surface" && parts.size() >= 2) return surface_code_device(number(parts[1]));
  if (spec == "surface97") return surface97_device();
  if (spec == "rochester53") return rochester53_device();
  if (spec == "aspen16") return aspen16_device();
  std::filesystem::path p(spec);
  if (p.is_relative() && !base.empty()) p = base / p;
  return load_device(p);
}

// ---------------------------------------------------------------- mapping

/// Maps every circuit onto every device. Failures (e.g. a circuit larger than
/// the device) only leave that cell empty and add an error entry.
inline void map_corpus(Corpus& corpus, const std::vector<Device>& devices, const MapOptions& opts,
                       std::size_t threads = 0, const Progress& progress = {}) {
  const std::size_t n = corpus.circuits.size();
  const std::size_t m = devices.size();
  std::vector<std::string> hashes;
  for (const auto& d : devices) hashes.push_back(fingerprint(d));
  std::vector<std::optional<MappingResult>> results(n * m);
  std::vector<std::string> err(n * m);
  parallel_for(
      n * m, threads,
      [&](std::size_t t) {
        const std::size_t i = t / m;
        const std::size_t d = t % m;
        try {
          results[t] = map_circuit(corpus.circuits[i], devices[d], opts).result;
        } catch (const std::exception& e) {
          err[t] = e.what();
        }
      },
      progress, "map");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < m; ++d) {
      const std::size_t t = i * m + d;
      if (results[t]) {
        corpus.records[i].mappings[hashes[d]] = std::move(*results[t]);
      } else {
        corpus.errors.push_back({corpus.records[i].name, "map:" + devices[d].name, err[t]});
      }
    }
  }
}

// -------------------------------------------------------------- experiment

/// A batch of random circuits with parameters drawn uniformly from ranges.
struct GeneratorSpec {
  std::size_t count = 0;
  std::size_t qubits_min = 2, qubits_max = 2;
  std::size_t gates_min = 1, gates_max = 1;
  double twoq_min = 0.0, twoq_max = 0.0;
  std::string prefix = "gen";
};

struct ExperimentSpec {
  std::optional<std::filesystem::path> corpus;
  std::vector<GeneratorSpec> generate;
  std::vector<std::string> devices;
  MapOptions mapper;
  TwoStageOptions clustering;
  MetricOptions metrics;
  CountOptions count;
  std::vector<std::string> plot_features = {"max_degree", "min_degree", "avg_shortest_path", "adjacency_weight_std",
                                            "two_qubit_fraction"};
  std::filesystem::path output = "qprof_out";
  std::filesystem::path base_dir;  // relative paths resolve here
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

inline ExperimentSpec experiment_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  static const std::set<std::string> known = {"corpus", "generate", "devices", "mapper", "clustering",
                                              "metrics", "count_measure", "plot_features", "output", "seed",
                                              "threads"};
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) throw SchemaError("unknown experiment key '" + k + "'");
  }
  try {
    ExperimentSpec s;
    s.base_dir = base_dir;
    s.seed = j.value("seed", std::uint64_t{0});
    s.threads = j.value("threads", std::size_t{0});
    if (j.contains("corpus")) s.corpus = base_dir / j.at("corpus").get<std::string>();
    if (j.contains("generate")) {
      for (const auto& g : j.at("generate")) {
        GeneratorSpec gs;
        gs.count = g.at("count").get<std::size_t>();
        gs.qubits_min = g.at("qubits").at(0).get<std::size_t>();
        gs.qubits_max = g.at("qubits").at(1).get<std::size_t>();
        gs.gates_min = g.at("gates").at(0).get<std::size_t>();
        gs.gates_max = g.at("gates").at(1).get<std::size_t>();
        gs.twoq_min = g.at("twoq").at(0).get<double>();
        gs.twoq_max = g.at("twoq").at(1).get<double>();
        gs.prefix = g.value("prefix", std::string("gen"));
        if (gs.qubits_min > gs.qubits_max || gs.gates_min > gs.gates_max || gs.twoq_min > gs.twoq_max) {
          throw SchemaError("generator range with min > max");
        }
        s.generate.push_back(gs);
      }
    }
    s.devices = j.at("devices").get<std::vector<std::string>>();
    if (j.contains("mapper")) {
      const auto& m = j.at("mapper");
      s.mapper.placement = placement_from_string(m.value("placement", std::string("identity")));
      s.mapper.routing.policy = policy_from_string(m.value("policy", std::string("min_extend")));
      s.mapper.routing.lookahead = m.value("lookahead", std::size_t{5});
      s.mapper.routing.max_paths = m.value("max_paths", std::size_t{32});
      s.mapper.baseline = baseline_from_string(m.value("baseline", std::string("decomposed")));
      s.mapper.decompose.basis_change = basis_from_string(m.value("basis_change", std::string("hadamard")));
      s.mapper.decompose.cancel_inverse_pairs = m.value("cancel", true);
    }
    if (j.contains("clustering")) {
      const auto& c = j.at("clustering");
      s.clustering.k1 = c.value("k1", std::size_t{5});
      if (c.contains("k2")) {
        s.clustering.k2_min = c.at("k2").at(0).get<std::size_t>();
        s.clustering.k2_max = c.at("k2").at(1).get<std::size_t>();
      }
      if (c.contains("size_features")) s.clustering.size_features = c.at("size_features").get<std::vector<std::string>>();
      if (c.contains("graph_features")) {
        s.clustering.graph_features = c.at("graph_features").get<std::vector<std::string>>();
      }
    }
    if (j.contains("metrics")) {
      const auto& m = j.at("metrics");
      s.metrics.exact_node_limit = m.value("exact_node_limit", std::size_t{64});
      s.metrics.weight_std_include_zeros = m.value("weight_std_include_zeros", false);
    }
    s.count.count_measure = j.value("count_measure", false);
    s.mapper.count = s.count;
    if (j.contains("plot_features")) s.plot_features = j.at("plot_features").get<std::vector<std::string>>();
    if (j.contains("output")) s.output = base_dir / j.at("output").get<std::string>();
    s.mapper.seed = s.seed;
    s.clustering.seed = s.seed;
    if (s.devices.empty()) throw SchemaError("experiment needs at least one device");
    if (!s.corpus && s.generate.empty()) throw SchemaError("experiment needs a corpus or a generator");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("experiment spec: ") + e.what());
  }
}

inline ExperimentSpec load_experiment(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("experiment spec: ") + e.what());
  }
  return experiment_from_json(j, path.parent_path());
}

inline std::vector<Circuit> generate_batch(const GeneratorSpec& g, std::uint64_t seed, std::size_t batch) {
  std::vector<Circuit> out;
  Rng rng(derive_seed(seed, 0x6e6e + batch));
  for (std::size_t i = 0; i < g.count; ++i) {
    const std::size_t q = g.qubits_min + rng.below(g.qubits_max - g.qubits_min + 1);
    const std::size_t n = g.gates_min + rng.below(g.gates_max - g.gates_min + 1);
    const double f = g.twoq_min + (g.twoq_max - g.twoq_min) * rng.uniform();
    Circuit c = generate_random_circuit(q, n, f, rng.next());
    char name[96];
    std::snprintf(name, sizeof name, "%s%zu_%03zu_q%zu_g%zu", g.prefix.c_str(), batch, i, q, n);
    c.name = name;
    out.push_back(std::move(c));
  }
  return out;
}

struct ExperimentResult {
  RecordTable table;
  std::vector<CorpusError> errors;
  std::optional<ClusterModel> model;
  std::size_t k1_used = 0;
  std::map<std::string, std::string> files;  // bundle-relative path -> contents
  bool partial() const { return !errors.empty(); }
};

namespace workbench_detail {

inline std::string file_safe(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') c = '_';
  }
  return s;
}

/// Rows of z-scores for the named features, using a given scaler.
inline Matrix standardized(const FeatureMatrix& fm, const std::vector<std::string>& names, const Standardizer& s,
                           const std::vector<std::size_t>& rows) {
  Matrix sel = fm.select(names);
  Matrix out;
  for (std::size_t r : rows) out.push_back(s.transform(sel[r]));
  return out;
}

}  // namespace workbench_detail

/// Renders every report file for a finished table.
inline std::map<std::string, std::string> render_bundle(const ExperimentSpec& spec, const RecordTable& table,
                                                        const std::vector<CorpusError>& errors,
                                                        const std::optional<ClusterModel>& model, std::size_t k1_used,
                                                        const std::vector<Device>& devices) {
  std::map<std::string, std::string> files;
  files["records.csv"] = records_to_csv(table);
  files["records.json"] = records_to_json(table).dump(1) + "\n";
  files["errors.csv"] = errors_to_csv(errors);
  files["origin_summary.csv"] = origin_summary_csv(table);
  files["cluster_summary.csv"] = cluster_summary_csv(table);
  files["spearman.csv"] = rank_correlations_to_csv(rank_correlations(table));

  const FeatureMatrix fm = feature_matrix(table.records);
  if (fm.rows.size() >= 2) {
    const CorrelationMatrix corr = pearson_matrix(fm);
    files["pearson.csv"] = correlation_to_csv(corr);
    files["plots/pearson_heatmap.svg"] = heatmap_svg("Pearson correlation of circuit metrics", corr);
  }

  if (model) {
    files["cluster_model.json"] = to_json(*model).dump(1) + "\n";
    // Parallel-coordinates data: standardized features per circuit.
    std::vector<std::string> head = {"name", "stage1", "stage2"};
    for (const auto& f : model->size_features) head.push_back("z_" + f);
    for (const auto& f : model->graph_features) head.push_back("z_" + f);
    std::string pc = csv::row(head);
    std::vector<std::size_t> all(fm.rows.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const Matrix zs = workbench_detail::standardized(fm, model->size_features, model->stage1_scaler, all);
    const Matrix graph_raw = fm.select(model->graph_features);
    for (std::size_t i = 0; i < fm.rows.size(); ++i) {
      const ClusterLabel& l = model->labels[i];
      std::vector<std::string> cells = {fm.row_ids[i], std::to_string(l.stage1), std::to_string(l.stage2)};
      for (double v : zs[i]) cells.push_back(format_real(v));
      for (double v : model->stage2[l.stage1].scaler.transform(graph_raw[i])) cells.push_back(format_real(v));
      pc += csv::row(cells);
    }
    files["clusters.csv"] = pc;

    std::vector<std::size_t> groups;
    for (const auto& l : model->labels) groups.push_back(l.stage1);
    std::vector<std::string> names;
    for (std::size_t g = 0; g < k1_used; ++g) names.push_back("cluster " + std::to_string(g));
    files["plots/parallel_stage1.svg"] =
        parallel_svg("Stage 1: size features", model->size_features, fm.select(model->size_features), groups, names);
    for (std::size_t c = 0; c < k1_used; ++c) {
      std::vector<std::size_t> members;
      std::vector<std::size_t> sub;
      for (std::size_t i = 0; i < model->labels.size(); ++i) {
        if (model->labels[i].stage1 == c) {
          members.push_back(i);
          sub.push_back(model->labels[i].stage2);
        }
      }
      Matrix rows;
      for (std::size_t i : members) rows.push_back(graph_raw[i]);
      std::vector<std::string> sub_names;
      for (std::size_t g = 0; g < model->stage2[c].centroids.size(); ++g) {
        sub_names.push_back(std::to_string(c) + "." + std::to_string(g));
      }
      files["plots/parallel_stage2_" + std::to_string(c) + ".svg"] =
          parallel_svg("Stage 2 within cluster " + std::to_string(c) + ": graph features", model->graph_features, rows,
                       sub, sub_names);
    }
  }
  for (auto& [name, text] : scatter_plots(table, spec.plot_features)) files["plots/" + name] = std::move(text);

  nlohmann::json manifest;
  manifest["format"] = "qprof.bundle";
  manifest["version"] = 1;
  manifest["seed"] = spec.seed;
  manifest["mapper"] = spec.mapper.summary();
  manifest["k1_requested"] = spec.clustering.k1;
  manifest["k1_used"] = k1_used;
  manifest["k2_range"] = {spec.clustering.k2_min, spec.clustering.k2_max};
  manifest["n_records"] = table.records.size();
  manifest["n_errors"] = errors.size();
  nlohmann::json devs = nlohmann::json::array();
  for (std::size_t i = 0; i < devices.size(); ++i) {
    devs.push_back({{"name", devices[i].name},
                    {"hash", fingerprint(devices[i])},
                    {"spec", spec.devices[i]},
                    {"n_qubits", devices[i].n_qubits},
                    {"n_edges", devices[i].edges.size()}});
  }
  manifest["devices"] = devs;
  nlohmann::json listing = nlohmann::json::array();
  for (const auto& [name, text] : files) listing.push_back(name);
  manifest["files"] = listing;
  files["manifest.json"] = manifest.dump(1) + "\n";
  return files;
}

/// Writes a bundle into a staging directory and swaps it into place, so an
/// interrupted run never leaves a half-written output directory. An existing
/// output directory is only replaced when it holds a previous bundle.
inline void write_bundle(const std::filesystem::path& out, const std::map<std::string, std::string>& files) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::exists(out, ec)) {
    if (!fs::is_directory(out) || (!fs::is_empty(out) && !fs::exists(out / "manifest.json"))) {
      throw IoError("'" + out.string() + "' exists and is not a qprof bundle; refusing to replace it");
    }
  }
  fs::path stage = out;
  stage += ".partial";
  fs::remove_all(stage, ec);
  fs::create_directories(stage, ec);
  if (ec) throw IoError("cannot create '" + stage.string() + "': " + ec.message());
  for (const auto& [name, text] : files) {
    const fs::path p = stage / name;
    fs::create_directories(p.parent_path(), ec);
    write_text_atomic(p, text);
  }
  fs::remove_all(out, ec);
  fs::rename(stage, out, ec);
  if (ec) throw IoError("cannot move bundle into '" + out.string() + "': " + ec.message());
}

/// Profiles, clusters and maps the corpus, then renders the bundle (files
/// are returned, not written; see write_bundle).
inline ExperimentResult run_experiment(const ExperimentSpec& spec, const Progress& progress = {}) {
  CorpusOptions copts{spec.count, spec.metrics, spec.threads};
  Corpus corpus;
  if (spec.corpus) corpus = profile_corpus(*spec.corpus, copts, progress);
  std::vector<Circuit> generated;
  for (std::size_t b = 0; b < spec.generate.size(); ++b) {
    auto batch = generate_batch(spec.generate[b], spec.seed, b);
    generated.insert(generated.end(), std::make_move_iterator(batch.begin()), std::make_move_iterator(batch.end()));
  }
  if (!generated.empty()) {
    std::set<std::string> taken;
    for (const auto& r : corpus.records) taken.insert(r.name);
    Corpus g = profile_circuits(std::move(generated), copts, progress);
    for (std::size_t i = 0; i < g.records.size(); ++i) {
      if (taken.count(g.records[i].name)) {
        corpus.errors.push_back({g.records[i].name, "profile", "duplicate circuit name"});
        continue;
      }
      corpus.records.push_back(std::move(g.records[i]));
      corpus.circuits.push_back(std::move(g.circuits[i]));
    }
    corpus.errors.insert(corpus.errors.end(), g.errors.begin(), g.errors.end());
  }
  if (corpus.records.empty()) throw EmptyCorpus("no circuit could be profiled");

  std::vector<Device> devices;
  for (const auto& d : spec.devices) devices.push_back(resolve_device(d, spec.base_dir));

  ExperimentResult res;
  // Clustering: k1 cannot exceed the number of distinct size points.
  const FeatureMatrix fm = feature_matrix(corpus.records);
  TwoStageOptions copt = spec.clustering;
  const Matrix size_z = Standardizer::fit(fm.select(copt.size_features)).transform(fm.select(copt.size_features));
  copt.k1 = std::max<std::size_t>(1, std::min(copt.k1, count_distinct(size_z)));
  res.k1_used = copt.k1;
  res.model = two_stage_cluster(fm, copt);
  for (std::size_t i = 0; i < corpus.records.size(); ++i) corpus.records[i].cluster = res.model->labels[i];
  if (progress) progress("cluster", 1, 1);

  map_corpus(corpus, devices, spec.mapper, spec.threads, progress);

  for (const auto& d : devices) res.table.devices.push_back({d.name, fingerprint(d)});
  res.table.records = std::move(corpus.records);
  res.errors = std::move(corpus.errors);
  res.files = render_bundle(spec, res.table, res.errors, res.model, res.k1_used, devices);
  return res;
}

}  // namespace qprof
