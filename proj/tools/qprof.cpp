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

// qprof command line. Exit status: 0 success, 2 partial failure (see the
// errors sidecar), 1 error.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qprof/qprof.hpp"

namespace fs = std::filesystem;
using namespace qprof;

namespace {

constexpr int kPartial = 2;

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text_atomic(out, text);
  }
}

/// Errors go next to the main output, or to stderr when writing to stdout.
int finish(const std::string& out, const std::vector<CorpusError>& errors) {
  if (errors.empty()) return 0;
  if (out.empty() || out == "-") {
    for (const auto& e : errors) std::cerr << "error: " << e.name << " [" << e.stage << "]: " << e.message << "\n";
  } else {
    write_text_atomic(out + ".errors.csv", errors_to_csv(errors));
    std::cerr << errors.size() << " failure(s), see " << out << ".errors.csv\n";
  }
  return kPartial;
}

Progress stderr_progress(bool on) {
  if (!on) return {};
  return [](std::string_view stage, std::size_t done, std::size_t total) {
    if (done == total || done % 25 == 0) std::cerr << "\r" << stage << " " << done << "/" << total << std::flush;
    if (done == total) std::cerr << "\n";
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qprof: quantum circuit profiling and mapping workbench"};
  app.require_subcommand(1);

  // profile
  auto* profile = app.add_subcommand("profile", "Metric vector of every .qasm file in a directory");
  std::string profile_dir, profile_out;
  std::size_t threads = 0;
  bool count_measure = false;
  std::size_t exact_limit = 64;
  profile->add_option("dir", profile_dir, "Corpus directory")->required();
  profile->add_option("-o,--output", profile_out, "Records CSV (default stdout)");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Two-stage k-means over a records table");
  std::string cluster_in, cluster_out, cluster_labels;
  std::size_t k1 = 5, k2_min = 2, k2_max = 6;
  std::uint64_t seed = 0;
  cluster->add_option("records", cluster_in, "records.csv or records.json")->required();
  cluster->add_option("--k1", k1, "Stage-one cluster count")->capture_default_str();
  cluster->add_option("--k2-min", k2_min, "Smallest stage-two k")->capture_default_str();
  cluster->add_option("--k2-max", k2_max, "Largest stage-two k")->capture_default_str();
  cluster->add_option("--seed", seed, "Seed")->capture_default_str();
  cluster->add_option("-o,--output", cluster_out, "Model JSON (default stdout)");
  cluster->add_option("--labels", cluster_labels, "Also write the records table with labels here");

  // map
  auto* map = app.add_subcommand("map", "Map every circuit in a directory onto a device");
  std::string map_dir, map_device, map_out, map_qasm;
  std::string policy = "min_extend", placement = "identity", baseline = "decomposed", basis = "hadamard";
  std::size_t lookahead = 5, max_paths = 32;
  bool no_cancel = false, native = false;
  map->add_option("dir", map_dir, "Corpus directory")->required();
  map->add_option("--device", map_device, "Device JSON or spec (grid:RxC, line:N, complete:N, surface97, ...)")
      ->required();
  map->add_option("--policy", policy, "nearest_path | min_extend")->capture_default_str();
  map->add_option("--placement", placement, "identity | degree_greedy")->capture_default_str();
  map->add_option("--lookahead", lookahead, "Two-qubit gate window for min_extend")->capture_default_str();
  map->add_option("--max-paths", max_paths, "Shortest paths examined per blocked gate")->capture_default_str();
  map->add_option("--baseline", baseline, "decomposed | raw")->capture_default_str();
  map->add_option("--basis", basis, "CNOT/CZ basis change: hadamard | ry")->capture_default_str();
  map->add_flag("--no-cancel", no_cancel, "Keep adjacent inverse one-qubit pairs");
  map->add_option("--emit-qasm", map_qasm, "Write routed circuits into this directory");
  map->add_flag("--native", native, "With --emit-qasm, write the decomposed native circuits");
  map->add_option("-o,--output", map_out, "Records CSV (default stdout)");

  // generate
  auto* generate = app.add_subcommand("generate", "Random circuit as OpenQASM");
  std::size_t gen_qubits = 5, gen_gates = 50;
  double gen_twoq = 0.3;
  std::string gen_out;
  generate->add_option("--qubits", gen_qubits, "Qubit count")->capture_default_str();
  generate->add_option("--gates", gen_gates, "Gate count")->capture_default_str();
  generate->add_option("--twoq", gen_twoq, "Two-qubit gate probability")->capture_default_str();
  generate->add_option("--seed", seed, "Seed")->capture_default_str();
  generate->add_option("-o,--output", gen_out, "Output file (default stdout)");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run an experiment spec and write its report bundle");
  std::string spec_path, exp_out;
  bool quiet = false;
  experiment->add_option("spec", spec_path, "Experiment JSON")->required();
  experiment->add_option("--output", exp_out, "Override the bundle directory");
  experiment->add_flag("-q,--quiet", quiet, "No progress output");

  // report
  auto* report = app.add_subcommand("report", "Render a records table");
  std::string report_in, report_format = "csv", report_out;
  std::vector<std::string> features = {"max_degree", "min_degree", "avg_shortest_path", "adjacency_weight_std"};
  report->add_option("records", report_in, "records.csv or records.json")->required();
  report->add_option("--format", report_format, "csv | json | svg")
      ->check(CLI::IsMember({"csv", "json", "svg"}))
      ->capture_default_str();
  report->add_option("--features", features, "Features plotted by --format svg");
  report->add_option("-o,--output", report_out, "Output file (csv/json) or directory (svg)");

  // device
  auto* device = app.add_subcommand("device", "Resolve a device spec and print its JSON");
  std::string device_spec, device_out, device_dist;
  device->add_option("spec", device_spec, "Device JSON or spec")->required();
  device->add_option("-o,--output", device_out, "Output file (default stdout)");
  device->add_option("--distances", device_dist, "Also write the hop-distance matrix CSV here");

  for (auto* sub : {profile, map, experiment}) sub->add_option("--threads", threads, "Worker threads (0: all cores)");
  for (auto* sub : {profile, map}) {
    sub->add_flag("--count-measure", count_measure, "Count measurements as gates");
    sub->add_option("--exact-limit", exact_limit, "Exact clique/connectivity up to this many qubits")
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share the generic failure code; --help still exits 0.
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    CorpusOptions copts;
    copts.threads = threads;
    copts.count.count_measure = count_measure;
    copts.metrics.exact_node_limit = exact_limit;

    if (*profile) {
      Corpus c = profile_corpus(profile_dir, copts);
      emit(profile_out, records_to_csv({{}, c.records}));
      return finish(profile_out, c.errors);
    }

    if (*cluster) {
      RecordTable t = load_records(cluster_in);
      TwoStageOptions o;
      o.k1 = k1;
      o.k2_min = k2_min;
      o.k2_max = k2_max;
      o.seed = seed;
      ClusterModel m = two_stage_cluster(feature_matrix(t.records), o);
      emit(cluster_out, to_json(m).dump(1) + "\n");
      if (!cluster_labels.empty()) {
        for (std::size_t i = 0; i < t.records.size(); ++i) t.records[i].cluster = m.labels[i];
        write_text_atomic(cluster_labels, records_to_csv(t));
      }
      return 0;
    }

    if (*map) {
      const Device d = resolve_device(map_device);
      MapOptions o;
      o.placement = placement_from_string(placement);
      o.routing.policy = policy_from_string(policy);
      o.routing.lookahead = lookahead;
      o.routing.max_paths = max_paths;
      o.baseline = baseline_from_string(baseline);
      o.decompose.basis_change = basis_from_string(basis);
      o.decompose.cancel_inverse_pairs = !no_cancel;
      o.count = copts.count;
      Corpus c = profile_corpus(map_dir, copts);
      map_corpus(c, {d}, o, threads);
      if (!map_qasm.empty()) {
        fs::create_directories(map_qasm);
        for (std::size_t i = 0; i < c.circuits.size(); ++i) {
          if (c.records[i].mappings.empty()) continue;
          const MappingOutput m = map_circuit(c.circuits[i], d, o);
          write_text_atomic(fs::path(map_qasm) / (c.circuits[i].name + ".qasm"), routed_qasm(m, o, native));
        }
      }
      emit(map_out, records_to_csv({{{d.name, fingerprint(d)}}, c.records}));
      return finish(map_out, c.errors);
    }

    if (*generate) {
      const Circuit c = generate_random_circuit(gen_qubits, gen_gates, gen_twoq, seed);
      SerializeOptions so;
      so.header = {"origin: random", "generated: qubits=" + std::to_string(gen_qubits) +
                                         " gates=" + std::to_string(gen_gates) + " twoq=" + format_real(gen_twoq) +
                                         " seed=" + std::to_string(seed)};
      emit(gen_out, serialize_qasm(c, so));
      return 0;
    }

    if (*experiment) {
      ExperimentSpec spec = load_experiment(spec_path);
      if (!exp_out.empty()) spec.output = exp_out;
      if (threads) spec.threads = threads;
      const ExperimentResult r = run_experiment(spec, stderr_progress(!quiet));
      write_bundle(spec.output, r.files);
      if (!quiet) {
        std::cerr << r.table.records.size() << " circuits, " << r.table.devices.size() << " device(s), "
                  << r.errors.size() << " failure(s) -> " << spec.output.string() << "\n";
      }
      return r.partial() ? kPartial : 0;
    }

    if (*report) {
      const RecordTable t = load_records(report_in);
      if (report_format == "csv") {
        emit(report_out, records_to_csv(t));
      } else if (report_format == "json") {
        emit(report_out, records_to_json(t).dump(1) + "\n");
      } else {
        const fs::path dir = report_out.empty() ? fs::path("plots") : fs::path(report_out);
        fs::create_directories(dir);
        for (const auto& [name, text] : scatter_plots(t, features)) write_text_atomic(dir / name, text);
      }
      return 0;
    }

    if (*device) {
      const Device d = resolve_device(device_spec);
      emit(device_out, to_json(d).dump(2) + "\n");
      if (!device_dist.empty()) write_text_atomic(device_dist, all_pairs_distance(d).to_csv());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "qprof: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
