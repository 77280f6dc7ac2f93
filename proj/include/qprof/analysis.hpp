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

// Statistics over per-circuit feature vectors: correlation matrices,
// correlation-based feature reduction, k-means, silhouette scoring and the
// two-stage (size, then interaction-graph) clustering scheme.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qprof/error.hpp"
#include "qprof/random.hpp"

namespace qprof {

using Matrix = std::vector<std::vector<double>>;

/// One row per circuit, one named column per feature.
struct FeatureMatrix {
  std::vector<std::string> columns;
  std::vector<std::string> row_ids;
  Matrix rows;

  std::size_t column_index(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw MissingFeature("feature '" + name + "' not present");
    return static_cast<std::size_t>(it - columns.begin());
  }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) out[i] = rows[i][j];
    return out;
  }

  /// Sub-matrix restricted to the named columns, in the given order.
  Matrix select(const std::vector<std::string>& names) const {
    std::vector<std::size_t> idx;
    for (const auto& n : names) idx.push_back(column_index(n));
    Matrix out(rows.size(), std::vector<double>(idx.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < idx.size(); ++j) out[i][j] = rows[i][idx[j]];
    }
    return out;
  }

  /// Throws InvalidArgument on ragged rows, non-finite entries or duplicate ids.
  void check() const {
    if (row_ids.size() != rows.size()) throw InvalidArgument("row id count differs from row count");
    std::set<std::string> ids(row_ids.begin(), row_ids.end());
    if (ids.size() != row_ids.size()) throw InvalidArgument("duplicate row id in feature matrix");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != columns.size()) throw InvalidArgument("row '" + row_ids[i] + "' has wrong width");
      for (double v : rows[i]) {
        if (!std::isfinite(v)) throw InvalidArgument("non-finite feature in row '" + row_ids[i] + "'");
      }
    }
  }
};

/// Sample Pearson correlation. Returns 0 and sets *constant when either
/// input has zero variance.
inline double pearson(std::span<const double> x, std::span<const double> y, bool* constant = nullptr) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    if (constant) *constant = true;
    return 0.0;
  }
  if (constant) *constant = false;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Average ranks (1-based), ties share the mean of their positions.
inline std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

/// Spearman rank correlation (Pearson over average ranks).
inline double spearman(std::span<const double> x, std::span<const double> y, bool* constant = nullptr) {
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry, constant);
}

struct CorrelationMatrix {
  std::vector<std::string> names;
  Matrix values;
  std::vector<bool> constant;  // per column: zero variance, correlations reported as 0
};

inline CorrelationMatrix pearson_matrix(const FeatureMatrix& fm) {
  fm.check();
  if (fm.rows.size() < 2) throw InvalidArgument("correlation needs at least two rows");
  if (fm.columns.size() < 2) throw InvalidArgument("correlation needs at least two columns");
  const std::size_t m = fm.columns.size();
  std::vector<std::vector<double>> cols(m);
  for (std::size_t j = 0; j < m; ++j) cols[j] = fm.column(j);
  CorrelationMatrix out;
  out.names = fm.columns;
  out.values.assign(m, std::vector<double>(m, 0.0));
  out.constant.assign(m, false);
  for (std::size_t j = 0; j < m; ++j) {
    const double first = cols[j].front();
    out.constant[j] = std::all_of(cols[j].begin(), cols[j].end(), [&](double v) { return v == first; });
  }
  for (std::size_t i = 0; i < m; ++i) {
    out.values[i][i] = 1.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      const double r = (out.constant[i] || out.constant[j]) ? 0.0 : pearson(cols[i], cols[j]);
      out.values[i][j] = r;
      out.values[j][i] = r;
    }
  }
  return out;
}

/// Greedy de-duplication in column order: a feature is dropped iff it
/// correlates with an already retained feature at |r| >= threshold.
inline std::vector<std::string> select_features(const CorrelationMatrix& corr, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw InvalidArgument("threshold must lie in (0, 1]");
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < corr.names.size(); ++j) {
    bool drop = false;
    for (std::size_t i : kept) {
      if (std::abs(corr.values[i][j]) >= threshold) {
        drop = true;
        break;
      }
    }
    if (!drop) kept.push_back(j);
  }
  std::vector<std::string> out;
  for (std::size_t j : kept) out.push_back(corr.names[j]);
  return out;
}

/// Per-feature z-score parameters (population standard deviation; a zero
/// spread is replaced by 1 so constant features map to 0).
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const Matrix& rows) {
    Standardizer s;
    if (rows.empty()) return s;
    const std::size_t d = rows.front().size();
    s.mean.assign(d, 0.0);
    s.scale.assign(d, 0.0);
    for (const auto& r : rows) {
      for (std::size_t j = 0; j < d; ++j) s.mean[j] += r[j];
    }
    for (double& m : s.mean) m /= static_cast<double>(rows.size());
    for (const auto& r : rows) {
      for (std::size_t j = 0; j < d; ++j) s.scale[j] += (r[j] - s.mean[j]) * (r[j] - s.mean[j]);
    }
    for (double& v : s.scale) {
      v = std::sqrt(v / static_cast<double>(rows.size()));
      if (v == 0.0) v = 1.0;
    }
    return s;
  }

  std::vector<double> transform(std::span<const double> row) const {
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean[j]) / scale[j];
    return out;
  }

  Matrix transform(const Matrix& rows) const {
    Matrix out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(transform(r));
    return out;
  }
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return s;
}

/// Index of the nearest centroid; ties go to the lowest index.
inline std::size_t nearest_centroid(std::span<const double> p, const Matrix& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

inline std::size_t count_distinct(const Matrix& points) {
  Matrix sorted = points;
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

struct KMeansOptions {
  std::size_t max_iterations = 300;
};

struct KMeansResult {
  std::vector<std::size_t> assignments;
  Matrix centroids;
  double inertia = 0.0;
  std::vector<double> inertia_history;  // one entry per Lloyd iteration
  std::size_t iterations = 0;
  bool converged = false;
};

/// Lloyd's algorithm from k-means++ seeding. Deterministic for a given seed.
inline KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& opts = {}) {
  const std::size_t n = points.size();
  if (k == 0) throw KTooLarge("k must be at least 1");
  if (k > count_distinct(points)) {
    throw KTooLarge("k=" + std::to_string(k) + " exceeds the number of distinct points");
  }
  Rng rng(seed);
  const std::size_t dim = points.front().size();

  // k-means++ seeding.
  Matrix centroids;
  centroids.push_back(points[rng.below(n)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centroids[0]);
  while (centroids.size() < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    const double r = rng.uniform() * total;
    double cum = 0.0;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      cum += d2[i];
      if (d2[i] > 0.0 && cum > r) {
        pick = i;
        break;
      }
    }
    if (pick == n) {  // rounding at the top end
      for (std::size_t i = n; i-- > 0;) {
        if (d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    }
    centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(points[i], centroids.back()));
  }

  KMeansResult res;
  auto assign_all = [&](const Matrix& cs) {
    std::vector<std::size_t> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = nearest_centroid(points[i], cs);
    return a;
  };
  auto means = [&](const std::vector<std::size_t>& a, std::vector<std::size_t>& counts) {
    Matrix cs(k, std::vector<double>(dim, 0.0));
    counts.assign(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[a[i]];
      for (std::size_t j = 0; j < dim; ++j) cs[a[i]][j] += points[i][j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (double& v : cs[c]) v /= static_cast<double>(counts[c]);
    }
    return cs;
  };

  std::vector<std::size_t> assign = assign_all(centroids);
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    std::vector<std::size_t> counts;
    centroids = means(assign, counts);
    // Repair empty clusters with the point farthest from its centroid.
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[assign[i]] < 2) continue;
        const double d = squared_distance(points[i], centroids[assign[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      assign[far] = c;
      centroids = means(assign, counts);
    }
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) inertia += squared_distance(points[i], centroids[assign[i]]);
    res.inertia_history.push_back(inertia);
    res.iterations = it + 1;
    std::vector<std::size_t> next = assign_all(centroids);
    if (next == assign) {
      res.converged = true;
      break;
    }
    assign = std::move(next);
  }
  res.assignments = std::move(assign);
  res.centroids = std::move(centroids);
  res.inertia = res.inertia_history.back();
  return res;
}

/// Mean silhouette coefficient. Singleton clusters contribute 0.
inline double silhouette(const Matrix& points, const std::vector<std::size_t>& labels) {
  const std::size_t n = points.size();
  std::map<std::size_t, std::size_t> sizes;
  for (std::size_t l : labels) ++sizes[l];
  if (sizes.size() < 2) throw SingleCluster("silhouette needs at least two clusters");
  std::vector<std::size_t> dense(n);
  std::map<std::size_t, std::size_t> remap;
  for (const auto& [l, s] : sizes) remap.emplace(l, remap.size());
  for (std::size_t i = 0; i < n; ++i) dense[i] = remap[labels[i]];
  std::vector<std::size_t> size_of(remap.size());
  for (const auto& [l, s] : sizes) size_of[remap[l]] = s;

  double total = 0.0;
  std::vector<double> sums(remap.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) sums[dense[j]] += std::sqrt(squared_distance(points[i], points[j]));
    }
    const std::size_t own = dense[i];
    if (size_of[own] == 1) continue;
    const double a = sums[own] / static_cast<double>(size_of[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < sums.size(); ++c) {
      if (c != own) b = std::min(b, sums[c] / static_cast<double>(size_of[c]));
    }
    const double m = std::max(a, b);
    total += m == 0.0 ? 0.0 : (b - a) / m;
  }
  return total / static_cast<double>(n);
}

struct TwoStageOptions {
  std::size_t k1 = 5;
  std::size_t k2_min = 2;
  std::size_t k2_max = 6;
  std::uint64_t seed = 0;
  std::vector<std::string> size_features = {"n_qubits", "n_gates", "two_qubit_fraction"};
  std::vector<std::string> graph_features = {"avg_shortest_path", "min_degree", "max_degree", "adjacency_weight_std"};
  KMeansOptions kmeans;
};

/// Stage-two model for one stage-one cluster.
struct SubModel {
  Standardizer scaler;
  Matrix centroids;   // one centroid when the cluster could not be split
  double silhouette;  // NaN when single
};

struct ClusterLabel {
  std::size_t stage1 = 0;
  std::size_t stage2 = 0;
  bool operator==(const ClusterLabel&) const = default;
  auto operator<=>(const ClusterLabel&) const = default;
};

struct ClusterModel {
  static constexpr int kVersion = 1;

  std::vector<std::string> size_features;
  std::vector<std::string> graph_features;
  std::uint64_t seed = 0;
  std::size_t k2_min = 2;
  std::size_t k2_max = 6;
  Standardizer stage1_scaler;
  Matrix stage1_centroids;
  std::vector<SubModel> stage2;
  // Training assignments, aligned with row_ids.
  std::vector<std::string> row_ids;
  std::vector<ClusterLabel> labels;
};

namespace analysis_detail {

inline std::uint64_t stage2_seed(std::uint64_t seed, std::size_t cluster, std::size_t k) {
  return derive_seed(seed, 1000 * (cluster + 1) + k);
}

}  // namespace analysis_detail

inline ClusterModel two_stage_cluster(const FeatureMatrix& fm, const TwoStageOptions& opts = {}) {
  fm.check();
  if (fm.rows.size() < opts.k1) throw KTooLarge("corpus smaller than k1");
  ClusterModel model;
  model.size_features = opts.size_features;
  model.graph_features = opts.graph_features;
  model.seed = opts.seed;
  model.k2_min = opts.k2_min;
  model.k2_max = opts.k2_max;
  model.row_ids = fm.row_ids;

  const Matrix size_raw = fm.select(opts.size_features);
  const Matrix graph_raw = fm.select(opts.graph_features);
  model.stage1_scaler = Standardizer::fit(size_raw);
  const Matrix size_z = model.stage1_scaler.transform(size_raw);
  const KMeansResult s1 = kmeans(size_z, opts.k1, derive_seed(opts.seed, 0), opts.kmeans);
  model.stage1_centroids = s1.centroids;
  model.labels.assign(fm.rows.size(), {});
  for (std::size_t i = 0; i < fm.rows.size(); ++i) model.labels[i].stage1 = s1.assignments[i];

  for (std::size_t c = 0; c < opts.k1; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < fm.rows.size(); ++i) {
      if (s1.assignments[i] == c) members.push_back(i);
    }
    Matrix raw;
    for (std::size_t i : members) raw.push_back(graph_raw[i]);
    SubModel sub;
    sub.scaler = Standardizer::fit(raw);
    const Matrix z = sub.scaler.transform(raw);
    sub.silhouette = std::numeric_limits<double>::quiet_NaN();
    const std::size_t distinct = z.empty() ? 0 : count_distinct(z);
    std::vector<std::size_t> best_assign(members.size(), 0);
    Matrix best_centroids;
    for (std::size_t k = opts.k2_min; k <= opts.k2_max; ++k) {
      // Silhouette needs at least two clusters and k < n to be informative.
      if (k < 2) continue;
      if (k > distinct || k >= members.size()) break;
      KMeansResult r = kmeans(z, k, analysis_detail::stage2_seed(opts.seed, c, k), opts.kmeans);
      const double s = silhouette(z, r.assignments);
      if (std::isnan(sub.silhouette) || s > sub.silhouette) {
        sub.silhouette = s;
        best_assign = r.assignments;
        best_centroids = r.centroids;
      }
    }
    if (best_centroids.empty()) {
      // Degenerate: one stage-two cluster at the mean.
      std::vector<double> mean(opts.graph_features.size(), 0.0);
      for (const auto& p : z) {
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += p[j];
      }
      if (!z.empty()) {
        for (double& v : mean) v /= static_cast<double>(z.size());
      }
      best_centroids = {mean};
    }
    sub.centroids = std::move(best_centroids);
    for (std::size_t m = 0; m < members.size(); ++m) model.labels[members[m]].stage2 = best_assign[m];
    model.stage2.push_back(std::move(sub));
  }
  return model;
}

/// Nearest-centroid assignment using the model's stored standardization.
inline ClusterLabel assign_cluster(const std::map<std::string, double>& features, const ClusterModel& model) {
  auto gather = [&](const std::vector<std::string>& names) {
    std::vector<double> v;
    for (const auto& n : names) {
      auto it = features.find(n);
      if (it == features.end()) throw MissingFeature("feature '" + n + "' missing");
      v.push_back(it->second);
    }
    return v;
  };
  ClusterLabel label;
  label.stage1 = nearest_centroid(model.stage1_scaler.transform(gather(model.size_features)), model.stage1_centroids);
  const SubModel& sub = model.stage2.at(label.stage1);
  label.stage2 = nearest_centroid(sub.scaler.transform(gather(model.graph_features)), sub.centroids);
  return label;
}

inline std::map<std::string, double> row_features(const FeatureMatrix& fm, std::size_t row) {
  std::map<std::string, double> out;
  for (std::size_t j = 0; j < fm.columns.size(); ++j) out[fm.columns[j]] = fm.rows[row][j];
  return out;
}

inline nlohmann::json to_json(const ClusterModel& m) {
  using nlohmann::json;
  auto scaler = [](const Standardizer& s) { return json{{"mean", s.mean}, {"scale", s.scale}}; };
  json stage2 = json::array();
  for (const auto& sub : m.stage2) {
    json j{{"scaler", scaler(sub.scaler)}, {"centroids", sub.centroids}};
    j["silhouette"] = std::isnan(sub.silhouette) ? json(nullptr) : json(sub.silhouette);
    stage2.push_back(std::move(j));
  }
  json labels = json::array();
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    labels.push_back({{"id", m.row_ids[i]}, {"stage1", m.labels[i].stage1}, {"stage2", m.labels[i].stage2}});
  }
  return json{{"format", "qprof.cluster_model"},
              {"version", ClusterModel::kVersion},
              {"seed", m.seed},
              {"k2_range", {m.k2_min, m.k2_max}},
              {"size_features", m.size_features},
              {"graph_features", m.graph_features},
              {"stage1", {{"scaler", scaler(m.stage1_scaler)}, {"centroids", m.stage1_centroids}}},
              {"stage2", stage2},
              {"assignments", labels}};
}

inline ClusterModel cluster_model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "qprof.cluster_model") throw InvalidArgument("not a cluster model document");
    if (j.at("version").get<int>() != ClusterModel::kVersion) throw InvalidArgument("unsupported cluster model version");
    auto scaler = [](const nlohmann::json& s) {
      return Standardizer{s.at("mean").get<std::vector<double>>(), s.at("scale").get<std::vector<double>>()};
    };
    ClusterModel m;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.k2_min = j.at("k2_range").at(0).get<std::size_t>();
    m.k2_max = j.at("k2_range").at(1).get<std::size_t>();
    m.size_features = j.at("size_features").get<std::vector<std::string>>();
    m.graph_features = j.at("graph_features").get<std::vector<std::string>>();
    m.stage1_scaler = scaler(j.at("stage1").at("scaler"));
    m.stage1_centroids = j.at("stage1").at("centroids").get<Matrix>();
    for (const auto& s : j.at("stage2")) {
      SubModel sub;
      sub.scaler = scaler(s.at("scaler"));
      sub.centroids = s.at("centroids").get<Matrix>();
      sub.silhouette = s.at("silhouette").is_null() ? std::numeric_limits<double>::quiet_NaN() : s.at("silhouette").get<double>();
      m.stage2.push_back(std::move(sub));
    }
    for (const auto& a : j.at("assignments")) {
      m.row_ids.push_back(a.at("id").get<std::string>());
      m.labels.push_back({a.at("stage1").get<std::size_t>(), a.at("stage2").get<std::size_t>()});
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed cluster model: ") + e.what());
  }
}

}  // namespace qprof
