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

#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "qprof/analysis.hpp"

using namespace qprof;

namespace {

FeatureMatrix matrix(const std::vector<std::string>& cols, const Matrix& rows) {
  FeatureMatrix fm;
  fm.columns = cols;
  fm.rows = rows;
  for (std::size_t i = 0; i < rows.size(); ++i) fm.row_ids.push_back("r" + std::to_string(i));
  return fm;
}

// Gaussian blobs around the given centres.
Matrix blobs(const Matrix& centres, std::size_t per, double sigma, Rng& rng) {
  Matrix out;
  for (const auto& c : centres) {
    for (std::size_t i = 0; i < per; ++i) {
      std::vector<double> p;
      for (double x : c) p.push_back(x + sigma * rng.normal());
      out.push_back(p);
    }
  }
  return out;
}

double total_variance(const Matrix& pts) {
  std::vector<double> mean(pts[0].size(), 0.0);
  for (const auto& p : pts) {
    for (std::size_t j = 0; j < p.size(); ++j) mean[j] += p[j] / static_cast<double>(pts.size());
  }
  double s = 0;
  for (const auto& p : pts) s += squared_distance(p, mean);
  return s;
}

// Two groups separated in size space; within each, two groups in graph space.
FeatureMatrix clustered_corpus(Rng& rng) {
  const std::vector<std::string> cols = {"n_qubits", "n_gates", "two_qubit_fraction", "avg_shortest_path",
                                         "min_degree", "max_degree", "adjacency_weight_std"};
  Matrix rows;
  for (int big = 0; big < 2; ++big) {
    for (int shape = 0; shape < 2; ++shape) {
      for (int i = 0; i < 15; ++i) {
        rows.push_back({big ? 20.0 + rng.normal() : 5.0 + 0.2 * rng.normal(), big ? 2000.0 + 50 * rng.normal() : 50.0 + 5 * rng.normal(),
                        0.3 + 0.01 * rng.normal(), shape ? 3.0 + 0.05 * rng.normal() : 1.2 + 0.05 * rng.normal(),
                        shape ? 1.0 : 4.0, shape ? 2.0 : 8.0, shape ? 0.5 + 0.05 * rng.normal() : 4.0 + 0.1 * rng.normal()});
      }
    }
  }
  return matrix(cols, rows);
}

}  // namespace

TEST(Pearson, SpecExampleAgainstTextbookFormula) {
  const std::vector<double> x = {1, 2, 3, 4};
  const std::vector<double> y = {2, 4, 6, 8.1};
  EXPECT_NEAR(pearson(x, y), oracle::pearson(x, y), 1e-12);
  EXPECT_GT(pearson(x, y), 0.999);
}

TEST(Pearson, MatrixIsSymmetricWithUnitDiagonal) {
  Rng rng(1);
  Matrix rows;
  for (int i = 0; i < 40; ++i) {
    const double a = rng.normal();
    rows.push_back({a, 2 * a + rng.normal(), rng.normal(), -a});
  }
  const auto corr = pearson_matrix(matrix({"a", "b", "c", "d"}, rows));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(corr.values[i][i], 1.0);
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_EQ(corr.values[i][j], corr.values[j][i]);
      EXPECT_LE(std::abs(corr.values[i][j]), 1.0);
    }
  }
  EXPECT_NEAR(corr.values[0][3], -1.0, 1e-12);
}

TEST(Pearson, AgreesWithOracleAndIsAffineInvariant) {
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 3 + rng.below(30);
    std::vector<double> x(n), y(n), ax(n);
    const double a = 0.1 + 10 * rng.uniform();
    const double b = 100 * rng.normal();
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.normal();
      y[i] = 0.5 * x[i] + rng.normal();
      ax[i] = a * x[i] + b;
    }
    EXPECT_NEAR(pearson(x, y), oracle::pearson(x, y), 1e-9);
    EXPECT_NEAR(pearson(ax, y), pearson(x, y), 1e-9);
    std::vector<double> neg(n);
    for (std::size_t i = 0; i < n; ++i) neg[i] = -ax[i];
    EXPECT_NEAR(pearson(neg, y), -pearson(x, y), 1e-9);
  }
}

TEST(Pearson, ConstantColumnIsFlagged) {
  const auto corr = pearson_matrix(matrix({"a", "k", "b"}, {{1, 5, 2}, {2, 5, 1}, {3, 5, 7}}));
  EXPECT_TRUE(corr.constant[1]);
  EXPECT_FALSE(corr.constant[0]);
  EXPECT_EQ(corr.values[0][1], 0.0);
  EXPECT_EQ(corr.values[1][2], 0.0);
  EXPECT_EQ(corr.values[1][1], 1.0);
  bool flag = false;
  const std::vector<double> k = {5, 5, 5};
  const std::vector<double> a = {1, 2, 3};
  EXPECT_EQ(pearson(k, a, &flag), 0.0);
  EXPECT_TRUE(flag);
}

TEST(Pearson, MatrixNeedsTwoRowsAndColumns) {
  EXPECT_THROW(pearson_matrix(matrix({"a", "b"}, {{1, 2}})), InvalidArgument);
  EXPECT_THROW(pearson_matrix(matrix({"a"}, {{1}, {2}})), InvalidArgument);
}

TEST(Spearman, RanksWithTies) {
  const std::vector<double> v = {10, 20, 20, 5};
  EXPECT_EQ(average_ranks(v), (std::vector<double>{2, 3.5, 3.5, 1}));
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const std::vector<double> y = {1, 8, 27, 64, 125};
  EXPECT_NEAR(spearman(x, y), 1.0, 1e-12);
}

TEST(SelectFeatures, DropsLaterCollinearColumns) {
  Rng rng(3);
  Matrix rows;
  for (int i = 0; i < 50; ++i) {
    const double a = rng.normal();
    const double b = rng.normal();
    rows.push_back({a, 3 * a + 1, b, -2 * b, rng.normal()});
  }
  const auto corr = pearson_matrix(matrix({"a", "a3", "b", "bneg", "c"}, rows));
  EXPECT_EQ(select_features(corr, 0.9), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(select_features(corr, 1.0).size(), 3u);
  EXPECT_THROW(select_features(corr, 0.0), InvalidArgument);
  EXPECT_THROW(select_features(corr, 1.5), InvalidArgument);
}

TEST(SelectFeatures, RetainedSetIsPairwiseBelowThreshold) {
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    Matrix rows;
    for (int i = 0; i < 30; ++i) {
      const double base = rng.normal();
      std::vector<double> r;
      for (int j = 0; j < 6; ++j) r.push_back(rng.uniform() * base + rng.normal() * rng.uniform());
      rows.push_back(r);
    }
    const auto fm = matrix({"c0", "c1", "c2", "c3", "c4", "c5"}, rows);
    const auto corr = pearson_matrix(fm);
    const double thr = 0.3 + 0.6 * rng.uniform();
    const auto kept = select_features(corr, thr);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (std::size_t j = i + 1; j < kept.size(); ++j) {
        EXPECT_LT(std::abs(corr.values[fm.column_index(kept[i])][fm.column_index(kept[j])]), thr);
      }
    }
    // Every dropped column is explained by some retained one.
    for (const auto& name : fm.columns) {
      if (std::find(kept.begin(), kept.end(), name) != kept.end()) continue;
      bool covered = false;
      for (const auto& k : kept) covered |= std::abs(corr.values[fm.column_index(k)][fm.column_index(name)]) >= thr;
      EXPECT_TRUE(covered) << name;
    }
  }
}

TEST(KMeans, ThreePointsOnALine) {
  const Matrix pts = {{0.0}, {1.0}, {10.0}};
  const KMeansResult r = kmeans(pts, 2, 1);
  EXPECT_EQ(r.assignments[0], r.assignments[1]);
  EXPECT_NE(r.assignments[0], r.assignments[2]);
  EXPECT_DOUBLE_EQ(r.inertia, 0.5);
  EXPECT_TRUE(r.converged);
}

TEST(KMeans, RecoversSeparatedBlobs) {
  Rng rng(5);
  const Matrix pts = blobs({{0, 0}, {10, 0}, {0, 10}}, 30, 0.5, rng);
  const KMeansResult r = kmeans(pts, 3, 9);
  for (std::size_t b = 0; b < 3; ++b) {
    std::set<std::size_t> labels;
    for (std::size_t i = 0; i < 30; ++i) labels.insert(r.assignments[b * 30 + i]);
    EXPECT_EQ(labels.size(), 1u);
  }
  EXPECT_EQ(std::set(r.assignments.begin(), r.assignments.end()).size(), 3u);
}

TEST(KMeans, SingleClusterIsTheMean) {
  Rng rng(6);
  const Matrix pts = blobs({{1, 2, 3}}, 25, 2.0, rng);
  const KMeansResult r = kmeans(pts, 1, 0);
  EXPECT_NEAR(r.inertia, total_variance(pts), 1e-9);
  for (std::size_t j = 0; j < 3; ++j) {
    double m = 0;
    for (const auto& p : pts) m += p[j] / 25.0;
    EXPECT_NEAR(r.centroids[0][j], m, 1e-12);
  }
}

TEST(KMeans, InertiaNeverIncreasesAndEndsAtAFixedPoint) {
  Rng rng(7);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 10 + rng.below(60);
    Matrix pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({rng.normal(), rng.normal(), rng.normal()});
    const std::size_t k = 1 + rng.below(6);
    const KMeansResult r = kmeans(pts, k, rng.next());
    for (std::size_t i = 1; i < r.inertia_history.size(); ++i) {
      EXPECT_LE(r.inertia_history[i], r.inertia_history[i - 1] + 1e-9);
    }
    ASSERT_TRUE(r.converged);
    for (std::size_t i = 0; i < n; ++i) {
      const double own = squared_distance(pts[i], r.centroids[r.assignments[i]]);
      for (const auto& c : r.centroids) EXPECT_LE(own, squared_distance(pts[i], c) + 1e-12);
    }
    EXPECT_EQ(std::set(r.assignments.begin(), r.assignments.end()).size(), k);
  }
}

TEST(KMeans, DeterministicForSeed) {
  Rng rng(8);
  const Matrix pts = blobs({{0, 0}, {3, 3}, {6, 0}}, 20, 1.5, rng);
  const auto a = kmeans(pts, 3, 42);
  const auto b = kmeans(pts, 3, 42);
  EXPECT_EQ(a.assignments, b.assignments);
  EXPECT_EQ(a.centroids, b.centroids);
}

TEST(KMeans, TooManyClusters) {
  EXPECT_THROW(kmeans({{1.0}, {1.0}, {2.0}}, 3, 0), KTooLarge);
  EXPECT_THROW(kmeans({{1.0}}, 0, 0), KTooLarge);
  EXPECT_NO_THROW(kmeans({{1.0}, {1.0}, {2.0}}, 2, 0));
}

TEST(Silhouette, SeparatedBlobsScoreHigh) {
  Rng rng(9);
  const Matrix pts = blobs({{0, 0}, {50, 50}}, 20, 1.0, rng);
  std::vector<std::size_t> labels(40);
  for (std::size_t i = 20; i < 40; ++i) labels[i] = 1;
  EXPECT_GT(silhouette(pts, labels), 0.9);
}

TEST(Silhouette, DuplicatePairsScoreOne) {
  const Matrix pts = {{0, 0}, {0, 0}, {5, 5}, {5, 5}};
  EXPECT_DOUBLE_EQ(silhouette(pts, {0, 0, 1, 1}), 1.0);
}

TEST(Silhouette, RandomLabelsScoreLow) {
  Rng rng(10);
  Matrix pts;
  std::vector<std::size_t> labels;
  for (int i = 0; i < 200; ++i) {
    pts.push_back({rng.normal(), rng.normal()});
    labels.push_back(rng.below(3));
  }
  EXPECT_LT(silhouette(pts, labels), 0.2);
}

TEST(Silhouette, AgreesWithDirectDefinition) {
  Rng rng(11);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 4 + rng.below(20);
    Matrix pts;
    std::vector<std::size_t> labels;
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back({rng.normal(), rng.normal()});
      labels.push_back(i < 2 ? i : rng.below(3));
    }
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::map<std::size_t, std::pair<double, double>> acc;  // label -> (sum, count)
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        auto& [s, c] = acc[labels[j]];
        s += std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
        c += 1;
      }
      if (!acc.count(labels[i])) continue;  // singleton
      const double a = acc[labels[i]].first / acc[labels[i]].second;
      double b = 1e300;
      for (const auto& [l, sc] : acc) {
        if (l != labels[i]) b = std::min(b, sc.first / sc.second);
      }
      total += (b - a) / std::max(a, b);
    }
    EXPECT_NEAR(silhouette(pts, labels), total / static_cast<double>(n), 1e-9);
  }
}

TEST(Silhouette, NeedsTwoClusters) {
  EXPECT_THROW(silhouette({{0.0}, {1.0}}, {4, 4}), SingleCluster);
}

TEST(TwoStage, FindsNestedStructure) {
  Rng rng(12);
  const FeatureMatrix fm = clustered_corpus(rng);
  TwoStageOptions opt;
  opt.k1 = 2;
  opt.seed = 3;
  const ClusterModel m = two_stage_cluster(fm, opt);
  // Stage one splits by size; stage two by interaction shape.
  for (int block = 0; block < 4; ++block) {
    std::set<ClusterLabel> labels;
    for (int i = 0; i < 15; ++i) labels.insert(m.labels[block * 15 + i]);
    EXPECT_EQ(labels.size(), 1u) << "block " << block;
  }
  EXPECT_NE(m.labels[0].stage1, m.labels[30].stage1);
  EXPECT_NE(m.labels[0].stage2, m.labels[15].stage2);
  for (const auto& sub : m.stage2) {
    EXPECT_EQ(sub.centroids.size(), 2u);
    EXPECT_GT(sub.silhouette, 0.7);
  }
}

TEST(TwoStage, DegenerateStageTwoKeepsOneCluster) {
  // Stage-one cluster with two members cannot be split further.
  const FeatureMatrix fm = matrix({"n_qubits", "n_gates", "two_qubit_fraction", "avg_shortest_path", "min_degree",
                                   "max_degree", "adjacency_weight_std"},
                                  {{2, 10, 0.5, 1, 1, 1, 0}, {2, 11, 0.5, 1, 1, 1, 0}, {50, 900, 0.2, 2, 1, 3, 1},
                                   {51, 910, 0.2, 3, 2, 4, 2}, {50, 905, 0.2, 2.5, 1, 3, 1.5}, {52, 920, 0.2, 5, 1, 6, 3}});
  TwoStageOptions opt;
  opt.k1 = 2;
  const ClusterModel m = two_stage_cluster(fm, opt);
  const std::size_t small = m.labels[0].stage1;
  EXPECT_EQ(m.stage2[small].centroids.size(), 1u);
  EXPECT_TRUE(std::isnan(m.stage2[small].silhouette));
  EXPECT_EQ(m.labels[0].stage2, 0u);
  EXPECT_EQ(m.labels[1].stage2, 0u);
}

TEST(TwoStage, LabelsPartitionTheCorpus) {
  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    FeatureMatrix fm = clustered_corpus(rng);
    TwoStageOptions opt;
    opt.k1 = 1 + rng.below(4);
    opt.seed = rng.next();
    const ClusterModel m = two_stage_cluster(fm, opt);
    ASSERT_EQ(m.labels.size(), fm.rows.size());
    std::set<std::size_t> s1;
    for (const auto& l : m.labels) {
      s1.insert(l.stage1);
      ASSERT_LT(l.stage1, opt.k1);
      ASSERT_LT(l.stage2, m.stage2[l.stage1].centroids.size());
    }
    EXPECT_EQ(s1.size(), opt.k1);
  }
}

TEST(TwoStage, AssignReproducesTrainingLabels) {
  Rng rng(14);
  const FeatureMatrix fm = clustered_corpus(rng);
  TwoStageOptions opt;
  opt.k1 = 3;
  opt.seed = 21;
  const ClusterModel m = two_stage_cluster(fm, opt);
  for (std::size_t i = 0; i < fm.rows.size(); ++i) {
    EXPECT_EQ(assign_cluster(row_features(fm, i), m), m.labels[i]) << "row " << i;
  }
  auto f = row_features(fm, 0);
  f.erase("min_degree");
  EXPECT_THROW(assign_cluster(f, m), MissingFeature);
}

TEST(TwoStage, NearestCentroidTieGoesToLowestIndex) {
  const Matrix centroids = {{1.0}, {-1.0}, {1.0}};
  const std::vector<double> p = {0.0};
  EXPECT_EQ(nearest_centroid(p, centroids), 0u);
  const std::vector<double> q = {1.0};
  EXPECT_EQ(nearest_centroid(q, centroids), 0u);
}

TEST(TwoStage, JsonRoundTrip) {
  Rng rng(15);
  const FeatureMatrix fm = clustered_corpus(rng);
  TwoStageOptions opt;
  opt.k1 = 2;
  const ClusterModel m = two_stage_cluster(fm, opt);
  const ClusterModel back = cluster_model_from_json(nlohmann::json::parse(to_json(m).dump()));
  EXPECT_EQ(to_json(back), to_json(m));
  for (std::size_t i = 0; i < fm.rows.size(); ++i) EXPECT_EQ(assign_cluster(row_features(fm, i), back), m.labels[i]);
  EXPECT_THROW(cluster_model_from_json(nlohmann::json{{"format", "other"}}), InvalidArgument);
  EXPECT_THROW(cluster_model_from_json(nlohmann::json::object()), InvalidArgument);
}

TEST(TwoStage, DeterministicAndRowOrderCovariant) {
  Rng rng(16);
  const FeatureMatrix fm = clustered_corpus(rng);
  TwoStageOptions opt;
  opt.k1 = 2;
  opt.seed = 8;
  const ClusterModel a = two_stage_cluster(fm, opt);
  EXPECT_EQ(to_json(a), to_json(two_stage_cluster(fm, opt)));

  // On well-separated data a reordering only permutes label names: the
  // co-membership relation is unchanged.
  FeatureMatrix rev = fm;
  std::reverse(rev.rows.begin(), rev.rows.end());
  std::reverse(rev.row_ids.begin(), rev.row_ids.end());
  const ClusterModel b = two_stage_cluster(rev, opt);
  const std::size_t n = fm.rows.size();
  for (std::size_t i = 0; i < n; i += 7) {
    for (std::size_t j = 0; j < n; j += 5) {
      EXPECT_EQ(a.labels[i] == a.labels[j], b.labels[n - 1 - i] == b.labels[n - 1 - j]);
    }
  }
}

TEST(TwoStage, CorpusSmallerThanK1) {
  const FeatureMatrix fm = matrix({"n_qubits", "n_gates", "two_qubit_fraction", "avg_shortest_path", "min_degree",
                                   "max_degree", "adjacency_weight_std"},
                                  {{2, 10, 0.5, 1, 1, 1, 0}});
  TwoStageOptions opt;
  opt.k1 = 2;
  EXPECT_THROW(two_stage_cluster(fm, opt), KTooLarge);
}
