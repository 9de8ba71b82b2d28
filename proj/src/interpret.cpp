// Copyright 2026 The INCE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ince/interpret.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "ince/batch.hpp"
#include "ince/chi_square.hpp"
#include "ince/errors.hpp"

namespace ince
{

namespace
{

const double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_interaction(const InceModel & model, const char * what)
{
  const InceConfig & c = model.config();
  if (c.layers == 0 || c.encoder != EncoderKind::Interaction) {
    throw UnsupportedError(
      std::string(what) + " needs an interaction-network encoder (model has encoder '" +
      (c.layers == 0 ? std::string("none, n=0") : std::string(to_string(c.encoder))) + "')");
  }
}

void append(EdgeSet & set, std::size_t row, std::size_t src, std::size_t dst)
{
  set.row.push_back(row);
  set.src.push_back(src);
  set.dst.push_back(dst);
}

std::string format_number(double v)
{
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::string format_full(double v)
{
  if (std::isnan(v)) return "";
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string csv_field(const std::string & s)
{
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double mean_of_finite(const std::vector<double> & v)
{
  double sum = 0.0;
  std::size_t n = 0;
  for (double x : v) {
    if (!std::isnan(x)) {
      sum += x;
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n) : kNaN;
}

}  // namespace

EdgeCollection collect_edge_vectors(InceModel & model, const PreparedDataset & data, std::size_t chunk)
{
  require_interaction(model, "edge collection");
  model.check_compatible(data);
  const FeatureGraph & graph = model.interaction().graph();
  const std::size_t m = graph.num_features;
  const std::size_t e = graph.num_edges();
  const std::size_t l = model.config().latent;

  EdgeCollection out;
  out.features.latent = out.cls.latent = l;
  std::size_t n_feat = 0;
  for (const auto & [s, d] : graph.edges) n_feat += (s < m && d < m) ? 1 : 0;
  out.features.vectors.resize(static_cast<Eigen::Index>(data.rows * n_feat), static_cast<Eigen::Index>(l));
  out.cls.vectors.resize(static_cast<Eigen::Index>(data.rows * (e - n_feat)), static_cast<Eigen::Index>(l));

  std::vector<std::size_t> rows;
  Eigen::Index fi = 0;
  Eigen::Index ci = 0;
  for (std::size_t start = 0; start < data.rows; start += chunk) {
    const std::size_t end = std::min(data.rows, start + chunk);
    rows.resize(end - start);
    std::iota(rows.begin(), rows.end(), start);
    Graph g(false);
    ModelOutput o = model.forward(g, make_batch(data, rows));
    const auto edges = g.value(o.encoder.edges).matrix();
    for (std::size_t b = 0; b < rows.size(); ++b) {
      for (std::size_t k = 0; k < e; ++k) {
        const auto [s, d] = graph.edges[k];
        const auto src_row = edges.row(static_cast<Eigen::Index>(b * e + k));
        if (s < m && d < m) {
          append(out.features, start + b, s, d);
          out.features.vectors.row(fi++) = src_row;
        } else {
          append(out.cls, start + b, s, d);
          out.cls.vectors.row(ci++) = src_row;
        }
      }
    }
  }
  return out;
}

PopulationStats fit_population_stats(const RowMatrix & vectors)
{
  const auto n = vectors.rows();
  const auto l = vectors.cols();
  if (l == 0) throw ContractError("population has zero-length vectors");
  if (n <= l) {
    throw ContractError(
      "population needs more records (" + std::to_string(n) + ") than latent dimensions (" +
      std::to_string(l) + ")");
  }
  PopulationStats s;
  s.count = static_cast<std::size_t>(n);
  s.mean = vectors.colwise().mean().transpose();
  const RowMatrix centered = vectors.rowwise() - s.mean.transpose();
  s.covariance = (centered.transpose() * centered) / static_cast<double>(n - 1);
  const double trace = s.covariance.trace();
  s.lambda = trace > 0.0 ? 1e-8 * trace / static_cast<double>(l) : 1e-8;
  s.covariance.diagonal().array() += s.lambda;
  return s;
}

PopulationStats fit_population_stats(const std::vector<const EdgeSet *> & sets)
{
  Eigen::Index rows = 0;
  Eigen::Index cols = -1;
  for (const EdgeSet * s : sets) {
    rows += s->vectors.rows();
    if (cols >= 0 && cols != s->vectors.cols()) throw ContractError("edge sets differ in latent size");
    cols = s->vectors.cols();
  }
  if (sets.size() == 1) return fit_population_stats(sets[0]->vectors);
  RowMatrix all(rows, std::max<Eigen::Index>(cols, 0));
  Eigen::Index at = 0;
  for (const EdgeSet * s : sets) {
    all.middleRows(at, s->vectors.rows()) = s->vectors;
    at += s->vectors.rows();
  }
  return fit_population_stats(all);
}

MahalanobisScorer::MahalanobisScorer(const PopulationStats & stats)
: mean_(stats.mean), ldlt_(stats.covariance)
{
  if (ldlt_.info() != Eigen::Success || !ldlt_.isPositive() || (ldlt_.vectorD().array() <= 0.0).any()) {
    throw NumericError("covariance matrix is singular after regularization");
  }
}

MahalanobisResult MahalanobisScorer::operator()(const Eigen::Ref<const Eigen::VectorXd> & e) const
{
  if (e.size() != mean_.size()) throw ContractError("edge vector length differs from the population's");
  const Eigen::VectorXd diff = e - mean_;
  MahalanobisResult r;
  r.d2 = std::max(0.0, diff.dot(ldlt_.solve(diff)));
  r.p = chi_square_survival(r.d2, static_cast<double>(mean_.size()));
  return r;
}

MahalanobisResult mahalanobis_pvalue(const Eigen::VectorXd & e, const PopulationStats & stats)
{
  return MahalanobisScorer(stats)(e);
}

void score_edges(EdgeSet & edges, const PopulationStats & stats)
{
  const MahalanobisScorer scorer(stats);
  edges.d2.resize(edges.size());
  edges.p.resize(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Eigen::VectorXd v = edges.vectors.row(static_cast<Eigen::Index>(i)).transpose();
    const auto r = scorer(v);
    edges.d2[i] = r.d2;
    edges.p[i] = r.p;
  }
}

std::vector<double> Heatmap::row_means() const
{
  std::vector<double> out;
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    std::vector<double> row(values.row(r).data(), values.row(r).data() + values.cols());
    out.push_back(mean_of_finite(row));
  }
  return out;
}

std::vector<double> Heatmap::col_means() const
{
  std::vector<double> out;
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    std::vector<double> col;
    for (Eigen::Index r = 0; r < values.rows(); ++r) col.push_back(values(r, c));
    out.push_back(mean_of_finite(col));
  }
  return out;
}

double Heatmap::grand_mean() const
{
  return mean_of_finite(std::vector<double>(values.data(), values.data() + values.size()));
}

void write_heatmap_csv(std::ostream & out, const Heatmap & h)
{
  const auto rm = h.row_means();
  const auto cm = h.col_means();
  for (const auto & c : h.col_labels) out << "," << csv_field(c);
  out << ",Mean\n";
  for (Eigen::Index r = 0; r < h.values.rows(); ++r) {
    out << csv_field(h.row_labels[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < h.values.cols(); ++c) out << "," << format_full(h.values(r, c));
    out << "," << format_full(rm[static_cast<std::size_t>(r)]) << "\n";
  }
  out << "Mean";
  for (double v : cm) out << "," << format_full(v);
  out << "," << format_full(h.grand_mean()) << "\n";
}

std::string feature_value_label(const PreparedDataset & data, std::size_t row, std::size_t j)
{
  if (j < data.num_numerical) {
    const auto & s = data.stats.numerical.at(j);
    return format_number(data.numerical_at(row, j) * s.std + s.mean);
  }
  const std::size_t c = j - data.num_numerical;
  return data.stats.categorical.at(c).label_of(data.categorical_at(row, c));
}

InteractionSummary aggregate_interactions(const EdgeSet & scored, const PreparedDataset & data)
{
  if (scored.p.size() != scored.size()) throw ContractError("edge set has not been scored");
  const std::size_t m = data.num_features();
  InteractionSummary s;
  s.test_rows = data.rows;
  for (const auto & n : data.stats.numerical) s.features.push_back(n.name);
  for (const auto & c : data.stats.categorical) s.features.push_back(c.name);

  // Feature level.
  RowMatrix sum = RowMatrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::vector<std::size_t> count(m * m, 0);
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (scored.src[i] >= m || scored.dst[i] >= m) throw ContractError("CLS edge in a feature-feature edge set");
    sum(static_cast<Eigen::Index>(scored.src[i]), static_cast<Eigen::Index>(scored.dst[i])) += scored.p[i];
    ++count[scored.src[i] * m + scored.dst[i]];
  }
  s.directed.row_labels = s.directed.col_labels = s.features;
  s.directed.values = RowMatrix::Constant(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m), kNaN);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      if (count[a * m + b] == 0) {
        s.warnings.push_back("no records for edge " + s.features[a] + " -> " + s.features[b]);
        continue;
      }
      if (count[a * m + b] != data.rows) {
        s.warnings.push_back("edge " + s.features[a] + " -> " + s.features[b] + " has " +
          std::to_string(count[a * m + b]) + " records for " + std::to_string(data.rows) + " rows");
      }
      s.directed.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
        sum(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) / static_cast<double>(data.rows);
    }
  }
  s.symmetric.row_labels = s.symmetric.col_labels = s.features;
  s.symmetric.values = 0.5 * (s.directed.values + s.directed.values.transpose());
  for (std::size_t a = 0; a < m; ++a) {
    double total = 0.0;
    for (std::size_t b = 0; b < m; ++b) {
      if (a != b) total += s.symmetric.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
    s.feature_scores.push_back(m > 1 ? total / static_cast<double>(m - 1) : kNaN);
  }

  // Feature-value level: one group per categorical value present, one per numerical feature.
  std::vector<std::map<int, std::size_t>> group_of(m);
  std::vector<std::string> labels;
  std::vector<std::size_t> label_feature;
  for (std::size_t j = 0; j < m; ++j) {
    if (j < data.num_numerical) {
      group_of[j][0] = labels.size();
      labels.push_back(s.features[j]);
      label_feature.push_back(j);
      continue;
    }
    const std::size_t c = j - data.num_numerical;
    std::map<int, bool> present;
    for (std::size_t r = 0; r < data.rows; ++r) present[data.categorical_at(r, c)] = true;
    std::vector<int> codes;
    for (const auto & [code, _] : present) {
      if (code != 0) codes.push_back(code);
    }
    if (present.count(0)) codes.push_back(0);
    for (int code : codes) {
      group_of[j][code] = labels.size();
      labels.push_back(s.features[j] + "=" + data.stats.categorical[c].label_of(code));
      label_feature.push_back(j);
    }
  }
  auto group = [&](std::size_t row, std::size_t j) {
    const int key = j < data.num_numerical ? 0 : data.categorical_at(row, j - data.num_numerical);
    return group_of[j].at(key);
  };
  const std::size_t k = labels.size();
  RowMatrix vsum = RowMatrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  std::vector<std::size_t> vcount(k * k, 0);
  for (std::size_t i = 0; i < scored.size(); ++i) {
    const std::size_t a = group(scored.row[i], scored.src[i]);
    const std::size_t b = group(scored.row[i], scored.dst[i]);
    vsum(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += scored.p[i];
    ++vcount[a * k + b];
  }
  s.feature_values.row_labels = s.feature_values.col_labels = labels;
  s.feature_values.values = RowMatrix::Constant(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k), kNaN);
  std::size_t empty = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (label_feature[a] == label_feature[b]) continue;
      if (vcount[a * k + b] == 0) {
        ++empty;
        continue;
      }
      s.feature_values.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
        vsum(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) / static_cast<double>(vcount[a * k + b]);
    }
  }
  if (empty) {
    s.warnings.push_back(std::to_string(empty) + " feature-value pairs never co-occur; their cells are left empty");
  }
  return s;
}

nlohmann::json summary_to_json(const InteractionSummary & s)
{
  auto matrix = [](const Heatmap & h) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < h.values.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < h.values.cols(); ++c) {
        const double v = h.values(r, c);
        row.push_back(std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v));
      }
      rows.push_back(row);
    }
    return rows;
  };
  nlohmann::json scores = nlohmann::json::object();
  for (std::size_t j = 0; j < s.features.size(); ++j) scores[s.features[j]] = s.feature_scores[j];
  return {
    {"features", s.features},
    {"test_rows", s.test_rows},
    {"directed", matrix(s.directed)},
    {"symmetric", matrix(s.symmetric)},
    {"feature_scores", scores},
    {"warnings", s.warnings},
  };
}

std::vector<EmbeddingPoint> export_embedding_points(InceModel & model, const PreparedDataset & data)
{
  if (model.config().latent != 2) {
    throw ContractError(
      "embedding export needs latent size l=2 (model has l=" + std::to_string(model.config().latent) +
      "); retrain with --l 2");
  }
  require_interaction(model, "embedding export");
  model.check_compatible(data);
  const FeatureGraph & graph = model.interaction().graph();
  const std::size_t m = graph.num_features;
  const std::size_t e = graph.num_edges();
  std::vector<std::string> names;
  for (const auto & n : data.stats.numerical) names.push_back(n.name);
  for (const auto & c : data.stats.categorical) names.push_back(c.name);

  std::vector<EmbeddingPoint> columnar;
  std::vector<EmbeddingPoint> contextual;
  std::vector<std::size_t> rows;
  const std::size_t chunk = 256;
  for (std::size_t start = 0; start < data.rows; start += chunk) {
    const std::size_t end = std::min(data.rows, start + chunk);
    rows.resize(end - start);
    std::iota(rows.begin(), rows.end(), start);
    Graph g(false);
    ModelOutput o = model.forward(g, make_batch(data, rows));
    const auto messages = g.value(o.encoder.messages).matrix();
    for (std::size_t b = 0; b < rows.size(); ++b) {
      const std::size_t r = start + b;
      for (std::size_t j = 0; j < m; ++j) {
        EmbeddingPoint p;
        p.row = r;
        p.feature = j;
        p.name = names[j];
        p.value = feature_value_label(data, r, j);
        const auto col = g.value(o.columnar[j]).matrix().row(static_cast<Eigen::Index>(b));
        p.kind = "columnar";
        p.x = col(0);
        p.y = col(1);
        columnar.push_back(p);
        const auto msg = messages.row(static_cast<Eigen::Index>(b * e + graph.edge_index(j, graph.cls())));
        p.kind = "contextual";
        p.x = msg(0);
        p.y = msg(1);
        contextual.push_back(p);
      }
    }
  }
  columnar.insert(columnar.end(), contextual.begin(), contextual.end());
  return columnar;
}

void write_embedding_csv(std::ostream & out, const std::vector<EmbeddingPoint> & points)
{
  out << "kind,row,feature,value,x,y\n";
  for (const auto & p : points) {
    out << p.kind << "," << p.row << "," << csv_field(p.name) << "," << csv_field(p.value) << ","
        << format_full(p.x) << "," << format_full(p.y) << "\n";
  }
}

}  // namespace ince
