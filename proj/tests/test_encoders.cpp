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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ince/batch.hpp"
#include "ince/columnar.hpp"
#include "ince/errors.hpp"
#include "ince/gradcheck.hpp"
#include "ince/interaction_network.hpp"
#include "ince/transformer.hpp"
#include "test_util.hpp"

using namespace ince;
using ince::testing::random_tensor;

namespace
{

Var weighted_sum(Graph & g, Var v, const Tensor & w)
{
  const std::size_t n = g.value(v).size();
  Var flat = g.reshape(v, {1, n});
  Var wv = g.constant(Tensor({n, 1}, std::vector<double>(w.data().begin(), w.data().end())));
  return g.sum(g.matmul(flat, wv));
}

void fill_params(std::vector<Parameter *> params, Rng & rng, double lo = -0.5, double hi = 0.5)
{
  for (auto * p : params) p->value = random_tensor(p->value.shape(), rng, lo, hi);
}

void expect_fd(const LossBuilder & build, std::vector<Parameter *> params)
{
  const auto report = finite_diff_check(build, params, 1e-5, 1e-4);
  for (const auto & e : report.entries) EXPECT_TRUE(e.pass) << e.name << " rel error " << e.max_rel_error;
  EXPECT_TRUE(report.pass);
}

Batch make_raw_batch(std::size_t rows, std::size_t num_numerical, const std::vector<std::size_t> & card, Rng & rng)
{
  Batch b;
  b.size = rows;
  b.num_numerical = num_numerical;
  b.num_categorical = card.size();
  std::normal_distribution<double> normal;
  for (std::size_t i = 0; i < rows * num_numerical; ++i) b.numerical.push_back(normal(rng));
  for (std::size_t r = 0; r < rows; ++r) {
    for (auto c : card) b.categorical.push_back(static_cast<int>(rng() % c));
  }
  return b;
}

// Rows of the (B*(M+1)) x l node matrix belonging to batch element b.
RowMatrix element_nodes(const Tensor & nodes, std::size_t b, std::size_t m)
{
  return nodes.matrix().block(static_cast<Eigen::Index>(b * (m + 1)), 0, static_cast<Eigen::Index>(m + 1),
    static_cast<Eigen::Index>(nodes.cols()));
}

// ------------------------------------------------------------------------
// Columnar embedder

TEST(Columnar, NumericalIsReluOfAffine)
{
  ColumnarEmbedder emb(1, {}, 2);
  emb.numerical_weight(0).value = Tensor({1, 2}, {1.0, 1.0});
  emb.numerical_bias(0).value = Tensor({2}, {0.0, 0.0});
  const double x = 2.0;
  auto out = emb.embed_row(std::span<const double>(&x, 1), {});
  EXPECT_DOUBLE_EQ(out(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(out(0, 1), 2.0);

  emb.numerical_bias(0).value = Tensor({2}, {-1.0, 0.5});
  const double zero = 0.0;
  out = emb.embed_row(std::span<const double>(&zero, 1), {});
  EXPECT_DOUBLE_EQ(out(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(out(0, 1), 0.5);
}

TEST(Columnar, CategoricalIsTableLookupWithoutRelu)
{
  ColumnarEmbedder emb(0, {3}, 2);
  emb.categorical_table(0).value = Tensor({3, 2}, {0.0, 0.0, -1.0, 2.0, 3.0, -4.0});
  emb.categorical_bias(0).value = Tensor({2}, {0.5, 0.0});
  const int code = 1;
  auto out = emb.embed_row({}, std::span<const int>(&code, 1));
  EXPECT_DOUBLE_EQ(out(0, 0), -0.5);
  EXPECT_DOUBLE_EQ(out(0, 1), 2.0);
}

TEST(Columnar, EachFeatureDependsOnlyOnItsOwnValue)
{
  Rng rng(3);
  ColumnarEmbedder emb(2, {4, 3}, 5);
  emb.init(rng);
  std::vector<double> num{0.3, -1.2};
  std::vector<int> cat{2, 1};
  const auto base = emb.embed_row(num, cat);
  num[1] = 4.0;
  cat[0] = 3;
  const auto changed = emb.embed_row(num, cat);
  EXPECT_EQ(base.row(0), changed.row(0));
  EXPECT_NE(base.row(1), changed.row(1));
  EXPECT_NE(base.row(2), changed.row(2));
  EXPECT_EQ(base.row(3), changed.row(3));
}

TEST(Columnar, BatchMatchesSingleRows)
{
  Rng rng(5);
  ColumnarEmbedder emb(2, {4, 3}, 3);
  emb.init(rng);
  const auto batch = make_raw_batch(6, 2, {4, 3}, rng);
  Graph g;
  Var v = emb.forward(g, batch);
  const auto & out = g.value(v);
  ASSERT_EQ(out.shape(), (Shape{6, 4, 3}));
  for (std::size_t r = 0; r < batch.size; ++r) {
    const auto single = emb.embed_row(
      std::span<const double>(batch.numerical).subspan(r * 2, 2), std::span<const int>(batch.categorical).subspan(r * 2, 2));
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(out.at(r * 4 + j, c), single(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c)));
    }
  }
}

TEST(Columnar, OutOfRangeCodeIsRejected)
{
  Rng rng(1);
  ColumnarEmbedder emb(0, {3}, 2);
  emb.init(rng);
  const int code = 3;
  EXPECT_THROW(emb.embed_row({}, std::span<const int>(&code, 1)), ContractError);
}

TEST(Columnar, GradientMatchesFiniteDifferences)
{
  Rng rng(9);
  ColumnarEmbedder emb(2, {3, 4}, 4);
  emb.init(rng);
  auto batch = make_raw_batch(3, 2, {3, 4}, rng);
  const Tensor w = random_tensor({3 * 4 * 4}, rng, -1.0, 1.0);
  std::vector<Parameter *> params;
  emb.collect(params);
  expect_fd([&](Graph & g) { return weighted_sum(g, emb.forward(g, batch), w); }, params);
}

// ------------------------------------------------------------------------
// Feature graph

TEST(FeatureGraph, CompleteDirectedGraphWithCls)
{
  const auto g3 = build_graph(3);
  EXPECT_EQ(g3.num_nodes(), 4u);
  EXPECT_EQ(g3.num_edges(), 12u);
  EXPECT_EQ(g3.cls(), 3u);
  EXPECT_EQ(build_graph(1).num_edges(), 2u);
  EXPECT_EQ(build_graph(8).num_edges(), 72u);
  EXPECT_THROW(build_graph(0), ContractError);

  for (std::size_t k = 0; k < g3.num_edges(); ++k) {
    const auto [s, d] = g3.edges[k];
    EXPECT_NE(s, d);
    EXPECT_EQ(g3.edge_index(s, d), k);
  }
  EXPECT_THROW(g3.edge_index(1, 1), ContractError);
  // Both directions to and from CLS are present.
  EXPECT_NO_THROW(g3.edge_index(0, 3));
  EXPECT_NO_THROW(g3.edge_index(3, 0));
}

// ------------------------------------------------------------------------
// Interaction network

struct InFixture
{
  std::size_t m, l, b;
  InteractionEncoder enc;
  Parameter cls;
  Tensor columnar;

  InFixture(std::size_t m_, std::size_t l_, std::size_t d, std::size_t n, std::size_t b_, std::uint64_t seed)
  : m(m_), l(l_), b(b_), enc(m_, l_, d, n)
  {
    Rng rng(seed);
    std::vector<Parameter *> ps;
    enc.collect(ps);
    fill_params(ps, rng);
    cls = Parameter("cls", random_tensor({1, l}, rng, -1.0, 1.0));
    columnar = random_tensor({b * m, l}, rng, -1.0, 1.0);
  }

  EncoderOutput run(Graph & g, const Tensor & input)
  {
    return enc.forward(g, g.constant(input), g.param(cls), b);
  }
};

TEST(InteractionNetwork, ZeroWeightsAreIdentity)
{
  InFixture f(3, 4, 2, 2, 2, 1);
  std::vector<Parameter *> ps;
  f.enc.collect(ps);
  zero_parameters(ps);
  Graph g;
  auto out = f.run(g, f.columnar);
  const auto & nodes = g.value(out.nodes);
  for (std::size_t k = 0; k < f.b; ++k) {
    for (std::size_t j = 0; j < f.m; ++j) {
      for (std::size_t c = 0; c < f.l; ++c) EXPECT_EQ(nodes.at(k * 4 + j, c), f.columnar.at(k * f.m + j, c));
    }
    for (std::size_t c = 0; c < f.l; ++c) EXPECT_EQ(nodes.at(k * 4 + 3, c), f.cls.value[c]);
  }
  for (double e : g.value(out.edges).data()) EXPECT_EQ(e, 0.0);
}

TEST(InteractionNetwork, PermutingFeaturesPermutesNodesAndKeepsCls)
{
  InFixture f(5, 4, 2, 2, 2, 7);
  std::vector<std::size_t> perm{3, 0, 4, 1, 2};
  Tensor permuted(f.columnar.shape());
  for (std::size_t k = 0; k < f.b; ++k) {
    for (std::size_t j = 0; j < f.m; ++j) {
      for (std::size_t c = 0; c < f.l; ++c) permuted.at(k * f.m + j, c) = f.columnar.at(k * f.m + perm[j], c);
    }
  }
  Graph g;
  const auto a = f.run(g, f.columnar);
  const auto p = f.run(g, permuted);
  for (std::size_t k = 0; k < f.b; ++k) {
    const RowMatrix na = element_nodes(g.value(a.nodes), k, f.m);
    const RowMatrix np = element_nodes(g.value(p.nodes), k, f.m);
    for (std::size_t j = 0; j < f.m; ++j) {
      EXPECT_LT((np.row(static_cast<Eigen::Index>(j)) - na.row(static_cast<Eigen::Index>(perm[j]))).cwiseAbs().maxCoeff(), 1e-9);
    }
    EXPECT_LT((np.row(5) - na.row(5)).cwiseAbs().maxCoeff(), 1e-9);
  }
  const RowMatrix diff = g.value(a.cls).matrix() - g.value(p.cls).matrix();
  EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(InteractionNetwork, MessagesAreSummedNotAveraged)
{
  // d = 1: each MLP is a single affine map. Edge MLP emits a constant c,
  // node MLP copies the aggregate, so every node moves by (#incoming) * c.
  const std::size_t m = 4, l = 2;
  InteractionEncoder enc(m, l, 1, 1);
  auto & layer = enc.layers()[0];
  std::vector<Parameter *> ps;
  enc.collect(ps);
  zero_parameters(ps);
  layer.edge_mlp().layers()[0].bias.value = Tensor({l}, {0.25, -0.5});
  auto & w = layer.node_mlp().layers()[0].weight.value;
  for (std::size_t c = 0; c < l; ++c) w.at(l + c, c) = 1.0;

  Graph g;
  Parameter cls("cls", Tensor({1, l}, 0.0));
  Tensor input({m, l}, 0.0);
  auto out = enc.forward(g, g.constant(input), g.param(cls), 1);
  const auto & nodes = g.value(out.nodes);
  for (std::size_t j = 0; j <= m; ++j) {
    EXPECT_DOUBLE_EQ(nodes.at(j, 0), 0.25 * static_cast<double>(m));
    EXPECT_DOUBLE_EQ(nodes.at(j, 1), -0.5 * static_cast<double>(m));
  }
}

// Straightforward per-edge evaluation used as an independent reference.
RowMatrix mlp_apply(const Mlp & mlp, const Eigen::RowVectorXd & x)
{
  Eigen::RowVectorXd h = x;
  const auto & layers = mlp.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (i > 0) h = h.cwiseMax(0.0);
    const auto & W = layers[i].weight.value;
    const auto & bias = layers[i].bias.value;
    Eigen::RowVectorXd next = h * W.matrix();
    for (Eigen::Index c = 0; c < next.size(); ++c) next(c) += bias[static_cast<std::size_t>(c)];
    h = next;
  }
  return h;
}

TEST(InteractionNetwork, MatchesNaiveConcatenationReference)
{
  InFixture f(3, 3, 2, 2, 2, 11);
  Graph g;
  const auto out = f.run(g, f.columnar);
  const auto graph = build_graph(f.m);
  const auto n = graph.num_nodes();
  const auto l = static_cast<Eigen::Index>(f.l);

  for (std::size_t k = 0; k < f.b; ++k) {
    RowMatrix v(n, l);
    for (std::size_t j = 0; j < f.m; ++j) {
      for (std::size_t c = 0; c < f.l; ++c) v(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c)) = f.columnar.at(k * f.m + j, c);
    }
    for (std::size_t c = 0; c < f.l; ++c) v(static_cast<Eigen::Index>(f.m), static_cast<Eigen::Index>(c)) = f.cls.value[c];
    RowMatrix e = RowMatrix::Zero(static_cast<Eigen::Index>(graph.num_edges()), l);

    for (const auto & layer : f.enc.layers()) {
      RowMatrix agg = RowMatrix::Zero(static_cast<Eigen::Index>(n), l);
      RowMatrix msg(static_cast<Eigen::Index>(graph.num_edges()), l);
      for (std::size_t q = 0; q < graph.num_edges(); ++q) {
        const auto [s, d] = graph.edges[q];
        Eigen::RowVectorXd in(layer.first() ? 2 * l : 3 * l);
        in << v.row(static_cast<Eigen::Index>(s)), v.row(static_cast<Eigen::Index>(d));
        if (!layer.first()) in.tail(l) = e.row(static_cast<Eigen::Index>(q));
        msg.row(static_cast<Eigen::Index>(q)) = mlp_apply(layer.edge_mlp(), in);
        agg.row(static_cast<Eigen::Index>(d)) += msg.row(static_cast<Eigen::Index>(q));
      }
      RowMatrix next = v;
      for (std::size_t j = 0; j < n; ++j) {
        Eigen::RowVectorXd in(2 * l);
        in << v.row(static_cast<Eigen::Index>(j)), agg.row(static_cast<Eigen::Index>(j));
        next.row(static_cast<Eigen::Index>(j)) += mlp_apply(layer.node_mlp(), in);
      }
      v = next;
      e = layer.first() ? msg : RowMatrix(e + msg);
    }

    const RowMatrix got = element_nodes(g.value(out.nodes), k, f.m);
    EXPECT_LT((got - v).cwiseAbs().maxCoeff(), 1e-12);
    const auto & edges = g.value(out.edges);
    for (std::size_t q = 0; q < graph.num_edges(); ++q) {
      for (std::size_t c = 0; c < f.l; ++c) {
        EXPECT_NEAR(edges.at(k * graph.num_edges() + q, c), e(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(c)), 1e-12);
      }
    }
  }
}

TEST(InteractionNetwork, SingleFeatureAggregatesOneMessage)
{
  InFixture f(1, 3, 1, 1, 1, 13);
  Graph g;
  const auto out = f.run(g, f.columnar);
  EXPECT_EQ(g.value(out.edges).rows(), 2u);
  EXPECT_EQ(g.value(out.nodes).rows(), 2u);
  for (double x : g.value(out.nodes).data()) EXPECT_TRUE(std::isfinite(x));
}

TEST(InteractionNetwork, GradientMatchesFiniteDifferences)
{
  InFixture f(3, 4, 2, 2, 2, 17);
  std::vector<Parameter *> ps;
  f.enc.collect(ps);
  ps.push_back(&f.cls);
  Rng rng(18);
  const Tensor wn = random_tensor({f.b * 4 * f.l}, rng, -1.0, 1.0);
  const Tensor we = random_tensor({f.b * 12 * f.l}, rng, -1.0, 1.0);
  expect_fd(
    [&](Graph & g) {
      auto out = f.run(g, f.columnar);
      Var a = weighted_sum(g, out.nodes, wn);
      Var b = weighted_sum(g, out.edges, we);
      std::array<Var, 2> parts{a, b};
      return g.sum(g.concat_cols(parts));
    },
    ps);
}

TEST(InteractionNetwork, NodeOutputsDependOnOtherFeatures)
{
  InFixture f(4, 3, 2, 2, 1, 19);
  for (std::size_t target = 0; target < f.m; ++target) {
    Graph g;
    Var input = g.variable(f.columnar);
    auto out = f.enc.forward(g, input, g.param(f.cls), 1);
    Tensor w({(f.m + 1) * f.l}, 0.0);
    for (std::size_t c = 0; c < f.l; ++c) w[target * f.l + c] = 1.0;
    g.backward(weighted_sum(g, out.nodes, w));
    const auto & grad = g.grad(input);
    for (std::size_t j = 0; j < f.m; ++j) {
      double norm = 0.0;
      for (std::size_t c = 0; c < f.l; ++c) norm += std::abs(grad.at(j, c));
      EXPECT_GT(norm, 1e-8) << "node " << target << " ignores feature " << j;
    }
  }
}

TEST(InteractionNetwork, RejectsMismatchedInput)
{
  InFixture f(3, 4, 1, 1, 2, 23);
  Graph g;
  EXPECT_THROW(f.run(g, Tensor({5, 4}, 0.0)), ContractError);
}

// ------------------------------------------------------------------------
// Transformer

TEST(Transformer, HandComputedSingleLayer)
{
  TransformerLayer layer("t", 1, 1, 1);
  std::vector<Parameter *> ps;
  layer.collect(ps);
  zero_parameters(ps);
  layer.query(0).weight.value[0] = 1.0;
  layer.key(0).weight.value[0] = 1.0;
  layer.value(0).weight.value[0] = 1.0;
  layer.output().weight.value[0] = 1.0;

  Graph g;
  Var x = g.constant(Tensor({2, 1}, {0.0, 1.0}));
  Var y = layer.forward(g, x, 1);
  const double e = std::exp(1.0);
  EXPECT_NEAR(g.value(y)[0], 0.5, 1e-15);
  EXPECT_NEAR(g.value(y)[1], 1.0 + e / (1.0 + e), 1e-15);
  EXPECT_NEAR(g.value(y)[1], 1.7310585786, 1e-10);
}

TEST(Transformer, ZeroScoresGiveUniformAttention)
{
  Rng rng(29);
  TransformerLayer layer("t", 3, 1, 4);
  std::vector<Parameter *> ps;
  layer.collect(ps);
  fill_params(ps, rng);
  layer.query(0).weight.value.fill(0.0);
  layer.query(0).bias.value.fill(0.0);
  Graph g;
  std::vector<Var> att;
  layer.forward(g, g.constant(random_tensor({2 * 5, 3}, rng, -1.0, 1.0)), 2, &att);
  ASSERT_EQ(att.size(), 1u);
  for (double a : g.value(att[0]).data()) EXPECT_NEAR(a, 0.2, 1e-15);
}

TEST(Transformer, AttentionRowsSumToOne)
{
  Rng rng(31);
  TransformerEncoder enc(4, 4, 2, 8, 2);
  enc.init(rng);
  Parameter cls("cls", random_tensor({1, 4}, rng, -1.0, 1.0));
  Graph g;
  std::vector<std::vector<Var>> att;
  enc.forward(g, g.constant(random_tensor({3 * 4, 4}, rng, -2.0, 2.0)), g.param(cls), 3, &att);
  ASSERT_EQ(att.size(), 2u);
  for (const auto & layer : att) {
    ASSERT_EQ(layer.size(), 2u);
    for (Var w : layer) {
      const auto m = g.value(w).matrix();
      EXPECT_EQ(m.rows(), 15);
      EXPECT_EQ(m.cols(), 5);
      for (Eigen::Index r = 0; r < m.rows(); ++r) EXPECT_NEAR(m.row(r).sum(), 1.0, 1e-12);
    }
  }
}

TEST(Transformer, ZeroWeightsAreIdentity)
{
  TransformerEncoder enc(3, 4, 2, 8, 2);
  std::vector<Parameter *> ps;
  enc.collect(ps);
  zero_parameters(ps);
  Rng rng(37);
  Parameter cls("cls", random_tensor({1, 4}, rng, -1.0, 1.0));
  const Tensor input = random_tensor({2 * 3, 4}, rng, -1.0, 1.0);
  Graph g;
  auto out = enc.forward(g, g.constant(input), g.param(cls), 2);
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t j = 0; j < 3; ++j) {
      for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(g.value(out.nodes).at(k * 4 + j, c), input.at(k * 3 + j, c));
    }
    for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(g.value(out.cls).at(k, c), cls.value[c]);
  }
  EXPECT_FALSE(out.edges.valid());
}

TEST(Transformer, ClsIsInvariantToFeatureOrder)
{
  Rng rng(41);
  TransformerEncoder enc(4, 4, 2, 8, 2);
  enc.init(rng);
  Parameter cls("cls", random_tensor({1, 4}, rng, -1.0, 1.0));
  const Tensor input = random_tensor({4, 4}, rng, -1.0, 1.0);
  const std::vector<std::size_t> perm{2, 3, 1, 0};
  Tensor permuted(input.shape());
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t c = 0; c < 4; ++c) permuted.at(j, c) = input.at(perm[j], c);
  }
  Graph g;
  auto a = enc.forward(g, g.constant(input), g.param(cls), 1);
  auto b = enc.forward(g, g.constant(permuted), g.param(cls), 1);
  for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(g.value(a.cls)[c], g.value(b.cls)[c], 1e-12);
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(g.value(b.nodes).at(j, c), g.value(a.nodes).at(perm[j], c), 1e-12);
  }
}

TEST(Transformer, GradientMatchesFiniteDifferences)
{
  Rng rng(43);
  TransformerEncoder enc(3, 4, 2, 6, 2);
  std::vector<Parameter *> ps;
  enc.collect(ps);
  fill_params(ps, rng);
  Parameter cls("cls", random_tensor({1, 4}, rng, -1.0, 1.0));
  ps.push_back(&cls);
  const Tensor input = random_tensor({2 * 3, 4}, rng, -1.0, 1.0);
  const Tensor w = random_tensor({2 * 4 * 4}, rng, -1.0, 1.0);
  expect_fd(
    [&](Graph & g) {
      auto out = enc.forward(g, g.constant(input), g.param(cls), 2);
      return weighted_sum(g, out.nodes, w);
    },
    ps);
}

}  // namespace
