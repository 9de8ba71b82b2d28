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

#include <cmath>
#include <random>

#include "ince/adam.hpp"
#include "ince/autodiff.hpp"
#include "ince/errors.hpp"
#include "ince/gradcheck.hpp"
#include "test_util.hpp"

using namespace ince;
using ince::testing::random_tensor;

namespace
{

// Every primitive goes through sum(op(...) * w) so non-scalar outputs reduce
// to a loss with non-uniform upstream gradients.
Var weighted_sum(Graph & g, Var v, const Tensor & w)
{
  // Tape growth invalidates references returned by value().
  const std::size_t n = g.value(v).size();
  Var flat = g.reshape(v, {1, n});
  Var wv = g.constant(Tensor({n, 1}, std::vector<double>(w.data().begin(), w.data().end())));
  return g.sum(g.matmul(flat, wv));
}

void expect_fd(const LossBuilder & build, std::vector<Parameter *> params)
{
  const auto report = finite_diff_check(build, params, 1e-5, 1e-4);
  for (const auto & e : report.entries) {
    EXPECT_TRUE(e.pass) << e.name << " rel error " << e.max_rel_error;
  }
  EXPECT_TRUE(report.pass);
  EXPECT_LT(report.max_rel_error, 1e-4);
}

class PrimitiveGradient : public ::testing::Test
{
protected:
  std::mt19937_64 rng{42};
};

}  // namespace

TEST(Autodiff, SumOfReluHasMaskedGradient)
{
  Parameter x("x", Tensor({2}, {-1.0, 2.0}));
  std::vector<Parameter *> params = {&x};
  const auto r = forward_backward([&](Graph & g) { return g.sum(g.relu(g.param(x))); }, params);
  EXPECT_DOUBLE_EQ(r.loss, 2.0);
  EXPECT_DOUBLE_EQ(r.gradients.at("x")[0], 0.0);
  EXPECT_DOUBLE_EQ(r.gradients.at("x")[1], 1.0);
}

TEST(Autodiff, ReluPropagatesNaN)
{
  Graph g(false);
  Var r = g.relu(g.constant(Tensor({3}, {std::nan(""), -1.0, 2.0})));
  EXPECT_TRUE(std::isnan(g.value(r)[0]));
  EXPECT_EQ(g.value(r)[1], 0.0);
  EXPECT_EQ(g.value(r)[2], 2.0);
}

TEST(Autodiff, SquareHasGradientSix)
{
  Parameter x("x", Tensor({1, 1}, {3.0}));
  std::vector<Parameter *> params = {&x};
  const auto r = forward_backward([&](Graph & g) {
    Var v = g.param(x);
    return g.sum(g.matmul(v, v));
  }, params);
  EXPECT_DOUBLE_EQ(r.loss, 9.0);
  EXPECT_DOUBLE_EQ(r.gradients.at("x")[0], 6.0);
}

TEST(Autodiff, FanOutAccumulates)
{
  Parameter x("x", Tensor({1}, {0.7}));
  std::vector<Parameter *> params = {&x};
  const auto r = forward_backward([&](Graph & g) {
    Var v = g.param(x);
    return g.sum(g.add(v, v));
  }, params);
  EXPECT_DOUBLE_EQ(r.gradients.at("x")[0], 2.0);
}

TEST(Autodiff, SoftmaxDotMatchesFiniteDifferences)
{
  Parameter x("x", Tensor({1, 2}, {0.0, 0.0}));
  std::vector<Parameter *> params = {&x};
  const LossBuilder build = [&](Graph & g) {
    Var s = g.softmax_rows(g.param(x));
    return g.sum(g.matmul(s, g.constant(Tensor({2, 1}, {1.0, 0.0}))));
  };
  const auto r = forward_backward(build, params);
  EXPECT_DOUBLE_EQ(r.loss, 0.5);
  // Independent oracle: central differences written out here.
  const double h = 1e-5;
  for (std::size_t i = 0; i < 2; ++i) {
    auto f = [&](double delta) {
      double a = (i == 0 ? delta : 0.0);
      double b = (i == 1 ? delta : 0.0);
      return std::exp(a) / (std::exp(a) + std::exp(b));
    };
    const double numeric = (f(h) - f(-h)) / (2 * h);
    EXPECT_NEAR(r.gradients.at("x")[i], numeric, 1e-6);
  }
  EXPECT_NEAR(r.gradients.at("x")[0], 0.25, 1e-12);
  EXPECT_NEAR(r.gradients.at("x")[1], -0.25, 1e-12);
}

TEST(Autodiff, NonScalarLossIsContractViolation)
{
  Graph g;
  Var v = g.variable(Tensor({2}, {1.0, 2.0}));
  EXPECT_THROW(g.backward(v), ContractError);
}

TEST(Autodiff, NonFiniteValueNamesTheOp)
{
  Graph g(true);
  Var v = g.variable(Tensor({1, 1}, {1e308}));
  try {
    g.scale(v, 1e10);
    FAIL() << "expected NumericError";
  } catch (const NumericError & e) {
    EXPECT_NE(std::string(e.what()).find("scale"), std::string::npos) << e.what();
  }
}

TEST(Autodiff, ForwardValuesUnchangedByBackward)
{
  std::mt19937_64 rng(1);
  Parameter w("w", random_tensor({3, 2}, rng));
  Graph g;
  Var x = g.constant(random_tensor({4, 3}, rng));
  Var y = g.matmul(x, g.param(w));
  const Tensor before = g.value(y);
  Var loss = g.sum(g.relu(y));
  g.backward(loss);
  EXPECT_EQ(before.data().size(), g.value(y).data().size());
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_EQ(before[i], g.value(y)[i]);
}

TEST(GradCheck, QuadraticIsExactToRounding)
{
  Parameter x("x", Tensor({1, 3}, {0.3, -1.2, 2.0}));
  std::vector<Parameter *> params = {&x};
  const auto report = finite_diff_check([&](Graph & g) {
    Var v = g.param(x);
    return g.sum(g.matmul(v, g.reshape(v, {3, 1})));
  }, params);
  EXPECT_LT(report.max_rel_error, 1e-8);
}

TEST(GradCheck, ReluKinkIsSkipped)
{
  Parameter x("x", Tensor({3}, {0.0, 1.0, -2.0}));
  std::vector<Parameter *> params = {&x};
  const auto report = finite_diff_check([&](Graph & g) { return g.sum(g.relu(g.param(x))); }, params);
  ASSERT_EQ(report.entries.size(), 1u);
  EXPECT_EQ(report.entries[0].skipped, 1u);
  EXPECT_EQ(report.entries[0].checked, 2u);
  EXPECT_TRUE(report.pass);
}

TEST(GradCheck, StepOutsideRangeIsRejected)
{
  Parameter x("x", Tensor({1}, {1.0}));
  std::vector<Parameter *> params = {&x};
  auto build = [&](Graph & g) { return g.sum(g.param(x)); };
  EXPECT_THROW(finite_diff_check(build, params, 0.0), ContractError);
  EXPECT_THROW(finite_diff_check(build, params, 0.1), ContractError);
}

TEST_F(PrimitiveGradient, MatMul)
{
  Parameter a("a", random_tensor({3, 4}, rng));
  Parameter b("b", random_tensor({4, 2}, rng));
  const Tensor w = random_tensor({3, 2}, rng);
  expect_fd([&](Graph & g) { return weighted_sum(g, g.matmul(g.param(a), g.param(b)), w); }, {&a, &b});
}

TEST_F(PrimitiveGradient, AddAndBias)
{
  Parameter a("a", random_tensor({3, 4}, rng));
  Parameter b("b", random_tensor({3, 4}, rng));
  Parameter bias("bias", random_tensor({4}, rng));
  const Tensor w = random_tensor({3, 4}, rng);
  expect_fd([&](Graph & g) {
    return weighted_sum(g, g.add_bias(g.add(g.param(a), g.param(b)), g.param(bias)), w);
  }, {&a, &b, &bias});
}

TEST_F(PrimitiveGradient, ScaleAndRelu)
{
  Parameter a("a", random_tensor({5, 3}, rng));
  const Tensor w = random_tensor({5, 3}, rng);
  expect_fd([&](Graph & g) { return weighted_sum(g, g.relu(g.scale(g.param(a), -1.7)), w); }, {&a});
}

TEST_F(PrimitiveGradient, ConcatColsAndRows)
{
  Parameter a("a", random_tensor({3, 2}, rng));
  Parameter b("b", random_tensor({3, 4}, rng));
  Parameter c("c", random_tensor({2, 6}, rng));
  const Tensor w = random_tensor({5, 6}, rng);
  expect_fd([&](Graph & g) {
    std::vector<Var> cols = {g.param(a), g.param(b)};
    std::vector<Var> rows = {g.concat_cols(cols), g.param(c)};
    return weighted_sum(g, g.concat_rows(rows), w);
  }, {&a, &b, &c});
}

TEST_F(PrimitiveGradient, GatherScatterSlice)
{
  Parameter a("a", random_tensor({4, 3}, rng));
  auto idx = std::make_shared<Index>(Index{2, 0, 2, 3, 1, 2});
  const Tensor w = random_tensor({3, 3}, rng);
  expect_fd([&](Graph & g) {
    Var gathered = g.gather_rows(g.param(a), idx);
    Var scattered = g.scatter_add_rows(gathered, std::make_shared<Index>(Index{0, 1, 1, 4, 0, 3}), 5);
    return weighted_sum(g, g.slice_rows(scattered, 1, 4), w);
  }, {&a});
}

TEST_F(PrimitiveGradient, InterleaveAndReshape)
{
  Parameter a("a", random_tensor({2, 3}, rng));
  Parameter b("b", random_tensor({2, 3}, rng));
  const Tensor w = random_tensor({3, 4}, rng);
  expect_fd([&](Graph & g) {
    std::vector<Var> parts = {g.param(a), g.param(b)};
    return weighted_sum(g, g.reshape(g.interleave_rows(parts), {3, 4}), w);
  }, {&a, &b});
}

TEST_F(PrimitiveGradient, SoftmaxRows)
{
  Parameter a("a", random_tensor({3, 5}, rng, -2.0, 2.0));
  const Tensor w = random_tensor({3, 5}, rng);
  expect_fd([&](Graph & g) { return weighted_sum(g, g.softmax_rows(g.param(a)), w); }, {&a});
}

TEST_F(PrimitiveGradient, MseLoss)
{
  Parameter a("a", random_tensor({6, 1}, rng));
  const Tensor target = random_tensor({6, 1}, rng);
  expect_fd([&](Graph & g) { return g.mse(g.param(a), target); }, {&a});
}

TEST_F(PrimitiveGradient, CrossEntropyLoss)
{
  Parameter a("a", random_tensor({5, 3}, rng, -2.0, 2.0));
  const std::vector<int> labels = {0, 2, 1, 1, 0};
  expect_fd([&](Graph & g) { return g.softmax_cross_entropy(g.param(a), labels); }, {&a});
}

TEST_F(PrimitiveGradient, BatchedMatMul)
{
  Parameter a("a", random_tensor({6, 4}, rng));
  Parameter b("b", random_tensor({6, 4}, rng));
  const Tensor w = random_tensor({6, 3}, rng);
  expect_fd([&](Graph & g) {
    return weighted_sum(g, g.batched_matmul(g.param(a), g.param(b), 2, true), w);
  }, {&a, &b});
  Parameter c("c", random_tensor({6, 3}, rng));
  Parameter d("d", random_tensor({6, 2}, rng));
  const Tensor w2 = random_tensor({6, 2}, rng);
  expect_fd([&](Graph & g) {
    return weighted_sum(g, g.batched_matmul(g.param(c), g.param(d), 2, false), w2);
  }, {&c, &d});
}

TEST(Adam, ZeroGradientLeavesParametersAndAdvancesStep)
{
  Parameter p("p", Tensor({2}, {1.0, -3.0}));
  std::vector<Parameter *> params = {&p};
  AdamState s;
  adam_step(params, s);
  EXPECT_EQ(s.t, 1);
  EXPECT_EQ(p.value[0], 1.0);
  EXPECT_EQ(p.value[1], -3.0);
  adam_step(params, s);
  EXPECT_EQ(s.t, 2);
}

TEST(Adam, FirstStepMatchesHandEvaluation)
{
  Parameter p("p", Tensor({1}, {1.0}));
  p.grad[0] = 0.5;
  std::vector<Parameter *> params = {&p};
  AdamState s;
  adam_step(params, s);
  // m_hat = 0.5, v_hat = 0.25 after bias correction.
  const double expected = 1.0 - 0.001 * 0.5 / (std::sqrt(0.25) + 1e-8);
  EXPECT_NEAR(p.value[0], expected, 1e-15);
  EXPECT_NEAR(p.value[0], 0.999, 1e-9);
}

TEST(Adam, IdenticalGradientsGiveIdenticalUpdates)
{
  Parameter a("a", Tensor({3}, {0.1, 0.2, 0.3}));
  Parameter b("b", Tensor({3}, {0.1, 0.2, 0.3}));
  std::vector<Parameter *> params = {&a, &b};
  AdamState s;
  for (int step = 0; step < 5; ++step) {
    for (auto * p : params) {
      p->grad = Tensor({3}, {0.3 * step, -1.0, 2.0});
    }
    adam_step(params, s);
  }
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a.value[i], b.value[i]);
}

TEST(Adam, ShapeMismatchIsContractViolation)
{
  Parameter p("p", Tensor({2}, {1.0, 2.0}));
  std::vector<Parameter *> params = {&p};
  AdamState s;
  adam_step(params, s);
  Parameter q("p", Tensor({3}, {1.0, 2.0, 3.0}));
  std::vector<Parameter *> other = {&q};
  EXPECT_THROW(adam_step(other, s), ContractError);
}
