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

#include "ince/tensor.hpp"

#include <cmath>
#include <numeric>

#include "ince/errors.hpp"

namespace ince
{

std::size_t shape_size(const Shape & shape)
{
  return std::accumulate(
    shape.begin(), shape.end(), std::size_t{1}, std::multiplies<std::size_t>());
}

std::string shape_string(const Shape & shape)
{
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(Shape shape, double fill)
: shape_(std::move(shape)), data_(shape_size(shape_), fill)
{
}

Tensor::Tensor(Shape shape, std::vector<double> data)
: shape_(std::move(shape)), data_(std::move(data))
{
  if (shape_size(shape_) != data_.size()) {
    throw ContractError(
      "tensor shape " + shape_string(shape_) + " does not match " +
      std::to_string(data_.size()) + " values");
  }
}

Tensor Tensor::from_matrix(const RowMatrix & m)
{
  Tensor t({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
  t.matrix() = m;
  return t;
}

std::size_t Tensor::cols() const
{
  return shape_.empty() ? 1 : shape_.back();
}

std::size_t Tensor::rows() const
{
  const std::size_t c = cols();
  return c == 0 ? 0 : data_.size() / c;
}

MatrixMap Tensor::matrix()
{
  return MatrixMap(data_.data(), static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(cols()));
}

ConstMatrixMap Tensor::matrix() const
{
  return ConstMatrixMap(
    data_.data(), static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(cols()));
}

Tensor Tensor::reshaped(Shape shape) const
{
  return Tensor(std::move(shape), data_);
}

void Tensor::fill(double v)
{
  std::fill(data_.begin(), data_.end(), v);
}

bool Tensor::all_finite() const
{
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace ince
