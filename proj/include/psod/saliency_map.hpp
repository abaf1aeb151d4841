/*
 * Copyright 2026 The psod-eval Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Dense saliency maps: a height x width grid of values in [0,1], row-major.

#ifndef PSOD_SALIENCY_MAP_HPP
#define PSOD_SALIENCY_MAP_HPP

#include <Eigen/Dense>
#include <string>
#include <utility>

#include "psod/error.hpp"

namespace psod {

template <typename Scalar>
using MaskArray =
    Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Validated wrapper over a row-major Eigen array. Values never leave [0,1]
/// and both dimensions are at least one pixel.
template <typename Scalar = double>
class BasicSaliencyMap {
 public:
  using Array = MaskArray<Scalar>;
  using Index = Eigen::Index;

  BasicSaliencyMap() : values_(Array::Zero(1, 1)) {}

  /// Takes any array expression; throws ValidationError on empty shape or
  /// out-of-range / non-finite values.
  template <typename Derived>
  explicit BasicSaliencyMap(const Eigen::DenseBase<Derived>& values)
      : values_(values) {
    if (values_.rows() < 1 || values_.cols() < 1) {
      throw ValidationError("saliency map must be at least 1x1");
    }
    // NaN fails both comparisons.
    if (!((values_ >= Scalar(0)) && (values_ <= Scalar(1))).all()) {
      throw ValidationError("saliency map values must lie in [0,1]");
    }
  }

  static BasicSaliencyMap Constant(Index height, Index width, Scalar value) {
    return BasicSaliencyMap(Array::Constant(height, width, value));
  }
  static BasicSaliencyMap Zero(Index height, Index width) {
    return Constant(height, width, Scalar(0));
  }

  Index width() const { return values_.cols(); }
  Index height() const { return values_.rows(); }
  Index size() const { return values_.size(); }

  const Array& array() const { return values_; }
  Scalar operator()(Index row, Index col) const { return values_(row, col); }

  /// Row-major pixel access.
  Scalar operator[](Index i) const { return values_.data()[i]; }

  bool same_shape(const BasicSaliencyMap& other) const {
    return width() == other.width() && height() == other.height();
  }

  bool is_binary() const {
    return ((values_ == Scalar(0)) || (values_ == Scalar(1))).all();
  }

  friend bool operator==(const BasicSaliencyMap& a, const BasicSaliencyMap& b) {
    return a.same_shape(b) && (a.values_ == b.values_).all();
  }

 private:
  Array values_;
};

using SaliencyMap = BasicSaliencyMap<double>;

template <typename Scalar>
void require_same_shape(const BasicSaliencyMap<Scalar>& a,
                        const BasicSaliencyMap<Scalar>& b) {
  if (!a.same_shape(b)) {
    throw DimensionMismatch(
        "mask shapes differ: " + std::to_string(a.width()) + "x" +
        std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
        std::to_string(b.height()));
  }
}

/// 1 where the input is strictly greater than `threshold`, else 0.
template <typename Scalar>
BasicSaliencyMap<Scalar> binarize(const BasicSaliencyMap<Scalar>& map,
                                  Scalar threshold) {
  return BasicSaliencyMap<Scalar>(
      (map.array() > threshold).template cast<Scalar>());
}

}  // namespace psod

#endif  // PSOD_SALIENCY_MAP_HPP
