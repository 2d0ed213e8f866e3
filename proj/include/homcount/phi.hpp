// Copyright 2026 The homcount Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "homcount/errors.hpp"
#include "homcount/graph.hpp"

namespace homcount {

/// Vertex encoding phi: R^p -> R used to weight each mapped vertex.
/// Outputs are clamped into [0, DBL_MAX] so every weight is a finite,
/// non-negative number.
class Phi {
 public:
  enum class Kind { constant_one, coordinate, affine };

  static Phi constant_one() { return Phi(Kind::constant_one); }

  static Phi coordinate(std::size_t index) {
    Phi p(Kind::coordinate);
    p.index_ = index;
    return p;
  }

  static Phi affine(std::vector<double> w, double b) {
    Phi p(Kind::affine);
    p.w_ = std::move(w);
    p.b_ = b;
    return p;
  }

  Kind kind() const noexcept { return kind_; }
  std::size_t index() const noexcept { return index_; }

  /// Raises unless the encoding can be applied to p-dimensional features.
  void check_dim(std::size_t p) const {
    if (kind_ == Kind::coordinate && index_ >= p) {
      throw IndexError("phi coordinate " + std::to_string(index_) + " outside feature dimension " +
                       std::to_string(p));
    }
    if (kind_ == Kind::affine && w_.size() != p) {
      throw DimensionError("affine phi has " + std::to_string(w_.size()) + " weights for dimension " +
                           std::to_string(p));
    }
  }

  double operator()(std::span<const double> x) const {
    double v = 1.0;
    switch (kind_) {
      case Kind::constant_one: return 1.0;
      case Kind::coordinate: v = x[index_]; break;
      case Kind::affine:
        v = b_;
        for (std::size_t i = 0; i < w_.size(); ++i) v += w_[i] * x[i];
        break;
    }
    if (std::isnan(v) || v < 0.0) return 0.0;
    return std::min(v, std::numeric_limits<double>::max());
  }

  /// Stable identifier used in column names: "one", "x3", "affine".
  std::string id() const {
    switch (kind_) {
      case Kind::constant_one: return "one";
      case Kind::coordinate: return "x" + std::to_string(index_);
      case Kind::affine: return "affine";
    }
    return "?";
  }

  friend bool operator==(const Phi&, const Phi&) = default;

 private:
  explicit Phi(Kind k) : kind_(k) {}

  Kind kind_;
  std::size_t index_ = 0;
  std::vector<double> w_;
  double b_ = 0.0;
};

/// phi(x(v)) for every vertex of `fg`.
inline std::vector<double> vertex_weights(const FeaturedGraph& fg, const Phi& phi) {
  phi.check_dim(fg.dim());
  const auto n = fg.graph().num_vertices();
  std::vector<double> w(n);
  for (std::size_t v = 0; v < n; ++v) w[v] = phi(fg.features().row(v));
  return w;
}

}  // namespace homcount
