#pragma once

#include <cassert>
#include <vector>

#include <Eigen/Core>

namespace glyphgrid {

// Dense row-major tensor of doubles: a shape plus a flat Eigen array, so
// elementwise work stays expression-friendly and matrix views are cheap
// Eigen::Maps over `data`.
struct Tensor {
  std::vector<int> shape;
  Eigen::ArrayXd data;

  static Eigen::Index numel(const std::vector<int>& shape) {
    Eigen::Index n = 1;
    for (int d : shape) n *= d;
    return n;
  }

  static Tensor zeros(std::vector<int> shape) {
    Tensor t;
    t.data = Eigen::ArrayXd::Zero(numel(shape));
    t.shape = std::move(shape);
    return t;
  }

  Eigen::Index size() const { return data.size(); }

  // Row-major element access; rank must match the index count.
  template <class... I>
  double& at(I... index) {
    return data[offset({static_cast<int>(index)...})];
  }
  template <class... I>
  double at(I... index) const {
    return data[offset({static_cast<int>(index)...})];
  }

  Eigen::Index offset(std::initializer_list<int> index) const {
    assert(index.size() == shape.size());
    Eigen::Index flat = 0;
    auto dim = shape.begin();
    for (int i : index) {
      assert(i >= 0 && i < *dim);
      flat = flat * *dim + i;
      ++dim;
    }
    return flat;
  }
};

}  // namespace glyphgrid
