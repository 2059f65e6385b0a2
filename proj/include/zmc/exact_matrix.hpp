#pragma once

#include <cstddef>
#include <vector>

#include "zmc/quadext.hpp"

namespace zmc {

/// Dense row-major matrix over Q(sqrt(d)).
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ExactMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  QuadExt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const QuadExt& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  ExactMatrix transpose() const;
  bool is_symmetric() const;
  /// Radicand shared by all entries (1 if all rational).
  std::uint64_t radicand() const;

  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b);
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<QuadExt> data_;
};

}  // namespace zmc
