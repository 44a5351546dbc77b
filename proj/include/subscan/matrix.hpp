#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace subscan {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transposed() const;
  Matrix select_rows(std::span<const std::size_t> rows) const;
  Matrix select(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Per-sample (row) by per-node (column) activations of one layer, or raw
/// pixels when scanning in input space.
class ActivationMatrix {
 public:
  /// Throws ValidationError on empty shape, non-finite entries or a
  /// sample_ids list whose length differs from the row count.
  ActivationMatrix(Matrix values, std::string layer_id = {},
                   std::vector<std::string> sample_ids = {});

  const Matrix& values() const noexcept { return values_; }
  const std::string& layer_id() const noexcept { return layer_id_; }
  const std::vector<std::string>& sample_ids() const noexcept { return sample_ids_; }
  std::size_t num_samples() const noexcept { return values_.rows(); }
  std::size_t num_nodes() const noexcept { return values_.cols(); }

  ActivationMatrix select_rows(std::span<const std::size_t> rows) const;

 private:
  Matrix values_;
  std::string layer_id_;
  std::vector<std::string> sample_ids_;
};

/// Empirical p-values against a background of `background_size` rows.
/// Every entry is k / (background_size + 1) for some k in 1..background_size+1.
class PValueMatrix {
 public:
  /// Validates the lattice invariant. Entries within 1e-6 of a lattice point
  /// are snapped onto it (values that went through binary32 storage land
  /// within ~6e-8 relative); anything else throws ValidationError.
  PValueMatrix(Matrix values, std::size_t background_size, std::string layer_id = {},
               std::vector<std::string> sample_ids = {});

  /// Builds directly from lattice numerators k (1 ≤ k ≤ background_size+1).
  static PValueMatrix from_ranks(std::size_t rows, std::size_t cols,
                                 std::span<const std::size_t> ranks,
                                 std::size_t background_size);

  const Matrix& values() const noexcept { return values_; }
  double operator()(std::size_t r, std::size_t c) const { return values_(r, c); }
  std::size_t rows() const noexcept { return values_.rows(); }
  std::size_t cols() const noexcept { return values_.cols(); }
  std::size_t background_size() const noexcept { return background_size_; }
  const std::string& layer_id() const noexcept { return layer_id_; }
  const std::vector<std::string>& sample_ids() const noexcept { return sample_ids_; }

  PValueMatrix select_rows(std::span<const std::size_t> rows) const;
  PValueMatrix transposed() const;

 private:
  PValueMatrix() = default;

  Matrix values_;
  std::size_t background_size_ = 0;
  std::string layer_id_;
  std::vector<std::string> sample_ids_;
};

}  // namespace subscan
