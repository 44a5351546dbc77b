#include "subscan/matrix.hpp"

#include <cmath>
#include <string>

#include "subscan/errors.hpp"

namespace subscan {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("matrix of " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " given " + std::to_string(data_.size()) + " values");
  }
}

Matrix Matrix::transposed() const {
  Matrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= rows_) throw DimensionError("row index out of range");
    const auto src = row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Matrix Matrix::select(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= rows_) throw DimensionError("row index out of range");
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j] >= cols_) throw DimensionError("column index out of range");
      out(i, j) = (*this)(rows[i], cols[j]);
    }
  }
  return out;
}

namespace {

void check_shape(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw ValidationError(std::string(what) + " must have at least one row and one column (got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ")");
  }
}

void check_ids(const std::vector<std::string>& ids, std::size_t rows) {
  if (!ids.empty() && ids.size() != rows) {
    throw ValidationError("sample_ids has " + std::to_string(ids.size()) + " entries for " +
                          std::to_string(rows) + " rows");
  }
}

template <typename T>
std::vector<T> pick(const std::vector<T>& items, std::span<const std::size_t> idx) {
  if (items.empty()) return {};
  std::vector<T> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(items.at(i));
  return out;
}

}  // namespace

ActivationMatrix::ActivationMatrix(Matrix values, std::string layer_id,
                                   std::vector<std::string> sample_ids)
    : values_(std::move(values)), layer_id_(std::move(layer_id)), sample_ids_(std::move(sample_ids)) {
  check_shape(values_, "activation matrix");
  check_ids(sample_ids_, values_.rows());
  for (std::size_t r = 0; r < values_.rows(); ++r) {
    for (std::size_t c = 0; c < values_.cols(); ++c) {
      if (!std::isfinite(values_(r, c))) {
        throw ValidationError("non-finite activation at row " + std::to_string(r) + ", column " +
                              std::to_string(c));
      }
    }
  }
}

ActivationMatrix ActivationMatrix::select_rows(std::span<const std::size_t> rows) const {
  return ActivationMatrix(values_.select_rows(rows), layer_id_, pick(sample_ids_, rows));
}

PValueMatrix::PValueMatrix(Matrix values, std::size_t background_size, std::string layer_id,
                           std::vector<std::string> sample_ids)
    : values_(std::move(values)),
      background_size_(background_size),
      layer_id_(std::move(layer_id)),
      sample_ids_(std::move(sample_ids)) {
  check_shape(values_, "p-value matrix");
  check_ids(sample_ids_, values_.rows());
  if (background_size_ == 0) throw ValidationError("background_size must be positive");
  const double denom = static_cast<double>(background_size_) + 1.0;
  for (std::size_t r = 0; r < values_.rows(); ++r) {
    for (std::size_t c = 0; c < values_.cols(); ++c) {
      const double p = values_(r, c);
      if (!std::isfinite(p)) {
        throw ValidationError("non-finite p-value at row " + std::to_string(r) + ", column " +
                              std::to_string(c));
      }
      const double k = std::round(p * denom);
      if (k < 1.0 || k > denom || std::abs(p * denom - k) > 1e-6 * denom) {
        throw ValidationError("p-value " + std::to_string(p) + " at row " + std::to_string(r) +
                              ", column " + std::to_string(c) + " is not a multiple of 1/" +
                              std::to_string(background_size_ + 1) + " in (0, 1]");
      }
      values_(r, c) = k / denom;
    }
  }
}

PValueMatrix PValueMatrix::from_ranks(std::size_t rows, std::size_t cols,
                                      std::span<const std::size_t> ranks,
                                      std::size_t background_size) {
  if (ranks.size() != rows * cols) throw DimensionError("rank count does not match shape");
  if (background_size == 0) throw ValidationError("background_size must be positive");
  Matrix m(rows, cols);
  check_shape(m, "p-value matrix");
  const double denom = static_cast<double>(background_size) + 1.0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] < 1 || ranks[i] > background_size + 1) {
      throw ValidationError("p-value rank " + std::to_string(ranks[i]) + " outside 1.." +
                            std::to_string(background_size + 1));
    }
    m(i / cols, i % cols) = static_cast<double>(ranks[i]) / denom;
  }
  PValueMatrix out;
  out.values_ = std::move(m);
  out.background_size_ = background_size;
  return out;
}

PValueMatrix PValueMatrix::select_rows(std::span<const std::size_t> rows) const {
  PValueMatrix out;
  out.values_ = values_.select_rows(rows);
  out.background_size_ = background_size_;
  out.layer_id_ = layer_id_;
  out.sample_ids_ = pick(sample_ids_, rows);
  return out;
}

PValueMatrix PValueMatrix::transposed() const {
  PValueMatrix out;
  out.values_ = values_.transposed();
  out.background_size_ = background_size_;
  out.layer_id_ = layer_id_;
  return out;
}

}  // namespace subscan
