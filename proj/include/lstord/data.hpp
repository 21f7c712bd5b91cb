#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lstord/error.hpp"

namespace lstord {

// n x p matrix of observations, rows are subjects. Row-major storage.
class DataSet {
 public:
  DataSet() = default;

  DataSet(std::size_t n, std::size_t p, std::vector<double> values)
      : n_(n), p_(p), values_(std::move(values)) {
    if (n_ < 1 || p_ < 1) throw input_error("DataSet: need at least one row and one column");
    if (values_.size() != n_ * p_) throw input_error("DataSet: value count does not match n*p");
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (!std::isfinite(values_[i]))
        throw input_error("DataSet: non-finite value at row " + std::to_string(i / p_) + ", column " +
                          std::to_string(i % p_));
  }

  static DataSet from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw input_error("DataSet: no rows");
    const std::size_t p = rows.front().size();
    std::vector<double> v;
    v.reserve(rows.size() * p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != p) throw input_error("DataSet: ragged row " + std::to_string(i));
      v.insert(v.end(), rows[i].begin(), rows[i].end());
    }
    return DataSet(rows.size(), p, std::move(v));
  }

  std::size_t rows() const noexcept { return n_; }
  std::size_t cols() const noexcept { return p_; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * p_, p_}; }
  double operator()(std::size_t i, std::size_t k) const { return values_[i * p_ + k]; }
  std::span<const double> values() const noexcept { return values_; }

  std::vector<double> column_means() const {
    std::vector<double> mu(p_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < p_; ++k) mu[k] += values_[i * p_ + k];
    for (double& v : mu) v /= static_cast<double>(n_);
    return mu;
  }

  // Sum of squared deviations from the column means (p x p).
  Eigen::MatrixXd scatter() const {
    const auto mu = column_means();
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(p_, p_);
    Eigen::VectorXd d(p_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = 0; k < p_; ++k) d[k] = values_[i * p_ + k] - mu[k];
      s.noalias() += d * d.transpose();
    }
    return s;
  }

  bool all_rows_identical() const {
    for (std::size_t i = 1; i < n_; ++i)
      for (std::size_t k = 0; k < p_; ++k)
        if (values_[i * p_ + k] != values_[k]) return false;
    return true;
  }

  DataSet select(std::span<const std::size_t> idx) const {
    std::vector<double> v;
    v.reserve(idx.size() * p_);
    for (std::size_t i : idx) {
      auto r = row(i);
      v.insert(v.end(), r.begin(), r.end());
    }
    return DataSet(idx.size(), p_, std::move(v));
  }

  friend bool operator==(const DataSet&, const DataSet&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t p_ = 0;
  std::vector<double> values_;
};

// Rows of x stacked above rows of y.
inline DataSet stack(const DataSet& x, const DataSet& y) {
  if (x.cols() != y.cols()) throw input_error("stack: dimension mismatch");
  std::vector<double> v(x.values().begin(), x.values().end());
  v.insert(v.end(), y.values().begin(), y.values().end());
  return DataSet(x.rows() + y.rows(), x.cols(), std::move(v));
}

// Dependent pairs (X_i, Y_i).
class PairedSample {
 public:
  PairedSample(DataSet x, DataSet y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.rows() != y_.rows() || x_.cols() != y_.cols())
      throw input_error("PairedSample: x and y must have identical shape");
  }

  const DataSet& x() const noexcept { return x_; }
  const DataSet& y() const noexcept { return y_; }
  std::size_t size() const noexcept { return x_.rows(); }
  std::size_t dim() const noexcept { return x_.cols(); }

  // Z_i = Y_i - X_i
  DataSet differences() const {
    std::vector<double> v(x_.values().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = y_.values()[i] - x_.values()[i];
    return DataSet(x_.rows(), x_.cols(), std::move(v));
  }

 private:
  DataSet x_;
  DataSet y_;
};

}  // namespace lstord
