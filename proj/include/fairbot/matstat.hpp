/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace fairbot {

using Vector = std::vector<double>;

/// Dense row-major matrix. Ensembles are stored one member per row.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vector> & rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double & operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  const std::vector<double> & data() const { return data_; }

  bool operator==(const Matrix &) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix multiply(const Matrix & a, const Matrix & b);
Matrix transpose(const Matrix & a);
Vector multiply(const Matrix & a, std::span<const double> x);

/// Square symmetric matrix. Construction checks symmetry to a relative
/// tolerance of 1e-12 and then stores the exactly symmetrized entries.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t dim);
  explicit SymMatrix(Matrix m);
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymMatrix identity(std::size_t dim);

  std::size_t dim() const { return m_.rows(); }
  double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  void set(std::size_t r, std::size_t c, double v);
  const Matrix & matrix() const { return m_; }

  bool operator==(const SymMatrix &) const = default;

 private:
  Matrix m_;
};

/// Lower-triangular L with strictly positive diagonal and L Lᵀ = A.
class CholeskyFactor {
 public:
  std::size_t dim() const { return lower_.rows(); }
  const Matrix & lower() const { return lower_; }
  SymMatrix reconstruct() const;

 private:
  explicit CholeskyFactor(Matrix lower) : lower_(std::move(lower)) {}
  friend CholeskyFactor cholesky(const SymMatrix & a);
  Matrix lower_;
};

/// Pivots must exceed 1e-12 times the largest diagonal entry, otherwise
/// NotPositiveDefinite is thrown.
CholeskyFactor cholesky(const SymMatrix & a);

/// Solves L y = b.
Vector forward_solve(const CholeskyFactor & chol, std::span<const double> b);

/// Solves (L Lᵀ) y = b by two triangular solves.
Vector solve_spd(const CholeskyFactor & chol, std::span<const double> b);

/// (x - center)ᵀ A⁻¹ (x - center) with A = L Lᵀ.
double mahalanobis_sq(std::span<const double> x, std::span<const double> center,
                      const CholeskyFactor & chol);

struct SpectralDecomposition {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // column i pairs with eigenvalues[i]
};

/// Cyclic Jacobi rotations. Each eigenvector is normalized so that its first
/// component of largest magnitude is positive.
SpectralDecomposition sym_eigen(const SymMatrix & a, int max_sweeps = 100);

// ---------------------------------------------------------------------------
// Random streams

inline constexpr const char * kRngAlgorithm = "mt19937_64/seed_seq/polar";

/// Streams of one replication occupy [r * K, (r + 1) * K).
inline constexpr std::uint64_t kStreamStride = std::uint64_t{1} << 32;

/// Immutable descriptor of an independent variate stream.
struct RngStream {
  std::string algorithm = kRngAlgorithm;
  std::uint64_t root_seed = 0;
  std::uint64_t stream_index = 0;

  bool operator==(const RngStream &) const = default;
};

inline std::uint64_t derive_stream_index(std::uint64_t replication, std::uint64_t offset) {
  return replication * kStreamStride + offset;
}

/// Mutable generator instantiated from an RngStream. Standard normals are
/// produced with the Marsaglia polar method; the spare variate of each pair
/// is kept, so the sequence depends only on the descriptor.
class NormalGenerator {
 public:
  explicit NormalGenerator(const RngStream & stream);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();
  void fill_normal(std::span<double> out);
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// mean + L z for a caller-supplied z (the zero-noise hook uses z = 0).
Vector mvn_transform(std::span<const double> mean, const CholeskyFactor & chol,
                     std::span<const double> z);
Vector mvn_sample(std::span<const double> mean, const CholeskyFactor & chol,
                  NormalGenerator & gen);
/// n independent draws, one per row.
Matrix mvn_sample_rows(std::span<const double> mean, const CholeskyFactor & chol,
                       std::size_t n, NormalGenerator & gen);

// ---------------------------------------------------------------------------
// Moments

struct Moments {
  Vector mean;
  SymMatrix covariance;
};

/// Sample mean and covariance with divisor n - 1. Requires n >= 2.
Moments ensemble_moments(const Matrix & members);

/// Mean over the n members plus obs; covariance of those n + 1 vectors with divisor n.
Moments augmented_moments(const Matrix & members, std::span<const double> obs);

/// Same result as augmented_moments, updated in O(p²) from the ensemble moments.
Moments augment_moments(const Moments & ensemble, std::size_t n, std::span<const double> obs);

}  // namespace fairbot
