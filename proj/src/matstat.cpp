/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "fairbot/matstat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "fairbot/errors.hpp"

namespace fairbot {

namespace {

void require_same(std::size_t a, std::size_t b, const char * what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": " << a << " vs " << b;
    throw DimensionMismatch(os.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto & r : rows) {
    require_same(r.size(), cols_, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector> & rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require_same(rows[r].size(), cols, "ragged rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

Matrix multiply(const Matrix & a, const Matrix & b) {
  require_same(a.cols(), b.rows(), "matrix product");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix transpose(const Matrix & a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Vector multiply(const Matrix & a, std::span<const double> x) {
  require_same(a.cols(), x.size(), "matrix-vector product");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    y[i] = std::inner_product(r.begin(), r.end(), x.begin(), 0.0);
  }
  return y;
}

// ---------------------------------------------------------------------------

SymMatrix::SymMatrix(std::size_t dim) : m_(dim, dim) {}

SymMatrix::SymMatrix(Matrix m) : m_(std::move(m)) {
  require_same(m_.rows(), m_.cols(), "symmetric matrix must be square");
  double scale = 0.0;
  for (double v : m_.data()) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * scale;
  for (std::size_t i = 0; i < m_.rows(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(m_(i, j) - m_(j, i)) > tol) {
        std::ostringstream os;
        os << "matrix is not symmetric at (" << i << ", " << j << ")";
        throw DomainError(os.str());
      }
      const double avg = 0.5 * (m_(i, j) + m_(j, i));
      m_(i, j) = avg;
      m_(j, i) = avg;
    }
  }
}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : SymMatrix(Matrix(rows)) {}

SymMatrix SymMatrix::identity(std::size_t dim) { return SymMatrix(Matrix::identity(dim)); }

void SymMatrix::set(std::size_t r, std::size_t c, double v) {
  m_(r, c) = v;
  m_(c, r) = v;
}

// ---------------------------------------------------------------------------

SymMatrix CholeskyFactor::reconstruct() const {
  const std::size_t p = dim();
  SymMatrix a(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k <= j; ++k) s += lower_(i, k) * lower_(j, k);
      a.set(i, j, s);
    }
  }
  return a;
}

CholeskyFactor cholesky(const SymMatrix & a) {
  const std::size_t p = a.dim();
  if (p == 0) throw DomainError("cholesky of an empty matrix");
  double max_diag = 0.0;
  for (std::size_t i = 0; i < p; ++i) max_diag = std::max(max_diag, a(i, i));
  const double floor = 1e-12 * max_diag;

  Matrix l(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    double pivot = a(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > floor) || pivot <= 0.0) {
      std::ostringstream os;
      os << "pivot " << j << " is " << pivot << " (threshold " << floor << ")";
      throw NotPositiveDefinite(os.str());
    }
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (std::size_t i = j + 1; i < p; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / d;
    }
  }
  return CholeskyFactor(std::move(l));
}

Vector forward_solve(const CholeskyFactor & chol, std::span<const double> b) {
  const std::size_t p = chol.dim();
  require_same(b.size(), p, "right-hand side");
  const Matrix & l = chol.lower();
  Vector y(b.begin(), b.end());
  for (std::size_t i = 0; i < p; ++i) {
    double s = y[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  return y;
}

Vector solve_spd(const CholeskyFactor & chol, std::span<const double> b) {
  Vector y = forward_solve(chol, b);
  const Matrix & l = chol.lower();
  const std::size_t p = chol.dim();
  for (std::size_t i = p; i-- > 0;) {
    double s = y[i];
    for (std::size_t k = i + 1; k < p; ++k) s -= l(k, i) * y[k];
    y[i] = s / l(i, i);
  }
  return y;
}

double mahalanobis_sq(std::span<const double> x, std::span<const double> center,
                      const CholeskyFactor & chol) {
  require_same(x.size(), chol.dim(), "point");
  require_same(center.size(), chol.dim(), "center");
  Vector d(x.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = x[i] - center[i];
  const Vector y = forward_solve(chol, d);
  return std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
}

// ---------------------------------------------------------------------------

SpectralDecomposition sym_eigen(const SymMatrix & a, int max_sweeps) {
  const std::size_t p = a.dim();
  Matrix w = a.matrix();
  Matrix v = Matrix::identity(p);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j) s += w(i, j) * w(i, j);
    return std::sqrt(2.0 * s);
  };
  double total = 0.0;
  for (double x : w.data()) total += x * x;
  const double tol = 1e-14 * std::sqrt(total);

  int sweep = 0;
  while (off_norm() > tol) {
    if (sweep++ >= max_sweeps) throw ConvergenceFailure("Jacobi sweeps exhausted");
    for (std::size_t i = 0; i + 1 < p; ++i) {
      for (std::size_t j = i + 1; j < p; ++j) {
        const double apq = w(i, j);
        if (apq == 0.0) continue;
        const double theta = (w(j, j) - w(i, i)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < p; ++k) {
          const double wki = w(k, i);
          const double wkj = w(k, j);
          w(k, i) = c * wki - s * wkj;
          w(k, j) = s * wki + c * wkj;
        }
        for (std::size_t k = 0; k < p; ++k) {
          const double wik = w(i, k);
          const double wjk = w(j, k);
          w(i, k) = c * wik - s * wjk;
          w(j, k) = s * wik + c * wjk;
        }
        for (std::size_t k = 0; k < p; ++k) {
          const double vki = v(k, i);
          const double vkj = v(k, j);
          v(k, i) = c * vki - s * vkj;
          v(k, j) = s * vki + c * vkj;
        }
        w(i, j) = 0.0;
        w(j, i) = 0.0;
      }
    }
  }

  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return w(x, x) > w(y, y); });

  SpectralDecomposition out{Vector(p), Matrix(p, p)};
  for (std::size_t c = 0; c < p; ++c) {
    const std::size_t src = order[c];
    out.eigenvalues[c] = w(src, src);
    std::size_t lead = 0;
    for (std::size_t k = 1; k < p; ++k) {
      // strict comparison keeps the first of tied components
      if (std::abs(v(k, src)) > std::abs(v(lead, src)) * (1.0 + 1e-12)) lead = k;
    }
    const double sign = v(lead, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < p; ++k) out.eigenvectors(k, c) = sign * v(k, src);
  }
  return out;
}

// ---------------------------------------------------------------------------

NormalGenerator::NormalGenerator(const RngStream & stream) {
  if (stream.algorithm != kRngAlgorithm)
    throw DomainError("unknown RNG algorithm '" + stream.algorithm + "'");
  std::seed_seq seq{static_cast<std::uint32_t>(stream.root_seed),
                    static_cast<std::uint32_t>(stream.root_seed >> 32),
                    static_cast<std::uint32_t>(stream.stream_index),
                    static_cast<std::uint32_t>(stream.stream_index >> 32)};
  engine_.seed(seq);
}

double NormalGenerator::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double NormalGenerator::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

void NormalGenerator::fill_normal(std::span<double> out) {
  for (double & z : out) z = normal();
}

std::size_t NormalGenerator::index(std::size_t n) {
  if (n == 0) throw DomainError("index range is empty");
  // rejection keeps the draw exactly uniform
  const std::uint64_t range = n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % range);
}

Vector mvn_transform(std::span<const double> mean, const CholeskyFactor & chol,
                     std::span<const double> z) {
  const std::size_t p = chol.dim();
  require_same(mean.size(), p, "mean");
  require_same(z.size(), p, "noise");
  const Matrix & l = chol.lower();
  Vector x(mean.begin(), mean.end());
  for (std::size_t i = 0; i < p; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k <= i; ++k) s += l(i, k) * z[k];
    x[i] += s;
  }
  return x;
}

Vector mvn_sample(std::span<const double> mean, const CholeskyFactor & chol,
                  NormalGenerator & gen) {
  Vector z(chol.dim());
  gen.fill_normal(z);
  return mvn_transform(mean, chol, z);
}

Matrix mvn_sample_rows(std::span<const double> mean, const CholeskyFactor & chol,
                       std::size_t n, NormalGenerator & gen) {
  const std::size_t p = chol.dim();
  require_same(mean.size(), p, "mean");
  const Matrix & l = chol.lower();
  Matrix out(n, p);
  Vector z(p);
  for (std::size_t r = 0; r < n; ++r) {
    gen.fill_normal(z);
    auto x = out.row(r);
    for (std::size_t i = 0; i < p; ++i) {
      double s = mean[i];
      for (std::size_t k = 0; k <= i; ++k) s += l(i, k) * z[k];
      x[i] = s;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Moments ensemble_moments(const Matrix & members) {
  const std::size_t n = members.rows();
  const std::size_t p = members.cols();
  if (n < 2) throw TooFewMembers("sample covariance needs at least 2 members");

  Vector mean(p, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto x = members.row(r);
    for (std::size_t i = 0; i < p; ++i) mean[i] += x[i];
  }
  for (double & m : mean) m /= static_cast<double>(n);

  Matrix acc(p, p);
  Vector d(p);
  for (std::size_t r = 0; r < n; ++r) {
    const auto x = members.row(r);
    for (std::size_t i = 0; i < p; ++i) d[i] = x[i] - mean[i];
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j <= i; ++j) acc(i, j) += d[i] * d[j];
  }
  SymMatrix s(p);
  const double scale = 1.0 / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j <= i; ++j) s.set(i, j, acc(i, j) * scale);
  return {std::move(mean), std::move(s)};
}

Moments augmented_moments(const Matrix & members, std::span<const double> obs) {
  const std::size_t n = members.rows();
  const std::size_t p = members.cols();
  if (n < 1) throw TooFewMembers("augmented moments need at least 1 member");
  require_same(obs.size(), p, "observation");

  Vector mean(obs.begin(), obs.end());
  for (std::size_t r = 0; r < n; ++r) {
    const auto x = members.row(r);
    for (std::size_t i = 0; i < p; ++i) mean[i] += x[i];
  }
  for (double & m : mean) m /= static_cast<double>(n + 1);

  Matrix acc(p, p);
  Vector d(p);
  auto accumulate = [&](std::span<const double> x) {
    for (std::size_t i = 0; i < p; ++i) d[i] = x[i] - mean[i];
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j <= i; ++j) acc(i, j) += d[i] * d[j];
  };
  accumulate(obs);
  for (std::size_t r = 0; r < n; ++r) accumulate(members.row(r));

  SymMatrix s(p);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j <= i; ++j) s.set(i, j, acc(i, j) * scale);
  return {std::move(mean), std::move(s)};
}

Moments augment_moments(const Moments & ensemble, std::size_t n, std::span<const double> obs) {
  const std::size_t p = ensemble.mean.size();
  require_same(obs.size(), p, "observation");
  if (n < 2) throw TooFewMembers("ensemble moments need at least 2 members");
  const double nd = static_cast<double>(n);

  // S~ = ((n-1) S + n/(n+1) d dᵀ) / n with d = obs - m
  Vector d(p);
  Vector mean(p);
  for (std::size_t i = 0; i < p; ++i) {
    d[i] = obs[i] - ensemble.mean[i];
    mean[i] = ensemble.mean[i] + d[i] / (nd + 1.0);
  }
  const double a = (nd - 1.0) / nd;
  const double b = 1.0 / (nd + 1.0);
  SymMatrix s(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      s.set(i, j, a * ensemble.covariance(i, j) + b * d[i] * d[j]);
  return {std::move(mean), std::move(s)};
}

}  // namespace fairbot
