#include "otfkm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "otfkm/error.hpp"

namespace otfkm {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain: return "domain error";
    case ErrorCode::dimension: return "dimension error";
    case ErrorCode::sampling: return "sampling error";
    case ErrorCode::frame: return "frame error";
    case ErrorCode::estimation: return "estimation error";
    case ErrorCode::numeric: return "numeric error";
    case ErrorCode::projection: return "projection error";
    case ErrorCode::integration: return "integration error";
    case ErrorCode::io: return "io error";
  }
  return "error";
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector add(std::span<const double> a, std::span<const double> b) {
  Vector r(a.begin(), a.end());
  axpy(1.0, b, r);
  return r;
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  Vector r(a.begin(), a.end());
  axpy(-1.0, b, r);
  return r;
}

Vector scaled(std::span<const double> a, double s) {
  Vector r(a.begin(), a.end());
  for (double& v : r) v *= s;
  return r;
}

Vector normalized(std::span<const double> a) {
  const double n = norm(a);
  if (!(n > 0.0)) fail(ErrorCode::numeric, "cannot normalize a zero vector");
  return scaled(a, 1.0 / n);
}

Vector unit_vector(std::size_t n, std::size_t index) {
  Vector e(n, 0.0);
  e[index] = 1.0;
  return e;
}

// --- Matrix ------------------------------------------------------------------

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) fail(ErrorCode::dimension, "ragged matrix rows");
    std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<long>(i * c));
  }
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

Vector Matrix::apply(std::span<const double> x) const {
  if (x.size() != cols_) fail(ErrorCode::dimension, "matrix-vector size mismatch");
  Vector y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) y[i] = dot(row(i), x);
  return y;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
  return s;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    fail(ErrorCode::dimension, "matrix sum size mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    fail(ErrorCode::dimension, "matrix difference size mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::dimension, "matrix product size mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

double max_abs_entry(const Matrix& a) { return max_abs(a.data()); }

double frobenius_norm(const Matrix& a) { return norm(a.data()); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return k;
}

double bilinear(const Matrix& a, std::span<const double> x, std::span<const double> y) {
  return dot(x, a.apply(y));
}

Matrix restrict_form(const Matrix& a, const std::vector<Vector>& basis) {
  const std::size_t n = basis.size();
  std::vector<Vector> images;
  images.reserve(n);
  for (const auto& e : basis) images.push_back(a.apply(e));
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = dot(basis[i], images[j]);
  return r;
}

SymmetricMatrix::SymmetricMatrix(Matrix a) : a_(std::move(a)) {
  if (!a_.square()) fail(ErrorCode::dimension, "symmetric matrix must be square");
  const double scale = std::max(1.0, max_abs_entry(a_));
  for (std::size_t i = 0; i < a_.rows(); ++i)
    for (std::size_t j = i + 1; j < a_.cols(); ++j)
      if (std::abs(a_(i, j) - a_(j, i)) > 1e-12 * scale)
        fail(ErrorCode::domain, "matrix is not symmetric");
}

// --- Jacobi ------------------------------------------------------------------

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition symmetric_eigen(const SymmetricMatrix& sym, double tol) {
  constexpr int kMaxSweeps = 100;
  Matrix a = sym.matrix();
  const std::size_t n = a.rows();
  if (n > 4096) fail(ErrorCode::dimension, "eigensolver order limited to 4096");
  Matrix v = Matrix::identity(n);
  const double threshold = tol * std::max(1.0, frobenius_norm(a));

  int sweep = 0;
  while (off_diagonal_norm(a) > threshold) {
    if (sweep == kMaxSweeps)
      fail(ErrorCode::numeric, "Jacobi eigensolver did not converge in 100 sweeps");
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle zeroing a(p,q): tan(2θ) = 2 a_pq / (a_qq - a_pp).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  out.sweeps = sweep;
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

Vector solve_linear(Matrix a, Vector b) {
  const std::size_t n = a.rows();
  if (!a.square() || b.size() != n) fail(ErrorCode::dimension, "solve_linear size mismatch");
  const double scale = std::max(max_abs_entry(a), 1e-300);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) < 1e-14 * scale)
      fail(ErrorCode::numeric, "singular linear system");
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(col, k), a(pivot, k));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) a(r, k) -= f * a(col, k);
      b[r] -= f * b[col];
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a(i, k) * x[k];
    x[i] = s / a(i, i);
  }
  return x;
}

// --- orthonormal bases ---------------------------------------------------------

Vector reject(std::span<const double> v, const std::vector<Vector>& basis) {
  Vector r(v.begin(), v.end());
  // Two passes of modified Gram-Schmidt keep the result orthogonal to rounding.
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& e : basis) axpy(-dot(r, e), e, r);
  return r;
}

Vector project(std::span<const double> v, const std::vector<Vector>& basis) {
  Vector p(v.size(), 0.0);
  for (const auto& e : basis) axpy(dot(v, e), e, p);
  return p;
}

std::vector<Vector> span_basis(const std::vector<Vector>& candidates,
                               const std::vector<Vector>& against, double drop_tol,
                               std::size_t max_rank) {
  std::vector<Vector> residuals;
  residuals.reserve(candidates.size());
  for (const auto& c : candidates) residuals.push_back(reject(c, against));

  std::vector<Vector> basis;
  std::vector<bool> used(residuals.size(), false);
  while (basis.size() < max_rank) {
    std::size_t best = residuals.size();
    double best_norm = drop_tol;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
      if (used[i]) continue;
      const double nr = norm(residuals[i]);
      if (nr > best_norm) {
        best_norm = nr;
        best = i;
      }
    }
    if (best == residuals.size()) break;
    used[best] = true;
    Vector e = reject(residuals[best], basis);
    const double ne = norm(e);
    if (!(ne > drop_tol)) continue;
    e = scaled(e, 1.0 / ne);
    for (std::size_t i = 0; i < residuals.size(); ++i)
      if (!used[i]) axpy(-dot(residuals[i], e), e, residuals[i]);
    basis.push_back(std::move(e));
  }
  return basis;
}

std::vector<Vector> orthogonal_complement(const std::vector<Vector>& basis, std::size_t n) {
  std::vector<Vector> standard;
  standard.reserve(n);
  for (std::size_t i = 0; i < n; ++i) standard.push_back(unit_vector(n, i));
  return span_basis(standard, basis, 1e-8, n - basis.size());
}

// --- Gauss-Newton projection ---------------------------------------------------

namespace {

Vector min_norm_step(const ConstraintEval& eval) {
  const Matrix& j = eval.jacobian;
  const Matrix jjt = j * j.transpose();
  const Vector w = solve_linear(jjt, eval.residual);
  Vector step(j.cols(), 0.0);
  for (std::size_t r = 0; r < j.rows(); ++r) axpy(-w[r], j.row(r), step);
  return step;
}

}  // namespace

ProjectionResult newton_project(Vector z0, const ConstraintFn& constraints,
                                const ProjectionOptions& options) {
  ProjectionResult out;
  out.z = std::move(z0);
  ConstraintEval eval = constraints(out.z);
  double res = max_abs(eval.residual);
  out.history.push_back(res);

  auto take_step = [&](bool polishing) -> bool {
    Vector step;
    try {
      step = min_norm_step(eval);
    } catch (const Error&) {
      if (polishing) return false;
      fail(ErrorCode::projection, "constraint Jacobian lost rank during projection");
    }
    double lambda = 1.0;
    for (int halving = 0; halving <= 30; ++halving) {
      Vector trial = out.z;
      axpy(lambda, step, trial);
      ConstraintEval trial_eval = constraints(trial);
      const double trial_res = max_abs(trial_eval.residual);
      if (std::isfinite(trial_res) && trial_res < res) {
        out.z = std::move(trial);
        eval = std::move(trial_eval);
        res = trial_res;
        return true;
      }
      if (polishing) return false;
      lambda *= 0.5;
    }
    return false;
  };

  while (res >= options.tol) {
    if (out.iterations == options.max_iter)
      fail(ErrorCode::projection, "Newton projection did not converge in " +
                                      std::to_string(options.max_iter) +
                                      " iterations; final residual " + std::to_string(res));
    ++out.iterations;
    if (!take_step(false))
      fail(ErrorCode::projection,
           "Newton projection stalled; final residual " + std::to_string(res));
    out.history.push_back(res);
  }
  for (int p = 0; p < options.polish_steps; ++p) {
    if (!take_step(true)) break;
    ++out.iterations;
    out.history.push_back(res);
  }
  out.residual = res;
  return out;
}

// --- RK4 ---------------------------------------------------------------------

Vector rk4_step(const VectorField& f, double t, std::span<const double> y, double h) {
  const Vector k1 = f(t, y);
  Vector tmp(y.begin(), y.end());
  axpy(0.5 * h, k1, tmp);
  const Vector k2 = f(t + 0.5 * h, tmp);
  tmp.assign(y.begin(), y.end());
  axpy(0.5 * h, k2, tmp);
  const Vector k3 = f(t + 0.5 * h, tmp);
  tmp.assign(y.begin(), y.end());
  axpy(h, k3, tmp);
  const Vector k4 = f(t + h, tmp);
  Vector next(y.begin(), y.end());
  for (std::size_t i = 0; i < next.size(); ++i)
    next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return next;
}

std::vector<TrajectorySample> rk4_integrate(const VectorField& f, Vector y0, double t0,
                                            double t1, double dt) {
  if (!(dt > 0.0)) fail(ErrorCode::domain, "rk4 step must be positive");
  if (!(t1 > t0)) fail(ErrorCode::domain, "rk4 requires t1 > t0");
  std::vector<TrajectorySample> traj;
  traj.push_back({t0, std::move(y0)});
  // Step count fixed up front so the grid is t0 + j*dt exactly, not an
  // accumulated sum.
  const auto full_steps = static_cast<long>(std::floor((t1 - t0) / dt * (1.0 + 1e-14)));
  for (long j = 1; j <= full_steps + 1; ++j) {
    const double t = traj.back().t;
    const double target = j <= full_steps ? t0 + static_cast<double>(j) * dt : t1;
    const double h = target - t;
    if (h <= 0.0) break;
    Vector y = rk4_step(f, t, traj.back().y, h);
    for (double v : y)
      if (!std::isfinite(v))
        fail(ErrorCode::integration, "non-finite state at t=" + std::to_string(target));
    traj.push_back({target, std::move(y)});
  }
  return traj;
}

// --- Rng ---------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed ^ splitmix64(stream + 0x5851F42D4C957F2DULL))) {}

double Rng::gaussian() { return normal_(engine_); }

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

Vector Rng::gaussian_vector(std::size_t n) {
  Vector v(n);
  for (double& x : v) x = gaussian();
  return v;
}

Vector Rng::unit_vector(std::size_t n) {
  for (;;) {
    Vector v = gaussian_vector(n);
    const double nv = norm(v);
    if (nv > 1e-12) return scaled(v, 1.0 / nv);
  }
}

}  // namespace otfkm
