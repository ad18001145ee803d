#pragma once

// Dense kernels shared by every module: small row-major matrices, a cyclic
// Jacobi eigensolver, Gauss-Newton projection onto constraint sets and a
// fixed-step RK4 integrator. Sizes here never exceed a few hundred, so
// everything is written for clarity rather than blocking or vectorisation.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace otfkm {

using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double max_abs(std::span<const double> a);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
Vector add(std::span<const double> a, std::span<const double> b);
Vector subtract(std::span<const double> a, std::span<const double> b);
Vector scaled(std::span<const double> a, double s);
Vector normalized(std::span<const double> a);
Vector unit_vector(std::size_t n, std::size_t index);

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix identity(std::size_t n);
  /// Rows given as nested lists; all rows must have equal length.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  Vector column(std::size_t j) const;

  Vector apply(std::span<const double> x) const;
  Matrix transpose() const;
  double trace() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);

double max_abs_entry(const Matrix& a);
double frobenius_norm(const Matrix& a);
/// Kronecker product a ⊗ b.
Matrix kron(const Matrix& a, const Matrix& b);
/// <x, A y>
double bilinear(const Matrix& a, std::span<const double> x, std::span<const double> y);
/// Restriction of a bilinear form to a basis: entry (a,b) = <e_a, A e_b>.
Matrix restrict_form(const Matrix& a, const std::vector<Vector>& basis);

/// A square matrix whose symmetry has been checked (to 1e-12 relative to its
/// largest entry) at construction.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(Matrix a);
  const Matrix& matrix() const { return a_; }
  std::size_t order() const { return a_.rows(); }

 private:
  Matrix a_;
};

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // column j pairs with values[j]
  int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// tol * max(1, |A|_F). Throws ErrorCode::numeric after 100 sweeps.
EigenDecomposition symmetric_eigen(const SymmetricMatrix& a, double tol = 1e-14);

/// Gaussian elimination with partial pivoting. Throws ErrorCode::numeric when
/// a pivot falls below 1e-14 relative to the largest entry.
Vector solve_linear(Matrix a, Vector b);

/// Orthonormal basis for span(candidates) projected orthogonally to the
/// (orthonormal) `against` set. Pivoted: the candidate with the largest
/// remaining component is taken next. Stops after `max_rank` vectors or when
/// no remaining component exceeds `drop_tol`.
std::vector<Vector> span_basis(const std::vector<Vector>& candidates,
                               const std::vector<Vector>& against,
                               double drop_tol = 1e-8,
                               std::size_t max_rank = static_cast<std::size_t>(-1));

/// Orthonormal basis of the orthogonal complement of an orthonormal set in R^n.
std::vector<Vector> orthogonal_complement(const std::vector<Vector>& basis, std::size_t n);

/// Component of v orthogonal to an orthonormal set.
Vector reject(std::span<const double> v, const std::vector<Vector>& basis);
/// Component of v inside the span of an orthonormal set.
Vector project(std::span<const double> v, const std::vector<Vector>& basis);

// --- constrained projection -----------------------------------------------

struct ConstraintEval {
  Vector residual;  // one entry per constraint
  Matrix jacobian;  // residual.size() x dim
};

using ConstraintFn = std::function<ConstraintEval(std::span<const double>)>;

struct ProjectionOptions {
  double tol = 1e-12;
  int max_iter = 100;
  /// Extra Newton steps after convergence, kept only while they reduce the
  /// residual. Finite-difference callers use these to reach the rounding floor.
  int polish_steps = 0;
};

struct ProjectionResult {
  Vector z;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> history;  // residual max-norm before each step and at exit
};

/// Damped Gauss-Newton with minimum-norm steps dz = -J^T (J J^T)^{-1} r. The
/// step is halved (up to 30 times) while it fails to reduce |r|_inf. Throws
/// ErrorCode::projection if tol is not reached within max_iter.
ProjectionResult newton_project(Vector z0, const ConstraintFn& constraints,
                                const ProjectionOptions& options = {});

// --- ODE integration ---------------------------------------------------------

using VectorField = std::function<Vector(double, std::span<const double>)>;

struct TrajectorySample {
  double t;
  Vector y;
};

Vector rk4_step(const VectorField& f, double t, std::span<const double> y, double h);

/// Classical RK4 with fixed step dt; the last step is shortened to land on t1.
/// Every accepted state is returned, starting with (t0, y0). Throws
/// ErrorCode::integration on a non-finite state.
std::vector<TrajectorySample> rk4_integrate(const VectorField& f, Vector y0, double t0,
                                            double t1, double dt);

// --- random draws ------------------------------------------------------------

/// Seeded generator used everywhere a sample is drawn. Streams derived from
/// one seed are independent of each other and of call order elsewhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  double gaussian();
  double uniform(double lo, double hi);
  Vector gaussian_vector(std::size_t n);
  /// Uniform on the unit sphere S^{n-1}.
  Vector unit_vector(std::size_t n);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace otfkm
