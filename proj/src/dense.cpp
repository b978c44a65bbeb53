#include "shiftsplit/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "shiftsplit/errors.hpp"

namespace shiftsplit {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw DimensionError("DenseMatrix: rows*cols != number of values");
  }
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  values_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("DenseMatrix: ragged rows");
    values_.insert(values_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix i(n, n);
  for (std::size_t k = 0; k < n; ++k) i(k, k) = 1.0;
  return i;
}

DenseMatrix DenseMatrix::from_sparse(const SparseMatrix& a) {
  DenseMatrix d(a.rows(), a.cols());
  for (const auto& t : a.to_triplets()) d(t.row, t.col) = t.value;
  return d;
}

Vector DenseMatrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void DenseMatrix::set_column(std::size_t j, std::span<const double> v) {
  if (v.size() != rows_) throw DimensionError("set_column: length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Vector DenseMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw DimensionError("dense multiply: length mismatch");
  Vector y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    const double* r = values_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const double v : values_) s += v * v;
  return std::sqrt(s);
}

double DenseMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("dense product: shape mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

namespace {

DenseMatrix combine(const DenseMatrix& a, const DenseMatrix& b, double beta) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("dense add: shape mismatch");
  }
  DenseMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += beta * b(i, j);
  }
  return c;
}

}  // namespace

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  return combine(a, b, 1.0);
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  return combine(a, b, -1.0);
}

DenseMatrix operator*(double c, const DenseMatrix& a) {
  DenseMatrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (auto& v : r.row(i)) v *= c;
  }
  return r;
}

// ---------------------------------------------------------------------------
// LU

LuFactorization::LuFactorization(DenseMatrix a) : lu_(std::move(a)) {
  if (!lu_.square()) throw DimensionError("LU: matrix must be square");
  const std::size_t n = lu_.rows();
  pivots_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        p = i;
      }
    }
    pivots_[k] = p;
    if (best == 0.0) {
      throw SingularMatrixError("LU: zero pivot in column " + std::to_string(k));
    }
    if (p != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
      sign_ = -sign_;
    }
    const double pivot = lu_(k, k);
    const auto rk = lu_.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      auto ri = lu_.row(i);
      const double l = ri[k] / pivot;
      ri[k] = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= l * rk[j];
    }
  }
}

Vector LuFactorization::solve(std::span<const double> b) const {
  const std::size_t n = lu_.rows();
  if (b.size() != n) throw DimensionError("LU solve: length mismatch");
  Vector x(b.begin(), b.end());
  for (std::size_t k = 0; k < n; ++k) {
    if (pivots_[k] != k) std::swap(x[k], x[pivots_[k]]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto ri = lu_.row(i);
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= ri[j] * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    const auto ri = lu_.row(i);
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= ri[j] * x[j];
    x[i] = s / ri[i];
  }
  return x;
}

double LuFactorization::determinant() const {
  double d = sign_;
  for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
  return d;
}

Vector lu_solve(const DenseMatrix& a, std::span<const double> b) {
  return LuFactorization(a).solve(b);
}

// ---------------------------------------------------------------------------
// Eigenvalues

namespace {

/// 1-based square workspace; the QR sweep below reads most naturally with the
/// classic Fortran indexing.
class Work {
 public:
  explicit Work(std::size_t n) : n_(n), v_((n + 1) * (n + 1), 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return v_[i * (n_ + 1) + j]; }

 private:
  std::size_t n_;
  std::vector<double> v_;
};

void balance(Work& a, std::size_t n) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 1; i <= n; ++i) {
      double r = 0.0, c = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (std::size_t j = 1; j <= n; ++j) a(i, j) *= g;
        for (std::size_t j = 1; j <= n; ++j) a(j, i) *= f;
      }
    }
  }
}

/// Householder similarity reduction to upper Hessenberg form.
void hessenberg(Work& a, std::size_t n) {
  std::vector<double> v(n + 1);
  for (std::size_t k = 1; k + 2 <= n; ++k) {
    double scale = 0.0;
    for (std::size_t i = k + 1; i <= n; ++i) scale += std::abs(a(i, k));
    if (scale == 0.0) continue;
    double h = 0.0;
    for (std::size_t i = k + 1; i <= n; ++i) {
      v[i] = a(i, k) / scale;
      h += v[i] * v[i];
    }
    const double g = v[k + 1] >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
    h -= v[k + 1] * g;  // h = |v|^2 / 2 after the update below
    v[k + 1] -= g;

    // A <- (I - v v^T / h) A
    for (std::size_t j = 1; j <= n; ++j) {
      double f = 0.0;
      for (std::size_t i = k + 1; i <= n; ++i) f += v[i] * a(i, j);
      f /= h;
      for (std::size_t i = k + 1; i <= n; ++i) a(i, j) -= f * v[i];
    }
    // A <- A (I - v v^T / h)
    for (std::size_t i = 1; i <= n; ++i) {
      double f = 0.0;
      for (std::size_t j = k + 1; j <= n; ++j) f += a(i, j) * v[j];
      f /= h;
      for (std::size_t j = k + 1; j <= n; ++j) a(i, j) -= f * v[j];
    }
    a(k + 1, k) = scale * g;
    for (std::size_t i = k + 2; i <= n; ++i) a(i, k) = 0.0;
  }
}

double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

/// Francis double-shift QR on an upper Hessenberg matrix (values only).
ComplexList hessenberg_qr(Work& a, int n) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> wr(n + 1), wi(n + 1);

  double anorm = 0.0;
  for (int i = 1; i <= n; ++i) {
    for (int j = std::max(i - 1, 1); j <= n; ++j) anorm += std::abs(a(i, j));
  }

  const long max_sweeps = 30L * n;
  long sweeps = 0;
  int nn = n;
  double t = 0.0;
  while (nn >= 1) {
    int its = 0;
    int l = 1;
    do {
      for (l = nn; l >= 2; --l) {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) <= eps * s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {
        wr[nn] = x + t;
        wi[nn--] = 0.0;
      } else {
        double y = a(nn - 1, nn - 1);
        double w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          const double p = 0.5 * (y - x);
          const double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            wr[nn - 1] = wr[nn] = x + z;
            if (z != 0.0) wr[nn] = x - w / z;
            wi[nn - 1] = wi[nn] = 0.0;
          } else {
            wr[nn - 1] = wr[nn] = x + p;
            wi[nn - 1] = -(wi[nn] = z);
          }
          nn -= 2;
        } else {
          if (++sweeps > max_sweeps) {
            throw NumericalFailure("eigvals: QR iteration did not converge");
          }
          if (its > 0 && its % 10 == 0) {
            // Exceptional shift.
            t += x;
            for (int i = 1; i <= nn; ++i) a(i, i) -= x;
            const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
          for (; m >= l; --m) {
            z = a(m, m);
            r = x - z;
            double s = y - z;
            p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) +
                                            std::abs(a(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            a(i, i - 2) = 0.0;
            if (i != m + 2) a(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1) r = a(k + 2, k - 1);
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) a(k, k - 1) = -a(k, k - 1);
            } else {
              a(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
              p = a(k, j) + q * a(k + 1, j);
              if (k != nn - 1) {
                p += r * a(k + 2, j);
                a(k + 2, j) -= p * z;
              }
              a(k + 1, j) -= p * y;
              a(k, j) -= p * x;
            }
            const int mmin = nn < k + 3 ? nn : k + 3;
            for (int i = l; i <= mmin; ++i) {
              p = x * a(i, k) + y * a(i, k + 1);
              if (k != nn - 1) {
                p += z * a(i, k + 2);
                a(i, k + 2) -= p * r;
              }
              a(i, k + 1) -= p * q;
              a(i, k) -= p;
            }
          }
        }
      }
    } while (nn >= 1 && l < nn - 1);
  }

  ComplexList out;
  out.reserve(n);
  for (int i = 1; i <= n; ++i) out.emplace_back(wr[i], wi[i]);
  return out;
}

}  // namespace

ComplexList eigvals(const DenseMatrix& a) {
  if (!a.square()) throw DimensionError("eigvals: matrix must be square");
  const std::size_t n = a.rows();
  if (n == 0) return {};
  Work w(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) w(i + 1, j + 1) = a(i, j);
  }
  balance(w, n);
  hessenberg(w, n);
  return hessenberg_qr(w, static_cast<int>(n));
}

ComplexVector inverse_iteration(const DenseMatrix& a, Complex lambda,
                                std::size_t steps) {
  if (!a.square()) throw DimensionError("inverse_iteration: matrix must be square");
  const std::size_t n = a.rows();
  const double scale = std::max(a.frobenius_norm(), 1.0);
  const double tiny = std::numeric_limits<double>::epsilon() * scale;

  // Factor (A - lambda I) in complex arithmetic with partial pivoting.
  std::vector<Complex> lu(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) lu[i * n + j] = a(i, j);
    lu[i * n + i] -= lambda;
  }
  std::vector<std::size_t> piv(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu[i * n + k]) > std::abs(lu[p * n + k])) p = i;
    }
    piv[k] = p;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu[k * n + j], lu[p * n + j]);
    }
    if (std::abs(lu[k * n + k]) < tiny) lu[k * n + k] = tiny;
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex l = lu[i * n + k] / lu[k * n + k];
      lu[i * n + k] = l;
      if (l == Complex(0.0)) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu[i * n + j] -= l * lu[k * n + j];
    }
  }

  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ComplexVector v(n);
  for (auto& e : v) e = Complex(1.0 + 0.5 * dist(gen), 0.5 * dist(gen));

  for (std::size_t it = 0; it < std::max<std::size_t>(steps, 1); ++it) {
    for (std::size_t k = 0; k < n; ++k) {
      if (piv[k] != k) std::swap(v[k], v[piv[k]]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = v[i];
      for (std::size_t j = 0; j < i; ++j) s -= lu[i * n + j] * v[j];
      v[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      Complex s = v[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= lu[i * n + j] * v[j];
      v[i] = s / lu[i * n + i];
    }
    double nrm = 0.0;
    for (const auto& e : v) nrm += std::norm(e);
    nrm = std::sqrt(nrm);
    for (auto& e : v) e /= nrm;
  }
  return v;
}

NormEstimate norm2_est(const LinearOperator& op, double tol, std::size_t maxit) {
  if (!op.has_transpose()) {
    throw ConfigError("norm2_est: operator needs a transpose application");
  }
  NormEstimate est;
  if (op.cols == 0 || op.rows == 0) {
    est.converged = true;
    return est;
  }
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(op.cols), w(op.rows), u(op.cols);
  for (auto& e : v) e = dist(gen);
  double nv = norm2(v);
  for (auto& e : v) e /= nv;

  double prev = 0.0;
  for (std::size_t it = 1; it <= maxit; ++it) {
    op.apply(v, w);
    const double sigma = norm2(w);
    est.value = sigma;
    est.iterations = it;
    if (sigma == 0.0) {
      est.converged = true;
      return est;
    }
    if (it > 1 && std::abs(sigma - prev) <= tol * sigma) {
      est.converged = true;
      return est;
    }
    prev = sigma;
    op.apply_transpose(w, u);
    nv = norm2(u);
    if (nv == 0.0) {
      est.converged = true;
      return est;
    }
    for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i] / nv;
  }
  return est;
}

bool roots_in_unit_disk_real(double a, double b) {
  return std::abs(b) < 1.0 && std::abs(a) < 1.0 + b;
}

bool roots_in_unit_disk_complex(Complex phi, Complex psi) {
  const double mpsi = std::abs(psi);
  return mpsi < 1.0 && std::abs(phi - std::conj(phi) * psi) + mpsi * mpsi < 1.0;
}

}  // namespace shiftsplit
