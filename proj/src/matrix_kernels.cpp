#include "phasefit/matrix_kernels.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "phasefit/errors.hpp"

namespace phasefit {

namespace {

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite entries");
  }
}

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square");
  }
}

// Numerator coefficients of the [13/13] Pade approximant to exp.
constexpr double kPade13[] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

}  // namespace

Matrix mat_exp(const Matrix& a) {
  require_square(a, "mat_exp");
  require_finite(a, "mat_exp");
  const Eigen::Index p = a.rows();
  if (p == 1) {
    Matrix r(1, 1);
    r(0, 0) = std::exp(a(0, 0));
    return r;
  }
  if (p == 2) {
    // exp(A) = e^m (cosh(q) I + sinh(q)/q (A - m I)) with m the mean of the
    // diagonal and q^2 = ((a-d)/2)^2 + bc; q imaginary turns cosh/sinh into
    // cos/sin.
    const double m = 0.5 * (a(0, 0) + a(1, 1));
    const double q2 =
        0.25 * (a(0, 0) - a(1, 1)) * (a(0, 0) - a(1, 1)) + a(0, 1) * a(1, 0);
    const double em = std::exp(m);
    double coshq, sinc;
    if (q2 >= 0.0) {
      const double q = std::sqrt(q2);
      coshq = std::cosh(q);
      sinc = q < 1e-8 ? 1.0 + q2 / 6.0 : std::sinh(q) / q;
    } else {
      const double w = std::sqrt(-q2);
      coshq = std::cos(w);
      sinc = w < 1e-8 ? 1.0 + q2 / 6.0 : std::sin(w) / w;
    }
    Matrix r(2, 2);
    r(0, 0) = em * (coshq + sinc * (a(0, 0) - m));
    r(0, 1) = em * sinc * a(0, 1);
    r(1, 0) = em * sinc * a(1, 0);
    r(1, 1) = em * (coshq + sinc * (a(1, 1) - m));
    return r;
  }

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  }
  const Matrix as = a / std::ldexp(1.0, squarings);

  const Matrix ident = Matrix::Identity(p, p);
  const Matrix a2 = as * as;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;

  const Matrix u =
      as * (a6 * (kPade13[13] * a6 + kPade13[11] * a4 + kPade13[9] * a2) +
            kPade13[7] * a6 + kPade13[5] * a4 + kPade13[3] * a2 +
            kPade13[1] * ident);
  const Matrix v =
      a6 * (kPade13[12] * a6 + kPade13[10] * a4 + kPade13[8] * a2) +
      kPade13[6] * a6 + kPade13[4] * a4 + kPade13[2] * a2 + kPade13[0] * ident;

  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) {
    r = r * r;
  }
  return r;
}

Matrix mat_power(const Matrix& a, double theta, double cond_cap) {
  require_square(a, "mat_power");
  require_finite(a, "mat_power");
  const Eigen::Index p = a.rows();

  const double rounded = std::round(theta);
  if (rounded >= 0.0 && std::abs(theta - rounded) < 1e-12) {
    int n = static_cast<int>(rounded);
    Matrix r = Matrix::Identity(p, p);
    for (int i = 0; i < n; ++i) r = r * a;
    return r;
  }

  Eigen::EigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) {
    throw numeric_error("mat_power: eigendecomposition failed");
  }
  const Eigen::MatrixXcd vecs = es.eigenvectors();
  const Eigen::VectorXcd vals = es.eigenvalues();

  Eigen::FullPivLU<Eigen::MatrixXcd> lu(vecs);
  if (!lu.isInvertible()) {
    throw numeric_error("mat_power: defective eigenbasis (singular eigenvector matrix)");
  }
  const Eigen::MatrixXcd vinv = lu.inverse();
  const double cond = vecs.cwiseAbs().colwise().sum().maxCoeff() *
                      vinv.cwiseAbs().colwise().sum().maxCoeff();
  if (!(cond < cond_cap)) {
    std::ostringstream msg;
    msg << "mat_power: eigenbasis condition estimate " << cond
        << " exceeds cap " << cond_cap;
    throw numeric_error(msg.str());
  }

  Eigen::VectorXcd powered(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    powered(i) = std::pow(vals(i), std::complex<double>(theta, 0.0));
  }
  const Eigen::MatrixXcd m = vecs * powered.asDiagonal() * vinv;

  const double imag_residue = m.imag().cwiseAbs().maxCoeff();
  if (!(imag_residue <= 1e-9)) {
    std::ostringstream msg;
    msg << "mat_power: imaginary residue " << imag_residue
        << " too large for a real result";
    throw numeric_error(msg.str());
  }
  return m.real();
}

Matrix kron_product(const Matrix& a, const Matrix& b) {
  require_finite(a, "kron_product");
  require_finite(b, "kron_product");
  Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return r;
}

Matrix kron_sum(const Matrix& a, const Matrix& b) {
  require_square(a, "kron_sum");
  require_square(b, "kron_sum");
  return kron_product(a, Matrix::Identity(b.rows(), b.rows())) +
         kron_product(Matrix::Identity(a.rows(), a.rows()), b);
}

namespace {

Eigen::FullPivLU<Matrix> checked_lu(const Matrix& a, Eigen::Index rhs_rows) {
  require_square(a, "lin_solve");
  require_finite(a, "lin_solve");
  if (a.rows() != rhs_rows) {
    throw std::invalid_argument("lin_solve: dimension mismatch");
  }
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) {
    throw numeric_error("lin_solve: matrix is singular to working precision");
  }
  return lu;
}

}  // namespace

Vector lin_solve(const Matrix& a, const Vector& b) {
  return checked_lu(a, b.size()).solve(b);
}

Matrix lin_solve(const Matrix& a, const Matrix& b) {
  return checked_lu(a, b.rows()).solve(b);
}

}  // namespace phasefit
