#include "covkit/matrix.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace covkit {

double frobenius(const Matrix& a) { return a.norm(); }

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double defect(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && defect(a, b) <= tol;
}

Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

bool is_hermitian(const Matrix& a, double tol) {
  return a.rows() == a.cols() && (a - a.adjoint()).norm() <= tol;
}

Matrix random_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  return m;
}

Matrix random_hermitian(int n, Rng& rng) {
  return hermitize(random_matrix(n, n, rng));
}

Matrix random_unitary(int n, Rng& rng) {
  // QR of a Ginibre matrix with the phase convention fixed by R's diagonal.
  Matrix g = random_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    Complex d = r(j, j);
    double ad = std::abs(d);
    q.col(j) *= (ad > 0) ? d / ad : Complex(1, 0);
  }
  return q;
}

Vector random_vector(int n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v;
}

EigResult hermitian_eig(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(a));
  if (es.info() != Eigen::Success) fail_numerical("eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

IsqrtResult hermitian_isqrt(const Matrix& k, double rank_cutoff,
                            double tol_psd) {
  const int n = static_cast<int>(k.rows());
  if (k.rows() != k.cols()) fail_validation("hermitian_isqrt: matrix not square");
  double scale = std::max(1.0, k.norm());
  if (!is_hermitian(k, 1e-8 * scale))
    fail_validation("hermitian_isqrt: matrix not Hermitian");
  EigResult eig = hermitian_eig(k);
  double lmax = std::max(0.0, eig.values(n - 1));
  if (eig.values(0) < -tol_psd * std::max(1.0, lmax))
    fail_numerical("hermitian_isqrt: matrix not positive semidefinite (min eig " +
                   std::to_string(eig.values(0)) + ")");
  const double cutoff = rank_cutoff * lmax;
  IsqrtResult out;
  out.eigenvalues = eig.values;
  out.inv_sqrt = Matrix::Zero(n, n);
  out.sqrt = Matrix::Zero(n, n);
  out.support = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double lam = eig.values(i);
    if (lam <= cutoff) continue;
    Matrix proj = eig.vectors.col(i) * eig.vectors.col(i).adjoint();
    out.inv_sqrt += proj / std::sqrt(lam);
    out.sqrt += proj * std::sqrt(lam);
    out.support += proj;
    ++out.rank;
  }
  return out;
}

int rank_with_cutoff(const RealVector& sv, double rel_cutoff) {
  if (sv.size() == 0) return 0;
  const double cutoff = rel_cutoff * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return rank;
}

IndependenceReport matrix_independence(const std::vector<Matrix>& ops,
                                       double rel_cutoff) {
  IndependenceReport rep;
  rep.count = static_cast<int>(ops.size());
  if (ops.empty()) return rep;
  const int rc = static_cast<int>(ops[0].size());
  Matrix stacked(rc, rep.count);
  for (int a = 0; a < rep.count; ++a) {
    if (ops[a].size() != rc)
      fail_validation("matrix_independence: mixed shapes");
    stacked.col(a) = vectorize(ops[a]);
  }
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
  rep.singular_values = svd.singularValues();
  rep.rank = rank_with_cutoff(rep.singular_values, rel_cutoff);
  if (rep.rank < rep.count) {
    // Any right-singular vector beyond the numerical rank is a dependency.
    rep.kernel = svd.matrixV().col(rep.count - 1);
  }
  return rep;
}

Matrix null_space(const Matrix& a, double rel_cutoff) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const RealVector sv = svd.singularValues();
  const int rank = rank_with_cutoff(sv, rel_cutoff);
  const int n = static_cast<int>(a.cols());
  return svd.matrixV().rightCols(n - rank);
}

RealMatrix real_null_space(const RealMatrix& a, double rel_cutoff) {
  Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeFullV);
  const RealVector sv = svd.singularValues();
  const int rank = rank_with_cutoff(sv, rel_cutoff);
  const int n = static_cast<int>(a.cols());
  return svd.matrixV().rightCols(n - rank);
}

Vector vectorize(const Matrix& a) {
  return Eigen::Map<const Vector>(a.data(), a.size());
}

Matrix unvectorize(const Vector& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols)
    fail_validation("unvectorize: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

std::vector<Matrix> hermitian_basis(int n) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(n) * n);
  const double isq2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    Matrix b = Matrix::Zero(n, n);
    b(i, i) = 1.0;
    basis.push_back(b);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Matrix s = Matrix::Zero(n, n);
      s(i, j) = isq2;
      s(j, i) = isq2;
      basis.push_back(s);
      Matrix t = Matrix::Zero(n, n);
      t(i, j) = Complex(0, isq2);
      t(j, i) = Complex(0, -isq2);
      basis.push_back(t);
    }
  return basis;
}

}  // namespace covkit
