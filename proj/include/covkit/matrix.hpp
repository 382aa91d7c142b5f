#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "covkit/error.hpp"

namespace covkit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

// Single global RNG seed; every randomized routine derives its stream from a
// value of this kind and reports echo it.
inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

// Numerical policy. All thresholds used anywhere in the library live here.
struct Tolerances {
  double unit = 1e-10;         // unitarity / representation law defects
  double lin = 1e-9;           // linear-algebra identities
  double psd = 1e-10;          // negative-eigenvalue allowance
  double rank_cutoff = 1e-8;   // relative singular-value cutoff for ranks
  double character = 1e-8;     // character matching
};

double frobenius(const Matrix& a);
double operator_norm(const Matrix& a);  // largest singular value
double defect(const Matrix& a, const Matrix& b);
bool approx_equal(const Matrix& a, const Matrix& b, double tol);
Matrix hermitize(const Matrix& a);
bool is_hermitian(const Matrix& a, double tol);

Matrix random_matrix(int rows, int cols, Rng& rng);
Matrix random_hermitian(int n, Rng& rng);
Matrix random_unitary(int n, Rng& rng);
Vector random_vector(int n, Rng& rng);

// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
struct EigResult {
  RealVector values;
  Matrix vectors;
};
EigResult hermitian_eig(const Matrix& a);

// Spectral functions of a PSD matrix. Eigenvalues at or below
// rank_cutoff * lambda_max are treated as zero; eigenvalues below
// -tol_psd * scale raise NumericalError.
struct IsqrtResult {
  Matrix inv_sqrt;      // pseudo-inverse square root
  Matrix sqrt;          // principal square root
  Matrix support;       // projection onto the non-null eigenspace
  int rank = 0;
  RealVector eigenvalues;  // ascending, as found
};
IsqrtResult hermitian_isqrt(const Matrix& k, double rank_cutoff, double tol_psd);

// Linear independence over C of equally shaped matrices, decided by the
// singular values of the column-stacked coefficient matrix.
struct IndependenceReport {
  RealVector singular_values;  // descending
  int rank = 0;
  int count = 0;
  bool independent() const { return rank == count; }
  // A unit coefficient vector with sum_a kernel[a] * ops[a] ~ 0; only
  // populated when the family is dependent.
  Vector kernel;
};
IndependenceReport matrix_independence(const std::vector<Matrix>& ops,
                                       double rel_cutoff);

int rank_with_cutoff(const RealVector& descending_singulars, double rel_cutoff);

// Columns span ker(a) (right null space).
Matrix null_space(const Matrix& a, double rel_cutoff);
RealMatrix real_null_space(const RealMatrix& a, double rel_cutoff);

Vector vectorize(const Matrix& a);
Matrix unvectorize(const Vector& v, int rows, int cols);

// Orthonormal Hermitian basis of the n x n matrices (Hilbert-Schmidt).
std::vector<Matrix> hermitian_basis(int n);

}  // namespace covkit
