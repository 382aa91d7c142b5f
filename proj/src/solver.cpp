#include "covkit/solver.hpp"

#include <cmath>
#include <sstream>

#include "covkit/error.hpp"

namespace covkit {
namespace {

constexpr int kMaxCoordinates = 4096;  // N = #X * D^2 for the dense solver

RealVector encode_with(const std::vector<Matrix>& basis,
                       const std::vector<Matrix>& effects) {
  const int d2 = static_cast<int>(basis.size());
  RealVector theta(static_cast<Eigen::Index>(effects.size()) * d2);
  for (std::size_t x = 0; x < effects.size(); ++x) {
    for (int a = 0; a < d2; ++a) {
      theta(static_cast<Eigen::Index>(x) * d2 + a) =
          (basis[a].adjoint() * effects[x]).trace().real();
    }
  }
  return theta;
}

}  // namespace

std::vector<Matrix> SolverResult::decode(const RealVector& coords) const {
  const int d = system->dim();
  const int d2 = d * d;
  const int nx = system->num_points();
  if (coords.size() != static_cast<Eigen::Index>(nx) * d2) {
    fail_validation("decode: coordinate vector has wrong length");
  }
  const std::vector<Matrix> basis = hermitian_basis(d);
  std::vector<Matrix> effects(nx, Matrix::Zero(d, d));
  for (int x = 0; x < nx; ++x) {
    for (int a = 0; a < d2; ++a) {
      effects[x] += coords(static_cast<Eigen::Index>(x) * d2 + a) * basis[a];
    }
  }
  return effects;
}

RealVector SolverResult::encode(const std::vector<Matrix>& effects) const {
  if (static_cast<int>(effects.size()) != system->num_points()) {
    fail_validation("encode: expected one effect per point");
  }
  return encode_with(hermitian_basis(system->dim()), effects);
}

SolverResult solve_covariant(const SystemPtr& sys) {
  if (!sys) fail_validation("solve_covariant: null system");
  const int d = sys->dim();
  const int d2 = d * d;
  const GSpace& sp = sys->space();
  const int nx = sp.num_points;
  const Eigen::Index n = static_cast<Eigen::Index>(nx) * d2;
  if (n > kMaxCoordinates) {
    std::ostringstream os;
    os << "solve_covariant: coordinate space of size " << n
       << " exceeds the dense limit " << kMaxCoordinates;
    fail_validation(os.str());
  }
  const std::vector<Matrix> basis = hermitian_basis(d);

  // T = (1/#G) sum_g Gamma(g), where Gamma(g) conjugates by U(g) and
  // relabels points: block (g.y, y) of Gamma(g) is the orthogonal matrix
  // R(g)_{ab} = tr(B_a U(g) B_b U(g)*).
  RealMatrix t = RealMatrix::Zero(n, n);
  for (int g = 0; g < sp.group->order; ++g) {
    const Matrix& ug = sys->rep()(g);
    std::vector<Matrix> conj(d2);
    for (int b = 0; b < d2; ++b) conj[b] = ug * basis[b] * ug.adjoint();
    RealMatrix r(d2, d2);
    for (int a = 0; a < d2; ++a) {
      for (int b = 0; b < d2; ++b) {
        r(a, b) = (basis[a].adjoint() * conj[b]).trace().real();
      }
    }
    for (int y = 0; y < nx; ++y) {
      t.block(static_cast<Eigen::Index>(sp.act(g, y)) * d2,
              static_cast<Eigen::Index>(y) * d2, d2, d2) += r;
    }
  }
  t /= static_cast<double>(sp.group->order);
  t = 0.5 * (t + t.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<RealMatrix> es(t);
  if (es.info() != Eigen::Success) {
    fail_numerical("solve_covariant: eigendecomposition failed");
  }
  const RealVector& ev = es.eigenvalues();  // ascending
  SolverResult sr;
  sr.system = sys;
  sr.projector_spectrum = ev.reverse();
  double spectral_defect = 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    spectral_defect =
        std::max(spectral_defect, std::min(std::abs(ev(i)), std::abs(ev(i) - 1)));
    if (ev(i) > 0.5) ++rank;
  }
  if (spectral_defect > 1e-8) {
    std::ostringstream os;
    os << "solve_covariant: averaged operator is not a projector (defect "
       << spectral_defect << ")";
    fail_numerical(os.str());
  }
  sr.linear_dim = rank;
  sr.linear_basis = es.eigenvectors().rightCols(rank);

  // Normalization: sum_x theta_x = coords of the identity. The uniform
  // family is always a covariant solution; the free directions are the
  // covariant families with vanishing sum.
  RealVector id_coords(d2);
  for (int a = 0; a < d2; ++a) id_coords(a) = basis[a].trace().real();
  sr.particular = RealVector::Zero(n);
  for (int x = 0; x < nx; ++x) {
    sr.particular.segment(static_cast<Eigen::Index>(x) * d2, d2) =
        id_coords / nx;
  }

  RealMatrix a_restricted = RealMatrix::Zero(d2, rank);
  for (int j = 0; j < rank; ++j) {
    for (int x = 0; x < nx; ++x) {
      a_restricted.col(j) +=
          sr.linear_basis.col(j).segment(static_cast<Eigen::Index>(x) * d2,
                                         d2);
    }
  }
  const RealMatrix ker = real_null_space(a_restricted, sys->tol().rank_cutoff);
  sr.affine_dim = static_cast<int>(ker.cols());
  sr.affine_basis = sr.linear_basis * ker;
  return sr;
}

double linear_membership_defect(const SolverResult& sr,
                                const std::vector<Matrix>& effects) {
  const RealVector theta = sr.encode(effects);
  const double norm = std::max(theta.norm(), 1e-300);
  const RealVector proj =
      sr.linear_basis * (sr.linear_basis.transpose() * theta);
  return (theta - proj).norm() / norm;
}

double affine_membership_defect(const SolverResult& sr,
                                const std::vector<Matrix>& effects) {
  const RealVector theta = sr.encode(effects);
  const double norm = std::max(theta.norm(), 1e-300);
  const RealVector delta = theta - sr.particular;
  const RealVector proj =
      sr.affine_basis * (sr.affine_basis.transpose() * delta);
  return (delta - proj).norm() / norm;
}

}  // namespace covkit
