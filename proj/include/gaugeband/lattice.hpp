#ifndef GAUGEBAND_LATTICE_HPP_
#define GAUGEBAND_LATTICE_HPP_

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "gaugeband/error.hpp"

namespace gaugeband {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

//! Integer coordinates in the dual basis. Unused trailing components are 0.
using Mode = std::array<int, 2>;

//! Returns 2*pi * inverse-transpose of the basis matrix (columns are the
//! basis vectors), so that dual_j . basis_k = 2*pi*delta_jk.
inline Mat DualBasis(const Mat& basis) {
  Require(basis.rows() == basis.cols() && basis.rows() >= 1 && basis.rows() <= 2,
          "lattice dimension must be 1 or 2");
  double scale = 1.0;
  for (Eigen::Index k = 0; k < basis.cols(); ++k) scale *= basis.col(k).norm();
  const double det = basis.determinant();
  if (!(scale > 0.0) || std::abs(det) <= 1e-12 * scale) throw Error("degenerate lattice");
  return kTwoPi * basis.inverse().transpose();
}

//! A Bravais lattice in dimension 1 or 2 and its reciprocal lattice.
class Lattice {
 public:
  Lattice() : Lattice(Mat::Constant(1, 1, kTwoPi)) {}

  //! `basis` holds the lattice vectors as columns.
  explicit Lattice(Mat basis) : basis_(std::move(basis)), dual_(DualBasis(basis_)) {
    inverse_ = basis_.inverse();
  }

  //! Square (or 1D) lattice with the given period along every axis.
  static Lattice Cubic(int dim, double period = kTwoPi) {
    return Lattice(period * Mat::Identity(dim, dim));
  }

  int dim() const { return static_cast<int>(basis_.rows()); }
  const Mat& basis() const { return basis_; }
  const Mat& dual_basis() const { return dual_; }
  Vec vector(int k) const { return basis_.col(k); }

  Vec ToLatticeCoords(const Vec& x) const { return inverse_ * x; }
  Vec FromLatticeCoords(const Vec& s) const { return basis_ * s; }

  //! Cartesian reciprocal vector sum_k m_k beta*_k.
  Vec DualVector(const Mode& m) const {
    Vec mu = Vec::Zero(dim());
    for (int k = 0; k < dim(); ++k) mu += m[k] * dual_.col(k);
    return mu;
  }

  //! Reciprocal vector sum_k t_k beta*_k for real Brillouin coordinates.
  Vec Momentum(const Vec& t) const { return dual_ * t; }

  double CellVolume() const { return std::abs(basis_.determinant()); }

  //! Lattice vector sum_k g_k beta_k.
  Vec LatticePoint(const Mode& g) const {
    Vec x = Vec::Zero(dim());
    for (int k = 0; k < dim(); ++k) x += g[k] * basis_.col(k);
    return x;
  }

 private:
  Mat basis_;
  Mat dual_;
  Mat inverse_;
};

//! Representative of x modulo the lattice with lattice coordinates in
//! [-1/2, 1/2).
inline Vec FoldToCell(const Lattice& lattice, const Vec& x) {
  Vec s = lattice.ToLatticeCoords(x);
  for (Eigen::Index k = 0; k < s.size(); ++k) s[k] -= std::floor(s[k] + 0.5);
  return lattice.FromLatticeCoords(s);
}

//! Uniform grid of P^n nodes x = sum_k (p_k/P) beta_k on the fundamental
//! cell. Flat index is p_0 + P*p_1.
class TorusGrid {
 public:
  TorusGrid(Lattice lattice, int points_per_dim)
      : lattice_(std::move(lattice)), points_(points_per_dim) {
    Require(points_ >= 4 && (points_ & (points_ - 1)) == 0,
            "grid points per dimension must be a power of two >= 4");
    size_ = points_;
    if (lattice_.dim() == 2) size_ *= points_;
  }

  const Lattice& lattice() const { return lattice_; }
  int dim() const { return lattice_.dim(); }
  int points_per_dim() const { return points_; }
  int size() const { return size_; }

  Mode Index(int flat) const {
    Mode p{flat % points_, 0};
    if (dim() == 2) p[1] = flat / points_;
    return p;
  }
  int Flat(const Mode& p) const { return dim() == 2 ? p[0] + points_ * p[1] : p[0]; }

  //! Flat index of the node p + shift with periodic wrap.
  int Neighbor(int flat, const Mode& shift) const {
    Mode p = Index(flat);
    for (int k = 0; k < dim(); ++k) p[k] = ((p[k] + shift[k]) % points_ + points_) % points_;
    return Flat(p);
  }

  Vec Node(int flat) const {
    const Mode p = Index(flat);
    Vec s(dim());
    for (int k = 0; k < dim(); ++k) s[k] = static_cast<double>(p[k]) / points_;
    return lattice_.FromLatticeCoords(s);
  }

 private:
  Lattice lattice_;
  int points_;
  int size_;
};

//! Uniform sample of the Brillouin cell, t_k in (-1/2, 1/2].
struct BrillouinSample {
  Lattice lattice;
  int per_dim = 1;
  std::vector<Vec> coords;  // t, one entry per point
  std::vector<Vec> thetas;  // Cartesian momenta sum_k t_k beta*_k

  //! Flat index of the point whose per-axis grid index is shifted by `shift`,
  //! using periodicity of the Brillouin torus.
  int Neighbor(int flat, const Mode& shift) const {
    const int d = lattice.dim();
    Mode p{flat % per_dim, d == 2 ? flat / per_dim : 0};
    for (int k = 0; k < d; ++k) p[k] = ((p[k] + shift[k]) % per_dim + per_dim) % per_dim;
    return d == 2 ? p[0] + per_dim * p[1] : p[0];
  }
};

//! Brillouin coordinates j/K for j = -ceil(K/2)+1, ..., floor(K/2).
inline std::vector<double> BrillouinAxis(int per_dim) {
  Require(per_dim >= 1, "Brillouin sampling needs K >= 1");
  std::vector<double> t;
  const int lo = -((per_dim + 1) / 2) + 1;
  for (int j = lo; j <= per_dim / 2; ++j) t.push_back(static_cast<double>(j) / per_dim);
  return t;
}

inline BrillouinSample BrillouinGrid(const Lattice& lattice, int per_dim) {
  BrillouinSample out{lattice, per_dim, {}, {}};
  const std::vector<double> axis = BrillouinAxis(per_dim);
  const int d = lattice.dim();
  const int count = d == 2 ? per_dim * per_dim : per_dim;
  for (int flat = 0; flat < count; ++flat) {
    Vec t(d);
    t[0] = axis[flat % per_dim];
    if (d == 2) t[1] = axis[flat / per_dim];
    out.coords.push_back(t);
    out.thetas.push_back(lattice.Momentum(t));
  }
  return out;
}

}  // namespace gaugeband

#endif  // GAUGEBAND_LATTICE_HPP_
