#ifndef GAUGEBAND_AGMON_HPP_
#define GAUGEBAND_AGMON_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gaugeband/potential.hpp"

namespace gaugeband {

//! Degenerate Agmon metric sqrt(Veff)|dx| with Veff = v - |w| - E0 >= 0.
class Metric {
 public:
  static Metric FromPotential(const PauliPotential& pot, const WellData& well) {
    Metric m;
    m.lattice_ = pot.lattice();
    m.veff_ = [pot, E0 = well.E0](const Vec& x) { return pot.Lower(x) - E0; };
    m.tau_ = well.tau;
    m.axes_ = well.principal_axes;
    m.center_ = well.x_min;
    m.periodic_ = true;
    if (pot.dim() == 1) {
      const Series s = pot.LowerTaylor1D(well.x_min[0], 14);
      std::vector<double> q(s.coeffs().begin() + 2, s.coeffs().end());
      m.well_series_ = Series(std::move(q));
    }
    return m;
  }

  //! Veff = c^2 everywhere.
  static Metric Constant(const Lattice& lattice, double c) {
    Metric m;
    m.lattice_ = lattice;
    m.veff_ = [c](const Vec&) { return c * c; };
    m.constant_ = c;
    m.center_ = Vec::Zero(lattice.dim());
    return m;
  }

  //! Veff = sum_k tau_k^2 x_k^2 with a single well at 0 (not periodic).
  static Metric Harmonic(const Lattice& lattice, const Vec& tau) {
    Metric m;
    m.lattice_ = lattice;
    m.veff_ = [tau](const Vec& x) { return (tau.array() * x.array()).square().sum(); };
    m.tau_ = tau;
    m.axes_ = Mat::Identity(lattice.dim(), lattice.dim());
    m.center_ = Vec::Zero(lattice.dim());
    if (lattice.dim() == 1) m.well_series_ = Series({tau[0] * tau[0]});
    return m;
  }

  const Lattice& lattice() const { return lattice_; }
  int dim() const { return lattice_.dim(); }
  bool degenerate() const { return !constant_.has_value(); }

  double Veff(const Vec& x) const { return veff_(x); }

  //! sqrt(Veff), with rounding negatives down to -1e-10 clamped to 0.
  double C(const Vec& x) const {
    const double v = veff_(x);
    if (v < -1e-10) throw Error("E_0 inconsistent");
    return std::sqrt(std::max(v, 0.0));
  }

  //! Distance from a well (or any point, for a constant metric) to well + dx,
  //! valid for small dx.
  double LocalDistance(const Vec& dx) const {
    if (constant_) return *constant_ * dx.norm();
    const Vec y = axes_.transpose() * dx;
    return 0.5 * (tau_.array() * y.array().square()).sum();
  }

  //! Wells x with a <= x <= b (1D).
  std::vector<double> WellsIn(double a, double b) const {
    std::vector<double> out;
    if (constant_) return out;
    const double c = center_[0];
    if (!periodic_) {
      if (c >= a && c <= b) out.push_back(c);
      return out;
    }
    const double period = std::abs(lattice_.basis()(0, 0));
    for (double x = c + std::ceil((a - c) / period) * period; x <= b; x += period) out.push_back(x);
    return out;
  }

  //! Veff(x0 + t) / t^2 as a series about a well x0 (1D).
  const std::optional<Series>& well_series() const { return well_series_; }

 private:
  Lattice lattice_;
  std::function<double(const Vec&)> veff_;
  std::optional<double> constant_;
  Vec tau_;
  Mat axes_;
  Vec center_;
  bool periodic_ = false;
  std::optional<Series> well_series_;
};

//! Agmon distance between a and b on the line: |int_a^b sqrt(Veff)|.
inline double Agmon1D(const Metric& metric, double a, double b) {
  Require(metric.dim() == 1, "Agmon1D needs a 1D metric");
  if (a > b) std::swap(a, b);
  if (a == b) return 0.0;
  std::vector<double> knots{a};
  for (double x : metric.WellsIn(a, b))
    if (x > a && x < b) knots.push_back(x);
  knots.push_back(b);
  const std::vector<double> wells = metric.WellsIn(a - 1.0, b + 1.0);
  constexpr double kSeriesRadius = 1e-3;
  auto integrand = [&](double x) {
    if (metric.well_series())
      for (double x0 : wells)
        if (std::abs(x - x0) < kSeriesRadius) {
          const double t = x - x0;
          const double q = (*metric.well_series())(t);
          if (q < -1e-10) throw Error("E_0 inconsistent");
          return std::abs(t) * std::sqrt(std::max(q, 0.0));
        }
    Vec y(1);
    y[0] = x;
    return metric.C(y);
  };
  double total = 0.0;
  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, knots[i], knots[i + 1], 15, 1e-10);
  }
  return total;
}

inline double Agmon1D(const PauliPotential& pot, const WellData& well, double a, double b) {
  return Agmon1D(Metric::FromPotential(pot, well), a, b);
}

//! Square Cartesian node set x = i dx, |i_k| <= half, covering the lattice
//! points with coordinates in [-1.5, 1.5]^n. dx = min |beta_k| / Q.
struct EikonalDomain {
  Lattice lattice;
  int Q = 0;
  double dx = 0.0;
  int half = 0;

  int dim() const { return lattice.dim(); }
  int side() const { return 2 * half + 1; }
  int size() const { return dim() == 2 ? side() * side() : side(); }
  Mode Index(int flat) const {
    return dim() == 2 ? Mode{flat % side() - half, flat / side() - half} : Mode{flat - half, 0};
  }
  int Flat(const Mode& i) const {
    return dim() == 2 ? (i[0] + half) + side() * (i[1] + half) : i[0] + half;
  }
  bool Contains(const Mode& i) const {
    for (int k = 0; k < dim(); ++k)
      if (std::abs(i[k]) > half) return false;
    return true;
  }
  Vec Node(int flat) const {
    const Mode i = Index(flat);
    Vec x(dim());
    for (int k = 0; k < dim(); ++k) x[k] = i[k] * dx;
    return x;
  }
};

inline EikonalDomain MakeEikonalDomain(const Lattice& lattice, int Q) {
  Require(Q >= 4, "eikonal resolution Q must be >= 4");
  double shortest = std::numeric_limits<double>::infinity(), extent = 0.0;
  for (int k = 0; k < lattice.dim(); ++k) shortest = std::min(shortest, lattice.vector(k).norm());
  for (int j = 0; j < lattice.dim(); ++j) {
    double e = 0.0;
    for (int k = 0; k < lattice.dim(); ++k) e += 1.5 * std::abs(lattice.basis()(j, k));
    extent = std::max(extent, e);
  }
  EikonalDomain d{lattice, Q, shortest / Q, 0};
  d.half = static_cast<int>(std::ceil(extent / d.dx - 1e-9));
  return d;
}

struct AgmonField {
  EikonalDomain domain;
  std::vector<double> d;
  std::vector<double> c;
  std::vector<Vec> sources;

  //! Multilinear interpolation of d at x.
  double At(const Vec& x) const {
    const int n = domain.dim();
    std::array<int, 2> base{0, 0};
    std::array<double, 2> frac{0.0, 0.0};
    for (int k = 0; k < n; ++k) {
      const double s = x[k] / domain.dx;
      base[k] = std::clamp(static_cast<int>(std::floor(s)), -domain.half, domain.half - 1);
      frac[k] = s - base[k];
    }
    double acc = 0.0;
    for (int a = 0; a <= 1; ++a)
      for (int b = 0; b <= (n == 2 ? 1 : 0); ++b) {
        const double wgt = (a ? frac[0] : 1.0 - frac[0]) * (n == 2 ? (b ? frac[1] : 1.0 - frac[1]) : 1.0);
        if (wgt == 0.0) continue;
        acc += wgt * d[domain.Flat(Mode{base[0] + a, base[1] + b})];
      }
    return acc;
  }

  //! Gradient of the interpolated field by central differences.
  Vec Gradient(const Vec& x) const {
    Vec g(domain.dim());
    const double e = domain.dx;
    for (int k = 0; k < domain.dim(); ++k) {
      Vec p = x, m = x;
      p[k] += e;
      m[k] -= e;
      g[k] = (At(p) - At(m)) / (2.0 * e);
    }
    return g;
  }
};

//! First-order upwind fast marching for |grad d| = c. Nodes within three
//! spacings of a source start from the local distance of the metric.
inline AgmonField FastMarch(const EikonalDomain& domain, const Metric& metric,
                            const std::vector<Vec>& sources) {
  const int N = domain.size(), n = domain.dim();
  const double dx = domain.dx;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  AgmonField f{domain, std::vector<double>(N, kInf), std::vector<double>(N), sources};
  for (int i = 0; i < N; ++i) f.c[i] = metric.C(domain.Node(i));

  enum State : char { kFar, kTrial, kAccepted };
  std::vector<State> state(N, kFar);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;

  const double halo = 3.0 * dx * (1.0 + 1e-12);
  for (const Vec& s : sources) {
    Mode lo{0, 0}, hi{0, 0};
    for (int k = 0; k < n; ++k) {
      lo[k] = static_cast<int>(std::floor((s[k] - halo) / dx));
      hi[k] = static_cast<int>(std::ceil((s[k] + halo) / dx));
    }
    for (int a = lo[0]; a <= hi[0]; ++a)
      for (int b = lo[1]; b <= hi[1]; ++b) {
        const Mode idx{a, n == 2 ? b : 0};
        if (!domain.Contains(idx)) continue;
        const int flat = domain.Flat(idx);
        const Vec dxv = domain.Node(flat) - s;
        if (dxv.norm() > halo) continue;
        f.d[flat] = std::min(f.d[flat], metric.LocalDistance(dxv));
        state[flat] = kAccepted;
      }
  }
  for (int i = 0; i < N; ++i)
    if (state[i] == kAccepted) heap.push({f.d[i], i});

  auto update = [&](int p) {
    const Mode ip = domain.Index(p);
    double best = kInf;
    std::array<double, 2> up{kInf, kInf}, cu{0.0, 0.0};
    for (int k = 0; k < n; ++k)
      for (int sgn : {-1, 1}) {
        Mode q = ip;
        q[k] += sgn;
        if (!domain.Contains(q)) continue;
        const int fq = domain.Flat(q);
        if (state[fq] != kAccepted) continue;
        if (f.d[fq] < up[k]) {
          up[k] = f.d[fq];
          cu[k] = f.c[fq];
        }
      }
    for (int k = 0; k < n; ++k)
      if (up[k] < kInf) best = std::min(best, up[k] + 0.5 * dx * (f.c[p] + cu[k]));
    if (n == 2 && up[0] < kInf && up[1] < kInf) {
      const double c = 0.5 * (f.c[p] + 0.5 * (cu[0] + cu[1]));
      const double diff = up[0] - up[1];
      const double disc = 2.0 * c * c * dx * dx - diff * diff;
      if (disc >= 0.0) {
        const double cand = 0.5 * (up[0] + up[1] + std::sqrt(disc));
        if (cand >= std::max(up[0], up[1])) best = std::min(best, cand);
      }
    }
    return best;
  };

  while (!heap.empty()) {
    const auto [val, p] = heap.top();
    heap.pop();
    if (val > f.d[p]) continue;
    if (state[p] != kAccepted) state[p] = kAccepted;
    const Mode ip = domain.Index(p);
    for (int k = 0; k < n; ++k)
      for (int sgn : {-1, 1}) {
        Mode q = ip;
        q[k] += sgn;
        if (!domain.Contains(q)) continue;
        const int fq = domain.Flat(q);
        if (state[fq] == kAccepted) continue;
        const double cand = update(fq);
        if (cand < f.d[fq]) {
          f.d[fq] = cand;
          state[fq] = kTrial;
          heap.push({cand, fq});
        }
      }
  }
  return f;
}

//! Lattice translates {0, +-beta_k, +-beta_j +- beta_k} of a point.
inline std::vector<Vec> LatticeNeighborhood(const Lattice& lattice, const Vec& x0) {
  std::vector<Vec> out;
  const int n = lattice.dim();
  for (int a = -1; a <= 1; ++a)
    for (int b = (n == 2 ? -1 : 0); b <= (n == 2 ? 1 : 0); ++b)
      out.push_back(x0 + lattice.LatticePoint(Mode{a, b}));
  return out;
}

struct LeastAction {
  double S0 = 0.0;
  std::vector<Vec> argmin;  // lattice vectors attaining S0 within relative 1e-3
};

//! S0 = min over +-beta_k of d_0(omega), from a field sourced at the well at 0.
inline LeastAction ComputeLeastAction(const AgmonField& field) {
  const Lattice& L = field.domain.lattice;
  std::vector<std::pair<double, Vec>> cands;
  for (int k = 0; k < L.dim(); ++k)
    for (int sgn : {-1, 1}) {
      const Vec w = sgn * L.vector(k);
      cands.push_back({field.At(w), w});
    }
  LeastAction out{std::numeric_limits<double>::infinity(), {}};
  for (const auto& c : cands) out.S0 = std::min(out.S0, c.first);
  for (const auto& c : cands)
    if (c.first <= out.S0 * (1.0 + 1e-3)) out.argmin.push_back(c.second);
  return out;
}

//! 1D least action from quadrature.
inline LeastAction ComputeLeastAction1D(const Metric& metric, double x_min = 0.0) {
  const double beta = std::abs(metric.lattice().basis()(0, 0));
  const double right = Agmon1D(metric, x_min, x_min + beta);
  const double left = Agmon1D(metric, x_min - beta, x_min);
  LeastAction out{std::min(left, right), {}};
  if (left <= out.S0 * (1.0 + 1e-3)) out.argmin.push_back(Vec::Constant(1, -beta));
  if (right <= out.S0 * (1.0 + 1e-3)) out.argmin.push_back(Vec::Constant(1, beta));
  return out;
}

//! Steepest-descent backtrace of d from `target` to the nearest source.
inline std::vector<Vec> GeodesicTrace(const AgmonField& field, const Vec& target) {
  const EikonalDomain& dom = field.domain;
  const double dx = dom.dx;
  const double diameter = 2.0 * dom.half * dx * std::sqrt(double(dom.dim()));
  const int limit = static_cast<int>(10.0 * diameter / dx);
  std::vector<Vec> path{target};
  Vec x = target;
  auto nearest_source = [&](const Vec& y) {
    const Vec* best = &field.sources.front();
    for (const Vec& s : field.sources)
      if ((s - y).norm() < (*best - y).norm()) best = &s;
    return *best;
  };
  for (int step = 0; step < limit; ++step) {
    const Vec s = nearest_source(x);
    if ((x - s).norm() <= 3.0 * dx) {
      path.push_back(s);
      return path;
    }
    Vec g = field.Gradient(x);
    const double gn = g.norm();
    if (!(gn > 0.0)) g = s - x;  // flat region: head for the source
    else g = -g / gn;
    x += 0.5 * dx * g.normalized();
    path.push_back(x);
  }
  throw Error("trapped trace (degenerate metric region)");
}

//! CSV rows (x_1..x_n, c, d).
inline void WriteAgmonCsv(std::ostream& os, const AgmonField& f) {
  const int n = f.domain.dim();
  for (int k = 0; k < n; ++k) os << "x" << k << ",";
  os << "c,d\n";
  os.precision(17);
  for (int i = 0; i < f.domain.size(); ++i) {
    const Vec x = f.domain.Node(i);
    for (int k = 0; k < n; ++k) os << x[k] << ",";
    os << f.c[i] << "," << f.d[i] << "\n";
  }
}

}  // namespace gaugeband

#endif  // GAUGEBAND_AGMON_HPP_
