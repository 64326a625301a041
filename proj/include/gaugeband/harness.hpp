#ifndef GAUGEBAND_HARNESS_HPP_
#define GAUGEBAND_HARNESS_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gaugeband/agmon.hpp"
#include "gaugeband/bloch.hpp"
#include "gaugeband/config.hpp"
#include "gaugeband/fitting.hpp"
#include "gaugeband/gauge.hpp"
#include "gaugeband/potential.hpp"
#include "gaugeband/report.hpp"
#include "gaugeband/tunneling.hpp"
#include "gaugeband/wkb.hpp"

namespace gaugeband {

//! Potential translated to its well, with the Coulomb-gauge bundle on demand.
struct Pipeline {
  PauliPotential pot;
  WellData well;
  TorusGrid grid;
  std::optional<UnitaryField> U;
  std::optional<GaugeBundle> gb;  // Coulomb gauge
  double min_norm_w = 0.0;

  static Pipeline Prepare(const ExperimentConfig& c, bool with_gauge) {
    const PauliPotential raw = c.Potential();
    TorusGrid grid(raw.lattice(), c.P);
    const ValidationReport rep = ValidateModel(raw, grid);
    if (!rep.passed) throw Error("model validation failed: " + rep.failures.front());
    const WellData w0 = FindWell(raw, grid);
    Pipeline p{ShiftToOrigin(raw, w0), {}, grid, std::nullopt, std::nullopt, rep.min_norm_w};
    p.well = FindWell(p.pot, grid);
    if (p.well.x_min.norm() > 1e-10) throw AssertionFailure("shifted well is not at the origin");
    p.well.x_min.setZero();
    if (with_gauge) {
      p.U = BuildUnitary(p.pot, grid, ParseBranch(c.branch));
      p.gb = CoulombTransform(InducedGauge(*p.U, p.pot));
    }
    return p;
  }
};

namespace detail {

inline nlohmann::json ToJsonVec(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// theta = 0 and the zone corner t = (1/2, ..., 1/2).
inline std::vector<Vec> ProbeThetas(const Lattice& lattice) {
  return {Vec::Zero(lattice.dim()), lattice.Momentum(Vec::Constant(lattice.dim(), 0.5))};
}

inline void RequireDecreasing(const std::vector<double>& hs) {
  for (size_t i = 1; i < hs.size(); ++i)
    Require(hs[i] < hs[i - 1], "h_list must be strictly decreasing");
}

inline std::filesystem::path OutPath(const ExperimentConfig& c, const std::string& file) {
  return std::filesystem::path(c.out_dir) / file;
}

inline double DistanceToSet(double x, const std::vector<double>& s) {
  double d = std::numeric_limits<double>::infinity();
  for (double y : s) d = std::min(d, std::abs(x - y));
  return d;
}

// Eigenvalues of F below `top`, plus one more so the window edge is covered.
inline std::vector<double> EigenvaluesBelow(const FiberOperator& F, double top) {
  int count = std::min<int>(16, static_cast<int>(F.matrix.rows()));
  while (true) {
    std::vector<double> lv = LowestEigenvalues(F, count);
    if (lv.back() >= top || count == F.matrix.rows()) return lv;
    count = std::min<int>(2 * count, static_cast<int>(F.matrix.rows()));
  }
}

}  // namespace detail

//! S0 of the pipeline potential: quadrature in 1D, fast marching in 2D.
inline LeastAction PipelineLeastAction(const Pipeline& p, int Q) {
  const Metric m = Metric::FromPotential(p.pot, p.well);
  if (p.pot.dim() == 1) return ComputeLeastAction1D(m);
  return ComputeLeastAction(FastMarch(MakeEikonalDomain(p.pot.lattice(), Q), m, {p.well.x_min}));
}

inline void RunValidate(const ExperimentConfig& c, Report& rep) {
  const PauliPotential pot = c.Potential();
  const TorusGrid grid(pot.lattice(), c.P);
  const ValidationReport v = ValidateModel(pot, grid);
  auto& r = rep.results();
  r["min_norm_w"] = v.min_norm_w;
  r["local_minima"] = v.local_minima;
  r["min_hessian_eig"] = v.min_hessian_eig;
  r["failures"] = v.failures;
  if (v.passed) {
    const WellData w = FindWell(pot, grid);
    r["x_min"] = detail::ToJsonVec(w.x_min);
    r["E0"] = w.E0;
    r["tau"] = detail::ToJsonVec(w.tau);
  }
  rep.AddCheck("assumptions", v.passed, {{"failures", v.failures}});
}

inline void RunBands(const ExperimentConfig& c, Report& rep) {
  const Pipeline p = Pipeline::Prepare(c, false);
  const std::vector<double> hs = c.HList();
  const std::vector<double> mu = HarmonicLevels(p.well.tau, c.j_max);
  const DirectModel model(p.pot, c.M);
  auto& r = rep.results();
  r["E0"] = p.well.E0;
  r["mu"] = mu;
  std::vector<BandSweep> sweeps;
  for (double h : hs) sweeps.push_back(SweepBands(model, h, c.K, c.j_max));
  WriteAtomically(detail::OutPath(c, "bands.csv"), [&](std::ostream& os) {
    for (size_t i = 0; i < sweeps.size(); ++i) WriteSweepCsv(os, sweeps[i], i == 0);
  });

  nlohmann::json stats = nlohmann::json::array();
  std::vector<std::vector<double>> dev(c.j_max);
  double lipschitz = 0.0;
  for (const BandSweep& s : sweeps) {
    for (const BandStats& b : s.stats) {
      const double d = std::abs(b.center - (p.well.E0 + s.h * mu[b.j - 1]));
      dev[b.j - 1].push_back(d);
      stats.push_back({{"h", s.h}, {"j", b.j}, {"min", b.min}, {"max", b.max}, {"center", b.center},
                       {"width", b.width}, {"center_deviation", d}, {"deviation_over_h2", d / (s.h * s.h)}});
    }
    for (int t = 0; t < static_cast<int>(s.levels.size()); ++t)
      for (int k = 0; k < p.pot.dim(); ++k) {
        Mode step{0, 0};
        step[k] = 1;
        const int u = s.thetas.Neighbor(t, step);
        if (s.thetas.coords[u][k] <= s.thetas.coords[t][k]) continue;  // wrap-around pair
        const double dtheta = (s.thetas.thetas[u] - s.thetas.thetas[t]).norm();
        for (size_t j = 0; j < s.levels[t].size(); ++j)
          lipschitz = std::max(lipschitz, std::abs(s.levels[u][j] - s.levels[t][j]) / dtheta);
      }
  }
  r["band_stats"] = stats;
  r["theta_lipschitz"] = lipschitz;

  if (hs.size() >= 3) {
    for (int j = 0; j < std::min(2, c.j_max); ++j) {
      const PowerFit f = FitPower(hs, dev[j]);
      r["center_fit"].push_back({{"j", j + 1}, {"exponent", f.exponent}, {"constant", f.constant},
                                 {"residual", f.residual}});
      rep.AddCheck("center_exponent_j" + std::to_string(j + 1), f.exponent >= c.thresholds.exponent_min,
                   {{"exponent", f.exponent}, {"min", c.thresholds.exponent_min}});
    }
  } else {
    rep.Warn("fewer than 3 h values: no exponent fit");
  }

  const double h = hs.back();
  const Vec theta = Vec::Zero(p.pot.dim());
  const double l1 = LowestEigenvalues(model.Assemble(h, theta), 1)[0];
  const double l2 = LowestEigenvalues(DirectModel(p.pot, 2 * c.M).Assemble(h, theta), 1)[0];
  r["cutoff_convergence"] = {{"h", h}, {"M", c.M}, {"difference", std::abs(l1 - l2)}};
  rep.AddCheck("cutoff_convergence", std::abs(l1 - l2) <= 1e-9, {{"difference", std::abs(l1 - l2)}});
}

inline void RunReduce(const ExperimentConfig& c, Report& rep) {
  const Pipeline p = Pipeline::Prepare(c, true);
  const std::vector<double> hs = c.HList();
  Require(c.window_c > 0.0 && c.window_c < 1.0, "window_c must lie in (0, 1)");
  const double cw = c.window_c * p.min_norm_w;
  const double top = p.well.E0 + 2.0 * cw;
  const DirectModel direct(p.pot, c.M);
  const ScalarModel scalar(MakeBlockSymbols(*p.gb), 11, c.M);
  auto& r = rep.results();
  r["c"] = cw;
  r["window_top"] = top;

  // dist[side][h][j]: max over probe thetas of the distance of eigenvalue j (of
  // direct for side 0, scalar11 for side 1) to the other spectrum.
  const size_t nh = hs.size();
  std::vector<std::vector<std::vector<double>>> dist(2, std::vector<std::vector<double>>(nh));
  std::vector<double> window_max(nh, 0.0);
  nlohmann::json rows = nlohmann::json::array();
  for (size_t i = 0; i < nh; ++i) {
    const double h = hs[i];
    for (const Vec& theta : detail::ProbeThetas(p.pot.lattice())) {
      const std::vector<double> a = detail::EigenvaluesBelow(direct.Assemble(h, theta), top);
      const std::vector<double> b = detail::EigenvaluesBelow(scalar.Assemble(h, theta), top);
      for (int side = 0; side < 2; ++side) {
        const auto& from = side == 0 ? a : b;
        const auto& to = side == 0 ? b : a;
        for (size_t j = 0; j < from.size(); ++j) {
          if (from[j] >= top) break;
          const double d = detail::DistanceToSet(from[j], to);
          if (dist[side][i].size() <= j) dist[side][i].resize(j + 1, 0.0);
          dist[side][i][j] = std::max(dist[side][i][j], d);
          window_max[i] = std::max(window_max[i], d);
          rows.push_back({h, detail::ToJsonVec(theta), side == 0 ? "direct" : "scalar11", j + 1, from[j], d});
        }
      }
    }
  }
  WriteAtomically(detail::OutPath(c, "reduce.csv"), [&](std::ostream& os) {
    os << "h,theta,side,j,lambda,distance\n";
    os.precision(17);
    for (const auto& row : rows) {
      os << row[0].get<double>() << ",";
      for (size_t k = 0; k < row[1].size(); ++k) os << (k ? " " : "") << row[1][k].get<double>();
      os << "," << row[2].get<std::string>() << "," << row[3].get<int>() << "," << row[4].get<double>() << ","
         << row[5].get<double>() << "\n";
    }
  });

  double c0 = 0.0;
  for (size_t i = 0; i < nh; ++i) c0 = std::max(c0, window_max[i] / (hs[i] * hs[i]));
  r["window_max_distance"] = window_max;
  r["C0_fit"] = c0;
  if (nh >= 3) {
    bool positive = std::all_of(window_max.begin(), window_max.end(), [](double d) { return d > 0.0; });
    if (positive) r["window_max_exponent"] = FitPower(hs, window_max).exponent;

    // Families: eigenvalue index j inside the window at every h.
    int families = 0;
    for (int side = 0; side < 2; ++side) {
      size_t jmax = dist[side][0].size();
      for (size_t i = 1; i < nh; ++i) jmax = std::min(jmax, dist[side][i].size());
      for (size_t j = 0; j < jmax; ++j) {
        std::vector<double> ys;
        for (size_t i = 0; i < nh; ++i) ys.push_back(std::max(dist[side][i][j], 1e-300));
        const PowerFit f = FitPower(hs, ys);
        const std::string name = std::string(side == 0 ? "direct" : "scalar11") + "_j" + std::to_string(j + 1);
        r["family_fits"].push_back({{"side", side == 0 ? "direct" : "scalar11"}, {"j", j + 1},
                                    {"distances", ys}, {"exponent", f.exponent}, {"constant", f.constant}});
        rep.AddCheck("distance_exponent_" + name, f.exponent >= c.thresholds.exponent_min,
                     {{"exponent", f.exponent}, {"min", c.thresholds.exponent_min}});
        ++families;
      }
    }
    if (families == 0) rep.AddCheck("eigenvalue_family_in_window", false, {{"window_top", top}});
  } else {
    rep.Warn("fewer than 3 h values: no exponent fit");
  }
}

inline void RunGaugeCheck(const ExperimentConfig& c, Report& rep) {
  const Pipeline p = Pipeline::Prepare(c, true);
  const GaugeBundle& gb = *p.gb;
  auto& r = rep.results();
  r["branch"] = BranchName(p.U->branch);
  WriteAtomically(detail::OutPath(c, "gauge.csv"), [&](std::ostream& os) { WriteGaugeCsv(os, *p.U, gb); });

  const DirectModel direct(p.pot, c.M);
  const GaugedModel gauged(gb, c.M);
  const int count = std::min(10, direct.dimension());
  double worst = 0.0, herm = 0.0;
  for (double h : c.HList())
    for (const Vec& theta : detail::ProbeThetas(p.pot.lattice())) {
      const FiberOperator G = gauged.Assemble(h, theta);
      herm = std::max(herm, (G.matrix - G.matrix.adjoint()).cwiseAbs().maxCoeff() /
                                std::max(G.matrix.cwiseAbs().maxCoeff(), 1e-300));
      const std::vector<double> a = LowestEigenvalues(direct.Assemble(h, theta), count);
      const std::vector<double> b = LowestEigenvalues(G, count);
      double d = 0.0;
      for (int j = 0; j < count; ++j) d = std::max(d, std::abs(a[j] - b[j]));
      worst = std::max(worst, d);
      r["equivalence"].push_back({{"h", h}, {"theta", detail::ToJsonVec(theta)}, {"max_difference", d}});
    }
  r["hermiticity_residual"] = herm;
  rep.AddCheck("gauge_equivalence", worst <= c.thresholds.gauge_equivalence,
               {{"max_difference", worst}, {"tolerance", c.thresholds.gauge_equivalence}});

  bool constant_w = true;
  for (int k = 0; k < 3; ++k) constant_w = constant_w && p.pot.w(k).Degree() == 0;
  if (constant_w) {
    // H = h^2 (D - theta)^2 + v +- |w| decouples into two scalar operators.
    const BlockSymbols bs = MakeBlockSymbols(gb);
    const ScalarModel lower(bs, 11, c.M), upper(bs, 22, c.M);
    const BrillouinSample bz = BrillouinGrid(p.pot.lattice(), c.K);
    double d = 0.0;
    for (double h : c.HList())
      for (const Vec& theta : bz.thetas) {
        const std::vector<double> full = LowestEigenvalues(direct.Assemble(h, theta), count);
        std::vector<double> u = LowestEigenvalues(lower.Assemble(h, theta), count);
        const std::vector<double> u2 = LowestEigenvalues(upper.Assemble(h, theta), count);
        u.insert(u.end(), u2.begin(), u2.end());
        std::sort(u.begin(), u.end());
        for (int j = 0; j < count; ++j) d = std::max(d, std::abs(full[j] - u[j]));
      }
    r["decoupling_max_difference"] = d;
    rep.AddCheck("decoupling", d <= c.thresholds.decoupling,
                 {{"max_difference", d}, {"tolerance", c.thresholds.decoupling}});
  }
}

inline void RunAgmon(const ExperimentConfig& c, Report& rep) {
  const Pipeline p = Pipeline::Prepare(c, false);
  const Lattice& L = p.pot.lattice();
  const Metric m = Metric::FromPotential(p.pot, p.well);
  const EikonalDomain dom = MakeEikonalDomain(L, c.Q);
  const AgmonField field = FastMarch(dom, m, {p.well.x_min});
  const LeastAction la = ComputeLeastAction(field);
  auto& r = rep.results();
  r["dx"] = dom.dx;
  r["S0_fmm"] = la.S0;
  r["argmin_multiplicity"] = la.argmin.size();
  for (const Vec& w : la.argmin) r["argmin"].push_back(detail::ToJsonVec(w));
  WriteAtomically(detail::OutPath(c, "agmon.csv"), [&](std::ostream& os) { WriteAgmonCsv(os, field); });
  const std::vector<Vec> path = GeodesicTrace(field, la.argmin.front());
  WriteAtomically(detail::OutPath(c, "geodesic.csv"), [&](std::ostream& os) {
    for (int k = 0; k < L.dim(); ++k) os << (k ? "," : "") << "x" << k;
    os << "\n";
    os.precision(17);
    for (const Vec& x : path) {
      for (int k = 0; k < L.dim(); ++k) os << (k ? "," : "") << x[k];
      os << "\n";
    }
  });

  // Constant metric: d(omega) = |omega| up to the first-order scheme error.
  const AgmonField flat = FastMarch(dom, Metric::Constant(L, 1.0), {Vec::Zero(L.dim())});
  double flat_err = 0.0;
  for (const Vec& w : LatticeNeighborhood(L, Vec::Zero(L.dim()))) flat_err = std::max(flat_err, std::abs(flat.At(w) - w.norm()));
  r["constant_metric_error"] = flat_err;
  rep.AddCheck("constant_metric_oracle", flat_err <= 2.0 * dom.dx, {{"error", flat_err}, {"bound", 2.0 * dom.dx}});

  if (L.dim() == 1) {
    const double quad = ComputeLeastAction1D(m).S0;
    r["S0_quadrature"] = quad;
    rep.AddCheck("fmm_vs_quadrature", std::abs(la.S0 - quad) <= c.thresholds.fmm_quadrature,
                 {{"difference", std::abs(la.S0 - quad)}, {"tolerance", c.thresholds.fmm_quadrature}});
  }
  if (c.expect.S0) {
    const double rel = std::abs(la.S0 / *c.expect.S0 - 1.0);
    rep.AddCheck("S0_expected", rel <= c.thresholds.S0_rel, {{"relative_error", rel}, {"expected", *c.expect.S0}});
  }
  if (c.expect.multiplicity)
    rep.AddCheck("argmin_multiplicity", static_cast<int>(la.argmin.size()) == *c.expect.multiplicity,
                 {{"found", la.argmin.size()}, {"expected", *c.expect.multiplicity}});
}

inline void RunWkb(const ExperimentConfig& c, Report& rep) {
  const Pipeline p = Pipeline::Prepare(c, true);
  const WKBCoefficients wc = ComputeWKBCoefficients(p.well, *p.gb, c.j_max);
  auto& r = rep.results();
  r["e0"] = wc.e0;
  r["e1"] = wc.e1;
  r["e2_simplified"] = wc.e2_simplified;
  r["mu"] = wc.mu;

  std::optional<double> e2_full;
  if (p.pot.dim() == 1) {
    const TransportSolution1D ts(p.pot, p.well, *p.gb, c.transport_x_c, c.transport_nodes);
    e2_full = E2Full1D(ts);
    r["e2_full"] = *e2_full;
    WriteAtomically(detail::OutPath(c, "transport.csv"), [&](std::ostream& os) { ts.WriteCsv(os); });
  }

  const std::vector<double> hs = c.HList();
  detail::RequireDecreasing(hs);
  const DirectModel model(p.pot, c.M);
  std::vector<double> q;
  for (double h : hs) {
    const double l1 = LowestEigenvalues(model.Assemble(h, Vec::Zero(p.pot.dim())), 1)[0];
    q.push_back((l1 - wc.e0 - h * wc.e1) / (h * h));
    r["samples"].push_back({{"h", h}, {"lambda1", l1}, {"scaled_remainder", q.back()}});
  }
  const Extrapolation ex = Richardson(hs, q, c.richardson_order);
  r["e2_limit"] = ex.limit;
  r["e2_limit_error"] = ex.error;
  const double tol_s = c.thresholds.e2_simplified_rel * std::abs(ex.limit);
  r["e2_simplified_agrees"] = std::abs(wc.e2_simplified - ex.limit) <= tol_s;
  if (e2_full) {
    const double rel = std::abs(ex.limit - *e2_full) / std::max(std::abs(*e2_full), 1e-300);
    r["e2_full_relative_error"] = rel;
    r["e2_full_within_error_estimate"] = std::abs(ex.limit - *e2_full) <= ex.error;
    rep.AddCheck("e2_full_vs_spectrum", rel <= c.thresholds.e2_rel, {{"relative_error", rel}, {"tolerance", c.thresholds.e2_rel}});
  }
}

namespace detail {

struct TunnelingRow {
  double h = 0.0;
  std::optional<double> width, gap;
  std::optional<cplx> rho;
  std::optional<double> predicted;
};

inline void WriteTunnelingCsv(const std::filesystem::path& path, const std::vector<TunnelingRow>& rows) {
  WriteAtomically(path, [&](std::ostream& os) {
    os << "h,width,dirichlet_gap,rho_tot_re,rho_tot_im,predicted_width\n";
    os.precision(17);
    auto opt = [&](const std::optional<double>& v) {
      if (v) os << *v;
    };
    for (const TunnelingRow& t : rows) {
      os << t.h << ",";
      opt(t.width);
      os << ",";
      opt(t.gap);
      os << ",";
      if (t.rho) os << t.rho->real();
      os << ",";
      if (t.rho) os << t.rho->imag();
      os << ",";
      opt(t.predicted);
      os << "\n";
    }
  });
}

}  // namespace detail

inline void RunWidths(const ExperimentConfig& c, Report& rep) {
  const Pipeline p = Pipeline::Prepare(c, false);
  const std::vector<double> hs = c.HList();
  const double S0 = PipelineLeastAction(p, c.Q).S0;
  auto& r = rep.results();
  r["S0"] = S0;
  std::vector<std::string> warnings;
  const std::vector<WidthSample> samples = WidthScan(p.pot, hs, c.K, c.M, &warnings);
  for (const auto& w : warnings) rep.Warn(w);
  std::vector<detail::TunnelingRow> rows;
  for (const auto& s : samples) {
    rows.push_back({s.h, s.width, std::nullopt, std::nullopt, std::nullopt});
    r["widths"].push_back({{"h", s.h}, {"width", s.width}});
  }

  const WidthFit fit = FitWidthLaw(samples, S0);
  const double rel = std::abs(fit.S_fit / S0 - 1.0);
  r["fit"] = {{"S_fit", fit.S_fit},
              {"eta0_fit", fit.eta0_fit},
              {"S_plain", fit.S_plain},
              {"residual_half_power", fit.residual_half_power},
              {"residual_plain", fit.residual_plain},
              {"residual_power", fit.residual_power},
              {"half_power_preferred", fit.half_power_preferred},
              {"exponential_regime", fit.exponential_regime},
              {"samples_used", fit.samples.size()}};
  rep.AddCheck("S_fit_vs_S0", rel <= c.thresholds.width_S_rel, {{"relative_error", rel}, {"tolerance", c.thresholds.width_S_rel}});
  rep.AddCheck("exponential_regime", fit.exponential_regime);

  // Model selection on exact synthetic data at the same h values.
  std::vector<WidthSample> synthetic;
  for (const auto& s : fit.samples)
    synthetic.push_back({s.h, fit.eta0_fit * std::sqrt(s.h) * std::exp(-S0 / s.h)});
  const WidthFit sfit = FitWidthLaw(synthetic, S0);
  rep.AddCheck("prefactor_model_selection", sfit.residual_half_power <= sfit.residual_plain,
               {{"residual_half_power", sfit.residual_half_power}, {"residual_plain", sfit.residual_plain}});

  if (p.pot.dim() == 1 && !c.dirichlet_h.empty()) {
    const DirectModel model(p.pot, c.M);
    const double L = c.DirichletL();
    std::vector<double> gaps;
    bool positive = true;
    for (double h : c.dirichlet_h) {
      const DirichletResult d = DirichletGround(p.pot, h, L, c.P_omega, DirichletForm::kFull);
      const BandSweep s = SweepBands(model, h, c.K, 1);
      double top = -std::numeric_limits<double>::infinity();
      for (const auto& lv : s.levels) top = std::max(top, lv[0]);
      const double gap = d.lambda - top;
      positive = positive && gap > 0.0;
      gaps.push_back(gap);
      r["dirichlet"].push_back({{"h", h}, {"L", L}, {"lambda_dirichlet", d.lambda}, {"band_top", top}, {"gap", gap}});
      auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& t) { return t.h == h; });
      if (it != rows.end()) it->gap = gap;
      else rows.push_back({h, std::nullopt, gap, std::nullopt, std::nullopt});
    }
    rep.AddCheck("dirichlet_above_band", positive, {{"gaps", gaps}});
    if (gaps.size() >= 2 && gaps[0] > 0.0 && gaps[1] > 0.0) {
      const double ratio = gaps[0] / gaps[1];
      rep.AddCheck("dirichlet_gap_ratio", ratio >= c.thresholds.dirichlet_ratio,
                   {{"ratio", ratio}, {"min", c.thresholds.dirichlet_ratio}});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.h > b.h; });
  detail::WriteTunnelingCsv(detail::OutPath(c, "widths.csv"), rows);
}

inline void RunHopping(const ExperimentConfig& c, Report& rep) {
  const Pipeline p = Pipeline::Prepare(c, true);
  Require(p.pot.dim() == 1, "hopping coefficient is one dimensional");
  const double S0 = PipelineLeastAction(p, c.Q).S0;
  const double period = std::abs(p.pot.lattice().basis()(0, 0));
  const TransportSolution1D ts(p.pot, p.well, *p.gb, 0.95 * period, 3);
  const Chi1Profile chi1 = c.chi1 ? Chi1Profile::FromMargins(S0, (*c.chi1)[0], (*c.chi1)[1])
                                  : Chi1Profile::Default(S0);
  const Chi1Profile alt = Chi1Profile::FromMargins(S0, 0.05 * S0, 0.4 * S0);
  const DirectModel model(p.pot, c.M);
  auto& r = rep.results();
  r["S0"] = S0;
  r["chi1"] = {{"s_a", chi1.s_a}, {"s_b", chi1.s_b}};
  std::vector<detail::TunnelingRow> rows;
  std::vector<double> log_ratio;
  for (double h : c.HList()) {
    const double width = SweepBands(model, h, c.K, 1).stats[0].width;
    if (width < WidthNoiseFloor(model, h)) {
      rep.Warn("width below noise floor at h = " + std::to_string(h) + "; sample skipped");
      continue;
    }
    const HoppingResult hr = HoppingCoefficient1D(p.pot, p.well, ts, S0, h, chi1);
    const HoppingResult ha = HoppingCoefficient1D(p.pot, p.well, ts, S0, h, alt);
    const double ratio = hr.predicted_width / width;
    log_ratio.push_back(std::abs(std::log(ratio)));
    rows.push_back({h, width, std::nullopt, hr.rho_tot, hr.predicted_width});
    r["samples"].push_back({{"h", h},
                            {"measured_width", width},
                            {"predicted_width", hr.predicted_width},
                            {"ratio", ratio},
                            {"rho_tot", {hr.rho_tot.real(), hr.rho_tot.imag()}},
                            {"window", {hr.window_lo, hr.window_hi}},
                            {"profile_ratio", std::abs(ha.rho_tot) / std::abs(hr.rho_tot)}});
  }
  detail::WriteTunnelingCsv(detail::OutPath(c, "hopping.csv"), rows);
  const double f = c.thresholds.hopping_factor;
  rep.AddCheck("within_factor", !log_ratio.empty() && log_ratio.front() <= std::log(f),
               {{"abs_log_ratio", log_ratio.empty() ? 0.0 : log_ratio.front()}, {"factor", f}});
  bool improving = log_ratio.size() >= 2;
  for (size_t i = 1; i < log_ratio.size(); ++i) improving = improving && log_ratio[i] < log_ratio[i - 1];
  rep.AddCheck("improving", improving, {{"abs_log_ratio", log_ratio}});
}

//! Runs one experiment into `rep`; module errors are recorded, not thrown.
inline void RunExperiment(const ExperimentConfig& c, Report& rep) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const std::string& e = c.experiment;
    if (e == "validate") RunValidate(c, rep);
    else if (e == "bands") RunBands(c, rep);
    else if (e == "reduce") RunReduce(c, rep);
    else if (e == "gauge-check") RunGaugeCheck(c, rep);
    else if (e == "agmon") RunAgmon(c, rep);
    else if (e == "wkb") RunWkb(c, rep);
    else if (e == "widths") RunWidths(c, rep);
    else if (e == "hopping") RunHopping(c, rep);
    else throw Error("unknown experiment '" + e + "'");
  } catch (const std::exception& ex) {
    rep.Fail("experiment " + c.experiment + ": " + ex.what());
  }
  rep.SetWallClock(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

//! Runs, writes <out>/report.json, and returns the exit code (0 pass, 2 thresholds failed, 1 error).
inline int Run(const ExperimentConfig& c) {
  Report rep(c.experiment, ToJson(c));
  RunExperiment(c, rep);
  rep.Write(detail::OutPath(c, "report.json"));
  if (rep.errored()) return 1;
  return rep.AllPassed() ? 0 : 2;
}

}  // namespace gaugeband

#endif  // GAUGEBAND_HARNESS_HPP_
