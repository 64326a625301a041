#ifndef GAUGEBAND_CONFIG_HPP_
#define GAUGEBAND_CONFIG_HPP_

#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaugeband/gauge.hpp"
#include "gaugeband/potential.hpp"

namespace gaugeband {

using json = nlohmann::json;

inline const std::vector<std::string>& ExperimentNames() {
  static const std::vector<std::string> names{"validate", "bands", "reduce", "gauge-check",
                                              "agmon", "wkb", "widths", "hopping"};
  return names;
}

//! Pass/fail thresholds. Defaults are the acceptance values.
struct Thresholds {
  double gauge_equivalence = 1e-6;  // max |lambda_direct - lambda_gauged|
  double decoupling = 1e-10;        // constant-w band union check
  double exponent_min = 1.9;        // fitted h exponents (bands, reduce)
  double width_S_rel = 0.10;        // |S_fit / S0 - 1|
  double e2_rel = 0.05;             // |limit / e2_full - 1|
  double e2_simplified_rel = 0.05;  // agreement flag only, not a check
  double dirichlet_ratio = 5.0;     // gap(h_0) / gap(h_1)
  double hopping_factor = 2.0;      // predicted / measured within this factor
  double fmm_quadrature = 1e-3;     // 1D fast marching vs quadrature
  double S0_rel = 0.02;             // against expect.S0 when given
};

//! Optional reference values for the agmon experiment.
struct Expectations {
  std::optional<double> S0;
  std::optional<int> multiplicity;
};

struct ExperimentConfig {
  std::string name = "unnamed";
  std::string experiment;
  Mat basis;  // lattice vectors as columns
  std::vector<std::pair<Mode, cplx>> v;
  std::array<std::vector<std::pair<Mode, cplx>>, 3> w;

  int M = 64, P = 256, K = 33, Q = 512, P_omega = 512, j_max = 4;
  std::vector<double> h_list;  // empty: per-experiment default
  std::string branch = "auto";
  double window_c = 0.9;             // c = window_c * min|w| for reduce
  std::optional<double> dirichlet_L; // default 0.45 |beta_1|
  std::vector<double> dirichlet_h{0.4, 0.3};
  double transport_x_c = 2.0;
  int transport_nodes = 201;
  int richardson_order = 3;
  std::optional<std::array<double, 2>> chi1;  // (eta0, eta1) margins
  std::string out_dir = "out";

  Thresholds thresholds;
  Expectations expect;

  Lattice lattice() const { return Lattice(basis); }
  int dim() const { return static_cast<int>(basis.rows()); }

  PauliPotential Potential() const {
    const Lattice L = lattice();
    return PauliPotential(TrigPoly::RealFromTerms(L, v),
                          {TrigPoly::RealFromTerms(L, w[0]), TrigPoly::RealFromTerms(L, w[1]),
                           TrigPoly::RealFromTerms(L, w[2])});
  }

  //! h values for the experiment: the configured list, else its default.
  std::vector<double> HList() const {
    if (!h_list.empty()) return h_list;
    if (experiment == "gauge-check") return {0.6, 0.4, 0.3};
    if (experiment == "wkb") return {0.4, 0.35, 0.3, 0.25, 0.2, 0.15, 0.1};
    if (experiment == "widths") return {0.6, 0.5, 0.45, 0.4, 0.35, 0.3, 0.25};
    if (experiment == "hopping") return {0.35, 0.3};
    return {0.6, 0.5, 0.4, 0.3, 0.25};
  }

  double DirichletL() const {
    return dirichlet_L ? *dirichlet_L : 0.45 * std::abs(basis(0, 0));
  }
};

namespace detail {

inline void CheckKeys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw Error("config: unknown key '" + it.key() + "' in " + where);
}

inline std::vector<std::pair<Mode, cplx>> ParseTerms(const json& j, int dim, const std::string& field) {
  std::vector<std::pair<Mode, cplx>> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw Error("config: " + field + " must be a list of terms");
  for (const json& t : j) {
    if (!t.is_object() || !t.contains("m")) throw Error("config: " + field + " term needs m");
    CheckKeys(t, {"m", "re", "im"}, field);
    const auto m = t.at("m").get<std::vector<int>>();
    if (static_cast<int>(m.size()) != dim) throw Error("config: " + field + " mode has wrong dimension");
    Mode mode{m[0], dim == 2 ? m[1] : 0};
    out.push_back({mode, cplx(t.value("re", 0.0), t.value("im", 0.0))});
  }
  return out;
}

template <class T>
void Read(const json& j, const char* key, T& dst) {
  if (j.contains(key) && !j.at(key).is_null()) dst = j.at(key).get<T>();
}

}  // namespace detail

//! Parses and validates a config document. Unknown keys are errors.
inline ExperimentConfig ParseConfig(const json& doc) {
  if (!doc.is_object()) throw Error("config: top level must be an object");
  detail::CheckKeys(doc, {"name", "experiment", "lattice", "potential", "numerics", "thresholds",
                          "expect", "output"},
                    "config");
  ExperimentConfig c;
  try {
    detail::Read(doc, "name", c.name);
    detail::Read(doc, "experiment", c.experiment);
    if (!doc.contains("potential")) throw Error("config: potential is required");
    const json& pot = doc.at("potential");
    detail::CheckKeys(pot, {"v", "w1", "w2", "w3"}, "potential");

    int dim = 0;
    if (doc.contains("lattice")) {
      const auto rows = doc.at("lattice").get<std::vector<std::vector<double>>>();
      dim = static_cast<int>(rows.size());
      if (dim < 1 || dim > 2) throw Error("config: lattice dimension must be 1 or 2");
      c.basis.resize(dim, dim);
      for (int r = 0; r < dim; ++r) {
        if (static_cast<int>(rows[r].size()) != dim) throw Error("config: lattice must be square");
        for (int k = 0; k < dim; ++k) c.basis(k, r) = rows[r][k];
      }
      if (std::abs(c.basis.determinant()) < 1e-12) throw Error("config: lattice basis is singular");
    } else {
      for (const char* f : {"v", "w1", "w2", "w3"})
        if (pot.contains(f) && !pot.at(f).empty() && pot.at(f)[0].contains("m"))
          dim = static_cast<int>(pot.at(f)[0].at("m").size());
      if (dim < 1 || dim > 2) throw Error("config: cannot infer dimension; give lattice");
      c.basis = kTwoPi * Mat::Identity(dim, dim);
    }
    c.v = detail::ParseTerms(pot.value("v", json()), dim, "v");
    c.w[0] = detail::ParseTerms(pot.value("w1", json()), dim, "w1");
    c.w[1] = detail::ParseTerms(pot.value("w2", json()), dim, "w2");
    c.w[2] = detail::ParseTerms(pot.value("w3", json()), dim, "w3");

    if (dim == 2) {
      c.M = 16;
      c.P = 64;
      c.K = 9;
      c.Q = 128;
    }
    if (doc.contains("numerics")) {
      const json& n = doc.at("numerics");
      detail::CheckKeys(n, {"M", "P", "K", "Q", "P_omega", "j_max", "h_list", "branch", "window_c",
                            "dirichlet_L", "dirichlet_h", "transport_x_c", "transport_nodes",
                            "richardson_order", "chi1_margins"},
                        "numerics");
      detail::Read(n, "M", c.M);
      detail::Read(n, "P", c.P);
      detail::Read(n, "K", c.K);
      detail::Read(n, "Q", c.Q);
      detail::Read(n, "P_omega", c.P_omega);
      detail::Read(n, "j_max", c.j_max);
      detail::Read(n, "h_list", c.h_list);
      detail::Read(n, "branch", c.branch);
      detail::Read(n, "window_c", c.window_c);
      detail::Read(n, "dirichlet_h", c.dirichlet_h);
      detail::Read(n, "transport_x_c", c.transport_x_c);
      detail::Read(n, "transport_nodes", c.transport_nodes);
      detail::Read(n, "richardson_order", c.richardson_order);
      if (n.contains("dirichlet_L") && !n.at("dirichlet_L").is_null())
        c.dirichlet_L = n.at("dirichlet_L").get<double>();
      if (n.contains("chi1_margins") && !n.at("chi1_margins").is_null())
        c.chi1 = n.at("chi1_margins").get<std::array<double, 2>>();
    }
    if (doc.contains("thresholds")) {
      const json& t = doc.at("thresholds");
      Thresholds& th = c.thresholds;
      detail::CheckKeys(t, {"gauge_equivalence", "decoupling", "exponent_min", "width_S_rel", "e2_rel",
                            "e2_simplified_rel", "dirichlet_ratio", "hopping_factor",
                            "fmm_quadrature", "S0_rel"},
                        "thresholds");
      detail::Read(t, "gauge_equivalence", th.gauge_equivalence);
      detail::Read(t, "decoupling", th.decoupling);
      detail::Read(t, "exponent_min", th.exponent_min);
      detail::Read(t, "width_S_rel", th.width_S_rel);
      detail::Read(t, "e2_rel", th.e2_rel);
      detail::Read(t, "e2_simplified_rel", th.e2_simplified_rel);
      detail::Read(t, "dirichlet_ratio", th.dirichlet_ratio);
      detail::Read(t, "hopping_factor", th.hopping_factor);
      detail::Read(t, "fmm_quadrature", th.fmm_quadrature);
      detail::Read(t, "S0_rel", th.S0_rel);
    }
    if (doc.contains("expect")) {
      const json& e = doc.at("expect");
      detail::CheckKeys(e, {"S0", "multiplicity"}, "expect");
      if (e.contains("S0")) c.expect.S0 = e.at("S0").get<double>();
      if (e.contains("multiplicity")) c.expect.multiplicity = e.at("multiplicity").get<int>();
    }
    if (doc.contains("output")) {
      detail::CheckKeys(doc.at("output"), {"dir"}, "output");
      detail::Read(doc.at("output"), "dir", c.out_dir);
    }
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  Require(c.M >= 1 && c.P >= 8 && c.K >= 1 && c.Q >= 4 && c.P_omega >= 8 && c.j_max >= 1,
          "config: numerical parameter out of range");
  for (double h : c.h_list) Require(h > 0.0, "config: h values must be positive");
  ParseBranch(c.branch);
  return c;
}

inline ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("config: cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("config: " + path + ": " + e.what());
  }
  return ParseConfig(doc);
}

//! Effective configuration as JSON (all defaults filled in).
inline json ToJson(const ExperimentConfig& c) {
  auto terms = [&](const std::vector<std::pair<Mode, cplx>>& ts) {
    json a = json::array();
    for (const auto& [m, z] : ts) {
      std::vector<int> mv{m[0]};
      if (c.dim() == 2) mv.push_back(m[1]);
      a.push_back({{"m", mv}, {"re", z.real()}, {"im", z.imag()}});
    }
    return a;
  };
  json lattice = json::array();
  for (int r = 0; r < c.dim(); ++r) {
    std::vector<double> row;
    for (int k = 0; k < c.dim(); ++k) row.push_back(c.basis(k, r));
    lattice.push_back(row);
  }
  const Thresholds& t = c.thresholds;
  json j{{"name", c.name},
         {"experiment", c.experiment},
         {"lattice", lattice},
         {"potential", {{"v", terms(c.v)}, {"w1", terms(c.w[0])}, {"w2", terms(c.w[1])}, {"w3", terms(c.w[2])}}},
         {"numerics",
          {{"M", c.M}, {"P", c.P}, {"K", c.K}, {"Q", c.Q}, {"P_omega", c.P_omega}, {"j_max", c.j_max},
           {"h_list", c.HList()}, {"branch", c.branch}, {"window_c", c.window_c},
           {"dirichlet_L", c.DirichletL()}, {"dirichlet_h", c.dirichlet_h},
           {"transport_x_c", c.transport_x_c}, {"transport_nodes", c.transport_nodes},
           {"richardson_order", c.richardson_order}}},
         {"thresholds",
          {{"gauge_equivalence", t.gauge_equivalence}, {"decoupling", t.decoupling},
           {"exponent_min", t.exponent_min}, {"width_S_rel", t.width_S_rel}, {"e2_rel", t.e2_rel},
           {"e2_simplified_rel", t.e2_simplified_rel}, {"dirichlet_ratio", t.dirichlet_ratio},
           {"hopping_factor", t.hopping_factor}, {"fmm_quadrature", t.fmm_quadrature},
           {"S0_rel", t.S0_rel}}},
         {"output", {{"dir", c.out_dir}}}};
  if (c.chi1) j["numerics"]["chi1_margins"] = *c.chi1;
  if (c.expect.S0) j["expect"]["S0"] = *c.expect.S0;
  if (c.expect.multiplicity) j["expect"]["multiplicity"] = *c.expect.multiplicity;
  return j;
}

}  // namespace gaugeband

#endif  // GAUGEBAND_CONFIG_HPP_
