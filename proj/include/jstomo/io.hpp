#pragma once

// JSON (de)serialization for density matrices and tomograms. Field names are
// part of the tool's file contract; see README for the format reference.

#include <complex>
#include <fstream>
#include <json.hpp>
#include <stdexcept>
#include <string>

#include "jstomo/hilbert.hpp"
#include "jstomo/tomography.hpp"

namespace jstomo::io {

using json = nlohmann::json;
using hilbert::Basis;
using hilbert::BasisKind;
using hilbert::DensityMatrix;

inline json half_int_to_json(HalfInt j) {
  if (j.is_integer()) return j.twice() / 2;
  return j.value();  // exact in binary floating point (k + 0.5)
}

inline HalfInt half_int_from_json(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    auto slash = s.find('/');
    if (slash != std::string::npos)
      return HalfInt(std::stoi(s.substr(0, slash)));  // "3/2"
    return HalfInt(2 * std::stoi(s));
  }
  double d = v.get<double>();
  int tw = static_cast<int>(std::lround(2.0 * d));
  if (std::abs(2.0 * d - tw) > 1e-12)
    throw std::invalid_argument("half-integer expected, got " + v.dump());
  return HalfInt(tw);
}

// ---------------------------------------------------------------------------
// DensityMatrix: { "basis": "spin"|"fock1"|"fock2", "j"|"cutoff", "re", "im" }
// ---------------------------------------------------------------------------

inline json to_json(const DensityMatrix& rho) {
  json out;
  switch (rho.basis().kind) {
    case BasisKind::SpinJ:
      out["basis"] = "spin";
      out["j"] = half_int_to_json(rho.basis().j);
      break;
    case BasisKind::Fock1:
      out["basis"] = "fock1";
      out["cutoff"] = rho.basis().cutoff;
      break;
    case BasisKind::Fock2:
      out["basis"] = "fock2";
      out["cutoff"] = rho.basis().cutoff;
      break;
  }
  json re = json::array(), im = json::array();
  for (int a = 0; a < rho.dim(); ++a) {
    json rrow = json::array(), irow = json::array();
    for (int b = 0; b < rho.dim(); ++b) {
      rrow.push_back(rho(a, b).real());
      irow.push_back(rho(a, b).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out;
}

inline DensityMatrix density_from_json(const json& in, bool validate = true) {
  std::string bk = in.at("basis").get<std::string>();
  Basis basis;
  if (bk == "spin")
    basis = Basis::spin(half_int_from_json(in.at("j")));
  else if (bk == "fock1")
    basis = Basis::fock1(in.at("cutoff").get<int>());
  else if (bk == "fock2")
    basis = Basis::fock2(in.at("cutoff").get<int>());
  else
    throw std::invalid_argument("unknown basis kind: " + bk);
  const auto& re = in.at("re");
  const auto& im = in.at("im");
  Eigen::MatrixXcd data(basis.dim(), basis.dim());
  if (static_cast<int>(re.size()) != basis.dim())
    throw std::invalid_argument("density matrix size mismatch with basis");
  for (int a = 0; a < basis.dim(); ++a)
    for (int b = 0; b < basis.dim(); ++b)
      data(a, b) = std::complex<double>(re[a][b].get<double>(), im[a][b].get<double>());
  return DensityMatrix(basis, std::move(data), validate);
}

// ---------------------------------------------------------------------------
// tomograms
// ---------------------------------------------------------------------------

inline json restricted_to_json(const tomo::RestrictedMeta& m) {
  return {{"j", half_int_to_json(m.j)},
          {"normalization", m.renormalized ? "renormalized" : "raw"},
          {"sector_weight", m.sector_weight}};
}

inline json to_json(const tomo::SpinTomogram& tg) {
  json grid = json::array();
  for (size_t g = 0; g < tg.grid.size(); ++g)
    grid.push_back({{"alpha", tg.grid.nodes[g].alpha},
                    {"beta", tg.grid.nodes[g].beta},
                    {"gamma", tg.grid.nodes[g].gamma},
                    {"weight", tg.grid.weights[g]}});
  json values = json::array();
  for (int g = 0; g < tg.values.rows(); ++g) {
    json row = json::array();
    for (int mi = 0; mi < tg.values.cols(); ++mi) row.push_back(tg.values(g, mi));
    values.push_back(std::move(row));
  }
  json out{{"j", half_int_to_json(tg.j)},
           {"grid", std::move(grid)},
           {"values", std::move(values)},
           {"m_order", "descending"}};
  if (tg.restricted) out["restricted"] = restricted_to_json(*tg.restricted);
  return out;
}

inline tomo::SpinTomogram spin_tomogram_from_json(const json& in) {
  tomo::SpinTomogram tg;
  tg.j = half_int_from_json(in.at("j"));
  const auto& grid = in.at("grid");
  tg.grid.nodes.reserve(grid.size());
  tg.grid.weights.reserve(grid.size());
  for (const auto& node : grid) {
    tg.grid.nodes.push_back({node.at("alpha").get<double>(), node.at("beta").get<double>(),
                             node.at("gamma").get<double>()});
    tg.grid.weights.push_back(node.at("weight").get<double>());
  }
  const auto& values = in.at("values");
  tg.values.resize(values.size(), tg.j.twice() + 1);
  for (size_t g = 0; g < values.size(); ++g)
    for (int mi = 0; mi <= tg.j.twice(); ++mi)
      tg.values(static_cast<int>(g), mi) = values[g][mi].get<double>();
  return tg;
}

inline json linegrid_to_json(const transforms::LineGrid& g) {
  return json::array({g.lo, g.hi, g.step});
}

inline transforms::LineGrid linegrid_from_json(const json& v) {
  return transforms::LineGrid(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

inline json to_json(const tomo::SymplecticTomogram& w) {
  json grid;
  if (w.modes == 1) {
    grid["x"] = linegrid_to_json(w.x[0]);
    grid["mu"] = w.mu[0];
    grid["nu"] = w.nu[0];
  } else {
    grid["x"] = json::array({linegrid_to_json(w.x[0]), linegrid_to_json(w.x[1])});
    grid["mu"] = json::array({w.mu[0], w.mu[1]});
    grid["nu"] = json::array({w.nu[0], w.nu[1]});
  }
  json out{{"modes", w.modes}, {"grid", std::move(grid)}, {"values", w.values}};
  if (w.restricted) out["restricted"] = restricted_to_json(*w.restricted);
  return out;
}

inline tomo::SymplecticTomogram symplectic_from_json(const json& in) {
  tomo::SymplecticTomogram w;
  w.modes = in.value("modes", 1);
  const auto& grid = in.at("grid");
  if (w.modes == 1) {
    w.x[0] = linegrid_from_json(grid.at("x"));
    w.mu[0] = grid.at("mu").get<double>();
    w.nu[0] = grid.at("nu").get<double>();
  } else {
    w.x[0] = linegrid_from_json(grid.at("x")[0]);
    w.x[1] = linegrid_from_json(grid.at("x")[1]);
    w.mu = {grid.at("mu")[0].get<double>(), grid.at("mu")[1].get<double>()};
    w.nu = {grid.at("nu")[0].get<double>(), grid.at("nu")[1].get<double>()};
  }
  w.values = in.at("values").get<std::vector<double>>();
  return w;
}

inline json to_json(const tomo::OpticalTomogram& w) {
  json grid{{"x", linegrid_to_json(w.x[0])}, {"n_theta", w.n_theta[0]}};
  if (w.modes == 2) {
    grid["x2"] = linegrid_to_json(w.x[1]);
    grid["n_theta2"] = w.n_theta[1];
  }
  return json{{"modes", w.modes},
              {"kind", "optical"},
              {"grid", std::move(grid)},
              {"values", w.values}};
}

inline tomo::OpticalTomogram optical_from_json(const json& in) {
  tomo::OpticalTomogram w;
  w.modes = in.value("modes", 1);
  const auto& grid = in.at("grid");
  w.x[0] = linegrid_from_json(grid.at("x"));
  w.n_theta[0] = grid.at("n_theta").get<int>();
  if (w.modes == 2) {
    w.x[1] = grid.contains("x2") ? linegrid_from_json(grid.at("x2")) : w.x[0];
    w.n_theta[1] = grid.value("n_theta2", w.n_theta[0]);
  }
  w.values = in.at("values").get<std::vector<double>>();
  return w;
}

inline json alphas_to_json(const std::vector<std::complex<double>>& as) {
  json out = json::array();
  for (auto a : as) out.push_back(json::array({a.real(), a.imag()}));
  return out;
}

inline std::vector<std::complex<double>> alphas_from_json(const json& v) {
  std::vector<std::complex<double>> out;
  out.reserve(v.size());
  for (const auto& a : v) out.push_back({a[0].get<double>(), a[1].get<double>()});
  return out;
}

inline json to_json(const tomo::PhotonTomogram& w) {
  json out{{"modes", w.modes}, {"alphas", alphas_to_json(w.alphas1)}};
  if (w.modes == 1) {
    out["cutoff"] = w.n_max;
  } else {
    out["alphas2"] = alphas_to_json(w.alphas2);
    json pairs = json::array();
    for (auto& [n1, n2] : w.n_pairs) pairs.push_back(json::array({n1, n2}));
    out["n_pairs"] = std::move(pairs);
  }
  json values = json::array();
  for (int a = 0; a < w.values.rows(); ++a) {
    json row = json::array();
    for (int k = 0; k < w.values.cols(); ++k) row.push_back(w.values(a, k));
    values.push_back(std::move(row));
  }
  out["values"] = std::move(values);
  if (w.cell_weight) out["cell_weight"] = *w.cell_weight;
  if (w.restricted) out["restricted"] = restricted_to_json(*w.restricted);
  return out;
}

inline tomo::PhotonTomogram photon_from_json(const json& in) {
  tomo::PhotonTomogram w;
  w.modes = in.value("modes", 1);
  w.alphas1 = alphas_from_json(in.at("alphas"));
  if (w.modes == 1) {
    w.n_max = in.at("cutoff").get<int>();
  } else {
    w.alphas2 = alphas_from_json(in.at("alphas2"));
    for (const auto& p : in.at("n_pairs"))
      w.n_pairs.push_back({p[0].get<int>(), p[1].get<int>()});
  }
  const auto& values = in.at("values");
  size_t cols = w.modes == 1 ? w.n_max + 1 : w.n_pairs.size();
  w.values.resize(values.size(), cols);
  for (size_t a = 0; a < values.size(); ++a)
    for (size_t k = 0; k < cols; ++k)
      w.values(static_cast<int>(a), static_cast<int>(k)) = values[a][k].get<double>();
  if (in.contains("cell_weight")) w.cell_weight = in.at("cell_weight").get<double>();
  return w;
}

inline json to_json(const tomo::WignerGrid& w) {
  json out{{"modes", w.modes},
           {"grid", {{"radius", w.grid[0].radius}, {"step", w.grid[0].spacing}}},
           {"values", w.values}};
  if (w.restricted) out["restricted"] = restricted_to_json(*w.restricted);
  return out;
}

inline tomo::WignerGrid wigner_from_json(const json& in) {
  tomo::WignerGrid w;
  w.modes = in.value("modes", 1);
  const auto& grid = in.at("grid");
  transforms::PlaneQuadrature pg(grid.at("radius").get<double>(),
                                 grid.at("step").get<double>());
  w.grid = {pg, pg};
  w.values = in.at("values").get<std::vector<double>>();
  return w;
}

// ---------------------------------------------------------------------------
// file helpers
// ---------------------------------------------------------------------------

inline void write_json(const std::string& path, const json& j, int indent = 0) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  if (indent > 0)
    os << j.dump(indent) << "\n";
  else
    os << j.dump() << "\n";
}

inline json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  json j;
  is >> j;
  return j;
}

}  // namespace jstomo::io
