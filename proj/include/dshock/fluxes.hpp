#pragma once

#include "dshock/common.hpp"

#include "json.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace dshock {

// Flux pair of the pressureless system
//   rho_t + div(rho F(U)) = 0,   (rho U)_t + div(rho N(U)) = 0.
// N(U) is stored row-major in the sense N(k, j) = N_kj, so the momentum flux
// through a surface with unit normal nu is N(U) * nu.
class FluxModel {
 public:
  using VectorMap = std::function<Vec(const Vec&)>;
  using TensorMap = std::function<Mat(const Vec&)>;

  FluxModel(std::string name, int dim, VectorMap f, TensorMap n,
            std::map<std::string, double> params = {});

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const std::map<std::string, double>& params() const { return params_; }
  double param(const std::string& key) const;

  // Both reject non-finite or wrongly sized input.
  Vec F(const Vec& u) const;
  Mat N(const Vec& u) const;

  // Scalar shortcuts for dim == 1.
  double F1(double u) const;
  double N1(double u) const;

 private:
  std::string name_;
  int dim_;
  VectorMap f_;
  TensorMap n_;
  std::map<std::string, double> params_;
};

FluxModel standard_flux(int dim);
FluxModel relativistic_flux(int dim, double c0);

// c0 U / sqrt(c0^2 + |U|^2)
Vec relativistic_velocity(const Vec& u, double c0);

// One-dimensional user flux from tables, interpolated with monotone cubic
// (PCHIP) splines and extended linearly outside the tabulated range.
FluxModel tabulated_flux(std::vector<double> u, std::vector<double> f, std::vector<double> n);

// {"kind": "standard"} | {"kind": "relativistic", "c0": ...}
//   | {"kind": "tabulated", "u": [...], "F": [...], "N": [...]}
FluxModel flux_from_json(const nlohmann::json& j, int dim);

}  // namespace dshock
