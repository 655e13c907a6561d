#include "dshock/fluxes.hpp"

// pchip.hpp calls isnan unqualified and needs the C declaration in scope.
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>

#include <cmath>
#include <memory>

namespace dshock {

FluxModel::FluxModel(std::string name, int dim, VectorMap f, TensorMap n,
                     std::map<std::string, double> params)
    : name_(std::move(name)), dim_(dim), f_(std::move(f)), n_(std::move(n)), params_(std::move(params)) {
  if (dim_ < 1) throw Error(Errc::invalid_dimension, "flux dimension must be >= 1");
}

double FluxModel::param(const std::string& key) const {
  auto it = params_.find(key);
  if (it == params_.end()) throw Error(Errc::invalid_parameter, "flux '" + name_ + "' has no parameter " + key);
  return it->second;
}

Vec FluxModel::F(const Vec& u) const {
  if (u.size() != dim_) throw Error(Errc::dimension_mismatch, "velocity size does not match flux dimension");
  require_finite(u, "velocity");
  return f_(u);
}

Mat FluxModel::N(const Vec& u) const {
  if (u.size() != dim_) throw Error(Errc::dimension_mismatch, "velocity size does not match flux dimension");
  require_finite(u, "velocity");
  return n_(u);
}

double FluxModel::F1(double u) const { return F(Vec::Constant(1, u))[0]; }

double FluxModel::N1(double u) const { return N(Vec::Constant(1, u))(0, 0); }

FluxModel standard_flux(int dim) {
  if (dim < 1) throw Error(Errc::invalid_dimension, "standard flux needs dim >= 1");
  return FluxModel(
      "standard", dim, [](const Vec& u) { return u; },
      [](const Vec& u) -> Mat { return u * u.transpose(); });
}

Vec relativistic_velocity(const Vec& u, double c0) {
  // c0 / sqrt(c0^2 + |u|^2) written to stay finite for huge |u|
  const double norm = u.norm();
  if (norm == 0.0) return Vec::Zero(u.size());
  const double scale = std::max(c0, norm);
  const double denom = scale * std::hypot(c0 / scale, norm / scale);
  return u * (c0 / denom);
}

FluxModel relativistic_flux(int dim, double c0) {
  if (dim < 1) throw Error(Errc::invalid_dimension, "relativistic flux needs dim >= 1");
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw Error(Errc::invalid_parameter, "c0 must be positive and finite");
  return FluxModel(
      "relativistic", dim, [c0](const Vec& u) { return relativistic_velocity(u, c0); },
      [c0](const Vec& u) -> Mat { return u * relativistic_velocity(u, c0).transpose(); },
      {{"c0", c0}});
}

namespace {

// PCHIP inside the table, linear continuation with the end slopes outside.
class MonotoneTable {
 public:
  MonotoneTable(std::vector<double> x, std::vector<double> y)
      : lo_(x.front()), hi_(x.back()), y_lo_(y.front()), y_hi_(y.back()) {
    spline_ = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(x),
                                                                                        std::move(y));
    slope_lo_ = spline_->prime(lo_);
    slope_hi_ = spline_->prime(hi_);
  }

  double operator()(double u) const {
    if (u < lo_) return y_lo_ + slope_lo_ * (u - lo_);
    if (u > hi_) return y_hi_ + slope_hi_ * (u - hi_);
    return (*spline_)(u);
  }

 private:
  double lo_, hi_, y_lo_, y_hi_;
  double slope_lo_ = 0.0, slope_hi_ = 0.0;
  std::shared_ptr<boost::math::interpolators::pchip<std::vector<double>>> spline_;
};

}  // namespace

FluxModel tabulated_flux(std::vector<double> u, std::vector<double> f, std::vector<double> n) {
  if (u.size() != f.size() || u.size() != n.size())
    throw Error(Errc::invalid_parameter, "flux tables must have equal length");
  if (u.size() < 4) throw Error(Errc::invalid_parameter, "flux tables need at least four nodes");
  for (std::size_t i = 0; i < u.size(); ++i) {
    require_finite(u[i], "table abscissa");
    require_finite(f[i], "table F value");
    require_finite(n[i], "table N value");
    if (i > 0 && !(u[i] > u[i - 1])) throw Error(Errc::invalid_parameter, "table abscissae must increase");
  }
  MonotoneTable ft(u, std::move(f));
  MonotoneTable nt(std::move(u), std::move(n));
  return FluxModel(
      "tabulated", 1, [ft](const Vec& v) { return Vec::Constant(1, ft(v[0])); },
      [nt](const Vec& v) { return Mat::Constant(1, 1, nt(v[0])); });
}

FluxModel flux_from_json(const nlohmann::json& j, int dim) {
  if (!j.is_object()) throw Error(Errc::schema, "flux must be an object");
  const std::string kind = j.value("kind", "");
  auto only_keys = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : j.items()) {
      bool known = false;
      for (const char* key : keys) known = known || k == key;
      if (!known) throw Error(Errc::schema, "unknown flux key '" + k + "'");
    }
  };
  if (kind == "standard") {
    only_keys({"kind"});
    return standard_flux(dim);
  }
  if (kind == "relativistic") {
    only_keys({"kind", "c0"});
    if (!j.contains("c0") || !j["c0"].is_number()) throw Error(Errc::schema, "relativistic flux needs numeric c0");
    return relativistic_flux(dim, j["c0"].get<double>());
  }
  if (kind == "tabulated") {
    only_keys({"kind", "u", "F", "N"});
    if (dim != 1) throw Error(Errc::schema, "tabulated flux is one-dimensional");
    try {
      return tabulated_flux(j.at("u").get<std::vector<double>>(), j.at("F").get<std::vector<double>>(),
                            j.at("N").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& ex) {
      throw Error(Errc::schema, std::string("tabulated flux: ") + ex.what());
    }
  }
  throw Error(Errc::schema, "unknown flux kind '" + kind + "'");
}

}  // namespace dshock
