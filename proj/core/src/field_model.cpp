#include "rydchip/field_model.hpp"

#include "rydchip/error.hpp"
#include "rydchip/parallel.hpp"
#include "rydchip/quadrature.hpp"
#include "rydchip/units.hpp"

#include <cmath>
#include <string>

namespace rydchip {

namespace {

constexpr double kRelTol = 1e-8;

// Field (3) followed by the symmetric Jacobian (xx, xy, xz, yy, yz, zz).
using Integrand9 = Eigen::Matrix<double, 9, 1>;

// sigma / (4 pi eps0) in V/cm for a dimensionless geometric integral.
double coulomb_prefactor(const FieldConfig& cfg) {
  const double sigma = units::charge_density_to_si(cfg.charge_density);
  return units::to_v_per_cm(sigma / (4.0 * units::pi * units::epsilon0));
}

void check_position(const Vec3& p, const FieldConfig& cfg) {
  if (!p.allFinite()) throw Error(ErrorKind::Domain, "field position is not finite");
  if (p.z() < 0.0) {
    throw Error(ErrorKind::Domain, "position z=" + std::to_string(p.z()) + " um is below the chip surface");
  }
  if (p.z() == 0.0 && std::hypot(p.x(), p.y()) <= cfg.disk_radius) {
    throw Error(ErrorKind::Singular, "field requested in the plane of the charged disk");
  }
}

// Nested polar quadrature of the disk kernel. The angular integral runs over
// [phi_p - pi, phi_p + pi] split at the azimuth of the field point, the
// radial one over [0, R] split at the field point's cylindrical radius.
// Both splits sit where the integrand peaks as z -> 0.
template <int N>
Eigen::Matrix<double, N, 1> integrate_disk(const Vec3& p, double radius) {
  using Vec = Eigen::Matrix<double, N, 1>;
  const double rho_p = std::hypot(p.x(), p.y());
  const double phi_p = std::atan2(p.y(), p.x());
  const double z = p.z();

  auto kernel = [&](double rho, double phi) -> Vec {
    const Vec3 d(p.x() - rho * std::cos(phi), p.y() - rho * std::sin(phi), z);
    const double r2 = d.squaredNorm();
    const double inv_r = 1.0 / std::sqrt(r2);
    const double inv_r3 = inv_r * inv_r * inv_r;
    Vec out;
    out.template head<3>() = rho * inv_r3 * d;
    if constexpr (N == 9) {
      const double inv_r5 = inv_r3 / r2;
      const double w = rho;
      out[3] = w * (inv_r3 - 3.0 * d.x() * d.x() * inv_r5);
      out[4] = w * (-3.0 * d.x() * d.y() * inv_r5);
      out[5] = w * (-3.0 * d.x() * d.z() * inv_r5);
      out[6] = w * (inv_r3 - 3.0 * d.y() * d.y() * inv_r5);
      out[7] = w * (-3.0 * d.y() * d.z() * inv_r5);
      out[8] = w * (inv_r3 - 3.0 * d.z() * d.z() * inv_r5);
    }
    return out;
  };

  // Tolerances are absolute, derived from the on-axis scale of each group,
  // so vanishing components (e.g. transverse field on the axis) terminate.
  const double scale_field = 2.0 * units::pi;
  const double scale_jac = 2.0 * units::pi / std::max(z, 1e-3 * radius);
  auto accept_with = [&](double rel) {
    return [=](const Vec& value, const Vec& err) {
      const double tol_f = rel * std::max(value.template head<3>().norm(), 1e-6 * scale_field);
      if (err.template head<3>().maxCoeff() > tol_f) return false;
      if constexpr (N == 9) {
        const double tol_j = rel * std::max(value.template tail<6>().norm(), 1e-6 * scale_jac);
        if (err.template tail<6>().maxCoeff() > tol_j) return false;
      }
      return true;
    };
  };

  const auto inner_accept = accept_with(kRelTol * 1e-2);
  auto radial = [&](double phi) -> Vec {
    auto f = [&](double rho) { return kernel(rho, phi); };
    if (rho_p > 0.0 && rho_p < radius) {
      return quad::integrate_adaptive<Vec>(f, 0.0, rho_p, inner_accept, 200) +
             quad::integrate_adaptive<Vec>(f, rho_p, radius, inner_accept, 200);
    }
    return quad::integrate_adaptive<Vec>(f, 0.0, radius, inner_accept, 200);
  };

  const auto outer_accept = accept_with(kRelTol * 1e-1);
  auto angular = [&](double u) { return radial(phi_p + u); };
  return quad::integrate_adaptive<Vec>(angular, -units::pi, 0.0, outer_accept, 200) +
         quad::integrate_adaptive<Vec>(angular, 0.0, units::pi, outer_accept, 200);
}

}  // namespace

void FieldConfig::validate() const {
  if (!(disk_radius > 0.0)) throw Error(ErrorKind::Domain, "disk_radius must be > 0");
  if (!(zeta > 0.0)) throw Error(ErrorKind::Domain, "zeta must be > 0");
  if (!(charge_density >= 0.0)) throw Error(ErrorKind::Domain, "charge_density must be >= 0");
  if (!(F0 >= 0.0)) throw Error(ErrorKind::Domain, "F0 must be >= 0");
  if (!std::isfinite(F_bias)) throw Error(ErrorKind::Domain, "F_bias must be finite");
}

double exponential_field(double z, const FieldConfig& cfg) {
  if (!(z >= 0.0)) {
    throw Error(ErrorKind::Domain, "z=" + std::to_string(z) + " um is below the chip surface");
  }
  return cfg.F0 * std::exp(-z / cfg.zeta) + cfg.F_bias;
}

double exponential_field_slope(double z, const FieldConfig& cfg) {
  if (!(z >= 0.0)) {
    throw Error(ErrorKind::Domain, "z=" + std::to_string(z) + " um is below the chip surface");
  }
  return -cfg.F0 / cfg.zeta * std::exp(-z / cfg.zeta);
}

double disk_field_on_axis(double z, const FieldConfig& cfg) {
  const double sigma = units::charge_density_to_si(cfg.charge_density);
  const double R = cfg.disk_radius;
  return units::to_v_per_cm(sigma / (2.0 * units::epsilon0) * (1.0 - z / std::sqrt(z * z + R * R)));
}

Vec3 disk_field(const Vec3& position, const FieldConfig& cfg) {
  check_position(position, cfg);
  Vec3 e = Vec3::Zero();
  if (cfg.charge_density > 0.0) {
    e = coulomb_prefactor(cfg) * integrate_disk<3>(position, cfg.disk_radius);
  }
  e.z() += cfg.F_bias;
  return e;
}

FieldWithJacobian disk_field_with_jacobian(const Vec3& position, const FieldConfig& cfg) {
  check_position(position, cfg);
  FieldWithJacobian out;
  if (cfg.charge_density > 0.0) {
    const Integrand9 v = coulomb_prefactor(cfg) * integrate_disk<9>(position, cfg.disk_radius);
    out.field = v.head<3>();
    out.jacobian << v[3], v[4], v[5],
                    v[4], v[6], v[7],
                    v[5], v[7], v[8];
  }
  out.field.z() += cfg.F_bias;
  return out;
}

FieldProvider::FieldProvider(const FieldConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

Vec3 ExponentialField::field(const Vec3& position) const {
  return Vec3(0.0, 0.0, exponential_field(position.z(), cfg_));
}

FieldSample ExponentialField::sample(const Vec3& position) const {
  FieldSample s;
  s.position = position;
  const double f = exponential_field(position.z(), cfg_);
  s.field_vector = Vec3(0.0, 0.0, f);
  s.magnitude = std::abs(f);
  const double sign = f > 0.0 ? 1.0 : (f < 0.0 ? -1.0 : 0.0);
  s.gradient_of_magnitude = Vec3(0.0, 0.0, sign * exponential_field_slope(position.z(), cfg_));
  return s;
}

Vec3 DiskField::field(const Vec3& position) const { return disk_field(position, cfg_); }

FieldSample DiskField::sample(const Vec3& position) const {
  const auto fj = disk_field_with_jacobian(position, cfg_);
  FieldSample s;
  s.position = position;
  s.field_vector = fj.field;
  s.magnitude = fj.field.norm();
  // d|E|/dx_j = sum_i E_i dE_i/dx_j / |E|; left at zero on a field node.
  if (s.magnitude > 0.0) s.gradient_of_magnitude = fj.jacobian.transpose() * fj.field / s.magnitude;
  return s;
}

std::unique_ptr<FieldProvider> make_field_provider(FieldModel model, const FieldConfig& cfg) {
  if (model == FieldModel::Disk) return std::make_unique<DiskField>(cfg);
  return std::make_unique<ExponentialField>(cfg);
}

FieldGrid field_map_2d(const AxisRange& x, const AxisRange& z, const FieldProvider& provider) {
  if (x.n < 1 || z.n < 2) throw Error(ErrorKind::Domain, "field map needs n_x >= 1 and n_z >= 2");
  if (!(x.hi >= x.lo) || !(z.hi > z.lo)) throw Error(ErrorKind::Domain, "field map ranges must be nonempty");
  if (!(z.lo > 0.0)) {
    const double R = provider.config().disk_radius;
    const bool touches_disk = provider.name() == "disk" && z.lo == 0.0 && x.lo < R && x.hi > -R;
    throw Error(touches_disk ? ErrorKind::Singular : ErrorKind::Domain,
                "field map z range must lie strictly above the chip surface");
  }

  FieldGrid grid{x, z, {}};
  grid.samples.resize(static_cast<size_t>(x.n) * z.n);
  parallel_for(grid.samples.size(), [&](size_t k) {
    const int ix = static_cast<int>(k % x.n);
    const int iz = static_cast<int>(k / x.n);
    grid.samples[k] = provider.sample(Vec3(x.at(ix), 0.0, z.at(iz)));
  });
  return grid;
}

}  // namespace rydchip
