#pragma once

// Static electric field above the chip: an adsorbate patch modelled as a
// uniformly charged disk in the z=0 plane, plus a homogeneous bias field
// along z. Two providers share one interface: the full disk model and the
// one-dimensional exponential approximation F(z) = F0 exp(-z/zeta) + F_bias.
//
// Units on this interface: positions in um, fields in V/cm, gradients in
// V/cm per um, surface charge density in C/um^2.

#include <Eigen/Core>

#include <memory>
#include <string_view>
#include <vector>

namespace rydchip {

using Vec3 = Eigen::Vector3d;

struct FieldConfig {
  double disk_radius = 83.0;         // um
  double charge_density = 6.45e-20;  // C/um^2
  double F0 = 37.0;                  // V/cm, exponential-model surface field
  double zeta = 70.0;                // um, exponential decay length
  double F_bias = -30.0;             // V/cm, signed, along z

  /// Throws Error(Domain) when an invariant is violated.
  void validate() const;
};

struct FieldSample {
  Vec3 position = Vec3::Zero();
  Vec3 field_vector = Vec3::Zero();
  double magnitude = 0.0;
  Vec3 gradient_of_magnitude = Vec3::Zero();
};

/// Signed field of the exponential model at height z (um). Throws for z < 0.
double exponential_field(double z, const FieldConfig& cfg);

/// dF/dz of the exponential model, V/cm per um.
double exponential_field_slope(double z, const FieldConfig& cfg);

/// Closed-form on-axis field of the bare disk (no bias), V/cm.
double disk_field_on_axis(double z, const FieldConfig& cfg);

/// Disk field plus bias at `position`, by adaptive quadrature over the disk.
Vec3 disk_field(const Vec3& position, const FieldConfig& cfg);

/// Disk field together with its Jacobian dE_i/dx_j (V/cm per um).
struct FieldWithJacobian {
  Vec3 field = Vec3::Zero();
  Eigen::Matrix3d jacobian = Eigen::Matrix3d::Zero();
};
FieldWithJacobian disk_field_with_jacobian(const Vec3& position, const FieldConfig& cfg);

class FieldProvider {
 public:
  virtual ~FieldProvider() = default;

  virtual std::string_view name() const = 0;
  virtual Vec3 field(const Vec3& position) const = 0;
  virtual FieldSample sample(const Vec3& position) const = 0;

  double magnitude(const Vec3& position) const { return field(position).norm(); }
  /// |F| on the symmetry axis, the one-dimensional view used by the trap.
  double magnitude_on_axis(double z) const { return magnitude(Vec3(0.0, 0.0, z)); }

  const FieldConfig& config() const { return cfg_; }

 protected:
  explicit FieldProvider(const FieldConfig& cfg);
  FieldConfig cfg_;
};

class ExponentialField final : public FieldProvider {
 public:
  explicit ExponentialField(const FieldConfig& cfg) : FieldProvider(cfg) {}
  std::string_view name() const override { return "exponential"; }
  Vec3 field(const Vec3& position) const override;
  FieldSample sample(const Vec3& position) const override;
};

class DiskField final : public FieldProvider {
 public:
  explicit DiskField(const FieldConfig& cfg) : FieldProvider(cfg) {}
  std::string_view name() const override { return "disk"; }
  Vec3 field(const Vec3& position) const override;
  FieldSample sample(const Vec3& position) const override;
};

enum class FieldModel { Disk, Exponential };

std::unique_ptr<FieldProvider> make_field_provider(FieldModel model, const FieldConfig& cfg);

struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
  int n = 2;

  double at(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

/// Samples on the y=0 plane, row-major in z then x: index = iz * x.n + ix.
struct FieldGrid {
  AxisRange x;
  AxisRange z;
  std::vector<FieldSample> samples;

  const FieldSample& at(int ix, int iz) const { return samples[static_cast<size_t>(iz) * x.n + ix]; }
};

/// Grid of samples at y=0. The z range must lie strictly above the chip;
/// n_z >= 2 and n_x >= 1 (a single column is allowed for axial profiles).
FieldGrid field_map_2d(const AxisRange& x, const AxisRange& z, const FieldProvider& provider);

}  // namespace rydchip
