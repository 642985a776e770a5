#pragma once

// Adaptive Gauss-Kronrod (G7/K15) quadrature over vector-valued integrands.
// The integrand returns any fixed-size Eigen column vector; the caller
// decides when the running total is converged through an acceptance
// predicate, so components of different scale can carry separate tolerances.

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace rydchip::quad {

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the 7-point rule, aligned with odd Kronrod nodes (1,3,5,7).
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

template <class Vector>
struct Estimate {
  Vector value;
  Vector error;
};

/// One K15 panel with its embedded G7 error estimate.
template <class Vector, class F>
Estimate<Vector> gauss_kronrod_15(F&& f, double a, double b) {
  using namespace detail;
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  Vector fc = f(center);
  Vector kronrod = kronrod_weights[7] * fc;
  Vector gauss = gauss_weights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kronrod_nodes[i];
    Vector sum = f(center - dx) + f(center + dx);
    kronrod += kronrod_weights[i] * sum;
    if (i % 2 == 1) gauss += gauss_weights[i / 2] * sum;
  }
  Estimate<Vector> out{kronrod * half, ((kronrod - gauss) * half).cwiseAbs()};
  return out;
}

/// Globally adaptive integration: the panel with the largest error is
/// bisected until `accept(total_value, total_error)` holds or `max_panels`
/// panels are in use. Errors are combined component-wise.
template <class Vector, class F, class Accept>
Vector integrate_adaptive(F&& f, double a, double b, Accept&& accept, int max_panels = 400) {
  struct Panel {
    double a, b;
    Estimate<Vector> est;
    double weight;  // max error component, used for ordering
  };
  std::vector<Panel> panels;
  panels.reserve(static_cast<size_t>(max_panels));
  auto make = [&](double lo, double hi) {
    auto est = gauss_kronrod_15<Vector>(f, lo, hi);
    const double w = est.error.maxCoeff();
    return Panel{lo, hi, std::move(est), w};
  };
  auto by_error = [](const Panel& l, const Panel& r) { return l.weight < r.weight; };

  panels.push_back(make(a, b));
  Vector value = panels.front().est.value;
  Vector error = panels.front().est.error;
  while (!accept(value, error) && static_cast<int>(panels.size()) < max_panels) {
    std::pop_heap(panels.begin(), panels.end(), by_error);
    Panel worst = std::move(panels.back());
    panels.pop_back();
    if (!(worst.b - worst.a > 4.0 * std::numeric_limits<double>::epsilon() *
                                  std::max(std::abs(worst.a), std::abs(worst.b)))) {
      panels.push_back(std::move(worst));
      std::push_heap(panels.begin(), panels.end(), by_error);
      break;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = make(worst.a, mid);
    Panel right = make(mid, worst.b);
    value += left.est.value + right.est.value - worst.est.value;
    error += left.est.error + right.est.error - worst.est.error;
    panels.push_back(std::move(left));
    std::push_heap(panels.begin(), panels.end(), by_error);
    panels.push_back(std::move(right));
    std::push_heap(panels.begin(), panels.end(), by_error);
  }
  // Re-sum to shed the round-off accumulated by incremental updates.
  value.setZero();
  for (const auto& p : panels) value += p.est.value;
  return value;
}

}  // namespace rydchip::quad
