#pragma once

#include <cmath>

namespace rydchip {

struct Minimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for a minimum of a unimodal f on [a, b], stopping
/// when the bracket is narrower than `tol`.
template <class F>
Minimum golden_section_minimize(F&& f, double a, double b, double tol) {
  constexpr double inv_phi = 0.6180339887498948482;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (std::abs(b - a) > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? Minimum{c, fc} : Minimum{d, fd};
}

/// Maximum of f by minimising -f.
template <class F>
Minimum golden_section_maximize(F&& f, double a, double b, double tol) {
  auto m = golden_section_minimize([&](double x) { return -f(x); }, a, b, tol);
  m.value = -m.value;
  return m;
}

}  // namespace rydchip
