#pragma once

#include "fracspec/grid.hpp"

namespace fracspec {

struct DilationOptions {
  /// Largest admissible fraction of L^2 mass that the dilation pushes out of
  /// the box.
  double max_wrapped_fraction = 1e-8;
};

/// Fraction of ||u||^2 carried by points outside the scaled box [-tL, tL)^N,
/// which is exactly the mass v_t would lose to the periodic boundary.
double dilation_wrapped_fraction(const Field& u, double t);

/// v_t(x) = t^{N/2} u(t x), evaluating u through its band-limited
/// (trigonometric) interpolant. t = 1 returns u unchanged.
Field dilate(const Field& u, double t, const DilationOptions& options = {});

}  // namespace fracspec
