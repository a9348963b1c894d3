#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

/// Evaluation point violates the field's smooth window.
struct NonSmoothPoint : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Tail descriptor fails the L_sigma membership requirement.
struct DivergentTail : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Adaptive quadrature exhausted its subdivision budget above tolerance.
struct ToleranceNotMet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Radial fast path requested on a field without a radial profile.
struct NotRadial : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Tail-mass evaluation point lies outside the ball B_R.
struct PointOutsideBall : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Kernel-derivative integrand not supported away from the evaluation point.
struct SingularKernel : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Decomposition radius too small relative to the evaluation point.
struct RadiusTooSmall : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Iterated-limit estimator failed its convergence gate.
struct NonConvergent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Gradient lower-bound verification failed on the shifted ball.
struct DeltaSearchFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fraclab
