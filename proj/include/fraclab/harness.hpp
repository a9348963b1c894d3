#pragma once

#include <string>

#include "fraclab/config.hpp"
#include "fraclab/field.hpp"
#include "fraclab/report.hpp"

#include "json.hpp"

namespace fraclab {

/// Quadrature trust anchors: constant fields, the 1d Poisson-profile closed
/// form, scaling/translation identities and the step-family constant.
VerificationReport verify_oracles(const ExperimentConfig& cfg);

/// The smooth family v_j: plateau and derivative decay on a compact set, the
/// operator limit -1, the scaling identity, and the leak estimate b = 1.
VerificationReport verify_thm12(const ExperimentConfig& cfg);

/// The blow-up family u_lambda / K_lambda: window, derivative bounds, Hessian
/// sign structure, gradient lower bound after the shift, the rescaled
/// equation and the blow-up of the minimum.
VerificationReport verify_thm13(const ExperimentConfig& cfg);

/// The convergence-theorem machinery: decomposition identity, tail-mass
/// monotonicity, the two-sided comparison and the iterated-limit estimate.
VerificationReport verify_thm11_b(const ExperimentConfig& cfg);

/// Builds an evaluatable field from a JSON descriptor (CLI `eval`).
ScalarField field_from_descriptor(const nlohmann::json& desc, int n, double sigma);

int run_cli(int argc, char** argv);

}  // namespace fraclab
