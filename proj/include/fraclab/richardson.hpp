#pragma once

#include <functional>

#include "fraclab/geometry.hpp"

namespace fraclab {

/// Central finite differences with Richardson extrapolation (`steps` halvings
/// of the initial stride h0). Accuracy is the caller's concern; err, when
/// requested, reports the last extrapolation gap.
double richardson_derivative(const std::function<double(double)>& f, double x, double h0,
                             int steps, double* err = nullptr);

double richardson_second_derivative(const std::function<double(double)>& f, double x,
                                    double h0, int steps, double* err = nullptr);

Vec richardson_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                        double h0, int steps);

SymMat richardson_hessian(const std::function<double(const Vec&)>& f, const Vec& x,
                          double h0, int steps);

}  // namespace fraclab
