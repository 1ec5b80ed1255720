#pragma once

#include <functional>

namespace cavloss {

struct QuadratureResult {
    double value = 0;
    double error_estimate = 0; // absolute
    int evaluations = 0;
    bool converged = false;
};

/// Adaptive Gauss-Kronrod (7,15) integration of f over [a, b].
/// Subdivides the worst interval until the global error estimate satisfies
///   err <= max(abs_tol, rel_tol * |integral|)
/// or the interval budget is exhausted (converged = false in that case).
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    double rel_tol = 1e-10,
                                    double abs_tol = 0.0,
                                    int max_intervals = 2000);

/// Same, but throws NumericalError with diagnostics when not converged.
double integrate_or_throw(const std::function<double(double)>& f,
                          double a, double b,
                          double rel_tol = 1e-10,
                          double abs_tol = 0.0,
                          const char* what = "integral");

} // namespace cavloss
