#pragma once

#include "cavloss/emission.hpp"
#include "cavloss/kinematics.hpp"

#include <vector>

namespace cavloss {

struct Scenario;

/// Multi-passage radiative-escape loss probabilities and their ratio.
struct LossResult {
    double loss_free = 0;     // L_0, no cavity
    double loss_cavity = 0;   // L_c, with cavity
    double ratio = 0;         // p = L_c / L_0
    double gamma_t_outer = 0; // Gamma * t_c
    double gamma_t_inner = 0; // Gamma * t_e
    double gamma_t_total = 0; // Gamma * t_0
    double approx_ratio = 0;  // exp(-(Gamma_c - Gamma) t_c)
};

/// Closed-form loss probabilities from the two-rate survival model:
///   L_c = sinh(Gamma t_e) / sinh(Gamma t_e + Gamma_c t_c),
///   L_0 = the same at Gamma_c = Gamma.
/// Evaluated in the log domain, so large exponents do not overflow.
LossResult loss_probability(double linewidth, double collective_linewidth,
                            double t_outer, double t_inner);

/// Direct truncated passage-by-passage sum,
///   sum_{k=1..n} (1 - e^(-2 Gamma t_e)) e^(-(2k-1) Gamma_c t_c - 2(k-1) Gamma t_e);
/// converges to the closed form as n grows. Kept as an independent check.
double loss_series(double linewidth, double collective_linewidth,
                   double t_outer, double t_inner, int n_terms);

/// Full chain for one scenario: collision timing, Monte Carlo emission, and
/// the loss probabilities from the mean collective rate (plus per-set values).
struct SuppressionResult {
    CollisionGeometry geometry;
    double pair_count_real = 0;
    int pair_count = 0;
    EmissionResult emission;
    LossResult aggregate;                // from the mean collective rate
    std::vector<LossResult> per_set;     // from each set's collective rate
};

SuppressionResult suppression_pipeline(const Scenario& scenario,
                                       ExecPolicy policy = ExecPolicy::parallel);

} // namespace cavloss
