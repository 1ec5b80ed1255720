#include "cavloss/loss.hpp"
#include "cavloss/errors.hpp"
#include "cavloss/scenario.hpp"

#include <cmath>

namespace cavloss {

namespace {

// log(sinh x) for x > 0 without overflow: x + log1p(-e^(-2x)) - log 2
double log_sinh(double x)
{
    return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
}

// sinh(a)/sinh(b) for a, b >= 0, overflow-safe
double sinh_ratio(double a, double b)
{
    if (a == b)
        return 1.0;
    if (a == 0.0)
        return 0.0;
    return std::exp(log_sinh(a) - log_sinh(b));
}

} // namespace

LossResult loss_probability(double linewidth, double collective_linewidth,
                            double t_outer, double t_inner)
{
    if (!(linewidth > 0) || !(collective_linewidth > 0))
        throw ConfigError("loss probability: decay rates must be positive");
    if (!(t_outer >= 0) || !(t_inner >= 0) || !(t_outer + t_inner > 0))
        throw ConfigError("loss probability: need non-negative times with t_c + t_e > 0");

    const double a = linewidth * t_inner;                  // Gamma t_e
    const double b0 = a + linewidth * t_outer;             // Gamma t_0
    const double bc = a + collective_linewidth * t_outer;  // Gamma t_e + Gamma_c t_c

    LossResult r;
    r.loss_free = sinh_ratio(a, b0);
    r.loss_cavity = sinh_ratio(a, bc);
    r.ratio = r.loss_free > 0 ? r.loss_cavity / r.loss_free : 0.0;
    r.gamma_t_outer = linewidth * t_outer;
    r.gamma_t_inner = a;
    r.gamma_t_total = b0;
    r.approx_ratio = std::exp(-(collective_linewidth - linewidth) * t_outer);
    return r;
}

double loss_series(double linewidth, double collective_linewidth,
                   double t_outer, double t_inner, int n_terms)
{
    if (n_terms < 1)
        throw ConfigError("loss series: need n_terms >= 1");
    const double capture = 1.0 - std::exp(-2.0 * linewidth * t_inner);
    double sum = 0.0;
    for (int k = 1; k <= n_terms; ++k) {
        const double exponent = -(2.0 * k - 1.0) * collective_linewidth * t_outer -
                                2.0 * (k - 1.0) * linewidth * t_inner;
        sum += capture * std::exp(exponent);
    }
    return sum;
}

SuppressionResult suppression_pipeline(const Scenario& scenario, ExecPolicy policy)
{
    SuppressionResult out;

    const PairPotential pot = PairPotential::for_species(scenario.species);
    const double linewidth = quasimolecule_linewidth(scenario.species);

    out.geometry = collision_times(pot, scenario.species.reduced_mass(),
                                   scenario.detuning, linewidth,
                                   scenario.resonant_energy_window());
    out.pair_count_real = excited_pair_count(scenario.atom_number,
                                             scenario.atom_density,
                                             out.geometry.condon_radius,
                                             out.geometry.shell_width);
    out.pair_count = scenario.effective_pair_count(out.pair_count_real);

    const ModeFamily family = make_mode_family(scenario);
    out.emission = monte_carlo_emission(family,
                                        emission_inputs(scenario, out.pair_count),
                                        policy);

    const double mean_rate = out.emission.rate_ratio_mean * linewidth;
    out.aggregate = loss_probability(linewidth, mean_rate,
                                     out.geometry.time_outer, out.geometry.time_inner);
    out.per_set.reserve(out.emission.per_set_rate_ratio.size());
    for (double ratio : out.emission.per_set_rate_ratio)
        out.per_set.push_back(loss_probability(linewidth, ratio * linewidth,
                                               out.geometry.time_outer,
                                               out.geometry.time_inner));
    return out;
}

} // namespace cavloss
