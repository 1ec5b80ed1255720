#include "cavloss/kinematics.hpp"
#include "cavloss/errors.hpp"
#include "cavloss/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace cavloss {

using constants::hbar;
using constants::pi;

void CollisionGeometry::validate() const
{
    if (!(condon_radius > 0) || !(inner_radius > 0) || !(inner_radius < condon_radius))
        throw NumericalError("collision geometry: need 0 < R_e < R_c");
    if (!(shell_width > 0))
        throw NumericalError("collision geometry: shell width must be positive");
    if (!(time_outer > 0) || !(time_inner > 0))
        throw NumericalError("collision geometry: traversal times must be positive");
}

double condon_point(const PairPotential& pot, double detuning)
{
    if (!(detuning < 0))
        throw ConfigError("no resonance: excitation must be red detuned (detuning < 0)");
    return std::cbrt(pot.c3 / (hbar * (-detuning)));
}

double excitation_shell_width(const PairPotential& pot, double condon_radius,
                              double linewidth)
{
    return hbar * linewidth / pot.energy_slope(condon_radius);
}

double inner_resonant_radius(const PairPotential& pot, double condon_radius,
                             double energy_window)
{
    if (!(energy_window > 0))
        throw ConfigError("inner resonant radius: energy window must be positive");
    const double rc3 = condon_radius * condon_radius * condon_radius;
    return std::cbrt(pot.c3 / (pot.c3 / rc3 + hbar * energy_window));
}

double traversal_time(const PairPotential& pot, double reduced_mass,
                      double r_start, double r_from, double r_to)
{
    if (!(r_to >= 0) || !(r_to <= r_from) || !(r_from <= r_start))
        throw ConfigError("traversal time: need 0 <= r_to <= r_from <= r_start");
    if (r_from == r_to)
        return 0.0;

    const double e_start = pot.energy(r_start);
    // dt = dR / v, v = sqrt(2 (E_start - U(R)) / mu).  With u = sqrt(r_start - R)
    // the integrand 2u/v(r_start - u^2) stays bounded through the turning point.
    auto integrand = [&](double u) {
        const double r = r_start - u * u;
        if (r <= 0)
            return 0.0;
        const double v2 = 2.0 * (e_start - pot.energy(r)) / reduced_mass;
        if (v2 <= 0) {
            // turning point itself (u = 0): 2u/v -> sqrt(2 mu / U'(r_start))
            const double slope = pot.energy_slope(r_start);
            return slope > 0 ? std::sqrt(2.0 * reduced_mass / slope) : 0.0;
        }
        return 2.0 * u / std::sqrt(v2);
    };

    const double u_lo = std::sqrt(r_start - r_from);
    const double u_hi = std::sqrt(r_start - r_to);
    return integrate_or_throw(integrand, u_lo, u_hi, 1e-8, 0.0, "traversal time");
}

CollisionGeometry collision_times(const PairPotential& pot, double reduced_mass,
                                  double detuning, double linewidth,
                                  double energy_window)
{
    CollisionGeometry g;
    g.condon_radius = condon_point(pot, detuning);
    g.shell_width = excitation_shell_width(pot, g.condon_radius, linewidth);
    g.inner_radius = inner_resonant_radius(pot, g.condon_radius, energy_window);
    g.time_outer = traversal_time(pot, reduced_mass, g.condon_radius,
                                  g.condon_radius, g.inner_radius);
    g.time_inner = traversal_time(pot, reduced_mass, g.condon_radius,
                                  g.inner_radius, 0.0);
    g.time_total = g.time_outer + g.time_inner;
    g.validate();
    return g;
}

double excited_pair_count(double atom_number, double atom_density,
                          double condon_radius, double shell_width)
{
    if (!(atom_number >= 0) || !(atom_density >= 0) ||
        !(condon_radius > 0) || !(shell_width >= 0))
        throw ConfigError("excited pair count: inputs must be non-negative");
    return 0.5 * atom_number * atom_density * 4.0 * pi *
           condon_radius * condon_radius * shell_width;
}

int rounded_pair_count(double n_real)
{
    const long n = std::lround(n_real);
    return n < 1 ? 1 : static_cast<int>(n);
}

} // namespace cavloss
