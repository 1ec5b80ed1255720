#pragma once

#include "cavloss/units.hpp"

#include <optional>

namespace cavloss {

/// Excited-state long-range pair potential U(R) = -C3/R^3.
/// The optional ground-state -C6/R^6 coefficient is carried for completeness
/// but plays no role in the loss dynamics.
struct PairPotential {
    double c3 = 0;                  // erg cm^3
    std::optional<double> c6;       // erg cm^6
    double omega_atom = 0;          // rad/s

    double energy(double r_cm) const { return -c3 / (r_cm * r_cm * r_cm); }
    double energy_slope(double r_cm) const { return 3.0 * c3 / (r_cm * r_cm * r_cm * r_cm); }

    /// Molecular resonance frequency w_R(R) = w_A - C3/(hbar R^3).
    double resonance_frequency(double r_cm) const
    {
        return omega_atom + energy(r_cm) / constants::hbar;
    }

    static PairPotential for_species(const AtomSpecies& s)
    {
        return PairPotential{s.c3, std::nullopt, s.omega_atom};
    }
};

/// Resonance geometry and trajectory timing for one scenario.
struct CollisionGeometry {
    double condon_radius = 0;   // cm, R where the laser is resonant
    double shell_width = 0;     // cm, excitation shell about the Condon radius
    double inner_radius = 0;    // cm, inner edge of the no-loss region
    double time_outer = 0;      // s, Condon radius -> inner radius
    double time_inner = 0;      // s, inner radius -> R = 0
    double time_total = 0;      // s, sum of the two

    void validate() const; // throws NumericalError on broken invariants
};

/// Radius where the molecular transition is resonant with a laser red-detuned
/// by `detuning` (< 0): R = (C3 / (hbar |detuning|))^(1/3).
/// Throws ConfigError for detuning >= 0.
double condon_point(const PairPotential& pot, double detuning);

/// Width of the excitation shell, hbar*Gamma / |U'(R_c)|.
double excitation_shell_width(const PairPotential& pot, double condon_radius,
                              double linewidth);

/// Inner radius of the region where emission is still resonant within an
/// energy window of hbar*W: solves U(R_c) - U(R_e) = hbar*W.
double inner_resonant_radius(const PairPotential& pot, double condon_radius,
                             double energy_window);

/// Time to fall from r_from to r_to on U(R), having started at rest at
/// r_start (conservation of energy; the inverse-square-root turning-point
/// singularity at r_start is removed by the substitution u^2 = r_start - R).
/// Relative accuracy 1e-6; throws NumericalError when the quadrature fails.
double traversal_time(const PairPotential& pot, double reduced_mass,
                      double r_start, double r_from, double r_to);

/// Full resonance geometry: radii, shell width and traversal times for a
/// laser detuning, pair linewidth and resonant energy window (rad/s).
CollisionGeometry collision_times(const PairPotential& pot, double reduced_mass,
                                  double detuning, double linewidth,
                                  double energy_window);

/// Estimated number of simultaneously excited pairs,
/// N = (1/2) N_A n_A 4 pi R_c^2 dR (real-valued).
double excited_pair_count(double atom_number, double atom_density,
                          double condon_radius, double shell_width);

/// Rounded pair count used for sampling (at least 1).
int rounded_pair_count(double n_real);

} // namespace cavloss
