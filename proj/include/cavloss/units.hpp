#pragma once

#include <string>

namespace cavloss {

// Internal unit system is CGS-Gaussian: cm, g, s, erg, statC, rad/s.
// Boundary I/O additionally accepts Angstrom, mm, um, nm, MHz, GHz, mK, amu,
// erg*A^3; conversions are exact multiplicative factors.

namespace constants {
inline constexpr double hbar = 1.054571e-27;       // erg s
inline constexpr double speed_of_light = 2.99792458e10; // cm/s
inline constexpr double amu = 1.660539e-24;        // g
inline constexpr double boltzmann = 1.380649e-16;  // erg/K
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
} // namespace constants

enum class Unit {
    // length
    cm,
    mm,
    um,
    nm,
    angstrom,
    // angular frequency (MHz/GHz are ordinary frequencies: a 2*pi factor
    // is applied on conversion to rad/s)
    rad_s,
    MHz,
    GHz,
    // energy (mK converts through k_B, MHz through hbar * 2*pi * 1e6)
    erg,
    mK,
    MHz_energy,
    // time
    s,
    ns,
    us,
    // dipole-dipole coefficient
    erg_cm3,
    erg_A3,
    // number density
    per_cm3,
    // mass
    g,
    amu,
};

enum class Dimension {
    length,
    angular_frequency,
    energy,
    time,
    c3_coefficient,
    number_density,
    mass,
};

Dimension dimension_of(Unit u);
const char* unit_name(Unit u);

/// Exact factor conversion between units of the same dimension.
/// Throws ConfigError on a dimension mismatch.
double convert(double value, Unit from, Unit to);

/// One atomic species plus the excited molecular C3 coefficient.
/// The quasimolecule linewidth (2*gamma_atom) and the dipole moment are
/// derived quantities, never stored.
struct AtomSpecies {
    std::string name;
    double mass = 0;        // g
    double omega_atom = 0;  // rad/s, S1/2 -> P1/2
    double gamma_atom = 0;  // rad/s, atomic decay rate
    double c3 = 0;          // erg cm^3, excited-state dipole-dipole coefficient

    double reduced_mass() const { return mass / 2.0; }

    /// Atomic dipole moment d_A in statC cm, from 2*gamma_A = 8 d_A^2 w_A^3 / (3 hbar c^3).
    double atomic_dipole() const;

    /// Quasimolecule dipole magnitude sqrt(2) d_A.
    double pair_dipole() const;

    void validate() const; // throws ConfigError
};

/// Quasimolecule decay rate: twice the atomic rate.
double quasimolecule_linewidth(const AtomSpecies& species);

/// Built-in Rb-85 preset: mass 85 amu, lambda 795 nm, gamma/2pi = 6 MHz,
/// C3 = 11.4e-11 erg A^3.
AtomSpecies rb85();

} // namespace cavloss
