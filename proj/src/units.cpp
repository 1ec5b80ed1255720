#include "cavloss/units.hpp"
#include "cavloss/errors.hpp"

#include <cmath>

namespace cavloss {

namespace {

// Factor taking a value of unit u to the internal unit of its dimension
// (cm, rad/s, erg, s, erg cm^3, cm^-3, g).
double to_internal_factor(Unit u)
{
    using namespace constants;
    switch (u) {
        case Unit::cm:        return 1.0;
        case Unit::mm:        return 1e-1;
        case Unit::um:        return 1e-4;
        case Unit::nm:        return 1e-7;
        case Unit::angstrom:  return 1e-8;
        case Unit::rad_s:     return 1.0;
        case Unit::MHz:       return two_pi * 1e6;
        case Unit::GHz:       return two_pi * 1e9;
        case Unit::erg:       return 1.0;
        case Unit::mK:        return boltzmann * 1e-3;
        case Unit::MHz_energy: return hbar * two_pi * 1e6;
        case Unit::s:         return 1.0;
        case Unit::ns:        return 1e-9;
        case Unit::us:        return 1e-6;
        case Unit::erg_cm3:   return 1.0;
        case Unit::erg_A3:    return 1e-24;
        case Unit::per_cm3:   return 1.0;
        case Unit::g:         return 1.0;
        case Unit::amu:       return constants::amu;
    }
    throw ConfigError("unknown unit tag");
}

} // namespace

Dimension dimension_of(Unit u)
{
    switch (u) {
        case Unit::cm: case Unit::mm: case Unit::um: case Unit::nm: case Unit::angstrom:
            return Dimension::length;
        case Unit::rad_s: case Unit::MHz: case Unit::GHz:
            return Dimension::angular_frequency;
        case Unit::erg: case Unit::mK: case Unit::MHz_energy:
            return Dimension::energy;
        case Unit::s: case Unit::ns: case Unit::us:
            return Dimension::time;
        case Unit::erg_cm3: case Unit::erg_A3:
            return Dimension::c3_coefficient;
        case Unit::per_cm3:
            return Dimension::number_density;
        case Unit::g: case Unit::amu:
            return Dimension::mass;
    }
    throw ConfigError("unknown unit tag");
}

const char* unit_name(Unit u)
{
    switch (u) {
        case Unit::cm: return "cm";
        case Unit::mm: return "mm";
        case Unit::um: return "um";
        case Unit::nm: return "nm";
        case Unit::angstrom: return "A";
        case Unit::rad_s: return "rad/s";
        case Unit::MHz: return "MHz";
        case Unit::GHz: return "GHz";
        case Unit::erg: return "erg";
        case Unit::mK: return "mK";
        case Unit::MHz_energy: return "MHz(energy)";
        case Unit::s: return "s";
        case Unit::ns: return "ns";
        case Unit::us: return "us";
        case Unit::erg_cm3: return "erg_cm3";
        case Unit::erg_A3: return "erg_A3";
        case Unit::per_cm3: return "cm^-3";
        case Unit::g: return "g";
        case Unit::amu: return "amu";
    }
    return "?";
}

double convert(double value, Unit from, Unit to)
{
    if (dimension_of(from) != dimension_of(to))
        throw ConfigError(std::string("unit dimension mismatch: cannot convert ") +
                          unit_name(from) + " to " + unit_name(to));
    if (from == to)
        return value;
    return value * (to_internal_factor(from) / to_internal_factor(to));
}

double AtomSpecies::atomic_dipole() const
{
    using namespace constants;
    const double gamma_pair = 2.0 * gamma_atom;
    const double c3l = speed_of_light;
    return std::sqrt(3.0 * hbar * c3l * c3l * c3l * gamma_pair /
                     (8.0 * omega_atom * omega_atom * omega_atom));
}

double AtomSpecies::pair_dipole() const
{
    return std::sqrt(2.0) * atomic_dipole();
}

void AtomSpecies::validate() const
{
    if (!(mass > 0))
        throw ConfigError("species '" + name + "': mass must be positive");
    if (!(omega_atom > 0))
        throw ConfigError("species '" + name + "': transition frequency must be positive");
    if (!(gamma_atom > 0))
        throw ConfigError("species '" + name + "': decay rate must be positive");
    if (!(c3 > 0))
        throw ConfigError("species '" + name + "': C3 must be positive");
}

double quasimolecule_linewidth(const AtomSpecies& species)
{
    return 2.0 * species.gamma_atom;
}

AtomSpecies rb85()
{
    AtomSpecies s;
    s.name = "Rb85";
    s.mass = 85.0 * constants::amu;
    s.omega_atom = constants::two_pi * constants::speed_of_light / convert(795.0, Unit::nm, Unit::cm);
    s.gamma_atom = convert(6.0, Unit::MHz, Unit::rad_s);
    s.c3 = convert(11.4e-11, Unit::erg_A3, Unit::erg_cm3);
    return s;
}

} // namespace cavloss
