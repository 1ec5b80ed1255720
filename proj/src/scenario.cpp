#include "cavloss/scenario.hpp"
#include "cavloss/errors.hpp"
#include "cavloss/kinematics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace cavloss {

using constants::hbar;
using constants::two_pi;

double Scenario::resonant_energy_window() const
{
    return std::min(cavity.cavity_linewidth, 2.0 * trap_depth / hbar);
}

void Scenario::normalize_and_validate()
{
    species.validate();
    if (!(detuning < 0))
        throw ConfigError("scenario: detuning must be negative (red detuned)");
    if (cavity.wavelength <= 0)
        cavity.wavelength = two_pi * constants::speed_of_light / omega_laser();
    cavity.validate();
    cloud.validate();
    if (!(atom_number > 0))
        throw ConfigError("scenario: atom_number must be positive");
    if (!(atom_density > 0))
        throw ConfigError("scenario: atom_density must be positive");
    if (!(trap_depth > 0))
        throw ConfigError("scenario: trap_depth must be positive");
    if (n_pairs_override && *n_pairs_override < 1)
        throw ConfigError("scenario: n_pairs must be at least 1");
    if (n_sets < 1)
        throw ConfigError("scenario: n_sets must be at least 1");
    if (q_max < 0)
        throw ConfigError("scenario: q_max must be non-negative");
    if (workers < 0)
        throw ConfigError("scenario: workers must be non-negative");
}

int Scenario::effective_pair_count(double pair_count_real) const
{
    if (n_pairs_override)
        return *n_pairs_override;
    return rounded_pair_count(pair_count_real);
}

namespace {

std::string trim(const std::string& s)
{
    std::size_t a = s.find_first_not_of(" \t\r\n");
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

double parse_number(const std::string& tok, const std::string& key, int line)
{
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw ConfigError("scenario line " + std::to_string(line) + ": key '" +
                          key + "': cannot parse number '" + tok + "'");
    return v;
}

std::optional<Unit> unit_from_string(const std::string& s)
{
    static const std::map<std::string, Unit> table = {
        {"cm", Unit::cm},         {"mm", Unit::mm},       {"um", Unit::um},
        {"nm", Unit::nm},         {"A", Unit::angstrom},  {"angstrom", Unit::angstrom},
        {"rad/s", Unit::rad_s},   {"MHz", Unit::MHz},     {"GHz", Unit::GHz},
        {"erg", Unit::erg},       {"mK", Unit::mK},
        {"s", Unit::s},           {"ns", Unit::ns},       {"us", Unit::us},
        {"erg_cm3", Unit::erg_cm3}, {"erg_A3", Unit::erg_A3},
        {"cm^-3", Unit::per_cm3}, {"g", Unit::g},         {"amu", Unit::amu},
    };
    auto it = table.find(s);
    if (it == table.end())
        return std::nullopt;
    return it->second;
}

struct RawValue {
    double number = 0;
    std::optional<Unit> unit;
    int line = 0;
    std::string key;
};

// converts to the internal unit of the expected dimension; a bare number is
// taken to be already internal (or dimensionless)
double in_internal(const RawValue& v, Dimension dim, Unit internal)
{
    if (!v.unit)
        return v.number;
    Unit u = *v.unit;
    // trap depth quoted in MHz is an energy: hbar * (2 pi * 1e6) per MHz
    if (dim == Dimension::energy && u == Unit::MHz)
        u = Unit::MHz_energy;
    if (dimension_of(u) != dim)
        throw ConfigError("scenario line " + std::to_string(v.line) + ": key '" +
                          v.key + "': unit '" + unit_name(u) +
                          "' has the wrong dimension");
    return convert(v.number, u, internal);
}

double dimensionless(const RawValue& v)
{
    if (v.unit)
        throw ConfigError("scenario line " + std::to_string(v.line) + ": key '" +
                          v.key + "': expected a bare number");
    return v.number;
}

long integer_value(const RawValue& v)
{
    const double d = dimensionless(v);
    const double r = std::round(d);
    if (std::abs(d - r) > 1e-9 || std::abs(d) > 9e15)
        throw ConfigError("scenario line " + std::to_string(v.line) + ": key '" +
                          v.key + "': expected an integer");
    return static_cast<long>(r);
}

} // namespace

Scenario load_scenario(const std::string& path_or_default)
{
    Scenario scn;
    if (path_or_default.empty() || path_or_default == "default") {
        scn.normalize_and_validate();
        return scn;
    }

    std::ifstream in(path_or_default);
    if (!in)
        throw ConfigError("scenario: cannot open '" + path_or_default + "'");

    bool species_is_preset = true;
    std::string linebuf;
    int lineno = 0;
    while (std::getline(in, linebuf)) {
        ++lineno;
        const std::size_t hash = linebuf.find('#');
        if (hash != std::string::npos)
            linebuf.erase(hash);
        const std::string line = trim(linebuf);
        if (line.empty())
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("scenario line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        std::istringstream rest(line.substr(eq + 1));
        std::string tok1, tok2, extra;
        rest >> tok1 >> tok2 >> extra;
        if (tok1.empty())
            throw ConfigError("scenario line " + std::to_string(lineno) + ": key '" +
                              key + "': missing value");
        if (!extra.empty())
            throw ConfigError("scenario line " + std::to_string(lineno) + ": key '" +
                              key + "': trailing input '" + extra + "'");

        if (key == "species") {
            if (!tok2.empty())
                throw ConfigError("scenario line " + std::to_string(lineno) +
                                  ": species takes a single name");
            if (tok1 == "Rb85" || tok1 == "rb85")
                scn.species = rb85();
            else if (tok1 == "custom")
                species_is_preset = false;
            else
                throw ConfigError("scenario line " + std::to_string(lineno) +
                                  ": unknown species '" + tok1 + "'");
            continue;
        }

        RawValue v;
        v.number = parse_number(tok1, key, lineno);
        v.line = lineno;
        v.key = key;
        if (!tok2.empty()) {
            v.unit = unit_from_string(tok2);
            if (!v.unit)
                throw ConfigError("scenario line " + std::to_string(lineno) +
                                  ": key '" + key + "': unknown unit '" + tok2 + "'");
        }

        if (key == "atom_mass") {
            scn.species.mass = in_internal(v, Dimension::mass, Unit::g);
            species_is_preset = false;
        } else if (key == "wavelength") {
            const double lam = in_internal(v, Dimension::length, Unit::cm);
            if (!(lam > 0))
                throw ConfigError("scenario line " + std::to_string(lineno) +
                                  ": wavelength must be positive");
            scn.species.omega_atom = two_pi * constants::speed_of_light / lam;
            species_is_preset = false;
        } else if (key == "omega_atom") {
            scn.species.omega_atom = in_internal(v, Dimension::angular_frequency, Unit::rad_s);
            species_is_preset = false;
        } else if (key == "gamma_atom") {
            scn.species.gamma_atom = in_internal(v, Dimension::angular_frequency, Unit::rad_s);
            species_is_preset = false;
        } else if (key == "c3") {
            scn.species.c3 = in_internal(v, Dimension::c3_coefficient, Unit::erg_cm3);
            species_is_preset = false;
        } else if (key == "detuning") {
            scn.detuning = in_internal(v, Dimension::angular_frequency, Unit::rad_s);
        } else if (key == "cavity_length") {
            scn.cavity.length = in_internal(v, Dimension::length, Unit::cm);
        } else if (key == "mirror_diameter") {
            scn.cavity.mirror_diameter = in_internal(v, Dimension::length, Unit::cm);
        } else if (key == "reflectivity") {
            scn.cavity.reflectivity = dimensionless(v);
        } else if (key == "cavity_linewidth") {
            scn.cavity.cavity_linewidth = in_internal(v, Dimension::angular_frequency, Unit::rad_s);
        } else if (key == "cavity_wavelength") {
            scn.cavity.wavelength = in_internal(v, Dimension::length, Unit::cm);
        } else if (key == "cloud_length") {
            scn.cloud.length = in_internal(v, Dimension::length, Unit::cm);
        } else if (key == "cloud_radius") {
            scn.cloud.radius = in_internal(v, Dimension::length, Unit::cm);
        } else if (key == "atom_number") {
            scn.atom_number = dimensionless(v);
        } else if (key == "atom_density") {
            scn.atom_density = in_internal(v, Dimension::number_density, Unit::per_cm3);
        } else if (key == "trap_depth") {
            scn.trap_depth = in_internal(v, Dimension::energy, Unit::erg);
        } else if (key == "n_pairs") {
            scn.n_pairs_override = static_cast<int>(integer_value(v));
        } else if (key == "n_sets") {
            scn.n_sets = static_cast<int>(integer_value(v));
        } else if (key == "base_seed") {
            const long seed = integer_value(v);
            if (seed < 0)
                throw ConfigError("scenario line " + std::to_string(lineno) +
                                  ": base_seed must be non-negative");
            scn.base_seed = static_cast<std::uint64_t>(seed);
        } else if (key == "q_max") {
            scn.q_max = static_cast<int>(integer_value(v));
        } else if (key == "workers") {
            scn.workers = static_cast<int>(integer_value(v));
        } else {
            throw ConfigError("scenario line " + std::to_string(lineno) +
                              ": unknown key '" + key + "'");
        }
    }

    if (!species_is_preset)
        scn.species.name = "custom";
    scn.normalize_and_validate();
    return scn;
}

namespace {

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string save_scenario(const Scenario& s)
{
    std::ostringstream out;
    out << "# canonical scenario (internal units)\n";
    out << "species = custom\n";
    out << "atom_mass = " << fmt17(s.species.mass) << " g\n";
    out << "omega_atom = " << fmt17(s.species.omega_atom) << " rad/s\n";
    out << "gamma_atom = " << fmt17(s.species.gamma_atom) << " rad/s\n";
    out << "c3 = " << fmt17(s.species.c3) << " erg_cm3\n";
    out << "detuning = " << fmt17(s.detuning) << " rad/s\n";
    out << "cavity_length = " << fmt17(s.cavity.length) << " cm\n";
    out << "mirror_diameter = " << fmt17(s.cavity.mirror_diameter) << " cm\n";
    out << "reflectivity = " << fmt17(s.cavity.reflectivity) << "\n";
    out << "cavity_linewidth = " << fmt17(s.cavity.cavity_linewidth) << " rad/s\n";
    out << "cavity_wavelength = " << fmt17(s.cavity.wavelength) << " cm\n";
    out << "cloud_length = " << fmt17(s.cloud.length) << " cm\n";
    out << "cloud_radius = " << fmt17(s.cloud.radius) << " cm\n";
    out << "atom_number = " << fmt17(s.atom_number) << "\n";
    out << "atom_density = " << fmt17(s.atom_density) << " cm^-3\n";
    out << "trap_depth = " << fmt17(s.trap_depth) << " erg\n";
    if (s.n_pairs_override)
        out << "n_pairs = " << *s.n_pairs_override << "\n";
    out << "n_sets = " << s.n_sets << "\n";
    out << "base_seed = " << s.base_seed << "\n";
    out << "q_max = " << s.q_max << "\n";
    return out.str();
}

std::uint64_t Scenario::canonical_hash() const
{
    // FNV-1a over the canonical rendering minus the label-only lines
    const std::string text = save_scenario(*this);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ModeFamily make_mode_family(const Scenario& scenario)
{
    return ModeFamily(scenario.cavity, scenario.q_max);
}

EmissionInputs emission_inputs(const Scenario& scenario, int n_pairs)
{
    EmissionInputs in;
    in.species = scenario.species;
    in.omega_laser = scenario.omega_laser();
    in.cloud = scenario.cloud;
    in.n_pairs = n_pairs;
    in.pumped_n = 0;
    in.pumped_m = 0;
    in.n_sets = scenario.n_sets;
    in.base_seed = scenario.base_seed;
    in.workers = scenario.workers;
    return in;
}

} // namespace cavloss
