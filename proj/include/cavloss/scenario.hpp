#pragma once

#include "cavloss/cavity.hpp"
#include "cavloss/emission.hpp"
#include "cavloss/ensemble.hpp"
#include "cavloss/units.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace cavloss {

/// Full physical configuration of one run. Defaults reproduce the reference
/// setup: Rb-85, 100 MHz red detuning, a 2.9 cm quasi-confocal cavity with
/// 1 cm mirrors of reflectivity 0.97 and 200 MHz linewidth, a 0.6 mm x 26 um
/// cloud of 1e6 atoms at 1e12 cm^-3, 100 MHz trap depth, 10 sets.
struct Scenario {
    AtomSpecies species = rb85();
    double detuning = -convert(100.0, Unit::MHz, Unit::rad_s); // rad/s, < 0
    CavityGeometry cavity{
        2.9,                                    // length, cm
        1.0,                                    // mirror diameter, cm
        0.97,                                   // reflectivity
        convert(200.0, Unit::MHz, Unit::rad_s), // linewidth
        0.0,                                    // wavelength: from laser, see normalize()
    };
    CloudGeometry cloud{0.06, 2.6e-3, {}};
    double atom_number = 1e6;
    double atom_density = 1e12;                      // cm^-3
    double trap_depth = convert(100.0, Unit::MHz_energy, Unit::erg); // erg
    std::optional<int> n_pairs_override;
    int n_sets = 10;
    std::uint64_t base_seed = 1;
    int q_max = 40;
    int workers = 0; // 0: all available cores

    double omega_laser() const { return species.omega_atom + detuning; }

    /// Energy window (rad/s) defining the inner resonant radius: the smaller
    /// of the cavity linewidth and twice the trap depth.
    double resonant_energy_window() const;

    /// Fills derived fields (cavity wavelength from the laser frequency when
    /// not set explicitly) and checks every invariant. Throws ConfigError.
    void normalize_and_validate();

    /// Monte Carlo pair count: the override when present, otherwise the
    /// rounded shell estimate.
    int effective_pair_count(double pair_count_real) const;

    /// Hash over the canonicalized physical fields (not the worker count);
    /// stable across runs and platforms.
    std::uint64_t canonical_hash() const;
};

/// Parses a flat "key = value [unit]" scenario file. Unknown keys are
/// rejected with their line number; missing keys keep the defaults above.
/// The name "default" (or "") loads the built-in defaults without touching
/// the filesystem.
Scenario load_scenario(const std::string& path_or_default);

/// Canonical key = value rendering; load(save(s)) has the same hash as s.
std::string save_scenario(const Scenario& scenario);

/// Mode family of the scenario's cavity, truncated at its q_max.
ModeFamily make_mode_family(const Scenario& scenario);

/// Emission Monte Carlo inputs for the scenario; n_pairs must be supplied
/// because it is derived from the collision geometry.
EmissionInputs emission_inputs(const Scenario& scenario, int n_pairs);

} // namespace cavloss
