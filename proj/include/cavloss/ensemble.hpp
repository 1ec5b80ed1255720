#pragma once

#include "cavloss/cavity.hpp"
#include "cavloss/rng.hpp"
#include "cavloss/units.hpp"
#include "cavloss/vec3.hpp"

#include <complex>
#include <vector>

namespace cavloss {

/// Cigar-shaped trapped cloud: a uniform cylinder of the given length along
/// the cavity axis and radius across it.
struct CloudGeometry {
    double length = 0; // cm, along the cavity axis
    double radius = 0; // cm
    Vec3 center{};     // default: cavity center

    void validate() const; // throws ConfigError
};

/// One sampled quasimolecule: position, dipole direction, cavity coupling and
/// its amplitude in the shared-excitation state.
struct QuasimoleculePair {
    Vec3 position{};
    Vec3 dipole_dir{};                 // unit vector
    std::complex<double> coupling{};   // V_i, erg
    std::complex<double> amplitude{};  // c_i = V_i / (hbar * collective Rabi)
};

/// Single-excitation entangled ensemble: the excitation is shared by all
/// pairs with amplitudes proportional to their couplings to the pumped mode.
struct EntangledEnsemble {
    std::vector<QuasimoleculePair> pairs;
    double collective_rabi = 0;  // rad/s, (sum |V_i|^2)^(1/2) / hbar
    int pumped_n = 0;            // pumped transverse mode indices
    int pumped_m = 0;

    std::size_t size() const { return pairs.size(); }
};

/// n points uniform in the cloud cylinder; deterministic for a given rng state.
std::vector<Vec3> sample_positions(const CloudGeometry& cloud, int n, SeededRng& rng);

/// n isotropic unit vectors; deterministic for a given rng state.
std::vector<Vec3> sample_dipoles(int n, SeededRng& rng);

/// Interaction matrix element of one pair with the pumped standing-wave mode
/// for circularly polarized light (polarization basis (x + i y)/sqrt(2),
/// transverse to the cavity axis):
///   V = E(omega) f_c(r) (eps . d),  E(omega) = sqrt(2 pi hbar omega / V_mode).
/// `dipole_magnitude` is the quasimolecule dipole sqrt(2) d_A.
std::complex<double> coupling(const Vec3& position, const Vec3& dipole_dir,
                              const ModeFamily& family, int pumped_n, int pumped_m,
                              double omega_laser, double dipole_magnitude);

/// Builds the entangled ensemble from explicit positions and dipoles.
/// Throws DegenerateStateError when every coupling vanishes.
EntangledEnsemble build_entangled_state(const std::vector<Vec3>& positions,
                                        const std::vector<Vec3>& dipoles,
                                        const ModeFamily& family,
                                        int pumped_n, int pumped_m,
                                        double omega_laser, double dipole_magnitude);

/// Samples positions and dipoles from the cloud, then assembles the state.
EntangledEnsemble build_entangled_state(const CloudGeometry& cloud, int n_pairs,
                                        const ModeFamily& family,
                                        int pumped_n, int pumped_m,
                                        double omega_laser, double dipole_magnitude,
                                        SeededRng& rng);

} // namespace cavloss
