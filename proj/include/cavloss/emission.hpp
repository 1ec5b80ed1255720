#pragma once

#include "cavloss/cavity.hpp"
#include "cavloss/ensemble.hpp"
#include "cavloss/units.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace cavloss {

/// Kernel selection: `serial` is the straightforward reference implementation
/// (direct per-mode profile evaluation, no threading), `parallel` the
/// table-based OpenMP kernel. Both produce the same numbers; the reference is
/// kept for tests and benchmarks.
enum class ExecPolicy { serial, parallel };

/// One retained mode of the truncated family sum.
struct ModeTerm {
    int n = 0;
    int m = 0;
    double solid_angle = 0;   // sr
    double enhancement = 0;   // peak Lambda_nm
    double overlap_ratio = 0; // dimensionless ensemble-overlap factor
};

/// Mode-sum overlap terms for an ensemble, truncated by the family policy:
/// orders are accumulated until five consecutive orders each change the
/// running sum by less than 1e-3 relative (or q_max is reached).
struct ModeSum {
    std::vector<ModeTerm> terms;
    int modes_used = 0;
    int max_order_used = 0;
    bool truncation_converged = false;
};

ModeSum mode_overlap_terms(std::span<const Vec3> positions,
                           std::span<const double> weights,
                           const ModeFamily& family, int pumped_n, int pumped_m,
                           ExecPolicy policy = ExecPolicy::parallel);

struct SolidAngleResult {
    double effective_solid_angle = 0; // sr
    int modes_used = 0;
    bool truncation_converged = false;
};

/// Effective solid angle of the entangled ensemble: the enhancement-weighted
/// mode sum of squared normalized overlaps with the pumped mode. Dipole
/// weights |eps . d|^2 enter normalized by their ensemble mean, which makes
/// the result invariant under a common rescaling of all weights.
/// Throws DegenerateStateError when all pairs are decoupled.
SolidAngleResult effective_solid_angle(const EntangledEnsemble& ensemble,
                                       const ModeFamily& family,
                                       ExecPolicy policy = ExecPolicy::parallel);

/// Same computation from explicit positions and weights (test hook).
SolidAngleResult effective_solid_angle_weighted(std::span<const Vec3> positions,
                                                std::span<const double> weights,
                                                const ModeFamily& family,
                                                int pumped_n, int pumped_m,
                                                ExecPolicy policy = ExecPolicy::parallel);

/// Collective decay rate of the shared-excitation state at resonance:
///   Gamma_c = (1 + (3/2) (dOmega_eff/4pi) N Lambda_00 (w_L/w_A)^3) Gamma.
double collective_rate(double effective_solid_angle_sr, int n_pairs,
                       double peak_enhancement, double omega_laser,
                       double omega_atom, double linewidth);

/// General golden-rule rate: free-space Gamma plus the cavity mode sum
/// evaluated with the Lorentzian line shape at the molecular frequency
/// omega_molecular. Reduces to collective_rate at omega_molecular = omega_laser.
double emission_rate_general(const EntangledEnsemble& ensemble,
                             const ModeFamily& family,
                             double omega_molecular, double omega_laser,
                             double omega_atom, double linewidth,
                             ExecPolicy policy = ExecPolicy::parallel);

/// Inputs of one Monte Carlo emission study (everything already in internal
/// units). Per-set seeds are base_seed + set index, so results do not depend
/// on how sets are scheduled across workers.
struct EmissionInputs {
    AtomSpecies species;
    double omega_laser = 0; // rad/s
    CloudGeometry cloud;
    int n_pairs = 0;
    int pumped_n = 0;
    int pumped_m = 0;
    int n_sets = 1;
    std::uint64_t base_seed = 1;
    int workers = 0; // 0: all available
};

struct EmissionResult {
    std::vector<double> per_set_solid_angle_frac; // dOmega_eff / 4pi
    std::vector<double> per_set_rate_ratio;       // Gamma_c / Gamma
    double solid_angle_frac_mean = 0;
    double solid_angle_frac_std = 0;
    double rate_ratio_mean = 0;
    double rate_ratio_std = 0;
    int modes_used = 0;            // largest over sets
    bool truncation_converged = false; // true only if every set converged
    bool single_set = false;       // std fixed to 0 by convention
};

/// Runs n_sets independent ensembles and aggregates in set-index order.
/// Deterministic for a fixed base seed, independent of the worker count.
EmissionResult monte_carlo_emission(const ModeFamily& family,
                                    const EmissionInputs& inputs,
                                    ExecPolicy policy = ExecPolicy::parallel);

} // namespace cavloss
