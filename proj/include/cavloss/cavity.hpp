#pragma once

#include "cavloss/units.hpp"
#include "cavloss/vec3.hpp"

#include <complex>
#include <span>
#include <vector>

namespace cavloss {

/// Quasi-confocal two-mirror resonator. The cavity axis is z, mirrors sit at
/// z = +-length/2, and the linewidth is an independent measured input (it is
/// not derived from finesse and length).
struct CavityGeometry {
    double length = 0;           // cm
    double mirror_diameter = 0;  // cm
    double reflectivity = 0;     // per-mirror intensity reflectivity, in (0,1)
    double cavity_linewidth = 0; // rad/s
    double wavelength = 0;       // cm

    double mirror_radius() const { return 0.5 * mirror_diameter; }
    double rayleigh_range() const { return 0.5 * length; } // confocal
    double waist() const; // w0 = sqrt(lambda * length / (2 pi))
    double divergence() const; // theta_0 = lambda / (pi w0)
    double wavenumber() const { return constants::two_pi / wavelength; }
    double beam_radius(double z) const; // w(z)
    double mirror_half_angle() const { return mirror_radius() / rayleigh_range(); }
    /// Solid angle of both mirror cones, 2 * 2pi (1 - cos theta_m).
    double geometric_solid_angle() const;

    void validate() const; // throws ConfigError
};

/// One transverse TEM_nm standing-wave mode of the family.
struct ResonatorMode {
    int n = 0;
    int m = 0;
    double waist = 0;       // cm (family waist w0)
    double solid_angle = 0; // sr, both mirrors, capped at the geometric cone
    double clip_loss = 0;   // fraction of power missing the mirrors
    double enhancement = 0; // peak spectral enhancement Lambda_nm

    int order() const { return n + m; }
};

/// Solid angle attributed to modes of transverse order q: 2pi theta_0^2 (2q+1),
/// capped at the geometric mirror solid angle.
double mode_solid_angle(const CavityGeometry& geom, int order);

/// Peak spectral enhancement for a mode with clip loss eps:
/// r_eff = r (1 - eps), F = pi sqrt(r_eff)/(1 - r_eff), Lambda = 2 F / pi.
/// A fully clipped mode (r_eff = 0) degenerates to zero; r_eff >= 1 is
/// rejected with ConfigError.
double enhancement_factor(const CavityGeometry& geom, double clip_loss);

/// Fraction of TEM_nm power falling outside the mirror aperture at the mirror
/// plane, by quadrature of the intensity over the exterior of the aperture
/// disk (no cancellation for small losses).
double clip_loss(const CavityGeometry& geom, int n, int m);

/// Lorentzian cavity line shape, peak value at resonance, FWHM = cavity linewidth.
double line_shape(double omega, double omega_center, const CavityGeometry& geom,
                  double peak);

/// The transverse mode family of a cavity up to order q_max, with precomputed
/// per-mode solid angles, diffraction (clip) losses and enhancements.
/// Immutable after construction; all evaluation methods are const and
/// safe to call concurrently.
class ModeFamily {
public:
    ModeFamily(const CavityGeometry& geom, int q_max);

    const CavityGeometry& geometry() const { return geom_; }
    int max_order() const { return q_max_; }
    const std::vector<ResonatorMode>& modes() const { return modes_; }
    const ResonatorMode& mode(int n, int m) const;

    /// Standing-wave Hermite-Gaussian amplitude of TEM_nm at a point,
    /// normalized to unit peak magnitude over space. Real-valued by
    /// construction (the wavefront-curvature phase is negligible within the
    /// Rayleigh range and is omitted).
    double profile(int n, int m, const Vec3& pos) const;

    /// Same value exposed with the complex amplitude signature.
    std::complex<double> mode_profile(const ResonatorMode& mode, const Vec3& pos) const;

    /// Transverse (z = 0) part of the profile, without the axial factor.
    double transverse_amplitude(int n, int m, double x, double y) const;

    /// Fills out[j] with the normalized 1-D Hermite-Gaussian factor of order j
    /// evaluated at scaled coordinate xi, for j = 0..max_order().
    void axis_factors(double xi, std::span<double> out) const;

    /// Axial standing-wave factor shared by order-q modes at height z.
    double axial_factor(int order, double z) const;

    /// Effective mode volume integral(|f_nm|^2 d^3r); (pi/4) w0^2 l for TEM00.
    double mode_volume(int n, int m) const;

    double finesse() const;  // of the fundamental mode
    double peak_enhancement() const; // Lambda_00

private:
    CavityGeometry geom_;
    int q_max_;
    std::vector<double> axis_peak_; // max_xi |p_n(xi)| per order
    std::vector<ResonatorMode> modes_; // sorted by (order, n)

    void build_axis_peaks();
};

/// Continuum transverse-plane inner product of two modes at z = 0, used to
/// test orthogonality of the implemented profiles. Real-valued here; returned
/// as complex to match the amplitude convention.
std::complex<double> transverse_overlap(const ModeFamily& family,
                                        const ResonatorMode& a,
                                        const ResonatorMode& b);

} // namespace cavloss
