#include "cavloss/cavity.hpp"
#include "cavloss/errors.hpp"
#include "cavloss/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cavloss {

using constants::pi;
using constants::two_pi;

namespace {

// Orthonormal Hermite-function recurrence,
//   p_0 = pi^(-1/4) exp(-xi^2/2),  p_{n+1} = xi sqrt(2/(n+1)) p_n - sqrt(n/(n+1)) p_{n-1}.
// Stable for any order; integral of p_n^2 over the line is 1.
void hermite_functions(double xi, std::span<double> out)
{
    const int nmax = static_cast<int>(out.size()) - 1;
    double p0 = std::pow(pi, -0.25) * std::exp(-0.5 * xi * xi);
    out[0] = p0;
    if (nmax == 0)
        return;
    double p1 = std::sqrt(2.0) * xi * p0;
    out[1] = p1;
    for (int n = 1; n < nmax; ++n) {
        const double p2 = xi * std::sqrt(2.0 / (n + 1)) * p1 -
                          std::sqrt(n / (n + 1.0)) * p0;
        out[n + 1] = p2;
        p0 = p1;
        p1 = p2;
    }
}

double hermite_function(int n, double xi)
{
    std::vector<double> buf(n + 1);
    hermite_functions(xi, buf);
    return buf[n];
}

} // namespace

double CavityGeometry::waist() const
{
    return std::sqrt(wavelength * length / two_pi);
}

double CavityGeometry::divergence() const
{
    return wavelength / (pi * waist());
}

double CavityGeometry::beam_radius(double z) const
{
    const double zr = rayleigh_range();
    return waist() * std::sqrt(1.0 + (z / zr) * (z / zr));
}

double CavityGeometry::geometric_solid_angle() const
{
    return 2.0 * two_pi * (1.0 - std::cos(mirror_half_angle()));
}

void CavityGeometry::validate() const
{
    if (!(length > 0))
        throw ConfigError("cavity: length must be positive");
    if (!(mirror_diameter > 0))
        throw ConfigError("cavity: mirror diameter must be positive");
    if (!(reflectivity > 0) || !(reflectivity < 1))
        throw ConfigError("cavity: reflectivity must lie in (0,1)");
    if (!(cavity_linewidth > 0))
        throw ConfigError("cavity: linewidth must be positive");
    if (!(wavelength > 0))
        throw ConfigError("cavity: wavelength must be positive");
}

double mode_solid_angle(const CavityGeometry& geom, int order)
{
    if (order < 0)
        throw ConfigError("mode solid angle: order must be non-negative");
    const double th0 = geom.divergence();
    const double per_mode = two_pi * th0 * th0 * (2.0 * order + 1.0);
    return std::min(per_mode, geom.geometric_solid_angle());
}

double enhancement_factor(const CavityGeometry& geom, double clip_loss)
{
    const double r_eff = geom.reflectivity * (1.0 - clip_loss);
    if (!(r_eff >= 0) || !(r_eff < 1))
        throw ConfigError("enhancement factor: effective reflectivity outside [0,1)");
    // r_eff = 0 (a fully clipped mode) degenerates continuously to zero
    const double finesse = pi * std::sqrt(r_eff) / (1.0 - r_eff);
    return 2.0 * finesse / pi;
}

double line_shape(double omega, double omega_center, const CavityGeometry& geom,
                  double peak)
{
    const double x = 2.0 * (omega - omega_center) / geom.cavity_linewidth;
    return peak / (1.0 + x * x);
}

ModeFamily::ModeFamily(const CavityGeometry& geom, int q_max)
    : geom_(geom), q_max_(q_max)
{
    geom_.validate();
    if (q_max < 0)
        throw ConfigError("mode family: q_max must be non-negative");
    build_axis_peaks();

    modes_.reserve((q_max + 1) * (q_max + 2) / 2);
    for (int q = 0; q <= q_max; ++q) {
        const double solid = mode_solid_angle(geom_, q);
        for (int n = 0; n <= q; ++n) {
            ResonatorMode mode;
            mode.n = n;
            mode.m = q - n;
            mode.waist = geom_.waist();
            mode.solid_angle = solid;
            mode.clip_loss = cavloss::clip_loss(geom_, mode.n, mode.m);
            mode.enhancement = enhancement_factor(geom_, mode.clip_loss);
            modes_.push_back(mode);
        }
    }
}

void ModeFamily::build_axis_peaks()
{
    // Per-order maximum of |p_n|: coarse scan over the classically allowed
    // range, then a ternary refinement around the best grid point.
    const int nmax = q_max_;
    const double xi_hi = std::sqrt(2.0 * nmax + 1.0) + 6.0;
    const double step = 0.005;
    const int npts = static_cast<int>(xi_hi / step) + 2;

    axis_peak_.assign(nmax + 1, 0.0);
    std::vector<double> arg_best(nmax + 1, 0.0);
    std::vector<double> vals(nmax + 1);
    for (int i = 0; i < npts; ++i) {
        const double xi = i * step;
        hermite_functions(xi, vals);
        for (int n = 0; n <= nmax; ++n) {
            const double a = std::abs(vals[n]);
            if (a > axis_peak_[n]) {
                axis_peak_[n] = a;
                arg_best[n] = xi;
            }
        }
    }
    for (int n = 0; n <= nmax; ++n) {
        double lo = std::max(0.0, arg_best[n] - step);
        double hi = arg_best[n] + step;
        for (int it = 0; it < 80; ++it) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (std::abs(hermite_function(n, m1)) < std::abs(hermite_function(n, m2)))
                lo = m1;
            else
                hi = m2;
        }
        axis_peak_[n] = std::abs(hermite_function(n, 0.5 * (lo + hi)));
    }
}

const ResonatorMode& ModeFamily::mode(int n, int m) const
{
    const int q = n + m;
    if (n < 0 || m < 0 || q > q_max_)
        throw ConfigError("mode family: mode index out of range");
    // modes_ is ordered by (q, n): offset of order q is q(q+1)/2
    return modes_[q * (q + 1) / 2 + n];
}

void ModeFamily::axis_factors(double xi, std::span<double> out) const
{
    hermite_functions(xi, out);
    const int count = static_cast<int>(out.size());
    for (int n = 0; n < count; ++n)
        out[n] /= axis_peak_[n];
}

double ModeFamily::axial_factor(int order, double z) const
{
    const double gouy = std::atan(z / geom_.rayleigh_range());
    return std::cos(geom_.wavenumber() * z - (order + 1.0) * gouy);
}

double ModeFamily::transverse_amplitude(int n, int m, double x, double y) const
{
    if (n < 0 || m < 0 || n + m > q_max_)
        throw ConfigError("mode family: mode index out of range");
    const double w0 = geom_.waist();
    const double sx = std::sqrt(2.0) * x / w0;
    const double sy = std::sqrt(2.0) * y / w0;
    return hermite_function(n, sx) / axis_peak_[n] *
           hermite_function(m, sy) / axis_peak_[m];
}

double ModeFamily::profile(int n, int m, const Vec3& pos) const
{
    const int q = n + m;
    if (n < 0 || m < 0 || q > q_max_)
        throw ConfigError("mode family: mode index out of range");
    const double w = geom_.beam_radius(pos.z);
    const double envelope = geom_.waist() / w;
    const double sx = std::sqrt(2.0) * pos.x / w;
    const double sy = std::sqrt(2.0) * pos.y / w;
    return envelope *
           hermite_function(n, sx) / axis_peak_[n] *
           hermite_function(m, sy) / axis_peak_[m] *
           axial_factor(q, pos.z);
}

std::complex<double> ModeFamily::mode_profile(const ResonatorMode& mode,
                                              const Vec3& pos) const
{
    return {profile(mode.n, mode.m, pos), 0.0};
}

double ModeFamily::mode_volume(int n, int m) const
{
    // integral over the cavity of |f_nm|^2 with unit-peak profiles; the
    // axial cos^2 averages to 1/2 over the cavity length.
    const double w0 = geom_.waist();
    return w0 * w0 * geom_.length /
           (4.0 * axis_peak_[n] * axis_peak_[n] * axis_peak_[m] * axis_peak_[m]);
}

double clip_loss(const CavityGeometry& geom, int n, int m)
{
    // Power fraction beyond the mirror aperture at z = +- l/2. In scaled
    // coordinates xi = sqrt(2) r / w(mirror) the 2-D intensity p_n^2 p_m^2
    // integrates to one, so eps is the plain exterior integral (no
    // cancellation against the total).
    const double w_mirror = geom.beam_radius(0.5 * geom.length);
    const double xi_b = std::sqrt(2.0) * geom.mirror_radius() / w_mirror;
    const int q = n + m;
    const double turning = std::sqrt(2.0 * q + 1.0);
    if (xi_b > turning + 26.0)
        return 0.0; // aperture far beyond the mode's support; tail below 1e-290

    std::vector<double> px(n + 1), py(m + 1);
    const int nphi = 64 + 4 * q; // trapezoid resolves the angular lobes
    auto ring_intensity = [&](double rho) {
        double acc = 0.0;
        for (int i = 0; i < nphi; ++i) {
            const double phi = (0.5 * pi) * (i + 0.5) / nphi;
            hermite_functions(rho * std::cos(phi), px);
            hermite_functions(rho * std::sin(phi), py);
            acc += px[n] * px[n] * py[m] * py[m];
        }
        return 4.0 * acc * (0.5 * pi / nphi); // full circle by symmetry
    };

    const double rho_hi = std::max(turning, xi_b) + 12.0;
    const double outside = integrate_or_throw(
        [&](double rho) { return rho * ring_intensity(rho); },
        xi_b, rho_hi, 1e-8, 1e-250, "mode clip loss");
    return std::clamp(outside, 0.0, 1.0);
}

double ModeFamily::finesse() const
{
    const double r_eff = geom_.reflectivity * (1.0 - mode(0, 0).clip_loss);
    return pi * std::sqrt(r_eff) / (1.0 - r_eff);
}

double ModeFamily::peak_enhancement() const
{
    return mode(0, 0).enhancement;
}

std::complex<double> transverse_overlap(const ModeFamily& family,
                                        const ResonatorMode& a,
                                        const ResonatorMode& b)
{
    const double w0 = family.geometry().waist();
    const int qmax = std::max(a.order(), b.order());
    const double extent = w0 * (std::sqrt(2.0 * qmax + 1.0) + 10.0) / std::sqrt(2.0);

    auto inner = [&](double x) {
        return integrate_or_throw(
            [&](double y) {
                return family.transverse_amplitude(a.n, a.m, x, y) *
                       family.transverse_amplitude(b.n, b.m, x, y);
            },
            -extent, extent, 1e-10, 1e-13, "transverse overlap (inner)");
    };
    const double value = integrate_or_throw(inner, -extent, extent,
                                            1e-9, 1e-12, "transverse overlap");
    return {value, 0.0};
}

} // namespace cavloss
