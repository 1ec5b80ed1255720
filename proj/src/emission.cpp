#include "cavloss/emission.hpp"
#include "cavloss/errors.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cavloss {

using constants::pi;

namespace {

constexpr double kOrderStopRelative = 1e-3;
constexpr int kOrderStopRun = 5;

struct PairTables {
    // per pair: envelope, pumped-mode value, kz and Gouy phase, and the
    // normalized 1-D Hermite-Gaussian factors for every order on both axes
    int n_pairs = 0;
    int n_orders = 0; // q_max + 1
    std::vector<double> envelope;
    std::vector<double> kz;
    std::vector<double> gouy;
    std::vector<double> pumped;
    std::vector<double> hx; // [pair * n_orders + n]
    std::vector<double> hy;

    double fx(int pair, int n) const { return hx[pair * n_orders + n]; }
    double fy(int pair, int m) const { return hy[pair * n_orders + m]; }
};

PairTables build_pair_tables(std::span<const Vec3> positions,
                             const ModeFamily& family,
                             int pumped_n, int pumped_m, bool threaded)
{
    const CavityGeometry& geom = family.geometry();
    const int n_pairs = static_cast<int>(positions.size());
    const int n_orders = family.max_order() + 1;

    PairTables t;
    t.n_pairs = n_pairs;
    t.n_orders = n_orders;
    t.envelope.resize(n_pairs);
    t.kz.resize(n_pairs);
    t.gouy.resize(n_pairs);
    t.pumped.resize(n_pairs);
    t.hx.resize(static_cast<std::size_t>(n_pairs) * n_orders);
    t.hy.resize(static_cast<std::size_t>(n_pairs) * n_orders);

    const double k = geom.wavenumber();
    const double zr = geom.rayleigh_range();

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (threaded)
#endif
    for (int i = 0; i < n_pairs; ++i) {
        const Vec3& r = positions[i];
        const double w = geom.beam_radius(r.z);
        t.envelope[i] = geom.waist() / w;
        t.kz[i] = k * r.z;
        t.gouy[i] = std::atan(r.z / zr);
        family.axis_factors(std::sqrt(2.0) * r.x / w,
                            std::span<double>(&t.hx[i * n_orders], n_orders));
        family.axis_factors(std::sqrt(2.0) * r.y / w,
                            std::span<double>(&t.hy[i * n_orders], n_orders));
        t.pumped[i] = t.envelope[i] * t.fx(i, pumped_n) * t.fy(i, pumped_m) *
                      std::cos(t.kz[i] - (pumped_n + pumped_m + 1.0) * t.gouy[i]);
    }
    (void)threaded;
    return t;
}

// mean of w and of w * f_c^2 in fixed pair order
void weight_moments(std::span<const double> weights, std::span<const double> pumped,
                    double& mean_w, double& mean_wfc2)
{
    double sw = 0, swf = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        sw += weights[i];
        swf += weights[i] * pumped[i] * pumped[i];
    }
    mean_w = sw / weights.size();
    mean_wfc2 = swf / weights.size();
}

} // namespace

ModeSum mode_overlap_terms(std::span<const Vec3> positions,
                           std::span<const double> weights,
                           const ModeFamily& family, int pumped_n, int pumped_m,
                           ExecPolicy policy)
{
    if (positions.empty() || positions.size() != weights.size())
        throw ConfigError("mode overlap: need matching non-empty positions/weights");

    const int n_pairs = static_cast<int>(positions.size());
    const double inv_n = 1.0 / n_pairs;
    const double lambda00 = family.peak_enhancement();
    const int q_max = family.max_order();

    ModeSum out;
    out.terms.reserve(family.modes().size());

    double running = 0.0;
    int quiet_orders = 0;

    if (policy == ExecPolicy::serial) {
        // reference path: direct profile evaluation, no tables, no threads
        double mean_w = 0, mean_wfc2 = 0;
        std::vector<double> pumped(n_pairs);
        for (int i = 0; i < n_pairs; ++i)
            pumped[i] = family.profile(pumped_n, pumped_m, positions[i]);
        weight_moments(weights, pumped, mean_w, mean_wfc2);
        if (!(mean_wfc2 > 0))
            throw DegenerateStateError("effective solid angle: ensemble fully "
                                       "decoupled from the pumped mode");
        const double denom = mean_w * mean_wfc2;

        for (int q = 0; q <= q_max; ++q) {
            double order_sum = 0.0;
            for (int n = 0; n <= q; ++n) {
                const ResonatorMode& mode = family.mode(n, q - n);
                double s = 0.0;
                for (int i = 0; i < n_pairs; ++i)
                    s += weights[i] * family.profile(n, q - n, positions[i]) * pumped[i];
                s *= inv_n;
                ModeTerm term;
                term.n = n;
                term.m = q - n;
                term.solid_angle = mode.solid_angle;
                term.enhancement = mode.enhancement;
                term.overlap_ratio = s * s / denom;
                out.terms.push_back(term);
                order_sum += term.solid_angle * (term.enhancement / lambda00) *
                             term.overlap_ratio;
            }
            out.max_order_used = q;
            const double rel = running > 0 ? order_sum / running
                                           : (order_sum > 0 ? 1.0 : 0.0);
            running += order_sum;
            quiet_orders = rel < kOrderStopRelative ? quiet_orders + 1 : 0;
            if (quiet_orders >= kOrderStopRun) {
                out.truncation_converged = true;
                break;
            }
        }
        out.modes_used = static_cast<int>(out.terms.size());
        return out;
    }

    // table-based kernel; mode contributions within an order are independent
    // and each is accumulated over pairs in fixed order, so results do not
    // depend on the thread count
    const PairTables tables = build_pair_tables(positions, family,
                                                pumped_n, pumped_m, true);
    double mean_w = 0, mean_wfc2 = 0;
    weight_moments(weights, tables.pumped, mean_w, mean_wfc2);
    if (!(mean_wfc2 > 0))
        throw DegenerateStateError("effective solid angle: ensemble fully "
                                   "decoupled from the pumped mode");
    const double denom = mean_w * mean_wfc2;

    std::vector<double> base(n_pairs); // w_i * envelope * axial * f_c
    std::vector<ModeTerm> order_terms(q_max + 1);
    bool stop = false;

    // one parallel region for the whole order loop; the running-sum and
    // early-stop bookkeeping runs on a single thread between barriers
#ifdef _OPENMP
#pragma omp parallel default(shared)
#endif
    {
        for (int q = 0; q <= q_max; ++q) {
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
            for (int i = 0; i < n_pairs; ++i) {
                const double axial = std::cos(tables.kz[i] - (q + 1.0) * tables.gouy[i]);
                base[i] = weights[i] * tables.envelope[i] * axial * tables.pumped[i];
            }
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
            for (int n = 0; n <= q; ++n) {
                const int m = q - n;
                const ResonatorMode& mode = family.mode(n, m);
                double s = 0.0;
                for (int i = 0; i < n_pairs; ++i)
                    s += base[i] * tables.fx(i, n) * tables.fy(i, m);
                s *= inv_n;
                ModeTerm& term = order_terms[n];
                term.n = n;
                term.m = m;
                term.solid_angle = mode.solid_angle;
                term.enhancement = mode.enhancement;
                term.overlap_ratio = s * s / denom;
            }
#ifdef _OPENMP
#pragma omp single
#endif
            {
                double order_sum = 0.0;
                for (int n = 0; n <= q; ++n) {
                    out.terms.push_back(order_terms[n]);
                    order_sum += order_terms[n].solid_angle *
                                 (order_terms[n].enhancement / lambda00) *
                                 order_terms[n].overlap_ratio;
                }
                out.max_order_used = q;
                const double rel = running > 0 ? order_sum / running
                                               : (order_sum > 0 ? 1.0 : 0.0);
                running += order_sum;
                quiet_orders = rel < kOrderStopRelative ? quiet_orders + 1 : 0;
                if (quiet_orders >= kOrderStopRun) {
                    out.truncation_converged = true;
                    stop = true;
                }
            } // implicit barrier: every thread sees the updated stop flag
            if (stop)
                break;
        }
    }
    out.modes_used = static_cast<int>(out.terms.size());
    return out;
}

namespace {

std::vector<double> dipole_weights(const EntangledEnsemble& ensemble)
{
    std::vector<double> w(ensemble.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Vec3& d = ensemble.pairs[i].dipole_dir;
        w[i] = 0.5 * (d.x * d.x + d.y * d.y); // |eps . d|^2, circular basis
    }
    return w;
}

std::vector<Vec3> pair_positions(const EntangledEnsemble& ensemble)
{
    std::vector<Vec3> r(ensemble.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = ensemble.pairs[i].position;
    return r;
}

SolidAngleResult sum_terms(const ModeSum& sum, double lambda00)
{
    SolidAngleResult res;
    for (const ModeTerm& term : sum.terms)
        res.effective_solid_angle += term.solid_angle *
                                     (term.enhancement / lambda00) *
                                     term.overlap_ratio;
    res.modes_used = sum.modes_used;
    res.truncation_converged = sum.truncation_converged;
    return res;
}

} // namespace

SolidAngleResult effective_solid_angle_weighted(std::span<const Vec3> positions,
                                                std::span<const double> weights,
                                                const ModeFamily& family,
                                                int pumped_n, int pumped_m,
                                                ExecPolicy policy)
{
    const ModeSum sum = mode_overlap_terms(positions, weights, family,
                                           pumped_n, pumped_m, policy);
    return sum_terms(sum, family.peak_enhancement());
}

SolidAngleResult effective_solid_angle(const EntangledEnsemble& ensemble,
                                       const ModeFamily& family,
                                       ExecPolicy policy)
{
    const std::vector<Vec3> positions = pair_positions(ensemble);
    const std::vector<double> weights = dipole_weights(ensemble);
    return effective_solid_angle_weighted(positions, weights, family,
                                          ensemble.pumped_n, ensemble.pumped_m,
                                          policy);
}

double collective_rate(double effective_solid_angle_sr, int n_pairs,
                       double peak_enhancement, double omega_laser,
                       double omega_atom, double linewidth)
{
    const double ratio = omega_laser / omega_atom;
    return linewidth * (1.0 + 1.5 * (effective_solid_angle_sr / (4.0 * pi)) *
                              n_pairs * peak_enhancement * ratio * ratio * ratio);
}

double emission_rate_general(const EntangledEnsemble& ensemble,
                             const ModeFamily& family,
                             double omega_molecular, double omega_laser,
                             double omega_atom, double linewidth,
                             ExecPolicy policy)
{
    const std::vector<Vec3> positions = pair_positions(ensemble);
    const std::vector<double> weights = dipole_weights(ensemble);
    const ModeSum sum = mode_overlap_terms(positions, weights, family,
                                           ensemble.pumped_n, ensemble.pumped_m,
                                           policy);
    const double lambda00 = family.peak_enhancement();
    double cavity_sum = 0.0;
    for (const ModeTerm& term : sum.terms) {
        const double spectral = line_shape(omega_molecular, omega_laser,
                                           family.geometry(), term.enhancement);
        cavity_sum += term.solid_angle * (spectral / lambda00) * term.overlap_ratio;
    }
    const double ratio = omega_molecular / omega_atom;
    const int n_pairs = static_cast<int>(ensemble.size());
    return linewidth * (1.0 + 1.5 * (cavity_sum / (4.0 * pi)) * n_pairs *
                              lambda00 * ratio * ratio * ratio);
}

EmissionResult monte_carlo_emission(const ModeFamily& family,
                                    const EmissionInputs& inputs,
                                    ExecPolicy policy)
{
    if (inputs.n_sets < 1)
        throw ConfigError("monte carlo emission: need n_sets >= 1");
    if (inputs.n_pairs < 1)
        throw ConfigError("monte carlo emission: need n_pairs >= 1");
    inputs.cloud.validate();
    inputs.species.validate();

    const int n_sets = inputs.n_sets;
    const double linewidth = quasimolecule_linewidth(inputs.species);
    const double dipole = inputs.species.pair_dipole();
    const double lambda00 = family.peak_enhancement();

    EmissionResult res;
    res.per_set_solid_angle_frac.assign(n_sets, 0.0);
    res.per_set_rate_ratio.assign(n_sets, 0.0);
    std::vector<int> modes_used(n_sets, 0);
    std::vector<char> converged(n_sets, 0);
    std::exception_ptr failure;

    auto run_set = [&](int s) {
        SeededRng rng(inputs.base_seed + static_cast<std::uint64_t>(s));
        const EntangledEnsemble ens = build_entangled_state(
            inputs.cloud, inputs.n_pairs, family, inputs.pumped_n, inputs.pumped_m,
            inputs.omega_laser, dipole, rng);
        const SolidAngleResult sa = effective_solid_angle(ens, family, policy);
        const double rate = collective_rate(sa.effective_solid_angle, inputs.n_pairs,
                                            lambda00, inputs.omega_laser,
                                            inputs.species.omega_atom, linewidth);
        res.per_set_solid_angle_frac[s] = sa.effective_solid_angle / (4.0 * pi);
        res.per_set_rate_ratio[s] = rate / linewidth;
        modes_used[s] = sa.modes_used;
        converged[s] = sa.truncation_converged ? 1 : 0;
    };

    if (policy == ExecPolicy::serial) {
        for (int s = 0; s < n_sets; ++s)
            run_set(s);
    } else {
#ifdef _OPENMP
        const int workers = inputs.workers > 0 ? inputs.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(workers)
        for (int s = 0; s < n_sets; ++s) {
            try {
                run_set(s);
            } catch (...) {
#pragma omp critical
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);
#else
        for (int s = 0; s < n_sets; ++s)
            run_set(s);
#endif
    }

    // aggregate in set-index order
    double sum_sa = 0, sum_rr = 0;
    for (int s = 0; s < n_sets; ++s) {
        sum_sa += res.per_set_solid_angle_frac[s];
        sum_rr += res.per_set_rate_ratio[s];
    }
    res.solid_angle_frac_mean = sum_sa / n_sets;
    res.rate_ratio_mean = sum_rr / n_sets;
    if (n_sets > 1) {
        double var_sa = 0, var_rr = 0;
        for (int s = 0; s < n_sets; ++s) {
            const double da = res.per_set_solid_angle_frac[s] - res.solid_angle_frac_mean;
            const double dr = res.per_set_rate_ratio[s] - res.rate_ratio_mean;
            var_sa += da * da;
            var_rr += dr * dr;
        }
        res.solid_angle_frac_std = std::sqrt(var_sa / (n_sets - 1));
        res.rate_ratio_std = std::sqrt(var_rr / (n_sets - 1));
    } else {
        res.single_set = true;
    }
    res.modes_used = *std::max_element(modes_used.begin(), modes_used.end());
    res.truncation_converged =
        std::all_of(converged.begin(), converged.end(), [](char c) { return c != 0; });
    return res;
}

} // namespace cavloss
