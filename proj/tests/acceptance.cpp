// Acceptance suite: one pass/fail line per criterion, non-zero exit when any
// criterion fails.

#include "cavloss/emission.hpp"
#include "cavloss/kinematics.hpp"
#include "cavloss/loss.hpp"
#include "cavloss/run.hpp"
#include "cavloss/scenario.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

using namespace cavloss;
using constants::two_pi;
using constants::pi;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail)
{
    std::printf("%s  criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion,
                detail.c_str());
    if (!pass)
        ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fmt(const char* format, ...)
{
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

} // namespace

int main()
{
    const AtomSpecies rb = rb85();
    const PairPotential pot = PairPotential::for_species(rb);
    const double gamma = quasimolecule_linewidth(rb);
    const double detuning = -convert(100.0, Unit::MHz, Unit::rad_s);

    // 1. Condon point: 556 A +- 1 percent, under 1 ms
    {
        const auto t0 = std::chrono::steady_clock::now();
        const double rc = condon_point(pot, detuning);
        const double dt = seconds_since(t0);
        const double rc_a = rc * 1e8;
        const bool pass = std::abs(rc_a - 556.0) <= 0.01 * 556.0 && dt < 1e-3;
        report(1, pass, fmt("Condon point R_c = %.2f A (target 556 +- 5.6), "
                            "%.2e s", rc_a, dt));
    }

    // 2. Excitation shell width: 22.4 A +- 5 percent
    {
        const double rc = condon_point(pot, detuning);
        const double dr_a = excitation_shell_width(pot, rc, gamma) * 1e8;
        const bool pass = std::abs(dr_a - 22.4) <= 0.05 * 22.4;
        report(2, pass, fmt("shell width dR = %.2f A (target 22.4 +- 1.1)", dr_a));
    }

    // 3. Pair count: 43.5 +- 0.5 from the exact formula
    {
        const double rc = condon_point(pot, detuning);
        const double dr = excitation_shell_width(pot, rc, gamma);
        const double n = excited_pair_count(1e6, 1e12, rc, dr);
        const bool pass = std::abs(n - 43.5) <= 0.5;
        report(3, pass, fmt("pair count N = %.2f (target 43.5 +- 0.5, "
                            "rounds to ~45)", n));
    }

    // 4. Trajectory timing: t_0 = 3.0e-8 s +- 5 percent, Gamma t_c = 1.7 +- 10
    //    percent, Beta-function oracle to 1e-4, under 1 s
    {
        const auto t0 = std::chrono::steady_clock::now();
        const CollisionGeometry g = collision_times(
            pot, rb.reduced_mass(), detuning, gamma,
            convert(200.0, Unit::MHz, Unit::rad_s));
        const double dt = seconds_since(t0);

        const double beta = std::tgamma(5.0 / 6.0) * std::tgamma(0.5) /
                            std::tgamma(4.0 / 3.0);
        const double t_beta = std::sqrt(rb.reduced_mass() / (2.0 * pot.c3)) *
                              std::pow(g.condon_radius, 2.5) * beta / 3.0;
        const double oracle_rel = std::abs(g.time_total - t_beta) / t_beta;

        const bool pass = std::abs(g.time_total - 3.0e-8) <= 0.05 * 3.0e-8 &&
                          std::abs(gamma * g.time_outer - 1.7) <= 0.17 &&
                          oracle_rel <= 1e-4 && dt < 1.0;
        report(4, pass, fmt("t_0 = %.3e s (target 3.0e-8 +- 5%%), "
                            "Gamma t_c = %.3f (target 1.7 +- 0.17), "
                            "Beta oracle rel = %.1e, %.2e s",
                            g.time_total, gamma * g.time_outer, oracle_rel, dt));
    }

    // 5. Cavity factors: F = 103 +- 0.5 and Lambda_00 = 66 +- 1 at r = 0.97
    {
        const Scenario scn = load_scenario("default");
        const ModeFamily family(scn.cavity, 0);
        const double f = family.finesse();
        const double l00 = family.peak_enhancement();
        const bool pass = std::abs(f - 103.0) <= 0.5 && std::abs(l00 - 66.0) <= 1.0;
        report(5, pass, fmt("finesse F = %.2f (target 103 +- 0.5), "
                            "Lambda_00 = %.2f (target 66 +- 1)", f, l00));
    }

    // 6. Collective-rate arithmetic at the reference operating point
    {
        const double omega = rb.omega_atom;
        const double rate = collective_rate(7.4e-4 * 4.0 * pi, 45, 66.0,
                                            omega, omega, gamma);
        const double ratio = rate / gamma;
        const bool pass = std::abs(ratio - 4.30) <= 0.05;
        report(6, pass, fmt("Gamma_c/Gamma = %.3f (target 4.30 +- 0.05)", ratio));
    }

    // 7. Monte Carlo effective solid angle: 10 sets x 45 pairs, q_max = 40,
    //    mean within a factor of 3 of 7.4e-4, under 60 s
    {
        Scenario scn = load_scenario("default");
        scn.n_pairs_override = 45;
        const auto t0 = std::chrono::steady_clock::now();
        const ModeFamily family = make_mode_family(scn);
        const EmissionResult mc = monte_carlo_emission(family,
                                                       emission_inputs(scn, 45));
        const double dt = seconds_since(t0);
        const double mean = mc.solid_angle_frac_mean;
        const bool pass = mean >= 7.4e-4 / 3.0 && mean <= 7.4e-4 * 3.0 && dt < 60.0;
        report(7, pass, fmt("mean dOmega_eff/4pi = %.3e +- %.1e "
                            "(target within [%.2e, %.2e]), Gc/G = %.2f, %.1f s",
                            mean, mc.solid_angle_frac_std, 7.4e-4 / 3.0,
                            7.4e-4 * 3.0, mc.rate_ratio_mean, dt));
    }

    // 8. Loss model: series == closed form to 1e-10 at 200 terms; ratio at the
    //    reference inputs inside [2e-3, 5e-3]
    {
        const double t_outer = 1.7 / gamma;
        const double t_inner = (2.26 - 1.7) / gamma;
        const LossResult closed = loss_probability(gamma, 4.3 * gamma,
                                                   t_outer, t_inner);
        const double series = loss_series(gamma, 4.3 * gamma, t_outer, t_inner, 200);
        const double rel = std::abs(series - closed.loss_cavity) / closed.loss_cavity;
        const bool pass = rel <= 1e-10 &&
                          closed.ratio >= 2e-3 && closed.ratio <= 5e-3;
        report(8, pass, fmt("series-vs-closed rel = %.1e, Lc/L0 = %.2e "
                            "(target [2e-3, 5e-3] around 3e-3)", rel, closed.ratio));
    }

    // 9. Property suite
    {
        std::ostringstream msg;
        bool pass = true;

        // entangled-state normalization over 100 random ensembles
        {
            const Scenario scn = load_scenario("default");
            const ModeFamily family(scn.cavity, 4);
            double worst = 0.0;
            for (int s = 0; s < 100; ++s) {
                SeededRng rng(500 + s);
                const EntangledEnsemble ens = build_entangled_state(
                    scn.cloud, 45, family, 0, 0, scn.omega_laser(),
                    scn.species.pair_dipole(), rng);
                double norm = 0.0;
                for (const auto& pair : ens.pairs)
                    norm += std::norm(pair.amplitude);
                worst = std::max(worst, std::abs(norm - 1.0));
            }
            pass = pass && worst <= 1e-10;
            msg << "norm dev " << fmt("%.1e", worst);
        }

        // line-shape peak and FWHM identities
        {
            const Scenario scn = load_scenario("default");
            const double gc = scn.cavity.cavity_linewidth;
            const double w0 = scn.omega_laser();
            const bool peak_ok =
                line_shape(w0, w0, scn.cavity, 66.0) == 66.0 &&
                std::abs(line_shape(w0 + 0.5 * gc, w0, scn.cavity, 66.0) - 33.0) /
                        33.0 <
                    1e-6;
            pass = pass && peak_ok;
            msg << ", line shape " << (peak_ok ? "ok" : "BAD");
        }

        // weight-scale invariance of the effective solid angle
        {
            const Scenario scn = load_scenario("default");
            const ModeFamily family(scn.cavity, 6);
            SeededRng rng(321);
            const auto pos = sample_positions(scn.cloud, 45, rng);
            const auto dip = sample_dipoles(45, rng);
            std::vector<double> w(45);
            for (int i = 0; i < 45; ++i)
                w[i] = 0.5 * (dip[i].x * dip[i].x + dip[i].y * dip[i].y);
            const double a = effective_solid_angle_weighted(pos, w, family, 0, 0)
                                 .effective_solid_angle;
            for (double& v : w)
                v *= 123.456;
            const double b = effective_solid_angle_weighted(pos, w, family, 0, 0)
                                 .effective_solid_angle;
            const double rel = std::abs(a - b) / a;
            pass = pass && rel <= 1e-12;
            msg << ", weight-scale rel " << fmt("%.1e", rel);
        }

        // p = 1 when the rates coincide; L_c strictly decreasing in Gamma_c
        {
            const double t_outer = 1.7 / gamma, t_inner = 0.56 / gamma;
            const bool unity =
                loss_probability(gamma, gamma, t_outer, t_inner).ratio == 1.0;
            bool monotone = true;
            double prev = 2.0;
            for (double f = 1.0; f <= 8.0; f += 0.25) {
                const double lc = loss_probability(gamma, f * gamma,
                                                   t_outer, t_inner).loss_cavity;
                monotone = monotone && lc < prev;
                prev = lc;
            }
            pass = pass && unity && monotone;
            msg << ", p(G_c=G)=1 " << (unity ? "ok" : "BAD")
                << ", Lc monotone " << (monotone ? "ok" : "BAD");
        }

        // determinism across worker counts (bitwise)
        {
            const Scenario scn = load_scenario("default");
            const ModeFamily family(scn.cavity, 6);
            EmissionInputs in = emission_inputs(scn, 45);
            in.n_sets = 4;
            in.workers = 1;
            const EmissionResult r1 = monte_carlo_emission(family, in);
            in.workers = 8;
            const EmissionResult r8 = monte_carlo_emission(family, in);
            bool same = true;
            for (int s = 0; s < 4; ++s)
                same = same &&
                       r1.per_set_rate_ratio[s] == r8.per_set_rate_ratio[s] &&
                       r1.per_set_solid_angle_frac[s] ==
                           r8.per_set_solid_angle_frac[s];
            pass = pass && same;
            msg << ", worker determinism " << (same ? "ok" : "BAD");
        }

        report(9, pass, "properties: " + msg.str());
    }

    // 10. End-to-end CLI run on the default scenario
    {
        namespace fs = std::filesystem;
        const fs::path dir = fs::temp_directory_path() /
                             ("cavloss_accept_" + std::to_string(::getpid()));
        fs::create_directories(dir);
        const std::string cmd = std::string(SIM_BINARY) +
                                " loss --scenario default --out " + dir.string() +
                                " > " + (dir / "stdout.json").string() +
                                " 2>/dev/null";
        const int status = std::system(cmd.c_str());
        const int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

        bool pass = exit_code == 0;
        double ratio_p = 1.0;
        std::string detail = fmt("exit %d", exit_code);
        if (pass) {
            fs::path json_path, csv_path;
            for (const auto& entry : fs::directory_iterator(dir)) {
                if (entry.path().extension() == ".json" &&
                    entry.path().filename() != "stdout.json")
                    json_path = entry.path();
                if (entry.path().extension() == ".csv")
                    csv_path = entry.path();
            }
            pass = !json_path.empty() && !csv_path.empty();
            if (pass) {
                std::ifstream in(json_path);
                nlohmann::json summary;
                in >> summary;
                ratio_p = summary["ratio_p"].get<double>();
                std::ifstream csv(csv_path);
                std::string header;
                std::getline(csv, header);
                int rows = 0;
                std::string line;
                while (std::getline(csv, line))
                    if (!line.empty())
                        ++rows;
                pass = header == "set_index,N,delta_omega_eff_over_4pi,"
                                 "gamma_c_over_gamma,gamma_t_c,L0,Lc,ratio_p" &&
                       rows == 10 && ratio_p < 0.05 &&
                       summary["truncation_converged"].is_boolean();
                detail = fmt("exit 0, 10 rows, ratio_p = %.2e (< 0.05)", ratio_p);
            }
        }
        std::error_code ec;
        fs::remove_all(dir, ec);
        report(10, pass, detail);
    }

    std::printf("%s (%d criteria failed)\n", failures == 0 ? "ALL PASS" : "FAILURES",
                failures);
    return failures == 0 ? 0 : 1;
}
