// Timing comparison of the serial reference kernels against the table-based
// OpenMP versions: the mode-overlap sum for one large ensemble and a Monte
// Carlo sweep over many sets. Run manually; not part of the test suite.

#include "cavloss/emission.hpp"
#include "cavloss/scenario.hpp"

#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
static double now() { return omp_get_wtime(); }
static int max_threads() { return omp_get_max_threads(); }
static void set_threads(int n) { omp_set_num_threads(n); }
#else
#include <chrono>
static double now()
{
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch()).count();
}
static int max_threads() { return 1; }
static void set_threads(int) {}
#endif

using namespace cavloss;

int main(int argc, char** argv)
{
    int n_pairs = 4000;
    int q_max = 40;
    int n_sets = 32;
    if (argc > 1) n_pairs = std::atoi(argv[1]);
    if (argc > 2) q_max = std::atoi(argv[2]);
    if (argc > 3) n_sets = std::atoi(argv[3]);

    Scenario scn = load_scenario("default");
    scn.q_max = q_max;
    const ModeFamily family = make_mode_family(scn);
    const int threads = max_threads();
    std::printf("pairs=%d  q_max=%d  sets=%d  threads=%d\n",
                n_pairs, q_max, n_sets, threads);

    // one large ensemble for the kernel benchmark
    SeededRng rng(1234);
    const EntangledEnsemble ens = build_entangled_state(
        scn.cloud, n_pairs, family, 0, 0, scn.omega_laser(),
        scn.species.pair_dipole(), rng);

    double t0 = now();
    const SolidAngleResult ref = effective_solid_angle(ens, family,
                                                       ExecPolicy::serial);
    const double t_ref = now() - t0;

    set_threads(1);
    t0 = now();
    const SolidAngleResult k1 = effective_solid_angle(ens, family,
                                                      ExecPolicy::parallel);
    const double t_k1 = now() - t0;

    set_threads(threads);
    t0 = now();
    const SolidAngleResult kn = effective_solid_angle(ens, family,
                                                      ExecPolicy::parallel);
    const double t_kn = now() - t0;

    std::printf("mode sum   reference %8.3f s | kernel x1 %8.3f s | "
                "kernel x%d %8.3f s | thread speedup %.2fx\n",
                t_ref, t_k1, threads, t_kn, t_k1 / t_kn);
    std::printf("           dOmega/4pi: %.9e (reference) %.9e (kernel)\n",
                ref.effective_solid_angle / (16.0 * std::atan(1.0)),
                kn.effective_solid_angle / (16.0 * std::atan(1.0)));
    if (k1.effective_solid_angle != kn.effective_solid_angle)
        std::printf("           WARNING: kernel results differ across thread counts\n");

    // Monte Carlo over sets at the production pair count
    EmissionInputs in = emission_inputs(scn, 45);
    in.n_sets = n_sets;

    t0 = now();
    const EmissionResult mc_ref = monte_carlo_emission(family, in,
                                                       ExecPolicy::serial);
    const double t_mc_ref = now() - t0;

    in.workers = 1;
    t0 = now();
    const EmissionResult mc_1 = monte_carlo_emission(family, in,
                                                     ExecPolicy::parallel);
    const double t_mc_1 = now() - t0;

    in.workers = threads;
    t0 = now();
    const EmissionResult mc_n = monte_carlo_emission(family, in,
                                                     ExecPolicy::parallel);
    const double t_mc_n = now() - t0;

    std::printf("monte carlo reference %7.3f s | workers=1 %8.3f s | "
                "workers=%d %7.3f s | worker speedup %.2fx\n",
                t_mc_ref, t_mc_1, threads, t_mc_n, t_mc_1 / t_mc_n);
    std::printf("           mean Gc/G: %.9f (reference) %.9f (workers=%d)\n",
                mc_ref.rate_ratio_mean, mc_n.rate_ratio_mean, threads);
    if (mc_1.rate_ratio_mean != mc_n.rate_ratio_mean)
        std::printf("           WARNING: Monte Carlo results differ across worker counts\n");
    return 0;
}
