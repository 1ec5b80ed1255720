#include "cavloss/ensemble.hpp"
#include "cavloss/errors.hpp"

#include <cmath>

namespace cavloss {

using constants::hbar;
using constants::two_pi;

void CloudGeometry::validate() const
{
    if (!(length > 0) || !(radius > 0))
        throw ConfigError("cloud: length and radius must be positive");
}

std::vector<Vec3> sample_positions(const CloudGeometry& cloud, int n, SeededRng& rng)
{
    if (n < 1)
        throw ConfigError("sample_positions: need n >= 1");
    std::vector<Vec3> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double r = cloud.radius * std::sqrt(rng.uniform());
        const double phi = rng.uniform(0.0, two_pi);
        const double z = cloud.length * (rng.uniform() - 0.5);
        out.push_back(cloud.center + Vec3{r * std::cos(phi), r * std::sin(phi), z});
    }
    return out;
}

std::vector<Vec3> sample_dipoles(int n, SeededRng& rng)
{
    if (n < 1)
        throw ConfigError("sample_dipoles: need n >= 1");
    std::vector<Vec3> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double cz = rng.uniform(-1.0, 1.0);
        const double phi = rng.uniform(0.0, two_pi);
        const double s = std::sqrt(std::max(0.0, 1.0 - cz * cz));
        out.push_back(Vec3{s * std::cos(phi), s * std::sin(phi), cz});
    }
    return out;
}

std::complex<double> coupling(const Vec3& position, const Vec3& dipole_dir,
                              const ModeFamily& family, int pumped_n, int pumped_m,
                              double omega_laser, double dipole_magnitude)
{
    const double volume = family.mode_volume(pumped_n, pumped_m);
    const double field = std::sqrt(two_pi * hbar * omega_laser / volume);
    const double fc = family.profile(pumped_n, pumped_m, position);
    // circular polarization (x + i y)/sqrt(2): eps . d = d (n_x + i n_y)/sqrt(2)
    const std::complex<double> pol{dipole_dir.x, dipole_dir.y};
    return field * fc * dipole_magnitude * pol / std::sqrt(2.0);
}

EntangledEnsemble build_entangled_state(const std::vector<Vec3>& positions,
                                        const std::vector<Vec3>& dipoles,
                                        const ModeFamily& family,
                                        int pumped_n, int pumped_m,
                                        double omega_laser, double dipole_magnitude)
{
    if (positions.empty() || positions.size() != dipoles.size())
        throw ConfigError("build_entangled_state: need matching non-empty "
                          "position and dipole lists");

    EntangledEnsemble ens;
    ens.pumped_n = pumped_n;
    ens.pumped_m = pumped_m;
    ens.pairs.resize(positions.size());

    double norm2 = 0.0; // sum |V_i|^2, fixed accumulation order
    for (std::size_t i = 0; i < positions.size(); ++i) {
        QuasimoleculePair& pair = ens.pairs[i];
        pair.position = positions[i];
        pair.dipole_dir = dipoles[i];
        pair.coupling = coupling(positions[i], dipoles[i], family,
                                 pumped_n, pumped_m, omega_laser, dipole_magnitude);
        norm2 += std::norm(pair.coupling);
    }
    if (!(norm2 > 0))
        throw DegenerateStateError("entangled state: every pair decoupled from "
                                   "the pumped mode");

    const double rabi = std::sqrt(norm2) / hbar;
    ens.collective_rabi = rabi;
    for (QuasimoleculePair& pair : ens.pairs)
        pair.amplitude = pair.coupling / (hbar * rabi);
    return ens;
}

EntangledEnsemble build_entangled_state(const CloudGeometry& cloud, int n_pairs,
                                        const ModeFamily& family,
                                        int pumped_n, int pumped_m,
                                        double omega_laser, double dipole_magnitude,
                                        SeededRng& rng)
{
    cloud.validate();
    const std::vector<Vec3> positions = sample_positions(cloud, n_pairs, rng);
    const std::vector<Vec3> dipoles = sample_dipoles(n_pairs, rng);
    return build_entangled_state(positions, dipoles, family, pumped_n, pumped_m,
                                 omega_laser, dipole_magnitude);
}

} // namespace cavloss
