#include "cavloss/run.hpp"
#include "cavloss/errors.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cavloss {

using nlohmann::json;

namespace {

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9e", v);
    return buf;
}

std::string hash_hex(std::uint64_t h)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string utc_now()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json base_summary(const char* command, const Scenario& scn, const std::string& hash)
{
    json j;
    j["command"] = command;
    j["scenario_hash"] = hash;
    j["tool_version"] = kToolVersion;
    j["timestamp_utc"] = utc_now();
    j["species"] = scn.species.name;
    j["n_sets"] = scn.n_sets;
    j["base_seed"] = scn.base_seed;
    j["q_max"] = scn.q_max;
    return j;
}

void add_pipeline_fields(json& j, const SuppressionResult& r, double linewidth)
{
    j["n_pairs"] = r.pair_count;
    j["n_pairs_real"] = r.pair_count_real;
    j["r_c_angstrom"] = r.geometry.condon_radius * 1e8;
    j["delta_r_angstrom"] = r.geometry.shell_width * 1e8;
    j["r_e_angstrom"] = r.geometry.inner_radius * 1e8;
    j["t_c_s"] = r.geometry.time_outer;
    j["t_e_s"] = r.geometry.time_inner;
    j["t_0_s"] = r.geometry.time_total;
    j["gamma_t_c"] = linewidth * r.geometry.time_outer;
    j["gamma_t_0"] = linewidth * r.geometry.time_total;
    j["delta_omega_eff_over_4pi_mean"] = r.emission.solid_angle_frac_mean;
    j["delta_omega_eff_over_4pi_std"] = r.emission.solid_angle_frac_std;
    j["gamma_c_over_gamma_mean"] = r.emission.rate_ratio_mean;
    j["gamma_c_over_gamma_std"] = r.emission.rate_ratio_std;
    j["modes_used"] = r.emission.modes_used;
    j["truncation_converged"] = r.emission.truncation_converged;
    j["single_set"] = r.emission.single_set;
    j["L0"] = r.aggregate.loss_free;
    j["Lc"] = r.aggregate.loss_cavity;
    j["ratio_p"] = r.aggregate.ratio;
    j["approx_p"] = r.aggregate.approx_ratio;
}

std::string pipeline_csv(const SuppressionResult& r, double linewidth)
{
    std::ostringstream csv;
    csv << "set_index,N,delta_omega_eff_over_4pi,gamma_c_over_gamma,"
           "gamma_t_c,L0,Lc,ratio_p\n";
    const double gamma_t_c = linewidth * r.geometry.time_outer;
    for (std::size_t s = 0; s < r.per_set.size(); ++s) {
        csv << s << ',' << r.pair_count << ','
            << sci(r.emission.per_set_solid_angle_frac[s]) << ','
            << sci(r.emission.per_set_rate_ratio[s]) << ','
            << sci(gamma_t_c) << ','
            << sci(r.per_set[s].loss_free) << ','
            << sci(r.per_set[s].loss_cavity) << ','
            << sci(r.per_set[s].ratio) << '\n';
    }
    return csv.str();
}

RunArtifacts run_pipeline(const char* command, const Scenario& scenario)
{
    Scenario scn = scenario;
    scn.normalize_and_validate();
    const SuppressionResult r = suppression_pipeline(scn);
    const double linewidth = quasimolecule_linewidth(scn.species);
    const std::string hash = hash_hex(scn.canonical_hash());

    RunArtifacts art;
    art.summary = base_summary(command, scn, hash);
    add_pipeline_fields(art.summary, r, linewidth);
    art.csv = pipeline_csv(r, linewidth);
    art.csv_filename = std::string(command) + "-" + hash + ".csv";
    art.json_filename = std::string(command) + "-" + hash + ".json";
    art.summary["csv_file"] = art.csv_filename;
    return art;
}

} // namespace

RunArtifacts run_emission(const Scenario& scenario)
{
    return run_pipeline("emission", scenario);
}

RunArtifacts run_loss(const Scenario& scenario)
{
    return run_pipeline("loss", scenario);
}

RunArtifacts run_sweep(const Scenario& scenario, const std::string& parameter,
                       const std::vector<double>& values)
{
    if (values.empty())
        throw ConfigError("sweep: the value list is empty");

    Scenario base = scenario;
    base.normalize_and_validate();

    // record identity: scenario hash extended with the sweep request
    std::ostringstream ident;
    ident << hash_hex(base.canonical_hash()) << '|' << parameter;
    for (double v : values)
        ident << ',' << sci(v);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : ident.str()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    const std::string hash = hash_hex(h);

    std::ostringstream csv;
    csv << "value_index,param_value,r_c_angstrom,N,delta_omega_eff_over_4pi,"
           "gamma_c_over_gamma,gamma_t_c,L0,Lc,ratio_p\n";

    for (std::size_t i = 0; i < values.size(); ++i) {
        Scenario scn = base;
        scn.base_seed = base.base_seed + 100003ull * (i + 1);
        const double v = values[i];
        if (parameter == "detuning")
            scn.detuning = convert(v, Unit::MHz, Unit::rad_s);
        else if (parameter == "N_A")
            scn.atom_number = v;
        else if (parameter == "n_A")
            scn.atom_density = v;
        else if (parameter == "reflectivity_r")
            scn.cavity.reflectivity = v;
        else if (parameter == "trap_depth")
            scn.trap_depth = convert(v, Unit::MHz_energy, Unit::erg);
        else if (parameter == "n_pairs")
            scn.n_pairs_override = static_cast<int>(v);
        else
            throw ConfigError("sweep: unknown parameter '" + parameter + "'");
        scn.normalize_and_validate();

        const SuppressionResult r = suppression_pipeline(scn);
        const double linewidth = quasimolecule_linewidth(scn.species);
        csv << i << ',' << sci(v) << ','
            << sci(r.geometry.condon_radius * 1e8) << ','
            << r.pair_count << ','
            << sci(r.emission.solid_angle_frac_mean) << ','
            << sci(r.emission.rate_ratio_mean) << ','
            << sci(linewidth * r.geometry.time_outer) << ','
            << sci(r.aggregate.loss_free) << ','
            << sci(r.aggregate.loss_cavity) << ','
            << sci(r.aggregate.ratio) << '\n';
    }

    RunArtifacts art;
    art.summary = base_summary("sweep", base, hash);
    art.summary["parameter"] = parameter;
    art.summary["n_values"] = values.size();
    art.csv = csv.str();
    art.csv_filename = "sweep-" + hash + ".csv";
    art.json_filename = "sweep-" + hash + ".json";
    art.summary["csv_file"] = art.csv_filename;
    return art;
}

RunArtifacts run_modes(const Scenario& scenario)
{
    Scenario scn = scenario;
    scn.normalize_and_validate();
    const ModeFamily family = make_mode_family(scn);
    const std::string hash = hash_hex(scn.canonical_hash());

    std::ostringstream csv;
    csv << "# finesse = " << sci(family.finesse())
        << ", lambda_00 = " << sci(family.peak_enhancement()) << '\n';
    csv << "n,m,q,delta_omega_nm_sr,epsilon_nm,lambda_nm\n";
    for (const ResonatorMode& mode : family.modes()) {
        csv << mode.n << ',' << mode.m << ',' << mode.order() << ','
            << sci(mode.solid_angle) << ','
            << sci(mode.clip_loss) << ','
            << sci(mode.enhancement) << '\n';
    }

    RunArtifacts art;
    art.summary = base_summary("modes", scn, hash);
    art.summary["finesse"] = family.finesse();
    art.summary["lambda_00"] = family.peak_enhancement();
    art.summary["mode_count"] = family.modes().size();
    art.summary["solid_angle_cap_sr"] = scn.cavity.geometric_solid_angle();
    art.csv = csv.str();
    art.csv_filename = "modes-" + hash + ".csv";
    art.json_filename = "modes-" + hash + ".json";
    art.summary["csv_file"] = art.csv_filename;
    return art;
}

std::pair<std::string, std::string> write_artifacts(const RunArtifacts& artifacts,
                                                    const std::string& outdir)
{
    namespace fs = std::filesystem;
    fs::create_directories(outdir);
    const fs::path csv_path = fs::path(outdir) / artifacts.csv_filename;
    const fs::path json_path = fs::path(outdir) / artifacts.json_filename;

    std::ofstream csv(csv_path);
    if (!csv)
        throw ConfigError("cannot write " + csv_path.string());
    csv << artifacts.csv;

    std::ofstream js(json_path);
    if (!js)
        throw ConfigError("cannot write " + json_path.string());
    js << artifacts.summary.dump(2) << '\n';

    return {csv_path.string(), json_path.string()};
}

} // namespace cavloss
