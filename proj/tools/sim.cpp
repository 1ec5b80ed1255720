#include "cavloss/errors.hpp"
#include "cavloss/run.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct CommonOpts {
    std::string scenario = "default";
    std::string outdir = ".";
    int sets = -1;
    long long seed = -1;
    int qmax = -1;
    int workers = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opt)
{
    cmd->add_option("--scenario", opt.scenario,
                    "Scenario file, or 'default' for the built-in configuration");
    cmd->add_option("--out", opt.outdir, "Output directory for CSV/JSON files");
    cmd->add_option("--sets", opt.sets, "Override the number of Monte Carlo sets")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", opt.seed, "Override the base seed")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--qmax", opt.qmax, "Override the transverse mode order cap")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--workers", opt.workers,
                    "Worker threads for Monte Carlo sets (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
}

cavloss::Scenario make_scenario(const CommonOpts& opt)
{
    cavloss::Scenario scn = cavloss::load_scenario(opt.scenario);
    if (opt.sets >= 0)
        scn.n_sets = opt.sets;
    if (opt.seed >= 0)
        scn.base_seed = static_cast<std::uint64_t>(opt.seed);
    if (opt.qmax >= 0)
        scn.q_max = opt.qmax;
    if (opt.workers >= 0)
        scn.workers = opt.workers;
    scn.normalize_and_validate();
    return scn;
}

void finish(const cavloss::RunArtifacts& art, const std::string& outdir)
{
    cavloss::write_artifacts(art, outdir);
    std::cout << art.summary.dump(2) << std::endl;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cavity-modified cold-collision trap loss simulator"};
    app.require_subcommand(1);

    CommonOpts emission_opt, loss_opt, sweep_opt, modes_opt;
    std::string sweep_param;
    std::string sweep_values;

    CLI::App* emission = app.add_subcommand(
        "emission", "Monte Carlo collective emission rate");
    add_common(emission, emission_opt);

    CLI::App* loss = app.add_subcommand(
        "loss", "Trap-loss suppression pipeline");
    add_common(loss, loss_opt);

    CLI::App* sweep = app.add_subcommand(
        "sweep", "Scan one scenario parameter");
    add_common(sweep, sweep_opt);
    sweep->add_option("--param", sweep_param,
                      "Parameter key: detuning | N_A | n_A | reflectivity_r | "
                      "trap_depth | n_pairs")->required();
    sweep->add_option("--values", sweep_values,
                      "Comma-separated list of values")->required();

    CLI::App* modes = app.add_subcommand(
        "modes", "Transverse mode table of the cavity");
    add_common(modes, modes_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cavloss::kExitConfig;
    }

    try {
        if (emission->parsed()) {
            finish(cavloss::run_emission(make_scenario(emission_opt)),
                   emission_opt.outdir);
        } else if (loss->parsed()) {
            finish(cavloss::run_loss(make_scenario(loss_opt)), loss_opt.outdir);
        } else if (sweep->parsed()) {
            std::vector<double> values;
            std::size_t pos = 0;
            while (pos <= sweep_values.size() && !sweep_values.empty()) {
                const std::size_t comma = sweep_values.find(',', pos);
                const std::string tok = sweep_values.substr(
                    pos, comma == std::string::npos ? std::string::npos : comma - pos);
                if (!tok.empty()) {
                    char* end = nullptr;
                    const double v = std::strtod(tok.c_str(), &end);
                    if (end == tok.c_str() || *end != '\0')
                        throw cavloss::ConfigError("sweep: bad value '" + tok + "'");
                    values.push_back(v);
                }
                if (comma == std::string::npos)
                    break;
                pos = comma + 1;
            }
            finish(cavloss::run_sweep(make_scenario(sweep_opt), sweep_param, values),
                   sweep_opt.outdir);
        } else if (modes->parsed()) {
            finish(cavloss::run_modes(make_scenario(modes_opt)), modes_opt.outdir);
        }
    } catch (const cavloss::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cavloss::kExitConfig;
    } catch (const cavloss::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return cavloss::kExitNumerical;
    } catch (const cavloss::DegenerateStateError& e) {
        std::cerr << "degenerate configuration: " << e.what() << '\n';
        return cavloss::kExitDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return cavloss::kExitOk;
}
