// memslab command line: spectral Galerkin runs for the fourth-order MEMS
// deflection models, driven by a JSON config with flag overrides.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mems/run.hpp"

using nlohmann::json;

namespace {

int exit_code_for(mems::ErrorCode code) {
    using EC = mems::ErrorCode;
    switch (code) {
        case EC::ConfigInvalid:
        case EC::DimensionMismatch:
        case EC::DimensionNotSupported:
        case EC::ResolutionTooCoarse:
        case EC::TruncationTooLarge:
        case EC::LengthMismatch:
        case EC::RhoTooLarge:
        case EC::BallTooLarge:
        case EC::DomainNotAdmissible:
        case EC::NotCertified:
            return 2;
        default:
            return 3;
    }
}

struct Flags {
    std::string config_path;
    std::string output_dir, cache_dir;
    std::uint64_t seed = 0;
    double beta = 0, tau = 0, lambda = 0, length = 0;
    int dim = 0;
    std::string domain, bc;
    int N = 0, K = 0;
    double dt = 0, T_final = 0, touch_eps = 0, tol = 0;
    int sample_every = 0, max_iter = 0;
    std::string u0_kind, u1_kind;
    int u0_mode = 0, u1_mode = 0;
    double u0_amp = 0, u1_amp = 0;
    std::string certify_kind;
    double rho = 0, radius = 0;
    int n_probes = 0;
    bool force = false;
    std::vector<double> lambda_factors, lambda_values;
    std::vector<int> K_values, N_values;
    std::string sweep_kind;
};

void register_options(CLI::App* sub, Flags& f) {
    sub->add_option("-c,--config", f.config_path, "JSON config file");
    sub->add_option("-o,--output-dir", f.output_dir, "output directory");
    sub->add_option("--cache-dir", f.cache_dir, "basis cache directory");
    sub->add_option("--seed", f.seed, "seed for all randomized pieces");
    sub->add_option("--beta", f.beta, "bending stiffness");
    sub->add_option("--tau", f.tau, "tension");
    sub->add_option("--lambda", f.lambda, "voltage parameter");
    sub->add_option("--domain", f.domain, "interval | ball");
    sub->add_option("--length", f.length, "interval length");
    sub->add_option("--dim", f.dim, "space dimension (1..7)");
    sub->add_option("--bc", f.bc, "navier | dirichlet");
    sub->add_option("-N,--grid", f.N, "grid resolution");
    sub->add_option("-K,--modes", f.K, "spectral truncation");
    sub->add_option("--dt", f.dt, "time step");
    sub->add_option("-T,--t-final", f.T_final, "time horizon");
    sub->add_option("--touch-eps", f.touch_eps, "touchdown margin");
    sub->add_option("--tol", f.tol, "iteration tolerance");
    sub->add_option("--sample-every", f.sample_every, "sampling stride");
    sub->add_option("--max-iter", f.max_iter, "iteration cap");
    sub->add_option("--u0", f.u0_kind, "initial datum kind: zero|mode|bump");
    sub->add_option("--u0-mode", f.u0_mode, "mode index for --u0 mode");
    sub->add_option("--u0-amp", f.u0_amp, "initial datum amplitude");
    sub->add_option("--u1", f.u1_kind, "initial velocity kind");
    sub->add_option("--u1-mode", f.u1_mode, "mode index for --u1 mode");
    sub->add_option("--u1-amp", f.u1_amp, "initial velocity amplitude");
    sub->add_option("--certify-kind", f.certify_kind, "global | local | hyperbolic");
    sub->add_option("--rho", f.rho, "initial-datum size budget");
    sub->add_option("--radius", f.radius, "iteration ball radius r");
    sub->add_option("--probes", f.n_probes, "linear-constant probe count");
    sub->add_flag("--force", f.force, "run Picard without a certificate");
    sub->add_option("--lambda-factors", f.lambda_factors, "sweep multiples of 4*lambda1/27");
    sub->add_option("--lambda-values", f.lambda_values, "sweep absolute lambdas");
    sub->add_option("--sweep-K", f.K_values, "K values for a truncation study");
    sub->add_option("--sweep-N", f.N_values, "N values for a refinement study");
    sub->add_option("--sweep-kind", f.sweep_kind, "parabolic | hyperbolic");
}

void overlay(json& cfg, const CLI::App* sub, const Flags& f) {
    const auto touched = [&](const std::string& name) { return sub->count(name) > 0; };
    if (touched("--output-dir")) cfg["output_dir"] = f.output_dir;
    if (touched("--cache-dir")) cfg["cache_dir"] = f.cache_dir;
    if (touched("--seed")) cfg["seed"] = f.seed;
    if (touched("--beta")) cfg["spec"]["beta"] = f.beta;
    if (touched("--tau")) cfg["spec"]["tau"] = f.tau;
    if (touched("--lambda")) cfg["spec"]["lambda"] = f.lambda;
    if (touched("--domain")) cfg["spec"]["domain"] = f.domain;
    if (touched("--length")) cfg["spec"]["length"] = f.length;
    if (touched("--dim")) cfg["spec"]["dim"] = f.dim;
    if (touched("--bc")) cfg["spec"]["bc"] = f.bc;
    if (touched("--grid")) cfg["numerics"]["N"] = f.N;
    if (touched("--modes")) cfg["numerics"]["K"] = f.K;
    if (touched("--dt")) cfg["numerics"]["dt"] = f.dt;
    if (touched("--t-final")) cfg["numerics"]["T_final"] = f.T_final;
    if (touched("--touch-eps")) cfg["numerics"]["touch_eps"] = f.touch_eps;
    if (touched("--tol")) cfg["numerics"]["tol"] = f.tol;
    if (touched("--sample-every")) cfg["numerics"]["sample_every"] = f.sample_every;
    if (touched("--max-iter")) cfg["numerics"]["max_iter"] = f.max_iter;
    if (touched("--u0")) cfg["u0"]["kind"] = f.u0_kind;
    if (touched("--u0-mode")) cfg["u0"]["mode"] = f.u0_mode;
    if (touched("--u0-amp")) cfg["u0"]["amp"] = f.u0_amp;
    if (touched("--u1")) cfg["u1"]["kind"] = f.u1_kind;
    if (touched("--u1-mode")) cfg["u1"]["mode"] = f.u1_mode;
    if (touched("--u1-amp")) cfg["u1"]["amp"] = f.u1_amp;
    if (touched("--certify-kind")) cfg["certify"]["kind"] = f.certify_kind;
    if (touched("--rho")) cfg["certify"]["rho"] = f.rho;
    if (touched("--radius")) cfg["certify"]["r"] = f.radius;
    if (touched("--probes")) cfg["certify"]["n_probes"] = f.n_probes;
    if (touched("--force")) cfg["certify"]["force"] = f.force;
    if (touched("--lambda-factors")) cfg["sweep"]["lambda_factors"] = f.lambda_factors;
    if (touched("--lambda-values")) cfg["sweep"]["lambda_values"] = f.lambda_values;
    if (touched("--sweep-K")) cfg["sweep"]["K_values"] = f.K_values;
    if (touched("--sweep-N")) cfg["sweep"]["N_values"] = f.N_values;
    if (touched("--sweep-kind")) cfg["sweep"]["kind"] = f.sweep_kind;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"memslab: spectral Galerkin runs for fourth-order MEMS deflection models"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"spectrum", "compute and cache the operator eigenbasis"},
        {"solve-parabolic", "integrate the first-order (viscous) model"},
        {"solve-hyperbolic", "integrate the second-order (inertial) model"},
        {"picard", "iterate the solution map to its fixed point"},
        {"certify", "compute a well-posedness certificate"},
        {"quench-sweep", "touchdown bounds against simulation over a lambda grid"},
        {"convergence", "truncation / refinement studies"},
    };

    Flags flags;
    std::vector<CLI::App*> subs;
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        register_options(sub, flags);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    CLI::App* active = nullptr;
    std::string command_name;
    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) {
            active = subs[i];
            command_name = commands[i].first;
        }
    if (!active) {
        std::cerr << "error: a subcommand is required\n";
        return 2;
    }
    for (auto& ch : command_name)
        if (ch == '-') ch = '_';

    try {
        json cfg = json::object();
        if (!flags.config_path.empty()) {
            std::ifstream in(flags.config_path);
            if (!in) {
                std::cerr << "error: cannot open config file " << flags.config_path << "\n";
                return 2;
            }
            try {
                in >> cfg;
            } catch (const json::exception& e) {
                std::cerr << "error: malformed config file: " << e.what() << "\n";
                return 2;
            }
        }
        cfg["command"] = command_name;
        overlay(cfg, active, flags);

        const mems::RunConfig config = mems::parse_run_config(cfg);
        const mems::RunManifest manifest = mems::run(config);
        std::cout << "wrote " << manifest.output_files.size() << " files to " << config.output_dir
                  << " (basis " << manifest.basis_fingerprint
                  << (manifest.basis_cache_hit ? ", cached" : ", computed") << ", "
                  << manifest.wall_clock_seconds << " s)\n";
        return 0;
    } catch (const mems::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
