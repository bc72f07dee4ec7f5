#pragma once

#include <json.hpp>

#include "mems/trajectory.hpp"

namespace mems {

enum class Command {
    Spectrum,
    SolveParabolic,
    SolveHyperbolic,
    Picard,
    Certify,
    QuenchSweep,
    Convergence,
};

const char* to_string(Command c);
Command command_from_string(const std::string& s);

/// Named initial data: "zero", "mode" (amp * omega_mode), "bump" (a smooth
/// clamped-compatible polynomial bump), or explicit grid "values".
struct InitialData {
    std::string kind = "zero";
    int mode = 1;
    double amp = 0.0;
    std::vector<double> values;
};

struct NumericsConfig {
    int N = 256;
    int K = 8;
    double dt = 1e-3;
    double T_final = 1.0;
    double touch_eps = 1e-4;
    double tol = 1e-8;
    int sample_every = 1;
    int max_iter = 50;
};

struct CertifySection {
    std::string kind = "global"; // global | local | hyperbolic
    double rho = 0.01;
    double r = 1.0;
    int n_probes = 8;
    bool force = false;
};

struct SweepSection {
    std::vector<double> lambda_factors; // multiples of the threshold 4*lambda_1/27
    std::vector<double> lambda_values;  // absolute voltages
    std::vector<int> K_values;          // truncation study
    std::vector<int> N_values;          // grid refinement study
    std::string kind = "parabolic";     // quench sweep solver
};

struct RunConfig {
    Command command = Command::Spectrum;
    OperatorSpec spec;
    NumericsConfig numerics;
    InitialData u0, u1;
    CertifySection certify;
    SweepSection sweep;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    std::string cache_dir; // empty: $MEMSLAB_CACHE_DIR, else output_dir/cache
};

RunConfig parse_run_config(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& c);

struct RunManifest {
    nlohmann::json config_echo;
    std::string artifact_version;
    std::string basis_fingerprint;
    bool basis_cache_hit = false;
    double wall_clock_seconds = 0.0;
    std::vector<std::string> output_files;
};

/// Dispatches the configured command, writes its CSV/JSON outputs and the
/// manifest into output_dir. Deterministic given (config, seed): re-running
/// an identical config reproduces every output file byte for byte (the
/// manifest's wall_clock_seconds field is the one excepted value).
RunManifest run(const RunConfig& config);

} // namespace mems
