#include "mems/run.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "mems/certificates.hpp"
#include "mems/fixed_point.hpp"
#include "mems/hyperbolic.hpp"
#include "mems/io.hpp"
#include "mems/parabolic.hpp"
#include "mems/quench.hpp"

namespace mems {

using nlohmann::json;
namespace fs = std::filesystem;

const char* to_string(Command c) {
    switch (c) {
        case Command::Spectrum: return "spectrum";
        case Command::SolveParabolic: return "solve_parabolic";
        case Command::SolveHyperbolic: return "solve_hyperbolic";
        case Command::Picard: return "picard";
        case Command::Certify: return "certify";
        case Command::QuenchSweep: return "quench_sweep";
        case Command::Convergence: return "convergence";
    }
    return "unknown";
}

Command command_from_string(const std::string& s) {
    if (s == "spectrum") return Command::Spectrum;
    if (s == "solve_parabolic") return Command::SolveParabolic;
    if (s == "solve_hyperbolic") return Command::SolveHyperbolic;
    if (s == "picard") return Command::Picard;
    if (s == "certify") return Command::Certify;
    if (s == "quench_sweep") return Command::QuenchSweep;
    if (s == "convergence") return Command::Convergence;
    raise(ErrorCode::ConfigInvalid, "unknown command: " + s);
}

namespace {

template <typename T>
T field_or(const json& j, const char* section, const char* name, T fallback) {
    if (!j.contains(name)) return fallback;
    try {
        return j.at(name).get<T>();
    } catch (const json::exception&) {
        raise(ErrorCode::ConfigInvalid,
              std::string(section) + "." + name + " has the wrong type");
    }
}

OperatorSpec parse_spec(const json& j) {
    OperatorSpec s;
    s.beta = field_or(j, "spec", "beta", 1.0);
    s.tau = field_or(j, "spec", "tau", 0.0);
    s.lambda = field_or(j, "spec", "lambda", 0.0);
    const std::string dom = field_or<std::string>(j, "spec", "domain", "interval");
    const int dim = field_or(j, "spec", "dim", 1);
    if (dom == "interval")
        s.domain = Domain::interval(field_or(j, "spec", "length", 1.0));
    else if (dom == "ball")
        s.domain = Domain::radial_ball(dim);
    else
        raise(ErrorCode::ConfigInvalid, "spec.domain must be 'interval' or 'ball'");
    const std::string bc = field_or<std::string>(j, "spec", "bc", "navier");
    if (bc == "navier")
        s.bc = BoundaryCondition::Navier;
    else if (bc == "dirichlet")
        s.bc = BoundaryCondition::Dirichlet;
    else
        raise(ErrorCode::ConfigInvalid, "spec.bc must be 'navier' or 'dirichlet'");
    s.dim_n = dim;
    s.validate();
    return s;
}

InitialData parse_initial(const json& j, const char* section) {
    InitialData d;
    d.kind = field_or<std::string>(j, section, "kind", "zero");
    d.mode = field_or(j, section, "mode", 1);
    d.amp = field_or(j, section, "amp", 0.0);
    d.values = field_or(j, section, "values", std::vector<double>{});
    if (d.kind != "zero" && d.kind != "mode" && d.kind != "bump" && d.kind != "values")
        raise(ErrorCode::ConfigInvalid,
              std::string(section) + ".kind must be zero|mode|bump|values");
    return d;
}

Vector realize_initial(const InitialData& d, const SpectralBasis& basis) {
    const int n = basis.points();
    if (d.kind == "zero") return Vector::Zero(n);
    if (d.kind == "mode") {
        if (d.mode < 1 || d.mode > basis.K)
            raise(ErrorCode::ConfigInvalid, "initial mode index must lie in [1, K]");
        return d.amp * basis.eigenfunction(d.mode - 1);
    }
    if (d.kind == "bump") {
        Vector u(n);
        const double L = basis.grid.nodes[n - 1];
        for (int i = 0; i < n; ++i) {
            const double x = basis.grid.nodes[i];
            if (basis.spec.domain.kind == DomainKind::Interval) {
                const double s = 4.0 * x * (L - x) / (L * L);
                u[i] = d.amp * s * s;
            } else {
                const double s = 1.0 - x * x;
                u[i] = d.amp * s * s;
            }
        }
        return u;
    }
    if (static_cast<int>(d.values.size()) != n)
        raise(ErrorCode::ConfigInvalid,
              "initial values must have N+1 = " + std::to_string(n) + " entries");
    return Eigen::Map<const Vector>(d.values.data(), n);
}

json certificate_to_json(const Certificate& c) {
    json j;
    j["kind"] = to_string(c.kind);
    j["C_emb"] = c.C_emb;
    j["C_lin"] = c.C_lin;
    j["r"] = c.r;
    j["R"] = c.R;
    j["rho"] = c.rho;
    j["rho_max"] = c.rho_max;
    j["k_r"] = c.k_r;
    j["lambda"] = c.lambda;
    j["lambda_global"] = c.lambda_global;
    j["T_local"] = c.T_local;
    j["lambda_T"] = c.lambda_T;
    j["T_horizon"] = c.T_horizon;
    j["regime"] = to_string(c.regime);
    j["provenance"] = c.provenance;
    return j;
}

struct OutputWriter {
    fs::path dir;
    std::vector<std::string> files;

    std::string path(const std::string& name) {
        files.push_back(name);
        return (dir / name).string();
    }
    void text(const std::string& name, const std::string& content) {
        std::ofstream out(path(name), std::ios::binary | std::ios::trunc);
        if (!out) raise(ErrorCode::IoFailure, "cannot write " + name);
        out << content;
    }
    void json_file(const std::string& name, const json& j) { text(name, j.dump(1) + "\n"); }
};

json trajectory_summary(const Trajectory& traj, const RunConfig& config) {
    json s;
    s["termination"] = to_string(traj.termination);
    s["touched"] = traj.touched;
    if (traj.touch_time) s["touch_time"] = *traj.touch_time;
    s["samples"] = traj.samples();
    s["final_time"] = traj.times.back();
    s["final_supnorm"] = traj.supnorm.back();
    s["final_l2norm"] = traj.l2norm.back();
    s["config"] = run_config_to_json(config);
    return s;
}

} // namespace

RunConfig parse_run_config(const json& j) {
    RunConfig c;
    if (!j.contains("command") || !j["command"].is_string())
        raise(ErrorCode::ConfigInvalid, "command is required");
    c.command = command_from_string(j["command"].get<std::string>());
    c.spec = parse_spec(j.value("spec", json::object()));

    const json n = j.value("numerics", json::object());
    c.numerics.N = field_or(n, "numerics", "N", 256);
    c.numerics.K = field_or(n, "numerics", "K", 8);
    c.numerics.dt = field_or(n, "numerics", "dt", 1e-3);
    c.numerics.T_final = field_or(n, "numerics", "T_final", 1.0);
    c.numerics.touch_eps = field_or(n, "numerics", "touch_eps", 1e-4);
    c.numerics.tol = field_or(n, "numerics", "tol", 1e-8);
    c.numerics.sample_every = field_or(n, "numerics", "sample_every", 1);
    c.numerics.max_iter = field_or(n, "numerics", "max_iter", 50);
    if (c.numerics.N < 16)
        raise(ErrorCode::ConfigInvalid, "numerics.N violates the bound N >= 16");
    if (c.numerics.K < 1 || 4 * c.numerics.K > c.numerics.N)
        raise(ErrorCode::ConfigInvalid, "numerics.K violates the bound K <= N/4");
    if (!(c.numerics.dt > 0.0))
        raise(ErrorCode::ConfigInvalid, "numerics.dt must be positive");
    if (!(c.numerics.T_final > c.numerics.dt))
        raise(ErrorCode::ConfigInvalid, "numerics.T_final must exceed dt");
    if (!(c.numerics.touch_eps > 0.0 && c.numerics.touch_eps < 0.1))
        raise(ErrorCode::ConfigInvalid, "numerics.touch_eps violates the bound (0, 0.1)");
    if (c.numerics.sample_every < 1)
        raise(ErrorCode::ConfigInvalid, "numerics.sample_every must be >= 1");
    if (c.numerics.max_iter < 1)
        raise(ErrorCode::ConfigInvalid, "numerics.max_iter must be >= 1");

    c.u0 = parse_initial(j.value("u0", json::object()), "u0");
    c.u1 = parse_initial(j.value("u1", json::object()), "u1");

    const json ce = j.value("certify", json::object());
    c.certify.kind = field_or<std::string>(ce, "certify", "kind", "global");
    if (c.certify.kind != "global" && c.certify.kind != "local" && c.certify.kind != "hyperbolic")
        raise(ErrorCode::ConfigInvalid, "certify.kind must be global|local|hyperbolic");
    c.certify.rho = field_or(ce, "certify", "rho", 0.01);
    c.certify.r = field_or(ce, "certify", "r", 1.0);
    c.certify.n_probes = field_or(ce, "certify", "n_probes", 8);
    c.certify.force = field_or(ce, "certify", "force", false);

    const json sw = j.value("sweep", json::object());
    c.sweep.lambda_factors = field_or(sw, "sweep", "lambda_factors", std::vector<double>{});
    c.sweep.lambda_values = field_or(sw, "sweep", "lambda_values", std::vector<double>{});
    c.sweep.K_values = field_or(sw, "sweep", "K_values", std::vector<int>{});
    c.sweep.N_values = field_or(sw, "sweep", "N_values", std::vector<int>{});
    c.sweep.kind = field_or<std::string>(sw, "sweep", "kind", "parabolic");
    if (c.sweep.kind != "parabolic" && c.sweep.kind != "hyperbolic")
        raise(ErrorCode::ConfigInvalid, "sweep.kind must be parabolic|hyperbolic");

    c.seed = field_or<std::uint64_t>(j, "", "seed", 1);
    c.output_dir = field_or<std::string>(j, "", "output_dir", "out");
    c.cache_dir = field_or<std::string>(j, "", "cache_dir", "");
    return c;
}

json run_config_to_json(const RunConfig& c) {
    json j;
    j["command"] = to_string(c.command);
    json spec;
    spec["beta"] = c.spec.beta;
    spec["tau"] = c.spec.tau;
    spec["lambda"] = c.spec.lambda;
    spec["domain"] = c.spec.domain.kind == DomainKind::Interval ? "interval" : "ball";
    if (c.spec.domain.kind == DomainKind::Interval) spec["length"] = c.spec.domain.length;
    spec["dim"] = c.spec.dim_n;
    spec["bc"] = c.spec.bc == BoundaryCondition::Navier ? "navier" : "dirichlet";
    j["spec"] = spec;
    json n;
    n["N"] = c.numerics.N;
    n["K"] = c.numerics.K;
    n["dt"] = c.numerics.dt;
    n["T_final"] = c.numerics.T_final;
    n["touch_eps"] = c.numerics.touch_eps;
    n["tol"] = c.numerics.tol;
    n["sample_every"] = c.numerics.sample_every;
    n["max_iter"] = c.numerics.max_iter;
    j["numerics"] = n;
    const auto initial = [](const InitialData& d) {
        json v;
        v["kind"] = d.kind;
        v["mode"] = d.mode;
        v["amp"] = d.amp;
        if (!d.values.empty()) v["values"] = d.values;
        return v;
    };
    j["u0"] = initial(c.u0);
    j["u1"] = initial(c.u1);
    json ce;
    ce["kind"] = c.certify.kind;
    ce["rho"] = c.certify.rho;
    ce["r"] = c.certify.r;
    ce["n_probes"] = c.certify.n_probes;
    ce["force"] = c.certify.force;
    j["certify"] = ce;
    json sw;
    if (!c.sweep.lambda_factors.empty()) sw["lambda_factors"] = c.sweep.lambda_factors;
    if (!c.sweep.lambda_values.empty()) sw["lambda_values"] = c.sweep.lambda_values;
    if (!c.sweep.K_values.empty()) sw["K_values"] = c.sweep.K_values;
    if (!c.sweep.N_values.empty()) sw["N_values"] = c.sweep.N_values;
    sw["kind"] = c.sweep.kind;
    j["sweep"] = sw;
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    if (!c.cache_dir.empty()) j["cache_dir"] = c.cache_dir;
    return j;
}

namespace {

std::string resolve_cache_dir(const RunConfig& c) {
    if (!c.cache_dir.empty()) return c.cache_dir;
    if (const char* env = std::getenv("MEMSLAB_CACHE_DIR"); env && *env) return env;
    return (fs::path(c.output_dir) / "cache").string();
}

SolveConfig make_solve_config(const RunConfig& c, std::shared_ptr<const SpectralBasis> basis,
                              SolverKind kind) {
    SolveConfig cfg;
    cfg.spec = c.spec;
    cfg.basis = basis;
    cfg.u0 = realize_initial(c.u0, *basis);
    if (kind == SolverKind::Hyperbolic) cfg.u1 = realize_initial(c.u1, *basis);
    cfg.T_final = c.numerics.T_final;
    cfg.dt = c.numerics.dt;
    cfg.touch_eps = c.numerics.touch_eps;
    cfg.sample_every = c.numerics.sample_every;
    return cfg;
}

void write_solution(OutputWriter& out, const Trajectory& traj, const RunConfig& c) {
    write_trajectory_csv(traj, out.path("trajectory.csv"));
    write_coefficients_csv(traj, out.path("coefficients.csv"));
    write_trajectory(traj, out.path("trajectory.json"));
    out.json_file("summary.json", trajectory_summary(traj, c));
}

Certificate make_certificate(const RunConfig& c, const SpectralBasis& basis) {
    CertifyOptions opt;
    opt.n_probes = c.certify.n_probes;
    opt.seed = c.seed;
    if (c.certify.kind == "global") return certify_global(c.spec, basis, c.certify.rho, c.certify.r, opt);
    if (c.certify.kind == "local") return certify_local(c.spec, basis, c.certify.rho, c.certify.r, opt);
    return certify_hyperbolic(c.spec, basis, c.certify.rho, c.certify.r, c.numerics.T_final, opt);
}

} // namespace

RunManifest run(const RunConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    config.spec.validate();

    OutputWriter out;
    out.dir = config.output_dir;
    std::error_code ec;
    fs::create_directories(out.dir, ec);
    if (!fs::is_directory(out.dir))
        raise(ErrorCode::IoFailure, "cannot create output directory " + config.output_dir);

    RunManifest manifest;
    manifest.artifact_version = "1.0.0";
    manifest.config_echo = run_config_to_json(config);

    const Grid grid = build_grid(config.spec.domain, config.spec.dim_n, config.numerics.N);
    auto basis = std::make_shared<SpectralBasis>(basis_cache(
        config.spec, grid, config.numerics.K, resolve_cache_dir(config), &manifest.basis_cache_hit));
    manifest.basis_fingerprint = basis_fingerprint(config.spec, config.numerics.N, config.numerics.K);

    switch (config.command) {
        case Command::Spectrum: {
            std::ostringstream csv;
            csv << "k,lambda\n";
            for (int k = 0; k < basis->K; ++k)
                csv << (k + 1) << ',' << format_g17(basis->eigenvalues[k]) << "\n";
            out.text("eigenvalues.csv", csv.str());
            json s;
            s["N"] = config.numerics.N;
            s["K"] = basis->K;
            s["embedding_constant"] = embedding_constant(*basis);
            s["eigenvalues"] = std::vector<double>(basis->eigenvalues.data(),
                                                   basis->eigenvalues.data() + basis->K);
            s["config"] = manifest.config_echo;
            out.json_file("spectrum.json", s);
            break;
        }
        case Command::SolveParabolic: {
            const Trajectory traj = solve_parabolic(make_solve_config(config, basis, SolverKind::Parabolic));
            write_solution(out, traj, config);
            break;
        }
        case Command::SolveHyperbolic: {
            const Trajectory traj =
                solve_hyperbolic(make_solve_config(config, basis, SolverKind::Hyperbolic));
            write_solution(out, traj, config);
            break;
        }
        case Command::Certify: {
            const Certificate cert = make_certificate(config, *basis);
            out.json_file("certificate.json", certificate_to_json(cert));
            break;
        }
        case Command::Picard: {
            const SolverKind kind = config.certify.kind == "hyperbolic" ? SolverKind::Hyperbolic
                                                                        : SolverKind::Parabolic;
            SolveConfig cfg = make_solve_config(config, basis, kind);
            json report;
            if (config.certify.force) {
                const PicardReport rep = picard_solve(cfg, kind, config.numerics.max_iter,
                                                      config.numerics.tol, nullptr, true);
                report["certificate"] = nullptr;
                report["distances"] = rep.distances;
                report["ratios"] = rep.ratios;
                report["converged"] = rep.converged;
                report["no_contraction"] = rep.no_contraction;
                report["iterates"] = rep.iterates;
                write_solution(out, rep.fixed_point, config);
            } else {
                const Certificate cert = make_certificate(config, *basis);
                const PicardReport rep = picard_solve(cfg, kind, config.numerics.max_iter,
                                                      config.numerics.tol, &cert, false);
                report["certificate"] = certificate_to_json(cert);
                report["distances"] = rep.distances;
                report["ratios"] = rep.ratios;
                report["converged"] = rep.converged;
                report["no_contraction"] = rep.no_contraction;
                report["iterates"] = rep.iterates;
                report["predicted_ratio_uniform"] = rep.predicted_ratio_uniform;
                report["predicted_ratio_time_scaled"] = rep.predicted_ratio_time_scaled;
                write_solution(out, rep.fixed_point, config);
            }
            report["lambda"] = config.spec.lambda;
            report["tol"] = config.numerics.tol;
            out.json_file("picard.json", report);
            break;
        }
        case Command::QuenchSweep: {
            if (!quench_admissible(config.spec))
                raise(ErrorCode::DomainNotAdmissible,
                      "quench sweeps need pinned conditions or the clamped ball");
            const PrincipalEigenpair pair = principal_eigenpair(*basis);
            const double thresh = 4.0 * pair.lambda1 / 27.0;
            std::vector<double> lambdas = config.sweep.lambda_values;
            for (double f : config.sweep.lambda_factors) lambdas.push_back(f * thresh);
            if (lambdas.empty())
                raise(ErrorCode::ConfigInvalid,
                      "quench_sweep needs sweep.lambda_values or sweep.lambda_factors");

            struct Row {
                double lambda, c0, T_bound, touch_time;
                bool bound_satisfied;
            };
            const SolverKind kind = config.sweep.kind == "hyperbolic" ? SolverKind::Hyperbolic
                                                                      : SolverKind::Parabolic;
            const auto run_one = [&](double lambda) -> Row {
                Row row;
                row.lambda = lambda;
                const QuenchConstants qc = quench_constants(lambda, pair.lambda1);
                row.c0 = qc.c0;
                row.T_bound = qc.c0 > 0.0 ? (1.0 - 0.0) / qc.c0
                                          : std::numeric_limits<double>::infinity();
                RunConfig rc = config;
                rc.spec.lambda = lambda;
                SolveConfig cfg = make_solve_config(rc, basis, kind);
                // cap each run at the interesting window around its bound
                if (std::isfinite(row.T_bound))
                    cfg.T_final = std::min(cfg.T_final, 1.2 * row.T_bound);
                const Trajectory traj = kind == SolverKind::Parabolic ? solve_parabolic(cfg)
                                                                      : solve_hyperbolic(cfg);
                const MassReport rep = verify_mass_inequality(traj, pair, lambda, *basis);
                row.touch_time = traj.touch_time ? *traj.touch_time
                                                 : std::numeric_limits<double>::quiet_NaN();
                row.bound_satisfied = rep.bound_satisfied;
                return row;
            };
            std::vector<std::future<Row>> futs;
            futs.reserve(lambdas.size());
            for (double lambda : lambdas)
                futs.push_back(std::async(std::launch::async, run_one, lambda));
            std::ostringstream csv;
            csv << "lambda,c0,T_bound,touch_time,bound_satisfied\n";
            for (auto& f : futs) {
                const Row row = f.get();
                csv << format_g17(row.lambda) << ',' << format_g17(row.c0) << ','
                    << format_g17(row.T_bound) << ',' << format_g17(row.touch_time) << ','
                    << (row.bound_satisfied ? "true" : "false") << "\n";
            }
            out.text("quench_sweep.csv", csv.str());
            json s;
            s["lambda1"] = pair.lambda1;
            s["lambda_threshold"] = thresh;
            s["config"] = manifest.config_echo;
            out.json_file("quench_summary.json", s);
            break;
        }
        case Command::Convergence: {
            if (config.sweep.K_values.empty() && config.sweep.N_values.empty())
                raise(ErrorCode::ConfigInvalid,
                      "convergence needs sweep.K_values or sweep.N_values");
            if (!config.sweep.K_values.empty()) {
                std::ostringstream csv;
                csv << "K,K_next,l2_diff\n";
                std::vector<Vector> finals;
                for (int K : config.sweep.K_values) {
                    if (K < 1 || 4 * K > config.numerics.N)
                        raise(ErrorCode::ConfigInvalid, "sweep.K_values violate K <= N/4");
                    auto bK = std::make_shared<SpectralBasis>(
                        basis_cache(config.spec, grid, K, resolve_cache_dir(config), nullptr));
                    RunConfig rc = config;
                    rc.numerics.K = K;
                    SolveConfig cfg = make_solve_config(rc, bK, SolverKind::Parabolic);
                    const Trajectory t = solve_parabolic(cfg);
                    finals.push_back(synthesize(*bK, t.coeffs.row(t.samples() - 1).transpose()));
                }
                for (std::size_t i = 0; i + 1 < finals.size(); ++i) {
                    const Vector d = finals[i] - finals[i + 1];
                    csv << config.sweep.K_values[i] << ',' << config.sweep.K_values[i + 1] << ','
                        << format_g17(std::sqrt(l2_inner_product(d, d, grid))) << "\n";
                }
                out.text("convergence_K.csv", csv.str());
            }
            if (!config.sweep.N_values.empty()) {
                std::ostringstream csv;
                csv << "N,k,lambda\n";
                for (int N : config.sweep.N_values) {
                    const Grid gN = build_grid(config.spec.domain, config.spec.dim_n, N);
                    const SpectralBasis bN = basis_cache(config.spec, gN, config.numerics.K,
                                                         resolve_cache_dir(config), nullptr);
                    for (int k = 0; k < bN.K; ++k)
                        csv << N << ',' << (k + 1) << ',' << format_g17(bN.eigenvalues[k]) << "\n";
                }
                out.text("convergence_N.csv", csv.str());
            }
            break;
        }
    }

    const auto t1 = std::chrono::steady_clock::now();
    manifest.wall_clock_seconds = std::chrono::duration<double>(t1 - t0).count();
    manifest.output_files = out.files;

    json m;
    m["artifact_version"] = manifest.artifact_version;
    m["config"] = manifest.config_echo;
    m["basis_fingerprint"] = manifest.basis_fingerprint;
    m["basis_cache_hit"] = manifest.basis_cache_hit;
    m["wall_clock_seconds"] = manifest.wall_clock_seconds;
    m["output_files"] = manifest.output_files;
    out.json_file("manifest.json", m);
    return manifest;
}

} // namespace mems
