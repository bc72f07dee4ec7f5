#include "mems/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mems {

using nlohmann::json;

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoFailure, "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spill(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::IoFailure, "cannot write " + path);
    out << content;
    if (!out) raise(ErrorCode::IoFailure, "short write to " + path);
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& rows, const char* what) {
    if (!rows.is_array()) raise(ErrorCode::IoFailure, std::string("expected array for ") + what);
    const auto nr = rows.size();
    if (nr == 0) return Matrix(0, 0);
    const auto nc = rows[0].size();
    Matrix m(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nc));
    for (std::size_t i = 0; i < nr; ++i) {
        if (rows[i].size() != nc) raise(ErrorCode::IoFailure, "ragged rows in trajectory file");
        for (std::size_t j = 0; j < nc; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].get<double>();
    }
    return m;
}

} // namespace

void write_trajectory(const Trajectory& traj, const std::string& path) {
    if (traj.samples() < 1)
        raise(ErrorCode::InsufficientSamples, "cannot serialize an empty trajectory");
    json j;
    j["format_version"] = kTrajectoryFormatVersion;
    j["kind"] = to_string(traj.kind);
    j["K"] = traj.K();
    j["times"] = traj.times;
    j["coeffs"] = matrix_to_json(traj.coeffs);
    if (traj.velocity.size() > 0) j["velocity"] = matrix_to_json(traj.velocity);
    j["supnorm"] = traj.supnorm;
    j["l2norm"] = traj.l2norm;
    j["energy"] = traj.energy;
    j["mass"] = traj.mass;
    if (!traj.velnorm.empty()) j["velnorm"] = traj.velnorm;
    j["touched"] = traj.touched;
    if (traj.touch_time) j["touch_time"] = *traj.touch_time;
    j["termination"] = to_string(traj.termination);
    spill(path, j.dump(1) + "\n");
}

Trajectory read_trajectory(const std::string& path) {
    json j;
    try {
        j = json::parse(slurp(path));
    } catch (const json::exception& e) {
        raise(ErrorCode::IoFailure, std::string("malformed trajectory file: ") + e.what());
    }
    if (!j.contains("format_version") || !j["format_version"].is_number_integer())
        raise(ErrorCode::IoFailure, "missing format_version");
    const int ver = j["format_version"].get<int>();
    if (ver > kTrajectoryFormatVersion)
        raise(ErrorCode::FormatVersionMismatch,
              "trajectory file version " + std::to_string(ver) + " is newer than " +
                  std::to_string(kTrajectoryFormatVersion));
    try {
        Trajectory t;
        t.kind = j["kind"].get<std::string>() == "hyperbolic" ? SolverKind::Hyperbolic
                                                              : SolverKind::Parabolic;
        t.times = j["times"].get<std::vector<double>>();
        t.coeffs = matrix_from_json(j["coeffs"], "coeffs");
        if (j.contains("velocity")) t.velocity = matrix_from_json(j["velocity"], "velocity");
        t.supnorm = j["supnorm"].get<std::vector<double>>();
        t.l2norm = j["l2norm"].get<std::vector<double>>();
        t.energy = j["energy"].get<std::vector<double>>();
        t.mass = j["mass"].get<std::vector<double>>();
        if (j.contains("velnorm")) t.velnorm = j["velnorm"].get<std::vector<double>>();
        t.touched = j["touched"].get<bool>();
        if (j.contains("touch_time")) t.touch_time = j["touch_time"].get<double>();
        const std::string term = j["termination"].get<std::string>();
        t.termination = term == "touchdown"  ? Termination::Touchdown
                        : term == "diverged" ? Termination::Diverged
                                             : Termination::Completed;
        return t;
    } catch (const json::exception& e) {
        raise(ErrorCode::IoFailure, std::string("malformed trajectory file: ") + e.what());
    }
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    if (traj.samples() < 1)
        raise(ErrorCode::InsufficientSamples, "cannot serialize an empty trajectory");
    std::ostringstream os;
    const bool vel = !traj.velnorm.empty();
    os << "t,supnorm,l2norm,energy,mass" << (vel ? ",velnorm" : "") << "\n";
    for (int i = 0; i < traj.samples(); ++i) {
        const auto u = static_cast<std::size_t>(i);
        os << format_g17(traj.times[u]) << ',' << format_g17(traj.supnorm[u]) << ','
           << format_g17(traj.l2norm[u]) << ',' << format_g17(traj.energy[u]) << ','
           << format_g17(traj.mass[u]);
        if (vel) os << ',' << format_g17(traj.velnorm[u]);
        os << "\n";
    }
    spill(path, os.str());
}

void write_coefficients_csv(const Trajectory& traj, const std::string& path) {
    if (traj.samples() < 1)
        raise(ErrorCode::InsufficientSamples, "cannot serialize an empty trajectory");
    std::ostringstream os;
    os << "t";
    for (int k = 1; k <= traj.K(); ++k) os << ",g_" << k;
    if (traj.velocity.size() > 0)
        for (int k = 1; k <= traj.K(); ++k) os << ",dg_" << k;
    os << "\n";
    for (int i = 0; i < traj.samples(); ++i) {
        os << format_g17(traj.times[static_cast<std::size_t>(i)]);
        for (int k = 0; k < traj.K(); ++k) os << ',' << format_g17(traj.coeffs(i, k));
        if (traj.velocity.size() > 0)
            for (int k = 0; k < traj.K(); ++k) os << ',' << format_g17(traj.velocity(i, k));
        os << "\n";
    }
    spill(path, os.str());
}

std::string basis_header(const OperatorSpec& spec, int N, int K) {
    std::ostringstream os;
    os << "memslab-basis " << kBasisFormatVersion << "\n";
    os << "domain " << to_string(spec.domain.kind) << "\n";
    if (spec.domain.kind == DomainKind::Interval)
        os << "length " << format_g17(spec.domain.length) << "\n";
    os << "bc " << to_string(spec.bc) << "\n";
    os << "beta " << format_g17(spec.beta) << "\n";
    os << "tau " << format_g17(spec.tau) << "\n";
    os << "dim_n " << spec.dim_n << "\n";
    os << "N " << N << "\n";
    os << "K " << K << "\n";
    return os.str();
}

std::string basis_fingerprint(const OperatorSpec& spec, int N, int K) {
    const std::string header = basis_header(spec, N, K);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : header) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void save_basis(const SpectralBasis& basis, const std::string& path) {
    std::ostringstream os;
    os << basis_header(basis.spec, basis.grid.cells(), basis.K);
    os << "eigenvalues\n";
    for (int k = 0; k < basis.K; ++k) os << format_g17(basis.eigenvalues[k]) << "\n";
    for (int k = 0; k < basis.K; ++k) {
        os << "eigenfunction " << k << "\n";
        for (int i = 0; i < basis.points(); ++i) os << format_g17(basis.modes(i, k)) << "\n";
    }
    os << "end\n";
    spill(path, os.str());
}

SpectralBasis load_basis(const std::string& path) {
    std::istringstream in(slurp(path));
    std::string tag, version;
    if (!(in >> tag >> version) || tag != "memslab-basis")
        raise(ErrorCode::IoFailure, "not a basis cache file: " + path);
    if (version != kBasisFormatVersion)
        raise(ErrorCode::FormatVersionMismatch,
              "basis cache version " + version + " does not match " + kBasisFormatVersion);

    std::string key;
    OperatorSpec spec;
    int N = 0, K = 0;
    double length = 1.0;
    std::string domain_kind, bc;
    while (in >> key) {
        if (key == "eigenvalues") break;
        if (key == "domain") in >> domain_kind;
        else if (key == "length") in >> length;
        else if (key == "bc") in >> bc;
        else if (key == "beta") in >> spec.beta;
        else if (key == "tau") in >> spec.tau;
        else if (key == "dim_n") in >> spec.dim_n;
        else if (key == "N") in >> N;
        else if (key == "K") in >> K;
        else raise(ErrorCode::IoFailure, "unknown basis header field: " + key);
    }
    if (!in || N < 16 || K < 1) raise(ErrorCode::IoFailure, "truncated basis header");
    spec.domain = domain_kind == "interval" ? Domain::interval(length)
                                            : Domain::radial_ball(spec.dim_n);
    spec.bc = bc == "dirichlet" ? BoundaryCondition::Dirichlet : BoundaryCondition::Navier;
    spec.lambda = 0.0;
    spec.validate();

    SpectralBasis basis;
    basis.spec = spec;
    basis.grid = build_grid(spec.domain, spec.dim_n, N);
    basis.K = K;
    basis.version = version;
    basis.eigenvalues.resize(K);
    for (int k = 0; k < K; ++k)
        if (!(in >> basis.eigenvalues[k])) raise(ErrorCode::IoFailure, "truncated eigenvalues");
    basis.modes.resize(N + 1, K);
    for (int k = 0; k < K; ++k) {
        std::string word;
        int idx = -1;
        if (!(in >> word >> idx) || word != "eigenfunction" || idx != k)
            raise(ErrorCode::IoFailure, "missing eigenfunction block " + std::to_string(k));
        for (int i = 0; i <= N; ++i)
            if (!(in >> basis.modes(i, k))) raise(ErrorCode::IoFailure, "truncated eigenfunction");
    }
    basis.finalize();

    // acceptance gate on cached data
    for (int i = 0; i < K; ++i)
        for (int j = 0; j <= i; ++j) {
            const double ip =
                l2_inner_product(basis.eigenfunction(i), basis.eigenfunction(j), basis.grid);
            if (std::abs(ip - (i == j ? 1.0 : 0.0)) >= 1e-8)
                raise(ErrorCode::CacheCorrupt,
                      "cached basis fails the orthonormality re-check at (" + std::to_string(i) +
                          "," + std::to_string(j) + ")");
        }
    return basis;
}

SpectralBasis basis_cache(const OperatorSpec& spec, const Grid& grid, int K,
                          const std::string& cache_dir, bool* cache_hit) {
    namespace fs = std::filesystem;
    if (cache_hit) *cache_hit = false;
    std::error_code ec;
    fs::create_directories(cache_dir, ec);
    if (!fs::is_directory(cache_dir))
        raise(ErrorCode::IoFailure, "cache directory does not exist: " + cache_dir);

    const std::string path =
        (fs::path(cache_dir) / ("basis-" + basis_fingerprint(spec, grid.cells(), K) + ".txt"))
            .string();
    if (fs::exists(path)) {
        try {
            SpectralBasis cached = load_basis(path);
            if (basis_header(cached.spec, cached.grid.cells(), cached.K) ==
                basis_header(spec, grid.cells(), K)) {
                if (cache_hit) *cache_hit = true;
                return cached;
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::CacheCorrupt && e.code() != ErrorCode::IoFailure &&
                e.code() != ErrorCode::FormatVersionMismatch)
                throw;
            // fall through and recompute
        }
    }
    SpectralBasis fresh = compute_spectrum(spec, grid, K);
    save_basis(fresh, path);
    return fresh;
}

} // namespace mems
