#pragma once

#include <string>

#include "mems/trajectory.hpp"

namespace mems {

inline constexpr int kTrajectoryFormatVersion = 1;
inline constexpr const char* kBasisFormatVersion = "1";

/// Decimal text with 17 significant digits (round-trips doubles exactly).
std::string format_g17(double x);

/// Lossless trajectory round trip (JSON, versioned).
void write_trajectory(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory(const std::string& path);

/// Plot-ready series: t,supnorm,l2norm,energy,mass[,velnorm].
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

/// Sampled coefficient vectors: t,g_1..g_K[,dg_1..dg_K].
void write_coefficients_csv(const Trajectory& traj, const std::string& path);

/// Self-describing cache header for a basis request (format version, domain,
/// bc, beta, tau, n, N, K), one field per line.
std::string basis_header(const OperatorSpec& spec, int N, int K);

/// FNV-1a hash of the header, used as the cache file name.
std::string basis_fingerprint(const OperatorSpec& spec, int N, int K);

void save_basis(const SpectralBasis& basis, const std::string& path);

/// Throws FormatVersionMismatch for newer files, CacheCorrupt when the
/// orthonormality re-check fails, IoFailure on malformed files.
SpectralBasis load_basis(const std::string& path);

/// Loads a cached basis whose header matches the request exactly and whose
/// orthonormality re-check passes; otherwise computes and stores one.
SpectralBasis basis_cache(const OperatorSpec& spec, const Grid& grid, int K,
                          const std::string& cache_dir, bool* cache_hit = nullptr);

} // namespace mems
