#pragma once

#include <filesystem>
#include <string>

#include "latlab/integrator.hpp"
#include "latlab/window.hpp"

namespace latlab {

/// Shortest-exact decimal rendering at 17 significant digits; parses back to
/// the same bits.
std::string format_double17(double v);

double parse_double(const std::string& text);

/// {"offset": int, "values": [real, ...]}
std::string window_to_json(const LatticeWindow& w);
LatticeWindow window_from_json(const std::string& text);

/// offset,v0,v1,...
std::string window_to_csv_row(const LatticeWindow& w);
LatticeWindow window_from_csv_row(const std::string& row);

/// Header "t,norm,u_<i0>,...,u_<i1>"; one row per sample, 17 significant
/// digits. The site range selects the stored columns.
std::string trajectory_to_csv(const TrajectorySample& traj, long site_lo, long site_hi);
std::string trajectory_to_csv(const TrajectorySample& traj);

/// Rebuilds a trajectory from its CSV (the norm column is ignored; it is
/// recomputable from the stored sites).
TrajectorySample trajectory_from_csv(const std::string& text);

/// Write-to-temp-then-rename in the target directory; no partial files remain
/// on any failure path.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

/// FNV-1a 64-bit over the raw bytes, lowercase hex. Used as the content hash
/// of config files in run manifests.
std::string content_hash_hex(const std::string& bytes);

} // namespace latlab
