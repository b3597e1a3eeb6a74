#pragma once

#include "vortex/diagnostics.hpp"
#include "vortex/dynamics.hpp"

#include <span>
#include <string>

namespace vortex {

/// Shortest decimal string that round-trips the exact double value.
std::string format_double(double v);

/// Trajectory table: header comments carrying the kernel spec, eps and eta,
/// then one row (t, n, x, y, gamma) per vortex per snapshot.
void write_trajectory(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory(const std::string& path);

/// Diagnostics time series: rows (t, Q, M, cx, cy, H).
void write_diagnostics_series(std::span<const DiagnosticsRecord> records, const std::string& path);

/// Maximal-function series: rows (t, r, M_r).
void write_vmf_series(std::span<const DiagnosticsRecord> records, const std::string& path);

/// Key-value reports.
void write_weak_report(const WeakResidualReport& rep, const std::string& path);
void write_decay_report(const DecayBoundReport& rep, const std::string& path);

} // namespace vortex
