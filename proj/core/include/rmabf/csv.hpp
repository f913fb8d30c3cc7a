// CSV emission (RFC-4180, UTF-8, LF) for the CLI subcommands. All numbers are
// serialized with 9 significant digits for bit-stable round-trips.

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rmabf/harness.hpp"

namespace rmabf {

std::string format_number(double value);  // %.9g

/// `learn` schema: t, mean_cum_reward, mean_reward_regret_lp,
/// mean_reward_regret_index, stderr_reward_regret, then (act_frac_n,
/// fair_viol_n) for the first min(8, N) arms, then act_frac_min, act_frac_mean.
void write_learn_csv(const AggregateMetrics& metrics, std::ostream& out);

/// `plan` schema: arm, state, omega, zeta_passive, zeta_active; preceded by no
/// extra metadata rows (the LP value goes to the log, not the CSV).
void write_plan_csv(const IndexTable& indices, const OccupancyMeasure& occupancy,
                    std::ostream& out);

/// `sweep` schema: replicas, arms, lp_bound, sim_mean, sim_stderr,
/// gap_per_arm, attractor_residual.
void write_sweep_csv(const std::vector<SweepPoint>& points, std::ostream& out);

/// `oracle` schema: one row — lp_value, brute_force_value, abs_diff.
void write_oracle_csv(double lp_value, double brute_value, std::ostream& out);

/// Opens `path` and writes via `writer`; I/O failures surface as RmabError
/// carrying the path.
void write_csv_file(const std::string& path,
                    const std::function<void(std::ostream&)>& writer);

}  // namespace rmabf
