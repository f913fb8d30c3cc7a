#include "rmabf/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace rmabf {

std::string format_number(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.9g", value);
    return buffer;
}

void write_learn_csv(const AggregateMetrics& metrics, std::ostream& out) {
    out << "t,mean_cum_reward,mean_reward_regret_lp,mean_reward_regret_index,"
           "stderr_reward_regret";
    for (int n = 0; n < metrics.tracked_arms; ++n) {
        out << ",act_frac_" << (n + 1) << ",fair_viol_" << (n + 1);
    }
    out << ",act_frac_min,act_frac_mean\n";
    for (int t = 0; t < metrics.horizon; ++t) {
        out << (t + 1) << ',' << format_number(metrics.mean_cum_reward[t]) << ','
            << format_number(metrics.mean_regret_lp[t]) << ','
            << format_number(metrics.mean_regret_index[t]) << ','
            << format_number(metrics.stderr_regret[t]);
        for (int n = 0; n < metrics.tracked_arms; ++n) {
            out << ',' << format_number(metrics.act_frac[n][t]) << ','
                << format_number(metrics.fair_viol[n][t]);
        }
        out << ',' << format_number(metrics.act_frac_min[t]) << ','
            << format_number(metrics.act_frac_mean[t]) << '\n';
    }
}

void write_plan_csv(const IndexTable& indices, const OccupancyMeasure& occupancy,
                    std::ostream& out) {
    out << "arm,state,omega,zeta_passive,zeta_active\n";
    for (int n = 0; n < occupancy.num_arms; ++n) {
        for (int s = 0; s < occupancy.num_states; ++s) {
            out << n << ',' << s << ',' << format_number(indices.omega[n][s]) << ','
                << format_number(occupancy.zeta_at(n, s, 0)) << ','
                << format_number(occupancy.zeta_at(n, s, 1)) << '\n';
        }
    }
}

void write_sweep_csv(const std::vector<SweepPoint>& points, std::ostream& out) {
    out << "replicas,arms,lp_bound,sim_mean,sim_stderr,gap_per_arm,"
           "attractor_residual\n";
    for (const SweepPoint& p : points) {
        out << p.replicas << ',' << p.arms << ',' << format_number(p.lp_bound) << ','
            << format_number(p.sim_mean) << ',' << format_number(p.sim_stderr) << ','
            << format_number(p.gap_per_arm) << ','
            << format_number(p.attractor_residual) << '\n';
    }
}

void write_oracle_csv(double lp_value, double brute_value, std::ostream& out) {
    out << "lp_value,brute_force_value,abs_diff\n";
    out << format_number(lp_value) << ',' << format_number(brute_value) << ','
        << format_number(std::abs(lp_value - brute_value)) << '\n';
}

void write_csv_file(const std::string& path,
                    const std::function<void(std::ostream&)>& writer) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
    if (!out) throw RmabError("csv: cannot open for writing: " + path);
    writer(out);
    out.flush();
    if (!out) throw RmabError("csv: write failed: " + path);
}

}  // namespace rmabf
