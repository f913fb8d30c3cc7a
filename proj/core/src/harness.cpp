#include "rmabf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace rmabf {

namespace {

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t trial) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (trial + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Runs `trials` units partitioned into a fixed number of blocks, each with its
// own accumulator; the block layout is independent of `jobs`, so results do
// not depend on the worker count. Caller reduces the returned blocks in order.
template <typename Acc, typename Fn>
std::vector<Acc> run_blocks(int trials, int jobs, Fn&& per_trial) {
    const int blocks = std::min(trials, 16);
    std::vector<Acc> accs(static_cast<std::size_t>(std::max(blocks, 0)));
    if (blocks <= 0) return accs;

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (;;) {
                const int b = next.fetch_add(1);
                if (b >= blocks) return;
                const int begin =
                    static_cast<int>(static_cast<long>(trials) * b / blocks);
                const int end =
                    static_cast<int>(static_cast<long>(trials) * (b + 1) / blocks);
                for (int i = begin; i < end; ++i) per_trial(accs[b], i);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    const int workers = std::clamp(jobs, 1, blocks);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return accs;
}

/// Fixed-policy trial (oracle index or uniform random) in TrialLog shape.
TrialLog run_baseline(const RmabInstance& instance, const LearnerConfig& config,
                      RunAlgorithm algorithm, const IndexTable& indices,
                      double episode_objective) {
    const int N = instance.num_arms();
    const int K = config.episodes;
    const int H = config.horizon;
    const int B = std::min(instance.budget, N);

    Rng rng(config.seed);
    std::vector<int> states = instance.initial_states;
    std::vector<int> ids(N);
    std::iota(ids.begin(), ids.end(), 0);

    TrialLog log;
    log.num_arms = N;
    log.horizon = K * H;
    log.episodes = K;
    log.epochs_per_episode = H;
    log.states.reserve(static_cast<std::size_t>(log.horizon) * N);
    log.actions.reserve(static_cast<std::size_t>(log.horizon) * N);
    log.rewards.reserve(static_cast<std::size_t>(log.horizon) * N);
    log.episode_activations.assign(static_cast<std::size_t>(K) * N, 0);
    log.activation_counts.assign(N, 0);

    for (int k = 0; k < K; ++k) {
        log.episode_objectives.push_back(episode_objective);
        log.episode_indices.push_back(indices);
        for (int h = 0; h < H; ++h) {
            ActionVector actions;
            if (algorithm == RunAlgorithm::OracleIndex) {
                actions = select_top_b(indices, states, B, rng);
            } else {
                std::shuffle(ids.begin(), ids.end(), rng);
                actions.assign(N, 0);
                for (int i = 0; i < B; ++i) actions[ids[i]] = 1;
            }
            for (int n = 0; n < N; ++n) {
                const int s = states[n];
                const int a = actions[n];
                const StepOutcome out = step_arm(instance.arms[n], s, a, rng);
                log.states.push_back(static_cast<std::uint8_t>(s));
                log.actions.push_back(static_cast<std::uint8_t>(a));
                log.rewards.push_back(out.reward);
                if (a == 1) {
                    ++log.episode_activations[static_cast<std::size_t>(k) * N + n];
                    ++log.activation_counts[n];
                }
                states[n] = out.next_state;
            }
        }
    }
    return log;
}

TrialLog run_one_trial(const RmabInstance& instance, const LearnerConfig& config,
                       RunAlgorithm algorithm, const OfflineBenchmark& benchmark,
                       std::uint64_t seed) {
    LearnerConfig cfg = config;
    cfg.seed = seed;
    switch (algorithm) {
        case RunAlgorithm::FairUcrl:
            return run_fair_ucrl(instance, cfg);
        case RunAlgorithm::GFairUcrl:
            return run_g_fair_ucrl(instance, cfg);
        case RunAlgorithm::OracleIndex:
            return run_baseline(instance, cfg, algorithm, benchmark.indices,
                                benchmark.lp_bound);
        case RunAlgorithm::Random:
        default:
            return run_baseline(instance, cfg, algorithm, benchmark.indices, 0.0);
    }
}

}  // namespace

std::vector<double> reward_regret(const TrialLog& log, double v_star) {
    const int T = log.horizon;
    const int N = log.num_arms;
    std::vector<double> series(static_cast<std::size_t>(T), 0.0);
    double collected = 0.0;
    for (int t = 0; t < T; ++t) {
        for (int n = 0; n < N; ++n) collected += log.rewards[log.at(t, n)];
        series[t] = static_cast<double>(t + 1) * v_star - collected;
    }
    return series;
}

std::vector<std::vector<double>> fairness_violation(const TrialLog& log,
                                                    const std::vector<double>& eta) {
    const int T = log.horizon;
    const int N = log.num_arms;
    std::vector<std::vector<double>> series(
        static_cast<std::size_t>(N), std::vector<double>(static_cast<std::size_t>(T)));
    std::vector<long> act(static_cast<std::size_t>(N), 0);
    for (int t = 0; t < T; ++t) {
        for (int n = 0; n < N; ++n) {
            act[n] += log.actions[log.at(t, n)];
            series[n][t] =
                static_cast<double>(t + 1) * eta[n] - static_cast<double>(act[n]);
        }
    }
    return series;
}

OfflineBenchmark offline_benchmark(const RmabInstance& instance,
                                   const BenchmarkOptions& options) {
    const PlanResult plan = solve_plan(exact_confidence_model(instance),
                                       instance.budget, instance.eta,
                                       /*include_fairness=*/true);
    OfflineBenchmark bench;
    bench.lp_bound = plan.objective;
    bench.occupancy = plan.occupancy;
    bench.indices = fair_indices(plan.occupancy);

    struct Acc {
        double sum = 0.0;
        double sum_sq = 0.0;
        int count = 0;
    };
    LearnerConfig cfg;
    cfg.episodes = 1;
    cfg.horizon = options.horizon;
    const std::vector<Acc> blocks = run_blocks<Acc>(
        options.trials, options.jobs, [&](Acc& acc, int trial) {
            const TrialLog log =
                run_one_trial(instance, cfg, RunAlgorithm::OracleIndex, bench,
                              mix_seed(options.seed, static_cast<std::uint64_t>(trial)));
            double total = 0.0;
            for (double r : log.rewards) total += r;
            const double per_step = total / static_cast<double>(options.horizon);
            acc.sum += per_step;
            acc.sum_sq += per_step * per_step;
            ++acc.count;
        });

    double sum = 0.0, sum_sq = 0.0;
    int count = 0;
    for (const Acc& acc : blocks) {
        sum += acc.sum;
        sum_sq += acc.sum_sq;
        count += acc.count;
    }
    bench.index_value = sum / std::max(count, 1);
    if (count > 1) {
        const double var =
            std::max(0.0, (sum_sq - sum * sum / count) / (count - 1));
        bench.index_stderr = std::sqrt(var / count);
    }
    return bench;
}

double brute_force_value(const RmabInstance& instance, double grid) {
    if (instance.num_arms() != 1 || instance.num_states() > 3) {
        throw RmabError("brute_force_value: requires N=1 and S<=3");
    }
    const ArmModel& arm = instance.arms[0];
    const int S = arm.num_states;
    const double eta = instance.eta[0];

    // Long-run value of the stationary policy "activate in state s with
    // probability q[s]"; NaN when infeasible or the mixed chain is reducible.
    auto evaluate = [&](const std::vector<double>& q) -> double {
        std::vector<std::vector<double>> mixed(
            static_cast<std::size_t>(S), std::vector<double>(static_cast<std::size_t>(S)));
        for (int s = 0; s < S; ++s) {
            for (int t = 0; t < S; ++t) {
                mixed[s][t] = (1.0 - q[s]) * arm.transition[0][s][t] +
                              q[s] * arm.transition[1][s][t];
            }
        }
        std::vector<double> pi;
        try {
            pi = stationary_distribution(mixed);
        } catch (const RmabError&) {
            return std::nan("");
        }
        double activation = 0.0, value = 0.0;
        for (int s = 0; s < S; ++s) {
            activation += pi[s] * q[s];
            value += pi[s] * q[s] * arm.reward_mean[s][1];
        }
        if (activation < eta - 1e-12) return std::nan("");
        return value;
    };

    std::vector<double> best_q(static_cast<std::size_t>(S), 0.0);
    double best = -1.0;
    std::vector<double> q(static_cast<std::size_t>(S), 0.0);

    // Full scan at the coarse resolution, then shrinking local refinements.
    auto scan = [&](const std::vector<double>& lo, const std::vector<double>& hi,
                    double step) {
        std::vector<int> counts(static_cast<std::size_t>(S));
        for (int s = 0; s < S; ++s) {
            counts[s] = static_cast<int>(std::floor((hi[s] - lo[s]) / step + 1e-9)) + 1;
        }
        std::vector<int> idx(static_cast<std::size_t>(S), 0);
        for (;;) {
            for (int s = 0; s < S; ++s) {
                q[s] = std::min(1.0, lo[s] + idx[s] * step);
            }
            const double value = evaluate(q);
            if (!std::isnan(value) && value > best) {
                best = value;
                best_q = q;
            }
            int d = 0;
            while (d < S && ++idx[d] >= counts[d]) idx[d++] = 0;
            if (d == S) break;
        }
    };

    scan(std::vector<double>(static_cast<std::size_t>(S), 0.0),
         std::vector<double>(static_cast<std::size_t>(S), 1.0), grid);
    if (best < 0.0) throw RmabError("brute_force_value: no feasible policy on grid");

    double step = grid;
    for (int pass = 0; pass < 7; ++pass) {
        const double window = step;
        step /= 5.0;
        std::vector<double> lo(static_cast<std::size_t>(S)), hi(static_cast<std::size_t>(S));
        for (int s = 0; s < S; ++s) {
            lo[s] = std::max(0.0, best_q[s] - window);
            hi[s] = std::min(1.0, best_q[s] + window);
        }
        scan(lo, hi, step);
    }
    return best;
}

AggregateMetrics run_monte_carlo(const RmabInstance& instance,
                                 const LearnerConfig& config, RunAlgorithm algorithm,
                                 const OfflineBenchmark& benchmark,
                                 const MonteCarloOptions& options) {
    const int N = instance.num_arms();
    const int T = config.episodes * config.horizon;
    const int trials = options.trials;

    std::vector<long> quota(static_cast<std::size_t>(N), 0);
    for (int n = 0; n < N; ++n) quota[n] = fairness_quota(instance.eta[n], config.horizon);

    struct Acc {
        std::vector<double> sum_cum, sum_cum_sq;  // total reward, per epoch
        std::vector<double> sum_act;              // [n * T + t] cumulative activations
        long min_margin = LONG_MAX;
        bool init = false;
    };

    const std::vector<Acc> blocks = run_blocks<Acc>(
        trials, options.jobs, [&](Acc& acc, int trial) {
            if (!acc.init) {
                acc.sum_cum.assign(static_cast<std::size_t>(T), 0.0);
                acc.sum_cum_sq.assign(static_cast<std::size_t>(T), 0.0);
                acc.sum_act.assign(static_cast<std::size_t>(N) * T, 0.0);
                acc.init = true;
            }
            const TrialLog log =
                run_one_trial(instance, config, algorithm, benchmark,
                              mix_seed(config.seed, static_cast<std::uint64_t>(trial)));
            double cum = 0.0;
            std::vector<long> act(static_cast<std::size_t>(N), 0);
            for (int t = 0; t < T; ++t) {
                for (int n = 0; n < N; ++n) {
                    cum += log.rewards[log.at(t, n)];
                    act[n] += log.actions[log.at(t, n)];
                    acc.sum_act[static_cast<std::size_t>(n) * T + t] +=
                        static_cast<double>(act[n]);
                }
                acc.sum_cum[t] += cum;
                acc.sum_cum_sq[t] += cum * cum;
            }
            for (int k = 0; k < log.episodes; ++k) {
                for (int n = 0; n < N; ++n) {
                    const long margin =
                        log.episode_activations[static_cast<std::size_t>(k) * N + n] -
                        quota[n];
                    acc.min_margin = std::min(acc.min_margin, margin);
                }
            }
        });

    std::vector<double> sum_cum(static_cast<std::size_t>(T), 0.0);
    std::vector<double> sum_cum_sq(static_cast<std::size_t>(T), 0.0);
    std::vector<double> sum_act(static_cast<std::size_t>(N) * T, 0.0);
    long min_margin = LONG_MAX;
    for (const Acc& acc : blocks) {
        if (!acc.init) continue;
        for (int t = 0; t < T; ++t) {
            sum_cum[t] += acc.sum_cum[t];
            sum_cum_sq[t] += acc.sum_cum_sq[t];
        }
        for (std::size_t i = 0; i < sum_act.size(); ++i) sum_act[i] += acc.sum_act[i];
        min_margin = std::min(min_margin, acc.min_margin);
    }

    AggregateMetrics agg;
    agg.trials = trials;
    agg.horizon = T;
    agg.num_arms = N;
    agg.tracked_arms = std::min(8, N);
    agg.lp_bound = benchmark.lp_bound;
    agg.index_benchmark = benchmark.index_value;
    agg.min_quota_margin = (min_margin == LONG_MAX) ? 0 : min_margin;
    agg.mean_cum_reward.assign(static_cast<std::size_t>(T), 0.0);
    agg.mean_regret_lp.assign(static_cast<std::size_t>(T), 0.0);
    agg.mean_regret_index.assign(static_cast<std::size_t>(T), 0.0);
    agg.stderr_regret.assign(static_cast<std::size_t>(T), 0.0);
    agg.act_frac.assign(static_cast<std::size_t>(agg.tracked_arms),
                        std::vector<double>(static_cast<std::size_t>(T), 0.0));
    agg.fair_viol.assign(static_cast<std::size_t>(agg.tracked_arms),
                         std::vector<double>(static_cast<std::size_t>(T), 0.0));
    agg.act_frac_min.assign(static_cast<std::size_t>(T), 0.0);
    agg.act_frac_mean.assign(static_cast<std::size_t>(T), 0.0);
    agg.second_half_act_frac.assign(static_cast<std::size_t>(N), 0.0);

    const double inv_trials = 1.0 / std::max(trials, 1);
    for (int t = 0; t < T; ++t) {
        const double mean = sum_cum[t] * inv_trials;
        agg.mean_cum_reward[t] = mean;
        agg.mean_regret_lp[t] = (t + 1) * benchmark.lp_bound - mean;
        agg.mean_regret_index[t] = (t + 1) * benchmark.index_value - mean;
        if (trials > 1) {
            const double var = std::max(
                0.0, (sum_cum_sq[t] - sum_cum[t] * sum_cum[t] * inv_trials) /
                         (trials - 1));
            agg.stderr_regret[t] = std::sqrt(var * inv_trials);
        }
        double frac_min = 1.0, frac_sum = 0.0;
        for (int n = 0; n < N; ++n) {
            const double mean_act =
                sum_act[static_cast<std::size_t>(n) * T + t] * inv_trials;
            const double frac = mean_act / static_cast<double>(t + 1);
            frac_min = std::min(frac_min, frac);
            frac_sum += frac;
            if (n < agg.tracked_arms) {
                agg.act_frac[n][t] = frac;
                agg.fair_viol[n][t] = (t + 1) * instance.eta[n] - mean_act;
            }
        }
        agg.act_frac_min[t] = frac_min;
        agg.act_frac_mean[t] = frac_sum / N;
    }
    const int half = T / 2;
    for (int n = 0; n < N; ++n) {
        const double tail =
            sum_act[static_cast<std::size_t>(n) * T + (T - 1)] -
            (half > 0 ? sum_act[static_cast<std::size_t>(n) * T + (half - 1)] : 0.0);
        agg.second_half_act_frac[n] = tail * inv_trials / std::max(T - half, 1);
    }
    return agg;
}

std::vector<SweepPoint> optimality_gap_sweep(const RmabInstance& base,
                                             const SweepOptions& options) {
    const int C = base.num_arms();  // classes
    const int S = base.num_states();
    const int T = options.horizon;

    const PlanResult base_plan = solve_plan(exact_confidence_model(base), base.budget,
                                            base.eta, /*include_fairness=*/true);
    const IndexTable base_indices = fair_indices(base_plan.occupancy);

    std::vector<SweepPoint> points;
    for (const int rho : options.replicas) {
        const int N = C * rho;
        IndexTable indices;
        indices.omega.reserve(static_cast<std::size_t>(N));
        std::vector<const ArmModel*> arm_of(static_cast<std::size_t>(N));
        std::vector<int> class_of(static_cast<std::size_t>(N));
        std::vector<int> states0(static_cast<std::size_t>(N));
        for (int c = 0; c < C; ++c) {
            for (int i = 0; i < rho; ++i) {
                const int n = c * rho + i;
                indices.omega.push_back(base_indices.omega[c]);
                arm_of[n] = &base.arms[c];
                class_of[n] = c;
                states0[n] = base.initial_states[c];
            }
        }
        const int budget = std::min(base.budget * rho, N);

        struct Acc {
            double sum = 0.0, sum_sq = 0.0, residual = 0.0;
            int count = 0;
        };
        const std::vector<Acc> blocks = run_blocks<Acc>(
            options.trials, options.jobs, [&](Acc& acc, int trial) {
                Rng rng(mix_seed(options.seed ^ static_cast<std::uint64_t>(rho),
                                 static_cast<std::uint64_t>(trial)));
                std::vector<int> states = states0;
                std::vector<double> freq(
                    static_cast<std::size_t>(C) * S * kNumActions, 0.0);
                double total = 0.0;
                for (int t = 0; t < T; ++t) {
                    const ActionVector actions =
                        select_top_b(indices, states, budget, rng);
                    for (int n = 0; n < N; ++n) {
                        const StepOutcome out =
                            step_arm(*arm_of[n], states[n], actions[n], rng);
                        freq[(static_cast<std::size_t>(class_of[n]) * S + states[n]) *
                                 kNumActions +
                             actions[n]] += 1.0;
                        total += out.reward;
                        states[n] = out.next_state;
                    }
                }
                const double per_step = total / T;
                acc.sum += per_step;
                acc.sum_sq += per_step * per_step;
                double residual = 0.0;
                const double scale = 1.0 / (static_cast<double>(rho) * T);
                for (int c = 0; c < C; ++c) {
                    for (int j = 0; j < S * kNumActions; ++j) {
                        residual += std::abs(
                            freq[static_cast<std::size_t>(c) * S * kNumActions + j] *
                                scale -
                            base_plan.occupancy.zeta[c][j]);
                    }
                }
                acc.residual += residual / C;
                ++acc.count;
            });

        double sum = 0.0, sum_sq = 0.0, residual = 0.0;
        int count = 0;
        for (const Acc& acc : blocks) {
            sum += acc.sum;
            sum_sq += acc.sum_sq;
            residual += acc.residual;
            count += acc.count;
        }
        SweepPoint point;
        point.replicas = rho;
        point.arms = N;
        point.lp_bound = base_plan.objective * rho;  // replica symmetry
        point.sim_mean = sum / std::max(count, 1);
        if (count > 1) {
            const double var =
                std::max(0.0, (sum_sq - sum * sum / count) / (count - 1));
            point.sim_stderr = std::sqrt(var / count);
        }
        point.gap_per_arm = (point.lp_bound - point.sim_mean) / N;
        point.attractor_residual = residual / std::max(count, 1);
        points.push_back(point);
    }
    return points;
}

}  // namespace rmabf
