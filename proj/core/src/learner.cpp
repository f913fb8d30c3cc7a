#include "rmabf/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rmabf {

Counts init_counts(int num_arms, int num_states) {
    Counts counts;
    counts.num_arms = num_arms;
    counts.num_states = num_states;
    counts.visit.assign(num_arms, std::vector<long>(num_states * kNumActions, 0));
    counts.trans.assign(
        num_arms, std::vector<long>(num_states * kNumActions * num_states, 0));
    counts.reward_sum.assign(num_arms,
                             std::vector<double>(num_states * kNumActions, 0.0));
    return counts;
}

void update_counts(Counts& counts, int n, int s, int a, double reward, int s_next) {
    ++counts.visit[n][counts.sa(s, a)];
    ++counts.trans[n][counts.sas(s, a, s_next)];
    counts.reward_sum[n][counts.sa(s, a)] += reward;
}

ConfidenceModel empirical_estimates(const Counts& counts) {
    const int N = counts.num_arms;
    const int S = counts.num_states;
    ConfidenceModel conf;
    conf.num_arms = N;
    conf.num_states = S;
    conf.p_hat.assign(static_cast<std::size_t>(N) * S * kNumActions * S, 0.0);
    conf.r_hat.assign(static_cast<std::size_t>(N) * S * kNumActions, 0.0);
    conf.delta.assign(static_cast<std::size_t>(N) * S * kNumActions, 0.0);
    for (int n = 0; n < N; ++n) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < kNumActions; ++a) {
                const int sa = conf.sa_index(n, s, a);
                const long c = counts.visit[n][counts.sa(s, a)];
                if (c > 0) {
                    conf.r_hat[sa] =
                        counts.reward_sum[n][counts.sa(s, a)] / static_cast<double>(c);
                    for (int t = 0; t < S; ++t) {
                        conf.p_hat[sa * S + t] =
                            static_cast<double>(counts.trans[n][counts.sas(s, a, t)]) /
                            static_cast<double>(c);
                    }
                } else {
                    for (int t = 0; t < S; ++t) conf.p_hat[sa * S + t] = 1.0 / S;
                }
            }
        }
    }
    return conf;
}

double confidence_radius(long count, int k, int horizon, double epsilon,
                         int num_states, int num_actions, int num_arms) {
    const double episodes_seen = static_cast<double>(std::max(k - 1, 1));
    const double arg = static_cast<double>(num_states) * num_actions * num_arms *
                       episodes_seen * horizon / epsilon;
    const double c = static_cast<double>(std::max(count, 1L));
    return std::sqrt(std::log(arg) / (2.0 * c));
}

EpisodePlan plan_episode(const Counts& counts, int k, const LearnerConfig& config,
                         int budget, const std::vector<double>& eta,
                         bool include_fairness) {
    ConfidenceModel conf = empirical_estimates(counts);
    for (int n = 0; n < counts.num_arms; ++n) {
        for (int s = 0; s < counts.num_states; ++s) {
            for (int a = 0; a < kNumActions; ++a) {
                conf.delta[conf.sa_index(n, s, a)] = confidence_radius(
                    counts.visit[n][counts.sa(s, a)], k, config.horizon,
                    config.epsilon, counts.num_states, kNumActions, counts.num_arms);
            }
        }
    }
    const PlanResult plan =
        solve_plan(conf, budget, eta, include_fairness, config.plan_method);

    EpisodePlan out;
    out.indices = fair_indices(plan.occupancy);
    out.objective = plan.objective;
    out.occupancy = plan.occupancy;
    return out;
}

long fairness_quota(double eta, int horizon) {
    // The 1e-9 backoff keeps e.g. 160 * 0.3 = 48.000000000000007 at quota 48.
    const double q = std::ceil(static_cast<double>(horizon) * eta - 1e-9);
    return std::max(0L, static_cast<long>(q));
}

std::vector<ActionVector> greedy_exploration_schedule(const std::vector<double>& eta,
                                                      int horizon, int budget,
                                                      int num_arms, Rng& rng) {
    const int N = num_arms;
    const int B = std::min(budget, N);

    std::vector<long> quota(N, 0);
    long total = 0;
    for (int n = 0; n < N; ++n) {
        quota[n] = fairness_quota(eta[n], horizon);
        total += quota[n];
    }
    if (total == 0) return {};

    const long length = (total + B - 1) / B;
    const long max_quota = *std::max_element(quota.begin(), quota.end());
    if (total > static_cast<long>(horizon) * B || max_quota > length) {
        throw RmabError("fairness quota exceeds episode budget");
    }

    std::vector<int> tie_rank(N);
    std::iota(tie_rank.begin(), tie_rank.end(), 0);
    std::shuffle(tie_rank.begin(), tie_rank.end(), rng);

    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    int filler = 0;  // round-robin pointer for slack slots

    std::vector<ActionVector> schedule;
    schedule.reserve(static_cast<std::size_t>(length));
    for (long e = 0; e < length; ++e) {
        // Largest remaining quota first keeps every quota schedulable in the
        // remaining epochs (classic longest-remaining-time argument).
        std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
            if (quota[lhs] != quota[rhs]) return quota[lhs] > quota[rhs];
            return tie_rank[lhs] < tie_rank[rhs];
        });
        ActionVector actions(N, 0);
        int active = 0;
        for (int i = 0; i < N && active < B; ++i) {
            const int n = order[i];
            if (quota[n] == 0) break;
            actions[n] = 1;
            --quota[n];
            ++active;
        }
        while (active < B) {
            const int n = filler;
            filler = (filler + 1) % N;
            if (!actions[n]) {
                actions[n] = 1;
                ++active;
            }
        }
        schedule.push_back(std::move(actions));
    }
    return schedule;
}

namespace {

struct StepRecord {
    int n, s, a, s_next;
    double reward;
};

TrialLog run_learner(const RmabInstance& instance, const LearnerConfig& config) {
    const int N = instance.num_arms();
    const int S = instance.num_states();
    const int K = config.episodes;
    const int H = config.horizon;
    const int B = instance.budget;
    const bool greedy_phase = (config.algorithm == Algorithm::GFairUcrl);

    Rng rng(config.seed);
    Counts counts = init_counts(N, S);
    std::vector<int> states = instance.initial_states;

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

    std::vector<StepRecord> pending;
    pending.reserve(static_cast<std::size_t>(H) * N);

    auto execute_epoch = [&](int episode, const ActionVector& actions) {
        for (int n = 0; n < N; ++n) {
            const int s = states[n];
            const int a = actions[n];
            const StepOutcome out = step_arm(instance.arms[n], s, a, rng);
            log.states.push_back(static_cast<std::uint8_t>(s));
            log.actions.push_back(static_cast<std::uint8_t>(a));
            log.rewards.push_back(out.reward);
            pending.push_back({n, s, a, out.next_state, out.reward});
            if (a == 1) {
                ++log.episode_activations[static_cast<std::size_t>(episode) * N + n];
                ++log.activation_counts[n];
            }
            states[n] = out.next_state;
        }
    };
    auto flush_counts = [&] {
        for (const StepRecord& rec : pending) {
            update_counts(counts, rec.n, rec.s, rec.a, rec.reward, rec.s_next);
        }
        pending.clear();
    };

    for (int k = 1; k <= K; ++k) {
        int h = 0;
        if (greedy_phase) {
            const std::vector<ActionVector> schedule =
                greedy_exploration_schedule(instance.eta, H, B, N, rng);
            if (static_cast<int>(schedule.size()) > H) {
                throw RmabError("fairness quota exceeds episode budget");
            }
            for (const ActionVector& actions : schedule) {
                execute_epoch(k - 1, actions);
                ++h;
            }
            flush_counts();  // greedy samples inform this episode's plan
        }

        EpisodePlan plan = plan_episode(counts, k, config, B, instance.eta,
                                        /*include_fairness=*/!greedy_phase);
        log.episode_objectives.push_back(plan.objective);
        log.episode_indices.push_back(std::move(plan.indices));
        const IndexTable& indices = log.episode_indices.back();

        for (; h < H; ++h) {
            execute_epoch(k - 1, select_top_b(indices, states, B, rng));
        }
        flush_counts();
    }
    return log;
}

}  // namespace

TrialLog run_fair_ucrl(const RmabInstance& instance, const LearnerConfig& config) {
    LearnerConfig cfg = config;
    cfg.algorithm = Algorithm::FairUcrl;
    return run_learner(instance, cfg);
}

TrialLog run_g_fair_ucrl(const RmabInstance& instance, const LearnerConfig& config) {
    LearnerConfig cfg = config;
    cfg.algorithm = Algorithm::GFairUcrl;
    return run_learner(instance, cfg);
}

}  // namespace rmabf
