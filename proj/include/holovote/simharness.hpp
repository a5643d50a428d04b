#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "holovote/aggregate.hpp"
#include "holovote/network.hpp"

namespace holovote {

/// Monte Carlo participation-sweep experiment: decision error of each
/// topology against the full-participation ideal, over a grid of
/// participation fractions.
struct SweepConfig {
    std::uint32_t population = 1000;
    std::vector<double> participation_grid; // strictly increasing, in (0, 1]
    std::uint32_t trials = 100;
    std::vector<TopologyConfig> topologies;
    std::uint64_t master_seed = 0;
    DecisionMode decision_mode = DecisionMode::Literal;
    bool fixed_population = false; // reuse one opinion draw across all trials
};

/// One aggregated row of the sweep: error statistics of `trials` trials for
/// a (topology, participation) cell.
struct SweepRecord {
    std::string topology;
    double participation = 0.0;
    double mean_error = 0.0;
    double std_error = 0.0; // sample standard deviation (n - 1)
    double mean_stranded_fraction = 0.0;
    std::uint32_t trials = 0;
};

struct TrialResult {
    double error = 0.0;
    double stranded_fraction = 0.0;
    std::uint32_t resamples = 0;
};

struct SweepDiagnostics {
    std::uint64_t resampled_trials = 0;
};

/// The per-trial seed: injective in (topology index, fraction index, trial
/// index) for a fixed master seed, so no two trials share a seed.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t topology_index,
                         std::size_t fraction_index, std::size_t trial_index,
                         std::size_t fraction_count, std::uint32_t trials);

/// One experiment trial: draw a population, mark participants, build the
/// topology, disseminate power, and measure the decision error against the
/// full-participation ideal. Fully determined by the arguments.
TrialResult run_trial(std::uint32_t population, const TopologyConfig& topology, double fraction,
                      std::uint64_t seed, DecisionMode mode);

/// The measurement stage of a trial, on an already-prepared population
/// (opinions drawn, activity set). `network_seed` feeds random selection.
TrialResult run_trial_members(const std::vector<Member>& members, const TopologyConfig& topology,
                              DecisionMode mode, std::uint64_t network_seed = 0);

/// Runs trials for every (topology, fraction) cell and aggregates them.
/// Deterministic in the config; trial errors are accumulated in
/// (topology, fraction, trial) index order.
std::vector<SweepRecord> sweep(const SweepConfig& config, SweepDiagnostics* diagnostics = nullptr);

/// Topology ranking per participation fraction plus an aggregate ranking by
/// trapezoidal area under the error curve. Ties order by label.
struct FractionRanking {
    double participation = 0.0;
    std::vector<std::pair<std::string, double>> ranked; // (label, mean_error), best first
};

struct TopologyComparison {
    std::vector<FractionRanking> per_fraction;
    std::vector<std::pair<std::string, double>> auc_ranking; // (label, AUC), best first
};

/// All topologies must cover the same participation grid. A single-point
/// grid ranks by that point's error instead of a degenerate zero area.
TopologyComparison compare_topologies(const std::vector<SweepRecord>& records);

// --- CSV interchange ---------------------------------------------------
// Header "topology,participation,mean_error,std_error,mean_stranded,trials",
// reals at 15 significant digits.

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_sweep_csv(std::istream& in);

} // namespace holovote
