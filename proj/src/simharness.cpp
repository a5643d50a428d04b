#include "holovote/simharness.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "holovote/csv.hpp"
#include "holovote/errors.hpp"
#include "holovote/power.hpp"
#include "holovote/rng.hpp"

namespace holovote {

namespace {

// Sub-streams of a trial seed.
constexpr std::uint64_t kPopulationStream = 1;
constexpr std::uint64_t kActivityStream = 2;
constexpr std::uint64_t kNetworkStream = 3;
constexpr std::uint64_t kResampleStream = 0xA5;
// Fixed-population mode draws opinions from this master sub-stream.
constexpr std::uint64_t kFixedPopulationStream = 0x8000000000000000ull;

constexpr std::uint32_t kMaxResamples = 3;

} // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t topology_index,
                         std::size_t fraction_index, std::size_t trial_index,
                         std::size_t fraction_count, std::uint32_t trials) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(topology_index) * fraction_count + fraction_index) * trials +
        trial_index;
    return derive_seed(master_seed, key);
}

TrialResult run_trial_members(const std::vector<Member>& members, const TopologyConfig& topology,
                              DecisionMode mode, std::uint64_t network_seed) {
    const double perfect = perfect_decision(members);

    double decision = 0.0;
    double stranded = 0.0;
    if (topology.model == NetworkModel::K0) {
        decision = k0_decision(members).value;
        for (const Member& member : members)
            stranded += member.active ? 0.0 : 1.0;
    } else if (topology.model == NetworkModel::Full) {
        // Dense topology: same flow semantics without the N^2 edge list.
        const PowerAssignment assignment = disseminate_full(members, topology.depth);
        decision = network_decision(assignment, members, mode).value;
        stranded = assignment.stranded;
    } else {
        const DelegationNetwork network = build_network(members, topology, network_seed);
        const PowerAssignment assignment = disseminate(network, topology.depth);
        decision = network_decision(assignment, members, mode).value;
        stranded = assignment.stranded;
    }

    TrialResult result;
    result.error = decision_error(decision, perfect);
    result.stranded_fraction = stranded / static_cast<double>(members.size());
    return result;
}

TrialResult run_trial(std::uint32_t population, const TopologyConfig& topology, double fraction,
                      std::uint64_t seed, DecisionMode mode) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("participation fraction must lie in (0, 1]");

    std::uint64_t attempt_seed = seed;
    for (std::uint32_t attempt = 0;; ++attempt) {
        std::vector<Member> members =
            generate_population(population, derive_seed(attempt_seed, kPopulationStream));
        members = set_activity(std::move(members), fraction,
                               derive_seed(attempt_seed, kActivityStream));
        const bool any_active =
            std::any_of(members.begin(), members.end(), [](const Member& m) { return m.active; });
        if (any_active) {
            TrialResult result = run_trial_members(members, topology, mode,
                                                   derive_seed(attempt_seed, kNetworkStream));
            result.resamples = attempt;
            return result;
        }
        if (attempt >= kMaxResamples)
            throw NoDecisionError("participation fraction yields zero active members");
        attempt_seed = derive_seed(attempt_seed, kResampleStream);
    }
}

std::vector<SweepRecord> sweep(const SweepConfig& config, SweepDiagnostics* diagnostics) {
    if (config.population == 0)
        throw std::invalid_argument("population must be positive");
    if (config.trials == 0)
        throw std::invalid_argument("trials must be positive");
    if (config.topologies.empty())
        throw std::invalid_argument("at least one topology is required");
    if (config.participation_grid.empty())
        throw std::invalid_argument("participation grid is empty");
    for (std::size_t i = 0; i < config.participation_grid.size(); ++i) {
        const double f = config.participation_grid[i];
        if (!(f > 0.0 && f <= 1.0))
            throw std::invalid_argument("participation fractions must lie in (0, 1]");
        if (i > 0 && f <= config.participation_grid[i - 1])
            throw std::invalid_argument("participation grid must be strictly increasing");
    }

    std::vector<Member> fixed_population;
    if (config.fixed_population)
        fixed_population = generate_population(
            config.population, derive_seed(config.master_seed, kFixedPopulationStream));

    std::vector<SweepRecord> records;
    records.reserve(config.topologies.size() * config.participation_grid.size());
    std::vector<double> errors(config.trials);
    for (std::size_t t = 0; t < config.topologies.size(); ++t) {
        for (std::size_t f = 0; f < config.participation_grid.size(); ++f) {
            const double fraction = config.participation_grid[f];
            long double stranded_sum = 0.0L;
            for (std::uint32_t trial = 0; trial < config.trials; ++trial) {
                const std::uint64_t seed =
                    trial_seed(config.master_seed, t, f, trial,
                               config.participation_grid.size(), config.trials);
                TrialResult result;
                if (config.fixed_population) {
                    const std::vector<Member> members = set_activity(
                        fixed_population, fraction, derive_seed(seed, kActivityStream));
                    result = run_trial_members(members, config.topologies[t],
                                               config.decision_mode,
                                               derive_seed(seed, kNetworkStream));
                } else {
                    result = run_trial(config.population, config.topologies[t], fraction, seed,
                                       config.decision_mode);
                }
                errors[trial] = result.error;
                stranded_sum += result.stranded_fraction;
                if (diagnostics != nullptr)
                    diagnostics->resampled_trials += result.resamples;
            }

            long double mean = 0.0L;
            for (double e : errors)
                mean += e;
            mean /= config.trials;
            long double var = 0.0L;
            for (double e : errors)
                var += (e - mean) * (e - mean);
            const double std_error =
                config.trials > 1
                    ? std::sqrt(static_cast<double>(var / (config.trials - 1)))
                    : 0.0;

            SweepRecord record;
            record.topology = config.topologies[t].label();
            record.participation = fraction;
            record.mean_error = static_cast<double>(mean);
            record.std_error = std_error;
            record.mean_stranded_fraction = static_cast<double>(stranded_sum / config.trials);
            record.trials = config.trials;
            records.push_back(std::move(record));
        }
    }
    return records;
}

TopologyComparison compare_topologies(const std::vector<SweepRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("no sweep records to compare");

    std::vector<std::string> labels; // first-appearance order
    std::map<std::string, std::vector<const SweepRecord*>> by_label;
    for (const SweepRecord& record : records) {
        auto [it, inserted] = by_label.try_emplace(record.topology);
        if (inserted)
            labels.push_back(record.topology);
        it->second.push_back(&record);
    }

    const std::vector<const SweepRecord*>& reference = by_label.at(labels.front());
    for (const std::string& label : labels) {
        const auto& rows = by_label.at(label);
        if (rows.size() != reference.size())
            throw std::invalid_argument("topology '" + label + "' covers a different grid");
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i]->participation != reference[i]->participation)
                throw std::invalid_argument("topology '" + label + "' covers a different grid");
    }

    TopologyComparison comparison;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        FractionRanking ranking;
        ranking.participation = reference[i]->participation;
        for (const std::string& label : labels)
            ranking.ranked.push_back({label, by_label.at(label)[i]->mean_error});
        std::sort(ranking.ranked.begin(), ranking.ranked.end(),
                  [](const auto& a, const auto& b) {
                      if (a.second != b.second)
                          return a.second < b.second;
                      return a.first < b.first;
                  });
        comparison.per_fraction.push_back(std::move(ranking));
    }

    for (const std::string& label : labels) {
        const auto& rows = by_label.at(label);
        double auc = 0.0;
        if (rows.size() == 1) {
            auc = rows.front()->mean_error;
        } else {
            for (std::size_t i = 0; i + 1 < rows.size(); ++i)
                auc += (rows[i + 1]->participation - rows[i]->participation) *
                       (rows[i]->mean_error + rows[i + 1]->mean_error) / 2.0;
        }
        comparison.auc_ranking.push_back({label, auc});
    }
    std::sort(comparison.auc_ranking.begin(), comparison.auc_ranking.end(),
              [](const auto& a, const auto& b) {
                  if (a.second != b.second)
                      return a.second < b.second;
                  return a.first < b.first;
              });
    return comparison;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
    out << "topology,participation,mean_error,std_error,mean_stranded,trials\n";
    for (const SweepRecord& record : records)
        out << record.topology << ',' << format_real(record.participation) << ','
            << format_real(record.mean_error) << ',' << format_real(record.std_error) << ','
            << format_real(record.mean_stranded_fraction) << ',' << record.trials << '\n';
}

std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) ||
        line != "topology,participation,mean_error,std_error,mean_stranded,trials")
        throw std::invalid_argument(
            "line 1: expected header 'topology,participation,mean_error,std_error,"
            "mean_stranded,trials'");
    std::vector<SweepRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const std::string context = "line " + std::to_string(line_no);
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 6)
            throw std::invalid_argument(context + ": expected 6 fields, got " +
                                        std::to_string(fields.size()));
        SweepRecord record;
        record.topology = fields[0];
        record.participation = parse_real(fields[1], context);
        record.mean_error = parse_real(fields[2], context);
        record.std_error = parse_real(fields[3], context);
        record.mean_stranded_fraction = parse_real(fields[4], context);
        record.trials = parse_u32(fields[5], context);
        records.push_back(std::move(record));
    }
    return records;
}

} // namespace holovote
