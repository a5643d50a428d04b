#include "holovote/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "holovote/csv.hpp"
#include "holovote/errors.hpp"

namespace holovote {

namespace {

const char* kind_name(ModelKind kind) {
    return kind == ModelKind::ProblemModel ? "problem-model" : "solution-model";
}

const char* phase_name(PoolPhase phase) {
    switch (phase) {
    case PoolPhase::Modeling:
        return "modeling";
    case PoolPhase::Deciding:
        return "deciding";
    case PoolPhase::Closed:
        return "closed";
    }
    return "?";
}

void record_size(ModelPool& pool, std::uint32_t size) {
    const std::uint32_t event =
        pool.size_history.empty() ? 0 : pool.size_history.back().first + 1;
    pool.size_history.push_back({event, size});
}

std::vector<Ballot> to_ballots(const std::vector<PoolBallot>& ballots) {
    std::vector<Ballot> out;
    out.reserve(ballots.size());
    for (const PoolBallot& ballot : ballots)
        out.push_back({ballot.voter, ballot.ranking, ballot.weight});
    return out;
}

std::string decide_by_mean(const ModelPool& pool, const std::vector<PoolBallot>& ballots) {
    for (const ModelEntry& entry : pool.entries)
        if (!entry.numeric_value)
            throw std::invalid_argument("entry '" + entry.id +
                                        "' lacks the numeric value a mean decision needs");
    long double weighted_sum = 0.0L;
    long double weight_total = 0.0L;
    for (const PoolBallot& ballot : ballots) {
        if (!ballot.value)
            throw InvalidBallotError("ballot of voter " + std::to_string(ballot.voter) +
                                     " carries no numeric choice");
        if (!(ballot.weight > 0.0))
            throw InvalidBallotError("ballot of voter " + std::to_string(ballot.voter) +
                                     " has non-positive weight");
        weighted_sum += static_cast<long double>(*ballot.value) * ballot.weight;
        weight_total += ballot.weight;
    }
    const double mean = static_cast<double>(weighted_sum / weight_total);

    const ModelEntry* best = nullptr;
    double best_gap = 0.0;
    for (const ModelEntry& entry : pool.entries) {
        const double gap = std::fabs(*entry.numeric_value - mean);
        if (best == nullptr || gap < best_gap || (gap == best_gap && entry.id < best->id)) {
            best = &entry;
            best_gap = gap;
        }
    }
    return best->id;
}

} // namespace

ModelPool open_pool(ModelKind kind) {
    ModelPool pool;
    pool.kind = kind;
    pool.size_history.push_back({0, 0});
    return pool;
}

ModelPool submit(ModelPool pool, ModelEntry entry) {
    if (pool.phase != PoolPhase::Modeling)
        throw PhaseViolationError("entries may be added only in the modeling phase");
    if (entry.kind != pool.kind)
        throw std::invalid_argument("entry kind does not match the pool");
    for (const ModelEntry& existing : pool.entries)
        if (existing.id == entry.id)
            throw ConflictError("entry id '" + entry.id + "' already exists in the pool");
    pool.entries.push_back(std::move(entry));
    record_size(pool, static_cast<std::uint32_t>(pool.entries.size()));
    return pool;
}

ModelPool begin_decision(ModelPool pool) {
    if (pool.phase != PoolPhase::Modeling)
        throw PhaseViolationError("decision phase can only follow modeling");
    if (pool.entries.empty())
        throw NoCandidatesError("cannot decide over an empty pool");
    pool.phase = PoolPhase::Deciding;
    return pool;
}

std::pair<ModelPool, std::string> decide(ModelPool pool, const std::vector<PoolBallot>& ballots,
                                         DecisionMethod method,
                                         const PowerAssignment* assignment) {
    if (pool.phase != PoolPhase::Deciding)
        throw PhaseViolationError("pool is not in the deciding phase");
    if (ballots.empty())
        throw NoDecisionError("no ballots were cast");

    std::vector<PoolBallot> weighted = ballots;
    if (assignment != nullptr) {
        for (PoolBallot& ballot : weighted) {
            if (!assignment->holds(ballot.voter))
                throw InvalidBallotError("voter " + std::to_string(ballot.voter) +
                                         " holds no power in the assignment");
            ballot.weight *= assignment->absorbed_of(ballot.voter);
        }
    }

    std::string winner;
    if (method == DecisionMethod::Mean) {
        winner = decide_by_mean(pool, weighted);
    } else {
        std::vector<std::string> candidates;
        candidates.reserve(pool.entries.size());
        for (const ModelEntry& entry : pool.entries)
            candidates.push_back(entry.id);
        winner = method == DecisionMethod::Borda ? borda(to_ballots(weighted), candidates)
                                                 : plurality(to_ballots(weighted), candidates);
    }

    pool.phase = PoolPhase::Closed;
    pool.winner = winner;
    record_size(pool, 1); // the pool is pruned to the single chosen model
    return {std::move(pool), winner};
}

std::string run_problem_solving_loop(const std::vector<ModelEntry>& problem_entries,
                                     const std::vector<PoolBallot>& problem_ballots,
                                     const std::map<std::string, SolutionStage>& solution_stages,
                                     DecisionMethod method, const PowerAssignment* assignment,
                                     LoopTrace* trace) {
    ModelPool problems = open_pool(ModelKind::ProblemModel);
    for (const ModelEntry& entry : problem_entries)
        problems = submit(std::move(problems), entry);
    problems = begin_decision(std::move(problems));
    auto [closed_problems, problem_winner] =
        decide(std::move(problems), problem_ballots, method, assignment);

    const auto stage = solution_stages.find(problem_winner);
    if (stage == solution_stages.end())
        throw std::invalid_argument("no solution stage for winning problem-model '" +
                                    problem_winner + "'");

    ModelPool solutions = open_pool(ModelKind::SolutionModel);
    for (const ModelEntry& entry : stage->second.entries)
        solutions = submit(std::move(solutions), entry);
    solutions = begin_decision(std::move(solutions));
    auto [closed_solutions, solution_winner] =
        decide(std::move(solutions), stage->second.ballots, method, assignment);

    if (trace != nullptr) {
        trace->problem_pool = std::move(closed_problems);
        trace->solution_pool = std::move(closed_solutions);
        trace->problem_winner = problem_winner;
        trace->solution_winner = solution_winner;
    }
    return solution_winner;
}

void write_pool_snapshot(std::ostream& out, const ModelPool& pool) {
    out << "kind=" << kind_name(pool.kind) << " phase=" << phase_name(pool.phase)
        << " winner=" << (pool.winner ? *pool.winner : "-") << '\n';
    for (const ModelEntry& entry : pool.entries) {
        out << entry.id << ',' << entry.author << ',';
        if (entry.numeric_value)
            out << format_real(*entry.numeric_value);
        out << ',' << entry.content << '\n';
    }
}

} // namespace holovote
