#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "holovote/aggregate.hpp"
#include "holovote/power.hpp"

namespace holovote {

enum class ModelKind {
    ProblemModel,
    SolutionModel,
};

enum class PoolPhase {
    Modeling, // entries may be added
    Deciding, // entries frozen, awaiting the vote
    Closed,   // winner selected
};

/// A shared-medium model contributed by one member. `numeric_value` is set
/// when the pool will be decided by numeric averaging.
struct ModelEntry {
    std::string id;
    MemberId author = 0;
    ModelKind kind = ModelKind::ProblemModel;
    std::string content;
    std::optional<double> numeric_value;
};

/// A grow-then-prune pool of models. Phases only ever advance
/// (modeling -> deciding -> closed); the winner exists exactly when closed.
/// `size_history` records (event index, pool size) after every event, so a
/// completed pool shows the characteristic growth followed by the prune to 1.
struct ModelPool {
    ModelKind kind = ModelKind::ProblemModel;
    PoolPhase phase = PoolPhase::Modeling;
    std::vector<ModelEntry> entries;
    std::optional<std::string> winner;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> size_history;
};

enum class DecisionMethod {
    Mean,      // winner = entry nearest the (weighted) mean ballot value
    Borda,     // weighted Borda count over full rankings
    Plurality, // weighted plurality over single choices
};

/// A vote inside a pool decision. Borda/plurality use `ranking` (entry ids);
/// mean uses `value`.
struct PoolBallot {
    MemberId voter = 0;
    std::vector<std::string> ranking;
    std::optional<double> value;
    double weight = 1.0;
};

ModelPool open_pool(ModelKind kind);

/// Adds an entry during modeling. Throws PhaseViolationError outside the
/// modeling phase, ConflictError on a duplicate id, std::invalid_argument
/// when the entry kind does not match the pool.
ModelPool submit(ModelPool pool, ModelEntry entry);

/// Freezes the pool for voting. Throws NoCandidatesError when empty.
ModelPool begin_decision(ModelPool pool);

/// Selects the winner with the given method, optionally power-weighting
/// ballots by `assignment`, and closes the pool.
std::pair<ModelPool, std::string> decide(ModelPool pool, const std::vector<PoolBallot>& ballots,
                                         DecisionMethod method,
                                         const PowerAssignment* assignment = nullptr);

/// Entries and ballots for the solution stage that follows one winning
/// problem-model.
struct SolutionStage {
    std::vector<ModelEntry> entries;
    std::vector<PoolBallot> ballots;
};

/// Final pool states of a full problem-solving run, for inspection.
struct LoopTrace {
    ModelPool problem_pool;
    ModelPool solution_pool;
    std::string problem_winner;
    std::string solution_winner;
};

/// The full problem-solving loop: a problem-generation pool is grown and
/// decided, then the winning problem-model's solution stage runs the same
/// lifecycle. Returns the chosen solution id.
std::string run_problem_solving_loop(const std::vector<ModelEntry>& problem_entries,
                                     const std::vector<PoolBallot>& problem_ballots,
                                     const std::map<std::string, SolutionStage>& solution_stages,
                                     DecisionMethod method,
                                     const PowerAssignment* assignment = nullptr,
                                     LoopTrace* trace = nullptr);

/// Line-oriented snapshot: "kind=<kind> phase=<phase> winner=<id or ->",
/// then one "id,author,numeric_value,content" line per entry.
void write_pool_snapshot(std::ostream& out, const ModelPool& pool);

} // namespace holovote
