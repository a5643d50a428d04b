#include "holovote/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "holovote/csv.hpp"
#include "holovote/errors.hpp"

namespace holovote {

namespace {

double opinion_of(const std::vector<Member>& members, MemberId id) {
    // Populations generated here have ids 0..n-1 in order; fall back to a
    // scan for hand-built collections.
    if (id < members.size() && members[id].id == id)
        return members[id].opinion;
    for (const Member& member : members)
        if (member.id == id)
            return member.opinion;
    throw std::invalid_argument("unknown member id " + std::to_string(id));
}

/// Ordered per-candidate tally; candidate id order makes the result
/// independent of ballot order.
std::map<std::string, double> zero_tally(const std::vector<std::string>& candidates) {
    if (candidates.empty())
        throw std::invalid_argument("candidate set is empty");
    std::map<std::string, double> tally;
    for (const std::string& candidate : candidates)
        if (!tally.emplace(candidate, 0.0).second)
            throw std::invalid_argument("duplicate candidate id '" + candidate + "'");
    return tally;
}

std::string winner_of(const std::map<std::string, double>& tally) {
    auto best = tally.begin();
    for (auto it = std::next(tally.begin()); it != tally.end(); ++it)
        if (it->second > best->second)
            best = it;
    return best->first; // map order already prefers the smaller id on ties
}

void check_weight(const Ballot& ballot) {
    if (!(ballot.weight > 0.0))
        throw InvalidBallotError("ballot of voter " + std::to_string(ballot.voter) +
                                 " has non-positive weight");
}

} // namespace

DecisionOutcome network_decision(const PowerAssignment& assignment,
                                 const std::vector<Member>& members, DecisionMode mode) {
    if (assignment.absorbed.empty())
        throw NoDecisionError("no active members hold power");
    long double weighted = 0.0L;
    long double total_power = 0.0L;
    for (const auto& [id, power] : assignment.absorbed) {
        weighted += static_cast<long double>(power) * opinion_of(members, id);
        total_power += power;
    }
    DecisionOutcome outcome;
    outcome.mode = mode;
    if (mode == DecisionMode::Literal)
        outcome.value = static_cast<double>(weighted / static_cast<long double>(members.size()));
    else
        outcome.value = static_cast<double>(weighted / total_power);
    return outcome;
}

DecisionOutcome k0_decision(const std::vector<Member>& members) {
    long double sum = 0.0L;
    std::size_t active = 0;
    for (const Member& member : members) {
        if (member.active) {
            sum += member.opinion;
            ++active;
        }
    }
    if (active == 0)
        throw NoDecisionError("no active members to average");
    return {static_cast<double>(sum / static_cast<long double>(active)),
            DecisionMode::Renormalized};
}

double perfect_decision(const std::vector<Member>& members) {
    if (members.empty())
        throw std::invalid_argument("population is empty");
    long double sum = 0.0L;
    for (const Member& member : members)
        sum += member.opinion;
    return static_cast<double>(sum / static_cast<long double>(members.size()));
}

double decision_error(double network_value, double perfect_value) {
    return std::abs(network_value - perfect_value);
}

std::string borda(const std::vector<Ballot>& ballots, const std::vector<std::string>& candidates) {
    std::map<std::string, double> tally = zero_tally(candidates);
    const std::size_t m = candidates.size();
    for (const Ballot& ballot : ballots) {
        check_weight(ballot);
        if (ballot.ranking.size() != m)
            throw InvalidBallotError("ballot of voter " + std::to_string(ballot.voter) +
                                     " must rank all " + std::to_string(m) + " candidates");
        std::set<std::string> seen;
        for (std::size_t rank = 0; rank < m; ++rank) {
            const std::string& candidate = ballot.ranking[rank];
            const auto it = tally.find(candidate);
            if (it == tally.end())
                throw InvalidBallotError("ballot of voter " + std::to_string(ballot.voter) +
                                         " ranks unknown candidate '" + candidate + "'");
            if (!seen.insert(candidate).second)
                throw InvalidBallotError("ballot of voter " + std::to_string(ballot.voter) +
                                         " ranks '" + candidate + "' twice");
            it->second += ballot.weight * static_cast<double>(m - 1 - rank);
        }
    }
    return winner_of(tally);
}

std::string plurality(const std::vector<Ballot>& ballots,
                      const std::vector<std::string>& candidates) {
    std::map<std::string, double> tally = zero_tally(candidates);
    for (const Ballot& ballot : ballots) {
        check_weight(ballot);
        if (ballot.ranking.size() != 1)
            throw InvalidBallotError("plurality ballot of voter " + std::to_string(ballot.voter) +
                                     " must name exactly one candidate");
        const auto it = tally.find(ballot.ranking.front());
        if (it == tally.end())
            throw InvalidBallotError("ballot of voter " + std::to_string(ballot.voter) +
                                     " names unknown candidate '" + ballot.ranking.front() + "'");
        it->second += ballot.weight;
    }
    return winner_of(tally);
}

std::vector<Ballot> power_weighted_ballots(std::vector<Ballot> ballots,
                                           const PowerAssignment& assignment) {
    for (Ballot& ballot : ballots) {
        if (!assignment.holds(ballot.voter))
            throw InvalidBallotError("voter " + std::to_string(ballot.voter) +
                                     " holds no power in the assignment");
        ballot.weight *= assignment.absorbed_of(ballot.voter);
    }
    return ballots;
}

void write_plurality_ballots_csv(std::ostream& out, const std::vector<Ballot>& ballots) {
    out << "voter,choice\n";
    for (const Ballot& ballot : ballots)
        out << ballot.voter << ',' << (ballot.ranking.empty() ? "" : ballot.ranking.front())
            << '\n';
}

std::vector<Ballot> read_plurality_ballots_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "voter,choice")
        throw std::invalid_argument("line 1: expected header 'voter,choice'");
    std::vector<Ballot> ballots;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const std::string context = "line " + std::to_string(line_no);
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 2)
            throw std::invalid_argument(context + ": expected 2 fields");
        ballots.push_back({parse_u32(fields[0], context), {fields[1]}, 1.0});
    }
    return ballots;
}

void write_borda_ballots_csv(std::ostream& out, const std::vector<Ballot>& ballots) {
    const std::size_t m = ballots.empty() ? 0 : ballots.front().ranking.size();
    out << "voter";
    for (std::size_t i = 1; i <= m; ++i)
        out << ",rank" << i;
    out << '\n';
    for (const Ballot& ballot : ballots) {
        out << ballot.voter;
        for (const std::string& candidate : ballot.ranking)
            out << ',' << candidate;
        out << '\n';
    }
}

std::vector<Ballot> read_borda_ballots_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("voter,rank1", 0) != 0)
        throw std::invalid_argument("line 1: expected header 'voter,rank1,rank2,...'");
    std::vector<Ballot> ballots;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const std::string context = "line " + std::to_string(line_no);
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() < 2)
            throw std::invalid_argument(context + ": expected a voter and at least one rank");
        Ballot ballot;
        ballot.voter = parse_u32(fields[0], context);
        ballot.ranking.assign(fields.begin() + 1, fields.end());
        ballots.push_back(std::move(ballot));
    }
    return ballots;
}

} // namespace holovote
