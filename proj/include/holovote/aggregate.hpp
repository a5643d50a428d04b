#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "holovote/network.hpp"
#include "holovote/power.hpp"

namespace holovote {

enum class DecisionMode {
    Literal,      // divide the power-weighted opinion sum by |N|
    Renormalized, // divide by the total absorbed power instead
};

struct DecisionOutcome {
    double value = 0.0;
    DecisionMode mode = DecisionMode::Literal;
};

/// One vote. For Borda the ranking lists every candidate best-first; for
/// plurality it holds a single choice.
struct Ballot {
    MemberId voter = 0;
    std::vector<std::string> ranking;
    double weight = 1.0;
};

/// The collective decision of the active members, opinion-averaged with
/// their absorbed power. Literal mode divides by the full population size
/// and so under-counts whenever power was stranded; renormalized mode
/// divides by the delivered power. The two coincide when stranded == 0.
DecisionOutcome network_decision(const PowerAssignment& assignment,
                                 const std::vector<Member>& members, DecisionMode mode);

/// Decision of an edgeless network: the plain mean of active opinions.
DecisionOutcome k0_decision(const std::vector<Member>& members);

/// The full-participation ideal: mean opinion over every member.
double perfect_decision(const std::vector<Member>& members);

/// Absolute gap between a network decision and the full-participation ideal.
double decision_error(double network_value, double perfect_value);

/// Weighted Borda count: rank r of m earns weight * (m - 1 - r) points.
/// Every ballot must rank all candidates. Tie -> lexicographically
/// smallest candidate id.
std::string borda(const std::vector<Ballot>& ballots, const std::vector<std::string>& candidates);

/// Weighted plurality over single-choice ballots. Tie -> lexicographically
/// smallest candidate id.
std::string plurality(const std::vector<Ballot>& ballots,
                      const std::vector<std::string>& candidates);

/// Scales each ballot's weight by its voter's absorbed power. Every voter
/// must hold power in the assignment.
std::vector<Ballot> power_weighted_ballots(std::vector<Ballot> ballots,
                                           const PowerAssignment& assignment);

// --- CSV interchange ---------------------------------------------------
// Plurality ballots: header "voter,choice". Borda ballots: header
// "voter,rank1,rank2,...". Weights are supplied programmatically.

void write_plurality_ballots_csv(std::ostream& out, const std::vector<Ballot>& ballots);
std::vector<Ballot> read_plurality_ballots_csv(std::istream& in);

void write_borda_ballots_csv(std::ostream& out, const std::vector<Ballot>& ballots);
std::vector<Ballot> read_borda_ballots_csv(std::istream& in);

} // namespace holovote
