#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "holovote/network.hpp"

namespace holovote {

/// Result of power dissemination. `absorbed` maps each active member to the
/// decision power it holds (its own unit plus everything delivered to it);
/// kept sorted by id. `stranded` is power that reached no active member
/// within the depth limit. sum(absorbed) + stranded == |N|.
struct PowerAssignment {
    std::vector<std::pair<MemberId, double>> absorbed;
    double stranded = 0.0;
    std::uint32_t steps_run = 0;

    /// Absorbed power of an active member; 0 for ids not in the assignment.
    double absorbed_of(MemberId id) const;
    bool holds(MemberId id) const;
    double total_absorbed() const;
};

/// Pending power below this total counts as fully delivered.
inline constexpr double kPendingTolerance = 1e-9;
/// Hard cap on synchronous steps for unbounded depth; power still circling
/// inactive cycles after this many steps is reported as stranded.
inline constexpr std::uint32_t kMaxDisseminationSteps = 100;

/// Synchronous power flow from inactive members to active ones.
///
/// Every member starts with one unit. Active members absorb immediately;
/// each step, every inactive member forwards its pending power along its
/// normalized out-edges. Bounded depth runs exactly that many steps;
/// unbounded depth runs until pending power drops below kPendingTolerance
/// or kMaxDisseminationSteps is hit. Pending power that cannot move
/// (sinks, depth cutoff, all-inactive cycles) ends up stranded.
PowerAssignment disseminate(const DelegationNetwork& network, FlowDepth depth);

/// Independent check of disseminate by directed-walk enumeration: the power
/// an active member absorbs is 1 plus the weight-product sum over all walks
/// from inactive members of length <= depth whose interior is inactive.
/// Tractable only for tiny networks: |N| <= 8 and depth <= 5.
PowerAssignment disseminate_oracle(const DelegationNetwork& network, std::uint32_t depth);

/// disseminate() over the fully connected opinion-proximity network without
/// materializing its N*(N-1) edges. Each synchronous step costs O(N) via
/// prefix sums over the opinion-sorted inactive members instead of O(N^2),
/// so sweeps over dense topologies stay fast. Agrees with
/// disseminate(build_network(members, TopologyConfig::full(), 0), depth)
/// up to floating-point rounding.
PowerAssignment disseminate_full(const std::vector<Member>& members, FlowDepth depth);

/// CSV export: "id,power" rows followed by a trailing "stranded,<value>" row.
void write_power_csv(std::ostream& out, const PowerAssignment& assignment);

} // namespace holovote
