#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace holovote {

using MemberId = std::uint32_t;

/// One human node: identity, scalar opinion, participation flag.
struct Member {
    MemberId id = 0;
    double opinion = 0.0; // in [0, 1]
    bool active = false;

    bool operator==(const Member&) const = default;
};

/// Weighted delegation from one member to a representative.
/// `domain` is an optional problem-domain label; empty means unlabeled.
struct DelegationEdge {
    MemberId from = 0;
    MemberId to = 0;
    double weight = 0.0; // in [0, 1]; per-member out-weights sum to 1
    std::string domain;

    bool operator==(const DelegationEdge&) const = default;
};

enum class NetworkModel {
    Model1, // single nearest active representative, depth 1
    Model2, // K representatives regardless of activity, multi-hop flow
    K0,     // no edges; representation equals participation
    Full,   // Model2 with K = N - 1
};

enum class SelectionStrategy {
    NearestOpinion, // K smallest |opinion difference|, tie -> smaller id
    Random,         // uniform without replacement
};

/// Depth of power flow; nullopt means unbounded ("variable depth").
using FlowDepth = std::optional<std::uint32_t>;
inline constexpr std::nullopt_t kUnboundedDepth = std::nullopt;

/// Parameters a delegation network is built from.
struct TopologyConfig {
    NetworkModel model = NetworkModel::K0;
    std::uint32_t k = 0;   // representatives per member; ignored for K0, N-1 for Full
    FlowDepth depth;       // flow depth used during dissemination
    SelectionStrategy selection = SelectionStrategy::NearestOpinion;

    static TopologyConfig model1();
    static TopologyConfig model2(std::uint32_t k, FlowDepth depth,
                                 SelectionStrategy selection = SelectionStrategy::NearestOpinion);
    static TopologyConfig k0();
    static TopologyConfig full(FlowDepth depth = kUnboundedDepth);

    /// Canonical label: "k0", "k1d1", "k3dinf", "full", "m1" (the
    /// nearest-active-representative construction); random selection
    /// variants get a "-rand" suffix so labels stay injective.
    std::string label() const;

    bool operator==(const TopologyConfig&) const = default;
};

/// Members plus normalized delegation edges. Members are held sorted by id
/// and edges sorted by (from, to), so equal networks compare equal.
struct DelegationNetwork {
    std::vector<Member> members;
    std::vector<DelegationEdge> edges;
    TopologyConfig topology;

    bool operator==(const DelegationNetwork&) const = default;
};

/// n members with ids 0..n-1 and i.i.d. uniform opinions on [0, 1),
/// all initially inactive. Deterministic in (n, seed).
std::vector<Member> generate_population(std::uint32_t n, std::uint64_t seed);

/// Returns a copy with exactly round-half-up(fraction * n) members marked
/// active, chosen uniformly without replacement. Deterministic in seed.
std::vector<Member> set_activity(std::vector<Member> members, double fraction, std::uint64_t seed);

/// Builds the delegation network for `config` over `members`.
/// `seed` matters only for SelectionStrategy::Random.
DelegationNetwork build_network(const std::vector<Member>& members, const TopologyConfig& config,
                                std::uint64_t seed = 0);

/// Keeps only edges labeled exactly `label` (unlabeled edges are dropped)
/// and re-normalizes each member's surviving out-weights to sum 1.
DelegationNetwork filter_by_domain(const DelegationNetwork& network, const std::string& label);

/// Checks the structural invariants (unique ids, opinion/weight ranges,
/// no self or duplicate edges, endpoints exist, out-weight sums = 1 +- 1e-12).
/// Throws std::invalid_argument naming the first violation.
void validate_network(const DelegationNetwork& network);

// --- CSV interchange ---------------------------------------------------
// Members: header "id,opinion,active", active written as 0/1.
// Edges:   header "from,to,weight,domain", domain may be empty.
// Reals carry 15 significant digits, which a round trip preserves.

void write_members_csv(std::ostream& out, const std::vector<Member>& members);
std::vector<Member> read_members_csv(std::istream& in);

void write_edges_csv(std::ostream& out, const std::vector<DelegationEdge>& edges);
std::vector<DelegationEdge> read_edges_csv(std::istream& in);

/// Reassembles a network from CSV parts and validates it. The topology
/// config is reconstructed on a best-effort basis (model and k from the
/// edge structure); it is not part of the round-trip contract.
DelegationNetwork network_from_csv(std::istream& members_in, std::istream& edges_in);

} // namespace holovote
