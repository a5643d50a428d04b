#include "holovote/power.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "holovote/csv.hpp"
#include "holovote/errors.hpp"

namespace holovote {

namespace {

/// Maps member ids to dense indices; the common 0..n-1 case stays allocation-free.
struct IdIndex {
    explicit IdIndex(const std::vector<Member>& members) {
        contiguous = true;
        for (std::size_t i = 0; i < members.size(); ++i)
            if (members[i].id != i) {
                contiguous = false;
                break;
            }
        if (!contiguous) {
            map.reserve(members.size());
            for (std::size_t i = 0; i < members.size(); ++i)
                map.emplace(members[i].id, static_cast<std::uint32_t>(i));
        }
    }

    std::uint32_t at(MemberId id) const {
        if (contiguous)
            return id;
        return map.at(id);
    }

    bool contiguous;
    std::unordered_map<MemberId, std::uint32_t> map;
};

struct Adjacency {
    std::vector<std::uint32_t> offsets; // n + 1 entries
    std::vector<std::uint32_t> targets;
    std::vector<double> weights;
};

Adjacency build_adjacency(const DelegationNetwork& net, const IdIndex& index) {
    const std::size_t n = net.members.size();
    Adjacency adj;
    adj.offsets.assign(n + 1, 0);
    for (const DelegationEdge& edge : net.edges)
        ++adj.offsets[index.at(edge.from) + 1];
    for (std::size_t i = 0; i < n; ++i)
        adj.offsets[i + 1] += adj.offsets[i];
    adj.targets.resize(net.edges.size());
    adj.weights.resize(net.edges.size());
    std::vector<std::uint32_t> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
    for (const DelegationEdge& edge : net.edges) {
        const std::uint32_t slot = cursor[index.at(edge.from)]++;
        adj.targets[slot] = index.at(edge.to);
        adj.weights[slot] = edge.weight;
    }
    return adj;
}

} // namespace

double PowerAssignment::absorbed_of(MemberId id) const {
    const auto it = std::lower_bound(
        absorbed.begin(), absorbed.end(), id,
        [](const std::pair<MemberId, double>& entry, MemberId key) { return entry.first < key; });
    return (it != absorbed.end() && it->first == id) ? it->second : 0.0;
}

bool PowerAssignment::holds(MemberId id) const {
    const auto it = std::lower_bound(
        absorbed.begin(), absorbed.end(), id,
        [](const std::pair<MemberId, double>& entry, MemberId key) { return entry.first < key; });
    return it != absorbed.end() && it->first == id;
}

double PowerAssignment::total_absorbed() const {
    double sum = 0.0;
    for (const auto& [id, power] : absorbed)
        sum += power;
    return sum;
}

PowerAssignment disseminate(const DelegationNetwork& network, FlowDepth depth) {
    const std::size_t n = network.members.size();
    bool any_active = false;
    for (const Member& member : network.members)
        any_active |= member.active;
    if (!any_active)
        throw NoAbsorberError("dissemination needs at least one active member");

    const IdIndex index(network.members);
    const Adjacency adj = build_adjacency(network, index);

    std::vector<double> pending(n, 0.0);
    std::vector<double> received(n, 0.0);
    std::vector<double> absorbed(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (network.members[i].active)
            absorbed[i] = 1.0;
        else
            pending[i] = 1.0;
    }

    const std::uint32_t max_steps = depth ? *depth : kMaxDisseminationSteps;
    std::uint32_t steps = 0;
    while (steps < max_steps) {
        long double pending_total = 0.0L;
        for (std::size_t i = 0; i < n; ++i)
            pending_total += pending[i];
        if (depth) {
            if (pending_total == 0.0L)
                break; // nothing left to move; further steps are no-ops
        } else if (pending_total < kPendingTolerance) {
            break;
        }

        double moved = 0.0;
        std::fill(received.begin(), received.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double p = pending[i];
            if (p == 0.0)
                continue;
            if (adj.offsets[i] == adj.offsets[i + 1])
                continue; // sink: keeps its pending power
            for (std::uint32_t e = adj.offsets[i]; e < adj.offsets[i + 1]; ++e) {
                const std::uint32_t target = adj.targets[e];
                const double amount = p * adj.weights[e];
                if (network.members[target].active)
                    absorbed[target] += amount;
                else
                    received[target] += amount;
            }
            moved += p;
            pending[i] = 0.0;
        }
        for (std::size_t i = 0; i < n; ++i)
            pending[i] += received[i];
        ++steps;
        if (moved == 0.0)
            break; // fixed point: all pending power sits at sinks
    }

    PowerAssignment result;
    result.steps_run = steps;
    long double stranded = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
        stranded += pending[i];
    result.stranded = static_cast<double>(stranded);
    for (std::size_t i = 0; i < n; ++i)
        if (network.members[i].active)
            result.absorbed.push_back({network.members[i].id, absorbed[i]});
    std::sort(result.absorbed.begin(), result.absorbed.end());
    return result;
}

PowerAssignment disseminate_oracle(const DelegationNetwork& network, std::uint32_t depth) {
    const std::size_t n = network.members.size();
    if (n > 8)
        throw std::invalid_argument("oracle is limited to networks of at most 8 members");
    if (depth == 0 || depth > 5)
        throw std::invalid_argument("oracle depth must lie in [1, 5]");
    bool any_active = false;
    for (const Member& member : network.members)
        any_active |= member.active;
    if (!any_active)
        throw NoAbsorberError("dissemination needs at least one active member");

    const IdIndex index(network.members);
    const Adjacency adj = build_adjacency(network, index);

    std::vector<double> absorbed(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (network.members[i].active)
            absorbed[i] = 1.0;

    // Enumerate every directed walk of length <= depth from an inactive
    // member; a walk contributes its weight product to the first active
    // member it reaches and stops there.
    const auto walk = [&](auto&& self, std::uint32_t node, double product,
                          std::uint32_t remaining) -> void {
        if (remaining == 0)
            return;
        for (std::uint32_t e = adj.offsets[node]; e < adj.offsets[node + 1]; ++e) {
            const std::uint32_t target = adj.targets[e];
            const double p = product * adj.weights[e];
            if (network.members[target].active)
                absorbed[target] += p;
            else
                self(self, target, p, remaining - 1);
        }
    };
    for (std::uint32_t i = 0; i < n; ++i)
        if (!network.members[i].active)
            walk(walk, i, 1.0, depth);

    PowerAssignment result;
    result.steps_run = depth;
    long double total = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        if (network.members[i].active) {
            result.absorbed.push_back({network.members[i].id, absorbed[i]});
            total += absorbed[i];
        }
    }
    std::sort(result.absorbed.begin(), result.absorbed.end());
    result.stranded = static_cast<double>(static_cast<long double>(n) - total);
    return result;
}

PowerAssignment disseminate_full(const std::vector<Member>& members, FlowDepth depth) {
    const std::size_t n = members.size();
    if (n < 2)
        throw std::invalid_argument("full topology requires at least two members");
    bool any_active = false;
    for (const Member& member : members)
        any_active |= member.active;
    if (!any_active)
        throw NoAbsorberError("dissemination needs at least one active member");

    // Row sums S_i = sum_j (1 - |o_i - o_j|) over j != i, via one global sort.
    std::vector<double> opinions(n);
    for (std::size_t i = 0; i < n; ++i)
        opinions[i] = members[i].opinion;
    std::vector<std::uint32_t> by_opinion(n);
    for (std::uint32_t i = 0; i < n; ++i)
        by_opinion[i] = i;
    std::sort(by_opinion.begin(), by_opinion.end(),
              [&](std::uint32_t a, std::uint32_t b) { return opinions[a] < opinions[b]; });

    std::vector<double> row_sum(n);
    {
        long double below_count = 0.0L, below_sum = 0.0L;
        long double total_sum = 0.0L;
        for (std::size_t i = 0; i < n; ++i)
            total_sum += opinions[i];
        for (std::size_t t = 0; t < n; ++t) {
            const double o = opinions[by_opinion[t]];
            // sum_j |o - o_j| with the j <= o part from prefix sums
            const long double above_sum = total_sum - below_sum - o;
            const long double above_count = static_cast<long double>(n - 1 - t);
            const long double dist_sum = (static_cast<long double>(o) * below_count - below_sum) +
                                         (above_sum - static_cast<long double>(o) * above_count);
            row_sum[by_opinion[t]] =
                static_cast<double>(static_cast<long double>(n - 1) - dist_sum);
            below_count += 1.0L;
            below_sum += o;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(row_sum[i] > 0.0)) {
            // Degenerate uniform-fallback rows; take the explicit route.
            return disseminate(build_network(members, TopologyConfig::full(depth)), depth);
        }
    }

    std::vector<std::uint32_t> inactive; // sorted by opinion
    for (std::uint32_t t = 0; t < n; ++t)
        if (!members[by_opinion[t]].active)
            inactive.push_back(by_opinion[t]);
    // Insertion position of each member among the sorted inactive opinions.
    // Members sharing an opinion contribute distance 0, so the side is moot.
    std::vector<std::uint32_t> split(n);
    {
        std::vector<double> inactive_opinions(inactive.size());
        for (std::size_t t = 0; t < inactive.size(); ++t)
            inactive_opinions[t] = opinions[inactive[t]];
        for (std::size_t i = 0; i < n; ++i)
            split[i] = static_cast<std::uint32_t>(
                std::lower_bound(inactive_opinions.begin(), inactive_opinions.end(), opinions[i]) -
                inactive_opinions.begin());
    }

    std::vector<double> pending(n, 0.0);
    std::vector<double> absorbed(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (members[i].active)
            absorbed[i] = 1.0;
        else
            pending[i] = 1.0;
    }

    const std::size_t m = inactive.size();
    std::vector<long double> prefix_q(m + 1, 0.0L);
    std::vector<long double> prefix_qo(m + 1, 0.0L);
    std::vector<double> next_pending(n, 0.0);

    const std::uint32_t max_steps = depth ? *depth : kMaxDisseminationSteps;
    std::uint32_t steps = 0;
    while (steps < max_steps) {
        long double pending_total = 0.0L;
        for (std::uint32_t idx : inactive)
            pending_total += pending[idx];
        if (depth) {
            if (pending_total == 0.0L)
                break;
        } else if (pending_total < kPendingTolerance) {
            break;
        }

        for (std::size_t t = 0; t < m; ++t) {
            const std::uint32_t idx = inactive[t];
            const long double q = static_cast<long double>(pending[idx]) / row_sum[idx];
            prefix_q[t + 1] = prefix_q[t] + q;
            prefix_qo[t + 1] = prefix_qo[t] + q * opinions[idx];
        }
        const long double q_total = prefix_q[m];
        const long double qo_total = prefix_qo[m];

        for (std::size_t j = 0; j < n; ++j) {
            const long double o = opinions[j];
            const long double q_le = prefix_q[split[j]];
            const long double qo_le = prefix_qo[split[j]];
            const long double dist_weighted =
                (o * q_le - qo_le) + ((qo_total - qo_le) - o * (q_total - q_le));
            long double inflow = q_total - dist_weighted;
            if (!members[j].active)
                inflow -= static_cast<long double>(pending[j]) / row_sum[j]; // no self-edge
            if (members[j].active)
                absorbed[j] += static_cast<double>(inflow);
            else
                next_pending[j] = static_cast<double>(inflow < 0.0L ? 0.0L : inflow);
        }
        for (std::uint32_t idx : inactive)
            pending[idx] = next_pending[idx];
        ++steps;
        if (pending_total == 0.0L)
            break; // mirrors the generic moved == 0 fixed point
    }

    PowerAssignment result;
    result.steps_run = steps;
    long double stranded = 0.0L;
    for (std::uint32_t idx : inactive)
        stranded += pending[idx];
    result.stranded = static_cast<double>(stranded);
    for (std::size_t i = 0; i < n; ++i)
        if (members[i].active)
            result.absorbed.push_back({members[i].id, absorbed[i]});
    std::sort(result.absorbed.begin(), result.absorbed.end());
    return result;
}

void write_power_csv(std::ostream& out, const PowerAssignment& assignment) {
    out << "id,power\n";
    for (const auto& [id, power] : assignment.absorbed)
        out << id << ',' << format_real(power) << '\n';
    out << "stranded," << format_real(assignment.stranded) << '\n';
}

} // namespace holovote
