#include "holovote/network.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "holovote/csv.hpp"
#include "holovote/errors.hpp"
#include "holovote/rng.hpp"

namespace holovote {

namespace {

constexpr double kWeightSumTolerance = 1e-12;

struct OpinionRef {
    double opinion;
    MemberId id;
    std::uint32_t index; // position in the id-sorted member array

    bool operator<(const OpinionRef& other) const {
        if (opinion != other.opinion)
            return opinion < other.opinion;
        return id < other.id;
    }
};

std::vector<OpinionRef> sorted_by_opinion(const std::vector<Member>& members) {
    std::vector<OpinionRef> refs;
    refs.reserve(members.size());
    for (std::uint32_t i = 0; i < members.size(); ++i)
        refs.push_back({members[i].opinion, members[i].id, i});
    std::sort(refs.begin(), refs.end());
    return refs;
}

/// Normalizes raw proximity values to weights summing to 1; an all-zero row
/// falls back to uniform shares.
std::vector<double> normalize_weights(const std::vector<double>& raw) {
    long double sum = 0.0L;
    for (double v : raw)
        sum += v;
    std::vector<double> weights(raw.size());
    if (sum <= 0.0L) {
        const double uniform = 1.0 / static_cast<double>(raw.size());
        std::fill(weights.begin(), weights.end(), uniform);
    } else {
        for (std::size_t i = 0; i < raw.size(); ++i)
            weights[i] = static_cast<double>(raw[i] / sum);
    }
    return weights;
}

void append_member_edges(std::vector<DelegationEdge>& edges, MemberId from,
                         std::vector<std::pair<MemberId, double>>& targets) {
    // Raw edge value per the opinion-proximity rule: 1 - |opinion_i - opinion_j|.
    std::sort(targets.begin(), targets.end());
    std::vector<double> raw(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        raw[i] = 1.0 - targets[i].second;
    const std::vector<double> weights = normalize_weights(raw);
    for (std::size_t i = 0; i < targets.size(); ++i)
        edges.push_back({from, targets[i].first, weights[i], {}});
}

/// Nearest active member by |opinion difference|, tie -> smaller id.
/// `actives` is sorted by (opinion, id).
MemberId nearest_active(const std::vector<OpinionRef>& actives, double opinion) {
    const auto right = std::lower_bound(
        actives.begin(), actives.end(), opinion,
        [](const OpinionRef& ref, double value) { return ref.opinion < value; });

    const auto min_id_of_run = [&](double value) {
        const auto start = std::lower_bound(
            actives.begin(), actives.end(), value,
            [](const OpinionRef& ref, double v) { return ref.opinion < v; });
        return start->id;
    };

    const double dist_right = right == actives.end()
                                  ? std::numeric_limits<double>::infinity()
                                  : right->opinion - opinion;
    const double dist_left = right == actives.begin()
                                 ? std::numeric_limits<double>::infinity()
                                 : opinion - std::prev(right)->opinion;
    if (dist_left < dist_right)
        return min_id_of_run(std::prev(right)->opinion);
    if (dist_right < dist_left)
        return min_id_of_run(right->opinion);
    return std::min(min_id_of_run(std::prev(right)->opinion), min_id_of_run(right->opinion));
}

/// The k targets with smallest (|opinion difference|, id), self excluded.
/// Expands outward in the opinion-sorted order, then resolves boundary ties
/// exactly before cutting to k.
std::vector<std::pair<MemberId, double>> nearest_k_targets(const std::vector<OpinionRef>& sorted,
                                                           std::size_t pos, std::uint32_t k) {
    struct Candidate {
        double dist;
        MemberId id;
        bool operator<(const Candidate& other) const {
            if (dist != other.dist)
                return dist < other.dist;
            return id < other.id;
        }
    };

    const double opinion = sorted[pos].opinion;
    std::vector<Candidate> candidates;
    candidates.reserve(k + 4);
    std::ptrdiff_t left = static_cast<std::ptrdiff_t>(pos) - 1;
    std::size_t right = pos + 1;
    while (candidates.size() < k) {
        const double dist_left =
            left >= 0 ? opinion - sorted[left].opinion : std::numeric_limits<double>::infinity();
        const double dist_right = right < sorted.size() ? sorted[right].opinion - opinion
                                                        : std::numeric_limits<double>::infinity();
        if (dist_left <= dist_right) {
            candidates.push_back({dist_left, sorted[left].id});
            --left;
        } else {
            candidates.push_back({dist_right, sorted[right].id});
            ++right;
        }
    }
    // Pull in every member tied with the current boundary distance, then
    // let the (dist, id) order decide.
    const double boundary = candidates.back().dist;
    while (left >= 0 && opinion - sorted[left].opinion == boundary) {
        candidates.push_back({boundary, sorted[left].id});
        --left;
    }
    while (right < sorted.size() && sorted[right].opinion - opinion == boundary) {
        candidates.push_back({boundary, sorted[right].id});
        ++right;
    }
    std::sort(candidates.begin(), candidates.end());

    std::vector<std::pair<MemberId, double>> targets;
    targets.reserve(k);
    for (std::uint32_t i = 0; i < k; ++i)
        targets.push_back({candidates[i].id, candidates[i].dist});
    return targets;
}

void build_model1_edges(DelegationNetwork& net) {
    std::vector<OpinionRef> actives;
    for (std::uint32_t i = 0; i < net.members.size(); ++i)
        if (net.members[i].active)
            actives.push_back({net.members[i].opinion, net.members[i].id, i});
    if (actives.empty())
        throw NoRepresentativeError("model1 requires at least one active member");
    std::sort(actives.begin(), actives.end());

    for (const Member& member : net.members) {
        if (member.active)
            continue;
        net.edges.push_back({member.id, nearest_active(actives, member.opinion), 1.0, {}});
    }
}

void build_model2_nearest_edges(DelegationNetwork& net, std::uint32_t k) {
    const std::vector<OpinionRef> sorted = sorted_by_opinion(net.members);
    std::vector<std::vector<std::pair<MemberId, double>>> per_member(net.members.size());
    for (std::size_t pos = 0; pos < sorted.size(); ++pos)
        per_member[sorted[pos].index] = nearest_k_targets(sorted, pos, k);
    for (std::size_t i = 0; i < net.members.size(); ++i)
        append_member_edges(net.edges, net.members[i].id, per_member[i]);
}

void build_model2_random_edges(DelegationNetwork& net, std::uint32_t k, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    const std::uint32_t n = static_cast<std::uint32_t>(net.members.size());
    // Reusable identity pool over the n-1 non-self positions; swaps are
    // undone after each member so resets stay O(k).
    std::vector<std::uint32_t> pool(n - 1);
    for (std::uint32_t i = 0; i + 1 < n; ++i)
        pool[i] = i;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> swaps;

    for (std::uint32_t i = 0; i < n; ++i) {
        swaps.clear();
        for (std::uint32_t t = 0; t < k; ++t) {
            const std::uint32_t r =
                t + static_cast<std::uint32_t>(uniform_below(gen, n - 1 - t));
            std::swap(pool[t], pool[r]);
            swaps.push_back({t, r});
        }
        std::vector<std::pair<MemberId, double>> targets;
        targets.reserve(k);
        for (std::uint32_t t = 0; t < k; ++t) {
            const std::uint32_t pos = pool[t] < i ? pool[t] : pool[t] + 1;
            targets.push_back({net.members[pos].id,
                               std::fabs(net.members[i].opinion - net.members[pos].opinion)});
        }
        append_member_edges(net.edges, net.members[i].id, targets);
        for (auto it = swaps.rbegin(); it != swaps.rend(); ++it)
            std::swap(pool[it->first], pool[it->second]);
    }
}

void build_full_edges(DelegationNetwork& net) {
    const std::size_t n = net.members.size();
    std::vector<double> raw(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t slot = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i)
                continue;
            raw[slot++] = 1.0 - std::fabs(net.members[i].opinion - net.members[j].opinion);
        }
        const std::vector<double> weights = normalize_weights(raw);
        slot = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i)
                continue;
            net.edges.push_back({net.members[i].id, net.members[j].id, weights[slot++], {}});
        }
    }
}

} // namespace

TopologyConfig TopologyConfig::model1() {
    return {NetworkModel::Model1, 1, FlowDepth{1}, SelectionStrategy::NearestOpinion};
}

TopologyConfig TopologyConfig::model2(std::uint32_t k, FlowDepth depth, SelectionStrategy selection) {
    return {NetworkModel::Model2, k, depth, selection};
}

TopologyConfig TopologyConfig::k0() {
    return {NetworkModel::K0, 0, kUnboundedDepth, SelectionStrategy::NearestOpinion};
}

TopologyConfig TopologyConfig::full(FlowDepth depth) {
    return {NetworkModel::Full, 0, depth, SelectionStrategy::NearestOpinion};
}

std::string TopologyConfig::label() const {
    switch (model) {
    case NetworkModel::K0:
        return "k0";
    case NetworkModel::Model1:
        return "m1";
    case NetworkModel::Full:
        return "full";
    case NetworkModel::Model2:
        break;
    }
    std::string out = "k" + std::to_string(k) + "d";
    out += depth ? std::to_string(*depth) : std::string("inf");
    if (selection == SelectionStrategy::Random)
        out += "-rand";
    return out;
}

std::vector<Member> generate_population(std::uint32_t n, std::uint64_t seed) {
    if (n == 0)
        throw std::invalid_argument("population size must be positive");
    std::mt19937_64 gen(seed);
    std::vector<Member> members;
    members.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i)
        members.push_back({i, uniform01(gen), false});
    return members;
}

std::vector<Member> set_activity(std::vector<Member> members, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw std::invalid_argument("activity fraction must lie in [0, 1]");
    const std::size_t n = members.size();
    // Round half up so participant counts are exact and testable.
    const std::size_t count = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(n) + 0.5));

    for (Member& member : members)
        member.active = false;
    std::vector<std::uint32_t> order(n);
    for (std::uint32_t i = 0; i < n; ++i)
        order[i] = i;
    std::mt19937_64 gen(seed);
    for (std::size_t t = 0; t < count; ++t) {
        const std::size_t r = t + static_cast<std::size_t>(uniform_below(gen, n - t));
        std::swap(order[t], order[r]);
        members[order[t]].active = true;
    }
    return members;
}

DelegationNetwork build_network(const std::vector<Member>& members, const TopologyConfig& config,
                                std::uint64_t seed) {
    DelegationNetwork net;
    net.members = members;
    net.topology = config;
    std::sort(net.members.begin(), net.members.end(),
              [](const Member& a, const Member& b) { return a.id < b.id; });
    for (std::size_t i = 0; i + 1 < net.members.size(); ++i)
        if (net.members[i].id == net.members[i + 1].id)
            throw std::invalid_argument("member ids must be unique");

    const std::uint32_t n = static_cast<std::uint32_t>(net.members.size());
    switch (config.model) {
    case NetworkModel::K0:
        break;
    case NetworkModel::Model1:
        if (config.k != 1 || config.depth != FlowDepth{1})
            throw std::invalid_argument("model1 fixes k = 1 and depth = 1");
        build_model1_edges(net);
        break;
    case NetworkModel::Model2: {
        if (config.k == 0)
            throw std::invalid_argument("model2 requires k >= 1");
        if (n <= config.k)
            throw std::invalid_argument("model2 requires more members than representatives");
        if (config.selection == SelectionStrategy::Random)
            build_model2_random_edges(net, config.k, seed);
        else
            build_model2_nearest_edges(net, config.k);
        break;
    }
    case NetworkModel::Full: {
        if (n < 2)
            throw std::invalid_argument("full topology requires at least two members");
        build_full_edges(net);
        break;
    }
    }
    std::sort(net.edges.begin(), net.edges.end(),
              [](const DelegationEdge& a, const DelegationEdge& b) {
                  if (a.from != b.from)
                      return a.from < b.from;
                  return a.to < b.to;
              });
    return net;
}

DelegationNetwork filter_by_domain(const DelegationNetwork& network, const std::string& label) {
    DelegationNetwork out;
    out.members = network.members;
    out.topology = network.topology;
    for (const DelegationEdge& edge : network.edges)
        if (!edge.domain.empty() && edge.domain == label)
            out.edges.push_back(edge);

    // Re-normalize each member's surviving out-weights; edges stay grouped
    // by `from` because the input is sorted.
    std::size_t begin = 0;
    while (begin < out.edges.size()) {
        std::size_t end = begin;
        while (end < out.edges.size() && out.edges[end].from == out.edges[begin].from)
            ++end;
        std::vector<double> raw(end - begin);
        for (std::size_t i = begin; i < end; ++i)
            raw[i - begin] = out.edges[i].weight;
        const std::vector<double> weights = normalize_weights(raw);
        for (std::size_t i = begin; i < end; ++i)
            out.edges[i].weight = weights[i - begin];
        begin = end;
    }
    return out;
}

void validate_network(const DelegationNetwork& network) {
    std::unordered_set<MemberId> ids;
    for (const Member& member : network.members) {
        if (!ids.insert(member.id).second)
            throw std::invalid_argument("duplicate member id " + std::to_string(member.id));
        if (!(member.opinion >= 0.0 && member.opinion <= 1.0))
            throw std::invalid_argument("opinion out of [0, 1] for member " +
                                        std::to_string(member.id));
    }

    std::unordered_set<std::uint64_t> seen_pairs;
    for (const DelegationEdge& edge : network.edges) {
        if (edge.from == edge.to)
            throw std::invalid_argument("self-delegation on member " + std::to_string(edge.from));
        if (!ids.count(edge.from) || !ids.count(edge.to))
            throw std::invalid_argument("edge endpoint refers to unknown member id");
        if (!(edge.weight >= 0.0 && edge.weight <= 1.0))
            throw std::invalid_argument("edge weight out of [0, 1] on member " +
                                        std::to_string(edge.from));
        const std::uint64_t key =
            (static_cast<std::uint64_t>(edge.from) << 32) | static_cast<std::uint64_t>(edge.to);
        if (!seen_pairs.insert(key).second)
            throw std::invalid_argument("duplicate edge " + std::to_string(edge.from) + "->" +
                                        std::to_string(edge.to));
    }

    std::size_t begin = 0;
    std::vector<DelegationEdge> sorted = network.edges;
    std::sort(sorted.begin(), sorted.end(), [](const DelegationEdge& a, const DelegationEdge& b) {
        return a.from < b.from;
    });
    while (begin < sorted.size()) {
        std::size_t end = begin;
        long double sum = 0.0L;
        while (end < sorted.size() && sorted[end].from == sorted[begin].from)
            sum += sorted[end++].weight;
        if (std::fabs(static_cast<double>(sum - 1.0L)) > kWeightSumTolerance)
            throw std::invalid_argument("out-weights of member " +
                                        std::to_string(sorted[begin].from) +
                                        " do not sum to 1");
        begin = end;
    }
}

void write_members_csv(std::ostream& out, const std::vector<Member>& members) {
    out << "id,opinion,active\n";
    for (const Member& member : members)
        out << member.id << ',' << format_real(member.opinion) << ',' << (member.active ? 1 : 0)
            << '\n';
}

std::vector<Member> read_members_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "id,opinion,active")
        throw std::invalid_argument("line 1: expected header 'id,opinion,active'");
    std::vector<Member> members;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const std::string context = "line " + std::to_string(line_no);
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 3)
            throw std::invalid_argument(context + ": expected 3 fields, got " +
                                        std::to_string(fields.size()));
        Member member;
        member.id = parse_u32(fields[0], context);
        member.opinion = parse_real(fields[1], context);
        if (fields[2] != "0" && fields[2] != "1")
            throw std::invalid_argument(context + ": active flag must be 0 or 1");
        member.active = fields[2] == "1";
        members.push_back(member);
    }
    return members;
}

void write_edges_csv(std::ostream& out, const std::vector<DelegationEdge>& edges) {
    out << "from,to,weight,domain\n";
    for (const DelegationEdge& edge : edges)
        out << edge.from << ',' << edge.to << ',' << format_real(edge.weight) << ','
            << edge.domain << '\n';
}

std::vector<DelegationEdge> read_edges_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "from,to,weight,domain")
        throw std::invalid_argument("line 1: expected header 'from,to,weight,domain'");
    std::vector<DelegationEdge> edges;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const std::string context = "line " + std::to_string(line_no);
        const std::vector<std::string> fields = split_csv_line(line, 4);
        if (fields.size() != 4)
            throw std::invalid_argument(context + ": expected 4 fields, got " +
                                        std::to_string(fields.size()));
        DelegationEdge edge;
        edge.from = parse_u32(fields[0], context);
        edge.to = parse_u32(fields[1], context);
        edge.weight = parse_real(fields[2], context);
        edge.domain = fields[3];
        edges.push_back(edge);
    }
    return edges;
}

DelegationNetwork network_from_csv(std::istream& members_in, std::istream& edges_in) {
    DelegationNetwork net;
    net.members = read_members_csv(members_in);
    net.edges = read_edges_csv(edges_in);
    std::sort(net.members.begin(), net.members.end(),
              [](const Member& a, const Member& b) { return a.id < b.id; });
    std::sort(net.edges.begin(), net.edges.end(),
              [](const DelegationEdge& a, const DelegationEdge& b) {
                  if (a.from != b.from)
                      return a.from < b.from;
                  return a.to < b.to;
              });

    // Best-effort topology reconstruction; the CSV carries no config row.
    if (net.edges.empty()) {
        net.topology = TopologyConfig::k0();
    } else {
        std::uint32_t max_degree = 0;
        std::uint32_t degree = 0;
        bool model1_shape = true;
        std::unordered_set<MemberId> active_ids, inactive_ids;
        for (const Member& m : net.members)
            (m.active ? active_ids : inactive_ids).insert(m.id);
        for (std::size_t i = 0; i < net.edges.size(); ++i) {
            degree = (i > 0 && net.edges[i].from == net.edges[i - 1].from) ? degree + 1 : 1;
            max_degree = std::max(max_degree, degree);
            if (!inactive_ids.count(net.edges[i].from) || !active_ids.count(net.edges[i].to))
                model1_shape = false;
        }
        if (model1_shape && max_degree == 1)
            net.topology = TopologyConfig::model1();
        else if (max_degree + 1 == net.members.size())
            net.topology = TopologyConfig::full();
        else
            net.topology = TopologyConfig::model2(max_degree, kUnboundedDepth);
    }
    validate_network(net);
    return net;
}

} // namespace holovote
