// holovote: delegative decision-making simulator.
//
// Subcommands: generate (populations and delegation networks), sweep (the
// participation experiment), compare (topology rankings from sweep CSVs),
// workspace-demo (the problem-solving lifecycle).

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "holovote/aggregate.hpp"
#include "holovote/csv.hpp"
#include "holovote/network.hpp"
#include "holovote/plot.hpp"
#include "holovote/power.hpp"
#include "holovote/rng.hpp"
#include "holovote/simharness.hpp"
#include "holovote/workspace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t master_seed_default() {
    // --seed wins; HOLOVOTE_SEED is the fallback; 42 otherwise
    if (const char* env = std::getenv("HOLOVOTE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError("HOLOVOTE_SEED is not an integer: '" + std::string(env) + "'");
        }
    }
    return 42;
}

holovote::FlowDepth parse_depth(const std::string& text) {
    if (text == "inf" || text == "unbounded")
        return holovote::kUnboundedDepth;
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
        throw UsageError("depth must be a positive integer or 'inf', got '" + text + "'");
    const unsigned long value = std::stoul(text);
    if (value == 0 || value > 0xfffffffful)
        throw UsageError("depth must be a positive integer or 'inf'");
    return holovote::FlowDepth{static_cast<std::uint32_t>(value)};
}

// Topology tokens: k0, m1 (nearest-active construction), full, or k<K>d<D|inf>.
holovote::TopologyConfig parse_topology_token(const std::string& token) {
    using holovote::TopologyConfig;
    if (token == "k0")
        return TopologyConfig::k0();
    if (token == "m1")
        return TopologyConfig::model1();
    if (token == "full")
        return TopologyConfig::full();
    if (token.size() >= 4 && token.front() == 'k') {
        const std::size_t d = token.find('d', 1);
        if (d != std::string::npos && d > 1) {
            const std::string k_text = token.substr(1, d - 1);
            if (k_text.find_first_not_of("0123456789") == std::string::npos) {
                const unsigned long k = std::stoul(k_text);
                if (k >= 1 && k <= 0xfffffffful)
                    return TopologyConfig::model2(static_cast<std::uint32_t>(k),
                                                  parse_depth(token.substr(d + 1)));
            }
        }
    }
    throw UsageError("unknown topology '" + token +
                     "' (expected k0, m1, full, or k<K>d<D|inf>)");
}

std::vector<holovote::TopologyConfig> parse_topology_list(const std::string& list) {
    std::vector<holovote::TopologyConfig> topologies;
    std::stringstream in(list);
    std::string token;
    while (std::getline(in, token, ','))
        if (!token.empty())
            topologies.push_back(parse_topology_token(token));
    if (topologies.empty())
        throw UsageError("no topologies given");
    return topologies;
}

// "start:stop:step" -> strictly increasing grid in (0, 1].
std::vector<double> parse_participation_range(const std::string& text) {
    double start = 0.0, stop = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::stringstream in(text);
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' ||
        !(in >> std::ws).eof())
        throw UsageError("participation must look like start:stop:step, got '" + text + "'");
    if (!(step > 0.0))
        throw UsageError("participation step must be positive");
    if (stop < start)
        throw UsageError("participation range must be ascending");
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        // snap accumulated floating-point drift off the grid values
        const double f = std::round((start + i * step) * 1e9) / 1e9;
        if (f > stop + 1e-9)
            break;
        grid.push_back(f);
    }
    for (double f : grid)
        if (!(f > 0.0 && f <= 1.0))
            throw UsageError("participation fractions must lie in (0, 1]");
    if (grid.empty())
        throw UsageError("participation range is empty");
    return grid;
}

std::string replace_extension(const std::string& path, const std::string& ext) {
    const std::size_t slash = path.find_last_of('/');
    const std::size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + ext;
    return path.substr(0, dot) + ext;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << contents;
    out.flush();
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

// --- generate ------------------------------------------------------------

struct GenerateArgs {
    std::uint32_t n = 1000;
    std::optional<std::uint64_t> seed;
    std::string model = "model2";
    std::uint32_t k = 1;
    std::string depth = "inf";
    std::string selection = "nearest";
    double participation = 0.5;
    std::string out = "network";
};

int cmd_generate(const GenerateArgs& args) {
    using namespace holovote;
    if (args.n == 0)
        throw UsageError("--n must be positive");
    SelectionStrategy selection = SelectionStrategy::NearestOpinion;
    if (args.selection == "random")
        selection = SelectionStrategy::Random;
    else if (args.selection != "nearest")
        throw UsageError("--selection must be nearest or random");
    TopologyConfig config;
    if (args.model == "model1")
        config = TopologyConfig::model1();
    else if (args.model == "model2")
        config = TopologyConfig::model2(args.k, parse_depth(args.depth), selection);
    else if (args.model == "k0")
        config = TopologyConfig::k0();
    else if (args.model == "full")
        config = TopologyConfig::full(parse_depth(args.depth));
    else
        throw UsageError("unknown --model '" + args.model + "'");
    if (!(args.participation >= 0.0 && args.participation <= 1.0))
        throw UsageError("--participation must lie in [0, 1]");
    if (args.model == "model1" &&
        std::floor(args.participation * static_cast<double>(args.n) + 0.5) < 1.0)
        throw UsageError("model1 needs a participation yielding at least one active member");

    const std::uint64_t seed = args.seed ? *args.seed : master_seed_default();
    auto members = generate_population(args.n, derive_seed(seed, 1));
    members = set_activity(std::move(members), args.participation, derive_seed(seed, 2));
    const DelegationNetwork net = build_network(members, config, derive_seed(seed, 3));

    std::stringstream members_csv, edges_csv;
    write_members_csv(members_csv, net.members);
    write_edges_csv(edges_csv, net.edges);
    write_file(args.out + ".members.csv", members_csv.str());
    write_file(args.out + ".edges.csv", edges_csv.str());
    std::cout << "wrote " << args.out << ".members.csv (" << net.members.size() << " members), "
              << args.out << ".edges.csv (" << net.edges.size() << " edges)\n";
    return kExitOk;
}

// --- sweep ---------------------------------------------------------------

struct SweepArgs {
    std::uint32_t n = 1000;
    std::string topologies = "k0,k1d1,k3dinf,full";
    std::string participation = "0.05:1.0:0.05";
    std::uint32_t trials = 100;
    std::optional<std::uint64_t> seed;
    std::string mode = "literal";
    bool fixed_population = false;
    std::string out = "sweep.csv";
    bool plot = false;
};

int cmd_sweep(const SweepArgs& args) {
    using namespace holovote;
    SweepConfig config;
    config.population = args.n;
    config.topologies = parse_topology_list(args.topologies);
    config.participation_grid = parse_participation_range(args.participation);
    config.trials = args.trials;
    config.master_seed = args.seed ? *args.seed : master_seed_default();
    config.fixed_population = args.fixed_population;
    if (args.mode == "literal")
        config.decision_mode = DecisionMode::Literal;
    else if (args.mode == "renormalized" || args.mode == "renorm")
        config.decision_mode = DecisionMode::Renormalized;
    else
        throw UsageError("--mode must be literal or renormalized");
    if (config.population == 0)
        throw UsageError("--n must be positive");
    if (config.trials == 0)
        throw UsageError("--trials must be positive");

    const std::vector<SweepRecord> records = sweep(config);

    std::stringstream csv;
    write_sweep_csv(csv, records);
    write_file(args.out, csv.str());
    std::cout << "wrote " << args.out << " (" << records.size() << " records)\n";
    if (args.plot) {
        std::stringstream svg;
        write_sweep_svg(svg, records);
        const std::string plot_path = replace_extension(args.out, ".svg");
        write_file(plot_path, svg.str());
        std::cout << "wrote " << plot_path << '\n';
    }
    return kExitOk;
}

// --- compare -------------------------------------------------------------

int cmd_compare(const std::string& input) {
    using namespace holovote;
    std::ifstream in(input);
    if (!in)
        throw std::runtime_error("cannot open '" + input + "'");
    std::vector<SweepRecord> records;
    TopologyComparison comparison;
    try {
        records = read_sweep_csv(in);
        comparison = compare_topologies(records);
    } catch (const std::invalid_argument& error) {
        // malformed content is an input failure, not a usage error
        throw std::runtime_error(input + ": " + error.what());
    }

    std::cout << "per-fraction ranking (best first):\n";
    for (const FractionRanking& ranking : comparison.per_fraction) {
        std::cout << "  " << format_real(ranking.participation) << ':';
        for (const auto& [label, error] : ranking.ranked)
            std::cout << ' ' << label << '=' << format_real(error);
        std::cout << '\n';
    }
    std::cout << "area under the error curve (best first):\n";
    for (const auto& [label, auc] : comparison.auc_ranking)
        std::cout << "  " << label << ' ' << format_real(auc) << '\n';

    // Make the k0-vs-k1d1 equality claim explicit whenever both series are
    // present: agreement at a grid point means each mean error lies within
    // the other's +-1 sample-std band.
    std::vector<const SweepRecord*> k0_rows, k1_rows;
    for (const SweepRecord& record : records) {
        if (record.topology == "k0")
            k0_rows.push_back(&record);
        else if (record.topology == "k1d1")
            k1_rows.push_back(&record);
    }
    if (!k0_rows.empty() && k0_rows.size() == k1_rows.size()) {
        std::cout << "k0 vs k1d1 (+-1 std band agreement):\n";
        for (std::size_t i = 0; i < k0_rows.size(); ++i) {
            const double gap = std::fabs(k0_rows[i]->mean_error - k1_rows[i]->mean_error);
            const bool agree = gap <= k0_rows[i]->std_error && gap <= k1_rows[i]->std_error;
            std::cout << "  " << format_real(k0_rows[i]->participation) << ": "
                      << (agree ? "AGREE" : "DISAGREE") << " (gap " << format_real(gap)
                      << ")\n";
        }
    }
    return kExitOk;
}

// --- workspace-demo ------------------------------------------------------

struct DemoScenario {
    std::vector<holovote::ModelEntry> problem_entries;
    std::vector<holovote::PoolBallot> problem_ballots;
    std::map<std::string, holovote::SolutionStage> stages;
    holovote::DecisionMethod method = holovote::DecisionMethod::Plurality;
    holovote::PowerAssignment powers;
};

// Three participants model one problem each; the pool is pruned to one
// winner whose solution stage repeats the lifecycle. Voter 2 holds enough
// absorbed power to flip the solution plurality when weighting is on.
DemoScenario bundled_scenario() {
    using namespace holovote;
    DemoScenario scenario;
    scenario.problem_entries = {
        {"p1", 0, ModelKind::ProblemModel, "commute times keep growing", {}},
        {"p2", 1, ModelKind::ProblemModel, "transit coverage is patchy", {}},
        {"p3", 2, ModelKind::ProblemModel, "parking crowds the center", {}}};
    scenario.problem_ballots = {{0, {"p2"}, {}, 1.0}, {1, {"p2"}, {}, 1.0}, {2, {"p2"}, {}, 1.0}};
    scenario.stages["p2"] = {{{"s1", 0, ModelKind::SolutionModel, "add express bus lines", {}},
                              {"s2", 1, ModelKind::SolutionModel, "build light rail", {}},
                              {"s3", 2, ModelKind::SolutionModel, "stagger work hours", {}}},
                             {{0, {"s1"}, {}, 1.0}, {1, {"s1"}, {}, 1.0}, {2, {"s2"}, {}, 1.0}}};
    scenario.powers.absorbed = {{0, 1.0}, {1, 1.0}, {2, 3.0}};
    return scenario;
}

holovote::DecisionMethod parse_method(const std::string& name) {
    using holovote::DecisionMethod;
    if (name == "mean")
        return DecisionMethod::Mean;
    if (name == "borda")
        return DecisionMethod::Borda;
    if (name == "plurality")
        return DecisionMethod::Plurality;
    throw std::runtime_error("unknown method '" + name + "'");
}

holovote::ModelEntry entry_from_json(const nlohmann::json& json, holovote::ModelKind kind) {
    holovote::ModelEntry entry;
    entry.id = json.at("id").get<std::string>();
    entry.author = json.at("author").get<holovote::MemberId>();
    entry.kind = kind;
    entry.content = json.value("content", "");
    if (json.contains("value"))
        entry.numeric_value = json.at("value").get<double>();
    return entry;
}

holovote::PoolBallot ballot_from_json(const nlohmann::json& json) {
    holovote::PoolBallot ballot;
    ballot.voter = json.at("voter").get<holovote::MemberId>();
    if (json.contains("ranking"))
        ballot.ranking = json.at("ranking").get<std::vector<std::string>>();
    if (json.contains("value"))
        ballot.value = json.at("value").get<double>();
    ballot.weight = json.value("weight", 1.0);
    return ballot;
}

DemoScenario load_scenario(const std::string& path) {
    using namespace holovote;
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open scenario '" + path + "'");
    nlohmann::json json;
    in >> json;

    DemoScenario scenario;
    scenario.method = parse_method(json.value("method", "plurality"));
    for (const auto& e : json.at("problem").at("entries"))
        scenario.problem_entries.push_back(entry_from_json(e, ModelKind::ProblemModel));
    for (const auto& b : json.at("problem").at("ballots"))
        scenario.problem_ballots.push_back(ballot_from_json(b));
    for (const auto& [problem_id, stage] : json.at("solutions").items()) {
        SolutionStage parsed;
        for (const auto& e : stage.at("entries"))
            parsed.entries.push_back(entry_from_json(e, ModelKind::SolutionModel));
        for (const auto& b : stage.at("ballots"))
            parsed.ballots.push_back(ballot_from_json(b));
        scenario.stages[problem_id] = std::move(parsed);
    }
    if (json.contains("powers"))
        for (const auto& [id, power] : json.at("powers").items())
            scenario.powers.absorbed.push_back(
                {static_cast<MemberId>(std::stoul(id)), power.get<double>()});
    std::sort(scenario.powers.absorbed.begin(), scenario.powers.absorbed.end());
    return scenario;
}

void print_history(const char* name, const holovote::ModelPool& pool) {
    std::cout << name << " pool size history:";
    for (const auto& [event, size] : pool.size_history)
        std::cout << ' ' << size;
    std::cout << '\n';
}

int cmd_workspace_demo(const std::string& scenario_path, bool power_weighted) {
    const DemoScenario scenario =
        scenario_path.empty() ? bundled_scenario() : load_scenario(scenario_path);
    if (power_weighted && scenario.powers.absorbed.empty())
        throw std::runtime_error("scenario carries no powers for --power-weighted");
    const holovote::PowerAssignment* assignment = power_weighted ? &scenario.powers : nullptr;

    holovote::LoopTrace trace;
    const std::string winner =
        run_problem_solving_loop(scenario.problem_entries, scenario.problem_ballots,
                                 scenario.stages, scenario.method, assignment, &trace);
    print_history("problem", trace.problem_pool);
    std::cout << "problem winner: " << trace.problem_winner << '\n';
    print_history("solution", trace.solution_pool);
    std::cout << "solution winner: " << winner << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"delegative decision-making simulator"};
    app.require_subcommand(1);

    GenerateArgs generate_args;
    CLI::App* generate = app.add_subcommand("generate", "write a population and its network");
    generate->add_option("--n", generate_args.n, "population size");
    std::uint64_t seed_value = 0;
    CLI::Option* generate_seed = generate->add_option("--seed", seed_value, "master seed");
    generate->add_option("--model", generate_args.model, "model1|model2|k0|full");
    generate->add_option("--k", generate_args.k, "representatives per member");
    generate->add_option("--depth", generate_args.depth, "flow depth (integer or inf)");
    generate->add_option("--selection", generate_args.selection, "nearest|random");
    generate->add_option("--participation", generate_args.participation,
                         "active fraction in [0, 1]");
    generate->add_option("--out", generate_args.out, "output stem");

    SweepArgs sweep_args;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run the participation sweep");
    sweep_cmd->add_option("--n", sweep_args.n, "population size");
    sweep_cmd->add_option("--topologies", sweep_args.topologies, "comma list of topology tokens");
    sweep_cmd->add_option("--participation", sweep_args.participation, "grid start:stop:step");
    sweep_cmd->add_option("--trials", sweep_args.trials, "trials per cell");
    std::uint64_t sweep_seed_value = 0;
    CLI::Option* sweep_seed = sweep_cmd->add_option("--seed", sweep_seed_value, "master seed");
    sweep_cmd->add_option("--mode", sweep_args.mode, "literal|renormalized");
    sweep_cmd->add_flag("--fixed-population", sweep_args.fixed_population,
                        "reuse one opinion draw across trials");
    sweep_cmd->add_option("--out", sweep_args.out, "output CSV path");
    sweep_cmd->add_flag("--plot", sweep_args.plot, "also write an SVG chart");

    std::string compare_input;
    CLI::App* compare = app.add_subcommand("compare", "rank topologies from a sweep CSV");
    compare->add_option("input", compare_input, "sweep CSV path")->required();

    std::string scenario_path;
    bool power_weighted = false;
    CLI::App* demo = app.add_subcommand("workspace-demo", "run the problem-solving lifecycle");
    demo->add_option("--scenario", scenario_path, "scenario JSON path");
    demo->add_flag("--power-weighted", power_weighted, "weight ballots by absorbed power");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& error) {
        app.exit(error);
        return kExitUsage;
    }

    try {
        if (generate->parsed()) {
            if (generate_seed->count() > 0)
                generate_args.seed = seed_value;
            return cmd_generate(generate_args);
        }
        if (sweep_cmd->parsed()) {
            if (sweep_seed->count() > 0)
                sweep_args.seed = sweep_seed_value;
            return cmd_sweep(sweep_args);
        }
        if (compare->parsed())
            return cmd_compare(compare_input);
        if (demo->parsed())
            return cmd_workspace_demo(scenario_path, power_weighted);
    } catch (const UsageError& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
