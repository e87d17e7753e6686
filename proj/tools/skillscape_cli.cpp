// skillscape: simulate students under skill hierarchies, cluster their
// capability scores and score the partitions.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "skillscape/capability.hpp"
#include "skillscape/evaluation.hpp"
#include "skillscape/experiment.hpp"
#include "skillscape/io.hpp"

namespace fs = std::filesystem;
using namespace skillscape;

namespace {

HierarchySpec load_hierarchy(const std::string& name_or_file, int k) {
    if (fs::exists(name_or_file) && fs::is_regular_file(name_or_file)) {
        std::ifstream in(name_or_file);
        nlohmann::json j;
        in >> j;
        return parse_hierarchy_spec(j, k);
    }
    return canonical_hierarchy_spec(name_or_file, k);
}

int cmd_run(const std::string& config_path, const std::string& out_dir, std::optional<std::uint64_t> seed) {
    auto cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    const auto run = run_experiment(cfg);
    write_run_outputs(run, out_dir);
    std::cout << "wrote " << run.rows.size() << " rows to " << (fs::path(out_dir) / "results.csv").string() << '\n';
    return 0;
}

int cmd_enumerate(const std::string& hierarchy, int k) {
    const auto spec = load_hierarchy(hierarchy, k);
    const auto profiles = enumerate_profiles(spec.hierarchy);
    for (const auto& p : profiles.profiles) std::cout << profile_to_string(p) << '\n';
    std::cout << "count: " << profiles.size() << '\n';
    return 0;
}

struct SimulateArgs {
    std::string hierarchy = "linear";
    int k = 6;
    int j = 30;
    int n = 250;
    int subset_size = 0;
    std::string model = "DINA";
    std::uint64_t seed = 1;
    bool zero_noise = false;
    std::string q_path;
    std::string out = "simulated";
};

int cmd_simulate(const SimulateArgs& a) {
    ExperimentConfig cfg;
    cfg.K = a.k;
    cfg.J = a.j;
    cfg.N = a.n;
    cfg.seed = a.seed;
    cfg.zero_noise = a.zero_noise;
    const auto spec = load_hierarchy(a.hierarchy, a.k);
    const int L = enumerate_profiles(spec.hierarchy).size();

    Rng q_rng = make_rng(a.seed, {hash_tag("q")});
    const QMatrix q = a.q_path.empty() ? sample_q_matrix(a.j, a.k, cfg.q_mix, q_rng) : read_q_matrix_csv(a.q_path);
    Rng rng = make_rng(a.seed, {hash_tag("simulate")});
    const auto data = simulate_dataset(cfg, spec, parse_response_model(a.model), a.subset_size ? a.subset_size : L, q, rng);

    fs::create_directories(a.out);
    const fs::path out(a.out);
    write_q_matrix_csv(out / "q.csv", q);
    write_matrix_csv(out / "responses.csv", data.responses, "item");
    write_matrix_csv(out / "capability.csv", data.capability, "skill");
    std::ofstream truth(out / "truth.csv");
    truth << "student,profile\n";
    for (std::size_t i = 0; i < data.students.size(); ++i)
        truth << i + 1 << ',' << profile_to_string(data.students[i]) << '\n';
    std::cout << "simulated " << data.students.size() << " students over " << data.subset.size() << " of " << L
              << " profiles into " << out.string() << '\n';
    return 0;
}

struct ClusterArgs {
    std::string capability;
    std::string method;
    std::string hierarchy = "null";
    std::string q_path;
    std::string truth_path;
    std::uint64_t seed = 1;
    int pseudo_m = 100;
    std::string out;
};

int cmd_cluster(const ClusterArgs& a) {
    const auto x = read_real_matrix_csv(a.capability);
    const int k = static_cast<int>(x.cols());
    const auto spec = load_hierarchy(a.hierarchy, k);
    const auto possible = enumerate_profiles(spec.hierarchy);
    const auto method = parse_method(a.method);

    ExperimentConfig cfg;
    cfg.K = k;
    cfg.N = static_cast<int>(x.rows());
    cfg.seed = a.seed;
    cfg.pseudo_M = a.pseudo_m;
    const bool needs_q = method == Method::EmptykPseudoDina || method == Method::EmptykPseudoNida ||
                         method == Method::SemisupDina || method == Method::SemisupNida;
    if (needs_q && a.q_path.empty()) throw std::invalid_argument("method " + a.method + " needs --q");
    std::optional<QMatrix> q;
    if (!a.q_path.empty()) q = read_q_matrix_csv(a.q_path);
    if (q && q->skills() != k) throw std::invalid_argument("Q-matrix skills do not match capability columns");
    const QMatrix placeholder(IntMatrix::Identity(k, k));

    Rng rng = make_rng(a.seed, {hash_tag("cluster"), hash_tag(a.method)});
    const auto outcome = run_method(method, x, possible, q ? *q : placeholder, cfg, rng);

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!a.out.empty()) {
        file.open(a.out);
        if (!file) throw std::runtime_error("cannot write " + a.out);
        os = &file;
    }
    *os << "student,cluster,profile\n";
    for (std::size_t i = 0; i < outcome.result.assignment.size(); ++i) {
        const int c = outcome.result.assignment[i];
        *os << i + 1 << ',' << c + 1 << ',' << profile_to_string(outcome.cluster_profiles[c]) << '\n';
    }
    std::cerr << "method " << a.method << ": " << outcome.result.num_clusters() << " clusters, objective "
              << format_fixed(outcome.result.objective) << '\n';

    if (!a.truth_path.empty()) {
        const auto table = read_csv(a.truth_path);
        std::vector<Profile> truth;
        for (std::size_t r = 1; r < table.size(); ++r) truth.push_back(profile_from_string(table[r].at(1)));
        std::vector<Profile> assigned;
        for (int c : outcome.result.assignment) assigned.push_back(outcome.cluster_profiles[c]);
        const auto ari = adjusted_rand_index(outcome.result.assignment, partition_by_profile(truth));
        std::cerr << "ARI " << format_fixed(ari.value) << ", profile accuracy "
                  << format_fixed(profile_accuracy(assigned, truth)) << '\n';
    }
    return 0;
}

int cmd_plot(const std::string& results, const std::string& out_dir) {
    const auto rows = read_results_csv(results);
    const auto written = render_figures(rows, out_dir);
    std::cout << "wrote " << written.size() << " figures to " << out_dir << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cluster simulated students into skill profiles under skill hierarchies"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    auto* run = app.add_subcommand("run", "Run the full simulation grid from a JSON config");
    run->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--seed", seed, "Override the config seed");

    std::string hierarchy = "linear";
    int k = 6;
    auto* enumerate = app.add_subcommand("enumerate", "List the profiles a hierarchy admits");
    enumerate->add_option("--hierarchy", hierarchy, "Canonical name or hierarchy JSON file")->required();
    enumerate->add_option("--k", k, "Number of skills");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate one data set and write it as CSV");
    simulate->add_option("--hierarchy", sim.hierarchy, "Canonical name or hierarchy JSON file");
    simulate->add_option("--k", sim.k, "Number of skills");
    simulate->add_option("--j", sim.j, "Number of items");
    simulate->add_option("--n", sim.n, "Number of students");
    simulate->add_option("--subset-size", sim.subset_size, "Profiles present (default: all possible)");
    simulate->add_option("--model", sim.model, "Generating model")->check(CLI::IsMember({"DINA", "NIDA", "dina", "nida"}));
    simulate->add_option("--seed", sim.seed, "Random seed");
    simulate->add_flag("--zero-noise", sim.zero_noise, "Set every slip and guess to 0");
    simulate->add_option("--q", sim.q_path, "Use this Q-matrix CSV instead of sampling one");
    simulate->add_option("--out", sim.out, "Output directory");

    ClusterArgs cl;
    auto* cluster = app.add_subcommand("cluster", "Run one clustering method on a capability-score CSV");
    cluster->add_option("--capability", cl.capability, "Capability scores CSV")->required();
    cluster->add_option("--method", cl.method, "Method name")->required();
    cluster->add_option("--hierarchy", cl.hierarchy, "Canonical name or hierarchy JSON file");
    cluster->add_option("--q", cl.q_path, "Q-matrix CSV (required by pseudodata methods)");
    cluster->add_option("--truth", cl.truth_path, "truth.csv from `simulate`, to report ARI");
    cluster->add_option("--seed", cl.seed, "Random seed");
    cluster->add_option("--pseudo-m", cl.pseudo_m, "Pseudo-students per profile");
    cluster->add_option("--out", cl.out, "Assignment CSV (default: stdout)");

    std::string results;
    auto* plot = app.add_subcommand("plot", "Render figures from a results CSV");
    plot->add_option("--results", results, "results.csv")->required();
    plot->add_option("--out", out_dir, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config_path, out_dir, seed);
        if (*enumerate) return cmd_enumerate(hierarchy, k);
        if (*simulate) return cmd_simulate(sim);
        if (*cluster) return cmd_cluster(cl);
        if (*plot) return cmd_plot(results, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
