#pragma once
// Simulation grid: hierarchies x generating models x subset sizes x
// replications, every configured clustering method per cell.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skillscape/clustering.hpp"
#include "skillscape/hierarchy.hpp"
#include "skillscape/response_sim.hpp"

namespace skillscape {

enum class Method {
    Hc,
    Kmeans,
    EmptykRandom,
    EmptykRescaled,
    EmptykPseudoDina,
    EmptykPseudoNida,
    SemisupDina,
    SemisupNida,
};

std::string_view to_string(Method m);
Method parse_method(std::string_view name);
const std::vector<Method>& all_methods();

struct HierarchySpec {
    std::string name;
    Hierarchy hierarchy;
    SubsetMode subset_mode = SubsetMode::Prefix;
};

// Canonical hierarchy by name, with the subset mode used for it in the grid:
// prefix for linear/convergent/divergent, random for unstructured/null.
HierarchySpec canonical_hierarchy_spec(std::string_view name, int num_skills);

// A canonical name, {"kind": name}, or an explicit
// {"name", "skills", "requirements": {"5": [[3, 4]]}, "subset_mode"} object
// with 1-based skill numbers.
HierarchySpec parse_hierarchy_spec(const nlohmann::json& j, int num_skills);

struct ExperimentConfig {
    int K = 6;
    int J = 30;
    int N = 250;
    std::vector<HierarchySpec> hierarchies;
    std::vector<ResponseModelKind> generating_models{ResponseModelKind::Dina, ResponseModelKind::Nida};
    std::vector<Method> methods = all_methods();
    std::optional<std::vector<int>> subset_sizes;  // nullopt: every size 3..L_h
    int replications = 25;
    int pseudo_M = 100;
    std::vector<ItemMix> q_mix = default_item_mix();
    bool resample_q_per_replication = false;
    std::uint64_t seed = 0;

    NoiseBounds noise;
    bool zero_noise = false;  // slip = guess = 0 for generated data and pseudodata
    int kmeans_restarts = 5;
    int workers = 1;
    bool record_runtime = false;  // wall-clock times make results.csv non-reproducible
};

// Throws std::invalid_argument naming the offending key.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

struct ResultRow {
    std::string hierarchy;
    std::string generating_model;
    std::string method;
    int L_h = 0;
    int subset_size = 0;
    double proportion = 0;
    int replication = 0;
    std::optional<double> ari;
    std::optional<int> clusters_found;
    std::optional<double> profile_accuracy;
    std::optional<double> runtime_ms;
    std::vector<std::string> flags;

    bool failed() const { return !ari.has_value(); }
};

struct ExperimentRun {
    std::vector<ResultRow> rows;
    nlohmann::json meta;
};

// Worker count: SKILLSCAPE_WORKERS when set, else cfg.workers.
int effective_workers(const ExperimentConfig& cfg);

ExperimentRun run_experiment(const ExperimentConfig& cfg);

// One grid cell's data set, exposed for the CLI and tests.
struct SimulatedData {
    ProfileSet possible;
    ProfileSet subset;
    std::vector<Profile> students;
    ResponseModel params;
    ResponseMatrix responses;
    Matrix<double> capability;
};

SimulatedData simulate_dataset(const ExperimentConfig& cfg, const HierarchySpec& h, ResponseModelKind model,
                               int subset_size, const QMatrix& q, Rng& rng);

// Runs one method on capability scores with at most L_h = |possible| clusters.
// Per-cluster profile labels are filled from carried labels where the method
// has them and from the nearest licit vertex otherwise.
struct MethodOutcome {
    ClusteringResult<double> result;
    std::vector<Profile> cluster_profiles;
    std::vector<std::string> flags;
};

MethodOutcome run_method(Method method, const Matrix<double>& capability, const ProfileSet& possible,
                         const QMatrix& q, const ExperimentConfig& cfg, Rng& rng);

extern const std::vector<std::string> kResultColumns;

void write_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);

struct SeriesPoint {
    std::string generating_model;
    std::string hierarchy;
    std::string method;
    int subset_size = 0;
    double proportion = 0;
    double mean_ari = 0;
    int count = 0;
};

// Mean ARI over replications per (model, hierarchy, method, subset size),
// failed rows excluded, sorted by those keys.
std::vector<SeriesPoint> mean_ari_series(const std::vector<ResultRow>& rows);

// One SVG per (generating model, hierarchy); returns the written paths.
std::vector<std::filesystem::path> render_figures(const std::vector<ResultRow>& rows,
                                                  const std::filesystem::path& out_dir);

// results.csv, figures/*.svg and run_meta.json under out_dir.
void write_run_outputs(const ExperimentRun& run, const std::filesystem::path& out_dir);

}  // namespace skillscape
