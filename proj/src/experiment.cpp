#include "skillscape/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include "skillscape/capability.hpp"
#include "skillscape/evaluation.hpp"
#include "skillscape/io.hpp"
#include "skillscape/version.hpp"

namespace skillscape {

namespace {

using json = nlohmann::json;

constexpr std::pair<Method, std::string_view> kMethodNames[] = {
    {Method::Hc, "hc"},
    {Method::Kmeans, "kmeans"},
    {Method::EmptykRandom, "emptyk_random"},
    {Method::EmptykRescaled, "emptyk_rescaled"},
    {Method::EmptykPseudoDina, "emptyk_pseudo_dina"},
    {Method::EmptykPseudoNida, "emptyk_pseudo_nida"},
    {Method::SemisupDina, "semisup_dina"},
    {Method::SemisupNida, "semisup_nida"},
};

[[noreturn]] void bad_config(const std::string& what) { throw std::invalid_argument("config: " + what); }

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        bad_config(std::string("key '") + key + "' has the wrong type");
    }
}

}  // namespace

HierarchySpec parse_hierarchy_spec(const json& h, int K) {
    if (h.is_string()) return canonical_hierarchy_spec(h.get<std::string>(), K);
    if (!h.is_object()) bad_config("hierarchy entries must be a name or an object");
    if (h.contains("kind")) {
        auto spec = canonical_hierarchy_spec(h.at("kind").get<std::string>(), K);
        if (h.contains("name")) spec.name = h.at("name").get<std::string>();
        return spec;
    }
    const int skills = get_or<int>(h, "skills", K);
    if (skills != K) bad_config("explicit hierarchy has " + std::to_string(skills) + " skills but K=" + std::to_string(K));
    std::vector<std::vector<Hierarchy::Term>> req(skills);
    if (h.contains("requirements")) {
        for (const auto& [key, terms] : h.at("requirements").items()) {
            int skill = 0;
            try {
                skill = std::stoi(key);
            } catch (const std::exception&) {
                bad_config("requirement key '" + key + "' is not a skill number");
            }
            if (skill < 1 || skill > skills) bad_config("requirement key " + key + " outside 1.." + std::to_string(skills));
            for (const auto& term : terms) {
                Hierarchy::Term t;
                for (int parent : term.get<std::vector<int>>()) t.push_back(parent - 1);
                req[skill - 1].push_back(std::move(t));
            }
        }
    }
    HierarchySpec spec{get_or<std::string>(h, "name", "custom"), Hierarchy(skills, std::move(req)), SubsetMode::Prefix};
    const auto mode = get_or<std::string>(h, "subset_mode", "prefix");
    if (mode == "random")
        spec.subset_mode = SubsetMode::Random;
    else if (mode != "prefix")
        bad_config("subset_mode must be 'prefix' or 'random'");
    return spec;
}

namespace {

json hierarchy_to_json(const HierarchySpec& h) {
    json req = json::object();
    for (int k = 0; k < h.hierarchy.num_skills(); ++k) {
        if (h.hierarchy.terms(k).empty()) continue;
        json terms = json::array();
        for (const auto& t : h.hierarchy.terms(k)) {
            json term = json::array();
            for (int p : t) term.push_back(p + 1);
            terms.push_back(term);
        }
        req[std::to_string(k + 1)] = terms;
    }
    return {{"name", h.name},
            {"skills", h.hierarchy.num_skills()},
            {"requirements", req},
            {"subset_mode", h.subset_mode == SubsetMode::Prefix ? "prefix" : "random"}};
}

}  // namespace

std::string_view to_string(Method m) {
    for (auto [method, name] : kMethodNames)
        if (method == m) return name;
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (auto [method, n] : kMethodNames)
        if (n == name) return method;
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

const std::vector<Method>& all_methods() {
    static const std::vector<Method> methods = [] {
        std::vector<Method> m;
        for (auto [method, name] : kMethodNames) m.push_back(method);
        return m;
    }();
    return methods;
}

HierarchySpec canonical_hierarchy_spec(std::string_view name, int num_skills) {
    const auto kind = parse_hierarchy_kind(name);
    const bool random = kind == HierarchyKind::Unstructured || kind == HierarchyKind::Null;
    return {std::string(to_string(kind)), build_canonical_hierarchy(kind, num_skills),
            random ? SubsetMode::Random : SubsetMode::Prefix};
}

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) bad_config("top level must be an object");
    ExperimentConfig cfg;
    cfg.K = get_or<int>(j, "K", cfg.K);
    cfg.J = get_or<int>(j, "J", cfg.J);
    cfg.N = get_or<int>(j, "N", cfg.N);
    if (cfg.K < 1 || cfg.J < 1 || cfg.N < 1) bad_config("K, J and N must be positive");

    if (!j.contains("seed")) bad_config("missing required key 'seed'");
    cfg.seed = get_or<std::uint64_t>(j, "seed", 0);

    if (j.contains("hierarchies")) {
        for (const auto& h : j.at("hierarchies")) {
            try {
                cfg.hierarchies.push_back(parse_hierarchy_spec(h, cfg.K));
            } catch (const json::exception& e) {
                bad_config(std::string("hierarchy: ") + e.what());
            }
        }
    } else {
        for (const char* name : {"linear", "convergent", "divergent", "unstructured", "null"})
            cfg.hierarchies.push_back(canonical_hierarchy_spec(name, cfg.K));
    }
    if (cfg.hierarchies.empty()) bad_config("no hierarchies");

    if (j.contains("generating_models")) {
        cfg.generating_models.clear();
        for (const auto& m : j.at("generating_models")) cfg.generating_models.push_back(parse_response_model(m.get<std::string>()));
    }
    if (cfg.generating_models.empty()) bad_config("no generating models");

    if (j.contains("methods")) {
        cfg.methods.clear();
        for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (cfg.methods.empty()) bad_config("no methods");

    if (j.contains("subset_sizes")) {
        const auto& s = j.at("subset_sizes");
        if (s.is_string()) {
            if (s.get<std::string>() != "all") bad_config("subset_sizes must be \"all\" or a list");
        } else {
            cfg.subset_sizes = s.get<std::vector<int>>();
            for (int size : *cfg.subset_sizes)
                if (size < 3) bad_config("subset sizes must be at least 3");
        }
    }

    cfg.replications = get_or<int>(j, "replications", cfg.replications);
    cfg.pseudo_M = get_or<int>(j, "pseudo_M", cfg.pseudo_M);
    if (cfg.replications < 1) bad_config("replications must be positive");
    if (cfg.pseudo_M < 1) bad_config("pseudo_M must be positive");

    if (j.contains("q_mix")) {
        cfg.q_mix.clear();
        for (const auto& m : j.at("q_mix")) {
            const auto pair = m.get<std::vector<int>>();
            if (pair.size() != 2) bad_config("q_mix entries are [skills_per_item, count]");
            cfg.q_mix.push_back({pair[0], pair[1]});
        }
    }
    cfg.resample_q_per_replication = get_or<bool>(j, "resample_q_per_replication", cfg.resample_q_per_replication);
    cfg.noise.slip_max = get_or<double>(j, "slip_max", cfg.noise.slip_max);
    cfg.noise.guess_max = get_or<double>(j, "guess_max", cfg.noise.guess_max);
    cfg.zero_noise = get_or<bool>(j, "zero_noise", cfg.zero_noise);
    cfg.kmeans_restarts = get_or<int>(j, "kmeans_restarts", cfg.kmeans_restarts);
    cfg.workers = get_or<int>(j, "workers", cfg.workers);
    cfg.record_runtime = get_or<bool>(j, "record_runtime", cfg.record_runtime);
    if (cfg.kmeans_restarts < 1) bad_config("kmeans_restarts must be positive");
    if (!cfg.zero_noise && (cfg.noise.slip_max <= 0 || cfg.noise.guess_max <= 0 ||
                            cfg.noise.slip_max + cfg.noise.guess_max >= 1))
        bad_config("slip_max and guess_max must be positive with a sum below 1");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config " + path.string() + ": " + e.what());
    }
    return parse_config(j);
}

json to_json(const ExperimentConfig& cfg) {
    json j;
    j["K"] = cfg.K;
    j["J"] = cfg.J;
    j["N"] = cfg.N;
    j["hierarchies"] = json::array();
    for (const auto& h : cfg.hierarchies) j["hierarchies"].push_back(hierarchy_to_json(h));
    j["generating_models"] = json::array();
    for (auto m : cfg.generating_models) j["generating_models"].push_back(std::string(to_string(m)));
    j["methods"] = json::array();
    for (auto m : cfg.methods) j["methods"].push_back(std::string(to_string(m)));
    if (cfg.subset_sizes)
        j["subset_sizes"] = *cfg.subset_sizes;
    else
        j["subset_sizes"] = "all";
    j["replications"] = cfg.replications;
    j["pseudo_M"] = cfg.pseudo_M;
    j["q_mix"] = json::array();
    for (auto m : cfg.q_mix) j["q_mix"].push_back({m.skills_per_item, m.count});
    j["resample_q_per_replication"] = cfg.resample_q_per_replication;
    j["seed"] = cfg.seed;
    j["slip_max"] = cfg.noise.slip_max;
    j["guess_max"] = cfg.noise.guess_max;
    j["zero_noise"] = cfg.zero_noise;
    j["kmeans_restarts"] = cfg.kmeans_restarts;
    j["record_runtime"] = cfg.record_runtime;
    return j;
}

int effective_workers(const ExperimentConfig& cfg) {
    if (const char* env = std::getenv("SKILLSCAPE_WORKERS")) {
        try {
            const int w = std::stoi(env);
            if (w >= 1) return w;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid SKILLSCAPE_WORKERS='" << env << "'\n";
    }
    return std::max(1, cfg.workers);
}

namespace {

ResponseModel make_params(ResponseModelKind kind, const QMatrix& q, const ExperimentConfig& cfg, Rng& rng) {
    if (cfg.zero_noise) return zero_noise_params(kind, q);
    return sample_params(kind, kind == ResponseModelKind::Dina ? q.items() : q.skills(), rng, cfg.noise);
}

int clamp_to_distinct(const Matrix<double>& x, int wanted, std::vector<std::string>& flags) {
    const int distinct = detail::count_distinct_rows(x);
    if (wanted <= distinct) return wanted;
    flags.emplace_back("k_clamped");
    return distinct;
}

}  // namespace

SimulatedData simulate_dataset(const ExperimentConfig& cfg, const HierarchySpec& h, ResponseModelKind model,
                               int subset_size, const QMatrix& q, Rng& rng) {
    SimulatedData d;
    d.possible = enumerate_profiles(h.hierarchy);
    d.subset = select_subset(d.possible, subset_size, h.subset_mode, rng);
    d.students = assign_students(cfg.N, d.subset, rng);
    d.params = make_params(model, q, cfg, rng);
    d.responses = simulate_responses(d.students, q, d.params, rng);
    d.capability = capability_from_responses<double>(d.responses, q);
    return d;
}

MethodOutcome run_method(Method method, const Matrix<double>& x, const ProfileSet& possible, const QMatrix& q,
                         const ExperimentConfig& cfg, Rng& rng) {
    const int L = possible.size();
    MethodOutcome out;
    switch (method) {
        case Method::Hc:
            out.result = result_from_partition(x, cut_largest_gap(hclust_complete(x), L), "hc_complete_largest_gap");
            break;
        case Method::Kmeans:
            out.result = kmeans(x, clamp_to_distinct(x, L, out.flags), rng, cfg.kmeans_restarts);
            break;
        case Method::EmptykRandom:
            out.result = empty_kmeans(x, centers_random(x, clamp_to_distinct(x, L, out.flags), rng));
            out.result.method_tag = "empty_kmeans_random";
            break;
        case Method::EmptykRescaled:
            out.result = empty_kmeans(x, centers_rescaled(x, possible));
            out.result.method_tag = "empty_kmeans_rescaled_minmax";
            break;
        case Method::EmptykPseudoDina:
        case Method::EmptykPseudoNida: {
            const auto kind = method == Method::EmptykPseudoDina ? ResponseModelKind::Dina : ResponseModelKind::Nida;
            const auto model = make_params(kind, q, cfg, rng);
            out.result = empty_kmeans(x, centers_pseudo<double>(possible, q, model, cfg.pseudo_M, rng));
            out.result.method_tag = "empty_kmeans_pseudo_" + std::string(to_string(kind));
            break;
        }
        case Method::SemisupDina:
        case Method::SemisupNida: {
            const auto kind = method == Method::SemisupDina ? ResponseModelKind::Dina : ResponseModelKind::Nida;
            const auto model = make_params(kind, q, cfg, rng);
            const auto pseudo = simulate_pseudodata<double>(possible, q, model, cfg.pseudo_M, rng);
            const Eigen::Index np = pseudo.points.rows();
            Matrix<double> all(np + x.rows(), x.cols());
            all.topRows(np) = pseudo.points;
            all.bottomRows(x.rows()) = x;
            std::vector<int> labels = pseudo.labels;
            labels.resize(all.rows(), -1);
            CenterSet<double> init(detail::cluster_means(pseudo.points, pseudo.labels, L),
                                   std::vector<std::optional<Profile>>(possible.profiles.begin(), possible.profiles.end()));
            out.result = lcvqe(all, labels, derive_constraints(labels), init, possible.profiles);
            out.result.method_tag = "lcvqe_" + std::string(to_string(kind));
            break;
        }
    }

    const auto vertices = nearest_vertex_labels(out.result.centers, possible);
    std::map<std::string, int> used;
    bool collision = false;
    for (int c = 0; c < out.result.num_clusters(); ++c) {
        const auto& carried = out.result.labels[c];
        out.cluster_profiles.push_back(carried ? *carried : possible[vertices.profile_index[c]]);
        if (used[profile_to_string(out.cluster_profiles.back())]++) collision = true;
    }
    if (collision) out.flags.emplace_back("label_collision");
    return out;
}

namespace {

struct Cell {
    int hierarchy;
    int model;
    int subset_size;
    int replication;
};

struct QChoice {
    std::uint64_t seed;
    QMatrix q;
};

std::vector<ResultRow> run_cell(const ExperimentConfig& cfg, const Cell& cell, const ProfileSet& possible,
                                const QChoice& qc, json& params_out) {
    const auto& h = cfg.hierarchies[cell.hierarchy];
    const auto model = cfg.generating_models[cell.model];
    const std::string model_name(to_string(model));
    const int L = possible.size();

    ResultRow base;
    base.hierarchy = h.name;
    base.generating_model = model_name;
    base.L_h = L;
    base.subset_size = cell.subset_size;
    base.proportion = static_cast<double>(cell.subset_size) / L;
    base.replication = cell.replication;

    const std::initializer_list<std::uint64_t> cell_path = {hash_tag(h.name), hash_tag(model_name),
                                                            static_cast<std::uint64_t>(cell.subset_size),
                                                            static_cast<std::uint64_t>(cell.replication)};
    std::vector<ResultRow> rows;
    std::optional<SimulatedData> data;
    std::string data_error;
    try {
        Rng rng(derive_seed(cfg.seed, {hash_tag("data"), derive_seed(0, cell_path)}));
        data = simulate_dataset(cfg, h, model, cell.subset_size, qc.q, rng);
        const auto& p = data->params;
        const auto& slip = std::holds_alternative<DinaParams>(p) ? std::get<DinaParams>(p).slip : std::get<NidaParams>(p).slip;
        const auto& guess = std::holds_alternative<DinaParams>(p) ? std::get<DinaParams>(p).guess : std::get<NidaParams>(p).guess;
        params_out = {{"hierarchy", h.name}, {"generating_model", model_name}, {"subset_size", cell.subset_size},
                      {"replication", cell.replication},
                      {"slip", std::vector<double>(slip.begin(), slip.end())},
                      {"guess", std::vector<double>(guess.begin(), guess.end())}};
    } catch (const std::exception& e) {
        data_error = e.what();
    }

    std::vector<int> truth;
    std::vector<std::string> truth_flags;
    if (data) {
        if (cfg.zero_noise) {
            truth = partition_by_rows(data->capability);
            truth_flags.emplace_back("truth_by_capability");
        } else {
            truth = partition_by_profile(data->students);
        }
    }

    for (Method method : cfg.methods) {
        ResultRow row = base;
        row.method = std::string(to_string(method));
        if (!data) {
            row.flags.push_back("error:" + data_error);
            rows.push_back(std::move(row));
            continue;
        }
        try {
            Rng rng(derive_seed(cfg.seed, {hash_tag("method"), derive_seed(0, cell_path), hash_tag(row.method)}));
            const auto t0 = std::chrono::steady_clock::now();
            auto outcome = run_method(method, data->capability, possible, qc.q, cfg, rng);
            const auto t1 = std::chrono::steady_clock::now();

            const auto ari = adjusted_rand_index(outcome.result.assignment, truth);
            row.ari = ari.value;
            int found = 0;
            detail::normalize_partition(outcome.result.assignment, &found);
            row.clusters_found = found;
            std::vector<Profile> assigned;
            assigned.reserve(data->students.size());
            for (int c : outcome.result.assignment) assigned.push_back(outcome.cluster_profiles[c]);
            row.profile_accuracy = profile_accuracy(assigned, data->students);
            if (cfg.record_runtime) row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            row.flags = std::move(outcome.flags);
            if (ari.degenerate) row.flags.emplace_back("degenerate_ari");
            row.flags.insert(row.flags.end(), truth_flags.begin(), truth_flags.end());
        } catch (const std::exception& e) {
            row.flags.push_back(std::string("error:") + e.what());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

ExperimentRun run_experiment(const ExperimentConfig& cfg) {
    ExperimentRun run;
    json skipped = json::array();

    std::vector<ProfileSet> possible;
    for (const auto& h : cfg.hierarchies) {
        if (h.hierarchy.num_skills() != cfg.K)
            throw std::invalid_argument("hierarchy '" + h.name + "' has " + std::to_string(h.hierarchy.num_skills()) +
                                        " skills but K=" + std::to_string(cfg.K));
        possible.push_back(enumerate_profiles(h.hierarchy));
    }

    std::vector<QChoice> qs;
    const int num_q = cfg.resample_q_per_replication ? cfg.replications : 1;
    for (int r = 0; r < num_q; ++r) {
        const auto seed = cfg.resample_q_per_replication
                              ? derive_seed(cfg.seed, {hash_tag("q"), static_cast<std::uint64_t>(r)})
                              : derive_seed(cfg.seed, {hash_tag("q")});
        Rng rng(seed);
        qs.push_back({seed, sample_q_matrix(cfg.J, cfg.K, cfg.q_mix, rng)});
    }

    std::vector<Cell> cells;
    for (int h = 0; h < static_cast<int>(cfg.hierarchies.size()); ++h) {
        const int L = possible[h].size();
        std::vector<int> sizes;
        if (cfg.subset_sizes) {
            sizes = *cfg.subset_sizes;
        } else {
            for (int s = 3; s <= L; ++s) sizes.push_back(s);
        }
        for (int m = 0; m < static_cast<int>(cfg.generating_models.size()); ++m) {
            for (int size : sizes) {
                if (size < 3 || size > L || size > cfg.N) {
                    const std::string reason = "subset size " + std::to_string(size) + " infeasible for '" +
                                               cfg.hierarchies[h].name + "' (L_h=" + std::to_string(L) +
                                               ", N=" + std::to_string(cfg.N) + ")";
                    if (m == 0) std::cerr << "skipping grid cells: " << reason << '\n';
                    skipped.push_back({{"hierarchy", cfg.hierarchies[h].name},
                                       {"generating_model", std::string(to_string(cfg.generating_models[m]))},
                                       {"subset_size", size},
                                       {"reason", reason}});
                    continue;
                }
                for (int r = 0; r < cfg.replications; ++r) cells.push_back({h, m, size, r});
            }
        }
    }

    std::vector<std::vector<ResultRow>> cell_rows(cells.size());
    std::vector<json> cell_params(cells.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                const auto& c = cells[i];
                const auto& qc = qs[cfg.resample_q_per_replication ? c.replication : 0];
                cell_rows[i] = run_cell(cfg, c, possible[c.hierarchy], qc, cell_params[i]);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    const int workers = std::min<int>(effective_workers(cfg), std::max<std::size_t>(1, cells.size()));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    int degenerate = 0, errors = 0;
    for (auto& rows : cell_rows) {
        for (auto& row : rows) {
            if (row.failed()) ++errors;
            if (std::find(row.flags.begin(), row.flags.end(), "degenerate_ari") != row.flags.end()) ++degenerate;
            run.rows.push_back(std::move(row));
        }
    }

    json qjson = json::array();
    for (std::size_t r = 0; r < qs.size(); ++r) {
        json rows = json::array();
        for (int j = 0; j < qs[r].q.items(); ++j) {
            std::vector<int> row(qs[r].q.row(j).begin(), qs[r].q.row(j).end());
            rows.push_back(row);
        }
        qjson.push_back({{"replication", cfg.resample_q_per_replication ? json(r) : json("all")},
                         {"seed", qs[r].seed},
                         {"entries", rows}});
    }
    json params = json::array();
    for (auto& p : cell_params)
        if (!p.is_null()) params.push_back(std::move(p));

    run.meta = {
        {"tool", "skillscape"},
        {"version", kVersion},
        {"master_seed", cfg.seed},
        {"config", to_json(cfg)},
        {"q_mode", cfg.resample_q_per_replication ? "per_replication" : "single"},
        {"q_matrices", qjson},
        {"generating_params", params},
        {"replications", cfg.replications},
        {"figure_aggregation", "mean ARI over replications"},
        {"rescaled_centers", "reconstruction: per-coordinate min/max rescale of profile vertices"},
        {"lcvqe_constraints", "must-link chain within each pseudo label; cannot-link between first members of labels"},
        {"ari_degenerate_convention", "0/0 ratio reported as 1"},
        {"degenerate_ari_rows", degenerate},
        {"error_rows", errors},
        {"skipped_cells", skipped},
        {"row_count", run.rows.size()},
    };
    return run;
}

}  // namespace skillscape
