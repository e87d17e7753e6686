// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset; SKILLSCAPE_ACCEPTANCE_OUT sets where the full
// grid outputs are written (default ./acceptance_grid).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "skillscape/capability.hpp"
#include "skillscape/clustering.hpp"
#include "skillscape/evaluation.hpp"
#include "skillscape/experiment.hpp"

using namespace skillscape;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    bool pass;
    std::string detail;
};

void report(int id, const std::string& name, const Verdict& v) {
    std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", id, name.c_str(), v.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

Matrix<double> random_points(int n, int dim, Rng& rng) {
    std::uniform_real_distribution<double> u(0, 1);
    Matrix<double> m(n, dim);
    for (int i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
    return m;
}

std::vector<int> random_partition(int n, int k, Rng& rng) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    std::vector<int> out(n);
    for (int& x : out) x = pick(rng);
    return out;
}

// 1. Profile counts at K = 6.
Verdict profile_counts() {
    const auto t0 = Clock::now();
    const std::pair<HierarchyKind, int> expected[] = {{HierarchyKind::Linear, 7},
                                                      {HierarchyKind::Convergent, 12},
                                                      {HierarchyKind::Divergent, 16},
                                                      {HierarchyKind::Unstructured, 33},
                                                      {HierarchyKind::Null, 64}};
    bool ok = true;
    std::string got;
    for (auto [kind, count] : expected) {
        const int n = enumerate_profiles(build_canonical_hierarchy(kind, 6)).size();
        ok &= n == count;
        got += std::string(got.empty() ? "" : "/") + std::to_string(n);
    }
    const double secs = seconds_since(t0);
    ok &= secs < 1.0;
    return {ok, "counts " + got + " (want 7/12/16/33/64), " + fmt("%.4f s", secs) + " (limit 1 s)"};
}

// 2. ARI against pair counting.
double pair_count_ari(const std::vector<int>& a, const std::vector<int>& b, bool& undefined) {
    double n11 = 0, n10 = 0, n01 = 0, n00 = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const bool sa = a[i] == a[j], sb = b[i] == b[j];
            n11 += sa && sb;
            n10 += sa && !sb;
            n01 += !sa && sb;
            n00 += !sa && !sb;
        }
    }
    const double den = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
    undefined = den == 0;
    return undefined ? 1.0 : 2 * (n00 * n11 - n01 * n10) / den;
}

Verdict ari_oracle() {
    Rng rng(derive_seed(1, {hash_tag("acceptance"), 2}));
    double worst = 0;
    bool ok = true;
    for (int t = 0; t < 100; ++t) {
        const int n = std::uniform_int_distribution<int>(2, 12)(rng);
        const auto a = random_partition(n, std::uniform_int_distribution<int>(1, n)(rng), rng);
        const auto b = random_partition(n, std::uniform_int_distribution<int>(1, n)(rng), rng);
        bool undefined = false;
        const double oracle = pair_count_ari(a, b, undefined);
        const auto got = adjusted_rand_index(a, b);
        ok &= got.degenerate == undefined;
        worst = std::max(worst, std::abs(got.value - oracle));
    }
    ok &= worst <= 1e-12;

    bool identical = true;
    for (int t = 0; t < 100; ++t) {
        const auto a = random_partition(2 + t, 1 + t % 9, rng);
        identical &= adjusted_rand_index(a, a).value == 1.0;
    }
    ok &= identical;

    double sum = 0;
    const int draws = 10000;
    for (int t = 0; t < draws; ++t) sum += adjusted_rand_index(random_partition(50, 5, rng), random_partition(50, 5, rng)).value;
    const double mean = sum / draws;
    ok &= std::abs(mean) <= 0.02;
    return {ok, "max |ARI - oracle| " + fmt("%.3g", worst) + " (tol 1e-12) over 100 pairs N<=12, identical=1 " +
                    (identical ? "yes" : "no") + ", mean over 1e4 random pairs " + fmt("%+.5f", mean) +
                    " (tol 0.02)"};
}

// 3. Monte Carlo response means against closed forms.
Verdict response_means() {
    Rng rng(derive_seed(1, {hash_tag("acceptance"), 3}));
    const auto mix = default_item_mix();
    const int draws = 10000;
    int within = 0, pooled = 0, pooled_out = 0;
    double worst_z = 0, pooled_z2 = 0;
    for (int t = 0; t < 20; ++t) {
        const auto q = sample_q_matrix(30, 6, mix, rng);
        const auto kind = t % 2 ? ResponseModelKind::Nida : ResponseModelKind::Dina;
        const auto model = sample_params(kind, kind == ResponseModelKind::Dina ? 30 : 6, rng);
        Profile alpha(6);
        for (int k = 0; k < 6; ++k) alpha[k] = std::bernoulli_distribution(0.5)(rng);
        const int j = std::uniform_int_distribution<int>(0, 29)(rng);

        auto closed_form = [&](int item) {
            if (kind == ResponseModelKind::Dina) {
                const auto& d = std::get<DinaParams>(model);
                bool all = true;
                for (int k = 0; k < 6; ++k) all &= !q.entries()(item, k) || alpha[k];
                return all ? 1 - d.slip[item] : d.guess[item];
            }
            const auto& d = std::get<NidaParams>(model);
            double p = 1;
            for (int k = 0; k < 6; ++k)
                if (q.entries()(item, k)) p *= alpha[k] ? 1 - d.slip[k] : d.guess[k];
            return p;
        };
        const std::vector<Profile> students(draws, alpha);
        const auto y = simulate_responses(students, q, model, rng);
        auto z_of = [&](int item) {
            const double p = closed_form(item);
            const double se = std::sqrt(p * (1 - p) / draws);
            const double mean = y.col(item).cast<double>().mean();
            return se > 0 ? std::abs(mean - p) / se : (mean == p ? 0 : INFINITY);
        };
        const double z = z_of(j);
        worst_z = std::max(worst_z, z);
        within += z <= 3;
        for (int item = 0; item < 30; ++item) {
            const double zi = z_of(item);
            pooled_z2 += zi * zi;
            pooled_out += zi > 3;
            ++pooled;
        }
    }
    return {within == 20, std::to_string(within) + "/20 cases within 3 SE at 1e4 draws, max |z| " + fmt("%.2f", worst_z) +
                              "; all items of those cases: mean z^2 " + fmt("%.3f", pooled_z2 / pooled) + ", " +
                              std::to_string(pooled_out) + "/" + std::to_string(pooled) + " beyond 3 SE"};
}

// 4. Zero-noise recovery.
Verdict zero_noise_recovery() {
    const auto t0 = Clock::now();
    ExperimentConfig cfg = parse_config(nlohmann::json::parse(R"({
        "seed": 4, "generating_models": ["DINA"], "methods": ["emptyk_pseudo_dina"],
        "replications": 1, "zero_noise": true
    })"));
    cfg.workers = 1;
    const auto run = run_experiment(cfg);
    int perfect = 0;
    std::set<std::string> seen;
    for (const auto& r : run.rows) {
        perfect += r.ari && *r.ari == 1.0;
        seen.insert(r.hierarchy);
    }
    const double secs = seconds_since(t0);
    const bool ok = perfect == static_cast<int>(run.rows.size()) && seen.size() == 5 && secs < 10;
    return {ok, std::to_string(perfect) + "/" + std::to_string(run.rows.size()) +
                    " cells with ARI = 1 across 5 hierarchies (every subset size), " + fmt("%.2f s", secs) +
                    " (limit 10 s)"};
}

// 5 and 6 share one full-grid run.
struct GridStats {
    // (model, hierarchy, size) -> method -> mean ARI
    std::map<std::tuple<std::string, std::string, int>, std::map<std::string, double>> means;
    std::map<std::tuple<std::string, std::string, int>, double> proportion;
    double seconds = 0;
    std::size_t rows = 0;
    int errors = 0;
};

GridStats run_full_grid() {
    auto cfg = parse_config(nlohmann::json::parse(R"({"seed": 20240601, "replications": 10})"));
    cfg.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const auto t0 = Clock::now();
    const auto run = run_experiment(cfg);
    GridStats g;
    g.seconds = seconds_since(t0);
    g.rows = run.rows.size();

    const char* env = std::getenv("SKILLSCAPE_ACCEPTANCE_OUT");
    write_run_outputs(run, env ? env : "acceptance_grid");

    std::map<std::tuple<std::string, std::string, int, std::string>, std::pair<double, int>> acc;
    for (const auto& r : run.rows) {
        if (r.failed()) {
            ++g.errors;
            continue;
        }
        auto& a = acc[{r.generating_model, r.hierarchy, r.subset_size, r.method}];
        a.first += *r.ari;
        ++a.second;
        g.proportion[{r.generating_model, r.hierarchy, r.subset_size}] = r.proportion;
    }
    for (const auto& [key, a] : acc) {
        const auto& [model, h, size, method] = key;
        g.means[{model, h, size}][method] = a.first / a.second;
    }
    return g;
}

Verdict pseudocenters_competitive(const GridStats& g) {
    const double margin = 0.02;
    // pseudo method -> (all cells, wins), (misspecified cells, wins)
    std::map<std::string, std::array<int, 4>> tally;
    int cells = 0;
    for (const auto& [key, m] : g.means) {
        const auto& model = std::get<0>(key);
        double best_other = -2;
        for (const auto& [method, v] : m)
            if (method.rfind("emptyk_pseudo_", 0) != 0) best_other = std::max(best_other, v);
        ++cells;
        for (const char* pseudo : {"emptyk_pseudo_dina", "emptyk_pseudo_nida"}) {
            auto it = m.find(pseudo);
            const bool win = it != m.end() && it->second >= best_other - margin;
            const bool misspecified = (std::string(pseudo) == "emptyk_pseudo_dina") != (model == "DINA");
            auto& t = tally[pseudo];
            ++t[0];
            t[1] += win;
            if (misspecified) {
                ++t[2];
                t[3] += win;
            }
        }
    }
    bool ok = cells > 0 && g.seconds < 1800 && g.errors == 0;
    std::ostringstream d;
    d << cells << " cells (model x hierarchy x size), 10 replications;";
    for (const auto& [pseudo, t] : tally) {
        const double all = static_cast<double>(t[1]) / t[0];
        const double mis = t[2] ? static_cast<double>(t[3]) / t[2] : 0;
        ok &= all >= 0.75 && mis >= 0.75;
        d << ' ' << pseudo << " within " << margin << " of best other in " << fmt("%.1f%%", 100 * all)
          << " of cells (" << fmt("%.1f%%", 100 * mis) << " misspecified);";
    }
    d << " need 75%; grid " << fmt("%.0f s", g.seconds) << " (limit 1800 s), " << g.errors << " error rows";
    return {ok, d.str()};
}

Verdict hc_degrades(const GridStats& g) {
    bool ok = true;
    std::ostringstream d;
    for (const char* model : {"DINA", "NIDA"}) {
        int smallest = -1, full = -1;
        double p_small = 2;
        for (const auto& [key, p] : g.proportion) {
            if (std::get<0>(key) != model || std::get<1>(key) != "linear") continue;
            if (p < p_small) {
                p_small = p;
                smallest = std::get<2>(key);
            }
            if (p == 1.0) full = std::get<2>(key);
        }
        if (smallest < 0 || full < 0) {
            ok = false;
            d << model << ": missing cells; ";
            continue;
        }
        const double lo = g.means.at({model, "linear", smallest}).at("hc");
        const double hi = g.means.at({model, "linear", full}).at("hc");
        ok &= hi < lo;
        d << model << " hc mean ARI " << fmt("%.4f", lo) << " at proportion " << fmt("%.3f", p_small) << " vs "
          << fmt("%.4f", hi) << " at 1.0; ";
    }
    return {ok, d.str() + "need lower at 1.0"};
}

// 7. Invariants.
Verdict invariants() {
    Rng rng(derive_seed(1, {hash_tag("acceptance"), 7}));
    int failures = 0;
    for (int t = 0; t < 50; ++t) {
        const auto x = random_points(150, 6, rng);
        const auto r = lloyd(x, sample_distinct_points(x, 2 + t % 12, rng));
        for (std::size_t s = 1; s < r.objective_trace.size(); ++s)
            failures += r.objective_trace[s] > r.objective_trace[s - 1] + 1e-9;
    }
    const int lloyd_fail = failures;

    failures = 0;
    for (int t = 0; t < 30; ++t) {
        const auto d = hclust_complete(random_points(40 + t, 6, rng));
        for (std::size_t s = 1; s < d.merges.size(); ++s) failures += d.merges[s].height < d.merges[s - 1].height;
        for (int cap = 1; cap <= 12; ++cap) {
            int k = 0;
            detail::normalize_partition(cut_largest_gap(d, cap), &k);
            failures += k > cap || k < 1;
        }
    }
    const int hc_fail = failures;

    failures = 0;
    for (int t = 0; t < 50; ++t) {
        const auto x = random_points(100, 6, rng);
        const int k0 = 1 + t % 20;
        const auto r = empty_kmeans(x, CenterSet<double>(Matrix<double>(random_points(k0, 6, rng) * 1.5)));
        failures += r.num_clusters() < 1 || r.num_clusters() > k0;
        for (std::size_t s = 1; s < r.objective_trace.size(); ++s)
            failures += r.objective_trace[s] > r.objective_trace[s - 1] + 1e-9;
    }
    const int ek_fail = failures;

    failures = 0;
    for (int t = 0; t < 50; ++t) {
        const int n = 10 + t;
        const auto x = random_points(n, 1 + t % 6, rng);
        const auto init = sample_distinct_points(x, 2 + t % 8, rng);
        const auto a = lloyd(x, init);
        const auto b = lcvqe(x, std::vector<int>(n, -1), ConstraintSet{}, CenterSet<double>(init));
        failures += detail::normalize_partition(a.assignment) != detail::normalize_partition(b.assignment);
    }
    const int lc_fail = failures;

    const bool ok = lloyd_fail + hc_fail + ek_fail + lc_fail == 0;
    return {ok, "violations: lloyd monotone " + std::to_string(lloyd_fail) + ", hc heights/cap " +
                    std::to_string(hc_fail) + ", empty k-means bounds/monotone " + std::to_string(ek_fail) +
                    ", unconstrained lcvqe != lloyd " + std::to_string(lc_fail) + "/50"};
}

// 8. Byte-identical results.csv across runs and worker counts.
Verdict reproducible() {
    auto cfg = parse_config(nlohmann::json::parse(R"({
        "seed": 99, "subset_sizes": [3, 7], "replications": 2, "pseudo_M": 50
    })"));
    const auto dir = fs::temp_directory_path() / "skillscape_acceptance_repro";
    fs::remove_all(dir);
    std::vector<std::string> texts;
    for (const char* workers : {"1", "4", "1"}) {
        setenv("SKILLSCAPE_WORKERS", workers, 1);
        const auto out = dir / (std::string("w") + workers + "_" + std::to_string(texts.size()));
        write_run_outputs(run_experiment(cfg), out);
        std::ifstream in(out / "results.csv", std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        texts.push_back(ss.str());
    }
    unsetenv("SKILLSCAPE_WORKERS");
    const bool ok = !texts[0].empty() && texts[0] == texts[1] && texts[0] == texts[2];
    return {ok, "results.csv (" + std::to_string(texts[0].size()) + " bytes, all hierarchies and methods) " +
                    (ok ? "identical" : "differs") + " across workers=1, workers=4 and a repeat run"};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    auto wanted = [&](int id) { return only.empty() || only.count(id); };

    bool all = true;
    auto check = [&](int id, const std::string& name, const std::function<Verdict()>& fn) {
        if (!wanted(id)) return;
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        all &= v.pass;
        report(id, name, v);
    };

    check(1, "profile counts", profile_counts);
    check(2, "ARI oracle", ari_oracle);
    check(3, "response means", response_means);
    check(4, "zero-noise recovery", zero_noise_recovery);
    if (wanted(5) || wanted(6)) {
        std::optional<GridStats> grid;
        std::string error;
        try {
            grid = run_full_grid();
        } catch (const std::exception& e) {
            error = e.what();
        }
        auto from_grid = [&](const std::function<Verdict(const GridStats&)>& fn) {
            return [&, fn]() -> Verdict {
                if (!grid) return {false, "full grid failed: " + error};
                return fn(*grid);
            };
        };
        check(5, "pseudocenters competitive on full grid", from_grid(pseudocenters_competitive));
        check(6, "hc degrades on linear hierarchy", from_grid(hc_degrades));
    }
    check(7, "algorithmic invariants", invariants);
    check(8, "reproducibility", reproducible);
    return all ? 0 : 1;
}
