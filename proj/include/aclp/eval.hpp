#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "aclp/metrics.hpp"
#include "aclp/port_graph.hpp"
#include "aclp/rng.hpp"

namespace aclp {

enum class SplitMode { conventional, kfold5 };

struct SplitPlan {
    SplitMode mode = SplitMode::conventional;
    double train_ratio = 0.70;
    double test_ratio = 0.20;
    double val_ratio = 0.10;
    int fold_index = 0; // kfold5 only, in [0, 5)
    std::uint64_t seed = 0;
};

struct Splits {
    std::vector<int> train, val, test; // graph indices
};

// Graph-level partition from a seeded shuffle. Conventional: train gets
// floor(0.7 n), test floor(0.2 n), the remainder is validation. kfold5:
// the five folds are disjoint test chunks covering every graph; the
// validation share comes out of the rest.
inline Splits make_splits(int n_graphs, const SplitPlan& plan) {
    if (n_graphs < 10) throw std::invalid_argument("make_splits: need at least 10 graphs");

    std::vector<int> order(n_graphs);
    for (int i = 0; i < n_graphs; ++i) order[i] = i;
    Rng rng(plan.seed);
    rng.shuffle(order);

    Splits s;
    if (plan.mode == SplitMode::conventional) {
        const int n_train = static_cast<int>(std::floor(plan.train_ratio * n_graphs));
        const int n_test = static_cast<int>(std::floor(plan.test_ratio * n_graphs));
        s.train.assign(order.begin(), order.begin() + n_train);
        s.test.assign(order.begin() + n_train, order.begin() + n_train + n_test);
        s.val.assign(order.begin() + n_train + n_test, order.end());
        return s;
    }

    if (plan.fold_index < 0 || plan.fold_index >= 5)
        throw std::invalid_argument("make_splits: fold index out of range");
    const auto bound = [n_graphs](int f) { return f * n_graphs / 5; };
    const int lo = bound(plan.fold_index), hi = bound(plan.fold_index + 1);
    s.test.assign(order.begin() + lo, order.begin() + hi);
    std::vector<int> rest;
    rest.insert(rest.end(), order.begin(), order.begin() + lo);
    rest.insert(rest.end(), order.begin() + hi, order.end());
    const int n_val = static_cast<int>(std::floor(plan.val_ratio * n_graphs));
    s.val.assign(rest.begin(), rest.begin() + n_val);
    s.train.assign(rest.begin() + n_val, rest.end());
    return s;
}

// Scores a candidate pair (u, v) in a graph that no longer contains the
// scored edge. Probabilistic scorers return values in [0, 1].
using ScorerFn = std::function<double(const PortGraph&, int, int)>;

struct RepRecord {
    double accuracy = 0.0;
    double auc = 0.0;
    double inference_time_s = 0.0; // total scoring time / graphs
};

struct EvalReport {
    double accuracy_mean = 0.0;
    double accuracy_std = 0.0;
    double auc_mean = 0.0;
    double auc_std = 0.0;
    int repetitions = 0;
    std::vector<RepRecord> per_rep;
    double avg_inference_time_s = 0.0;
    std::string accuracy_rule; // "threshold-0.5" or "balanced-median"
    std::string config_fingerprint;
};

struct EvalOptions {
    int repetitions = 10;
    std::uint64_t seed = 0;
    bool probabilistic = false; // accuracy at 0.5 instead of the balanced median
    int threads = 1;
    std::string scorer_name;
};

namespace detail {

struct QueryResult {
    std::vector<double> scores;
    std::vector<int> labels;
    double seconds = 0.0;
};

// One vertex-removal query: pick a vertex with at least one neighbor,
// score its true neighbors against an equal count of sampled
// non-neighbors, each pair evaluated on the graph without that edge.
inline QueryResult run_query(const ScorerFn& scorer, const PortGraph& graph,
                             std::uint64_t query_seed) {
    QueryResult out;
    const int n = graph.node_count();
    if (n == 0) return out;
    Rng rng(query_seed);
    const auto adj = graph.adjacency();

    int u = -1;
    for (int attempt = 0; attempt < n; ++attempt) {
        int candidate = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        if (!adj[candidate].empty()) {
            u = candidate;
            break;
        }
    }
    if (u < 0) return out;

    std::vector<int> positives = adj[u];
    std::sort(positives.begin(), positives.end());

    std::vector<int> non_neighbors;
    for (int v = 0; v < n; ++v) {
        if (v == u) continue;
        if (std::find(positives.begin(), positives.end(), v) == positives.end())
            non_neighbors.push_back(v);
    }
    rng.shuffle(non_neighbors);
    const std::size_t n_neg = std::min(non_neighbors.size(), positives.size());

    const auto t0 = std::chrono::steady_clock::now();
    for (int v : positives) {
        const PortGraph masked = graph.without_edge(u, v);
        out.scores.push_back(scorer(masked, u, v));
        out.labels.push_back(1);
    }
    for (std::size_t i = 0; i < n_neg; ++i) {
        out.scores.push_back(scorer(graph, u, non_neighbors[i]));
        out.labels.push_back(0);
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

} // namespace detail

// The vertex-removal protocol: per repetition every test graph gets one
// seeded query; accuracy uses 0.5 for probabilities and the balanced-set
// median for unbounded scores; ROC-AUC pools every scored pair of the
// repetition. Reported mean and std are over repetitions. Per-query seeds
// are derived from (seed, repetition, graph), so thread count and
// iteration order cannot change any score.
inline EvalReport evaluate(const ScorerFn& scorer, const std::vector<PortGraph>& test_graphs,
                           const EvalOptions& opt) {
    if (test_graphs.empty()) throw std::invalid_argument("evaluate: no test graphs");
    if (opt.repetitions <= 0) throw std::invalid_argument("evaluate: repetitions must be >= 1");

    const int reps = opt.repetitions;
    const int n_graphs = static_cast<int>(test_graphs.size());
    std::vector<detail::QueryResult> results(static_cast<std::size_t>(reps) * n_graphs);

    auto run_task = [&](int task) {
        const int rep = task / n_graphs;
        const int gi = task % n_graphs;
        results[task] = detail::run_query(scorer, test_graphs[gi],
                                          derive_seed(opt.seed, static_cast<std::uint64_t>(rep),
                                                      static_cast<std::uint64_t>(gi)));
    };

    const int total = reps * n_graphs;
    if (opt.threads <= 1) {
        for (int task = 0; task < total; ++task) run_task(task);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < opt.threads; ++t)
            pool.emplace_back([&]() {
                for (int task = next.fetch_add(1); task < total; task = next.fetch_add(1))
                    run_task(task);
            });
        for (auto& th : pool) th.join();
    }

    EvalReport report;
    report.repetitions = reps;
    report.accuracy_rule = opt.probabilistic ? "threshold-0.5" : "balanced-median";

    std::vector<double> accs, aucs, times;
    for (int rep = 0; rep < reps; ++rep) {
        std::vector<double> scores;
        std::vector<int> labels;
        double seconds = 0.0;
        for (int gi = 0; gi < n_graphs; ++gi) {
            const auto& q = results[static_cast<std::size_t>(rep) * n_graphs + gi];
            scores.insert(scores.end(), q.scores.begin(), q.scores.end());
            labels.insert(labels.end(), q.labels.begin(), q.labels.end());
            seconds += q.seconds;
        }
        if (scores.empty()) continue;

        double threshold = 0.5;
        if (!opt.probabilistic) threshold = median_of(scores);
        int correct = 0;
        for (std::size_t i = 0; i < scores.size(); ++i)
            if ((scores[i] > threshold ? 1 : 0) == labels[i]) ++correct;

        RepRecord rec;
        rec.accuracy = static_cast<double>(correct) / static_cast<double>(scores.size());
        bool has_pos = false, has_neg = false;
        for (int l : labels) (l ? has_pos : has_neg) = true;
        rec.auc = (has_pos && has_neg) ? roc_auc(scores, labels) : 0.5;
        rec.inference_time_s = seconds / static_cast<double>(n_graphs);
        report.per_rep.push_back(rec);
        accs.push_back(rec.accuracy);
        aucs.push_back(rec.auc);
        times.push_back(rec.inference_time_s);
    }

    report.accuracy_mean = mean_of(accs);
    report.accuracy_std = stddev_of(accs);
    report.auc_mean = mean_of(aucs);
    report.auc_std = stddev_of(aucs);
    report.avg_inference_time_s = mean_of(times);

    std::ostringstream fp;
    fp << opt.scorer_name << '|' << reps << '|' << opt.seed << '|' << report.accuracy_rule << '|'
       << n_graphs;
    for (const auto& g : test_graphs) fp << '|' << g.node_count() << ':' << g.edge_count();
    report.config_fingerprint = fnv1a_hex(fp.str());
    return report;
}

// Least-squares slope of log(time) against log(edges).
inline double fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw std::invalid_argument("fit_loglog_slope: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [edges, seconds] : points) {
        if (edges <= 0.0 || seconds <= 0.0)
            throw std::invalid_argument("fit_loglog_slope: values must be positive");
        const double x = std::log(edges), y = std::log(seconds);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(points.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_loglog_slope: degenerate ladder");
    return (n * sxy - sx * sy) / denom;
}

struct ScalePoint {
    long long total_edges = 0;
    double time_s = 0.0;
    long long ram_peak_kb = 0;
    std::string vram = "n/a";
};

struct ScalingReport {
    std::vector<ScalePoint> points;
    double fitted_slope = 0.0;
};

// The ladder must span at least 8x in edge count across >= 4 points; the
// provider yields (total_edges, seconds) per rung.
inline ScalingReport
scaling_benchmark(const std::vector<std::function<ScalePoint()>>& ladder) {
    if (ladder.size() < 4) throw std::invalid_argument("scaling_benchmark: need >= 4 points");
    ScalingReport report;
    std::vector<std::pair<double, double>> pts;
    for (const auto& rung : ladder) {
        ScalePoint p = rung();
        report.points.push_back(p);
        pts.emplace_back(static_cast<double>(p.total_edges), p.time_s);
    }
    long long lo = report.points.front().total_edges, hi = lo;
    for (const auto& p : report.points) {
        lo = std::min(lo, p.total_edges);
        hi = std::max(hi, p.total_edges);
    }
    if (lo <= 0 || hi < 8 * lo)
        throw std::invalid_argument("scaling_benchmark: ladder must span >= 8x in edges");
    report.fitted_slope = fit_loglog_slope(pts);
    return report;
}

} // namespace aclp
