#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "aclp/eval.hpp"
#include "aclp/rng.hpp"

#include "oracles.hpp"

using namespace aclp;

namespace {

PortGraph path_graph(int n, const std::string& name) {
    PortGraph g;
    for (int i = 0; i < n; ++i) g.nodes.push_back({i, name, "p", 0});
    for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
    g.provenance = name;
    return g;
}

std::vector<PortGraph> path_family(int count) {
    std::vector<PortGraph> graphs;
    for (int i = 0; i < count; ++i)
        graphs.push_back(path_graph(7 + (i % 3), "g" + std::to_string(i)));
    return graphs;
}

// answers from the unmasked adjacency, keyed by provenance
ScorerFn oracle_scorer(const std::vector<PortGraph>& graphs, double flip = 1.0) {
    auto truth = std::make_shared<std::map<std::string, std::set<std::pair<int, int>>>>();
    for (const auto& g : graphs) {
        auto& edges = (*truth)[g.provenance];
        for (const auto& e : g.edges) edges.insert(e);
    }
    return [truth, flip](const PortGraph& g, int u, int v) {
        const auto& edges = truth->at(g.provenance);
        const bool linked = edges.count({std::min(u, v), std::max(u, v)}) > 0;
        // deterministic jitter keeps scores tie-free
        const double jitter = 1e-6 * static_cast<double>((u * 131 + v * 17) % 97);
        return flip * ((linked ? 1.0 : 0.0) + jitter);
    };
}

} // namespace

TEST_CASE("conventional split sizes follow the floor rule") {
    const Splits s = make_splits(10, SplitPlan{});
    CHECK(s.train.size() == 7);
    CHECK(s.test.size() == 2);
    CHECK(s.val.size() == 1);

    const Splits big = make_splits(137, SplitPlan{});
    CHECK(big.train.size() == 95); // floor(0.7 * 137)
    CHECK(big.test.size() == 27);  // floor(0.2 * 137)
    CHECK(big.val.size() == 137 - 95 - 27);
}

TEST_CASE("splits partition the input exactly") {
    SplitPlan plan;
    plan.seed = 3;
    const Splits s = make_splits(23, plan);
    std::set<int> all;
    for (int i : s.train) all.insert(i);
    for (int i : s.val) all.insert(i);
    for (int i : s.test) all.insert(i);
    CHECK(all.size() == 23);
    CHECK(*all.begin() == 0);
    CHECK(*all.rbegin() == 22);
}

TEST_CASE("five folds are disjoint and cover every graph") {
    std::set<int> covered;
    for (int fold = 0; fold < 5; ++fold) {
        SplitPlan plan;
        plan.mode = SplitMode::kfold5;
        plan.fold_index = fold;
        plan.seed = 11;
        const Splits s = make_splits(10, plan);
        CHECK(s.test.size() == 2);
        for (int i : s.test) {
            CHECK(!covered.count(i));
            covered.insert(i);
        }
        std::set<int> fold_all(s.train.begin(), s.train.end());
        fold_all.insert(s.val.begin(), s.val.end());
        fold_all.insert(s.test.begin(), s.test.end());
        CHECK(fold_all.size() == 10);
    }
    CHECK(covered.size() == 10);
}

TEST_CASE("the same seed reproduces the same partition") {
    SplitPlan plan;
    plan.seed = 77;
    const Splits a = make_splits(40, plan);
    const Splits b = make_splits(40, plan);
    CHECK(a.train == b.train);
    CHECK(a.val == b.val);
    CHECK(a.test == b.test);
    CHECK_THROWS(make_splits(9, plan)); // too few graphs
}

TEST_CASE("roc auc basics") {
    CHECK(roc_auc({0.9, 0.1}, {1, 0}) == doctest::Approx(1.0));
    CHECK(roc_auc({0.5, 0.5, 0.5, 0.5}, {1, 0, 1, 0}) == doctest::Approx(0.5));
    CHECK(roc_auc({0.8, 0.6, 0.6, 0.2}, {1, 1, 0, 0}) == doctest::Approx(0.875));
    CHECK_THROWS(roc_auc({0.1, 0.2}, {1, 1}));
    CHECK_THROWS(roc_auc({0.1}, {1, 0}));
}

TEST_CASE("roc auc equals the pairwise oracle on random inputs") {
    Rng rng(8);
    for (int round = 0; round < 50; ++round) {
        const int n = 2 + static_cast<int>(rng.below(99));
        std::vector<double> scores;
        std::vector<int> labels;
        labels.push_back(1);
        labels.push_back(0);
        for (int i = 2; i < n; ++i) labels.push_back(static_cast<int>(rng.below(2)));
        for (int i = 0; i < n; ++i)
            scores.push_back(rng.below(4) ? rng.real01() : 0.25 * rng.below(5)); // force ties
        const double got = roc_auc(scores, labels);
        const double want = oracle::pairwise_auc(scores, labels);
        CHECK(std::abs(got - want) < 1e-12);
    }
}

TEST_CASE("a perfect scorer reaches accuracy and auc one") {
    const auto graphs = path_family(6);
    EvalOptions opt;
    opt.repetitions = 5;
    opt.seed = 2;
    const EvalReport report = evaluate(oracle_scorer(graphs), graphs, opt);
    CHECK(report.accuracy_mean == doctest::Approx(1.0));
    CHECK(report.auc_mean == doctest::Approx(1.0));
    CHECK(report.accuracy_std == doctest::Approx(0.0));
    CHECK(report.repetitions == 5);
    CHECK(report.accuracy_rule == "balanced-median");
}

TEST_CASE("a constant scorer sits at auc one half") {
    const auto graphs = path_family(5);
    EvalOptions opt;
    opt.repetitions = 3;
    const EvalReport report =
        evaluate([](const PortGraph&, int, int) { return 1.0; }, graphs, opt);
    CHECK(report.auc_mean == doctest::Approx(0.5));
}

TEST_CASE("reports are reproducible and thread count changes nothing") {
    const auto graphs = path_family(6);
    EvalOptions opt;
    opt.repetitions = 4;
    opt.seed = 31;
    const EvalReport a = evaluate(oracle_scorer(graphs), graphs, opt);
    const EvalReport b = evaluate(oracle_scorer(graphs), graphs, opt);
    EvalOptions threaded = opt;
    threaded.threads = 4;
    const EvalReport c = evaluate(oracle_scorer(graphs), graphs, threaded);
    CHECK(a.config_fingerprint == b.config_fingerprint);
    CHECK(a.accuracy_mean == b.accuracy_mean);
    CHECK(a.auc_mean == b.auc_mean);
    CHECK(a.accuracy_mean == c.accuracy_mean);
    CHECK(a.auc_mean == c.auc_mean);
    for (std::size_t i = 0; i < a.per_rep.size(); ++i) {
        CHECK(a.per_rep[i].accuracy == c.per_rep[i].accuracy);
        CHECK(a.per_rep[i].auc == c.per_rep[i].auc);
    }
}

TEST_CASE("negating a tie-free scorer flips accuracy around one") {
    const auto graphs = path_family(7);
    EvalOptions opt;
    opt.repetitions = 3;
    opt.seed = 5;
    const EvalReport plus = evaluate(oracle_scorer(graphs, 1.0), graphs, opt);
    const EvalReport minus = evaluate(oracle_scorer(graphs, -1.0), graphs, opt);
    for (std::size_t i = 0; i < plus.per_rep.size(); ++i)
        CHECK(plus.per_rep[i].accuracy + minus.per_rep[i].accuracy == doctest::Approx(1.0));
}

TEST_CASE("query vertices with no neighbors are resampled") {
    // a star plus isolated nodes: queries must always land on the star,
    // and enough non-neighbors exist to balance even the center query
    PortGraph g;
    for (int i = 0; i < 9; ++i) g.nodes.push_back({i, "s", "p", 0});
    for (int i = 1; i < 5; ++i) g.edges.emplace_back(0, i); // 5..8 stay isolated
    g.provenance = "star";
    EvalOptions opt;
    opt.repetitions = 8;
    opt.seed = 13;
    const EvalReport report = evaluate(oracle_scorer({g}), {g}, opt);
    CHECK(report.per_rep.size() == 8); // every repetition produced scores
    CHECK(report.accuracy_mean == doctest::Approx(1.0));
    CHECK(report.auc_mean == doctest::Approx(1.0));
}

TEST_CASE("probabilistic scorers threshold at one half") {
    const auto graphs = path_family(4);
    EvalOptions opt;
    opt.repetitions = 2;
    opt.probabilistic = true;
    // probabilities: links 0.9, non-links 0.4 -> all correct at 0.5
    auto truth = oracle_scorer(graphs);
    const EvalReport report = evaluate(
        [truth](const PortGraph& g, int u, int v) { return truth(g, u, v) > 0.5 ? 0.9 : 0.4; },
        graphs, opt);
    CHECK(report.accuracy_rule == "threshold-0.5");
    CHECK(report.accuracy_mean == doctest::Approx(1.0));
}

TEST_CASE("log-log slope fits") {
    // exactly linear timings
    std::vector<std::pair<double, double>> linear;
    for (double e : {100.0, 200.0, 400.0, 800.0, 1600.0}) linear.emplace_back(e, 2.5e-6 * e);
    CHECK(std::abs(fit_loglog_slope(linear) - 1.0) < 1e-6);

    // constant timings
    std::vector<std::pair<double, double>> flat;
    for (double e : {100.0, 200.0, 400.0, 800.0}) flat.emplace_back(e, 0.125);
    CHECK(std::abs(fit_loglog_slope(flat)) < 1e-12);

    // quadratic grows with slope two
    std::vector<std::pair<double, double>> quad;
    for (double e : {100.0, 200.0, 400.0, 800.0}) quad.emplace_back(e, 1e-9 * e * e);
    CHECK(fit_loglog_slope(quad) == doctest::Approx(2.0));

    CHECK_THROWS(fit_loglog_slope({{100.0, 1.0}}));
    CHECK_THROWS(fit_loglog_slope({{100.0, 0.0}, {200.0, 1.0}}));
}

TEST_CASE("scaling benchmark enforces the ladder span and fits the stub points") {
    auto rung = [](long long edges, double seconds) {
        return std::function<ScalePoint()>([edges, seconds]() {
            ScalePoint p;
            p.total_edges = edges;
            p.time_s = seconds;
            return p;
        });
    };

    const ScalingReport linear = scaling_benchmark(
        {rung(100, 1e-4), rung(200, 2e-4), rung(400, 4e-4), rung(800, 8e-4)});
    CHECK(std::abs(linear.fitted_slope - 1.0) < 1e-6);
    REQUIRE(linear.points.size() == 4);
    CHECK(linear.points.front().vram == "n/a");

    const ScalingReport flat = scaling_benchmark(
        {rung(100, 5e-3), rung(200, 5e-3), rung(400, 5e-3), rung(800, 5e-3)});
    CHECK(std::abs(flat.fitted_slope) < 1e-12);

    CHECK_THROWS(scaling_benchmark({rung(100, 1.0), rung(110, 1.0), rung(120, 1.0)}));
    CHECK_THROWS(scaling_benchmark(
        {rung(100, 1.0), rung(150, 1.0), rung(300, 1.0), rung(700, 1.0)})); // spans < 8x
}
