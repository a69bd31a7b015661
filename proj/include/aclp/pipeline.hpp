#pragma once

#include <memory>
#include <string>
#include <vector>

#if defined(__unix__) || defined(__APPLE__)
#include <sys/resource.h>
#endif

#include "aclp/datagen.hpp"
#include "aclp/dgcnn.hpp"
#include "aclp/eval.hpp"
#include "aclp/heuristics.hpp"
#include "aclp/port_graph.hpp"
#include "aclp/subgraph.hpp"

namespace aclp {

// Labeled subgraphs for a set of circuits: stack, take every edge as a
// positive, a matched sample of in-circuit non-edges as negatives, and
// extract the enclosing subgraph of each pair.
inline std::vector<LabeledSubgraph> build_labeled_subgraphs(const std::vector<PortGraph>& graphs,
                                                            const std::vector<int>& indices,
                                                            const ClassVocabulary& vocab,
                                                            const ExtractConfig& cfg) {
    std::vector<PortGraph> selected;
    for (int i : indices) selected.push_back(graphs[i]);
    if (selected.empty()) return {};
    const StackedGraph stack = stack_graphs(selected, vocab);
    const SampledPairs sampled = sample_training_pairs(stack, cfg);

    std::vector<LabeledSubgraph> subs;
    subs.reserve(sampled.pairs.size());
    for (const auto& pair : sampled.pairs) {
        LabeledSubgraph sub = extract_enclosing_subgraph(stack, pair.x, pair.y, cfg);
        sub.label = pair.label;
        subs.push_back(std::move(sub));
    }
    return subs;
}

struct SealConfig {
    ExtractConfig extract;
    TrainConfig train;
};

inline TrainResult train_seal(const std::vector<PortGraph>& graphs,
                              const std::vector<int>& train_idx, const std::vector<int>& val_idx,
                              const ClassVocabulary& vocab, const SealConfig& cfg) {
    ExtractConfig train_extract = cfg.extract;
    train_extract.seed = derive_seed(cfg.extract.seed, 1);
    ExtractConfig val_extract = cfg.extract;
    val_extract.seed = derive_seed(cfg.extract.seed, 2);

    const auto train_subs = build_labeled_subgraphs(graphs, train_idx, vocab, train_extract);
    const auto val_subs = build_labeled_subgraphs(graphs, val_idx, vocab, val_extract);
    TrainResult result = train(train_subs, val_subs, cfg.train);
    result.params.vocab_names = vocab.names();
    return result;
}

// Scores a pair by extracting its enclosing subgraph from the (already
// edge-masked) graph and running the trained classifier.
inline ScorerFn make_seal_scorer(std::shared_ptr<const ModelParams> model,
                                 const ClassVocabulary& vocab, ExtractConfig extract) {
    extract.max_label_classes = model->max_label_classes;
    return [model, vocab, extract](const PortGraph& graph, int u, int v) {
        const StackedGraph stack = stack_graphs({graph}, vocab);
        const LabeledSubgraph sub = extract_enclosing_subgraph(stack, u, v, extract);
        return forward(*model, sub);
    };
}

inline ScorerFn make_heuristic_scorer(Heuristic method, HeuristicParams params = {}) {
    return [method, params](const PortGraph& graph, int u, int v) {
        return heuristic_score(method, graph, u, v, params);
    };
}

// Mean and std pooled over every (fold, repetition) record.
inline EvalReport combine_reports(const std::vector<EvalReport>& reports) {
    EvalReport combined;
    std::vector<double> accs, aucs, times;
    std::string fp;
    for (const auto& r : reports) {
        for (const auto& rec : r.per_rep) {
            combined.per_rep.push_back(rec);
            accs.push_back(rec.accuracy);
            aucs.push_back(rec.auc);
            times.push_back(rec.inference_time_s);
        }
        combined.accuracy_rule = r.accuracy_rule;
        fp += r.config_fingerprint + "|";
    }
    combined.repetitions = static_cast<int>(combined.per_rep.size());
    combined.accuracy_mean = mean_of(accs);
    combined.accuracy_std = stddev_of(accs);
    combined.auc_mean = mean_of(aucs);
    combined.auc_std = stddev_of(aucs);
    combined.avg_inference_time_s = mean_of(times);
    combined.config_fingerprint = fnv1a_hex(fp);
    return combined;
}

inline long long peak_rss_kb() {
#if defined(__unix__) || defined(__APPLE__)
    struct rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    return static_cast<long long>(usage.ru_maxrss);
#else
    return 0;
#endif
}

struct BenchConfig {
    std::vector<int> sizes = {25, 50, 100, 250}; // circuits per rung
    GenConfig gen = GenConfig::default_profile();
    ExtractConfig extract;
    int repeats = 3; // per rung, median wall time
    bool synthetic_timer = false;
    std::uint64_t seed = 42;
};

// Inference-time ladder for the full pipeline: per rung, one
// vertex-removal query per graph, timing subgraph extraction, encoding
// and classifier inference. The synthetic timer replaces the clock with
// time proportional to the edge count (a fixture for the fit itself).
inline ScalingReport run_scaling_study(std::shared_ptr<const ModelParams> model,
                                       const BenchConfig& cfg) {
    const ClassVocabulary vocab = cfg.gen.vocabulary();
    const ScorerFn scorer = make_seal_scorer(model, vocab, cfg.extract);

    std::vector<std::function<ScalePoint()>> ladder;
    for (std::size_t rung = 0; rung < cfg.sizes.size(); ++rung) {
        const int size = cfg.sizes[rung];
        ladder.push_back([&, size, rung]() {
            GenConfig gen = cfg.gen;
            gen.seed = derive_seed(cfg.seed, 100 + rung);
            const auto netlists = generate_dataset(gen, size);
            std::vector<PortGraph> graphs;
            for (const auto& n : netlists) graphs.push_back(build_port_graph(n, vocab));

            long long total_edges = 0;
            for (const auto& g : graphs) total_edges += g.edge_count();

            ScalePoint point;
            point.total_edges = total_edges;
            if (cfg.synthetic_timer) {
                point.time_s = static_cast<double>(total_edges) * 1e-6;
            } else {
                std::vector<double> runs;
                for (int rep = 0; rep < cfg.repeats; ++rep) {
                    double seconds = 0.0;
                    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
                        const auto q = detail::run_query(
                            scorer, graphs[gi],
                            derive_seed(cfg.seed, rung * 1000 + gi, rep));
                        seconds += q.seconds;
                    }
                    runs.push_back(seconds);
                }
                point.time_s = median_of(runs);
            }
            point.ram_peak_kb = peak_rss_kb();
            return point;
        });
    }
    return scaling_benchmark(ladder);
}

} // namespace aclp
