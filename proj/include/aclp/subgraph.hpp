#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "aclp/port_graph.hpp"
#include "aclp/rng.hpp"

namespace aclp {

struct ExtractConfig {
    int h = 2;                  // hops around each target
    int max_label_classes = 32; // one-hot width for DRNL labels
    double negative_ratio = 1.0;
    std::uint64_t seed = 0;
};

// h-hop enclosing subgraph of a target node pair. Node 0 and 1 are the
// targets; the target edge itself is never part of the local adjacency.
struct LabeledSubgraph {
    std::vector<int> nodes; // original (stacked) ids; [0]=x, [1]=y, rest ascending
    std::vector<std::vector<int>> adj;
    std::pair<int, int> target_pair{0, 1}; // local indices
    std::vector<int> drnl;
    std::vector<int> type_codes; // local copy
    int label = 0;               // 1 = link exists
    int feature_width = 0;       // max_label_classes + k
    int max_label_classes = 0;
    int k = 0;

    int size() const { return static_cast<int>(nodes.size()); }

    // one-hot(min(drnl, max_label_classes-1)) followed by one-hot(type)
    std::vector<std::vector<double>> features() const {
        std::vector<std::vector<double>> rows(nodes.size(),
                                              std::vector<double>(feature_width, 0.0));
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            int bucket = std::min(drnl[i], max_label_classes - 1);
            rows[i][bucket] = 1.0;
            rows[i][max_label_classes + type_codes[i]] = 1.0;
        }
        return rows;
    }
};

namespace detail {

inline constexpr int kUnreached = std::numeric_limits<int>::max();

// BFS distances on `adj`, skipping `banned` entirely (-1 for none).
inline std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int source,
                                      int banned) {
    std::vector<int> dist(adj.size(), kUnreached);
    if (source == banned) return dist;
    std::queue<int> queue;
    dist[source] = 0;
    queue.push(source);
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop();
        for (int v : adj[u]) {
            if (v == banned || dist[v] != kUnreached) continue;
            dist[v] = dist[u] + 1;
            queue.push(v);
        }
    }
    return dist;
}

} // namespace detail

// Closed-form double-radius labels for an extracted subgraph: for node i,
// dx = dist(i, x) with y deleted, dy = dist(i, y) with x deleted,
// d = dx + dy, label = 1 + min(dx, dy) + (d/2)*((d/2) + (d%2) - 1) with
// integer division. Targets get 1, nodes with an infinite distance get 0.
inline std::vector<int> drnl_label(const LabeledSubgraph& sub) {
    const auto [x, y] = sub.target_pair;
    const auto dist_x = detail::bfs_distances(sub.adj, x, y);
    const auto dist_y = detail::bfs_distances(sub.adj, y, x);

    std::vector<int> labels(sub.adj.size(), 0);
    for (std::size_t i = 0; i < sub.adj.size(); ++i) {
        if (static_cast<int>(i) == x || static_cast<int>(i) == y) {
            labels[i] = 1;
            continue;
        }
        const int dx = dist_x[i], dy = dist_y[i];
        if (dx == detail::kUnreached || dy == detail::kUnreached) {
            labels[i] = 0;
            continue;
        }
        const int d = dx + dy;
        labels[i] = 1 + std::min(dx, dy) + (d / 2) * ((d / 2) + (d % 2) - 1);
    }
    return labels;
}

// Union of the h-hop neighborhoods of x and y, computed with the edge
// (x, y) removed if present; induced edges minus (x, y); targets first,
// then remaining nodes by ascending original id.
inline LabeledSubgraph extract_enclosing_subgraph(const StackedGraph& g, int x, int y,
                                                  const ExtractConfig& cfg) {
    if (cfg.h < 1) throw std::invalid_argument("extract_enclosing_subgraph: h must be >= 1");
    if (cfg.max_label_classes < 2)
        throw std::invalid_argument("extract_enclosing_subgraph: label width must be >= 2");
    if (x == y) throw std::invalid_argument("extract_enclosing_subgraph: x == y");
    if (g.member_of(x) != g.member_of(y))
        throw std::invalid_argument("cross-circuit pair: nodes " + std::to_string(x) + " and " +
                                    std::to_string(y) + " are in different member blocks");

    auto hop_set = [&](int source) {
        std::vector<int> dist(g.node_count(), detail::kUnreached);
        std::queue<int> queue;
        dist[source] = 0;
        queue.push(source);
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop();
            if (dist[u] == cfg.h) continue;
            for (int v : g.adj[u]) {
                if ((u == x && v == y) || (u == y && v == x)) continue;
                if (dist[v] != detail::kUnreached) continue;
                dist[v] = dist[u] + 1;
                queue.push(v);
            }
        }
        return dist;
    };

    const auto dx = hop_set(x);
    const auto dy = hop_set(y);

    std::vector<int> members;
    for (int i = 0; i < g.node_count(); ++i) {
        if (i == x || i == y) continue;
        if (dx[i] != detail::kUnreached || dy[i] != detail::kUnreached) members.push_back(i);
    }

    LabeledSubgraph sub;
    sub.max_label_classes = cfg.max_label_classes;
    sub.k = g.k;
    sub.feature_width = cfg.max_label_classes + g.k;
    sub.nodes.push_back(x);
    sub.nodes.push_back(y);
    for (int m : members) sub.nodes.push_back(m);

    std::vector<int> local(g.node_count(), -1);
    for (std::size_t i = 0; i < sub.nodes.size(); ++i) local[sub.nodes[i]] = static_cast<int>(i);

    sub.adj.resize(sub.nodes.size());
    for (std::size_t i = 0; i < sub.nodes.size(); ++i) {
        const int orig = sub.nodes[i];
        for (int v : g.adj[orig]) {
            if ((orig == x && v == y) || (orig == y && v == x)) continue;
            const int lv = local[v];
            if (lv >= 0 && lv > static_cast<int>(i)) {
                sub.adj[i].push_back(lv);
                sub.adj[lv].push_back(static_cast<int>(i));
            }
        }
    }

    sub.type_codes.reserve(sub.nodes.size());
    for (int orig : sub.nodes) sub.type_codes.push_back(g.type_codes[orig]);

    sub.drnl = drnl_label(sub);
    return sub;
}

struct TrainingPair {
    int x = 0;
    int y = 0;
    int label = 0;
};

struct SampledPairs {
    std::vector<TrainingPair> pairs; // positives first, then negatives
    std::vector<std::string> warnings;
};

// Positives are every edge of the stack; negatives are non-adjacent pairs
// drawn uniformly without replacement within a member block. A clique
// block simply contributes no negatives.
inline SampledPairs sample_training_pairs(const StackedGraph& g, const ExtractConfig& cfg) {
    if (g.node_count() == 0)
        throw std::invalid_argument("sample_training_pairs: empty graph");

    SampledPairs out;
    for (const auto& [u, v] : g.edges) out.pairs.push_back({u, v, 1});

    std::vector<std::pair<int, int>> candidates;
    for (const auto& m : g.member_offsets) {
        std::size_t before = candidates.size();
        for (int u = m.offset; u < m.offset + m.count; ++u)
            for (int v = u + 1; v < m.offset + m.count; ++v)
                if (!g.has_edge(u, v)) candidates.emplace_back(u, v);
        if (candidates.size() == before && m.count > 1)
            out.warnings.push_back("member " + std::to_string(m.graph_index) +
                                   " is a clique; it contributes no negatives");
    }

    const std::size_t want = static_cast<std::size_t>(
        std::ceil(cfg.negative_ratio * static_cast<double>(g.edges.size())));
    Rng rng(cfg.seed);
    rng.shuffle(candidates);
    const std::size_t take = std::min(want, candidates.size());
    for (std::size_t i = 0; i < take; ++i)
        out.pairs.push_back({candidates[i].first, candidates[i].second, 0});
    return out;
}

} // namespace aclp
