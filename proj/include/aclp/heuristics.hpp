#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aclp/matrix.hpp"
#include "aclp/port_graph.hpp"

namespace aclp {

enum class Heuristic { cn, jaccard, pa, aa, ra, katz, pagerank, simrank };

inline const char* heuristic_name(Heuristic h) {
    switch (h) {
    case Heuristic::cn: return "cn";
    case Heuristic::jaccard: return "jaccard";
    case Heuristic::pa: return "pa";
    case Heuristic::aa: return "aa";
    case Heuristic::ra: return "ra";
    case Heuristic::katz: return "katz";
    case Heuristic::pagerank: return "pagerank";
    case Heuristic::simrank: return "simrank";
    }
    return "?";
}

inline std::optional<Heuristic> heuristic_from_name(const std::string& name) {
    for (Heuristic h : {Heuristic::cn, Heuristic::jaccard, Heuristic::pa, Heuristic::aa,
                        Heuristic::ra, Heuristic::katz, Heuristic::pagerank, Heuristic::simrank})
        if (name == heuristic_name(h)) return h;
    return std::nullopt;
}

struct HeuristicParams {
    double katz_beta = 0.005;    // must satisfy beta * spectral_radius(A) < 1
    double pagerank_alpha = 0.85;
    double simrank_c = 0.8;
    int simrank_iters = 20;
    double tolerance = 1e-9;
};

namespace detail {

inline std::vector<std::set<int>> neighbor_sets(const std::vector<std::vector<int>>& adj) {
    std::vector<std::set<int>> n(adj.size());
    for (std::size_t u = 0; u < adj.size(); ++u) n[u] = std::set<int>(adj[u].begin(), adj[u].end());
    return n;
}

inline Mat adjacency_matrix(const std::vector<std::vector<int>>& adj) {
    Mat a(static_cast<int>(adj.size()), static_cast<int>(adj.size()));
    for (std::size_t u = 0; u < adj.size(); ++u)
        for (int v : adj[u]) a.at(static_cast<int>(u), v) = 1.0;
    return a;
}

// ((I - beta*A)^-1 - I)[x][y]
inline double katz_score(const std::vector<std::vector<int>>& adj, int x, int y,
                         const HeuristicParams& p) {
    const Mat a = adjacency_matrix(adj);
    const double rho = spectral_radius_estimate(a);
    if (p.katz_beta * rho >= 1.0)
        throw std::runtime_error("katz: beta " + std::to_string(p.katz_beta) +
                                 " diverges at spectral radius " + std::to_string(rho));
    const int n = a.rows;
    Mat system(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            system.at(i, j) = (i == j ? 1.0 : 0.0) - p.katz_beta * a.at(i, j);
    const Mat inv = inverse(system);
    return inv.at(x, y) - (x == y ? 1.0 : 0.0);
}

// Stationary vector of the restart walk rooted at `root`: q = (1-alpha) e_root
// + alpha * W q, where W spreads each node's mass over its neighbors and the
// mass of degree-zero nodes returns to the root. Sums to 1.
inline std::vector<double> rooted_pagerank(const std::vector<std::vector<int>>& adj, int root,
                                           const HeuristicParams& p) {
    const std::size_t n = adj.size();
    std::vector<double> q(n, 0.0), next(n);
    q[root] = 1.0;
    for (int it = 0; it < 100000; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        double dangling = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            if (adj[u].empty()) {
                dangling += q[u];
                continue;
            }
            const double share = q[u] / static_cast<double>(adj[u].size());
            for (int v : adj[u]) next[v] += share;
        }
        next[root] += dangling;
        double delta = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            const double value =
                (1.0 - p.pagerank_alpha) * (u == static_cast<std::size_t>(root) ? 1.0 : 0.0) +
                p.pagerank_alpha * next[u];
            delta += std::abs(value - q[u]);
            next[u] = value;
        }
        q.swap(next);
        if (delta < p.tolerance) break;
    }
    return q;
}

// Fixed-point iteration from S = I, exactly `iters` rounds.
inline Mat simrank_matrix(const std::vector<std::vector<int>>& adj, double c, int iters) {
    const int n = static_cast<int>(adj.size());
    Mat s = Mat::identity(n);
    for (int it = 0; it < iters; ++it) {
        Mat next = Mat::identity(n);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                if (adj[a].empty() || adj[b].empty()) continue;
                double sum = 0.0;
                for (int u : adj[a])
                    for (int v : adj[b]) sum += s.at(u, v);
                const double value =
                    c * sum / (static_cast<double>(adj[a].size()) * adj[b].size());
                next.at(a, b) = value;
                next.at(b, a) = value;
            }
        s = std::move(next);
    }
    return s;
}

inline double score_on_adjacency(Heuristic method, const std::vector<std::vector<int>>& adj,
                                 int x, int y, const HeuristicParams& p) {
    const auto neigh = neighbor_sets(adj);
    auto common = [&]() {
        std::vector<int> out;
        std::set_intersection(neigh[x].begin(), neigh[x].end(), neigh[y].begin(), neigh[y].end(),
                              std::back_inserter(out));
        return out;
    };
    switch (method) {
    case Heuristic::cn:
        return static_cast<double>(common().size());
    case Heuristic::jaccard: {
        std::vector<int> uni;
        std::set_union(neigh[x].begin(), neigh[x].end(), neigh[y].begin(), neigh[y].end(),
                       std::back_inserter(uni));
        if (uni.empty()) return 0.0;
        return static_cast<double>(common().size()) / static_cast<double>(uni.size());
    }
    case Heuristic::pa:
        return static_cast<double>(neigh[x].size()) * static_cast<double>(neigh[y].size());
    case Heuristic::aa: {
        double sum = 0.0;
        for (int z : common())
            if (neigh[z].size() > 1) sum += 1.0 / std::log(static_cast<double>(neigh[z].size()));
        return sum;
    }
    case Heuristic::ra: {
        double sum = 0.0;
        for (int z : common()) sum += 1.0 / static_cast<double>(neigh[z].size());
        return sum;
    }
    case Heuristic::katz:
        return katz_score(adj, x, y, p);
    case Heuristic::pagerank: {
        const auto qx = rooted_pagerank(adj, x, p);
        const auto qy = rooted_pagerank(adj, y, p);
        return qx[y] + qy[x];
    }
    case Heuristic::simrank:
        return simrank_matrix(adj, p.simrank_c, p.simrank_iters).at(x, y);
    }
    return 0.0;
}

} // namespace detail

inline double heuristic_score(Heuristic method, const PortGraph& g, int x, int y,
                              const HeuristicParams& p = {}) {
    if (x == y) throw std::invalid_argument("heuristic_score: x == y");
    if (x < 0 || y < 0 || x >= g.node_count() || y >= g.node_count())
        throw std::invalid_argument("heuristic_score: node out of range");
    return detail::score_on_adjacency(method, g.adjacency(), x, y, p);
}

struct ScoredCandidate {
    int node = 0;
    double score = 0.0;
};

// Candidates sorted by score descending; ties fall back to ascending id.
inline std::vector<ScoredCandidate> rank_candidates(Heuristic method, const PortGraph& g,
                                                    int query, const std::vector<int>& candidates,
                                                    const HeuristicParams& p = {}) {
    if (candidates.empty()) throw std::invalid_argument("rank_candidates: no candidates");
    std::vector<ScoredCandidate> out;
    out.reserve(candidates.size());
    for (int c : candidates) out.push_back({c, heuristic_score(method, g, query, c, p)});
    std::stable_sort(out.begin(), out.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.node < b.node;
    });
    return out;
}

} // namespace aclp
