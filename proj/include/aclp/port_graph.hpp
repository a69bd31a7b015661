#pragma once

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aclp/netlist.hpp"

namespace aclp {

// Ordered list of component classes; the index of a label is the integer
// vertex type of every port of a component of that class.
struct ClassVocabulary {
    std::vector<ClassLabel> labels;

    int k() const { return static_cast<int>(labels.size()); }

    int code_of(ClassLabel label) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return static_cast<int>(i);
        return -1;
    }

    // every class in class-table order
    static ClassVocabulary all() {
        ClassVocabulary v;
        for (const auto& ci : class_table()) v.labels.push_back(ci.label);
        return v;
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (ClassLabel l : labels) out.emplace_back(class_name(l));
        return out;
    }

    static ClassVocabulary from_names(const std::vector<std::string>& names) {
        ClassVocabulary v;
        for (const auto& n : names) {
            auto label = class_from_name(n);
            if (!label) throw std::invalid_argument("unknown class label '" + n + "'");
            if (v.code_of(*label) >= 0)
                throw std::invalid_argument("duplicate class label '" + n + "'");
            v.labels.push_back(*label);
        }
        if (v.labels.empty()) throw std::invalid_argument("empty vocabulary");
        return v;
    }
};

struct PortGraphNode {
    int node_id = 0;
    std::string component_id;
    std::string port_name;
    int type_code = 0;
};

// Undirected port-level graph of one circuit: a vertex per component
// port, no self-loops, no duplicate edges.
struct PortGraph {
    std::vector<PortGraphNode> nodes;
    std::vector<std::pair<int, int>> edges; // i < j, sorted
    std::string provenance;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }

    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> adj(nodes.size());
        for (const auto& [u, v] : edges) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        return adj;
    }

    PortGraph without_edge(int u, int v) const {
        PortGraph g = *this;
        std::pair<int, int> key = u < v ? std::make_pair(u, v) : std::make_pair(v, u);
        g.edges.erase(std::remove(g.edges.begin(), g.edges.end(), key), g.edges.end());
        return g;
    }
};

// One vertex per (component, port) in component order then class port
// order. Edges: a clique over each component's own ports plus, per net,
// a clique over every port bound to that net.
inline PortGraph build_port_graph(const Netlist& netlist, const ClassVocabulary& vocab) {
    PortGraph g;
    g.provenance = netlist.title;

    std::map<std::string, std::vector<int>> net_members;
    for (const auto& comp : netlist.components) {
        if (vocab.code_of(comp.ctype) < 0)
            throw std::invalid_argument("class '" + std::string(class_name(comp.ctype)) +
                                        "' of component '" + comp.id +
                                        "' is absent from the vocabulary");
        const int type_code = vocab.code_of(comp.ctype);
        for (const auto& [port, net] : comp.port_bindings) {
            const int id = g.node_count();
            g.nodes.push_back({id, comp.id, port, type_code});
            net_members[net].push_back(id);
        }
    }

    std::set<std::pair<int, int>> edges;
    auto add_clique = [&edges](const std::vector<int>& members) {
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                int a = members[i], b = members[j];
                if (a == b) continue;
                edges.emplace(std::min(a, b), std::max(a, b));
            }
    };

    int offset = 0;
    for (const auto& comp : netlist.components) {
        std::vector<int> own;
        for (std::size_t p = 0; p < comp.port_bindings.size(); ++p)
            own.push_back(offset + static_cast<int>(p));
        add_clique(own);
        offset += static_cast<int>(comp.port_bindings.size());
    }
    for (const auto& [net, members] : net_members) add_clique(members);

    g.edges.assign(edges.begin(), edges.end());
    return g;
}

struct MemberRange {
    int graph_index = 0;
    int offset = 0;
    int count = 0;
};

// Block-diagonal union of port graphs sharing one vocabulary.
struct StackedGraph {
    std::vector<MemberRange> member_offsets;
    std::vector<int> type_codes;            // per node
    std::vector<std::vector<int>> adj;      // symmetric neighbor lists
    std::vector<std::pair<int, int>> edges; // global ids, i < j, sorted
    int k = 0;                              // one-hot feature width

    int node_count() const { return static_cast<int>(type_codes.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }

    int member_of(int node) const {
        for (const auto& m : member_offsets)
            if (node >= m.offset && node < m.offset + m.count) return m.graph_index;
        return -1;
    }

    bool has_edge(int u, int v) const {
        for (int w : adj[u])
            if (w == v) return true;
        return false;
    }

    // N x k one-hot rows
    std::vector<std::vector<double>> type_features() const {
        std::vector<std::vector<double>> x(type_codes.size(), std::vector<double>(k, 0.0));
        for (std::size_t i = 0; i < type_codes.size(); ++i) x[i][type_codes[i]] = 1.0;
        return x;
    }

    // No edge may cross a member boundary.
    bool block_diagonal() const {
        for (const auto& [u, v] : edges)
            if (member_of(u) != member_of(v)) return false;
        return true;
    }
};

inline StackedGraph stack_graphs(const std::vector<PortGraph>& graphs,
                                 const ClassVocabulary& vocab) {
    if (graphs.empty()) throw std::invalid_argument("stack_graphs: empty input");
    StackedGraph s;
    s.k = vocab.k();
    int offset = 0;
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
        const PortGraph& g = graphs[gi];
        s.member_offsets.push_back({static_cast<int>(gi), offset, g.node_count()});
        for (const auto& node : g.nodes) s.type_codes.push_back(node.type_code);
        for (const auto& [u, v] : g.edges) s.edges.emplace_back(u + offset, v + offset);
        offset += g.node_count();
    }
    s.adj.resize(offset);
    for (const auto& [u, v] : s.edges) {
        s.adj[u].push_back(v);
        s.adj[v].push_back(u);
    }
    return s;
}

struct GraphStats {
    int count = 0;
    int class_count = 0;
    double avg_nodes = 0.0;
    double avg_edges = 0.0;
};

inline GraphStats graph_stats(const std::vector<PortGraph>& graphs) {
    if (graphs.empty()) throw std::invalid_argument("graph_stats: empty input");
    GraphStats st;
    st.count = static_cast<int>(graphs.size());
    std::set<int> codes;
    long long nodes = 0, edges = 0;
    for (const auto& g : graphs) {
        nodes += g.node_count();
        edges += g.edge_count();
        for (const auto& n : g.nodes) codes.insert(n.type_code);
    }
    st.class_count = static_cast<int>(codes.size());
    st.avg_nodes = static_cast<double>(nodes) / st.count;
    st.avg_edges = static_cast<double>(edges) / st.count;
    return st;
}

// JSON-lines dump: one meta line, one line per node, one line per edge.
inline std::string dump_jsonl(const PortGraph& g, const ClassVocabulary& vocab) {
    std::ostringstream out;
    nlohmann::ordered_json meta;
    meta["kind"] = "meta";
    meta["provenance"] = g.provenance;
    meta["nodes"] = g.node_count();
    meta["edges"] = g.edge_count();
    meta["k"] = vocab.k();
    out << meta.dump() << '\n';
    for (const auto& n : g.nodes) {
        nlohmann::ordered_json jn;
        jn["kind"] = "node";
        jn["id"] = n.node_id;
        jn["component"] = n.component_id;
        jn["port"] = n.port_name;
        jn["class"] = class_name(vocab.labels[n.type_code]);
        jn["code"] = n.type_code;
        out << jn.dump() << '\n';
    }
    for (const auto& [u, v] : g.edges) {
        nlohmann::ordered_json je;
        je["kind"] = "edge";
        je["u"] = u;
        je["v"] = v;
        out << je.dump() << '\n';
    }
    return out.str();
}

} // namespace aclp
