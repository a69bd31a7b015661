#include <doctest.h>

#include <sstream>

#include "aclp/port_graph.hpp"
#include "aclp/rng.hpp"
#include "aclp/spice.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace aclp;

namespace {

const ClassVocabulary kVocab = ClassVocabulary::all();

oracle::SmallGraph to_small(const PortGraph& g) {
    oracle::SmallGraph s;
    for (const auto& n : g.nodes) s.types.push_back(n.type_code);
    for (const auto& e : g.edges) s.edges.insert(e);
    return s;
}

Netlist two_resistors_in_series() {
    return parse_spice("R1 n1 n2 1k\nR2 n2 n3 1k\n.end");
}

} // namespace

TEST_CASE("single two-port component gives two nodes and one edge") {
    const Netlist n = parse_spice("R1 n1 n2 330\n.end");
    const PortGraph g = build_port_graph(n, kVocab);
    CHECK(g.node_count() == 2);
    REQUIRE(g.edge_count() == 1);
    CHECK(g.edges[0] == std::pair<int, int>{0, 1});
    CHECK(g.nodes[0].component_id == "R1");
    CHECK(g.nodes[0].port_name == "Pos");
    CHECK(g.nodes[1].port_name == "Neg");
    CHECK(g.nodes[0].type_code == kVocab.code_of(ClassLabel::Res));
}

TEST_CASE("two resistors in series: two intra edges plus one net edge") {
    const PortGraph g = build_port_graph(two_resistors_in_series(), kVocab);
    CHECK(g.node_count() == 4);
    REQUIRE(g.edge_count() == 3);
    // nodes: R1.Pos=0 R1.Neg=1 R2.Pos=2 R2.Neg=3; shared net n2 joins 1 and 2
    std::set<std::pair<int, int>> expect = {{0, 1}, {1, 2}, {2, 3}};
    CHECK(std::set<std::pair<int, int>>(g.edges.begin(), g.edges.end()) == expect);
}

TEST_CASE("lc filter graph: six nodes, five edges") {
    const PortGraph g = build_port_graph(parse_spice(kLcFilterDeck), kVocab);
    CHECK(g.node_count() == 6);
    REQUIRE(g.edge_count() == 5);
    // C1.Pos=0 C1.Neg=1 L1.Pos=2 L1.Neg=3 R1.Pos=4 R1.Neg=5
    // intra: (0,1) (2,3) (4,5); C1-L1 shared net joins 0-3; Output joins 2-4
    std::set<std::pair<int, int>> expect = {{0, 1}, {2, 3}, {4, 5}, {0, 3}, {2, 4}};
    CHECK(std::set<std::pair<int, int>>(g.edges.begin(), g.edges.end()) == expect);
}

TEST_CASE("node count law: sum of class port counts") {
    for (const char* deck : {kLcFilterDeck, kCircuit806Deck, kLevelShifterDeck}) {
        const Netlist n = parse_spice(deck);
        const PortGraph g = build_port_graph(n, kVocab);
        int expect = 0;
        for (const auto& c : n.components)
            expect += static_cast<int>(class_ports(c.ctype).size());
        CHECK(g.node_count() == expect);
    }
}

TEST_CASE("symmetry and no self loops by construction") {
    const PortGraph g = build_port_graph(parse_spice(kCircuit806Deck), kVocab);
    std::set<std::pair<int, int>> seen;
    for (const auto& [u, v] : g.edges) {
        CHECK(u < v);
        CHECK(!seen.count({u, v}));
        seen.insert({u, v});
    }
    const auto adj = g.adjacency();
    for (int u = 0; u < g.node_count(); ++u)
        for (int v : adj[u]) {
            CHECK(v != u);
            CHECK(std::find(adj[v].begin(), adj[v].end(), u) != adj[v].end());
        }
}

TEST_CASE("ctype missing from the vocabulary is an error") {
    ClassVocabulary narrow;
    narrow.labels = {ClassLabel::Res};
    CHECK_THROWS(build_port_graph(parse_spice("C1 a b 1p\n.end"), narrow));
}

TEST_CASE("permuting the component list yields an isomorphic graph") {
    Rng rng(7);
    const Netlist base = parse_spice(kLcFilterDeck); // 6 nodes, small enough to brute force
    const PortGraph g = build_port_graph(base, kVocab);
    for (int round = 0; round < 10; ++round) {
        Netlist shuffled = base;
        rng.shuffle(shuffled.components);
        const PortGraph h = build_port_graph(shuffled, kVocab);
        CHECK(oracle::isomorphic(to_small(g), to_small(h)));
    }

    // and a known permutation maps edges exactly
    Netlist swapped = base;
    std::swap(swapped.components[0], swapped.components[2]); // C1 <-> R1
    const PortGraph h = build_port_graph(swapped, kVocab);
    const std::vector<int> perm = {4, 5, 2, 3, 0, 1}; // old id -> new id
    std::set<std::pair<int, int>> mapped;
    for (const auto& [u, v] : g.edges)
        mapped.emplace(std::min(perm[u], perm[v]), std::max(perm[u], perm[v]));
    CHECK(mapped == std::set<std::pair<int, int>>(h.edges.begin(), h.edges.end()));
}

TEST_CASE("stacking one graph is the identity up to offsets") {
    const PortGraph g = build_port_graph(parse_spice(kLcFilterDeck), kVocab);
    const StackedGraph s = stack_graphs({g}, kVocab);
    CHECK(s.node_count() == g.node_count());
    CHECK(s.edge_count() == g.edge_count());
    REQUIRE(s.member_offsets.size() == 1);
    CHECK(s.member_offsets[0].offset == 0);
    CHECK(s.member_offsets[0].count == g.node_count());
    CHECK(std::vector<std::pair<int, int>>(s.edges) == g.edges);
}

TEST_CASE("stacked adjacency is exactly block-diagonal") {
    const PortGraph a = build_port_graph(parse_spice(kLcFilterDeck), kVocab);
    const PortGraph b = build_port_graph(two_resistors_in_series(), kVocab);
    const StackedGraph s = stack_graphs({a, b}, kVocab);
    CHECK(s.node_count() == 10);
    CHECK(s.block_diagonal());
    for (const auto& [u, v] : s.edges) CHECK(!(u < 6 && v >= 6));
    CHECK(s.member_of(0) == 0);
    CHECK(s.member_of(5) == 0);
    CHECK(s.member_of(6) == 1);
    CHECK(s.member_of(9) == 1);
}

TEST_CASE("stack edge count is the sum of member edge counts") {
    std::vector<PortGraph> graphs;
    int total_edges = 0, total_nodes = 0;
    for (const char* deck : {kLcFilterDeck, kCircuit806Deck, kLevelShifterDeck}) {
        graphs.push_back(build_port_graph(parse_spice(deck), kVocab));
        total_edges += graphs.back().edge_count();
        total_nodes += graphs.back().node_count();
    }
    const StackedGraph s = stack_graphs(graphs, kVocab);
    CHECK(s.edge_count() == total_edges);
    CHECK(s.node_count() == total_nodes);
    CHECK(s.block_diagonal());
}

TEST_CASE("every row of the type feature matrix sums to one") {
    const StackedGraph s =
        stack_graphs({build_port_graph(parse_spice(kCircuit806Deck), kVocab)}, kVocab);
    for (const auto& row : s.type_features()) {
        double sum = 0.0;
        for (double v : row) sum += v;
        CHECK(sum == 1.0);
    }
}

TEST_CASE("stacking nothing is an error") {
    CHECK_THROWS(stack_graphs({}, kVocab));
}

TEST_CASE("graph stats") {
    const PortGraph a = build_port_graph(parse_spice(kLcFilterDeck), kVocab); // 6 nodes 5 edges
    SUBCASE("single graph") {
        const GraphStats st = graph_stats({a});
        CHECK(st.count == 1);
        CHECK(st.avg_nodes == doctest::Approx(6.0));
        CHECK(st.avg_edges == doctest::Approx(5.0));
        CHECK(st.class_count == 3); // Cap, Ind, Res
    }
    SUBCASE("two graphs average") {
        const PortGraph b = build_port_graph(two_resistors_in_series(), kVocab); // 4 nodes 3 edges
        const GraphStats st = graph_stats({a, b});
        CHECK(st.avg_nodes == doctest::Approx(5.0));
        CHECK(st.avg_edges == doctest::Approx(4.0));
    }
    SUBCASE("empty list is an error") { CHECK_THROWS(graph_stats({})); }
}

TEST_CASE("jsonl dump lists meta, nodes and edges") {
    const PortGraph g = build_port_graph(parse_spice(kLcFilterDeck), kVocab);
    const std::string dump = dump_jsonl(g, kVocab);
    std::istringstream in(dump);
    std::string line;
    int meta = 0, nodes = 0, edges = 0;
    while (std::getline(in, line)) {
        const auto j = nlohmann::json::parse(line);
        const std::string kind = j.at("kind");
        if (kind == "meta") ++meta;
        if (kind == "node") ++nodes;
        if (kind == "edge") ++edges;
    }
    CHECK(meta == 1);
    CHECK(nodes == 6);
    CHECK(edges == 5);
}

TEST_CASE("jsonl dump golden lines") {
    const PortGraph g = build_port_graph(parse_spice(kLcFilterDeck), kVocab);
    std::istringstream in(dump_jsonl(g, kVocab));
    std::string line;
    std::getline(in, line);
    CHECK(line ==
          R"({"kind":"meta","provenance":"KiCad schematic","nodes":6,"edges":5,"k":15})");
    std::getline(in, line);
    CHECK(line ==
          R"({"kind":"node","id":0,"component":"C1","port":"Pos","class":"Cap","code":12})");
    for (int skip = 0; skip < 5; ++skip) std::getline(in, line); // past the node records
    std::getline(in, line);
    CHECK(line == R"({"kind":"edge","u":0,"v":1})");
}
