#include <doctest.h>

#include <functional>
#include <sstream>

#include "aclp/netlist.hpp"
#include "aclp/netlist_json.hpp"
#include "aclp/spice.hpp"

#include "fixtures.hpp"

using namespace aclp;

namespace {

int count_code(const ValidationReport& report, const char* code) {
    int n = 0;
    for (const auto& issue : report.issues)
        if (issue.code == code) ++n;
    return n;
}

bool throws_code(const char* code, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const NetlistError& e) {
        for (const auto& issue : e.report().issues)
            if (issue.code == code) return true;
        return false;
    }
    return false;
}

} // namespace

TEST_CASE("lc filter deck parses to three components") {
    const Netlist n = parse_spice(kLcFilterDeck);
    CHECK(n.title == "KiCad schematic");
    REQUIRE(n.components.size() == 3);
    CHECK(n.components[0].id == "C1");
    CHECK(n.components[1].id == "L1");
    CHECK(n.components[2].id == "R1");

    const Component& r1 = n.components[2];
    CHECK(r1.ctype == ClassLabel::Res);
    CHECK(r1.net_of("Pos") == "Output");
    CHECK(r1.net_of("Neg") == "GND");
    REQUIRE(r1.params.size() == 1);
    CHECK(r1.params[0] == std::pair<std::string, std::string>{"value", "330"});
}

TEST_CASE("lc filter validates with exactly one warning, the floating NC net") {
    const ValidationReport report = validate(parse_spice(kLcFilterDeck));
    CHECK(report.ok);
    CHECK(report.error_count() == 0);
    REQUIRE(report.warning_count() == 1);
    CHECK(report.issues[0].code == "single-port-net");
    CHECK(report.issues[0].message.find("NC_01") != std::string::npos);
}

TEST_CASE("circuit 806 deck: M cards resolve through the model card") {
    const Netlist n = parse_spice(kCircuit806Deck);
    CHECK(n.title.empty());
    REQUIRE(n.components.size() == 7);

    const Component& m2 = n.components[3];
    CHECK(m2.id == "M2");
    CHECK(m2.ctype == ClassLabel::NMOS);
    CHECK(m2.net_of("Drain") == "1");
    CHECK(m2.net_of("Gate") == "7");
    CHECK(m2.net_of("Source") == "4");
    REQUIRE(m2.params.size() == 3);
    CHECK(m2.params[0] == std::pair<std::string, std::string>{"bulk", "4"});
    CHECK(m2.params[1] == std::pair<std::string, std::string>{"w", "1u"});
    CHECK(m2.params[2] == std::pair<std::string, std::string>{"l", "1u"});

    const Component& i1 = n.components[0];
    CHECK(i1.ctype == ClassLabel::Current);
    CHECK(i1.net_of("In") == "4");
    CHECK(i1.net_of("Out") == "0");
    REQUIRE(i1.params.size() == 1);
    CHECK(i1.params[0] == std::pair<std::string, std::string>{"dc", "1mA"});

    REQUIRE(n.model_cards.size() == 1);
    CHECK(n.model_cards.at("NMOS") == "NMOS");
}

TEST_CASE("level shifter deck: 27 components, unknown BJT model defaults to NPN") {
    const Netlist n = parse_spice(kLevelShifterDeck);
    REQUIRE(n.components.size() == 27);
    int q = 0, r = 0;
    for (const auto& c : n.components) {
        if (c.ctype == ClassLabel::NPN) ++q;
        if (c.ctype == ClassLabel::Res) ++r;
    }
    CHECK(q == 9);
    CHECK(r == 18);

    const Component& q1 = n.components[1];
    CHECK(q1.id == "Q1");
    CHECK(q1.net_of("Collector") == "D7");
    CHECK(q1.net_of("Base") == "3.3V");
    CHECK(q1.net_of("Emitter") == "RPI_19");
    CHECK(q1.model_ref == "BS170");

    const ValidationReport report = validate(n);
    CHECK(report.ok);
    CHECK(count_code(report, "model-defaulted") == 9);
}

TEST_CASE("empty deck") {
    const Netlist n = parse_spice(".end\n");
    CHECK(n.components.empty());
    CHECK(n.title.empty());
}

TEST_CASE("continuation lines and case-insensitive letters") {
    const Netlist n = parse_spice(".title x\nr9 a b\n+ 47k\n.END\n");
    REQUIRE(n.components.size() == 1);
    CHECK(n.components[0].ctype == ClassLabel::Res);
    CHECK(*n.components[0].find_param("value") == "47k");
}

TEST_CASE("parse errors carry codes and line numbers") {
    CHECK(throws_code("syntax", [] { parse_spice("R1 a\n.end"); }));
    CHECK(throws_code("unknown-element", [] { parse_spice("Z1 a b c\n.end"); }));
    CHECK(throws_code("unknown-control", [] { parse_spice(".tran 1n 1u\n.end"); }));
    CHECK(throws_code("dup-id", [] { parse_spice("R1 a b 1\nR1 c d 2\n.end"); }));
    CHECK(throws_code("dup-id", [] { parse_spice("R1 a b 1\nr1 c d 2\n.end"); })); // ids match case-insensitively
    CHECK(throws_code("model-unresolved", [] { parse_spice("M1 a b c d FOO\n.end"); }));
    CHECK(throws_code("unknown-subckt", [] { parse_spice("X1 a b opamp\n.end"); }));

    try {
        parse_spice("R1 a b 1\nQ9 x\n.end");
        CHECK(false);
    } catch (const NetlistError& e) {
        REQUIRE(e.report().issues.size() == 1);
        CHECK(e.report().issues[0].line == 2);
    }
}

TEST_CASE("Q card with unknown model parses as NPN and validate only warns") {
    const Netlist n = parse_spice("Q1 a b c FOO\n.end");
    REQUIRE(n.components.size() == 1);
    CHECK(n.components[0].ctype == ClassLabel::NPN);
    const ValidationReport report = validate(n);
    CHECK(report.ok);
    CHECK(count_code(report, "model-defaulted") == 1);
}

TEST_CASE("Q card model kinds select the BJT variant") {
    const Netlist n = parse_spice("Q1 a b c PX\nQ2 d e f XC\n"
                                  ".MODEL PX PNP\n.MODEL XC NPN_cross\n.end");
    CHECK(n.components[0].ctype == ClassLabel::PNP);
    CHECK(n.components[1].ctype == ClassLabel::NPN_cross);
}

TEST_CASE("validate flags duplicate ids and unbound ports on built netlists") {
    Netlist n;
    Component a;
    a.id = "R1";
    a.ctype = ClassLabel::Res;
    a.port_bindings = {{"Pos", "n1"}, {"Neg", "n2"}};
    Component b = a;
    b.port_bindings = {{"Pos", "n2"}, {"Neg", "n1"}};
    n.components = {a, b};
    ValidationReport report = validate(n);
    CHECK(!report.ok);
    CHECK(count_code(report, "dup-id") == 1);

    n.components[1].id = "R2";
    n.components[1].port_bindings[0].second = "";
    report = validate(n);
    CHECK(count_code(report, "unbound-port") == 1);

    Component same = a;
    same.id = "R3";
    same.port_bindings = {{"Pos", "n1"}, {"Neg", "n1"}};
    n.components = {a, same};
    report = validate(n);
    CHECK(count_code(report, "all-ports-one-net") == 1);
}

TEST_CASE("amplifier X cards") {
    const Netlist n = parse_spice("X1 in1 in2 out diso_stage\n"
                                  "X2 a b my_SISO\n"
                                  "X3 p q r s dido_amp GAIN=3\n.end");
    REQUIRE(n.components.size() == 3);
    CHECK(n.components[0].ctype == ClassLabel::Diso_amp);
    CHECK(n.components[0].net_of("InN") == "in1");
    CHECK(n.components[0].net_of("InP") == "in2");
    CHECK(n.components[0].net_of("Out") == "out");
    CHECK(n.components[1].ctype == ClassLabel::Siso_amp);
    CHECK(n.components[2].ctype == ClassLabel::Dido_amp);
    CHECK(*n.components[2].find_param("gain") == "3");
}

TEST_CASE("canonical json of the lc filter") {
    const Netlist n = parse_spice(kLcFilterDeck);
    const std::string json = to_json(n);

    const auto doc = nlohmann::ordered_json::parse(json);
    CHECK(doc["format"] == "gnn-aclp-netlist-v1");
    CHECK(doc["title"] == "KiCad schematic");
    REQUIRE(doc["components"].size() == 3);
    CHECK(doc["components"][2].dump() ==
          R"({"id":"R1","ctype":"Res","ports":{"Pos":"Output","Neg":"GND"},"params":{"value":"330"}})");

    // fixed key order at every level
    CHECK(json.find("\"format\"") < json.find("\"title\""));
    CHECK(json.find("\"title\"") < json.find("\"components\""));
}

TEST_CASE("empty netlist canonical json") {
    const std::string json = to_json(Netlist{});
    CHECK(json ==
          "{\n  \"format\": \"gnn-aclp-netlist-v1\",\n  \"title\": \"\",\n  \"components\": []\n}");
}

TEST_CASE("from_json accepts the lc filter and rejects schema violations") {
    const Netlist original = parse_spice(kLcFilterDeck);
    const Netlist parsed = from_json(to_json(original));
    CHECK(parsed.source_format == SourceFormat::json);
    REQUIRE(parsed.components.size() == 3);
    CHECK(parsed.components[0].id == "C1");
    CHECK(parsed.components[1].id == "L1");
    CHECK(parsed.components[2].id == "R1");

    CHECK(throws_code("unknown-ctype", [] {
        from_json(R"({"format":"gnn-aclp-netlist-v1","title":"","components":[
            {"id":"R1","ctype":"Resistor","ports":{"Pos":"a","Neg":"b"},"params":{}}]})");
    }));
    CHECK(throws_code("port-set-mismatch", [] {
        from_json(R"({"format":"gnn-aclp-netlist-v1","title":"","components":[
            {"id":"X1","ctype":"Diso_amp","ports":{"InN":"a","InP":"b"},"params":{}}]})");
    }));
    CHECK(throws_code("schema-version", [] {
        from_json(R"({"format":"gnn-aclp-netlist-v0","title":"","components":[]})");
    }));
    CHECK(throws_code("malformed", [] { from_json("{not json"); }));
}

TEST_CASE("parsing is deterministic on identical bytes") {
    for (const char* deck : {kLcFilterDeck, kCircuit806Deck, kLevelShifterDeck}) {
        const Netlist a = parse_spice(deck);
        const Netlist b = parse_spice(deck);
        CHECK(structurally_equal(a, b));
        CHECK(a.model_cards == b.model_cards);
        CHECK(emit_spice(a) == emit_spice(b));
    }
}

TEST_CASE("json round-trip is the identity on all three reference decks") {
    for (const char* deck : {kLcFilterDeck, kCircuit806Deck, kLevelShifterDeck}) {
        const Netlist n = parse_spice(deck);
        CHECK(structurally_equal(from_json(to_json(n)), n));
    }
}

TEST_CASE("spice round-trip preserves structure on all three reference decks") {
    for (const char* deck : {kLcFilterDeck, kCircuit806Deck, kLevelShifterDeck}) {
        const Netlist n = parse_spice(deck);
        CHECK(structurally_equal(parse_spice(emit_spice(n)), n));
    }
}

TEST_CASE("emit is a fixpoint of emit-parse on the reference decks") {
    for (const char* deck : {kLcFilterDeck, kCircuit806Deck, kLevelShifterDeck}) {
        const std::string once = emit_spice(parse_spice(deck));
        const std::string twice = emit_spice(parse_spice(once));
        CHECK(once == twice);
    }
}

TEST_CASE("emitted level shifter reproduces all 27 cards verbatim") {
    const std::string emitted = emit_spice(parse_spice(kLevelShifterDeck));
    std::istringstream in(kLevelShifterDeck);
    std::string line;
    int cards = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '.' || line[0] == '*') continue;
        ++cards;
        CHECK(emitted.find(line) != std::string::npos);
    }
    CHECK(cards == 27);
}

TEST_CASE("empty netlist emits the bare deck") {
    CHECK(emit_spice(Netlist{}) == ".title\n.end");
}

TEST_CASE("cross BJT variants survive spice emission via synthesized model cards") {
    const std::string json = R"({"format":"gnn-aclp-netlist-v1","title":"x","components":[
        {"id":"Q1","ctype":"NPN_cross","ports":{"Base":"b","Emitter":"e","Collector":"c"},"params":{}},
        {"id":"Q2","ctype":"PNP_cross","ports":{"Base":"b","Emitter":"c","Collector":"e"},"params":{}}]})";
    const Netlist n = from_json(json);
    const Netlist back = parse_spice(emit_spice(n));
    CHECK(structurally_equal(back, n));
    CHECK(back.components[0].ctype == ClassLabel::NPN_cross);
    CHECK(back.components[1].ctype == ClassLabel::PNP_cross);
}

TEST_CASE("amplifiers survive json and spice round-trips") {
    const std::string json = R"({"format":"gnn-aclp-netlist-v1","title":"amps","components":[
        {"id":"X1","ctype":"Diso_amp","ports":{"InN":"a","InP":"b","Out":"c"},"params":{}},
        {"id":"X2","ctype":"Siso_amp","ports":{"In":"c","Out":"d"},"params":{}},
        {"id":"X3","ctype":"Dido_amp","ports":{"InN":"a","InP":"b","OutN":"e","OutP":"f"},"params":{"gain":"5"}}]})";
    const Netlist n = from_json(json);
    CHECK(structurally_equal(from_json(to_json(n)), n));
    CHECK(structurally_equal(parse_spice(emit_spice(n)), n));
}

TEST_CASE("to_json refuses a netlist with validation errors") {
    Netlist n;
    Component a;
    a.id = "R1";
    a.ctype = ClassLabel::Res;
    a.port_bindings = {{"Pos", "n1"}, {"Neg", "n2"}};
    n.components = {a, a};
    CHECK(throws_code("dup-id", [&] { to_json(n); }));
}
