#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "aclp/netlist.hpp"

namespace aclp {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) tokens.push_back(tok);
    return tokens;
}

struct LogicalLine {
    std::string text;
    int line_no = 0; // first physical line, 1-based
};

// Joins "+" continuation lines, drops comments and blanks.
inline std::vector<LogicalLine> logical_lines(const std::string& text) {
    std::vector<LogicalLine> out;
    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '*') continue;
        if (line[0] == '+') {
            if (!out.empty()) out.back().text += " " + trim(line.substr(1));
            continue;
        }
        out.push_back({line, line_no});
    }
    return out;
}

// key=value tail token; key lowercased, value kept verbatim.
inline bool parse_kv(const std::string& tok, std::string& key, std::string& value) {
    std::size_t eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) return false;
    key = to_lower(tok.substr(0, eq));
    value = tok.substr(eq + 1);
    return true;
}

inline bool contains_ci(const std::string& haystack, const std::string& needle) {
    return to_lower(haystack).find(to_lower(needle)) != std::string::npos;
}

} // namespace detail

// Parses a SPICE-subset deck. Supported element cards: R C L V I D
// (two-terminal), M (drain gate source bulk + model), Q (collector base
// emitter + model) and X amplifier instances; control cards: .title,
// .MODEL, .OP, .end. Failure throws a NetlistError whose report lists
// every error found, with line numbers.
inline Netlist parse_spice(const std::string& text) {
    using namespace detail;

    Netlist netlist;
    netlist.source_format = SourceFormat::spice;
    ValidationReport errors;
    std::vector<std::string> seen_ids;

    struct PendingModel {
        std::size_t component_index;
        std::string model;
        bool mos_card;
        int line;
    };
    std::vector<PendingModel> pending; // resolved once all .MODEL cards are known

    auto duplicate_id = [&](const std::string& id) {
        const std::string up = to_upper(id);
        for (const auto& s : seen_ids)
            if (s == up) return true;
        seen_ids.push_back(up);
        return false;
    };

    // Tail tokens past the positional slots must be key=value pairs.
    auto take_kv_tail = [&](Component& comp, const std::vector<std::string>& tokens,
                            std::size_t start, int line) {
        for (std::size_t i = start; i < tokens.size(); ++i) {
            std::string key, value;
            if (!parse_kv(tokens[i], key, value)) {
                errors.add(Severity::error, line, "syntax",
                           "unexpected token '" + tokens[i] + "'");
                return false;
            }
            comp.params.emplace_back(key, value);
        }
        return true;
    };

    auto bind_ports = [](Component& comp, const std::vector<std::string>& nets) {
        const auto& ports = class_ports(comp.ctype);
        comp.port_bindings.clear();
        for (std::size_t i = 0; i < ports.size(); ++i)
            comp.port_bindings.emplace_back(ports[i], nets[i]);
    };

    bool ended = false;
    for (const auto& ll : logical_lines(text)) {
        if (ended) break;
        const auto tokens = tokenize(ll.text);
        if (tokens.empty()) continue;
        const std::string first = tokens[0];

        if (first[0] == '.') {
            const std::string card = to_lower(first);
            if (card == ".title") {
                std::size_t pos = ll.text.find_first_of(" \t");
                netlist.title = pos == std::string::npos ? "" : trim(ll.text.substr(pos));
            } else if (card == ".model") {
                if (tokens.size() < 3) {
                    errors.add(Severity::error, ll.line_no, "syntax",
                               ".MODEL needs a name and a kind");
                    continue;
                }
                std::string kind = tokens[2];
                std::size_t paren = kind.find('(');
                if (paren != std::string::npos) kind = kind.substr(0, paren);
                if (!kind.empty()) netlist.model_cards.emplace(tokens[1], kind);
            } else if (card == ".op") {
                // accepted, carries nothing we keep
            } else if (card == ".end") {
                ended = true;
            } else {
                errors.add(Severity::error, ll.line_no, "unknown-control",
                           "unknown control card '" + first + "'");
            }
            continue;
        }

        const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(first[0])));
        Component comp;
        comp.id = first;
        bool model_pending = false;
        std::string model_token;

        switch (letter) {
        case 'R':
        case 'C':
        case 'L':
        case 'V':
        case 'I':
        case 'D': {
            if (tokens.size() < 3) {
                errors.add(Severity::error, ll.line_no, "syntax",
                           "element '" + first + "' needs two nodes");
                continue;
            }
            switch (letter) {
            case 'R': comp.ctype = ClassLabel::Res; break;
            case 'C': comp.ctype = ClassLabel::Cap; break;
            case 'L': comp.ctype = ClassLabel::Ind; break;
            case 'V': comp.ctype = ClassLabel::Voltage; break;
            case 'I': comp.ctype = ClassLabel::Current; break;
            case 'D': comp.ctype = ClassLabel::Diode; break;
            }
            bind_ports(comp, {tokens[1], tokens[2]});
            std::size_t next = 3;
            if ((letter == 'V' || letter == 'I') && next < tokens.size() &&
                to_upper(tokens[next]) == "DC") {
                if (next + 1 >= tokens.size()) {
                    errors.add(Severity::error, ll.line_no, "syntax",
                               "DC keyword needs a value");
                    continue;
                }
                comp.params.emplace_back("dc", tokens[next + 1]);
                next += 2;
            }
            if (next < tokens.size() && tokens[next].find('=') == std::string::npos) {
                if (letter == 'D')
                    comp.model_ref = tokens[next]; // diode tail token is a model name
                else
                    comp.params.emplace_back("value", tokens[next]);
                ++next;
            }
            if (!take_kv_tail(comp, tokens, next, ll.line_no)) continue;
            break;
        }
        case 'M': {
            if (tokens.size() < 6) {
                errors.add(Severity::error, ll.line_no, "syntax",
                           "M card needs drain gate source bulk and a model");
                continue;
            }
            comp.ctype = ClassLabel::NMOS; // provisional, fixed by the model card
            comp.model_ref = tokens[5];
            const auto& ports = class_ports(ClassLabel::NMOS); // Drain, Source, Gate
            comp.port_bindings = {{ports[0], tokens[1]},
                                  {ports[1], tokens[3]},
                                  {ports[2], tokens[2]}};
            comp.params.emplace_back("bulk", tokens[4]);
            if (!take_kv_tail(comp, tokens, 6, ll.line_no)) continue;
            model_pending = true;
            model_token = tokens[5];
            break;
        }
        case 'Q': {
            if (tokens.size() < 5) {
                errors.add(Severity::error, ll.line_no, "syntax",
                           "Q card needs collector base emitter and a model");
                continue;
            }
            comp.ctype = ClassLabel::NPN; // default when the model stays unknown
            comp.model_ref = tokens[4];
            const auto& ports = class_ports(ClassLabel::NPN); // Base, Emitter, Collector
            comp.port_bindings = {{ports[0], tokens[2]},
                                  {ports[1], tokens[3]},
                                  {ports[2], tokens[1]}};
            if (!take_kv_tail(comp, tokens, 5, ll.line_no)) continue;
            model_pending = true;
            model_token = tokens[4];
            break;
        }
        case 'X': {
            std::size_t tail = tokens.size(); // first key=value token
            while (tail > 1 && tokens[tail - 1].find('=') != std::string::npos) --tail;
            if (tail < 3) {
                errors.add(Severity::error, ll.line_no, "syntax",
                           "X card needs nodes and a subckt name");
                continue;
            }
            const std::string subckt = tokens[tail - 1];
            ClassLabel label;
            if (contains_ci(subckt, "dido"))
                label = ClassLabel::Dido_amp;
            else if (contains_ci(subckt, "diso"))
                label = ClassLabel::Diso_amp;
            else if (contains_ci(subckt, "siso"))
                label = ClassLabel::Siso_amp;
            else {
                errors.add(Severity::error, ll.line_no, "unknown-subckt",
                           "subckt '" + subckt + "' maps to no amplifier class");
                continue;
            }
            comp.ctype = label;
            comp.model_ref = subckt;
            const auto& ports = class_ports(label);
            if (tail != ports.size() + 2) {
                errors.add(Severity::error, ll.line_no, "syntax",
                           "X card for " + std::string(class_name(label)) + " needs " +
                               std::to_string(ports.size()) + " nodes");
                continue;
            }
            std::vector<std::string> nets(tokens.begin() + 1, tokens.begin() + (tail - 1));
            bind_ports(comp, nets);
            if (!take_kv_tail(comp, tokens, tail, ll.line_no)) continue;
            break;
        }
        default:
            errors.add(Severity::error, ll.line_no, "unknown-element",
                       "unknown element letter '" + std::string(1, first[0]) + "'");
            continue;
        }

        if (duplicate_id(comp.id)) {
            errors.add(Severity::error, ll.line_no, "dup-id",
                       "duplicate component id '" + comp.id + "'");
            continue;
        }
        const bool is_mos_card = letter == 'M';
        netlist.components.push_back(std::move(comp));
        if (model_pending)
            pending.push_back(
                {netlist.components.size() - 1, model_token, is_mos_card, ll.line_no});
    }

    // M must resolve to a MOS kind; Q defaults to NPN when its model is
    // unknown (validate() reports the default as a warning).
    for (const auto& pm : pending) {
        Component& comp = netlist.components[pm.component_index];
        std::optional<ClassLabel> resolved;
        if (const std::string* kind = netlist.find_model_kind(pm.model))
            resolved = kind_to_class(*kind);
        if (!resolved) resolved = builtin_model_kind(pm.model);
        if (pm.mos_card) {
            if (resolved && is_mos(*resolved))
                comp.ctype = *resolved;
            else
                errors.add(Severity::error, pm.line, "model-unresolved",
                           "M card '" + comp.id + "' references model '" + pm.model +
                               "' that resolves to no MOS kind");
        } else if (resolved && is_bjt_family(*resolved)) {
            comp.ctype = *resolved;
        }
    }

    if (!errors.ok) throw NetlistError(std::move(errors));
    return netlist;
}

namespace detail {

inline std::string canonical_model_name(ClassLabel label) { return to_upper(class_name(label)); }

inline std::string canonical_subckt_name(ClassLabel label) {
    switch (label) {
    case ClassLabel::Diso_amp: return "diso_amp";
    case ClassLabel::Siso_amp: return "siso_amp";
    case ClassLabel::Dido_amp: return "dido_amp";
    default: return "";
    }
}

} // namespace detail

// Emits the canonical deck: .title, component cards in stored order,
// .MODEL cards, .end. No trailing newline. Emitting the parse of an
// emitted deck reproduces it byte for byte, and
// parse_spice(emit_spice(n)) preserves structure.
inline std::string emit_spice(const Netlist& netlist) {
    using namespace detail;

    std::vector<std::string> lines;
    lines.push_back(netlist.title.empty() ? ".title" : ".title " + netlist.title);

    // model cards required by canonical names that the builtin table
    // cannot resolve (the cross BJT variants)
    std::map<std::string, std::string> synthesized;

    for (const auto& comp : netlist.components) {
        std::ostringstream card;
        card << comp.id;
        auto emit_kv = [&](std::initializer_list<const char*> skip) {
            for (const auto& [k, v] : comp.params) {
                bool skipped = false;
                for (const char* s : skip)
                    if (k == s) skipped = true;
                if (!skipped) card << ' ' << to_upper(k) << '=' << v;
            }
        };

        switch (comp.ctype) {
        case ClassLabel::Res:
        case ClassLabel::Cap:
        case ClassLabel::Ind: {
            card << ' ' << comp.port_bindings[0].second << ' ' << comp.port_bindings[1].second;
            if (const std::string* value = comp.find_param("value")) card << ' ' << *value;
            emit_kv({"value"});
            break;
        }
        case ClassLabel::Voltage:
        case ClassLabel::Current: {
            card << ' ' << comp.port_bindings[0].second << ' ' << comp.port_bindings[1].second;
            if (const std::string* dc = comp.find_param("dc")) card << " DC " << *dc;
            if (const std::string* value = comp.find_param("value")) card << ' ' << *value;
            emit_kv({"dc", "value"});
            break;
        }
        case ClassLabel::Diode: {
            card << ' ' << comp.port_bindings[0].second << ' ' << comp.port_bindings[1].second;
            if (!comp.model_ref.empty()) card << ' ' << comp.model_ref;
            emit_kv({});
            break;
        }
        case ClassLabel::NMOS:
        case ClassLabel::PMOS: {
            const std::string* bulk = comp.find_param("bulk");
            const std::string model =
                comp.model_ref.empty() ? canonical_model_name(comp.ctype) : comp.model_ref;
            card << ' ' << comp.net_of("Drain") << ' ' << comp.net_of("Gate") << ' '
                 << comp.net_of("Source") << ' ' << (bulk ? *bulk : comp.net_of("Source"))
                 << ' ' << model;
            emit_kv({"bulk"});
            break;
        }
        case ClassLabel::NPN:
        case ClassLabel::NPN_cross:
        case ClassLabel::PNP:
        case ClassLabel::PNP_cross: {
            const std::string model =
                comp.model_ref.empty() ? canonical_model_name(comp.ctype) : comp.model_ref;
            card << ' ' << comp.net_of("Collector") << ' ' << comp.net_of("Base") << ' '
                 << comp.net_of("Emitter") << ' ' << model;
            emit_kv({});
            if (comp.model_ref.empty() && !builtin_model_kind(model) &&
                !netlist.find_model_kind(model))
                synthesized.emplace(model, class_name(comp.ctype));
            break;
        }
        case ClassLabel::Diso_amp:
        case ClassLabel::Siso_amp:
        case ClassLabel::Dido_amp: {
            for (const auto& [port, net] : comp.port_bindings) card << ' ' << net;
            card << ' '
                 << (comp.model_ref.empty() ? canonical_subckt_name(comp.ctype)
                                            : comp.model_ref);
            emit_kv({});
            break;
        }
        }
        lines.push_back(card.str());
    }

    for (const auto& [name, kind] : netlist.model_cards)
        lines.push_back(".MODEL " + name + " " + kind);
    for (const auto& [name, kind] : synthesized)
        lines.push_back(".MODEL " + name + " " + kind);

    lines.push_back(".end");

    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i];
    }
    return out;
}

} // namespace aclp
