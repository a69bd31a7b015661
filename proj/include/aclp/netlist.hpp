#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace aclp {

// Component classes and their port lists. The port list of a class is
// fixed; a component is well formed only if it binds exactly these ports.
enum class ClassLabel {
    PMOS,
    NMOS,
    Voltage,
    Current,
    NPN,
    NPN_cross,
    PNP,
    PNP_cross,
    Diode,
    Diso_amp,
    Siso_amp,
    Dido_amp,
    Cap,
    Ind,
    Res,
};

inline constexpr int kClassCount = 15;

struct ClassInfo {
    ClassLabel label;
    const char* name;
    std::vector<const char*> ports;
};

inline const std::vector<ClassInfo>& class_table() {
    static const std::vector<ClassInfo> table = {
        {ClassLabel::PMOS, "PMOS", {"Drain", "Source", "Gate"}},
        {ClassLabel::NMOS, "NMOS", {"Drain", "Source", "Gate"}},
        {ClassLabel::Voltage, "Voltage", {"Pos", "Neg"}},
        {ClassLabel::Current, "Current", {"In", "Out"}},
        {ClassLabel::NPN, "NPN", {"Base", "Emitter", "Collector"}},
        {ClassLabel::NPN_cross, "NPN_cross", {"Base", "Emitter", "Collector"}},
        {ClassLabel::PNP, "PNP", {"Base", "Emitter", "Collector"}},
        {ClassLabel::PNP_cross, "PNP_cross", {"Base", "Emitter", "Collector"}},
        {ClassLabel::Diode, "Diode", {"In", "Out"}},
        {ClassLabel::Diso_amp, "Diso_amp", {"InN", "InP", "Out"}},
        {ClassLabel::Siso_amp, "Siso_amp", {"In", "Out"}},
        {ClassLabel::Dido_amp, "Dido_amp", {"InN", "InP", "OutN", "OutP"}},
        {ClassLabel::Cap, "Cap", {"Pos", "Neg"}},
        {ClassLabel::Ind, "Ind", {"Pos", "Neg"}},
        {ClassLabel::Res, "Res", {"Pos", "Neg"}},
    };
    return table;
}

inline const ClassInfo& class_info(ClassLabel label) {
    for (const auto& ci : class_table())
        if (ci.label == label) return ci;
    throw std::logic_error("class_info: label out of range");
}

inline const char* class_name(ClassLabel label) { return class_info(label).name; }

inline std::optional<ClassLabel> class_from_name(const std::string& name) {
    for (const auto& ci : class_table())
        if (name == ci.name) return ci.label;
    return std::nullopt;
}

inline const std::vector<const char*>& class_ports(ClassLabel label) {
    return class_info(label).ports;
}

inline std::string to_upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

inline std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Model names whose device kind is implied by the name itself; a deck can
// reference these without carrying a .MODEL card.
inline std::optional<ClassLabel> builtin_model_kind(const std::string& model_name) {
    const std::string up = to_upper(model_name);
    if (up == "NMOS") return ClassLabel::NMOS;
    if (up == "PMOS") return ClassLabel::PMOS;
    if (up == "NPN") return ClassLabel::NPN;
    if (up == "PNP") return ClassLabel::PNP;
    return std::nullopt;
}

// Device-kind token of a .MODEL card -> component class.
inline std::optional<ClassLabel> kind_to_class(const std::string& kind) {
    const std::string up = to_upper(kind);
    for (const auto& ci : class_table())
        if (up == to_upper(ci.name)) return ci.label;
    return std::nullopt;
}

struct Component {
    std::string id;
    ClassLabel ctype = ClassLabel::Res;
    // port name -> net name, in class-table port order
    std::vector<std::pair<std::string, std::string>> port_bindings;
    // lowercase key -> verbatim source token, in source order
    std::vector<std::pair<std::string, std::string>> params;
    // model/subckt name token from the source card ("" when none)
    std::string model_ref;

    const std::string* find_param(const std::string& key) const {
        for (const auto& [k, v] : params)
            if (k == key) return &v;
        return nullptr;
    }

    const std::string& net_of(const std::string& port) const {
        for (const auto& [p, n] : port_bindings)
            if (p == port) return n;
        throw std::out_of_range("net_of: no port '" + port + "' on " + id);
    }
};

enum class SourceFormat { spice, json };

struct Netlist {
    std::string title;
    std::vector<Component> components;
    std::map<std::string, std::string> model_cards; // model name -> device kind
    SourceFormat source_format = SourceFormat::spice;

    const std::string* find_model_kind(const std::string& model_name) const {
        const std::string up = to_upper(model_name);
        for (const auto& [name, kind] : model_cards)
            if (to_upper(name) == up) return &kind;
        return nullptr;
    }
};

// Structural equality: title plus per-component id/ctype/port_bindings/params.
// Params compare as maps (order-insensitive); port bindings are already in
// the fixed class-table order.
inline bool structurally_equal(const Component& a, const Component& b) {
    if (a.id != b.id || a.ctype != b.ctype) return false;
    if (a.port_bindings != b.port_bindings) return false;
    auto as_map = [](const Component& c) {
        return std::map<std::string, std::string>(c.params.begin(), c.params.end());
    };
    return as_map(a) == as_map(b);
}

inline bool structurally_equal(const Netlist& a, const Netlist& b) {
    if (a.title != b.title) return false;
    if (a.components.size() != b.components.size()) return false;
    for (std::size_t i = 0; i < a.components.size(); ++i)
        if (!structurally_equal(a.components[i], b.components[i])) return false;
    return true;
}

enum class Severity { error, warning };

struct Issue {
    Severity severity = Severity::error;
    int line = 0; // 0 when not tied to a source line
    std::string code;
    std::string message;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Issue> issues;

    void add(Severity sev, int line, std::string code, std::string message) {
        if (sev == Severity::error) ok = false;
        issues.push_back({sev, line, std::move(code), std::move(message)});
    }
    int error_count() const {
        int n = 0;
        for (const auto& i : issues) n += (i.severity == Severity::error) ? 1 : 0;
        return n;
    }
    int warning_count() const { return static_cast<int>(issues.size()) - error_count(); }
};

// Thrown by operations that fail hard (parse errors, schema violations).
class NetlistError : public std::runtime_error {
public:
    explicit NetlistError(std::string code, std::string message, int line = 0)
        : std::runtime_error(message), report_() {
        report_.add(Severity::error, line, std::move(code), std::move(message));
    }
    explicit NetlistError(ValidationReport report)
        : std::runtime_error(report.issues.empty() ? "netlist error"
                                                   : report.issues.front().message),
          report_(std::move(report)) {}

    const ValidationReport& report() const { return report_; }
    const std::string& code() const {
        static const std::string unknown = "unknown";
        for (const auto& i : report_.issues)
            if (i.severity == Severity::error) return i.code;
        return unknown;
    }

private:
    ValidationReport report_;
};

inline bool is_bjt_family(ClassLabel c) {
    return c == ClassLabel::NPN || c == ClassLabel::NPN_cross || c == ClassLabel::PNP ||
           c == ClassLabel::PNP_cross;
}

inline bool is_mos(ClassLabel c) { return c == ClassLabel::NMOS || c == ClassLabel::PMOS; }

// Ground rails are legitimately single-ended, so they are exempt from the
// single-port-net warning.
inline bool is_ground_net(const std::string& net) {
    const std::string up = to_upper(net);
    return up == "0" || up == "GND";
}

// SPICE element letter used when emitting a component of this class.
inline char class_element_letter(ClassLabel c) {
    switch (c) {
    case ClassLabel::Res: return 'R';
    case ClassLabel::Cap: return 'C';
    case ClassLabel::Ind: return 'L';
    case ClassLabel::Voltage: return 'V';
    case ClassLabel::Current: return 'I';
    case ClassLabel::Diode: return 'D';
    case ClassLabel::NMOS:
    case ClassLabel::PMOS: return 'M';
    case ClassLabel::NPN:
    case ClassLabel::NPN_cross:
    case ClassLabel::PNP:
    case ClassLabel::PNP_cross: return 'Q';
    case ClassLabel::Diso_amp:
    case ClassLabel::Siso_amp:
    case ClassLabel::Dido_amp: return 'X';
    }
    return '?';
}

// Total check of a Netlist. Always returns a report; ok iff no errors.
inline ValidationReport validate(const Netlist& netlist) {
    ValidationReport report;

    std::map<std::string, std::string> seen_ids; // uppercase -> original id
    for (const auto& comp : netlist.components) {
        const std::string up = to_upper(comp.id);
        auto [it, inserted] = seen_ids.emplace(up, comp.id);
        if (!inserted)
            report.add(Severity::error, 0, "dup-id",
                       "duplicate component id '" + comp.id + "'");
    }

    std::map<std::string, int> net_port_count;
    for (const auto& comp : netlist.components) {
        bool label_known = false;
        for (const auto& ci : class_table())
            if (ci.label == comp.ctype) label_known = true;
        if (!label_known) {
            report.add(Severity::error, 0, "unknown-ctype",
                       "component '" + comp.id + "' has an unknown class");
            continue;
        }

        const auto& ports = class_ports(comp.ctype);
        bool ports_ok = comp.port_bindings.size() == ports.size();
        if (ports_ok)
            for (std::size_t i = 0; i < ports.size(); ++i)
                if (comp.port_bindings[i].first != ports[i]) ports_ok = false;
        if (!ports_ok) {
            report.add(Severity::error, 0, "port-set-mismatch",
                       "component '" + comp.id + "' does not bind the port set of " +
                           class_name(comp.ctype));
            continue;
        }

        bool all_same = comp.port_bindings.size() > 1;
        for (const auto& [port, net] : comp.port_bindings) {
            if (net.empty())
                report.add(Severity::error, 0, "unbound-port",
                           "port '" + port + "' of '" + comp.id + "' is bound to no net");
            else
                ++net_port_count[net];
            if (net != comp.port_bindings.front().second) all_same = false;
        }
        if (all_same && !comp.port_bindings.front().second.empty())
            report.add(Severity::warning, 0, "all-ports-one-net",
                       "component '" + comp.id + "' has every port on net '" +
                           comp.port_bindings.front().second + "'");

        const char want = class_element_letter(comp.ctype);
        if (comp.id.empty() ||
            std::toupper(static_cast<unsigned char>(comp.id[0])) != want)
            report.add(Severity::warning, 0, "id-letter",
                       "id '" + comp.id + "' does not start with '" + std::string(1, want) +
                           "'; the SPICE emitter cannot round-trip it");

        if (!comp.model_ref.empty()) {
            const std::string* kind = netlist.find_model_kind(comp.model_ref);
            std::optional<ClassLabel> resolved;
            if (kind) resolved = kind_to_class(*kind);
            if (!resolved) resolved = builtin_model_kind(comp.model_ref);
            if (is_mos(comp.ctype)) {
                if (!resolved || !is_mos(*resolved))
                    report.add(Severity::error, 0, "model-unresolved",
                               "MOS component '" + comp.id + "' references model '" +
                                   comp.model_ref + "' that resolves to no MOS kind");
            } else if (is_bjt_family(comp.ctype)) {
                if (!resolved || !is_bjt_family(*resolved))
                    report.add(Severity::warning, 0, "model-defaulted",
                               "BJT component '" + comp.id + "' references model '" +
                                   comp.model_ref + "' with no known kind; class defaulted");
            }
        }
    }

    for (const auto& [net, count] : net_port_count)
        if (count == 1 && !is_ground_net(net))
            report.add(Severity::warning, 0, "single-port-net",
                       "net '" + net + "' touches only one port");

    return report;
}

} // namespace aclp
