#pragma once

#include <string>

#include <json.hpp>

#include "aclp/netlist.hpp"

namespace aclp {

inline constexpr const char* kNetlistSchema = "gnn-aclp-netlist-v1";

// Canonical JSON form. Key order is fixed (format, title, components;
// per component: id, ctype, ports, params), two-space indentation.
// The netlist must validate with no errors.
inline std::string to_json(const Netlist& netlist) {
    ValidationReport report = validate(netlist);
    if (!report.ok) throw NetlistError(std::move(report));

    nlohmann::ordered_json doc;
    doc["format"] = kNetlistSchema;
    doc["title"] = netlist.title;
    doc["components"] = nlohmann::ordered_json::array();
    for (const auto& comp : netlist.components) {
        nlohmann::ordered_json jc;
        jc["id"] = comp.id;
        jc["ctype"] = class_name(comp.ctype);
        jc["ports"] = nlohmann::ordered_json::object();
        for (const auto& [port, net] : comp.port_bindings) jc["ports"][port] = net;
        jc["params"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : comp.params) jc["params"][k] = v;
        doc["components"].push_back(std::move(jc));
    }
    return doc.dump(2);
}

inline Netlist from_json(const std::string& text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw NetlistError("malformed", std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw NetlistError("malformed", "top level is not an object");

    for (const auto& [key, value] : doc.items())
        if (key != "format" && key != "title" && key != "components")
            throw NetlistError("malformed", "unexpected top-level key '" + key + "'");
    if (!doc.contains("format") || !doc["format"].is_string())
        throw NetlistError("schema-version", "missing format marker");
    if (doc["format"].get<std::string>() != kNetlistSchema)
        throw NetlistError("schema-version",
                           "unsupported format '" + doc["format"].get<std::string>() + "'");
    if (!doc.contains("title") || !doc["title"].is_string())
        throw NetlistError("malformed", "missing title string");
    if (!doc.contains("components") || !doc["components"].is_array())
        throw NetlistError("malformed", "missing components array");

    Netlist netlist;
    netlist.source_format = SourceFormat::json;
    netlist.title = doc["title"].get<std::string>();

    for (const auto& jc : doc["components"]) {
        if (!jc.is_object()) throw NetlistError("malformed", "component is not an object");
        for (const auto& [key, value] : jc.items())
            if (key != "id" && key != "ctype" && key != "ports" && key != "params")
                throw NetlistError("malformed", "unexpected component key '" + key + "'");
        if (!jc.contains("id") || !jc["id"].is_string())
            throw NetlistError("malformed", "component without id");
        Component comp;
        comp.id = jc["id"].get<std::string>();

        if (!jc.contains("ctype") || !jc["ctype"].is_string())
            throw NetlistError("malformed", "component '" + comp.id + "' without ctype");
        const std::string ctype = jc["ctype"].get<std::string>();
        auto label = class_from_name(ctype);
        if (!label)
            throw NetlistError("unknown-ctype",
                               "component '" + comp.id + "' has unknown ctype '" + ctype + "'");
        comp.ctype = *label;

        if (!jc.contains("ports") || !jc["ports"].is_object())
            throw NetlistError("malformed", "component '" + comp.id + "' without ports");
        const auto& jports = jc["ports"];
        const auto& ports = class_ports(comp.ctype);
        if (jports.size() != ports.size())
            throw NetlistError("port-set-mismatch",
                               "component '" + comp.id + "' binds " +
                                   std::to_string(jports.size()) + " ports, " +
                                   class_name(comp.ctype) + " has " +
                                   std::to_string(ports.size()));
        for (const char* port : ports) {
            if (!jports.contains(port) || !jports[port].is_string())
                throw NetlistError("port-set-mismatch", "component '" + comp.id +
                                                            "' is missing port '" + port + "'");
            comp.port_bindings.emplace_back(port, jports[port].get<std::string>());
        }

        if (jc.contains("params")) {
            if (!jc["params"].is_object())
                throw NetlistError("malformed", "component '" + comp.id + "' params not an object");
            for (const auto& [k, v] : jc["params"].items()) {
                if (!v.is_string())
                    throw NetlistError("malformed", "param '" + k + "' of '" + comp.id +
                                                        "' is not a string");
                comp.params.emplace_back(to_lower(k), v.get<std::string>());
            }
        }
        netlist.components.push_back(std::move(comp));
    }
    return netlist;
}

} // namespace aclp
