#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aclp/netlist.hpp"
#include "aclp/netlist_json.hpp"
#include "aclp/port_graph.hpp"
#include "aclp/spice.hpp"

namespace aclp {

inline constexpr const char* kManifestSchema = "gnn-aclp-manifest-v1";

// A dataset is a vocabulary plus a list of netlist files; paths are kept
// relative to the manifest file.
struct DatasetManifest {
    ClassVocabulary vocab;
    std::vector<std::string> netlist_paths;
};

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

inline std::string manifest_to_json(const DatasetManifest& manifest) {
    nlohmann::ordered_json doc;
    doc["format"] = kManifestSchema;
    doc["vocabulary"] = manifest.vocab.names();
    doc["netlists"] = manifest.netlist_paths;
    return doc.dump(2);
}

inline DatasetManifest manifest_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("manifest: not valid JSON: ") + e.what());
    }
    if (!doc.contains("format") || doc["format"] != kManifestSchema)
        throw std::runtime_error("manifest: unsupported format");
    DatasetManifest m;
    m.vocab = ClassVocabulary::from_names(doc.at("vocabulary").get<std::vector<std::string>>());
    m.netlist_paths = doc.at("netlists").get<std::vector<std::string>>();
    return m;
}

inline bool has_extension(const std::filesystem::path& path, const char* ext) {
    return to_lower(path.extension().string()) == ext;
}

// Netlist file by extension: .json is the canonical JSON format,
// everything else parses as SPICE.
inline Netlist load_netlist_file(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    if (has_extension(path, ".json")) return from_json(text);
    return parse_spice(text);
}

struct LoadedDataset {
    DatasetManifest manifest;
    std::vector<Netlist> netlists;
    std::vector<PortGraph> graphs;
};

inline LoadedDataset load_dataset(const std::filesystem::path& manifest_path) {
    LoadedDataset ds;
    ds.manifest = manifest_from_json(read_file(manifest_path));
    const auto base = manifest_path.parent_path();
    for (const auto& rel : ds.manifest.netlist_paths) {
        const auto path = base / rel;
        ds.netlists.push_back(load_netlist_file(path));
        ds.graphs.push_back(build_port_graph(ds.netlists.back(), ds.manifest.vocab));
    }
    return ds;
}

} // namespace aclp
