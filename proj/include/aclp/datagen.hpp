#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aclp/netlist.hpp"
#include "aclp/port_graph.hpp"
#include "aclp/rng.hpp"

namespace aclp {

struct GenConfig {
    int min_components = 4;
    int max_components = 9;
    std::vector<std::pair<ClassLabel, double>> class_weights;
    double extra_net_prob = 0.25;
    std::uint64_t seed = 0;

    // ten classes, tuned so the default dataset averages around 14-16
    // port nodes per circuit
    static GenConfig default_profile() {
        GenConfig cfg;
        cfg.class_weights = {
            {ClassLabel::Res, 3.0},     {ClassLabel::Cap, 2.0},  {ClassLabel::Ind, 1.0},
            {ClassLabel::NMOS, 2.0},    {ClassLabel::PMOS, 2.0}, {ClassLabel::Voltage, 1.0},
            {ClassLabel::Current, 1.0}, {ClassLabel::Diode, 1.0}, {ClassLabel::NPN, 1.0},
            {ClassLabel::PNP, 1.0},
        };
        return cfg;
    }

    ClassVocabulary vocabulary() const {
        ClassVocabulary v;
        for (const auto& [label, weight] : class_weights) v.labels.push_back(label);
        return v;
    }
};

namespace detail {

inline std::string gen_component_id(ClassLabel label, std::map<char, int>& counters) {
    const char letter = class_element_letter(label);
    return std::string(1, letter) + std::to_string(++counters[letter]);
}

inline const char* pick_value(ClassLabel label, Rng& rng) {
    static const std::vector<const char*> resistor = {"100", "330", "1k", "4.7k", "10k", "100k"};
    static const std::vector<const char*> capacitor = {"1p", "100p", "1n", "10n", "100n", "1u"};
    static const std::vector<const char*> inductor = {"1u", "10u", "100u", "1m"};
    static const std::vector<const char*> source = {"1", "3.3", "5", "12"};
    const std::vector<const char*>* table = nullptr;
    switch (label) {
    case ClassLabel::Res: table = &resistor; break;
    case ClassLabel::Cap: table = &capacitor; break;
    case ClassLabel::Ind: table = &inductor; break;
    case ClassLabel::Voltage:
    case ClassLabel::Current: table = &source; break;
    default: return nullptr;
    }
    return (*table)[rng.below(table->size())];
}

} // namespace detail

// One valid synthetic circuit. Wiring keeps every circuit connected:
// each component after the first ties one port to an existing net, each
// remaining port joins an existing net with probability extra_net_prob
// and otherwise opens a fresh private net.
inline Netlist generate_circuit(const GenConfig& cfg) {
    if (cfg.min_components < 2 || cfg.max_components < cfg.min_components)
        throw std::invalid_argument("generate_circuit: bad component range");
    if (cfg.class_weights.empty())
        throw std::invalid_argument("generate_circuit: empty class weights");

    Rng rng(cfg.seed);
    Netlist netlist;
    netlist.title = "synthetic circuit " + std::to_string(cfg.seed);

    const int n = static_cast<int>(rng.range(cfg.min_components, cfg.max_components));
    std::vector<double> weights;
    for (const auto& [label, w] : cfg.class_weights) weights.push_back(w);

    std::vector<std::string> nets;
    int net_counter = 0;
    auto fresh_net = [&]() {
        nets.push_back("n" + std::to_string(++net_counter));
        return nets.back();
    };
    auto existing_net = [&]() { return nets[rng.below(nets.size())]; };

    std::map<char, int> counters;
    for (int i = 0; i < n; ++i) {
        const ClassLabel label = cfg.class_weights[rng.weighted_pick(weights)].first;
        Component comp;
        comp.id = detail::gen_component_id(label, counters);
        comp.ctype = label;

        const auto& ports = class_ports(label);
        const std::size_t nets_before = nets.size(); // spanning anchor must reach these
        const std::size_t anchor = i == 0 ? ports.size() : rng.below(ports.size());
        for (std::size_t p = 0; p < ports.size(); ++p) {
            std::string net;
            if (p == anchor)
                net = nets[rng.below(nets_before)];
            else if (i > 0 && rng.chance(cfg.extra_net_prob))
                net = existing_net();
            else
                net = fresh_net();
            comp.port_bindings.emplace_back(ports[p], net);
        }

        if (is_mos(label)) {
            comp.params.emplace_back("bulk", comp.net_of("Source"));
            comp.params.emplace_back("w", "1u");
            comp.params.emplace_back("l", "1u");
        } else if (const char* value = detail::pick_value(label, rng)) {
            if (label == ClassLabel::Voltage || label == ClassLabel::Current)
                comp.params.emplace_back("dc", value);
            else
                comp.params.emplace_back("value", value);
        }
        netlist.components.push_back(std::move(comp));
    }
    return netlist;
}

// Independent circuits from derived seeds (seed + index).
inline std::vector<Netlist> generate_dataset(const GenConfig& cfg, int count) {
    if (count < 1) throw std::invalid_argument("generate_dataset: count must be >= 1");
    std::vector<Netlist> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        GenConfig derived = cfg;
        derived.seed = cfg.seed + static_cast<std::uint64_t>(i);
        out.push_back(generate_circuit(derived));
    }
    return out;
}

} // namespace aclp
