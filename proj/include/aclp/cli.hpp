#pragma once

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aclp/datagen.hpp"
#include "aclp/dgcnn.hpp"
#include "aclp/eval.hpp"
#include "aclp/heuristics.hpp"
#include "aclp/manifest.hpp"
#include "aclp/netlist_json.hpp"
#include "aclp/pipeline.hpp"
#include "aclp/spice.hpp"

namespace aclp {

// Exit codes: 0 success, 1 validation failure, 2 usage error, 3 runtime
// failure. Errors go to stderr as one-line JSON records.
enum ExitCode { kOk = 0, kValidationFailure = 1, kUsageError = 2, kRuntimeFailure = 3 };

namespace cli_detail {

inline void print_error(const std::string& code, const std::string& message, int line = 0) {
    nlohmann::ordered_json rec;
    rec["error"]["code"] = code;
    if (line > 0) rec["error"]["line"] = line;
    rec["error"]["message"] = message;
    std::cerr << rec.dump() << '\n';
}

inline void print_report_issues(const ValidationReport& report, std::ostream& out) {
    for (const auto& issue : report.issues) {
        out << (issue.severity == Severity::error ? "error" : "warning") << " [" << issue.code
            << "]";
        if (issue.line > 0) out << " line " << issue.line;
        out << ": " << issue.message << '\n';
    }
}

inline bool spice_extension(const std::filesystem::path& p) {
    const std::string ext = to_lower(p.extension().string());
    return ext == ".cir" || ext == ".sp" || ext == ".spice" || ext == ".net";
}

struct TrainFlags {
    std::string manifest;
    std::string out;
    std::uint64_t seed = 42;
    std::string profile = "synthetic";
    int epochs = 50;
    double learning_rate = 0.0; // 0 means use the profile value
    int hops = 2;
    double negative_ratio = 1.0;
    bool timings = false;
};

inline double profile_learning_rate(const std::string& profile) {
    if (profile == "synthetic") return 1e-4;
    if (profile == "paper-spicenetlist") return 1e-6;
    if (profile == "paper-image2net") return 6e-8;
    throw CLI::ValidationError("--profile", "unknown profile '" + profile + "'");
}

inline std::string percent(double value, double std_dev) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2) << value * 100.0 << "% ± "
        << std_dev * 100.0 << "%";
    return out.str();
}

inline std::string auc_pair(double value, double std_dev) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << value << " ± " << std_dev;
    return out.str();
}

// pad to a visible width; UTF-8 continuation bytes do not count
inline std::string pad_cell(const std::string& text, std::size_t width) {
    std::size_t visible = 0;
    for (unsigned char c : text)
        if ((c & 0xc0) != 0x80) ++visible;
    std::string out = text;
    if (visible < width) out.append(width - visible, ' ');
    return out;
}

inline void print_eval_table(const std::string& method, const EvalReport& report, bool timings,
                             std::ostream& out) {
    out << pad_cell("method", 14) << pad_cell("accuracy", 22) << pad_cell("roc-auc", 22)
        << "avg-inf-time\n";
    std::string time_cell = "n/a";
    if (timings) {
        std::ostringstream t;
        t << std::fixed << std::setprecision(6) << report.avg_inference_time_s << " s";
        time_cell = t.str();
    }
    out << pad_cell(method, 14) << pad_cell(percent(report.accuracy_mean, report.accuracy_std), 22)
        << pad_cell(auc_pair(report.auc_mean, report.auc_std), 22) << time_cell << '\n';
}

inline nlohmann::ordered_json eval_report_json(const std::string& method,
                                               const std::string& split, const EvalReport& report,
                                               bool timings) {
    nlohmann::ordered_json doc;
    doc["method"] = method;
    doc["split"] = split;
    doc["accuracy"] = {{"mean", report.accuracy_mean}, {"std", report.accuracy_std}};
    doc["auc"] = {{"mean", report.auc_mean}, {"std", report.auc_std}};
    doc["repetitions"] = report.repetitions;
    doc["accuracy_rule"] = report.accuracy_rule;
    doc["fingerprint"] = report.config_fingerprint;
    nlohmann::ordered_json reps = nlohmann::ordered_json::array();
    for (const auto& rec : report.per_rep) {
        nlohmann::ordered_json jr;
        jr["accuracy"] = rec.accuracy;
        jr["auc"] = rec.auc;
        if (timings) jr["inference_time_s"] = rec.inference_time_s;
        reps.push_back(std::move(jr));
    }
    doc["per_rep"] = std::move(reps);
    if (timings) doc["avg_inference_time_s"] = report.avg_inference_time_s;
    return doc;
}

// ---- subcommand bodies ----

inline int run_convert(const std::string& input, const std::string& output) {
    const std::filesystem::path in(input), out(output);
    const Netlist netlist = load_netlist_file(in);
    if (has_extension(out, ".json"))
        write_file(out, to_json(netlist));
    else if (spice_extension(out))
        write_file(out, emit_spice(netlist));
    else
        throw std::runtime_error("cannot infer output format from '" + out.string() + "'");
    std::cout << "wrote " << out.string() << " (" << netlist.components.size()
              << " components)\n";
    return kOk;
}

inline int run_validate(const std::vector<std::string>& inputs, bool as_json) {
    bool all_ok = true;
    for (const auto& input : inputs) {
        ValidationReport report;
        try {
            report = validate(load_netlist_file(input));
        } catch (const NetlistError& e) {
            report = e.report();
        }
        if (as_json) {
            nlohmann::ordered_json doc;
            doc["file"] = input;
            doc["ok"] = report.ok;
            doc["issues"] = nlohmann::ordered_json::array();
            for (const auto& issue : report.issues)
                doc["issues"].push_back(
                    {{"severity", issue.severity == Severity::error ? "error" : "warning"},
                     {"line", issue.line},
                     {"code", issue.code},
                     {"message", issue.message}});
            std::cout << doc.dump(2) << '\n';
        } else {
            std::cout << input << ": " << (report.ok ? "ok" : "INVALID") << " ("
                      << report.error_count() << " errors, " << report.warning_count()
                      << " warnings)\n";
            print_report_issues(report, std::cout);
        }
        all_ok = all_ok && report.ok;
    }
    return all_ok ? kOk : kValidationFailure;
}

inline int run_graph(const std::string& input, const std::string& out_path, bool as_json) {
    const Netlist netlist = load_netlist_file(input);
    const ClassVocabulary vocab = ClassVocabulary::all();
    const PortGraph graph = build_port_graph(netlist, vocab);
    const GraphStats st = graph_stats({graph});
    if (as_json) {
        nlohmann::ordered_json doc;
        doc["file"] = input;
        doc["nodes"] = graph.node_count();
        doc["edges"] = graph.edge_count();
        doc["classes"] = st.class_count;
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << input << ": " << graph.node_count() << " nodes, " << graph.edge_count()
                  << " edges, " << st.class_count << " classes present\n";
    }
    if (!out_path.empty()) {
        write_file(out_path, dump_jsonl(graph, vocab));
        std::cout << "graph dump written to " << out_path << '\n';
    }
    return kOk;
}

inline int run_gen(const std::string& out_dir, int count, std::uint64_t seed, int min_components,
                   int max_components, double extra_net_prob) {
    GenConfig cfg = GenConfig::default_profile();
    cfg.seed = seed;
    cfg.min_components = min_components;
    cfg.max_components = max_components;
    cfg.extra_net_prob = extra_net_prob;

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    const auto netlists = generate_dataset(cfg, count);

    DatasetManifest manifest;
    manifest.vocab = cfg.vocabulary();
    for (int i = 0; i < count; ++i) {
        std::ostringstream stem;
        stem << "gen-" << std::setfill('0') << std::setw(4) << i;
        const std::string cir = stem.str() + ".cir";
        write_file(dir / cir, emit_spice(netlists[i]));
        write_file(dir / (stem.str() + ".json"), to_json(netlists[i]));
        manifest.netlist_paths.push_back(cir);
    }
    write_file(dir / "manifest.json", manifest_to_json(manifest));
    std::cout << "wrote " << count << " circuits and manifest.json to " << dir.string() << '\n';
    return kOk;
}

inline SealConfig seal_config_from(const TrainFlags& flags) {
    SealConfig seal;
    seal.extract.h = flags.hops;
    seal.extract.negative_ratio = flags.negative_ratio;
    seal.extract.seed = flags.seed;
    seal.train.seed = flags.seed;
    seal.train.max_epochs = flags.epochs;
    seal.train.learning_rate =
        flags.learning_rate > 0.0 ? flags.learning_rate : profile_learning_rate(flags.profile);
    return seal;
}

inline int run_train(const TrainFlags& flags) {
    const LoadedDataset dataset = load_dataset(flags.manifest);
    if (dataset.graphs.size() < 10)
        throw std::runtime_error("training needs a manifest with at least 10 netlists");

    SplitPlan plan;
    plan.seed = flags.seed;
    const Splits splits = make_splits(static_cast<int>(dataset.graphs.size()), plan);
    const SealConfig seal = seal_config_from(flags);

    const TrainResult result =
        train_seal(dataset.graphs, splits.train, splits.val, dataset.manifest.vocab, seal);

    for (std::size_t e = 0; e < result.history.epochs.size(); ++e) {
        const auto& rec = result.history.epochs[e];
        std::cout << "epoch " << (e + 1) << " loss " << std::fixed << std::setprecision(4)
                  << rec.train_loss << " val-acc " << rec.val_accuracy << " val-auc "
                  << rec.val_auc;
        if (flags.timings)
            std::cout << " (" << std::setprecision(2) << rec.wall_time_s << " s)";
        std::cout << '\n';
    }
    write_file(flags.out, save_checkpoint(result.params));
    std::cout << "checkpoint written to " << flags.out << " (best epoch "
              << result.history.best_epoch << ")\n";
    return kOk;
}

struct EvalFlags {
    std::string manifest;
    std::string method;
    std::string model_path;
    std::string split = "conventional";
    int fold_count = 5;
    int repetitions = 10;
    std::uint64_t seed = 42;
    int threads = 1;
    bool as_json = false;
    bool timings = false;
    TrainFlags training; // used when method=seal and no checkpoint is given
};

inline int run_eval(const EvalFlags& flags) {
    const LoadedDataset dataset = load_dataset(flags.manifest);
    const bool is_seal = flags.method == "seal";
    std::optional<Heuristic> heuristic;
    if (!is_seal) {
        heuristic = heuristic_from_name(flags.method);
        if (!heuristic)
            throw CLI::ValidationError("--method", "unknown method '" + flags.method + "'");
    }

    std::shared_ptr<const ModelParams> loaded_model;
    if (is_seal && !flags.model_path.empty()) {
        loaded_model =
            std::make_shared<const ModelParams>(load_checkpoint(read_file(flags.model_path)));
        if (loaded_model->vocab_k != dataset.manifest.vocab.k())
            throw std::runtime_error("checkpoint vocabulary width " +
                                     std::to_string(loaded_model->vocab_k) +
                                     " does not match the manifest (" +
                                     std::to_string(dataset.manifest.vocab.k()) + ")");
        if (!loaded_model->vocab_names.empty() &&
            loaded_model->vocab_names != dataset.manifest.vocab.names())
            throw std::runtime_error(
                "checkpoint was trained with a different class vocabulary than the manifest");
    }

    std::vector<SplitPlan> plans;
    if (flags.split == "conventional") {
        SplitPlan plan;
        plan.seed = flags.seed;
        plans.push_back(plan);
    } else if (flags.split == "kfold5") {
        for (int fold = 0; fold < 5; ++fold) {
            SplitPlan plan;
            plan.mode = SplitMode::kfold5;
            plan.fold_index = fold;
            plan.seed = flags.seed;
            plans.push_back(plan);
        }
    } else {
        throw CLI::ValidationError("--split", "unknown split '" + flags.split + "'");
    }

    std::vector<EvalReport> fold_reports;
    for (std::size_t f = 0; f < plans.size(); ++f) {
        const Splits splits = make_splits(static_cast<int>(dataset.graphs.size()), plans[f]);
        std::vector<PortGraph> test_graphs;
        for (int i : splits.test) test_graphs.push_back(dataset.graphs[i]);

        ScorerFn scorer;
        bool probabilistic = false;
        if (is_seal) {
            std::shared_ptr<const ModelParams> model = loaded_model;
            SealConfig seal = seal_config_from(flags.training);
            seal.extract.seed = derive_seed(flags.seed, 500 + f);
            seal.train.seed = derive_seed(flags.seed, 600 + f);
            if (!model) {
                const TrainResult result = train_seal(dataset.graphs, splits.train, splits.val,
                                                      dataset.manifest.vocab, seal);
                model = std::make_shared<const ModelParams>(result.params);
            }
            ExtractConfig extract = seal.extract;
            scorer = make_seal_scorer(model, dataset.manifest.vocab, extract);
            probabilistic = true;
        } else {
            scorer = make_heuristic_scorer(*heuristic);
        }

        EvalOptions opt;
        opt.repetitions = flags.repetitions;
        opt.seed = derive_seed(flags.seed, 700 + f);
        opt.probabilistic = probabilistic;
        opt.threads = flags.threads;
        opt.scorer_name = flags.method;
        fold_reports.push_back(evaluate(scorer, test_graphs, opt));
    }

    const EvalReport report =
        fold_reports.size() == 1 ? fold_reports.front() : combine_reports(fold_reports);
    if (flags.as_json)
        std::cout << eval_report_json(flags.method, flags.split, report, flags.timings).dump(2)
                  << '\n';
    else
        print_eval_table(flags.method, report, flags.timings, std::cout);
    return kOk;
}

struct BenchFlags {
    std::vector<int> sizes = {25, 50, 100, 250};
    std::uint64_t seed = 42;
    std::string timer = "real";
    int repeats = 3;
    bool as_json = false;
    std::string out;
};

inline int run_bench(const BenchFlags& flags) {
    BenchConfig cfg;
    cfg.sizes = flags.sizes;
    cfg.seed = flags.seed;
    cfg.repeats = flags.repeats;
    cfg.synthetic_timer = flags.timer == "synthetic";
    cfg.extract.seed = flags.seed;

    // a quickly trained model; inference cost does not depend on weights
    GenConfig warmup_gen = cfg.gen;
    warmup_gen.seed = derive_seed(flags.seed, 1);
    const auto warmup = generate_dataset(warmup_gen, 30);
    const ClassVocabulary vocab = cfg.gen.vocabulary();
    std::vector<PortGraph> graphs;
    for (const auto& n : warmup) graphs.push_back(build_port_graph(n, vocab));
    std::vector<int> train_idx, val_idx;
    for (int i = 0; i < 24; ++i) train_idx.push_back(i);
    for (int i = 24; i < 30; ++i) val_idx.push_back(i);
    SealConfig seal;
    seal.extract = cfg.extract;
    seal.train.max_epochs = 1;
    seal.train.seed = flags.seed;
    const TrainResult warm = train_seal(graphs, train_idx, val_idx, vocab, seal);

    const ScalingReport report =
        run_scaling_study(std::make_shared<const ModelParams>(warm.params), cfg);

    nlohmann::ordered_json doc;
    doc["timer"] = flags.timer;
    doc["fitted_slope"] = report.fitted_slope;
    doc["points"] = nlohmann::ordered_json::array();
    for (const auto& p : report.points) {
        nlohmann::ordered_json jp;
        jp["total_edges"] = p.total_edges;
        if (cfg.synthetic_timer) {
            jp["time_s"] = p.time_s; // deterministic by construction
        } else {
            jp["time_s"] = p.time_s;
            jp["ram_peak_kb"] = p.ram_peak_kb;
        }
        jp["vram"] = p.vram;
        doc["points"].push_back(std::move(jp));
    }

    const std::string text = doc.dump(2) + "\n";
    if (!flags.out.empty()) {
        write_file(flags.out, text);
        std::cout << "benchmark report written to " << flags.out << '\n';
    }
    if (flags.as_json || flags.out.empty()) std::cout << text;
    return kOk;
}

} // namespace cli_detail

inline int run_cli(int argc, char** argv) {
    using namespace cli_detail;

    CLI::App app{"GNN-ACLP pipeline: SPICE netlists, port graphs, SEAL link prediction"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read flags from a key=value file");
    app.failure_message(CLI::FailureMessage::simple);

    // convert
    std::string convert_in, convert_out;
    auto* convert = app.add_subcommand("convert", "convert between SPICE and JSON netlists");
    convert->add_option("input", convert_in, "input netlist (.cir/.sp/.spice/.net or .json)")
        ->required()
        ->check(CLI::ExistingFile);
    convert->add_option("-o,--out", convert_out, "output path; extension picks the format")
        ->required();

    // validate
    std::vector<std::string> validate_in;
    bool validate_json = false;
    auto* validate_cmd = app.add_subcommand("validate", "parse and validate netlists");
    validate_cmd->add_option("inputs", validate_in, "netlist files")
        ->required()
        ->check(CLI::ExistingFile);
    validate_cmd->add_flag("--json", validate_json, "machine-readable report");

    // graph
    std::string graph_in, graph_out;
    bool graph_json = false;
    auto* graph_cmd = app.add_subcommand("graph", "build the port graph and dump it");
    graph_cmd->add_option("input", graph_in, "netlist file")->required()->check(CLI::ExistingFile);
    graph_cmd->add_option("--out", graph_out, "write the JSON-lines graph dump here");
    graph_cmd->add_flag("--json", graph_json, "machine-readable stats");

    // gen
    std::string gen_out;
    int gen_count = 200;
    std::uint64_t gen_seed = 42;
    int gen_min = 4, gen_max = 9;
    double gen_extra = 0.25;
    auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic circuit dataset");
    gen_cmd->add_option("--count", gen_count, "number of circuits")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen_seed, "generator seed");
    gen_cmd->add_option("--out", gen_out, "output directory")->required();
    gen_cmd->add_option("--min-components", gen_min, "components per circuit, lower bound");
    gen_cmd->add_option("--max-components", gen_max, "components per circuit, upper bound");
    gen_cmd->add_option("--extra-net-prob", gen_extra, "probability of reusing a net per port");

    // train
    TrainFlags train_flags;
    auto* train_cmd = app.add_subcommand("train", "train the SEAL link classifier");
    train_cmd->add_option("--manifest", train_flags.manifest, "dataset manifest")
        ->required()
        ->check(CLI::ExistingFile);
    train_cmd->add_option("--out", train_flags.out, "checkpoint path")->required();
    train_cmd->add_option("--seed", train_flags.seed, "split/training seed");
    train_cmd->add_option("--profile", train_flags.profile,
                          "synthetic | paper-spicenetlist | paper-image2net");
    train_cmd->add_option("--epochs", train_flags.epochs, "epoch cap");
    train_cmd->add_option("--lr", train_flags.learning_rate, "override the profile learning rate");
    train_cmd->add_option("--hops", train_flags.hops, "enclosing subgraph hops");
    train_cmd->add_option("--neg-ratio", train_flags.negative_ratio,
                          "negatives per positive when sampling");
    train_cmd->add_flag("--timings", train_flags.timings, "include wall-clock times in output");

    // eval
    EvalFlags eval_flags;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate SEAL or a heuristic scorer");
    eval_cmd->add_option("--manifest", eval_flags.manifest, "dataset manifest")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd
        ->add_option("--method", eval_flags.method,
                     "seal | cn | jaccard | pa | aa | ra | katz | pagerank | simrank")
        ->required();
    eval_cmd->add_option("--model", eval_flags.model_path, "SEAL checkpoint (trains if absent)")
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--split", eval_flags.split, "conventional | kfold5");
    eval_cmd->add_option("--reps", eval_flags.repetitions, "query repetitions per fold");
    eval_cmd->add_option("--seed", eval_flags.seed, "protocol seed");
    eval_cmd->add_option("--threads", eval_flags.threads, "worker threads for scoring");
    eval_cmd->add_flag("--json", eval_flags.as_json, "machine-readable report");
    eval_cmd->add_flag("--timings", eval_flags.timings,
                       "include wall-clock times (not reproducible run to run)");
    eval_cmd->add_option("--profile", eval_flags.training.profile,
                         "training profile for in-situ SEAL");
    eval_cmd->add_option("--epochs", eval_flags.training.epochs, "epoch cap for in-situ SEAL");
    eval_cmd->add_option("--lr", eval_flags.training.learning_rate,
                         "override the in-situ learning rate");
    eval_cmd->add_option("--hops", eval_flags.training.hops, "enclosing subgraph hops");

    // bench
    BenchFlags bench_flags;
    auto* bench_cmd = app.add_subcommand("bench", "inference scaling study over a dataset ladder");
    bench_cmd->add_option("--sizes", bench_flags.sizes, "circuits per ladder rung");
    bench_cmd->add_option("--seed", bench_flags.seed, "ladder seed");
    bench_cmd->add_option("--timer", bench_flags.timer,
                          "real | synthetic (synthetic is deterministic, for self-tests)");
    bench_cmd->add_option("--repeats", bench_flags.repeats, "timing repeats per rung");
    bench_cmd->add_flag("--json", bench_flags.as_json, "print the JSON report");
    bench_cmd->add_option("--out", bench_flags.out, "write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help and friends
            app.exit(e);
            return kOk;
        }
        print_error("usage", e.what());
        return kUsageError;
    }

    try {
        if (convert->parsed()) return run_convert(convert_in, convert_out);
        if (validate_cmd->parsed()) return run_validate(validate_in, validate_json);
        if (graph_cmd->parsed()) return run_graph(graph_in, graph_out, graph_json);
        if (gen_cmd->parsed())
            return run_gen(gen_out, gen_count, gen_seed, gen_min, gen_max, gen_extra);
        if (train_cmd->parsed()) return run_train(train_flags);
        if (eval_cmd->parsed()) return run_eval(eval_flags);
        if (bench_cmd->parsed()) return run_bench(bench_flags);
    } catch (const CLI::ValidationError& e) {
        print_error("usage", e.what());
        return kUsageError;
    } catch (const NetlistError& e) {
        const auto& issues = e.report().issues;
        for (const auto& issue : issues)
            if (issue.severity == Severity::error)
                print_error(issue.code, issue.message, issue.line);
        return kValidationFailure;
    } catch (const std::exception& e) {
        print_error("runtime", e.what());
        return kRuntimeFailure;
    }
    return kUsageError;
}

} // namespace aclp
