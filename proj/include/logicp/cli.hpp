#pragma once

#include <logicp/dataset.hpp>
#include <logicp/errors.hpp>
#include <logicp/features.hpp>
#include <logicp/io.hpp>
#include <logicp/metrics.hpp>
#include <logicp/parallel.hpp>
#include <logicp/predictor.hpp>
#include <logicp/registration.hpp>
#include <logicp/synthetic.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

/// Batch command-line front end.
///
/// Exit codes: 0 success, 1 numerical failure, 2 usage or input error.
/// Data goes to the output stream (or --out); progress and errors to the
/// error stream.
namespace logicp::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

/// Parsed flags of one invocation. Defaults match the library defaults.
struct RunConfig {
    // register
    std::string scan_a, scan_b, trace_path;
    // predict / evaluate / experiment / split
    std::string train_manifest, test_manifest, manifest, baskets;
    std::string predictions_csv, truth_csv;
    std::string out_path, out_dir, format = "csv", label = "predictor";
    std::vector<std::string> predictors{"icp"};
    std::size_t k = 3;
    unsigned jobs = default_jobs();
    bool quiet = false;
    int run_index = 0;

    IcpConfig icp;
    MetricConfig metric;
    SplitSpec split;

    // synth
    synth::PrototypeDatasetSpec synth;
    std::string scan_format = "csv";
};

namespace detail {

inline void add_icp_flags(CLI::App& cmd, RunConfig& rc) {
    cmd.add_option("--tau", rc.icp.tau, "ICP convergence threshold on the MSE decrease (mm^2)")->capture_default_str();
    cmd.add_option("--max-iters", rc.icp.max_iterations, "ICP iteration cap")->capture_default_str();
    cmd.add_flag("--pre-align", rc.icp.pre_align, "Translate the moving scan onto the model centroid first");
    cmd.add_option("--stride", rc.icp.stride, "Use every n-th point of the moving scan")->capture_default_str();
}

inline void add_metric_flags(CLI::App& cmd, RunConfig& rc) {
    cmd.add_option("--epsilon", rc.metric.epsilon, "Ratio-score floor epsilon")->capture_default_str();
    cmd.add_flag_callback("--no-filter", [&rc] { rc.metric.filter_zero_pairs = false; },
                          "Keep products that are zero in both baskets");
}

inline void add_split_flags(CLI::App& cmd, RunConfig& rc) {
    cmd.add_option("--train-frac", rc.split.train_fraction, "Training fraction")->capture_default_str();
    cmd.add_option("--seed", rc.split.seed, "Partition seed")->capture_default_str();
    cmd.add_option("--runs", rc.split.runs, "Number of random partitions")->capture_default_str();
    cmd.add_flag("--drop-empty", rc.split.drop_empty_baskets, "Remove logs with all-zero baskets first");
    cmd.add_option("--baskets", rc.baskets, "Baskets csv (default: baskets.csv beside the manifest)");
}

inline void add_output_flags(CLI::App& cmd, RunConfig& rc) {
    cmd.add_option("--out", rc.out_path, "Output file (default: standard output)");
    cmd.add_option("--format", rc.format, "Report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

inline void add_predictor_flags(CLI::App& cmd, RunConfig& rc, bool many) {
    auto* opt = cmd.add_option("--predictor", rc.predictors, many ? "Predictors (comma separated)" : "Predictor")
                    ->check(CLI::IsMember({"icp", "mean", "knn"}))
                    ->capture_default_str();
    if (many)
        opt->delimiter(',');
    else
        opt->expected(1);
    cmd.add_option("--k", rc.k, "Neighbors for the feature kNN")->check(CLI::IsMember({1, 3, 5}))->capture_default_str();
    cmd.add_option("--jobs", rc.jobs, "Worker threads")->check(CLI::PositiveNumber);
    cmd.add_flag("--quiet", rc.quiet, "No progress messages");
}

inline void validate(const RunConfig& rc) {
    rc.icp.validate();
    rc.metric.validate();
    rc.split.validate();
    if (rc.jobs < 1) throw InvalidInput("--jobs must be at least 1");
}

inline fs::path baskets_for(const RunConfig& rc, const fs::path& manifest) {
    return rc.baskets.empty() ? io::default_baskets_path(manifest) : fs::path(rc.baskets);
}

/// Writes to --out when given, else to `out`.
template <class Fn>
void emit(const RunConfig& rc, std::ostream& out, Fn&& write) {
    if (rc.out_path.empty()) {
        write(out);
        return;
    }
    auto file = io::detail::open_for_writing(rc.out_path);
    write(static_cast<std::ostream&>(file));
    io::detail::finish_writing(file, rc.out_path);
}

inline std::vector<std::string> product_names(const Dataset& ds) {
    return ds.product_names.empty() ? io::default_product_names(ds.product_count) : ds.product_names;
}

inline void attach_features(Dataset& ds, unsigned jobs) {
    parallel_for(ds.records.size(), jobs, [&](std::size_t i) {
        auto& r = ds.records[i];
        if (!r.features) r.features = extract_features(r.scan);
    });
}

/// One prediction per test record, in test order.
inline std::vector<PredictionOutcome> predict_with(const std::string& predictor, Dataset& train, Dataset& test,
                                                   const RunConfig& rc) {
    std::vector<PredictionOutcome> out;
    if (predictor == "mean") {
        const auto basket = mean_predict(train.records);
        out.assign(test.records.size(), PredictionOutcome{basket, std::nullopt, std::nullopt});
    } else if (predictor == "knn") {
        attach_features(train, rc.jobs);
        attach_features(test, rc.jobs);
        const FeatureKnn knn(train.records);
        if (rc.k > train.records.size()) throw InvalidInput("--k exceeds the training set size");
        for (const auto& r : test.records) out.push_back(knn.predict(*r.features, rc.k));
    } else {
        const IcpNearestNeighbor nn(train.records, rc.jobs);
        std::vector<PointCloud> queries;
        queries.reserve(test.records.size());
        for (const auto& r : test.records) queries.push_back(r.scan);
        out = nn.predict_all(queries, rc.icp, rc.jobs);
    }
    return out;
}

inline io::PredictionTable to_table(const Dataset& test, const std::vector<PredictionOutcome>& predictions,
                                    std::vector<std::string> names) {
    io::PredictionTable t;
    t.product_names = std::move(names);
    for (std::size_t i = 0; i < predictions.size(); ++i)
        t.rows.push_back({test.records[i].id, predictions[i].neighbor_id, predictions[i].distance,
                          predictions[i].predicted});
    return t;
}

/// Test manifests need no baskets; records get empty placeholder baskets.
inline Dataset load_queries(const fs::path& manifest, std::size_t product_count, unsigned jobs) {
    const auto m = io::load_manifest(manifest);
    std::vector<std::optional<PointCloud>> scans(m.entries.size());
    parallel_for(scans.size(), jobs, [&](std::size_t i) { scans[i].emplace(io::load_scan(m.entries[i].scan_path)); });
    Dataset ds;
    ds.product_count = product_count;
    for (std::size_t i = 0; i < scans.size(); ++i)
        ds.records.push_back({m.entries[i].id, std::move(*scans[i]),
                              ProductBasket(std::vector<Quantity>(product_count, 0)), std::nullopt});
    return ds;
}

}  // namespace detail

inline int cmd_register(const RunConfig& rc, std::ostream& out) {
    const auto a = io::load_scan(rc.scan_a);
    const auto b = io::load_scan(rc.scan_b);
    const auto [result, trace] = icp_align(a, b, rc.icp);
    const auto& q = result.transform.rotation();
    const auto& t = result.transform.translation();
    using io::format_shortest;
    out << "quaternion: " << format_shortest(q.w()) << ' ' << format_shortest(q.x()) << ' ' << format_shortest(q.y())
        << ' ' << format_shortest(q.z()) << '\n'
        << "translation: " << format_shortest(t.x) << ' ' << format_shortest(t.y) << ' ' << format_shortest(t.z)
        << '\n'
        << "mse: " << format_shortest(result.mse) << '\n'
        << "iterations: " << trace.iterations.size() << '\n'
        << "terminal_reason: " << to_string(trace.terminal_reason) << '\n';
    if (!rc.trace_path.empty()) {
        auto file = io::detail::open_for_writing(rc.trace_path);
        file << "iteration,d_k\n";
        for (const auto& it : trace.iterations) file << it.iteration << ',' << format_shortest(it.mse) << '\n';
        io::detail::finish_writing(file, rc.trace_path);
    }
    return kExitOk;
}

inline int cmd_predict(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    const fs::path train_manifest(rc.train_manifest);
    auto train = io::load_dataset(train_manifest, detail::baskets_for(rc, train_manifest), rc.jobs);
    if (train.records.empty()) throw InvalidInput("training manifest '" + rc.train_manifest + "' lists no logs");
    auto test = detail::load_queries(rc.test_manifest, train.product_count, rc.jobs);
    const auto& predictor = rc.predictors.front();
    if (!rc.quiet)
        err << "predicting " << test.records.size() << " logs against " << train.records.size() << " with "
            << predictor << '\n';
    const auto predictions = detail::predict_with(predictor, train, test, rc);
    const auto table = detail::to_table(test, predictions, detail::product_names(train));
    detail::emit(rc, out, [&](std::ostream& os) { io::write_predictions(os, table); });
    return kExitOk;
}

inline int cmd_evaluate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    const auto predictions = io::load_predictions(rc.predictions_csv);
    const auto truth = io::load_baskets(rc.truth_csv);
    if (predictions.product_names != truth.product_names)
        throw InvalidInput("prediction and truth files have different product columns");

    std::set<std::string> predicted_ids;
    for (const auto& r : predictions.rows) predicted_ids.insert(r.id);
    std::vector<std::string> missing;
    for (const auto& id : truth.ids)
        if (!predicted_ids.count(id)) missing.push_back(id + " (no prediction)");
    for (const auto& r : predictions.rows)
        if (!truth.baskets.count(r.id)) missing.push_back(r.id + " (no truth row)");
    if (!missing.empty()) {
        err << "error: prediction and truth ids differ:\n";
        for (const auto& m : missing) err << "  " << m << '\n';
        return kExitUsage;
    }

    std::vector<ScoredPair> pairs;
    for (const auto& r : predictions.rows) pairs.push_back({truth.baskets.at(r.id), r.basket});
    const std::vector<io::LabeledReport> reports{{rc.label, evaluate(pairs, rc.metric)}};
    detail::emit(rc, out, [&](std::ostream& os) { io::write_report(os, reports, *io::parse_report_format(rc.format)); });
    return kExitOk;
}

inline int cmd_experiment(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    const fs::path manifest(rc.manifest);
    auto ds = io::load_dataset(manifest, detail::baskets_for(rc, manifest), rc.jobs);
    if (rc.split.drop_empty_baskets) ds = drop_empty(ds);
    const auto names = detail::product_names(ds);

    std::map<std::string, std::vector<ScoreReport>> per_predictor;
    std::vector<io::LabeledReport> rows;
    for (int run = 0; run < rc.split.runs; ++run) {
        auto [train, test] = split(ds, rc.split, run);
        for (const auto& predictor : rc.predictors) {
            const auto predictions = detail::predict_with(predictor, train, test, rc);
            std::vector<ScoredPair> pairs;
            for (std::size_t i = 0; i < predictions.size(); ++i)
                pairs.push_back({test.records[i].basket, predictions[i].predicted});
            const auto report = evaluate(pairs, rc.metric);
            per_predictor[predictor].push_back(report);
            rows.push_back({predictor + "/run" + std::to_string(run), report});
            if (!rc.out_dir.empty()) {
                fs::create_directories(rc.out_dir);
                io::write_predictions(fs::path(rc.out_dir) / (predictor + "_run" + std::to_string(run) + ".csv"),
                                      detail::to_table(test, predictions, names));
            }
            if (!rc.quiet)
                err << "run " << run + 1 << '/' << rc.split.runs << ' ' << predictor
                    << ": s_z = " << io::format_score(report.s_z) << '\n';
        }
    }
    for (const auto& predictor : rc.predictors)
        rows.push_back({predictor + "/mean", mean_report(per_predictor[predictor])});
    detail::emit(rc, out, [&](std::ostream& os) { io::write_report(os, rows, *io::parse_report_format(rc.format)); });
    return kExitOk;
}

inline int cmd_split(const RunConfig& rc, std::ostream& out) {
    const fs::path manifest(rc.manifest);
    auto ds = io::load_dataset(manifest, detail::baskets_for(rc, manifest), rc.jobs);
    if (rc.split.drop_empty_baskets) ds = drop_empty(ds);
    const auto m = io::load_manifest(manifest);
    std::map<std::string, fs::path> scan_of;
    for (const auto& e : m.entries) scan_of[e.id] = e.scan_path;

    const auto [train, test] = split(ds, rc.split, rc.run_index);
    const fs::path dir(rc.out_dir);
    fs::create_directories(dir);
    std::vector<std::pair<std::string, ProductBasket>> rows;
    auto write_part = [&](const Dataset& part, const std::string& name) {
        std::vector<io::ManifestEntry> entries;
        for (const auto& r : part.records) {
            entries.push_back({r.id, scan_of.at(r.id)});
            rows.emplace_back(r.id, r.basket);
        }
        io::write_manifest(dir / name, entries);
    };
    write_part(train, "train.csv");
    write_part(test, "test.csv");
    io::write_baskets(dir / "baskets.csv", detail::product_names(ds), rows);
    out << "train: " << train.records.size() << '\n' << "test: " << test.records.size() << '\n';
    return kExitOk;
}

inline int cmd_synth(const RunConfig& rc, std::ostream& out) {
    const auto format = io::parse_scan_format(rc.scan_format);
    if (!format) throw InvalidInput("unknown scan format '" + rc.scan_format + "'");
    const auto ds = synth::make_prototype_dataset(rc.synth);
    const auto manifest = io::write_dataset(ds, rc.out_dir, *format);
    out << manifest.string() << '\n';
    return kExitOk;
}

/// Parses `args` (without the program name) and runs the command.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    RunConfig rc;
    CLI::App app{"Point-cloud registration and ICP nearest-neighbor basket prediction", "logicp"};
    app.require_subcommand(1);

    auto* reg = app.add_subcommand("register", "Align scan A onto scan B with point-to-point ICP");
    reg->add_option("scan_a", rc.scan_a, "Moving scan")->required();
    reg->add_option("scan_b", rc.scan_b, "Model scan")->required();
    reg->add_option("--trace", rc.trace_path, "Write per-iteration d_k as csv");
    detail::add_icp_flags(*reg, rc);

    auto* pred = app.add_subcommand("predict", "Predict baskets of test logs from a training set");
    pred->add_option("train_manifest", rc.train_manifest, "Training manifest (id,scan_path)")->required();
    pred->add_option("test_manifest", rc.test_manifest, "Test manifest (id,scan_path)")->required();
    pred->add_option("--baskets", rc.baskets, "Training baskets csv (default: baskets.csv beside the manifest)");
    pred->add_option("--out", rc.out_path, "Output file (default: standard output)");
    detail::add_predictor_flags(*pred, rc, false);
    detail::add_icp_flags(*pred, rc);

    auto* ev = app.add_subcommand("evaluate", "Score predictions against true baskets");
    ev->add_option("predictions_csv", rc.predictions_csv, "Predictions csv")->required();
    ev->add_option("truth_csv", rc.truth_csv, "True baskets csv")->required();
    ev->add_option("--label", rc.label, "Predictor label for the report row")->capture_default_str();
    detail::add_metric_flags(*ev, rc);
    detail::add_output_flags(*ev, rc);

    auto* ex = app.add_subcommand("experiment", "Repeated random-split evaluation of one or more predictors");
    ex->add_option("manifest", rc.manifest, "Dataset manifest (id,scan_path)")->required();
    ex->add_option("--predictions-dir", rc.out_dir, "Also write per-run prediction files here");
    detail::add_predictor_flags(*ex, rc, true);
    detail::add_icp_flags(*ex, rc);
    detail::add_metric_flags(*ex, rc);
    detail::add_split_flags(*ex, rc);
    detail::add_output_flags(*ex, rc);

    auto* sp = app.add_subcommand("split", "Write the train/test partition of one run");
    sp->add_option("manifest", rc.manifest, "Dataset manifest (id,scan_path)")->required();
    sp->add_option("--run-index", rc.run_index, "Run whose partition to write")->capture_default_str();
    sp->add_option("--out-dir", rc.out_dir, "Directory for train.csv, test.csv, baskets.csv")->required();
    detail::add_split_flags(*sp, rc);

    auto* sy = app.add_subcommand("synth", "Generate a clustered synthetic log dataset");
    sy->add_option("--out-dir", rc.out_dir, "Output directory")->required();
    sy->add_option("--prototypes", rc.synth.prototypes, "Distinct logs")->capture_default_str();
    sy->add_option("--copies", rc.synth.copies_per_prototype, "Observations per prototype")->capture_default_str();
    sy->add_option("--points", rc.synth.points_per_scan, "Points per scan")->capture_default_str();
    sy->add_option("--products", rc.synth.product_count, "Products per basket")->capture_default_str();
    sy->add_option("--max-rotation-deg", rc.synth.max_rotation_deg, "Largest copy rotation")->capture_default_str();
    sy->add_option("--max-translation", rc.synth.max_translation_mm, "Largest copy translation (mm)")
        ->capture_default_str();
    sy->add_option("--jitter", rc.synth.jitter_sigma_mm, "Coordinate noise sigma (mm)")->capture_default_str();
    sy->add_option("--seed", rc.synth.seed, "Generator seed")->capture_default_str();
    sy->add_option("--scan-format", rc.scan_format, "csv, xyz or ply-ascii")->capture_default_str();

    std::vector<std::string> argv_storage{"logicp"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        detail::validate(rc);
        if (*reg) return cmd_register(rc, out);
        if (*pred) return cmd_predict(rc, out, err);
        if (*ev) return cmd_evaluate(rc, out, err);
        if (*ex) return cmd_experiment(rc, out, err);
        if (*sp) return cmd_split(rc, out);
        if (*sy) return cmd_synth(rc, out);
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace logicp::cli
