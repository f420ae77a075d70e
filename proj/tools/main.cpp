// skewlab: generate the synthetic imbalance domains, train MLPs of
// depth 1..5 on them, run the study grids and pivot the results.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "skewlab/dataset.hpp"
#include "skewlab/domains.hpp"
#include "skewlab/experiment_io.hpp"
#include "skewlab/harness.hpp"
#include "skewlab/metrics.hpp"
#include "skewlab/mlp.hpp"
#include "presets.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

struct GenerateArgs {
    int c = 0, s = 0, b = 0;
    bool all = false;
    int level = 0;
    double minority_frac = 0.5;
    long total = 10000;
    int v = 0;
    uint64_t seed = 0;
    std::string out = ".";
};

void write_manifest(const fs::path& path, const skewlab::DomainSpec& domain, uint64_t seed,
                    const skewlab::Dataset& ds, const std::string& csv_name) {
    ordered_json m;
    m["family"] = skewlab::family_name(skewlab::family_of(domain));
    ordered_json params;
    std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, skewlab::BackboneSpec>) {
                params["c"] = spec.c;
                params["s"] = spec.s;
                params["b"] = spec.b;
            } else if constexpr (std::is_same_v<T, skewlab::OverlapSpec>) {
                params["k"] = spec.k;
                params["minority_frac"] = spec.minority_frac;
                params["total"] = spec.total;
            } else {
                params["v"] = spec.v;
                params["b"] = spec.b;
            }
        },
        domain);
    m["params"] = params;
    m["seed"] = seed;
    m["rows"] = ds.rows();
    m["class_counts"] = {{"class1", ds.n_class1}, {"class0", ds.n_class0}};
    m["csv"] = csv_name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << m.dump(2) << '\n';
}

void emit_dataset(const fs::path& dir, const std::string& stem, const skewlab::DomainSpec& domain,
                  uint64_t seed) {
    const skewlab::Dataset ds = skewlab::make_training_set(domain, seed);
    const fs::path csv = dir / (stem + ".csv");
    skewlab::save_dataset(ds, csv);
    write_manifest(dir / (stem + ".json"), domain, seed, ds, stem + ".csv");
    std::cout << "wrote " << csv.string() << " (" << ds.rows() << " rows, " << ds.n_class1
              << "/" << ds.n_class0 << " per class)\n";
}

std::string frac_tag(double f) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", f);
    return buf;
}

int cmd_generate_backbone(const GenerateArgs& a) {
    const fs::path dir(a.out);
    fs::create_directories(dir);
    if (a.all) {
        for (int c = 1; c <= 5; ++c)
            for (int s = 1; s <= 5; ++s)
                for (int b = 1; b <= 5; ++b) {
                    const skewlab::BackboneSpec spec(c, s, b);
                    const std::string stem = "backbone_c" + std::to_string(c) + "_s" +
                                             std::to_string(s) + "_b" + std::to_string(b);
                    emit_dataset(dir, stem, spec, a.seed);
                }
        return 0;
    }
    const skewlab::BackboneSpec spec(a.c, a.s, a.b);
    const std::string stem = "backbone_c" + std::to_string(a.c) + "_s" + std::to_string(a.s) +
                             "_b" + std::to_string(a.b);
    emit_dataset(dir, stem, spec, a.seed);
    return 0;
}

int cmd_generate_overlap(const GenerateArgs& a) {
    const fs::path dir(a.out);
    fs::create_directories(dir);
    const skewlab::OverlapSpec spec(a.level, a.minority_frac, a.total);
    const std::string stem =
        "overlap_k" + std::to_string(a.level) + "_f" + frac_tag(a.minority_frac);
    emit_dataset(dir, stem, spec, a.seed);
    return 0;
}

int cmd_generate_gaussian(const GenerateArgs& a) {
    const fs::path dir(a.out);
    fs::create_directories(dir);
    const skewlab::GaussianBackboneSpec spec(a.v, a.b);
    const std::string stem = "gaussian_backbone_v" + std::to_string(a.v) + "_b" + std::to_string(a.b);
    emit_dataset(dir, stem, spec, a.seed);
    return 0;
}

int cmd_train(const std::string& data_path, const std::string& test_path, int depth,
              int hidden_units, double lr, int epochs, int batch_size, uint64_t seed) {
    const skewlab::Dataset ds = skewlab::load_dataset(data_path);
    skewlab::MlpConfig cfg;
    cfg.depth = depth;
    cfg.hidden_units = hidden_units;
    cfg.input_dim = ds.dim;
    cfg.learning_rate = lr;
    cfg.epochs = epochs;
    cfg.batch_size = batch_size;
    cfg.seed = seed;
    auto [model, report] = skewlab::train(cfg, ds);

    const skewlab::Dataset eval_ds = test_path.empty() ? ds : skewlab::load_dataset(test_path);
    const auto preds = skewlab::predict(model, eval_ds.features, eval_ds.rows());
    const auto cm = skewlab::confusion(eval_ds.labels, preds);
    const auto bundle = skewlab::metric_bundle(cm, eval_ds.n_class1, eval_ds.n_class0);

    ordered_json j;
    j["rows_trained"] = ds.rows();
    j["rows_evaluated"] = eval_ds.rows();
    j["evaluated_on"] = test_path.empty() ? "training set" : test_path;
    j["final_epoch_loss"] = report.epoch_loss.back();
    j["steps"] = report.steps;
    ordered_json metrics;
    for (const auto& [name, field] : skewlab::kMetricFields) {
        metrics[name] = bundle.*field;
    }
    j["metrics"] = metrics;
    std::cout << j.dump(2) << '\n';
    std::cerr << "trained in " << report.wall_ms << " ms\n";
    return 0;
}

int cmd_experiment(const std::string& preset, const std::string& config_path,
                   std::optional<uint64_t> seed, const std::string& out, int jobs) {
    std::vector<skewlab::ExperimentGrid> grids;
    if (!preset.empty()) {
        if (!seed.has_value()) {
            throw std::invalid_argument("--seed is required with --preset");
        }
        grids = skewlab::preset_grids(preset, *seed);
    } else {
        skewlab::ExperimentGrid grid = skewlab::parse_experiment_config(config_path);
        if (seed.has_value()) {
            grid.seeds = {*seed};
        }
        grids.push_back(std::move(grid));
    }

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<skewlab::ExperimentResult> results;
    for (const auto& grid : grids) {
        auto part = skewlab::run_grid(grid, jobs);
        results.insert(results.end(), std::make_move_iterator(part.begin()),
                       std::make_move_iterator(part.end()));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const fs::path dir(out);
    fs::create_directories(dir);
    skewlab::write_results_jsonl(dir / "results.jsonl", results);

    std::vector<skewlab::ResultRow> rows;
    rows.reserve(results.size());
    size_t failures = 0;
    for (const auto& r : results) {
        rows.push_back(skewlab::to_result_row(r));
        if (!r.error.empty()) ++failures;
    }
    const auto summary = skewlab::summarize(rows);
    skewlab::write_summary_csv(dir / "summary.csv", summary);

    std::cout << "wrote " << (dir / "results.jsonl").string() << " (" << results.size()
              << " cells) and " << (dir / "summary.csv").string() << '\n';
    std::cerr << results.size() << " cells in " << secs << " s";
    if (failures > 0) std::cerr << ", " << failures << " failed";
    std::cerr << '\n';
    return failures == 0 ? 0 : 2;
}

int cmd_report(const std::string& results_path, const std::string& out_csv) {
    const auto rows = skewlab::read_results_jsonl(results_path);
    const auto summary = skewlab::summarize(rows);
    skewlab::print_report(std::cout, summary);
    if (!out_csv.empty()) {
        skewlab::write_summary_csv(out_csv, summary);
        std::cout << "wrote " << out_csv << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic class-imbalance domains and MLP depth studies"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write dataset CSVs with JSON manifests");
    gen->require_subcommand(1);
    GenerateArgs ga;

    auto* gen_bb = gen->add_subcommand("backbone", "interval backbone family");
    gen_bb->add_option("--c", ga.c, "concept complexity")->check(CLI::Range(1, 5));
    gen_bb->add_option("--s", ga.s, "size level")->check(CLI::Range(1, 5));
    gen_bb->add_option("--b", ga.b, "balance level")->check(CLI::Range(1, 5));
    gen_bb->add_flag("--all", ga.all, "generate all 125 (c,s,b) domains");
    gen_bb->add_option("--seed", ga.seed, "master seed")->required();
    gen_bb->add_option("--out", ga.out, "output directory");

    auto* gen_ov = gen->add_subcommand("overlap", "5-D Gaussian overlap family");
    gen_ov->add_option("--level", ga.level, "overlap level")->required()->check(CLI::Range(1, 10));
    gen_ov->add_option("--minority-frac", ga.minority_frac, "minority fraction");
    gen_ov->add_option("--total", ga.total, "total rows")->check(CLI::Range(2L, 100000000L));
    gen_ov->add_option("--seed", ga.seed, "master seed")->required();
    gen_ov->add_option("--out", ga.out, "output directory");

    auto* gen_gb = gen->add_subcommand("gaussian-backbone", "Gaussian-backbone hybrid family");
    gen_gb->add_option("--v", ga.v, "variance level")->required()->check(CLI::Range(1, 5));
    gen_gb->add_option("--b", ga.b, "balance level")->required()->check(CLI::Range(1, 5));
    gen_gb->add_option("--seed", ga.seed, "master seed")->required();
    gen_gb->add_option("--out", ga.out, "output directory");

    // train
    auto* tr = app.add_subcommand("train", "train one MLP on a dataset CSV and print metrics");
    std::string tr_data, tr_test;
    int tr_depth = 1, tr_hu = 8, tr_epochs = 300, tr_batch = 32;
    double tr_lr = 1e-3;
    uint64_t tr_seed = 0;
    tr->add_option("--data", tr_data, "training CSV")->required();
    tr->add_option("--test", tr_test, "evaluation CSV (defaults to the training set)");
    tr->add_option("--depth", tr_depth, "hidden layers")->check(CLI::Range(1, 5));
    tr->add_option("--hidden-units", tr_hu, "units per hidden layer")->check(CLI::PositiveNumber);
    tr->add_option("--lr", tr_lr, "learning rate")->check(CLI::PositiveNumber);
    tr->add_option("--epochs", tr_epochs, "training epochs")->check(CLI::PositiveNumber);
    tr->add_option("--batch-size", tr_batch, "mini-batch size")->check(CLI::PositiveNumber);
    tr->add_option("--seed", tr_seed, "master seed")->required();

    // experiment
    auto* ex = app.add_subcommand("experiment", "run a study grid");
    std::string ex_preset, ex_config, ex_out = ".";
    std::optional<uint64_t> ex_seed;
    int ex_jobs = 1;
    ex->add_option("--preset", ex_preset, "fig2|fig3|fig4|fig6|sup-cv");
    ex->add_option("--config", ex_config, "JSON grid config")->excludes("--preset");
    ex->add_option("--seed", ex_seed, "master seed (required with --preset)");
    ex->add_option("--out", ex_out, "output directory");
    ex->add_option("--jobs", ex_jobs, "worker threads")->check(CLI::PositiveNumber);

    // report
    auto* rp = app.add_subcommand("report", "summarize a results file");
    std::string rp_results, rp_out;
    rp->add_option("--results", rp_results, "results.jsonl path")->required();
    rp->add_option("--out", rp_out, "also write the pivot CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen_bb->parsed()) {
            if (!ga.all && (gen_bb->count("--c") == 0 || gen_bb->count("--s") == 0 ||
                            gen_bb->count("--b") == 0)) {
                std::cerr << "error: pass --c, --s and --b, or --all\n";
                return 1;
            }
            return cmd_generate_backbone(ga);
        }
        if (gen_ov->parsed()) return cmd_generate_overlap(ga);
        if (gen_gb->parsed()) return cmd_generate_gaussian(ga);
        if (tr->parsed()) {
            return cmd_train(tr_data, tr_test, tr_depth, tr_hu, tr_lr, tr_epochs, tr_batch,
                             tr_seed);
        }
        if (ex->parsed()) {
            if (ex_preset.empty() && ex_config.empty()) {
                std::cerr << "error: experiment needs --preset or --config\n";
                return 1;
            }
            return cmd_experiment(ex_preset, ex_config, ex_seed, ex_out, ex_jobs);
        }
        if (rp->parsed()) return cmd_report(rp_results, rp_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
