#include "skewlab/harness.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "skewlab/rng.hpp"
#include "skewlab/seeds.hpp"

namespace skewlab {

namespace {

// Stream indices of the per-run seed derivation (see also cell_run_seed
// below). Fixed forever: results are only reproducible if these hold.
constexpr uint64_t kDataStream = 1;    // training-set generation
constexpr uint64_t kTrainStream = 2;   // chained with depth, hidden units (and fold for CV)
constexpr uint64_t kFoldsStream = 3;   // stratified fold assignment
constexpr uint64_t kTestSetRoot = 0x7e57da7aull;  // balanced test sets, per family + level

constexpr long kBackboneTestPerInterval = 1000;
constexpr long kOverlapTestPerClass = 2000;
constexpr long kGaussianTestPerSubconcept = 1000;

uint64_t family_tag(Family f) { return static_cast<uint64_t>(f) + 1; }

uint64_t train_seed(uint64_t run_seed, const MlpConfig& cfg, int fold) {
    uint64_t s = derive_seed(run_seed, kTrainStream);
    s = derive_seed(s, static_cast<uint64_t>(cfg.depth));
    s = derive_seed(s, static_cast<uint64_t>(cfg.hidden_units));
    return derive_seed(s, static_cast<uint64_t>(fold));
}

MetricBundle evaluate(const MlpModel& model, const Dataset& test) {
    const auto preds = predict(model, test.features, test.rows());
    const ConfusionMatrix cm = confusion(test.labels, preds);
    return metric_bundle(cm, test.n_class1, test.n_class0);
}

}  // namespace

Family family_of(const DomainSpec& domain) {
    return static_cast<Family>(domain.index());
}

const char* family_name(Family family) {
    switch (family) {
        case Family::backbone: return "backbone";
        case Family::overlap: return "overlap";
        case Family::gaussian_backbone: return "gaussian_backbone";
    }
    return "?";
}

int domain_input_dim(const DomainSpec& domain) {
    return std::holds_alternative<OverlapSpec>(domain) ? kOverlapDim : 1;
}

Dataset make_training_set(const DomainSpec& domain, uint64_t data_seed) {
    return std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, BackboneSpec>) {
                return gen_backbone(spec, data_seed);
            } else if constexpr (std::is_same_v<T, OverlapSpec>) {
                return gen_overlap(spec, data_seed);
            } else {
                return gen_gaussian_backbone(spec, data_seed);
            }
        },
        domain);
}

uint64_t balanced_test_seed(const DomainSpec& domain) {
    const uint64_t base = derive_seed(kTestSetRoot, family_tag(family_of(domain)));
    return std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, BackboneSpec>) {
                return derive_seed(base, static_cast<uint64_t>(spec.c));
            } else if constexpr (std::is_same_v<T, OverlapSpec>) {
                return derive_seed(base, static_cast<uint64_t>(spec.k));
            } else {
                return derive_seed(base, static_cast<uint64_t>(spec.v));
            }
        },
        domain);
}

Dataset make_balanced_test_set(const DomainSpec& domain) {
    const uint64_t seed = balanced_test_seed(domain);
    return std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, BackboneSpec>) {
                return gen_backbone_testset(spec.c, kBackboneTestPerInterval, seed);
            } else if constexpr (std::is_same_v<T, OverlapSpec>) {
                return gen_overlap_testset(spec.k, kOverlapTestPerClass, seed);
            } else {
                return gen_gaussian_backbone_testset(spec.v, kGaussianTestPerSubconcept, seed);
            }
        },
        domain);
}

std::vector<std::vector<size_t>> stratified_folds(const Dataset& ds, int k, uint64_t seed) {
    if (k < 2) {
        throw std::invalid_argument("stratified_folds: k must be >= 2");
    }
    if (static_cast<size_t>(k) > ds.rows()) {
        throw std::invalid_argument("stratified_folds: k = " + std::to_string(k) +
                                    " exceeds dataset rows = " + std::to_string(ds.rows()));
    }
    std::vector<size_t> class1, class0;
    for (size_t i = 0; i < ds.rows(); ++i) {
        (ds.labels[i] == 1 ? class1 : class0).push_back(i);
    }
    Rng rng(seed);
    rng.shuffle(class1);
    rng.shuffle(class0);

    std::vector<std::vector<size_t>> folds(k);
    for (size_t i = 0; i < class1.size(); ++i) {
        folds[i % k].push_back(class1[i]);
    }
    for (size_t i = 0; i < class0.size(); ++i) {
        folds[i % k].push_back(class0[i]);
    }
    return folds;
}

MetricBundle ExperimentResult::mean() const {
    MetricBundle m;
    if (folds.empty()) return m;
    for (const auto& [name, field] : kMetricFields) {
        double sum = 0.0;
        for (const auto& f : folds) sum += f.*field;
        m.*field = sum / static_cast<double>(folds.size());
    }
    return m;
}

MetricBundle ExperimentResult::stddev() const {
    MetricBundle sd;
    if (folds.size() < 2) return sd;
    const MetricBundle m = mean();
    for (const auto& [name, field] : kMetricFields) {
        double ss = 0.0;
        for (const auto& f : folds) {
            const double d = f.*field - m.*field;
            ss += d * d;
        }
        sd.*field = std::sqrt(ss / static_cast<double>(folds.size() - 1));
    }
    return sd;
}

double ExperimentResult::mean_gmean_macro() const { return mean().gmean_macro; }

ExperimentResult run_balanced_test(const DomainSpec& domain, MlpConfig cfg, uint64_t seed) {
    cfg.input_dim = domain_input_dim(domain);
    cfg.seed = train_seed(seed, cfg, 0);
    cfg.validate();

    ExperimentResult result;
    result.domain = domain;
    result.regimen = {Regimen::Kind::balanced_test, 0};
    result.depth = cfg.depth;
    result.hidden_units = cfg.hidden_units;
    result.seed = seed;

    const Dataset ds = make_training_set(domain, derive_seed(seed, kDataStream));
    auto [model, report] = train(cfg, ds);
    result.train_steps = report.steps;
    result.folds.push_back(evaluate(model, make_balanced_test_set(domain)));
    return result;
}

ExperimentResult run_cv(const DomainSpec& domain, MlpConfig cfg, int k, uint64_t seed) {
    cfg.input_dim = domain_input_dim(domain);

    ExperimentResult result;
    result.domain = domain;
    result.regimen = {Regimen::Kind::stratified_cv, k};
    result.depth = cfg.depth;
    result.hidden_units = cfg.hidden_units;
    result.seed = seed;

    const Dataset ds = make_training_set(domain, derive_seed(seed, kDataStream));
    const auto folds = stratified_folds(ds, k, derive_seed(seed, kFoldsStream));

    std::vector<size_t> train_rows;
    for (int f = 0; f < k; ++f) {
        train_rows.clear();
        for (int g = 0; g < k; ++g) {
            if (g == f) continue;
            train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
        }
        const Dataset train_ds = ds.subset(train_rows);
        const Dataset held_out = ds.subset(folds[f]);

        cfg.seed = train_seed(seed, cfg, f + 1);
        auto [model, report] = train(cfg, train_ds);
        result.train_steps += report.steps;
        result.folds.push_back(evaluate(model, held_out));
    }
    return result;
}

size_t select_best(std::span<const HuAuditEntry> entries) {
    if (entries.empty()) {
        throw std::invalid_argument("select_best: no candidates");
    }
    size_t best = 0;
    for (size_t i = 1; i < entries.size(); ++i) {
        const bool better = entries[i].gmean_macro > entries[best].gmean_macro ||
                            (entries[i].gmean_macro == entries[best].gmean_macro &&
                             entries[i].hidden_units < entries[best].hidden_units);
        if (better) best = i;
    }
    return best;
}

ExperimentResult sweep_hidden_units(const DomainSpec& domain, int depth,
                                    std::span<const int> candidates, const Regimen& regimen,
                                    uint64_t seed, const TrainSettings& settings) {
    if (candidates.empty()) {
        throw std::invalid_argument("sweep_hidden_units: no candidates");
    }
    std::vector<ExperimentResult> runs;
    std::vector<HuAuditEntry> audit;
    for (int hu : candidates) {
        MlpConfig cfg;
        cfg.depth = depth;
        cfg.hidden_units = hu;
        cfg.learning_rate = settings.learning_rate;
        cfg.epochs = settings.epochs;
        cfg.batch_size = settings.batch_size;
        ExperimentResult r = regimen.kind == Regimen::Kind::stratified_cv
                                 ? run_cv(domain, cfg, regimen.folds, seed)
                                 : run_balanced_test(domain, cfg, seed);
        audit.push_back({hu, r.mean_gmean_macro()});
        runs.push_back(std::move(r));
    }
    ExperimentResult best = std::move(runs[select_best(audit)]);
    best.audit = std::move(audit);
    return best;
}

void ExperimentGrid::validate() const {
    const auto need = [](const char* name, bool ok) {
        if (!ok) {
            throw std::invalid_argument(std::string("experiment grid: ") + name);
        }
    };
    need("depths must be non-empty", !depths.empty());
    need("hidden_units must be non-empty", !hidden_units.empty());
    need("seeds must be non-empty", !seeds.empty());
    need("cv folds must be >= 2", regimen.kind != Regimen::Kind::stratified_cv || regimen.folds >= 2);
    switch (family) {
        case Family::backbone:
            need("backbone needs c, s, b ranges", !c.empty() && !s.empty() && !b.empty());
            break;
        case Family::overlap:
            need("overlap needs k and minority_frac ranges", !k.empty() && !minority_frac.empty());
            break;
        case Family::gaussian_backbone:
            need("gaussian_backbone needs v and b ranges", !v.empty() && !b.empty());
            break;
    }
    // constructing every spec validates the individual values
    for (const auto& cell : cells()) {
        (void)cell;
    }
}

std::vector<ExperimentGrid::Cell> ExperimentGrid::cells() const {
    std::vector<Cell> out;
    std::vector<DomainSpec> domains;
    switch (family) {
        case Family::backbone:
            for (int ci : c)
                for (int si : s)
                    for (int bi : b) domains.emplace_back(BackboneSpec(ci, si, bi));
            break;
        case Family::overlap:
            for (int ki : k)
                for (double f : minority_frac) domains.emplace_back(OverlapSpec(ki, f, total));
            break;
        case Family::gaussian_backbone:
            for (int vi : v)
                for (int bi : b) domains.emplace_back(GaussianBackboneSpec(vi, bi));
            break;
    }
    for (const auto& d : domains)
        for (int depth : depths)
            for (uint64_t seed : seeds) out.push_back({d, depth, seed});
    return out;
}

uint64_t cell_run_seed(uint64_t master_seed, const DomainSpec& domain) {
    uint64_t s = derive_seed(master_seed, family_tag(family_of(domain)));
    return std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, BackboneSpec>) {
                s = derive_seed(s, static_cast<uint64_t>(spec.c));
                s = derive_seed(s, static_cast<uint64_t>(spec.s));
                return derive_seed(s, static_cast<uint64_t>(spec.b));
            } else if constexpr (std::is_same_v<T, OverlapSpec>) {
                s = derive_seed(s, static_cast<uint64_t>(spec.k));
                s = derive_seed(s, spec.minority_frac);
                return derive_seed(s, static_cast<uint64_t>(spec.total));
            } else {
                s = derive_seed(s, static_cast<uint64_t>(spec.v));
                return derive_seed(s, static_cast<uint64_t>(spec.b));
            }
        },
        domain);
}

std::vector<ExperimentResult> run_grid(const ExperimentGrid& grid, int jobs) {
    grid.validate();
    const auto cells = grid.cells();
    std::vector<ExperimentResult> results(cells.size());

    const auto run_cell = [&](size_t i) {
        const auto& cell = cells[i];
        try {
            results[i] = sweep_hidden_units(cell.domain, cell.depth, grid.hidden_units,
                                            grid.regimen, cell_run_seed(cell.master_seed, cell.domain),
                                            grid.train);
        } catch (const std::exception& e) {
            results[i] = ExperimentResult{};
            results[i].domain = cell.domain;
            results[i].regimen = grid.regimen;
            results[i].depth = cell.depth;
            results[i].error = e.what();
        }
        results[i].seed = cell.master_seed;
    };

    if (jobs <= 1 || cells.size() <= 1) {
        for (size_t i = 0; i < cells.size(); ++i) run_cell(i);
        return results;
    }

    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    const size_t n_threads = std::min(static_cast<size_t>(jobs), cells.size());
    pool.reserve(n_threads);
    for (size_t t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
                run_cell(i);
            }
        });
    }
    for (auto& th : pool) th.join();
    return results;
}

}  // namespace skewlab
