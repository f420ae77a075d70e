#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "skewlab/dataset.hpp"
#include "skewlab/domains.hpp"
#include "skewlab/metrics.hpp"
#include "skewlab/mlp.hpp"

namespace skewlab {

using DomainSpec = std::variant<BackboneSpec, OverlapSpec, GaussianBackboneSpec>;

enum class Family { backbone, overlap, gaussian_backbone };

Family family_of(const DomainSpec& domain);
const char* family_name(Family family);
int domain_input_dim(const DomainSpec& domain);

Dataset make_training_set(const DomainSpec& domain, uint64_t data_seed);

// Balanced test sets draw from a fixed seed stream keyed only by family
// and difficulty level, never from a run's seed, so every model in a
// study faces identical test data and no training randomness leaks in.
uint64_t balanced_test_seed(const DomainSpec& domain);
Dataset make_balanced_test_set(const DomainSpec& domain);

struct Regimen {
    enum class Kind { stratified_cv, balanced_test };
    Kind kind = Kind::balanced_test;
    int folds = 10;
};

// Disjoint index sets covering the dataset; per-class counts across
// folds differ by at most one. Throws if k < 2 or k > rows.
std::vector<std::vector<size_t>> stratified_folds(const Dataset& ds, int k, uint64_t seed);

struct HuAuditEntry {
    int hidden_units = 0;
    double gmean_macro = 0.0;
};

struct ExperimentResult {
    DomainSpec domain = BackboneSpec{};
    Regimen regimen;
    int depth = 0;
    int hidden_units = 0;
    uint64_t seed = 0;  // run seed the cell was keyed by
    std::vector<MetricBundle> folds;  // one per CV fold; single entry for balanced test
    std::vector<HuAuditEntry> audit;  // every candidate tried by the sweep
    uint64_t train_steps = 0;
    std::string error;  // nonempty if the cell failed

    MetricBundle mean() const;
    MetricBundle stddev() const;  // sample std over folds, zeros when < 2
    double mean_gmean_macro() const;
};

struct TrainSettings {
    double learning_rate = 1e-3;
    int epochs = 300;
    int batch_size = 32;
};

// Both runners generate the training set from `seed`, train with
// streams derived from (seed, depth, hidden units), and ignore whatever
// cfg.seed and cfg.input_dim the caller left behind. Deterministic per
// (domain, cfg, seed). The training set itself does not depend on the
// architecture, so different depths compare on identical data.
ExperimentResult run_cv(const DomainSpec& domain, MlpConfig cfg, int k, uint64_t seed);
ExperimentResult run_balanced_test(const DomainSpec& domain, MlpConfig cfg, uint64_t seed);

/// Index of the entry with maximal G-Mean; ties go to fewer hidden units.
size_t select_best(std::span<const HuAuditEntry> entries);

ExperimentResult sweep_hidden_units(const DomainSpec& domain, int depth,
                                    std::span<const int> candidates, const Regimen& regimen,
                                    uint64_t seed, const TrainSettings& settings = {});

struct ExperimentGrid {
    Family family = Family::backbone;
    // backbone ranges (b is shared with gaussian_backbone)
    std::vector<int> c, s, b;
    // overlap ranges
    std::vector<int> k;
    std::vector<double> minority_frac;
    long total = 10000;
    // gaussian_backbone range
    std::vector<int> v;

    std::vector<int> depths;
    std::vector<int> hidden_units;  // sweep candidates
    std::vector<uint64_t> seeds;    // master seeds, one replication each
    Regimen regimen;
    TrainSettings train;

    void validate() const;

    struct Cell {
        DomainSpec domain = BackboneSpec{};
        int depth = 0;
        uint64_t master_seed = 0;
    };
    /// Lexicographic over (family parameters..., depth, seed).
    std::vector<Cell> cells() const;
};

/// Run seed for one cell: master seed chained with the family id and
/// domain parameters (depth excluded, so all depths share data).
uint64_t cell_run_seed(uint64_t master_seed, const DomainSpec& domain);

// Executes every cell, optionally on `jobs` threads. Results come back
// in cell order regardless of scheduling; a failing cell records its
// error message instead of aborting the grid.
std::vector<ExperimentResult> run_grid(const ExperimentGrid& grid, int jobs = 1);

}  // namespace skewlab
