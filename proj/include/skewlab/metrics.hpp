#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace skewlab {

// Binary confusion counts, class 1 positive.
struct ConfusionMatrix {
    uint64_t tp = 0;
    uint64_t fp = 0;
    uint64_t tn = 0;
    uint64_t fn = 0;

    uint64_t total() const { return tp + fp + tn + fn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

/// Throws std::invalid_argument on length mismatch or labels outside {0,1}.
ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);

// Sensitivity and specificity under both class conventions:
//   S1 = tp/(tp+fn)   S0 = tn/(tn+fp)   Sp1 = S0   Sp0 = S1
// Ratios with an empty denominator evaluate to 0.
struct SensSpec {
    double s0 = 0, sp0 = 0, s1 = 0, sp1 = 0;
};
SensSpec sens_spec(const ConfusionMatrix& cm);

// Per-class geometric means plus their macro and count-weighted
// averages. g0 and g1 multiply the same pair of rates, so all four
// values coincide; both derivations are kept so the identity can be
// checked rather than assumed.
struct GMeanSet {
    double g0 = 0, g1 = 0, macro = 0, weighted = 0;
};
GMeanSet gmean(const ConfusionMatrix& cm, uint64_t n1, uint64_t n0);

double f1_macro(const ConfusionMatrix& cm);
double balanced_accuracy(const ConfusionMatrix& cm);

struct MetricBundle {
    double sens_class0 = 0, spec_class0 = 0;
    double sens_class1 = 0, spec_class1 = 0;
    double gmean_class0 = 0, gmean_class1 = 0;
    double gmean_macro = 0, gmean_weighted = 0;
    double f1_macro = 0;
    double balanced_accuracy = 0;

    bool operator==(const MetricBundle&) const = default;
};

MetricBundle metric_bundle(const ConfusionMatrix& cm, uint64_t n1, uint64_t n0);

// Field table shared by aggregation and serialization.
inline constexpr std::pair<const char*, double MetricBundle::*> kMetricFields[] = {
    {"sens_class0", &MetricBundle::sens_class0},
    {"spec_class0", &MetricBundle::spec_class0},
    {"sens_class1", &MetricBundle::sens_class1},
    {"spec_class1", &MetricBundle::spec_class1},
    {"gmean_class0", &MetricBundle::gmean_class0},
    {"gmean_class1", &MetricBundle::gmean_class1},
    {"gmean_macro", &MetricBundle::gmean_macro},
    {"gmean_weighted", &MetricBundle::gmean_weighted},
    {"f1_macro", &MetricBundle::f1_macro},
    {"balanced_accuracy", &MetricBundle::balanced_accuracy},
};

}  // namespace skewlab
