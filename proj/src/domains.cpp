#include "skewlab/domains.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "skewlab/rng.hpp"

namespace skewlab {

namespace {

void check_range(const char* name, int value, int lo, int hi) {
    if (value < lo || value > hi) {
        throw std::invalid_argument(std::string(name) + " must be in [" + std::to_string(lo) +
                                    "," + std::to_string(hi) + "], got " + std::to_string(value));
    }
}

long round_half_up_min1(double x) {
    const long r = static_cast<long>(std::floor(x + 0.5));
    return r < 1 ? 1 : r;
}

/// One uniform draw inside [lo, hi); the final backbone interval keeps
/// its closed right end at 1.
double draw_in_interval(Rng& rng, double lo, double hi, bool last) {
    double x = lo + rng.uniform01() * (hi - lo);
    if (!last && x >= hi) x = std::nextafter(hi, lo);
    return x;
}

}  // namespace

// ---------------------------------------------------------------------
// backbone

BackboneSpec::BackboneSpec(int c, int s, int b) : c(c), s(s), b(b) { validate(); }

void BackboneSpec::validate() const {
    check_range("c", c, 1, 5);
    check_range("s", s, 1, 5);
    check_range("b", b, 1, 5);
}

CountPlan backbone_counts(const BackboneSpec& spec) {
    spec.validate();
    const int n_intervals = 1 << spec.c;
    const double majority_exact =
        (5000.0 / 32.0) * static_cast<double>(1 << spec.s) / static_cast<double>(n_intervals);
    const double balance_divisor = 32.0 / static_cast<double>(1 << spec.b);
    CountPlan plan;
    plan.n_intervals = n_intervals;
    plan.per_interval_majority = round_half_up_min1(majority_exact);
    plan.per_interval_minority = round_half_up_min1(majority_exact / balance_divisor);
    return plan;
}

int backbone_label(double x, int c) {
    const int n = 1 << c;
    int idx = x >= 1.0 ? n - 1 : static_cast<int>(std::floor(x * n));
    return idx % 2 == 0 ? 1 : 0;
}

namespace {

Dataset gen_backbone_impl(int c, long per_interval_majority, long per_interval_minority,
                          uint64_t seed) {
    const int n_intervals = 1 << c;
    const double width = 1.0 / n_intervals;
    Rng rng(seed);
    Dataset ds(1);
    for (int i = 0; i < n_intervals; ++i) {
        const int label = i % 2 == 0 ? 1 : 0;
        const long count = label == 1 ? per_interval_majority : per_interval_minority;
        const double lo = i * width;
        const double hi = (i + 1) * width;
        const bool last = i == n_intervals - 1;
        for (long j = 0; j < count; ++j) {
            const double x = draw_in_interval(rng, lo, hi, last);
            ds.add_row({&x, 1}, label);
        }
    }
    return ds;
}

}  // namespace

Dataset gen_backbone(const BackboneSpec& spec, uint64_t seed) {
    const CountPlan plan = backbone_counts(spec);
    return gen_backbone_impl(spec.c, plan.per_interval_majority, plan.per_interval_minority, seed);
}

Dataset gen_backbone_testset(int c, long per_interval, uint64_t seed) {
    check_range("c", c, 1, 5);
    if (per_interval < 1) {
        throw std::invalid_argument("per_interval must be >= 1");
    }
    return gen_backbone_impl(c, per_interval, per_interval, seed);
}

// ---------------------------------------------------------------------
// overlap

OverlapSpec::OverlapSpec(int k, double minority_frac, long total)
    : k(k), minority_frac(minority_frac), total(total) {
    validate();
}

void OverlapSpec::validate() const {
    check_range("k", k, 1, 10);
    if (std::find(kMinorityFractions.begin(), kMinorityFractions.end(), minority_frac) ==
        kMinorityFractions.end()) {
        throw std::invalid_argument("minority_frac must be one of the 12 study fractions, got " +
                                    std::to_string(minority_frac));
    }
    if (total < 2) {
        throw std::invalid_argument("total must be >= 2, got " + std::to_string(total));
    }
}

namespace {

void append_gaussian_rows(Dataset& ds, Rng& rng, double mean, long count, int label) {
    double row[kOverlapDim];
    for (long i = 0; i < count; ++i) {
        for (int j = 0; j < kOverlapDim; ++j) {
            row[j] = rng.gaussian(mean, 1.0);
        }
        ds.add_row({row, kOverlapDim}, label);
    }
}

double overlap_minority_mean(int k) { return 0.5 + static_cast<double>(k - 1); }

}  // namespace

Dataset gen_overlap(const OverlapSpec& spec, uint64_t seed) {
    spec.validate();
    const long n_minority = std::llround(spec.minority_frac * static_cast<double>(spec.total));
    const long n_majority = spec.total - n_minority;
    Rng rng(seed);
    Dataset ds(kOverlapDim);
    append_gaussian_rows(ds, rng, 0.5, n_majority, 1);
    append_gaussian_rows(ds, rng, overlap_minority_mean(spec.k), n_minority, 0);
    return ds;
}

Dataset gen_overlap_testset(int k, long per_class, uint64_t seed) {
    check_range("k", k, 1, 10);
    if (per_class < 1) {
        throw std::invalid_argument("per_class must be >= 1");
    }
    Rng rng(seed);
    Dataset ds(kOverlapDim);
    append_gaussian_rows(ds, rng, 0.5, per_class, 1);
    append_gaussian_rows(ds, rng, overlap_minority_mean(k), per_class, 0);
    return ds;
}

// ---------------------------------------------------------------------
// gaussian backbone

GaussianBackboneSpec::GaussianBackboneSpec(int v, int b) : v(v), b(b) { validate(); }

void GaussianBackboneSpec::validate() const {
    check_range("v", v, 1, 5);
    check_range("b", b, 1, 5);
}

double gaussian_backbone_sigma(int v) {
    check_range("v", v, 1, 5);
    return v * 0.03125;
}

namespace {

Dataset gen_gaussian_backbone_impl(int v, long majority_count, long minority_count,
                                   uint64_t seed) {
    const double sigma = gaussian_backbone_sigma(v);
    const double width = 1.0 / kGaussianBackboneIntervals;
    Rng rng(seed);
    Dataset ds(1);
    for (int i = 0; i < kGaussianBackboneIntervals; ++i) {
        const int label = i % 2 == 0 ? 1 : 0;
        const long count = label == 1 ? majority_count : minority_count;
        const double center = (i + 0.5) * width;
        for (long j = 0; j < count; ++j) {
            const double x = rng.gaussian(center, sigma);
            ds.add_row({&x, 1}, label);
        }
    }
    return ds;
}

}  // namespace

Dataset gen_gaussian_backbone(const GaussianBackboneSpec& spec, uint64_t seed) {
    spec.validate();
    const double balance_divisor = 32.0 / static_cast<double>(1 << spec.b);
    const long minority_count =
        round_half_up_min1(static_cast<double>(kGaussianBackboneMajorityCount) / balance_divisor);
    return gen_gaussian_backbone_impl(spec.v, kGaussianBackboneMajorityCount, minority_count, seed);
}

Dataset gen_gaussian_backbone_testset(int v, long per_subconcept, uint64_t seed) {
    check_range("v", v, 1, 5);
    if (per_subconcept < 1) {
        throw std::invalid_argument("per_subconcept must be >= 1");
    }
    return gen_gaussian_backbone_impl(v, per_subconcept, per_subconcept, seed);
}

}  // namespace skewlab
