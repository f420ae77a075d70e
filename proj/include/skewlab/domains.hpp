#pragma once

#include <array>
#include <cstdint>

#include "skewlab/dataset.hpp"

namespace skewlab {

// Synthetic two-class families for studying how network depth interacts
// with class imbalance, concept complexity, class overlap and data
// scarcity. All generators are pure functions of (spec, seed) and safe
// to call concurrently.

// ---------------------------------------------------------------------
// Backbone family: [0,1] split into 2^c equal sub-intervals with
// alternating class labels, leftmost interval class 1. s scales the
// sample budget, b the minority share (b=5 balanced, b=1 a 16:1 ratio).
struct BackboneSpec {
    int c = 1;  // concept complexity, 1..5
    int s = 1;  // size level, 1..5
    int b = 1;  // balance level, 1..5

    BackboneSpec() = default;
    BackboneSpec(int c, int s, int b);
    void validate() const;
    bool operator==(const BackboneSpec&) const = default;
};

struct CountPlan {
    long per_interval_majority = 0;
    long per_interval_minority = 0;
    int n_intervals = 0;
};

// Majority count per interval is (5000/32 * 2^s) / 2^c; the minority
// count divides the same unrounded value by 32/2^b. Both round half-up
// and are floored at 1 so no subconcept is empty.
CountPlan backbone_counts(const BackboneSpec& spec);

Dataset gen_backbone(const BackboneSpec& spec, uint64_t seed);

/// Exactly balanced test set: per_interval uniform draws in every sub-interval.
Dataset gen_backbone_testset(int c, long per_interval, uint64_t seed);

/// Class the backbone assigns at x: parity of the containing
/// sub-interval (even index = class 1); x == 1 belongs to the last one.
int backbone_label(double x, int c);

// ---------------------------------------------------------------------
// Overlap family: majority (class 1) ~ N(0.5*1, I_5), minority
// (class 0) ~ N((0.5 + k - 1)*1, I_5); k=1 fully overlapped, k=10
// separated by 9 units in every dimension.
inline constexpr std::array<double, 12> kMinorityFractions = {
    0.01, 0.025, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50};

struct OverlapSpec {
    int k = 1;                   // overlap level, 1..10
    double minority_frac = 0.5;  // one of kMinorityFractions
    long total = 10000;

    OverlapSpec() = default;
    OverlapSpec(int k, double minority_frac, long total = 10000);
    void validate() const;
    bool operator==(const OverlapSpec&) const = default;
};

inline constexpr int kOverlapDim = 5;

Dataset gen_overlap(const OverlapSpec& spec, uint64_t seed);

Dataset gen_overlap_testset(int k, long per_class, uint64_t seed);

// ---------------------------------------------------------------------
// Gaussian-backbone hybrid: the c=2 backbone with each sub-interval
// replaced by a Gaussian at its midpoint. sigma_v = v * 0.03125, i.e.
// v/8 of the interval width, spanning nearly disjoint subconcepts at
// v=1 to heavy mixing at v=5. Majority subconcepts hold 1250 points,
// minority subconcepts 1250 / (32/2^b), rounded half-up, floored at 1.
struct GaussianBackboneSpec {
    int v = 1;  // overlap-variance level, 1..5
    int b = 1;  // balance level, 1..5

    GaussianBackboneSpec() = default;
    GaussianBackboneSpec(int v, int b);
    void validate() const;
    bool operator==(const GaussianBackboneSpec&) const = default;
};

inline constexpr int kGaussianBackboneIntervals = 4;  // c fixed at 2
inline constexpr long kGaussianBackboneMajorityCount = 1250;

double gaussian_backbone_sigma(int v);

Dataset gen_gaussian_backbone(const GaussianBackboneSpec& spec, uint64_t seed);

Dataset gen_gaussian_backbone_testset(int v, long per_subconcept, uint64_t seed);

}  // namespace skewlab
