#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "skewlab/metrics.hpp"
#include "skewlab/rng.hpp"

using namespace skewlab;

TEST_CASE("confusion counts with class 1 positive") {
    const std::vector<int> t = {1, 0, 1, 0};
    SUBCASE("perfect predictions") {
        const auto cm = confusion(t, t);
        CHECK(cm.tp == 2);
        CHECK(cm.tn == 2);
        CHECK(cm.fp == 0);
        CHECK(cm.fn == 0);
    }
    SUBCASE("all predicted positive") {
        const std::vector<int> yt = {1, 0};
        const std::vector<int> yp = {1, 1};
        const auto cm = confusion(yt, yp);
        CHECK(cm.tp == 1);
        CHECK(cm.fp == 1);
        CHECK(cm.tn == 0);
        CHECK(cm.fn == 0);
    }
    SUBCASE("empty inputs give the zero matrix") {
        const auto cm = confusion({}, {});
        CHECK(cm.total() == 0);
    }
    SUBCASE("length mismatch rejected") {
        const std::vector<int> yp = {1, 0, 1};
        CHECK_THROWS_AS(confusion(t, yp), std::invalid_argument);
    }
    SUBCASE("invalid label rejected") {
        const std::vector<int> yt = {1, 2};
        const std::vector<int> yp = {1, 0};
        CHECK_THROWS_AS(confusion(yt, yp), std::invalid_argument);
    }
}

TEST_CASE("sensitivity and specificity") {
    SUBCASE("tp=50 fn=50 tn=100 fp=0") {
        const auto ss = sens_spec({.tp = 50, .fp = 0, .tn = 100, .fn = 50});
        CHECK(ss.s1 == doctest::Approx(0.5));
        CHECK(ss.sp1 == doctest::Approx(1.0));
        CHECK(ss.s0 == doctest::Approx(1.0));
        CHECK(ss.sp0 == doctest::Approx(0.5));
    }
    SUBCASE("perfect matrix") {
        const auto ss = sens_spec({.tp = 4, .fp = 0, .tn = 6, .fn = 0});
        CHECK(ss.s0 == 1.0);
        CHECK(ss.sp0 == 1.0);
        CHECK(ss.s1 == 1.0);
        CHECK(ss.sp1 == 1.0);
    }
    SUBCASE("no class-0 rows: 0/0 convention") {
        const auto ss = sens_spec({.tp = 5, .fp = 0, .tn = 0, .fn = 0});
        CHECK(ss.s0 == 0.0);
    }
}

TEST_CASE("g-mean values") {
    SUBCASE("half sensitivity, full specificity") {
        const auto g = gmean({.tp = 50, .fp = 0, .tn = 100, .fn = 50}, 100, 100);
        const double expected = std::sqrt(0.5);
        CHECK(g.g0 == doctest::Approx(expected).epsilon(1e-12));
        CHECK(g.g1 == doctest::Approx(expected).epsilon(1e-12));
        CHECK(g.macro == doctest::Approx(expected).epsilon(1e-12));
        CHECK(g.weighted == doctest::Approx(expected).epsilon(1e-12));
        CHECK(g.macro == doctest::Approx(0.70711).epsilon(1e-4));
    }
    SUBCASE("all-majority predictor scores zero") {
        const auto g = gmean({.tp = 0, .fp = 0, .tn = 100, .fn = 10}, 10, 100);
        CHECK(g.g0 == 0.0);
        CHECK(g.g1 == 0.0);
        CHECK(g.macro == 0.0);
    }
}

TEST_CASE("macro equals weighted for random matrices and counts") {
    Rng rng(2024);
    for (int it = 0; it < 2000; ++it) {
        const ConfusionMatrix cm{.tp = rng.below(1000), .fp = rng.below(1000),
                                 .tn = rng.below(1000), .fn = rng.below(1000)};
        const uint64_t n1 = 1 + rng.below(1000000);
        const uint64_t n0 = 1 + rng.below(1000000);
        const auto g = gmean(cm, n1, n0);
        CHECK(std::abs(g.g0 - g.g1) <= 1e-12);
        CHECK(std::abs(g.macro - g.g0) <= 1e-12);
        CHECK(std::abs(g.weighted - g.macro) <= 1e-12);
    }
}

TEST_CASE("g-mean is zero exactly when tp or tn is zero") {
    Rng rng(99);
    for (int it = 0; it < 500; ++it) {
        const ConfusionMatrix cm{.tp = rng.below(4), .fp = rng.below(50), .tn = rng.below(4),
                                 .fn = rng.below(50)};
        const auto g = gmean(cm, 1, 1);
        if (cm.tp == 0 || cm.tn == 0) {
            CHECK(g.macro == 0.0);
        } else {
            CHECK(g.macro > 0.0);
        }
    }
}

TEST_CASE("metrics are invariant under count scaling") {
    Rng rng(512);
    for (int it = 0; it < 300; ++it) {
        const ConfusionMatrix cm{.tp = rng.below(200), .fp = rng.below(200),
                                 .tn = rng.below(200), .fn = rng.below(200)};
        for (uint64_t m : {2ull, 7ull, 13ull}) {
            const ConfusionMatrix scaled{.tp = cm.tp * m, .fp = cm.fp * m, .tn = cm.tn * m,
                                         .fn = cm.fn * m};
            CHECK(metric_bundle(cm, 3, 5) == metric_bundle(scaled, 3, 5));
        }
    }
}

TEST_CASE("macro g-mean is invariant under swapping the positive class") {
    Rng rng(77);
    for (int it = 0; it < 300; ++it) {
        const ConfusionMatrix cm{.tp = rng.below(200), .fp = rng.below(200),
                                 .tn = rng.below(200), .fn = rng.below(200)};
        const ConfusionMatrix swapped{.tp = cm.tn, .fp = cm.fn, .tn = cm.tp, .fn = cm.fp};
        CHECK(gmean(cm, 1, 1).macro == gmean(swapped, 1, 1).macro);
    }
}

TEST_CASE("f1 and balanced accuracy") {
    SUBCASE("perfect matrix") {
        const ConfusionMatrix cm{.tp = 10, .fp = 0, .tn = 20, .fn = 0};
        CHECK(f1_macro(cm) == doctest::Approx(1.0));
        CHECK(balanced_accuracy(cm) == doctest::Approx(1.0));
    }
    SUBCASE("tp=50 fn=50 tn=100 fp=0") {
        const ConfusionMatrix cm{.tp = 50, .fp = 0, .tn = 100, .fn = 50};
        CHECK(balanced_accuracy(cm) == doctest::Approx(0.75));
    }
    SUBCASE("never predicts positive") {
        const ConfusionMatrix cm{.tp = 0, .fp = 0, .tn = 100, .fn = 100};
        CHECK(balanced_accuracy(cm) == doctest::Approx(0.5));
    }
}
