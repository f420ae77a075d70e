#include "skewlab/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace skewlab {

namespace {

/// Count ratio with the 0/0 convention: an empty denominator yields 0.
double ratio(uint64_t num, uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw std::invalid_argument("confusion: length mismatch (" + std::to_string(y_true.size()) +
                                    " vs " + std::to_string(y_pred.size()) + ")");
    }
    ConfusionMatrix cm;
    for (size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i];
        const int p = y_pred[i];
        if ((t != 0 && t != 1) || (p != 0 && p != 1)) {
            throw std::invalid_argument("confusion: labels must be 0 or 1");
        }
        if (t == 1) {
            p == 1 ? ++cm.tp : ++cm.fn;
        } else {
            p == 1 ? ++cm.fp : ++cm.tn;
        }
    }
    return cm;
}

SensSpec sens_spec(const ConfusionMatrix& cm) {
    SensSpec r;
    r.s1 = ratio(cm.tp, cm.tp + cm.fn);
    r.s0 = ratio(cm.tn, cm.tn + cm.fp);
    r.sp1 = ratio(cm.tn, cm.tn + cm.fp);
    r.sp0 = ratio(cm.tp, cm.tp + cm.fn);
    return r;
}

GMeanSet gmean(const ConfusionMatrix& cm, uint64_t n1, uint64_t n0) {
    const SensSpec ss = sens_spec(cm);
    GMeanSet g;
    g.g0 = std::sqrt(ss.s0 * ss.sp0);
    g.g1 = std::sqrt(ss.s1 * ss.sp1);
    g.macro = 0.5 * g.g0 + 0.5 * g.g1;
    const double n = static_cast<double>(n0) + static_cast<double>(n1);
    g.weighted = ratio(static_cast<double>(n0) * g.g0 + static_cast<double>(n1) * g.g1, n);
    return g;
}

double f1_macro(const ConfusionMatrix& cm) {
    // class 1 positive
    const double p1 = ratio(cm.tp, cm.tp + cm.fp);
    const double r1 = ratio(cm.tp, cm.tp + cm.fn);
    const double f1 = ratio(2.0 * p1 * r1, p1 + r1);
    // class 0 positive
    const double p0 = ratio(cm.tn, cm.tn + cm.fn);
    const double r0 = ratio(cm.tn, cm.tn + cm.fp);
    const double f0 = ratio(2.0 * p0 * r0, p0 + r0);
    return 0.5 * (f0 + f1);
}

double balanced_accuracy(const ConfusionMatrix& cm) {
    const SensSpec ss = sens_spec(cm);
    return 0.5 * (ss.s1 + ss.s0);
}

MetricBundle metric_bundle(const ConfusionMatrix& cm, uint64_t n1, uint64_t n0) {
    const SensSpec ss = sens_spec(cm);
    const GMeanSet g = gmean(cm, n1, n0);
    MetricBundle b;
    b.sens_class0 = ss.s0;
    b.spec_class0 = ss.sp0;
    b.sens_class1 = ss.s1;
    b.spec_class1 = ss.sp1;
    b.gmean_class0 = g.g0;
    b.gmean_class1 = g.g1;
    b.gmean_macro = g.macro;
    b.gmean_weighted = g.weighted;
    b.f1_macro = skewlab::f1_macro(cm);
    b.balanced_accuracy = skewlab::balanced_accuracy(cm);
    return b;
}

}  // namespace skewlab
