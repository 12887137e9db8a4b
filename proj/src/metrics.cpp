#include "phgcl/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace phgcl {

namespace {
double ratio(long num, long den) { return den == 0 ? 0.0 : static_cast<double>(num) / den; }
}

double accuracy(const Confusion& c) { return ratio(c.tp + c.tn, c.total()); }
double sensitivity(const Confusion& c) { return ratio(c.tp, c.tp + c.fn); }
double specificity(const Confusion& c) { return ratio(c.tn, c.tn + c.fp); }

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("auc: scores and labels must align");
    }
    std::vector<double> pos, neg;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] == 1) {
            pos.push_back(scores[i]);
        } else if (labels[i] == 0) {
            neg.push_back(scores[i]);
        } else {
            throw std::invalid_argument("auc: labels must be 0 or 1");
        }
    }
    if (pos.empty() || neg.empty()) {
        throw std::invalid_argument("auc: both classes must be present");
    }
    double wins = 0.0;
    for (double p : pos) {
        for (double n : neg) {
            if (p > n) {
                wins += 1.0;
            } else if (p == n) {
                wins += 0.5;
            }
        }
    }
    return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

Aggregate aggregate(const std::vector<double>& values) {
    Aggregate a;
    if (values.empty()) return a;
    double sum = 0.0;
    for (double v : values) sum += v;
    a.mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return a;
    double sq = 0.0;
    for (double v : values) {
        const double d = v - a.mean;
        sq += d * d;
    }
    a.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    return a;
}

}  // namespace phgcl
