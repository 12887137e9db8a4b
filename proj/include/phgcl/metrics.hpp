#pragma once

#include <vector>

namespace phgcl {

struct Confusion {
    long tp = 0;
    long tn = 0;
    long fp = 0;
    long fn = 0;

    long total() const { return tp + tn + fp + fn; }
    Confusion& operator+=(const Confusion& o) {
        tp += o.tp;
        tn += o.tn;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
};

// Fractions from confusion counts; an empty denominator yields 0.
double accuracy(const Confusion& c);
double sensitivity(const Confusion& c);
double specificity(const Confusion& c);

// Mann-Whitney statistic P(score+ > score-) + 0.5 * P(tie) by direct pair
// enumeration. Throws std::invalid_argument unless both classes appear.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation; 0 for a single value
};

Aggregate aggregate(const std::vector<double>& values);

}  // namespace phgcl
