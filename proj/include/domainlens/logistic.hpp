#pragma once

#include "domainlens/feature_matrix.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace domainlens {

// L2-regularized logistic regression with an unpenalized intercept:
//   min 1/2 |w|^2 + C * sum log(1 + exp(-y_i (w.x_i + b)))
// solved by Newton-CG from w = 0, b = 0.
struct LogisticOptions {
    double C = 1.0;
    double tolerance = 1e-6;  // on the Euclidean norm of the full gradient
    std::size_t max_iter = 5000;
};

struct LogisticFit {
    std::vector<double> coef;
    double intercept = 0.0;
    std::size_t iterations = 0;
    double gradient_norm = 0.0;
    bool converged = false;
};

// Throws Data/DegenerateLabels when only one class is present.
LogisticFit fit_logistic_l2(const FeatureMatrix& X, const LogisticOptions& opts = {});

struct FeatureSelection {
    std::vector<std::size_t> columns;  // ascending column order
    std::vector<double> coef;          // full coefficient vector of the fit
    bool converged = true;             // false: iteration cap hit, result still usable

    // Columns ranked by coefficient: positive (disinfo-leaning) or negative.
    std::vector<std::pair<std::size_t, double>> top_signed(std::size_t n, bool disinfo) const;
};

// The k columns with largest |coef|, ties by lower column index. Throws
// Config/InvalidArgument when k is 0 or exceeds the column count.
FeatureSelection select_top_features(const FeatureMatrix& X, std::size_t k = 500, const LogisticOptions& opts = {});

}  // namespace domainlens
