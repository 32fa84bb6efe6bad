#pragma once

#include "domainlens/feature_matrix.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace domainlens {

enum class Penalty { L2, L1 };

std::string_view to_string(Penalty p);
Penalty penalty_from_string(std::string_view s);

struct SvmHyperparams {
    double C = 1.0;
    Penalty penalty = Penalty::L2;
    double tolerance = 1e-4;
    std::size_t max_iter = 0;  // 0 picks a size-dependent default

    bool operator==(const SvmHyperparams&) const = default;
};

// Linear decision function w.x + b; label 1 (disinfo) iff strictly > 0.
struct SvmSolution {
    std::vector<double> weights;
    double bias = 0.0;
    std::size_t iterations = 0;
    bool converged = false;

    double decision(std::span<const double> x) const;
    int predict(std::span<const double> x) const { return decision(x) > 0.0 ? 1 : 0; }
};

// L2 arm: 1/2 |w|^2 + C * sum hinge, solved in the dual with an unpenalized
// bias (two-coordinate working-set descent).
// L1 arm: |w|_1 + C * sum squared hinge, solved by accelerated proximal
// gradient; the bias is unpenalized.
// X is row-major n x d, y holds 0/1 labels. Throws Data/DegenerateLabels
// when only one class is present, Config/InvalidArgument for C <= 0.
SvmSolution train_linear_svm(std::span<const double> X, std::size_t n, std::size_t d, std::span<const int> y,
                             const SvmHyperparams& hp);

SvmSolution train_linear_svm(const FeatureMatrix& X, const SvmHyperparams& hp);

// Primal objective of the L2 arm and its gradient with respect to (w, b),
// defined wherever no margin equals exactly 1.
double hinge_objective(std::span<const double> X, std::size_t n, std::size_t d, std::span<const int> y,
                       std::span<const double> w, double b, double C);
std::vector<double> hinge_objective_gradient(std::span<const double> X, std::size_t n, std::size_t d,
                                             std::span<const int> y, std::span<const double> w, double b, double C);

}  // namespace domainlens
