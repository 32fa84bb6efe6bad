#pragma once

#include "domainlens/feature_matrix.hpp"
#include "domainlens/svm.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace domainlens {

// Domain -> network id; a disinfo network is a set of coordinated domains.
using NetworkMap = std::map<std::string, std::string>;

// A linear classifier bound to the columns it was trained on.
struct TrainedModel {
    std::vector<ColumnDescriptor> columns;
    std::vector<double> weights;
    double bias = 0.0;
    SvmHyperparams hyperparams;
    bool converged = true;

    double decision(std::span<const double> x) const;
    int predict(std::span<const double> x) const { return decision(x) > 0.0 ? 1 : 0; }
};

TrainedModel train_svm(const FeatureMatrix& X, const SvmHyperparams& hp);

struct Confusion {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::size_t total() const { return tp + fp + fn + tn; }
    bool operator==(const Confusion&) const = default;
};

// Disinfo is the positive class. Precision is absent without predicted
// positives, recall without actual positives, F1 when either is absent or
// both are zero.
struct Metrics {
    double accuracy = 0.0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    Confusion confusion;
};

Metrics metrics_from_confusion(const Confusion& c);
Metrics metrics_from_predictions(std::span<const int> truth, std::span<const int> predicted);

// Throws Data/ColumnMismatch when the matrix columns differ from the model's.
Metrics evaluate(const TrainedModel& model, const FeatureMatrix& X);

struct MetricSummary {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t defined = 0;  // splits where the metric was defined
};

struct EvalReport {
    std::string name;
    std::optional<MetricSummary> accuracy;
    std::optional<MetricSummary> precision;
    std::optional<MetricSummary> recall;
    std::optional<MetricSummary> f1;
    std::size_t n_splits = 0;
    double train_frac = 0.0;
    std::uint64_t seed = 0;
    std::size_t n_rows = 0;
    std::size_t n_disinfo = 0;
    SvmHyperparams hyperparams;
    std::size_t nonconverged_fits = 0;
    std::vector<Metrics> per_split;
};

EvalReport summarize(std::string name, std::vector<Metrics> per_split);

struct SplitConfig {
    std::size_t n_splits = 20;
    double train_frac = 0.9;
    std::uint64_t seed = 42;
    std::size_t workers = 1;
};

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// Class-stratified random split of row indices. Throws
// Data/InsufficientData if a class has fewer than 2 rows.
Split stratified_split(std::span<const int> labels, double train_frac, std::uint64_t seed);

// Seed of split `index` in a repeated-split run.
std::uint64_t split_seed(std::uint64_t seed, std::size_t index);

// Class-stratified k-fold assignment; returns the fold of every row.
std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed);

std::vector<double> default_c_grid();  // 13 points, 1e-2 .. 1e4, log-spaced

struct GridPoint {
    SvmHyperparams hyperparams;
    double mean_accuracy = 0.0;
};

struct GridSearchResult {
    SvmHyperparams best;
    std::vector<GridPoint> points;
};

// Cross-validated accuracy over C x penalty; ties go to the smaller C,
// then to L2.
GridSearchResult grid_search_cv(const FeatureMatrix& X, std::span<const double> c_grid,
                                std::span<const Penalty> penalties, std::size_t folds, std::uint64_t seed,
                                double tolerance = 1e-4);

// Repeated stratified train/test evaluation on a fixed matrix.
EvalReport repeated_split_eval(const FeatureMatrix& X, const SvmHyperparams& hp, const SplitConfig& cfg,
                               std::string name = {});

// Rows kept when each disinfo network contributes a single representative
// (lexicographically smallest member present). Info rows and rows whose
// domain has no network entry are kept.
std::vector<std::size_t> dedup_rows(std::span<const std::string> domains, std::span<const int> labels,
                                    const NetworkMap& network_of);

EvalReport dedup_network_retrain(const FeatureMatrix& X,
                                 const NetworkMap& network_of,
                                 const SvmHyperparams& hp, const SplitConfig& cfg);

}  // namespace domainlens
