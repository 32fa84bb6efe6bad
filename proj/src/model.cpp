#include "domainlens/model.hpp"

#include "domainlens/common.hpp"
#include "domainlens/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace domainlens {

double TrainedModel::decision(std::span<const double> x) const {
    double s = bias;
    for (std::size_t j = 0; j < weights.size(); ++j) s += weights[j] * x[j];
    return s;
}

TrainedModel train_svm(const FeatureMatrix& X, const SvmHyperparams& hp) {
    auto sol = train_linear_svm(X, hp);
    TrainedModel m;
    m.columns = X.cols();
    m.weights = std::move(sol.weights);
    m.bias = sol.bias;
    m.hyperparams = hp;
    m.converged = sol.converged;
    return m;
}

Metrics metrics_from_confusion(const Confusion& c) {
    Metrics m;
    m.confusion = c;
    m.accuracy = c.total() ? static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total()) : 0.0;
    if (c.tp + c.fp > 0) m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    if (c.tp + c.fn > 0) m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    if (m.precision && m.recall && *m.precision + *m.recall > 0)
        m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
    return m;
}

Metrics metrics_from_predictions(std::span<const int> truth, std::span<const int> predicted) {
    if (truth.size() != predicted.size()) throw invariant_error("ShapeMismatch", "truth and prediction sizes differ");
    Confusion c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == 1) (predicted[i] == 1 ? c.tp : c.fn)++;
        else (predicted[i] == 1 ? c.fp : c.tn)++;
    }
    return metrics_from_confusion(c);
}

Metrics evaluate(const TrainedModel& model, const FeatureMatrix& X) {
    if (X.cols() != model.columns)
        throw data_error("ColumnMismatch", "matrix has " + std::to_string(X.n_cols()) +
                                               " columns that do not match the model's " +
                                               std::to_string(model.columns.size()));
    std::vector<int> pred(X.n_rows());
    for (std::size_t i = 0; i < X.n_rows(); ++i) pred[i] = model.predict(X.row(i));
    return metrics_from_predictions(X.labels(), pred);
}

namespace {

std::optional<MetricSummary> summarize_metric(const std::vector<Metrics>& per_split,
                                              std::optional<double> (*get)(const Metrics&)) {
    MetricSummary s;
    double sum = 0.0;
    for (const auto& m : per_split) {
        auto v = get(m);
        if (!v) continue;
        if (s.defined == 0) s.min = s.max = *v;
        s.min = std::min(s.min, *v);
        s.max = std::max(s.max, *v);
        sum += *v;
        ++s.defined;
    }
    if (s.defined == 0) return std::nullopt;
    // The clamp only absorbs rounding in the division.
    s.mean = std::clamp(sum / static_cast<double>(s.defined), s.min, s.max);
    return s;
}

}  // namespace

EvalReport summarize(std::string name, std::vector<Metrics> per_split) {
    EvalReport r;
    r.name = std::move(name);
    r.n_splits = per_split.size();
    r.accuracy = summarize_metric(per_split, [](const Metrics& m) -> std::optional<double> { return m.accuracy; });
    r.precision = summarize_metric(per_split, [](const Metrics& m) { return m.precision; });
    r.recall = summarize_metric(per_split, [](const Metrics& m) { return m.recall; });
    r.f1 = summarize_metric(per_split, [](const Metrics& m) { return m.f1; });
    r.per_split = std::move(per_split);
    return r;
}

std::uint64_t split_seed(std::uint64_t seed, std::size_t index) {
    // splitmix64 finalizer over (seed, index)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Split stratified_split(std::span<const int> labels, double train_frac, std::uint64_t seed) {
    if (!(train_frac > 0.0 && train_frac < 1.0))
        throw config_error("InvalidArgument", "train fraction must lie in (0, 1)");
    Rng rng(seed);
    Split s;
    for (int cls : {0, 1}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls) idx.push_back(i);
        if (idx.size() < 2)
            throw data_error("InsufficientData", "class " + std::to_string(cls) + " has " +
                                                     std::to_string(idx.size()) + " rows; a split needs at least 2");
        rng.shuffle(idx);
        auto n_train = static_cast<std::size_t>(std::llround(train_frac * static_cast<double>(idx.size())));
        n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
        s.train.insert(s.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
        s.test.insert(s.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    }
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw config_error("InvalidArgument", "need at least 2 folds");
    Rng rng(seed);
    std::vector<std::size_t> fold(labels.size(), 0);
    for (int cls : {0, 1}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls) idx.push_back(i);
        if (idx.size() < k)
            throw data_error("InsufficientData", "class " + std::to_string(cls) + " has fewer rows than folds");
        rng.shuffle(idx);
        for (std::size_t p = 0; p < idx.size(); ++p) fold[idx[p]] = p % k;
    }
    return fold;
}

std::vector<double> default_c_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 12; ++i) grid.push_back(std::pow(10.0, -2.0 + 0.5 * i));
    return grid;
}

GridSearchResult grid_search_cv(const FeatureMatrix& X, std::span<const double> c_grid,
                                std::span<const Penalty> penalties, std::size_t folds, std::uint64_t seed,
                                double tolerance) {
    if (c_grid.empty() || penalties.empty()) throw config_error("InvalidArgument", "empty hyperparameter grid");
    auto fold = stratified_folds(X.labels(), folds, seed);
    std::vector<FeatureMatrix> train, test;
    for (std::size_t f = 0; f < folds; ++f) {
        std::vector<std::size_t> tr, te;
        for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == f ? te : tr).push_back(i);
        train.push_back(X.select_rows(tr));
        test.push_back(X.select_rows(te));
    }
    GridSearchResult result;
    std::vector<double> cs(c_grid.begin(), c_grid.end());
    std::sort(cs.begin(), cs.end());
    std::vector<Penalty> ps(penalties.begin(), penalties.end());
    std::stable_sort(ps.begin(), ps.end(), [](Penalty a, Penalty b) { return a == Penalty::L2 && b != Penalty::L2; });
    bool have_best = false;
    double best_acc = 0.0;
    for (double C : cs)
        for (Penalty p : ps) {
            SvmHyperparams hp{C, p, tolerance, 0};
            double acc = 0.0;
            for (std::size_t f = 0; f < folds; ++f) acc += evaluate(train_svm(train[f], hp), test[f]).accuracy;
            acc /= static_cast<double>(folds);
            result.points.push_back({hp, acc});
            // Strict improvement only, so the first (smaller C, then L2) wins ties.
            if (!have_best || acc > best_acc) {
                have_best = true;
                best_acc = acc;
                result.best = hp;
            }
        }
    return result;
}

EvalReport repeated_split_eval(const FeatureMatrix& X, const SvmHyperparams& hp, const SplitConfig& cfg,
                               std::string name) {
    if (cfg.n_splits == 0) throw config_error("InvalidArgument", "n_splits must be positive");
    std::vector<Metrics> per_split(cfg.n_splits);
    std::vector<char> converged(cfg.n_splits, 1);
    parallel_for(cfg.n_splits, cfg.workers, [&](std::size_t s) {
        auto split = stratified_split(X.labels(), cfg.train_frac, split_seed(cfg.seed, s));
        auto model = train_svm(X.select_rows(split.train), hp);
        converged[s] = model.converged;
        per_split[s] = evaluate(model, X.select_rows(split.test));
    });
    auto report = summarize(std::move(name), std::move(per_split));
    report.train_frac = cfg.train_frac;
    report.seed = cfg.seed;
    report.n_rows = X.n_rows();
    report.n_disinfo = static_cast<std::size_t>(std::count(X.labels().begin(), X.labels().end(), 1));
    report.hyperparams = hp;
    report.nonconverged_fits = static_cast<std::size_t>(std::count(converged.begin(), converged.end(), 0));
    return report;
}

std::vector<std::size_t> dedup_rows(std::span<const std::string> domains, std::span<const int> labels,
                                    const NetworkMap& network_of) {
    // Representative per network: smallest domain present.
    std::map<std::string, std::string> rep;
    for (std::size_t i = 0; i < domains.size(); ++i) {
        if (labels[i] != 1) continue;
        auto it = network_of.find(domains[i]);
        if (it == network_of.end()) continue;
        auto [r, inserted] = rep.emplace(it->second, domains[i]);
        if (!inserted && domains[i] < r->second) r->second = domains[i];
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < domains.size(); ++i) {
        if (labels[i] == 1) {
            auto it = network_of.find(domains[i]);
            if (it != network_of.end() && rep.at(it->second) != domains[i]) continue;
        }
        keep.push_back(i);
    }
    return keep;
}

EvalReport dedup_network_retrain(const FeatureMatrix& X, const NetworkMap& network_of, const SvmHyperparams& hp,
                                 const SplitConfig& cfg) {
    auto keep = dedup_rows(X.rows(), X.labels(), network_of);
    return repeated_split_eval(X.select_rows(keep), hp, cfg, "dedup");
}

}  // namespace domainlens
