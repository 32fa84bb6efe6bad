#include "domainlens/error.hpp"
#include "domainlens/logistic.hpp"
#include "domainlens/model.hpp"
#include "domainlens/svm.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <numeric>

using namespace domainlens;

namespace {

std::string code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

FeatureMatrix matrix(std::size_t n, std::size_t d, std::vector<double> values, std::vector<int> labels) {
    std::vector<std::string> rows;
    for (std::size_t i = 0; i < n; ++i) rows.push_back("r" + std::to_string(i));
    std::vector<ColumnDescriptor> cols;
    for (std::size_t j = 0; j < d; ++j) cols.push_back({FeatureChannel::Content, "c" + std::to_string(j)});
    return FeatureMatrix(rows, cols, std::move(values), std::move(labels));
}

// Blobs mapped into [0, 1] for FeatureMatrix-based APIs.
FeatureMatrix unit_blobs(std::size_t per_class, std::size_t d, double spread, std::uint64_t seed) {
    auto b = oracle::blobs(per_class, d, 0.3, 0.7, spread, seed);
    for (double& x : b.X) x = std::clamp(x, 0.0, 1.0);
    return matrix(b.n, b.d, b.X, b.y);
}

// Rows whose label is decided by columns 0 and 1 together; the rest is noise.
FeatureMatrix planted(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v;
    std::vector<int> y;
    for (std::size_t i = 0; i < n; ++i) {
        int label = static_cast<int>(i % 2);
        double s0 = rng.uniform(), s1 = rng.uniform();
        if (label) {
            s0 = 0.55 + 0.45 * s0;
            s1 = 0.55 + 0.45 * s1;
        } else {
            s0 = 0.45 * s0;
            s1 = 0.45 * s1;
        }
        v.push_back(s0);
        v.push_back(s1);
        for (std::size_t j = 2; j < d; ++j) v.push_back(rng.uniform());
        y.push_back(label);
    }
    return matrix(n, d, v, y);
}

}  // namespace

// ---- logistic selection ----------------------------------------------------------------

TEST(Logistic, ConvergesToStationaryPoint) {
    auto X = planted(80, 6, 1);
    LogisticOptions opts;
    auto fit = fit_logistic_l2(X, opts);
    EXPECT_TRUE(fit.converged);
    auto g = oracle::logistic_gradient(X, fit.coef, fit.intercept, opts.C);
    double norm = 0;
    for (double x : g) norm += x * x;
    EXPECT_LE(std::sqrt(norm), 1e-6);
}

TEST(Logistic, PlantedColumnsSelected) {
    auto X = planted(120, 8, 2);
    auto sel = select_top_features(X, 2);
    EXPECT_EQ(sel.columns, (std::vector<std::size_t>{0, 1}));

    // Exhaustive 2-column search: {0, 1} gives the best fitted likelihood.
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> best_pair;
    for (std::size_t a = 0; a < X.n_cols(); ++a)
        for (std::size_t b = a + 1; b < X.n_cols(); ++b) {
            const std::size_t cols[] = {a, b};
            auto sub = X.select_cols(cols);
            auto fit = fit_logistic_l2(sub, {});
            double loss = oracle::logistic_loss(sub, fit.coef, fit.intercept);
            if (loss < best) {
                best = loss;
                best_pair = {a, b};
            }
        }
    EXPECT_EQ(best_pair, (std::pair<std::size_t, std::size_t>{0, 1}));
}

TEST(Logistic, IdentityWhenKEqualsColumns) {
    auto X = planted(40, 5, 3);
    auto sel = select_top_features(X, 5);
    EXPECT_EQ(sel.columns, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

TEST(Logistic, ConstantColumnRanksBelowSignal) {
    auto base = planted(60, 2, 4);
    std::vector<double> v;
    for (std::size_t i = 0; i < base.n_rows(); ++i) {
        v.push_back(0.7);
        v.push_back(base.at(i, 0));
        v.push_back(base.at(i, 1));
    }
    auto X = matrix(base.n_rows(), 3, v, base.labels());
    auto sel = select_top_features(X, 2);
    EXPECT_EQ(sel.columns, (std::vector<std::size_t>{1, 2}));
    EXPECT_LT(std::abs(sel.coef[0]), 1e-5);
}

TEST(Logistic, Errors) {
    auto X = planted(10, 3, 5);
    EXPECT_EQ(code_of([&] { select_top_features(X, 0); }), "InvalidArgument");
    EXPECT_EQ(code_of([&] { select_top_features(X, 4); }), "InvalidArgument");
    auto one = matrix(2, 1, {0.1, 0.2}, {1, 1});
    EXPECT_EQ(code_of([&] { fit_logistic_l2(one); }), "DegenerateLabels");
}

TEST(Logistic, TopSignedTerms) {
    FeatureSelection sel;
    sel.columns = {0, 1, 2, 3};
    sel.coef = {0.5, -2.0, 3.0, -0.1, 9.0};
    auto pos = sel.top_signed(5, true);
    ASSERT_EQ(pos.size(), 2u);
    EXPECT_EQ(pos[0].first, 2u);
    auto neg = sel.top_signed(1, false);
    ASSERT_EQ(neg.size(), 1u);
    EXPECT_EQ(neg[0].first, 1u);
}

// ---- SVM ------------------------------------------------------------------------------

TEST(Svm, SeparableBlobsHaveNoViolations) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto b = oracle::blobs(10, 2, -1.0, 1.0, 0.8, seed);
        SvmHyperparams hp{10.0};
        auto sol = train_linear_svm(b.X, b.n, b.d, b.y, hp);
        EXPECT_TRUE(sol.converged);
        for (double m : oracle::margins(b, sol.weights, sol.bias)) EXPECT_GE(m, 1.0 - 1e-3);
    }
}

TEST(Svm, SubgradientVanishesAtSolution) {
    struct Case {
        std::size_t per_class, d;
        double spread, C;
    };
    for (auto c : {Case{20, 2, 0.8, 10.0}, Case{30, 5, 2.5, 1.0}, Case{40, 3, 3.0, 0.1}, Case{25, 8, 1.5, 100.0}}) {
        auto b = oracle::blobs(c.per_class, c.d, -0.5, 0.5, c.spread, 17 + c.d);
        auto sol = train_linear_svm(b.X, b.n, b.d, b.y, SvmHyperparams{c.C});
        ASSERT_TRUE(sol.converged);
        EXPECT_LE(oracle::min_subgradient_norm(b, sol.weights, sol.bias, c.C), 1e-3) << "C=" << c.C;
    }
}

TEST(Svm, ObjectiveGradientMatchesFiniteDifferences) {
    Rng rng(5);
    auto b = oracle::blobs(15, 4, -0.5, 0.5, 2.0, 3);
    const double C = 2.0;
    int checked = 0;
    while (checked < 100) {
        std::vector<double> w(b.d);
        for (double& x : w) x = 4 * rng.uniform() - 2;
        double bias = 2 * rng.uniform() - 1;
        auto m = oracle::margins(b, w, bias);
        if (std::any_of(m.begin(), m.end(), [](double x) { return std::abs(x - 1) < 1e-3; })) continue;
        auto g = hinge_objective_gradient(b.X, b.n, b.d, b.y, w, bias, C);
        ASSERT_EQ(g.size(), b.d + 1);
        const double h = 1e-6;
        double err = 0, scale = 0;
        for (std::size_t k = 0; k <= b.d; ++k) {
            auto wp = w, wm = w;
            double bp = bias, bm = bias;
            if (k < b.d) {
                wp[k] += h;
                wm[k] -= h;
            } else {
                bp += h;
                bm -= h;
            }
            double fd = (hinge_objective(b.X, b.n, b.d, b.y, wp, bp, C) - hinge_objective(b.X, b.n, b.d, b.y, wm, bm, C)) /
                        (2 * h);
            err += (fd - g[k]) * (fd - g[k]);
            scale += g[k] * g[k];
        }
        EXPECT_LE(std::sqrt(err), 1e-5 * std::max(1.0, std::sqrt(scale)));
        ++checked;
    }
}

TEST(Svm, ObjectiveMatchesDefinition) {
    auto b = oracle::blobs(5, 2, -0.5, 0.5, 1.0, 9);
    std::vector<double> w = {0.3, -0.7};
    double expect = 0.5 * (0.09 + 0.49);
    for (double m : oracle::margins(b, w, 0.2)) expect += 3.0 * std::max(0.0, 1 - m);
    EXPECT_NEAR(hinge_objective(b.X, b.n, b.d, b.y, w, 0.2, 3.0), expect, 1e-12);
}

TEST(Svm, SymmetricPairGivesAxisAlignedWeights) {
    std::vector<double> X = {1, 0, -1, 0};
    std::vector<int> y = {1, 0};
    auto sol = train_linear_svm(X, 2, 2, y, SvmHyperparams{1e4});
    EXPECT_NEAR(sol.weights[0], 1.0, 1e-6);
    EXPECT_NEAR(sol.weights[1], 0.0, 1e-9);
    EXPECT_NEAR(sol.bias, 0.0, 1e-6);
}

TEST(Svm, DuplicatedRowsKeepTheSolution) {
    auto b = oracle::blobs(12, 3, -1.0, 1.0, 0.6, 21);
    SvmHyperparams hp{1e3};
    hp.tolerance = 1e-10;
    auto once = train_linear_svm(b.X, b.n, b.d, b.y, hp);
    std::vector<double> X2 = b.X;
    X2.insert(X2.end(), b.X.begin(), b.X.end());
    std::vector<int> y2 = b.y;
    y2.insert(y2.end(), b.y.begin(), b.y.end());
    auto twice = train_linear_svm(X2, 2 * b.n, b.d, y2, hp);
    for (std::size_t j = 0; j < b.d; ++j) EXPECT_NEAR(once.weights[j], twice.weights[j], 1e-6);
    EXPECT_NEAR(once.bias, twice.bias, 1e-6);
}

TEST(Svm, BitwiseReproducible) {
    auto b = oracle::blobs(50, 6, -0.3, 0.3, 2.0, 77);
    for (auto penalty : {Penalty::L2, Penalty::L1}) {
        SvmHyperparams hp{1.0, penalty};
        auto a = train_linear_svm(b.X, b.n, b.d, b.y, hp);
        auto c = train_linear_svm(b.X, b.n, b.d, b.y, hp);
        ASSERT_EQ(a.weights.size(), c.weights.size());
        EXPECT_EQ(std::memcmp(a.weights.data(), c.weights.data(), a.weights.size() * sizeof(double)), 0);
        EXPECT_EQ(std::memcmp(&a.bias, &c.bias, sizeof(double)), 0);
    }
}

TEST(Svm, ColumnScalingKeepsPredictions) {
    // Label decided by column 0 with a wide gap; columns 1-2 are noise.
    Rng rng(8);
    auto make = [&](std::size_t n, std::vector<double>& X, std::vector<int>& y) {
        for (std::size_t i = 0; i < n; ++i) {
            int label = static_cast<int>(i % 2);
            X.push_back(label ? 0.7 + 0.3 * rng.uniform() : 0.3 * rng.uniform());
            X.push_back(rng.uniform());
            X.push_back(rng.uniform());
            y.push_back(label);
        }
    };
    std::vector<double> Xtr, Xte;
    std::vector<int> ytr, yte;
    make(60, Xtr, ytr);
    make(40, Xte, yte);
    SvmHyperparams hp{1e3};
    auto base = train_linear_svm(Xtr, 60, 3, ytr, hp);
    std::vector<int> base_pred;
    for (std::size_t i = 0; i < 40; ++i) base_pred.push_back(base.predict(std::span(Xte).subspan(i * 3, 3)));
    EXPECT_EQ(base_pred, yte);
    for (std::size_t col = 0; col < 3; ++col)
        for (double c : {0.25, 3.0}) {
            auto Str = Xtr, Ste = Xte;
            for (std::size_t i = 0; i < 60; ++i) Str[i * 3 + col] *= c;
            for (std::size_t i = 0; i < 40; ++i) Ste[i * 3 + col] *= c;
            auto sol = train_linear_svm(Str, 60, 3, ytr, hp);
            for (std::size_t i = 0; i < 40; ++i)
                EXPECT_EQ(sol.predict(std::span(Ste).subspan(i * 3, 3)), base_pred[i]) << "col " << col << " c " << c;
        }
}

TEST(Svm, L1ArmMeetsOptimalityConditions) {
    auto b = oracle::blobs(30, 6, -0.4, 0.4, 2.0, 13);
    // Irrelevant columns: zero them so a sparse optimum exists.
    for (std::size_t i = 0; i < b.n; ++i)
        for (std::size_t j = 3; j < 6; ++j) b.X[i * b.d + j] = (i * 7 + j) % 5 * 0.1;
    const double C = 0.5;
    SvmHyperparams hp{C, Penalty::L1};
    hp.tolerance = 1e-7;
    auto sol = train_linear_svm(b.X, b.n, b.d, b.y, hp);
    ASSERT_TRUE(sol.converged);
    auto m = oracle::margins(b, sol.weights, sol.bias);
    std::vector<double> g(b.d + 1, 0.0);  // gradient of C * sum squared hinge
    for (std::size_t i = 0; i < b.n; ++i) {
        double slack = std::max(0.0, 1 - m[i]);
        double yi = b.y[i] ? 1.0 : -1.0;
        for (std::size_t j = 0; j < b.d; ++j) g[j] += -2 * C * slack * yi * b.X[i * b.d + j];
        g[b.d] += -2 * C * slack * yi;
    }
    EXPECT_NEAR(g[b.d], 0.0, 1e-4);
    for (std::size_t j = 0; j < b.d; ++j) {
        if (sol.weights[j] == 0.0)
            EXPECT_LE(std::abs(g[j]), 1.0 + 1e-4) << j;
        else
            EXPECT_NEAR(g[j], -std::copysign(1.0, sol.weights[j]), 1e-4) << j;
    }
}

TEST(Svm, Errors) {
    std::vector<double> X = {0.1, 0.2};
    std::vector<int> same = {1, 1};
    EXPECT_EQ(code_of([&] { train_linear_svm(X, 2, 1, same, {}); }), "DegenerateLabels");
    std::vector<int> y = {0, 1};
    EXPECT_EQ(code_of([&] { train_linear_svm(X, 2, 1, y, SvmHyperparams{0.0}); }), "InvalidArgument");
    EXPECT_EQ(code_of([] { penalty_from_string("l3"); }), "InvalidArgument");
    EXPECT_EQ(penalty_from_string("L1"), Penalty::L1);
}

TEST(Svm, LargerProblemUsesOnDemandKernelRows) {
    auto b = oracle::blobs(2100, 3, -0.5, 0.5, 1.2, 31);
    auto sol = train_linear_svm(b.X, b.n, b.d, b.y, SvmHyperparams{1.0});
    EXPECT_TRUE(sol.converged);
    EXPECT_LE(oracle::min_subgradient_norm(b, sol.weights, sol.bias, 1.0), 1e-3);
}

// ---- metrics ----------------------------------------------------------------------------

TEST(Metrics, ConfusionFixture) {
    auto m = metrics_from_confusion({3, 1, 1, 5});
    EXPECT_DOUBLE_EQ(m.accuracy, 0.8);
    EXPECT_DOUBLE_EQ(*m.precision, 0.75);
    EXPECT_DOUBLE_EQ(*m.recall, 0.75);
    EXPECT_DOUBLE_EQ(*m.f1, 0.75);
}

TEST(Metrics, EvaluateReproducesHandCountedConfusion) {
    // One column; prediction is x > 0.5.
    std::vector<double> x = {0.9, 0.8, 0.7, 0.6, 0.1, 0.9, 0.2, 0.3, 0.1, 0.4};
    std::vector<int> y = {1, 1, 1, 0, 1, 0, 0, 0, 0, 0};
    // predicted: 1 1 1 1 0 1 0 0 0 0 -> tp=3 fp=2 fn=1 tn=4
    auto X = matrix(10, 1, x, y);
    TrainedModel model;
    model.columns = X.cols();
    model.weights = {1.0};
    model.bias = -0.5;
    auto m = evaluate(model, X);
    EXPECT_EQ(m.confusion, (Confusion{3, 2, 1, 4}));
    EXPECT_DOUBLE_EQ(m.accuracy, 0.7);
    EXPECT_DOUBLE_EQ(*m.precision, 0.6);
    EXPECT_DOUBLE_EQ(*m.recall, 0.75);
    EXPECT_DOUBLE_EQ(*m.f1, 2 * 0.6 * 0.75 / 1.35);

    model.columns[0].name = "other";
    EXPECT_EQ(code_of([&] { evaluate(model, X); }), "ColumnMismatch");
}

TEST(Metrics, PerfectAndUndefined) {
    std::vector<int> t = {1, 0, 1, 0};
    auto perfect = metrics_from_predictions(t, t);
    EXPECT_EQ(perfect.accuracy, 1.0);
    EXPECT_EQ(perfect.precision, 1.0);
    EXPECT_EQ(perfect.f1, 1.0);
    std::vector<int> none = {0, 0, 0, 0};
    auto m = metrics_from_predictions(t, none);
    EXPECT_FALSE(m.precision);
    EXPECT_EQ(m.recall, 0.0);
    EXPECT_FALSE(m.f1);
    auto no_pos = metrics_from_predictions(none, none);
    EXPECT_FALSE(no_pos.recall);
}

TEST(Metrics, SummaryBoundsHold) {
    Rng rng(3);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<Metrics> per;
        std::size_t n = 1 + rng.below(30);
        const double repeated = rng.uniform();
        for (std::size_t i = 0; i < n; ++i) {
            Confusion c{rng.below(20), rng.below(5), rng.below(5), rng.below(20)};
            if (c.total() == 0) c.tn = 1;
            Metrics m = metrics_from_confusion(c);
            if (trial % 2) m.accuracy = repeated;  // identical values stress the rounding of the mean
            per.push_back(m);
        }
        auto r = summarize("x", per);
        for (const auto* s : {&r.accuracy, &r.precision, &r.recall, &r.f1}) {
            if (!*s) continue;
            ASSERT_LE((*s)->min, (*s)->mean);
            ASSERT_LE((*s)->mean, (*s)->max);
        }
        if (trial % 2) {
            EXPECT_EQ(r.accuracy->mean, repeated);
        }
    }
}

// ---- splits ----------------------------------------------------------------------------------

TEST(Splits, StratifiedAndDeterministic) {
    std::vector<int> labels(100, 0);
    for (std::size_t i = 0; i < 31; ++i) labels[i * 3] = 1;
    auto s = stratified_split(labels, 0.9, 42);
    EXPECT_EQ(s.train.size() + s.test.size(), 100u);
    std::vector<std::size_t> all = s.train;
    all.insert(all.end(), s.test.begin(), s.test.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expect(100);
    std::iota(expect.begin(), expect.end(), 0);
    EXPECT_EQ(all, expect);
    std::size_t pos_test = 0;
    for (auto i : s.test) pos_test += labels[i];
    EXPECT_EQ(pos_test, 3u);  // 31 - round(0.9 * 31)
    EXPECT_EQ(s.test.size(), 10u);
    auto again = stratified_split(labels, 0.9, 42);
    EXPECT_EQ(again.train, s.train);
    EXPECT_NE(stratified_split(labels, 0.9, 43).test, s.test);
    EXPECT_NE(split_seed(42, 0), split_seed(42, 1));

    std::vector<int> tiny = {1, 0, 0};
    EXPECT_EQ(code_of([&] { stratified_split(tiny, 0.9, 1); }), "InsufficientData");
}

TEST(Splits, StratifiedFolds) {
    std::vector<int> labels(53, 0);
    for (std::size_t i = 0; i < 20; ++i) labels[i] = 1;
    auto folds = stratified_folds(labels, 5, 9);
    std::vector<std::size_t> pos(5), size(5);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        ASSERT_LT(folds[i], 5u);
        ++size[folds[i]];
        pos[folds[i]] += labels[i];
    }
    for (std::size_t f = 0; f < 5; ++f) {
        EXPECT_EQ(pos[f], 4u);
        EXPECT_GE(size[f], 10u);
        EXPECT_LE(size[f], 11u);
    }
}

TEST(GridSearch, DefaultGridAndTieBreaks) {
    auto grid = default_c_grid();
    ASSERT_EQ(grid.size(), 13u);
    EXPECT_DOUBLE_EQ(grid.front(), 0.01);
    EXPECT_DOUBLE_EQ(grid.back(), 1e4);
    EXPECT_NEAR(grid[4], 1.0, 1e-12);

    auto X = unit_blobs(20, 2, 0.1, 5);
    const double one[] = {3.0};
    const Penalty l2[] = {Penalty::L2};
    EXPECT_EQ(grid_search_cv(X, one, l2, 5, 1).best, (SvmHyperparams{3.0}));

    const double two[] = {100.0, 10.0};
    const Penalty both[] = {Penalty::L1, Penalty::L2};
    auto r = grid_search_cv(X, two, both, 5, 1);
    EXPECT_EQ(r.points.size(), 4u);
    for (const auto& p : r.points) EXPECT_DOUBLE_EQ(p.mean_accuracy, 1.0);
    EXPECT_DOUBLE_EQ(r.best.C, 10.0);
    EXPECT_EQ(r.best.penalty, Penalty::L2);
}

TEST(RepeatedSplit, SingleSplitSummaryCollapses) {
    auto X = unit_blobs(30, 3, 0.6, 6);
    SplitConfig cfg{1, 0.9, 5, 1};
    auto r = repeated_split_eval(X, SvmHyperparams{1.0}, cfg, "one");
    ASSERT_TRUE(r.accuracy);
    EXPECT_EQ(r.accuracy->mean, r.accuracy->min);
    EXPECT_EQ(r.accuracy->mean, r.accuracy->max);
    EXPECT_EQ(r.n_splits, 1u);
    EXPECT_EQ(r.per_split.size(), 1u);
}

TEST(RepeatedSplit, WorkerCountDoesNotChangeResults) {
    auto X = unit_blobs(40, 4, 0.9, 7);
    SplitConfig one{12, 0.9, 5, 1}, four{12, 0.9, 5, 4};
    auto a = repeated_split_eval(X, SvmHyperparams{1.0}, one);
    auto b = repeated_split_eval(X, SvmHyperparams{1.0}, four);
    ASSERT_EQ(a.per_split.size(), b.per_split.size());
    for (std::size_t i = 0; i < a.per_split.size(); ++i) EXPECT_EQ(a.per_split[i].confusion, b.per_split[i].confusion);
    EXPECT_EQ(a.accuracy->mean, b.accuracy->mean);
}

TEST(Dedup, OneRepresentativePerNetwork) {
    std::vector<std::string> domains = {"a.com", "b.com", "c.com", "d.com", "e.com", "f.com"};
    std::vector<int> labels = {1, 1, 1, 0, 1, 1};
    NetworkMap nets = {{"a.com", "n1"}, {"b.com", "n1"}, {"c.com", "n2"}, {"e.com", "n1"}, {"d.com", "n1"}};
    auto keep = dedup_rows(domains, labels, nets);
    EXPECT_EQ(keep, (std::vector<std::size_t>{0, 2, 3, 5}));
}

TEST(Dedup, SingletonNetworksChangeNothing) {
    auto X = unit_blobs(30, 3, 0.8, 8);
    NetworkMap nets;
    for (const auto& r : X.rows()) nets[r] = r;
    SplitConfig cfg{5, 0.9, 3, 1};
    auto base = repeated_split_eval(X, SvmHyperparams{1.0}, cfg);
    auto dedup = dedup_network_retrain(X, nets, SvmHyperparams{1.0}, cfg);
    EXPECT_EQ(dedup.n_rows, base.n_rows);
    EXPECT_EQ(dedup.accuracy->mean, base.accuracy->mean);
}

TEST(FeatureMatrix, AmalgamateWidthsAndErrors) {
    auto a = matrix(3, 500, std::vector<double>(1500, 0.5), {0, 1, 0});
    auto l = matrix(3, 3, std::vector<double>(9, 0.1), {0, 1, 0});
    auto all = amalgamate(a, a, l);
    EXPECT_EQ(all.n_cols(), 1003u);
    EXPECT_DOUBLE_EQ(all.at(2, 1002), 0.1);
    auto short_rows = a.select_rows(std::vector<std::size_t>{0, 1});
    EXPECT_EQ(code_of([&] { amalgamate(a, short_rows, l); }), "RowKeyMismatch");
    EXPECT_EQ(code_of([&] { matrix(1, 1, {1.5}, {0}); }), "OutOfRange");
    EXPECT_EQ(code_of([&] { matrix(1, 2, {0.5}, {0}); }), "ShapeMismatch");
}
