#include "domainlens/logistic.hpp"

#include "domainlens/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace domainlens {
namespace {

// Compressed rows; tf-idf matrices are mostly zeros.
struct SparseRows {
    std::vector<std::size_t> start;
    std::vector<std::size_t> col;
    std::vector<double> val;
    std::size_t d = 0;

    explicit SparseRows(const FeatureMatrix& X) : d(X.n_cols()) {
        start.push_back(0);
        for (std::size_t r = 0; r < X.n_rows(); ++r) {
            auto row = X.row(r);
            for (std::size_t c = 0; c < row.size(); ++c)
                if (row[c] != 0.0) {
                    col.push_back(c);
                    val.push_back(row[c]);
                }
            start.push_back(col.size());
        }
    }

    std::size_t n() const { return start.size() - 1; }

    double dot(std::size_t r, const std::vector<double>& w) const {
        double s = 0.0;
        for (std::size_t k = start[r]; k < start[r + 1]; ++k) s += val[k] * w[col[k]];
        return s;
    }

    void axpy(std::size_t r, double a, std::vector<double>& out) const {
        for (std::size_t k = start[r]; k < start[r + 1]; ++k) out[col[k]] += a * val[k];
    }
};

double log1pexp(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dotv(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Parameters are packed as (w_0 .. w_{d-1}, b).
class Problem {
public:
    Problem(const FeatureMatrix& X, double C) : X_(X), C_(C), d_(X.n_cols()) {
        for (int l : X.labels()) y_.push_back(l == 1 ? 1.0 : -1.0);
    }

    std::size_t dim() const { return d_ + 1; }

    double objective(const std::vector<double>& th) const {
        double reg = 0.0;
        for (std::size_t j = 0; j < d_; ++j) reg += th[j] * th[j];
        double loss = 0.0;
        for (std::size_t i = 0; i < X_.n(); ++i) loss += log1pexp(-y_[i] * margin(th, i));
        return 0.5 * reg + C_ * loss;
    }

    // Gradient; also refreshes the Hessian weights at `th`.
    std::vector<double> gradient(const std::vector<double>& th) {
        std::vector<double> g(dim(), 0.0);
        for (std::size_t j = 0; j < d_; ++j) g[j] = th[j];
        D_.assign(X_.n(), 0.0);
        for (std::size_t i = 0; i < X_.n(); ++i) {
            double yz = y_[i] * margin(th, i);
            double p = 1.0 / (1.0 + std::exp(-yz));
            double coef = C_ * (p - 1.0) * y_[i];
            X_.axpy(i, coef, g);
            g[d_] += coef;
            D_[i] = p * (1.0 - p);
        }
        return g;
    }

    std::vector<double> hessian_times(const std::vector<double>& v) const {
        std::vector<double> out(dim(), 0.0);
        for (std::size_t j = 0; j < d_; ++j) out[j] = v[j];
        for (std::size_t i = 0; i < X_.n(); ++i) {
            double u = X_.dot(i, v) + v[d_];
            double a = C_ * D_[i] * u;
            X_.axpy(i, a, out);
            out[d_] += a;
        }
        return out;
    }

private:
    double margin(const std::vector<double>& th, std::size_t i) const { return X_.dot(i, th) + th[d_]; }

    SparseRows X_;
    double C_;
    std::size_t d_;
    std::vector<double> y_;
    std::vector<double> D_;
};

// Truncated conjugate gradient for H s = -g.
std::vector<double> newton_direction(const Problem& prob, const std::vector<double>& g) {
    const std::size_t m = g.size();
    std::vector<double> s(m, 0.0), r(m), p(m);
    for (std::size_t i = 0; i < m; ++i) r[i] = -g[i];
    p = r;
    double gnorm = norm2(g);
    double eta = std::min(0.5, std::sqrt(gnorm));
    double rr = dotv(r, r);
    const std::size_t max_cg = std::min<std::size_t>(m + 1, 1000);
    for (std::size_t it = 0; it < max_cg && std::sqrt(rr) > eta * gnorm; ++it) {
        auto Hp = prob.hessian_times(p);
        double pHp = dotv(p, Hp);
        if (pHp <= 0) break;
        double alpha = rr / pHp;
        for (std::size_t i = 0; i < m; ++i) {
            s[i] += alpha * p[i];
            r[i] -= alpha * Hp[i];
        }
        double rr_new = dotv(r, r);
        double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < m; ++i) p[i] = r[i] + beta * p[i];
    }
    return s;
}

}  // namespace

LogisticFit fit_logistic_l2(const FeatureMatrix& X, const LogisticOptions& opts) {
    std::size_t pos = std::count(X.labels().begin(), X.labels().end(), 1);
    if (pos == 0 || pos == X.n_rows())
        throw data_error("DegenerateLabels", "logistic regression needs both classes among " +
                                                 std::to_string(X.n_rows()) + " rows");
    Problem prob(X, opts.C);
    std::vector<double> th(prob.dim(), 0.0);
    double f = prob.objective(th);
    auto g = prob.gradient(th);

    LogisticFit fit;
    while (true) {
        fit.gradient_norm = norm2(g);
        if (fit.gradient_norm <= opts.tolerance) {
            fit.converged = true;
            break;
        }
        if (fit.iterations >= opts.max_iter) break;
        ++fit.iterations;

        auto s = newton_direction(prob, g);
        double slope = dotv(g, s);
        if (slope >= 0) {  // not a descent direction; fall back to steepest descent
            for (std::size_t i = 0; i < s.size(); ++i) s[i] = -g[i];
            slope = -dotv(g, g);
        }
        double step = 1.0;
        std::vector<double> trial(th.size());
        double f_trial = f;
        bool accepted = false;
        for (int k = 0; k < 60; ++k) {
            for (std::size_t i = 0; i < th.size(); ++i) trial[i] = th[i] + step * s[i];
            f_trial = prob.objective(trial);
            if (f_trial <= f + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // numerical floor reached before the tolerance
        th.swap(trial);
        f = f_trial;
        g = prob.gradient(th);
    }
    fit.coef.assign(th.begin(), th.end() - 1);
    fit.intercept = th.back();
    return fit;
}

std::vector<std::pair<std::size_t, double>> FeatureSelection::top_signed(std::size_t n, bool disinfo) const {
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t c : columns)
        if (disinfo ? coef[c] > 0 : coef[c] < 0) out.emplace_back(c, coef[c]);
    std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        return disinfo ? a.second > b.second : a.second < b.second;
    });
    if (out.size() > n) out.resize(n);
    return out;
}

FeatureSelection select_top_features(const FeatureMatrix& X, std::size_t k, const LogisticOptions& opts) {
    if (k == 0 || k > X.n_cols())
        throw config_error("InvalidArgument", "cannot select " + std::to_string(k) + " of " +
                                                  std::to_string(X.n_cols()) + " columns");
    auto fit = fit_logistic_l2(X, opts);
    std::vector<std::size_t> order(X.n_cols());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(fit.coef[a]) > std::abs(fit.coef[b]); });
    order.resize(k);
    std::sort(order.begin(), order.end());
    FeatureSelection sel;
    sel.columns = std::move(order);
    sel.coef = std::move(fit.coef);
    sel.converged = fit.converged;
    return sel;
}

}  // namespace domainlens
