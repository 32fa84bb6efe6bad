#include "domainlens/svm.hpp"

#include "domainlens/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace domainlens {
namespace {

constexpr double kTau = 1e-12;
constexpr std::size_t kMaxGramRows = 4000;

struct Csr {
    std::vector<std::size_t> start{0};
    std::vector<std::size_t> col;
    std::vector<double> val;
    std::size_t d = 0;

    Csr(std::span<const double> X, std::size_t n, std::size_t d_) : d(d_) {
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                double v = X[r * d + c];
                if (v != 0.0) {
                    col.push_back(c);
                    val.push_back(v);
                }
            }
            start.push_back(col.size());
        }
    }

    std::size_t n() const { return start.size() - 1; }

    double dot(std::size_t r, std::span<const double> w) const {
        double s = 0.0;
        for (std::size_t k = start[r]; k < start[r + 1]; ++k) s += val[k] * w[col[k]];
        return s;
    }

    void axpy(std::size_t r, double a, std::vector<double>& out) const {
        for (std::size_t k = start[r]; k < start[r + 1]; ++k) out[col[k]] += a * val[k];
    }

    void scatter(std::size_t r, std::vector<double>& dense) const {
        std::fill(dense.begin(), dense.end(), 0.0);
        for (std::size_t k = start[r]; k < start[r + 1]; ++k) dense[col[k]] = val[k];
    }
};

// Linear-kernel rows, precomputed when the Gram matrix is small enough.
class KernelRows {
public:
    explicit KernelRows(const Csr& X) : X_(X), n_(X.n()), buf_(X.d) {
        diag_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            for (std::size_t k = X.start[i]; k < X.start[i + 1]; ++k) s += X.val[k] * X.val[k];
            diag_[i] = s;
        }
        if (n_ <= kMaxGramRows) {
            gram_.resize(n_ * n_);
            for (std::size_t i = 0; i < n_; ++i) {
                X_.scatter(i, buf_);
                for (std::size_t j = i; j < n_; ++j) {
                    double v = X_.dot(j, buf_);
                    gram_[i * n_ + j] = v;
                    gram_[j * n_ + i] = v;
                }
            }
        }
    }

    double diag(std::size_t i) const { return diag_[i]; }

    // Row i of the kernel matrix; valid until the next call when computed.
    std::span<const double> row(std::size_t i, std::vector<double>& scratch) {
        if (!gram_.empty()) return {gram_.data() + i * n_, n_};
        X_.scatter(i, buf_);
        scratch.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) scratch[j] = X_.dot(j, buf_);
        return scratch;
    }

private:
    const Csr& X_;
    std::size_t n_;
    std::vector<double> buf_;
    std::vector<double> diag_;
    std::vector<double> gram_;
};

void check_inputs(std::size_t n, std::size_t d, std::span<const double> X, std::span<const int> y,
                  const SvmHyperparams& hp) {
    if (X.size() != n * d || y.size() != n) throw invariant_error("ShapeMismatch", "svm input shape");
    if (!(hp.C > 0.0) || !std::isfinite(hp.C)) throw config_error("InvalidArgument", "C must be positive");
    if (!(hp.tolerance > 0.0)) throw config_error("InvalidArgument", "tolerance must be positive");
    std::size_t pos = std::count(y.begin(), y.end(), 1);
    if (pos == 0 || pos == n)
        throw data_error("DegenerateLabels", "svm training needs both classes among " + std::to_string(n) + " rows");
}

SvmSolution train_l2(const Csr& X, std::span<const int> labels, const SvmHyperparams& hp) {
    const std::size_t n = X.n();
    const double C = hp.C;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] == 1 ? 1.0 : -1.0;
    std::vector<double> alpha(n, 0.0), G(n, -1.0);
    KernelRows K(X);
    std::vector<double> scratch_i, scratch_j;

    auto upper = [&](std::size_t t) { return alpha[t] >= C; };
    auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

    const std::size_t max_iter = hp.max_iter ? hp.max_iter : std::max<std::size_t>(10'000'000, 100 * n);
    SvmSolution sol;
    for (;;) {
        // Working set: maximal violating i, then j by second-order gain.
        double Gmax = -std::numeric_limits<double>::infinity();
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (y[t] > 0) {
                if (!upper(t) && -G[t] >= Gmax) {
                    Gmax = -G[t];
                    i = t;
                }
            } else if (!lower(t) && G[t] >= Gmax) {
                Gmax = G[t];
                i = t;
            }
        }
        double Gmax2 = -std::numeric_limits<double>::infinity();
        std::size_t j = n;
        double best = std::numeric_limits<double>::infinity();
        std::span<const double> Ki;
        if (i < n) Ki = K.row(i, scratch_i);
        for (std::size_t t = 0; t < n && i < n; ++t) {
            double grad_diff;
            if (y[t] > 0) {
                if (lower(t)) continue;
                grad_diff = Gmax + G[t];
                Gmax2 = std::max(Gmax2, G[t]);
            } else {
                if (upper(t)) continue;
                grad_diff = Gmax - G[t];
                Gmax2 = std::max(Gmax2, -G[t]);
            }
            if (grad_diff > 0) {
                double quad = K.diag(i) + K.diag(t) - 2.0 * Ki[t];
                double gain = -(grad_diff * grad_diff) / (quad > 0 ? quad : kTau);
                if (gain <= best) {
                    best = gain;
                    j = t;
                }
            }
        }
        if (i == n || j == n || Gmax + Gmax2 < hp.tolerance) {
            sol.converged = true;
            break;
        }
        if (sol.iterations >= max_iter) break;
        ++sol.iterations;

        auto Kj = K.row(j, scratch_j);
        const double old_ai = alpha[i], old_aj = alpha[j];
        const double Qij = y[i] * y[j] * Ki[j];
        if (y[i] != y[j]) {
            double quad = K.diag(i) + K.diag(j) + 2.0 * Qij;
            if (quad <= 0) quad = kTau;
            double delta = (-G[i] - G[j]) / quad;
            double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0) {
                if (alpha[j] < 0) {
                    alpha[j] = 0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0) {
                alpha[i] = 0;
                alpha[j] = -diff;
            }
            if (diff > 0) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = C - diff;
                }
            } else if (alpha[j] > C) {
                alpha[j] = C;
                alpha[i] = C + diff;
            }
        } else {
            double quad = K.diag(i) + K.diag(j) - 2.0 * Qij;
            if (quad <= 0) quad = kTau;
            double delta = (G[i] - G[j]) / quad;
            double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = sum - C;
                }
            } else if (alpha[j] < 0) {
                alpha[j] = 0;
                alpha[i] = sum;
            }
            if (sum > C) {
                if (alpha[j] > C) {
                    alpha[j] = C;
                    alpha[i] = sum - C;
                }
            } else if (alpha[i] < 0) {
                alpha[i] = 0;
                alpha[j] = sum;
            }
        }
        const double dai = alpha[i] - old_ai, daj = alpha[j] - old_aj;
        for (std::size_t t = 0; t < n; ++t) G[t] += y[t] * (y[i] * Ki[t] * dai + y[j] * Kj[t] * daj);
    }

    // Bias from the KKT conditions: average over free vectors, else the
    // midpoint of the feasible interval.
    double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum_free = 0.0;
    std::size_t nr_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        double yG = y[t] * G[t];
        if (upper(t)) {
            if (y[t] < 0) ub = std::min(ub, yG);
            else lb = std::max(lb, yG);
        } else if (lower(t)) {
            if (y[t] > 0) ub = std::min(ub, yG);
            else lb = std::max(lb, yG);
        } else {
            ++nr_free;
            sum_free += yG;
        }
    }
    double rho = nr_free > 0 ? sum_free / static_cast<double>(nr_free) : (ub + lb) / 2;
    sol.weights.assign(X.d, 0.0);
    for (std::size_t t = 0; t < n; ++t)
        if (alpha[t] != 0.0) X.axpy(t, alpha[t] * y[t], sol.weights);
    sol.bias = -rho;
    return sol;
}

// Squared-hinge loss part of the L1 arm and its gradient.
double sq_hinge(const Csr& X, const std::vector<double>& y, const std::vector<double>& th, double C,
                std::vector<double>* grad) {
    const std::size_t d = X.d;
    if (grad) grad->assign(d + 1, 0.0);
    double loss = 0.0;
    std::span<const double> w(th.data(), d);
    for (std::size_t i = 0; i < X.n(); ++i) {
        double slack = 1.0 - y[i] * (X.dot(i, w) + th[d]);
        if (slack <= 0) continue;
        loss += slack * slack;
        if (grad) {
            double a = -2.0 * C * slack * y[i];
            X.axpy(i, a, *grad);
            (*grad)[d] += a;
        }
    }
    return C * loss;
}

double l1_norm(const std::vector<double>& th, std::size_t d) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += std::abs(th[j]);
    return s;
}

// Largest eigenvalue of A^T A with A = [X 1], by power iteration.
double lipschitz_estimate(const Csr& X) {
    const std::size_t d = X.d;
    std::vector<double> v(d + 1, 1.0 / std::sqrt(static_cast<double>(d + 1))), u(X.n()), next(d + 1);
    double lambda = 1.0;
    for (int it = 0; it < 50; ++it) {
        for (std::size_t i = 0; i < X.n(); ++i) u[i] = X.dot(i, v) + v[d];
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < X.n(); ++i) {
            X.axpy(i, u[i], next);
            next[d] += u[i];
        }
        double norm = 0.0;
        for (double x : next) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) break;
        lambda = norm;
        for (std::size_t j = 0; j <= d; ++j) v[j] = next[j] / norm;
    }
    return lambda;
}

SvmSolution train_l1(const Csr& X, std::span<const int> labels, const SvmHyperparams& hp) {
    const std::size_t d = X.d;
    std::vector<double> y(X.n());
    for (std::size_t i = 0; i < X.n(); ++i) y[i] = labels[i] == 1 ? 1.0 : -1.0;

    double L = std::max(2.0 * hp.C * lipschitz_estimate(X), 1e-12);
    std::vector<double> x(d + 1, 0.0), x_prev = x, z = x, grad, trial(d + 1);
    double t = 1.0;
    double F_prev = sq_hinge(X, y, x, hp.C, nullptr);
    const std::size_t max_iter = hp.max_iter ? hp.max_iter : 50'000;
    SvmSolution sol;
    for (;;) {
        if (sol.iterations >= max_iter) break;
        ++sol.iterations;
        double hz = sq_hinge(X, y, z, hp.C, &grad);
        double gap = 0.0;
        for (;;) {
            for (std::size_t j = 0; j < d; ++j) {
                double v = z[j] - grad[j] / L;
                double thr = 1.0 / L;
                trial[j] = v > thr ? v - thr : (v < -thr ? v + thr : 0.0);
            }
            trial[d] = z[d] - grad[d] / L;
            double lin = 0.0, sq = 0.0;
            for (std::size_t j = 0; j <= d; ++j) {
                double step = trial[j] - z[j];
                lin += grad[j] * step;
                sq += step * step;
            }
            if (sq_hinge(X, y, trial, hp.C, nullptr) <= hz + lin + 0.5 * L * sq + 1e-12 * std::abs(hz)) {
                gap = 0.0;
                for (std::size_t j = 0; j <= d; ++j) gap = std::max(gap, L * std::abs(trial[j] - z[j]));
                break;
            }
            L *= 2.0;
        }
        x_prev.swap(x);
        x = trial;
        double F = sq_hinge(X, y, x, hp.C, nullptr) + l1_norm(x, d);
        if (gap <= hp.tolerance) {
            sol.converged = true;
            break;
        }
        double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
        if (F > F_prev) {  // momentum restart
            t_next = 1.0;
            z = x;
        } else {
            double beta = (t - 1.0) / t_next;
            for (std::size_t j = 0; j <= d; ++j) z[j] = x[j] + beta * (x[j] - x_prev[j]);
        }
        t = t_next;
        F_prev = F;
    }
    sol.weights.assign(x.begin(), x.end() - 1);
    sol.bias = x[d];
    return sol;
}

}  // namespace

std::string_view to_string(Penalty p) { return p == Penalty::L2 ? "l2" : "l1"; }

Penalty penalty_from_string(std::string_view s) {
    if (s == "l2" || s == "L2") return Penalty::L2;
    if (s == "l1" || s == "L1") return Penalty::L1;
    throw config_error("InvalidArgument", "unknown penalty '" + std::string(s) + "'");
}

double SvmSolution::decision(std::span<const double> x) const {
    double s = bias;
    for (std::size_t j = 0; j < weights.size(); ++j) s += weights[j] * x[j];
    return s;
}

SvmSolution train_linear_svm(std::span<const double> X, std::size_t n, std::size_t d, std::span<const int> y,
                             const SvmHyperparams& hp) {
    check_inputs(n, d, X, y, hp);
    Csr csr(X, n, d);
    return hp.penalty == Penalty::L2 ? train_l2(csr, y, hp) : train_l1(csr, y, hp);
}

SvmSolution train_linear_svm(const FeatureMatrix& X, const SvmHyperparams& hp) {
    return train_linear_svm(X.values(), X.n_rows(), X.n_cols(), X.labels(), hp);
}

double hinge_objective(std::span<const double> X, std::size_t n, std::size_t d, std::span<const int> y,
                       std::span<const double> w, double b, double C) {
    double reg = 0.0;
    for (double v : w) reg += v * v;
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double m = b;
        for (std::size_t j = 0; j < d; ++j) m += w[j] * X[i * d + j];
        double yi = y[i] == 1 ? 1.0 : -1.0;
        loss += std::max(0.0, 1.0 - yi * m);
    }
    return 0.5 * reg + C * loss;
}

std::vector<double> hinge_objective_gradient(std::span<const double> X, std::size_t n, std::size_t d,
                                             std::span<const int> y, std::span<const double> w, double b, double C) {
    std::vector<double> g(w.begin(), w.end());
    g.push_back(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double m = b;
        for (std::size_t j = 0; j < d; ++j) m += w[j] * X[i * d + j];
        double yi = y[i] == 1 ? 1.0 : -1.0;
        if (yi * m < 1.0) {
            for (std::size_t j = 0; j < d; ++j) g[j] -= C * yi * X[i * d + j];
            g[d] -= C * yi;
        }
    }
    return g;
}

}  // namespace domainlens
