// Copyright 2026 The rbarray Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "rbarray/errors.h"
#include "rbarray/rb.h"

namespace rbarray {

namespace {

constexpr double kSigmaFloor = 1e-3;
constexpr int kGridPoints = 241;

// Parameters in fit coordinates: amplitude a = 1 - d_if, and d.
struct Params {
    double a;
    double d;
};

struct Problem {
    std::span<const SurvivalPoint> points;
    double sign;

    double decay(int length, double d) const { return std::pow(1.0 - d, length); }

    double model(const SurvivalPoint &p, const Params &x) const {
        return 0.5 + sign * 0.5 * x.a * decay(p.length, x.d);
    }

    double chi2(const Params &x) const {
        double total = 0.0;
        for (const SurvivalPoint &p : points) {
            double r = (p.fraction - model(p, x)) / p.sigma;
            total += r * r;
        }
        return total;
    }

    // Weighted Jacobian rows and residuals accumulate into J^T J and J^T r.
    void normal_equations(const Params &x, double jtj[2][2], double jtr[2]) const {
        jtj[0][0] = jtj[0][1] = jtj[1][0] = jtj[1][1] = 0.0;
        jtr[0] = jtr[1] = 0.0;
        for (const SurvivalPoint &p : points) {
            double w = 1.0 / p.sigma;
            double g = decay(p.length, x.d);
            double da = w * sign * 0.5 * g;
            double dd = p.length == 0 ? 0.0
                                      : -w * sign * 0.5 * x.a * p.length * std::pow(1.0 - x.d, p.length - 1);
            double r = w * (p.fraction - model(p, x));
            jtj[0][0] += da * da;
            jtj[0][1] += da * dd;
            jtj[1][1] += dd * dd;
            jtr[0] += da * r;
            jtr[1] += dd * r;
        }
        jtj[1][0] = jtj[0][1];
    }

    // Best amplitude for fixed d, clamped to the box.
    double best_amplitude(double d) const {
        double num = 0.0;
        double den = 0.0;
        for (const SurvivalPoint &p : points) {
            double w2 = 1.0 / (p.sigma * p.sigma);
            double g = sign * 0.5 * decay(p.length, d);
            num += w2 * g * (p.fraction - 0.5);
            den += w2 * g * g;
        }
        if (den <= 0.0) {
            return 0.0;
        }
        return std::clamp(num / den, 0.0, 1.0);
    }
};

double projected_gradient_norm(const Params &x, const double jtr[2]) {
    // The chi^2 gradient is -2 J^T r; components pushing out of the box do not count.
    double g[2] = {-2.0 * jtr[0], -2.0 * jtr[1]};
    double v[2] = {x.a, x.d};
    double norm2 = 0.0;
    for (int k = 0; k < 2; ++k) {
        if ((v[k] <= 0.0 && g[k] > 0.0) || (v[k] >= 1.0 && g[k] < 0.0)) {
            continue;
        }
        norm2 += g[k] * g[k];
    }
    return std::sqrt(norm2);
}

}  // namespace

DecayFit fit_decay(std::span<const SurvivalPoint> points, int sign) {
    if (sign != 1 && sign != -1) {
        throw DomainError("fit sign must be +1 or -1");
    }
    std::set<int> lengths;
    for (const SurvivalPoint &p : points) {
        if (!(p.fraction >= 0.0 && p.fraction <= 1.0)) {
            throw DomainError("survival fractions must lie in [0, 1]");
        }
        if (!(p.sigma > 0.0)) {
            throw DomainError("point uncertainties must be positive");
        }
        if (p.length < 0) {
            throw DomainError("sequence lengths must be non-negative");
        }
        lengths.insert(p.length);
    }
    if (lengths.size() < 2) {
        throw DomainError("a decay fit needs at least 2 distinct lengths");
    }

    Problem problem{points, static_cast<double>(sign)};

    // Coarse stage.
    Params best{problem.best_amplitude(0.0), 0.0};
    double best_chi2 = problem.chi2(best);
    for (int k = 0; k < kGridPoints; ++k) {
        double d = std::pow(10.0, -6.0 + 6.0 * k / (kGridPoints - 1));
        Params trial{problem.best_amplitude(d), d};
        double c = problem.chi2(trial);
        if (c < best_chi2) {
            best = trial;
            best_chi2 = c;
        }
    }

    // Projected, damped Gauss-Newton.
    Params x = best;
    double chi2 = best_chi2;
    double lambda = 1e-3;
    int iterations = 0;
    for (; iterations < 500; ++iterations) {
        double jtj[2][2];
        double jtr[2];
        problem.normal_equations(x, jtj, jtr);
        if (projected_gradient_norm(x, jtr) < 1e-12) {
            break;
        }
        bool improved = false;
        while (lambda < 1e12) {
            double a00 = jtj[0][0] * (1.0 + lambda) + 1e-300;
            double a11 = jtj[1][1] * (1.0 + lambda) + 1e-300;
            double a01 = jtj[0][1];
            double det = a00 * a11 - a01 * a01;
            double step_a = (a11 * jtr[0] - a01 * jtr[1]) / det;
            double step_d = (a00 * jtr[1] - a01 * jtr[0]) / det;
            if (!std::isfinite(step_a) || !std::isfinite(step_d)) {
                lambda *= 10.0;
                continue;
            }
            Params trial{std::clamp(x.a + step_a, 0.0, 1.0), std::clamp(x.d + step_d, 0.0, 1.0)};
            double c = problem.chi2(trial);
            if (c <= chi2) {
                bool moved = trial.a != x.a || trial.d != x.d;
                improved = moved && c < chi2;
                x = trial;
                chi2 = c;
                lambda = std::max(lambda / 10.0, 1e-15);
                break;
            }
            lambda *= 10.0;
        }
        if (!improved) {
            break;
        }
    }

    DecayFit fit;
    fit.sign = sign;
    fit.d_if = 1.0 - x.a;
    fit.d = x.d;
    fit.f2 = 1.0 - x.d / 2.0;
    fit.chi2 = chi2;
    fit.iterations = iterations;

    double sum_sq = 0.0;
    for (const SurvivalPoint &p : points) {
        double r = p.fraction - problem.model(p, x);
        sum_sq += r * r;
    }
    fit.rms_residual = std::sqrt(sum_sq / static_cast<double>(points.size()));

    double jtj[2][2];
    double jtr[2];
    problem.normal_equations(x, jtj, jtr);
    double det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0];
    const double inf = std::numeric_limits<double>::infinity();
    if (det > 1e-14 * std::max(1.0, jtj[0][0] * jtj[1][1])) {
        fit.stderr_d_if = std::sqrt(jtj[1][1] / det);
        fit.stderr_d = std::sqrt(jtj[0][0] / det);
    } else {
        fit.stderr_d_if = inf;
        fit.stderr_d = inf;
    }

    constexpr double kEdge = 1e-12;
    fit.boundary = x.a <= kEdge || x.a >= 1.0 - kEdge || x.d <= kEdge || x.d >= 1.0 - kEdge;
    return fit;
}

std::vector<SurvivalPoint> survival_points(const RBDataset &dataset) {
    // Pooled counts per length, keyed in ascending length order.
    std::map<int, std::pair<long long, long long>> pooled;
    for (const SurvivalRecord &r : dataset.records) {
        if (r.shots < 1 || r.survivors < 0 || r.survivors > r.shots) {
            throw DomainError("record counts must satisfy 0 <= survivors <= shots, shots >= 1");
        }
        auto &[survivors, shots] = pooled[r.length];
        survivors += r.survivors;
        shots += r.shots;
    }
    std::vector<SurvivalPoint> points;
    points.reserve(pooled.size());
    for (const auto &[length, counts] : pooled) {
        const double n = static_cast<double>(counts.second);
        const double p = static_cast<double>(counts.first) / n;
        const double sigma = std::max(std::sqrt(p * (1.0 - p) / n), kSigmaFloor);
        points.push_back({length, p, sigma});
    }
    return points;
}

DecayFit fit_decay(const RBDataset &dataset, int sign) {
    std::vector<SurvivalPoint> points = survival_points(dataset);
    return fit_decay(points, sign);
}

}  // namespace rbarray
