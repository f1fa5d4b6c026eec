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

#include "rbarray/su2.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rbarray/errors.h"

namespace rbarray {

namespace {

constexpr Complex kI{0, 1};

void require_probability(double value, const char *name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
    }
}

struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Nodes on [-1, 1] by Newton iteration on P_n from the Chebyshev guess.
GaussLegendre gauss_legendre(int n) {
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

double bloch_average_quadrature(const Unitary2 &u, int n_theta, int n_phi) {
    GaussLegendre rule = gauss_legendre(n_theta);
    double total = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        double cos_theta = rule.nodes[i];
        double c = std::sqrt(0.5 * (1.0 + cos_theta));
        double s = std::sqrt(0.5 * (1.0 - cos_theta));
        double ring = 0.0;
        for (int k = 0; k < n_phi; ++k) {
            double phi = 2.0 * kPi * k / n_phi;
            PureState psi{Complex{c}, std::polar(s, phi)};
            ring += survival_fidelity(psi, u);
        }
        total += rule.weights[i] * ring * (2.0 * kPi / n_phi);
    }
    return total / (4.0 * kPi);
}

}  // namespace

char axis_name(Axis axis) {
    switch (axis) {
        case Axis::kX:
            return 'x';
        case Axis::kY:
            return 'y';
        case Axis::kZ:
            return 'z';
    }
    return '?';
}

Unitary2 Unitary2::checked(Complex a, Complex b, Complex c, Complex d, double tol) {
    Unitary2 u(a, b, c, d);
    if (!u.is_unitary(tol)) {
        throw DomainError("matrix is not unitary");
    }
    return u;
}

Unitary2 Unitary2::operator*(const Unitary2 &rhs) const {
    return {m_[0] * rhs.m_[0] + m_[1] * rhs.m_[2], m_[0] * rhs.m_[1] + m_[1] * rhs.m_[3],
            m_[2] * rhs.m_[0] + m_[3] * rhs.m_[2], m_[2] * rhs.m_[1] + m_[3] * rhs.m_[3]};
}

Unitary2 Unitary2::scaled(Complex factor) const {
    return {m_[0] * factor, m_[1] * factor, m_[2] * factor, m_[3] * factor};
}

Unitary2 Unitary2::adjoint() const {
    return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
}

bool Unitary2::is_unitary(double tol) const {
    Unitary2 product = adjoint() * *this;
    if (product.max_abs_diff(Unitary2::identity()) > tol) {
        return false;
    }
    return std::abs(std::abs(det()) - 1.0) <= tol;
}

double Unitary2::max_abs_diff(const Unitary2 &other) const {
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) {
        worst = std::max(worst, std::abs(m_[k] - other.m_[k]));
    }
    return worst;
}

PureState operator*(const Unitary2 &u, const PureState &psi) {
    return {u.a() * psi.c0 + u.b() * psi.c1, u.c() * psi.c0 + u.d() * psi.c1};
}

Complex inner(const PureState &lhs, const PureState &rhs) {
    return std::conj(lhs.c0) * rhs.c0 + std::conj(lhs.c1) * rhs.c1;
}

DensityMatrix2 DensityMatrix2::from_pure(const PureState &psi) {
    return {psi.c0 * std::conj(psi.c0), psi.c0 * std::conj(psi.c1), psi.c1 * std::conj(psi.c0),
            psi.c1 * std::conj(psi.c1)};
}

DensityMatrix2 DensityMatrix2::maximally_mixed() {
    return {Complex{0.5}, Complex{0}, Complex{0}, Complex{0.5}};
}

double DensityMatrix2::expectation(const PureState &psi) const {
    Complex v0 = m_[0] * psi.c0 + m_[1] * psi.c1;
    Complex v1 = m_[2] * psi.c0 + m_[3] * psi.c1;
    return (std::conj(psi.c0) * v0 + std::conj(psi.c1) * v1).real();
}

double DensityMatrix2::min_eigenvalue() const {
    double mean = 0.5 * (m_[0].real() + m_[3].real());
    double half_gap = 0.5 * (m_[0].real() - m_[3].real());
    return mean - std::sqrt(half_gap * half_gap + std::norm(m_[1]));
}

bool DensityMatrix2::is_valid(double tol) const {
    if (std::abs(trace() - Complex{1}) > tol) {
        return false;
    }
    if (std::abs(m_[0].imag()) > tol || std::abs(m_[3].imag()) > tol ||
        std::abs(m_[1] - std::conj(m_[2])) > tol) {
        return false;
    }
    return min_eigenvalue() >= -tol;
}

PulseSpec::PulseSpec(double phase, double area) : phase_(0.0), area_(area) {
    if (!std::isfinite(phase) || !std::isfinite(area)) {
        throw DomainError("pulse phase and area must be finite");
    }
    if (area < 0.0) {
        throw DomainError("pulse area must be non-negative");
    }
    phase_ = std::fmod(phase, 2.0 * kPi);
    if (phase_ < 0.0) {
        phase_ += 2.0 * kPi;
    }
    if (phase_ >= 2.0 * kPi) {
        phase_ = 0.0;
    }
}

PulseSpec PulseSpec::about(Axis axis, double area) {
    switch (axis) {
        case Axis::kX:
            return {0.0, area};
        case Axis::kY:
            return {kPi / 2, area};
        case Axis::kZ:
            break;
    }
    throw DomainError("microwave pulses rotate about equatorial axes only");
}

PureState make_state(double theta, double phi) {
    if (!(theta >= 0.0 && theta <= kPi)) {
        throw DomainError("polar angle must lie in [0, pi]");
    }
    if (!(phi >= 0.0 && phi < 2.0 * kPi)) {
        throw DomainError("azimuth must lie in [0, 2 pi)");
    }
    return {Complex{std::cos(theta / 2)}, std::polar(std::sin(theta / 2), phi)};
}

Unitary2 pauli(Axis axis) {
    switch (axis) {
        case Axis::kX:
            return {0, 1, 1, 0};
        case Axis::kY:
            return {0, -kI, kI, 0};
        case Axis::kZ:
            return {1, 0, 0, -1};
    }
    return {};
}

Unitary2 rotation(Axis axis, double theta) {
    double c = std::cos(theta / 2);
    double s = std::sin(theta / 2);
    switch (axis) {
        case Axis::kX:
            return {c, -kI * s, -kI * s, c};
        case Axis::kY:
            return {c, -s, s, c};
        case Axis::kZ:
            return {Complex{c, -s}, 0, 0, Complex{c, s}};
    }
    return {};
}

Unitary2 detuned_pulse(double phase, double area, double detuning_ratio) {
    if (area < 0.0) {
        throw DomainError("pulse area must be non-negative");
    }
    double scale = std::sqrt(1.0 + detuning_ratio * detuning_ratio);
    double half = 0.5 * area * scale;
    double c = std::cos(half);
    double s = std::sin(half);
    double nx = std::cos(phase) / scale;
    double ny = std::sin(phase) / scale;
    double nz = detuning_ratio / scale;
    // cos(A/2) I - i sin(A/2) (n . sigma)
    return {Complex{c, -s * nz}, Complex{-s * ny, -s * nx}, Complex{s * ny, -s * nx}, Complex{c, s * nz}};
}

Unitary2 detuned_pulse(const PulseSpec &pulse, double detuning_ratio) {
    return detuned_pulse(pulse.phase(), pulse.area(), detuning_ratio);
}

Unitary2 compose(std::span<const Unitary2> pulses) {
    if (pulses.empty()) {
        throw DomainError("compose needs at least one operator");
    }
    Unitary2 total = pulses.front();
    for (const Unitary2 &u : pulses.subspan(1)) {
        total = u * total;
    }
    return total;
}

bool phase_equivalent(const Unitary2 &u, const Unitary2 &v, double tol) {
    int pivot = 0;
    for (int k = 1; k < 4; ++k) {
        if (std::abs(v.entries()[k]) > std::abs(v.entries()[pivot])) {
            pivot = k;
        }
    }
    Complex vp = v.entries()[pivot];
    Complex up = u.entries()[pivot];
    if (std::abs(vp) == 0.0 || std::abs(up) == 0.0) {
        return u.max_abs_diff(v) <= tol;
    }
    Complex phase = std::polar(1.0, std::arg(up / vp));
    return u.max_abs_diff(v.scaled(phase)) <= tol;
}

Unitary2 canonicalize(const Unitary2 &u) {
    if (!u.is_unitary(1e-9)) {
        throw DomainError("canonicalize expects a unitary");
    }
    Complex lead = std::abs(u.a()) > 1e-12 ? u.a() : u.b();
    return u.scaled(std::conj(lead) / std::abs(lead));
}

double survival_fidelity(const PureState &psi, const Unitary2 &u) {
    return std::norm(inner(psi, u * psi));
}

double bloch_avg_fidelity(const Unitary2 &u, FidelityMethod method) {
    if (!u.is_unitary(1e-9)) {
        throw DomainError("Bloch-averaged fidelity expects a unitary");
    }
    if (method == FidelityMethod::kClosedForm) {
        return 1.0 / 3.0 + std::norm(u.trace()) / 6.0;
    }
    int n = 64;
    double previous = bloch_average_quadrature(u, n, n);
    while (n < 4096) {
        n *= 2;
        double current = bloch_average_quadrature(u, n, n);
        if (std::abs(current - previous) < 1e-10) {
            return current;
        }
        previous = current;
    }
    return previous;
}

DensityMatrix2 apply_channel(const DensityMatrix2 &rho, const Channel &channel) {
    struct Visitor {
        const DensityMatrix2 &rho;

        DensityMatrix2 operator()(const Depolarize &ch) const {
            require_probability(ch.p, "depolarization probability");
            double keep = 1.0 - ch.p;
            return {keep * rho(0, 0) + 0.5 * ch.p, keep * rho(0, 1), keep * rho(1, 0),
                    keep * rho(1, 1) + 0.5 * ch.p};
        }
        DensityMatrix2 operator()(const PhaseDamp &ch) const {
            require_probability(ch.c, "phase damping factor");
            return {rho(0, 0), ch.c * rho(0, 1), ch.c * rho(1, 0), rho(1, 1)};
        }
        DensityMatrix2 operator()(const AmplitudeDamp &ch) const {
            require_probability(ch.gamma, "amplitude damping probability");
            double root = std::sqrt(1.0 - ch.gamma);
            return {rho(0, 0) + ch.gamma * rho(1, 1), root * rho(0, 1), root * rho(1, 0),
                    (1.0 - ch.gamma) * rho(1, 1)};
        }
        DensityMatrix2 operator()(const UnitaryChannel &ch) const {
            const Unitary2 &u = ch.u;
            // U rho U^dagger, expanded.
            Complex t00 = u.a() * rho(0, 0) + u.b() * rho(1, 0);
            Complex t01 = u.a() * rho(0, 1) + u.b() * rho(1, 1);
            Complex t10 = u.c() * rho(0, 0) + u.d() * rho(1, 0);
            Complex t11 = u.c() * rho(0, 1) + u.d() * rho(1, 1);
            return {t00 * std::conj(u.a()) + t01 * std::conj(u.b()),
                    t00 * std::conj(u.c()) + t01 * std::conj(u.d()),
                    t10 * std::conj(u.a()) + t11 * std::conj(u.b()),
                    t10 * std::conj(u.c()) + t11 * std::conj(u.d())};
        }
    };
    return std::visit(Visitor{rho}, channel);
}

}  // namespace rbarray
