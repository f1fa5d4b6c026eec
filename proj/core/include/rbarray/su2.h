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

#ifndef RBARRAY_SU2_H_
#define RBARRAY_SU2_H_

#include <array>
#include <complex>
#include <numbers>
#include <span>
#include <variant>

namespace rbarray {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Default tolerance for "equal up to a global phase".
inline constexpr double kPhaseTolerance = 1e-9;

enum class Axis { kX, kY, kZ };

char axis_name(Axis axis);

/// Complex 2x2 operator stored row-major as [[a, b], [c, d]].
///
/// The plain constructor does not check unitarity so intermediate products and
/// deliberately broken inputs can be represented; `checked` and `is_unitary`
/// validate.
class Unitary2 {
   public:
    Unitary2() : m_{Complex{1}, Complex{0}, Complex{0}, Complex{1}} {}
    Unitary2(Complex a, Complex b, Complex c, Complex d) : m_{a, b, c, d} {}

    static Unitary2 identity() { return {}; }
    /// Throws DomainError unless U^dagger U = I and |det U| = 1 within `tol`.
    static Unitary2 checked(Complex a, Complex b, Complex c, Complex d, double tol = 1e-12);

    Complex a() const { return m_[0]; }
    Complex b() const { return m_[1]; }
    Complex c() const { return m_[2]; }
    Complex d() const { return m_[3]; }
    Complex operator()(int row, int col) const { return m_[2 * row + col]; }
    const std::array<Complex, 4> &entries() const { return m_; }

    Unitary2 operator*(const Unitary2 &rhs) const;
    Unitary2 scaled(Complex factor) const;
    Unitary2 adjoint() const;
    Complex trace() const { return m_[0] + m_[3]; }
    Complex det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

    bool is_unitary(double tol = 1e-12) const;
    /// Largest entrywise modulus of (this - other).
    double max_abs_diff(const Unitary2 &other) const;

   private:
    std::array<Complex, 4> m_;
};

struct PureState {
    Complex c0{1};
    Complex c1{0};

    static PureState zero() { return {Complex{1}, Complex{0}}; }
    static PureState one() { return {Complex{0}, Complex{1}}; }
    double norm_squared() const { return std::norm(c0) + std::norm(c1); }
};

PureState operator*(const Unitary2 &u, const PureState &psi);
/// <lhs|rhs>
Complex inner(const PureState &lhs, const PureState &rhs);

class DensityMatrix2 {
   public:
    DensityMatrix2() : m_{Complex{1}, Complex{0}, Complex{0}, Complex{0}} {}
    DensityMatrix2(Complex r00, Complex r01, Complex r10, Complex r11) : m_{r00, r01, r10, r11} {}

    static DensityMatrix2 from_pure(const PureState &psi);
    static DensityMatrix2 maximally_mixed();

    Complex operator()(int row, int col) const { return m_[2 * row + col]; }
    /// Probability of finding the qubit in |0>.
    double population0() const { return m_[0].real(); }
    double population1() const { return m_[3].real(); }
    /// <psi|rho|psi>
    double expectation(const PureState &psi) const;
    Complex trace() const { return m_[0] + m_[3]; }
    double min_eigenvalue() const;
    bool is_valid(double tol = 1e-12) const;

   private:
    std::array<Complex, 4> m_;
};

/// One square microwave pulse. The phase selects the equatorial rotation axis
/// (0 -> x, pi/2 -> y); the area is Omega * t on resonance.
class PulseSpec {
   public:
    PulseSpec(double phase, double area);
    static PulseSpec about(Axis axis, double area);

    double phase() const { return phase_; }
    double area() const { return area_; }

   private:
    double phase_;
    double area_;
};

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>, theta in [0, pi], phi in [0, 2 pi).
PureState make_state(double theta, double phi);

Unitary2 pauli(Axis axis);

/// exp(-i theta sigma_axis / 2)
Unitary2 rotation(Axis axis, double theta);

/// Propagator of H = (Omega/2)(cos(phase) sx + sin(phase) sy) + (delta/2) sz for
/// t = area / Omega, with detuning_ratio = delta / Omega. Equivalent to a
/// rotation by area * sqrt(1 + r^2) about (cos phase, sin phase, r) / sqrt(1 + r^2).
Unitary2 detuned_pulse(double phase, double area, double detuning_ratio);
Unitary2 detuned_pulse(const PulseSpec &pulse, double detuning_ratio);

/// Product of the list with the first element applied first. Throws on an empty list.
Unitary2 compose(std::span<const Unitary2> pulses);

/// True iff min over chi of max |U - e^{i chi} V| is within `tol`.
bool phase_equivalent(const Unitary2 &u, const Unitary2 &v, double tol = kPhaseTolerance);

/// Removes the global phase so the first non-negligible top-row entry is real and positive.
Unitary2 canonicalize(const Unitary2 &u);

/// |<psi|U|psi>|^2
double survival_fidelity(const PureState &psi, const Unitary2 &u);

enum class FidelityMethod { kQuadrature, kClosedForm };

/// Survival fidelity averaged uniformly over the Bloch sphere.
///
/// kClosedForm evaluates 1/3 + |Tr U|^2 / 6. kQuadrature integrates the
/// surface average directly with Gauss-Legendre nodes in cos(theta) and a
/// periodic trapezoid rule in phi, starting at 64 x 64 and doubling both until
/// successive estimates agree to 1e-10.
double bloch_avg_fidelity(const Unitary2 &u, FidelityMethod method = FidelityMethod::kClosedForm);

struct Depolarize {
    double p;
};
/// Scales the off-diagonal coherences by `c`.
struct PhaseDamp {
    double c;
};
/// Relaxation |1> -> |0> with probability `gamma`.
struct AmplitudeDamp {
    double gamma;
};
struct UnitaryChannel {
    Unitary2 u;
};

using Channel = std::variant<Depolarize, PhaseDamp, AmplitudeDamp, UnitaryChannel>;

DensityMatrix2 apply_channel(const DensityMatrix2 &rho, const Channel &channel);

}  // namespace rbarray

#endif  // RBARRAY_SU2_H_
