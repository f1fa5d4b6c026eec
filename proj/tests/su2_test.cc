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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracle.h"
#include "rbarray/errors.h"
#include "rbarray/su2.h"

namespace rbarray {
namespace {

using oracle::C;

constexpr double kTight = 1e-12;

void expect_matrix(const Unitary2 &u, const oracle::M &expected, double tol = kTight) {
    EXPECT_LT(oracle::max_diff(u.entries(), expected), tol);
}

Unitary2 random_unitary(std::mt19937_64 &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 4 * kPi);
    double x = n(rng), y = n(rng), z = n(rng);
    double len = std::sqrt(x * x + y * y + z * z);
    double theta = angle(rng);
    double chi = angle(rng);
    oracle::M h = oracle::add(oracle::add(oracle::scale(oracle::sx(), x / len), oracle::scale(oracle::sy(), y / len)),
                              oracle::scale(oracle::sz(), z / len));
    oracle::M m = oracle::scale(oracle::expm(oracle::scale(h, C{0, -theta / 2})), std::polar(1.0, chi));
    return {m[0], m[1], m[2], m[3]};
}

TEST(MakeState, Poles) {
    PureState zero = make_state(0, 0);
    EXPECT_NEAR(std::abs(zero.c0 - C{1}), 0, kTight);
    EXPECT_NEAR(std::abs(zero.c1), 0, kTight);
    PureState one = make_state(kPi, 0);
    EXPECT_NEAR(std::abs(one.c0), 0, kTight);
    EXPECT_NEAR(std::abs(one.c1 - C{1}), 0, kTight);
}

TEST(MakeState, EquatorHasImaginaryAmplitude) {
    PureState psi = make_state(kPi / 2, kPi / 2);
    EXPECT_NEAR(std::abs(psi.c0 - C{1 / std::sqrt(2.0)}), 0, kTight);
    EXPECT_NEAR(std::abs(psi.c1 - C{0, 1 / std::sqrt(2.0)}), 0, kTight);
    EXPECT_NEAR(psi.norm_squared(), 1.0, kTight);
}

TEST(MakeState, RejectsOutOfRangeAngles) {
    EXPECT_THROW(make_state(-0.1, 0), DomainError);
    EXPECT_THROW(make_state(kPi + 0.1, 0), DomainError);
    EXPECT_THROW(make_state(1.0, 2 * kPi), DomainError);
    EXPECT_THROW(make_state(1.0, -0.5), DomainError);
    EXPECT_THROW(make_state(std::nan(""), 0), DomainError);
}

TEST(Rotation, MatchesSeriesExponential) {
    expect_matrix(rotation(Axis::kX, kPi), {C{0}, C{0, -1}, C{0, -1}, C{0}});
    expect_matrix(rotation(Axis::kZ, 2 * kPi), {C{-1}, C{0}, C{0}, C{-1}});
    const double h = 1 / std::sqrt(2.0);
    expect_matrix(rotation(Axis::kY, kPi / 2), {C{h}, C{-h}, C{h}, C{h}});

    const oracle::M paulis[3] = {oracle::sx(), oracle::sy(), oracle::sz()};
    const Axis axes[3] = {Axis::kX, Axis::kY, Axis::kZ};
    for (int a = 0; a < 3; ++a) {
        for (double theta : {-2.5, -0.3, 0.0, 0.7, 1.9, 5.1}) {
            expect_matrix(rotation(axes[a], theta), oracle::expm(oracle::scale(paulis[a], C{0, -theta / 2})), 1e-13);
        }
    }
}

TEST(Rotation, InverseAndUnitarity) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-10, 10);
    for (Axis axis : {Axis::kX, Axis::kY, Axis::kZ}) {
        for (int k = 0; k < 50; ++k) {
            double theta = angle(rng);
            Unitary2 r = rotation(axis, theta);
            EXPECT_TRUE(r.is_unitary(kTight));
            EXPECT_LT((r * rotation(axis, -theta)).max_abs_diff(Unitary2::identity()), kTight);
        }
    }
}

TEST(DetunedPulse, SpecExamples) {
    expect_matrix(detuned_pulse(0, kPi, 0), {C{0}, C{0, -1}, C{0, -1}, C{0}});
    expect_matrix(detuned_pulse(0, 2 * kPi, 0), {C{-1}, C{0}, C{0}, C{-1}});
    expect_matrix(detuned_pulse(0, kPi, std::sqrt(15.0)), oracle::eye(), 1e-12);
    expect_matrix(detuned_pulse(0, kPi, std::sqrt(3.0)), oracle::scale(oracle::eye(), -1.0), 1e-12);
}

TEST(DetunedPulse, MatchesHamiltonianExponential) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> phase(0, 2 * kPi), area(0, 4 * kPi), ratio(-8, 8);
    for (int k = 0; k < 200; ++k) {
        double p = phase(rng), a = area(rng), r = ratio(rng);
        expect_matrix(detuned_pulse(p, a, r), oracle::pulse(p, a, r), 1e-11);
    }
}

TEST(DetunedPulse, DeterminantAndAreaLaw) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> phase(0, 2 * kPi), area(0, 6 * kPi), ratio(-10, 10);
    for (int k = 0; k < 500; ++k) {
        double p = phase(rng), a = area(rng), r = ratio(rng);
        Unitary2 u = detuned_pulse(p, a, r);
        EXPECT_NEAR(std::abs(u.det() - C{1}), 0, kTight);
        EXPECT_NEAR(std::abs(u.trace()), 2 * std::abs(std::cos(a * std::sqrt(1 + r * r) / 2)), 1e-10);
    }
}

TEST(DetunedPulse, PulseSpecOverloadAgrees) {
    PulseSpec spec(kPi / 2, 3 * kPi / 2);
    EXPECT_LT(detuned_pulse(spec, 0.4).max_abs_diff(detuned_pulse(kPi / 2, 3 * kPi / 2, 0.4)), 1e-15);
}

TEST(PulseSpec, NormalizesPhaseAndRejectsNegativeArea) {
    EXPECT_NEAR(PulseSpec(-kPi / 2, 1).phase(), 3 * kPi / 2, 1e-15);
    EXPECT_NEAR(PulseSpec(5 * kPi, 1).phase(), kPi, 1e-12);
    EXPECT_THROW(PulseSpec(0, -1e-3), DomainError);
    EXPECT_THROW(PulseSpec(std::nan(""), 1), DomainError);
    EXPECT_THROW(PulseSpec::about(Axis::kZ, kPi), DomainError);
    EXPECT_NEAR(PulseSpec::about(Axis::kY, kPi).phase(), kPi / 2, 1e-15);
}

TEST(Compose, FirstElementAppliedFirst) {
    Unitary2 u = rotation(Axis::kY, 0.3);
    std::vector<Unitary2> single{u};
    EXPECT_LT(compose(single).max_abs_diff(u), 1e-15);

    std::vector<Unitary2> halves{rotation(Axis::kX, kPi / 2), rotation(Axis::kX, kPi / 2)};
    EXPECT_LT(compose(halves).max_abs_diff(rotation(Axis::kX, kPi)), kTight);

    std::vector<Unitary2> z_gate{rotation(Axis::kX, 3 * kPi / 2), rotation(Axis::kY, kPi / 2),
                                 rotation(Axis::kX, kPi / 2)};
    EXPECT_TRUE(phase_equivalent(compose(z_gate), Unitary2(1, 0, 0, C{0, 1})));

    Unitary2 a = rotation(Axis::kX, 0.4), b = rotation(Axis::kY, 1.1);
    std::vector<Unitary2> ordered{a, b};
    EXPECT_LT(oracle::max_diff(compose(ordered).entries(), oracle::mul(b.entries(), a.entries())), kTight);

    EXPECT_THROW(compose(std::vector<Unitary2>{}), DomainError);
}

TEST(PhaseEquivalent, SpecExamples) {
    Unitary2 u = rotation(Axis::kY, 0.9);
    EXPECT_TRUE(phase_equivalent(u, u.scaled(-1)));
    EXPECT_FALSE(phase_equivalent(rotation(Axis::kX, kPi), rotation(Axis::kY, kPi)));
    EXPECT_TRUE(phase_equivalent(rotation(Axis::kZ, kPi), Unitary2(1, 0, 0, -1)));
}

TEST(PhaseEquivalent, AgreesWithBruteForcePhaseSearch) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> chi(0, 2 * kPi);
    for (int k = 0; k < 40; ++k) {
        Unitary2 u = random_unitary(rng);
        Unitary2 v = k % 2 == 0 ? u.scaled(std::polar(1.0, chi(rng))) : random_unitary(rng);
        bool brute = oracle::phase_free_diff(u.entries(), v.entries()) <= 1e-9;
        EXPECT_EQ(phase_equivalent(u, v), brute) << "sample " << k;
    }
}

TEST(PhaseEquivalent, IsAnEquivalenceOnPhaseFamilies) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> chi(0, 2 * kPi);
    for (int k = 0; k < 50; ++k) {
        Unitary2 u = random_unitary(rng);
        Unitary2 v = u.scaled(std::polar(1.0, chi(rng)));
        Unitary2 w = v.scaled(std::polar(1.0, chi(rng)));
        EXPECT_TRUE(phase_equivalent(u, u));
        EXPECT_EQ(phase_equivalent(u, v), phase_equivalent(v, u));
        EXPECT_TRUE(phase_equivalent(u, v) && phase_equivalent(v, w) && phase_equivalent(u, w));
    }
}

TEST(Canonicalize, SpecExamples) {
    expect_matrix(canonicalize(rotation(Axis::kX, kPi)), {C{0}, C{1}, C{1}, C{0}});
    expect_matrix(canonicalize(Unitary2::identity()), oracle::eye());
    expect_matrix(canonicalize(rotation(Axis::kZ, kPi / 2)), {C{1}, C{0}, C{0}, C{0, 1}});
    EXPECT_THROW(canonicalize(Unitary2(1, 1, 0, 1)), DomainError);
}

TEST(Canonicalize, LeadingEntryIsPositiveReal) {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 100; ++k) {
        Unitary2 u = canonicalize(random_unitary(rng));
        C lead = std::abs(u.a()) > 1e-12 ? u.a() : u.b();
        EXPECT_NEAR(lead.imag(), 0, 1e-12);
        EXPECT_GT(lead.real(), 0);
    }
}

TEST(SurvivalFidelity, SpecExamples) {
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> theta(0, kPi), phi(0, 2 * kPi);
    for (int k = 0; k < 10; ++k) {
        EXPECT_NEAR(survival_fidelity(make_state(theta(rng), phi(rng)), Unitary2::identity()), 1.0, kTight);
    }
    EXPECT_NEAR(survival_fidelity(PureState::zero(), rotation(Axis::kX, kPi)), 0.0, kTight);
    for (double r : {0.0, 0.5, std::sqrt(3.0), 2.2, std::sqrt(15.0)}) {
        double big_a = kPi * std::sqrt(1 + r * r);
        double generalized_rabi = 1 - std::pow(std::sin(big_a / 2), 2) / (1 + r * r);
        EXPECT_NEAR(survival_fidelity(PureState::zero(), detuned_pulse(0, kPi, r)), generalized_rabi, 1e-12);
    }
}

TEST(BlochAverage, SpecExamples) {
    for (FidelityMethod m : {FidelityMethod::kClosedForm, FidelityMethod::kQuadrature}) {
        EXPECT_NEAR(bloch_avg_fidelity(Unitary2::identity(), m), 1.0, 1e-10);
        EXPECT_NEAR(bloch_avg_fidelity(rotation(Axis::kX, kPi), m), 1.0 / 3.0, 1e-10);
        EXPECT_NEAR(bloch_avg_fidelity(detuned_pulse(0, kPi, std::sqrt(15.0)), m), 1.0, 1e-10);
    }
}

TEST(BlochAverage, QuadratureMatchesClosedFormAndMidpointOracle) {
    std::mt19937_64 rng(25);
    for (int k = 0; k < 200; ++k) {
        Unitary2 u = random_unitary(rng);
        double closed = bloch_avg_fidelity(u, FidelityMethod::kClosedForm);
        EXPECT_NEAR(bloch_avg_fidelity(u, FidelityMethod::kQuadrature), closed, 1e-8);
        if (k < 5) {
            EXPECT_NEAR(oracle::sphere_average(u.entries()), closed, 2e-5);
        }
    }
}

TEST(BlochAverage, RejectsNonUnitary) {
    EXPECT_THROW(bloch_avg_fidelity(Unitary2(1, 0.5, 0, 1)), DomainError);
}

TEST(Channels, SpecExamples) {
    DensityMatrix2 plus = DensityMatrix2::from_pure(make_state(kPi / 2, 0));
    DensityMatrix2 mixed = apply_channel(plus, Depolarize{1.0});
    EXPECT_NEAR(std::abs(mixed(0, 0) - C{0.5}), 0, kTight);
    EXPECT_NEAR(std::abs(mixed(0, 1)), 0, kTight);
    EXPECT_NEAR(std::abs(mixed(1, 1) - C{0.5}), 0, kTight);

    DensityMatrix2 zero = DensityMatrix2::from_pure(PureState::zero());
    DensityMatrix2 damped = apply_channel(zero, PhaseDamp{0.5});
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) EXPECT_NEAR(std::abs(damped(r, c) - zero(r, c)), 0, kTight);

    for (double p : {0.0, 0.1, 0.35, 1.0}) {
        DensityMatrix2 out = apply_channel(plus, Depolarize{p});
        EXPECT_NEAR(out.expectation(make_state(kPi / 2, 0)), 1 - p / 2, kTight);
    }
}

TEST(Channels, AmplitudeDampAndUnitaryAction) {
    DensityMatrix2 one = DensityMatrix2::from_pure(PureState::one());
    DensityMatrix2 relaxed = apply_channel(one, AmplitudeDamp{0.25});
    EXPECT_NEAR(relaxed.population0(), 0.25, kTight);
    EXPECT_NEAR(relaxed.population1(), 0.75, kTight);

    DensityMatrix2 flipped = apply_channel(one, UnitaryChannel{rotation(Axis::kX, kPi)});
    EXPECT_NEAR(flipped.population0(), 1.0, kTight);
}

TEST(Channels, RejectOutOfRangeParameters) {
    DensityMatrix2 rho;
    EXPECT_THROW(apply_channel(rho, Depolarize{-0.1}), DomainError);
    EXPECT_THROW(apply_channel(rho, Depolarize{1.1}), DomainError);
    EXPECT_THROW(apply_channel(rho, PhaseDamp{1.5}), DomainError);
    EXPECT_THROW(apply_channel(rho, AmplitudeDamp{-1}), DomainError);
}

TEST(Channels, PreserveTraceAndPositivity) {
    std::mt19937_64 rng(26);
    std::uniform_real_distribution<double> u01(0, 1), theta(0, kPi), phi(0, 2 * kPi);
    for (int k = 0; k < 300; ++k) {
        // Random mixed state: convex mix of a pure state and the maximally mixed state.
        DensityMatrix2 pure = DensityMatrix2::from_pure(make_state(theta(rng), phi(rng)));
        DensityMatrix2 rho = apply_channel(pure, Depolarize{u01(rng)});
        Channel channels[] = {Depolarize{u01(rng)}, PhaseDamp{u01(rng)}, AmplitudeDamp{u01(rng)},
                              UnitaryChannel{random_unitary(rng)}};
        for (const Channel &ch : channels) {
            DensityMatrix2 out = apply_channel(rho, ch);
            EXPECT_NEAR(std::abs(out.trace() - C{1}), 0, 1e-12);
            EXPECT_GE(out.min_eigenvalue(), -1e-12);
            EXPECT_TRUE(out.is_valid());
        }
    }
}

TEST(Unitary2, CheckedRejectsNonUnitary) {
    EXPECT_NO_THROW(Unitary2::checked(0, 1, 1, 0));
    EXPECT_THROW(Unitary2::checked(1, 1, 0, 1), DomainError);
    EXPECT_FALSE(Unitary2(2, 0, 0, 0.5).is_unitary());
}

}  // namespace
}  // namespace rbarray
