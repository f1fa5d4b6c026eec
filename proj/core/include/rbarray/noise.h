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

#ifndef RBARRAY_NOISE_H_
#define RBARRAY_NOISE_H_

#include <optional>

#include "rbarray/random.h"
#include "rbarray/su2.h"

namespace rbarray {

/// State preparation and measurement error probabilities.
struct SpamParams {
    /// Atom starts in |0> instead of |1>.
    double prep_error = 0.04;
    /// A |1> atom survives push-out and reads bright.
    double pushout_error = 0.01;
    /// Bright/dark photon-count histograms overlap; either label flips with this probability.
    double readout_overlap = 0.0004;
};

enum class TimingMode { kPerPulse, kPerShot };

struct NoiseParams {
    /// Omega, rad/s.
    double rabi_freq = 2 * kPi * 4.74e3;
    /// Constant drive detuning present in every shot, rad/s.
    double static_detuning_offset = 2 * kPi * 100.0;
    /// Pulse areas are scaled by (1 + eps), eps uniform in [-f, f].
    double timing_error_fraction = 0.002;
    TimingMode timing_mode = TimingMode::kPerPulse;
    /// Inhomogeneous dephasing time, s. Unset disables quasi-static detuning noise.
    std::optional<double> t2_star = 2.7e-3;
    /// Depolarization probability applied after every sequence gate.
    std::optional<double> depolarization;
    /// Relaxation |1> -> |0> during pulses, s. Unset disables it.
    std::optional<double> t1;
    SpamParams spam;

    /// Throws ValidationError naming the first bad field (prefixed "noise.").
    void validate() const;

    /// All error sources off.
    static NoiseParams ideal();
};

/// Ramsey coherence factor 1/2 + (1/2) / [1 + 0.95 (t/T2*)^2]^{3/2}.
double coherence_alpha(double t, double t2_star);

struct FidelityBudget {
    double mean_time;  // s
    double alpha;
    double d;
    double f2;
};

/// Mean gate time mean_area / Omega and F^2 = 1 - (1 - alpha(mean_time, T2*)) / 2.
/// An unset T2* gives F^2 = 1.
FidelityBudget analytic_fidelity_budget(const NoiseParams &params, double mean_area);

/// Centered Gamma(shape 3, scale sqrt(0.95)/T2*) detuning in rad/s. Its
/// characteristic function has modulus (1 + s^2 t^2)^{-3/2}, so the ensemble
/// Ramsey contrast is 2 alpha(t, T2*) - 1.
double sample_quasistatic_detuning(Rng &rng, double t2_star);

/// Noise held fixed for one shot.
struct ShotNoise {
    /// Quasi-static detuning, rad/s.
    double detuning = 0.0;
    /// Extra detuning ratio from the site's position in the addressing beam.
    double site_ratio = 0.0;
    /// Area error used in TimingMode::kPerShot.
    double timing_error = 0.0;
};

ShotNoise draw_shot_noise(const NoiseParams &params, Rng &rng, double site_ratio = 0.0);

/// delta / Omega for this shot.
double shot_detuning_ratio(const NoiseParams &params, const ShotNoise &shot);

/// The pulse as actually applied in a shot: area scaled by the timing error,
/// driven at the shot's detuning ratio.
Unitary2 perturbed_pulse(const PulseSpec &pulse, const NoiseParams &params, const ShotNoise &shot, Rng &rng);

/// Probability that the pulse (of nominal area `area`) relaxes |1> -> |0>, 0 if T1 is unset.
double relaxation_probability(const NoiseParams &params, double area);

/// Measured survival as an affine function of the true |0> population:
/// P_bright = offset + slope * (p0 - 1/2).
struct SpamResponse {
    double offset;
    double slope;
};

SpamResponse spam_response(const SpamParams &spam);

/// 1 - d_if = (1 - 2 eps_ro)(1 - eps_push)(1 - 2 eps_p).
double spam_d_if(const SpamParams &spam);

/// Expected bright fraction after `length` gates of depolarization `d` when
/// the ideal output is |0> (sign +1) or |1> (sign -1).
double expected_survival(int length, double d, const SpamParams &spam, int sign = +1);

/// Push-out then threshold readout of an atom whose true state is |0> when `in_zero`.
bool detect_bright(bool in_zero, const SpamParams &spam, Rng &rng);

}  // namespace rbarray

#endif  // RBARRAY_NOISE_H_
