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

#include "rbarray/noise.h"

#include <cmath>
#include <string>

#include "rbarray/errors.h"

namespace rbarray {

namespace {

void check_probability(double value, const char *field) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ValidationError(field, "must be a probability in [0, 1]");
    }
}

}  // namespace

void NoiseParams::validate() const {
    if (!(rabi_freq > 0.0) || !std::isfinite(rabi_freq)) {
        throw ValidationError("noise.rabi_freq", "must be positive");
    }
    if (!std::isfinite(static_detuning_offset)) {
        throw ValidationError("noise.static_detuning_offset", "must be finite");
    }
    if (!(timing_error_fraction >= 0.0 && timing_error_fraction < 1.0)) {
        throw ValidationError("noise.timing_error_fraction", "must lie in [0, 1)");
    }
    if (t2_star && !(*t2_star > 0.0)) {
        throw ValidationError("noise.t2_star", "must be positive");
    }
    if (t1 && !(*t1 > 0.0)) {
        throw ValidationError("noise.t1", "must be positive");
    }
    if (depolarization) {
        check_probability(*depolarization, "noise.depolarization");
    }
    check_probability(spam.prep_error, "noise.spam.prep_error");
    check_probability(spam.pushout_error, "noise.spam.pushout_error");
    check_probability(spam.readout_overlap, "noise.spam.readout_overlap");
}

NoiseParams NoiseParams::ideal() {
    NoiseParams p;
    p.static_detuning_offset = 0.0;
    p.timing_error_fraction = 0.0;
    p.t2_star.reset();
    p.depolarization.reset();
    p.t1.reset();
    p.spam = {0.0, 0.0, 0.0};
    return p;
}

double coherence_alpha(double t, double t2_star) {
    if (!(t2_star > 0.0)) {
        throw DomainError("T2* must be positive");
    }
    if (!(t >= 0.0)) {
        throw DomainError("time must be non-negative");
    }
    double x = t / t2_star;
    return 0.5 + 0.5 / std::pow(1.0 + 0.95 * x * x, 1.5);
}

FidelityBudget analytic_fidelity_budget(const NoiseParams &params, double mean_area) {
    params.validate();
    if (!(mean_area >= 0.0)) {
        throw DomainError("mean pulse area must be non-negative");
    }
    FidelityBudget budget{};
    budget.mean_time = mean_area / params.rabi_freq;
    budget.alpha = params.t2_star ? coherence_alpha(budget.mean_time, *params.t2_star) : 1.0;
    budget.d = 1.0 - budget.alpha;
    budget.f2 = 1.0 - budget.d / 2.0;
    return budget;
}

double sample_quasistatic_detuning(Rng &rng, double t2_star) {
    if (!(t2_star > 0.0)) {
        throw DomainError("T2* must be positive");
    }
    double scale = std::sqrt(0.95) / t2_star;
    std::gamma_distribution<double> gamma(3.0, scale);
    return gamma(rng) - 3.0 * scale;
}

ShotNoise draw_shot_noise(const NoiseParams &params, Rng &rng, double site_ratio) {
    ShotNoise shot;
    shot.site_ratio = site_ratio;
    if (params.t2_star) {
        shot.detuning = sample_quasistatic_detuning(rng, *params.t2_star);
    }
    if (params.timing_mode == TimingMode::kPerShot && params.timing_error_fraction > 0.0) {
        std::uniform_real_distribution<double> eps(-params.timing_error_fraction, params.timing_error_fraction);
        shot.timing_error = eps(rng);
    }
    return shot;
}

double shot_detuning_ratio(const NoiseParams &params, const ShotNoise &shot) {
    return (params.static_detuning_offset + shot.detuning) / params.rabi_freq + shot.site_ratio;
}

Unitary2 perturbed_pulse(const PulseSpec &pulse, const NoiseParams &params, const ShotNoise &shot, Rng &rng) {
    double eps = 0.0;
    if (params.timing_error_fraction > 0.0) {
        if (params.timing_mode == TimingMode::kPerPulse) {
            std::uniform_real_distribution<double> draw(-params.timing_error_fraction, params.timing_error_fraction);
            eps = draw(rng);
        } else {
            eps = shot.timing_error;
        }
    }
    return detuned_pulse(pulse.phase(), pulse.area() * (1.0 + eps), shot_detuning_ratio(params, shot));
}

double relaxation_probability(const NoiseParams &params, double area) {
    if (!params.t1) {
        return 0.0;
    }
    return -std::expm1(-area / params.rabi_freq / *params.t1);
}

SpamResponse spam_response(const SpamParams &spam) {
    // P = eps_ro + (1 - 2 eps_ro) (eps_push + (1 - eps_push) p0)
    double contrast = 1.0 - 2.0 * spam.readout_overlap;
    double offset = spam.readout_overlap + contrast * (spam.pushout_error + 0.5 * (1.0 - spam.pushout_error));
    return {offset, contrast * (1.0 - spam.pushout_error)};
}

double spam_d_if(const SpamParams &spam) {
    return 1.0 - (1.0 - 2.0 * spam.readout_overlap) * (1.0 - spam.pushout_error) * (1.0 - 2.0 * spam.prep_error);
}

double expected_survival(int length, double d, const SpamParams &spam, int sign) {
    if (length < 0) {
        throw DomainError("sequence length must be non-negative");
    }
    if (!(d >= 0.0 && d <= 1.0)) {
        throw DomainError("depolarization must be a probability");
    }
    SpamResponse response = spam_response(spam);
    double polarization = (1.0 - 2.0 * spam.prep_error) * std::pow(1.0 - d, length);
    double p0_excess = 0.5 * (sign >= 0 ? polarization : -polarization);
    return response.offset + response.slope * p0_excess;
}

bool detect_bright(bool in_zero, const SpamParams &spam, Rng &rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool bright = in_zero;
    if (!bright && spam.pushout_error > 0.0 && u(rng) < spam.pushout_error) {
        bright = true;
    }
    if (spam.readout_overlap > 0.0 && u(rng) < spam.readout_overlap) {
        bright = !bright;
    }
    return bright;
}

}  // namespace rbarray
