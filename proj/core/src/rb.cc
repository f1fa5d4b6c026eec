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

#include "rbarray/rb.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "rbarray/errors.h"
#include "rbarray/parallel.h"

namespace rbarray {

namespace {

// Propagates one shot through a sequence and returns the final |0> population.
double propagate(const RBSequence &sequence, const NoiseParams &params, const ShotNoise &shot, Rng &rng,
                 const CliffordGroup &group, const PureState &start) {
    const bool per_pulse_draws =
        params.timing_error_fraction > 0.0 && params.timing_mode == TimingMode::kPerPulse;
    const bool depolarize = params.depolarization && *params.depolarization > 0.0;
    const bool mixed = depolarize || params.t1.has_value();

    std::vector<std::optional<Unitary2>> cache(group.size() + 1);
    auto gate_unitary = [&](int index) -> Unitary2 {
        if (!per_pulse_draws && cache[index]) {
            return *cache[index];
        }
        Unitary2 u;
        for (const GatePulse &p : group.element(index).pulses) {
            u = perturbed_pulse(p.spec(), params, shot, rng) * u;
        }
        if (!per_pulse_draws) {
            cache[index] = u;
        }
        return u;
    };

    if (!mixed) {
        PureState psi = start;
        for (int g : sequence.gates) {
            psi = gate_unitary(g) * psi;
        }
        psi = gate_unitary(sequence.recovery) * psi;
        return std::clamp(std::norm(psi.c0), 0.0, 1.0);
    }

    DensityMatrix2 rho = DensityMatrix2::from_pure(start);
    auto apply_gate = [&](int index) {
        if (!params.t1) {
            rho = apply_channel(rho, UnitaryChannel{gate_unitary(index)});
            return;
        }
        for (const GatePulse &p : group.element(index).pulses) {
            PulseSpec spec = p.spec();
            rho = apply_channel(rho, UnitaryChannel{perturbed_pulse(spec, params, shot, rng)});
            rho = apply_channel(rho, AmplitudeDamp{relaxation_probability(params, spec.area())});
        }
    };
    for (int g : sequence.gates) {
        apply_gate(g);
        if (depolarize) {
            rho = apply_channel(rho, Depolarize{*params.depolarization});
        }
    }
    apply_gate(sequence.recovery);
    return std::clamp(rho.population0(), 0.0, 1.0);
}

bool bernoulli(Rng &rng, double p) {
    if (p <= 0.0) {
        return false;
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng) < p;
}

}  // namespace

int sequence_recovery(std::span<const int> gates, const CliffordGroup &group) {
    int net = 1;
    for (int g : gates) {
        net = group.multiply(g, net);
    }
    return group.recovery_for(net);
}

void refresh_recovery(RBSequence &sequence, const CliffordGroup &group) {
    if (static_cast<int>(sequence.gates.size()) != sequence.length) {
        throw DomainError("sequence length does not match its gate list");
    }
    sequence.recovery = sequence_recovery(sequence.gates, group);
}

std::vector<RBSequence> generate_sequences(std::span<const int> lengths, int n_sequences, std::uint64_t seed,
                                           PrefixMode mode, const CliffordGroup &group) {
    if (lengths.empty()) {
        throw DomainError("at least one sequence length is required");
    }
    for (int l : lengths) {
        if (l < 1) {
            throw DomainError("sequence lengths must be at least 1");
        }
    }
    if (n_sequences < 1) {
        throw DomainError("at least one sequence is required");
    }
    const int max_length = *std::max_element(lengths.begin(), lengths.end());
    std::uniform_int_distribution<int> pick(1, static_cast<int>(group.size()));

    std::vector<RBSequence> out;
    out.reserve(static_cast<std::size_t>(n_sequences) * lengths.size());
    for (int s = 0; s < n_sequences; ++s) {
        const std::uint64_t master_seed = derive_seed(seed, {tag(StreamTag::kSequence), static_cast<std::uint64_t>(s)});
        std::vector<int> master;
        if (mode == PrefixMode::kSharedPrefix) {
            Rng rng(master_seed);
            master.resize(max_length);
            for (int &g : master) {
                g = pick(rng);
            }
        }
        for (int l : lengths) {
            RBSequence seq;
            seq.seq_id = s;
            seq.length = l;
            if (mode == PrefixMode::kSharedPrefix) {
                seq.seed = master_seed;
                seq.gates.assign(master.begin(), master.begin() + l);
            } else {
                seq.seed = derive_seed(master_seed, {static_cast<std::uint64_t>(l)});
                Rng rng(seq.seed);
                seq.gates.resize(l);
                for (int &g : seq.gates) {
                    g = pick(rng);
                }
            }
            refresh_recovery(seq, group);
            out.push_back(std::move(seq));
        }
    }
    return out;
}

double final_population0(const RBSequence &sequence, const NoiseParams &params, const ShotNoise &shot, Rng &rng,
                         const CliffordGroup &group) {
    return propagate(sequence, params, shot, rng, group, PureState::one());
}

bool simulate_shot(const RBSequence &sequence, const NoiseParams &params, const ShotNoise &shot, Rng &rng,
                   const CliffordGroup &group) {
    const bool flipped = bernoulli(rng, params.spam.prep_error);
    const double p0 = propagate(sequence, params, shot, rng, group, flipped ? PureState::zero() : PureState::one());
    const bool in_zero = p0 >= 1.0 || bernoulli(rng, p0);
    return detect_bright(in_zero, params.spam, rng);
}

int simulate_sequence(const RBSequence &sequence, const NoiseParams &params, int shots, Rng &rng,
                      double site_detuning_ratio, const CliffordGroup &group) {
    if (shots < 1) {
        throw DomainError("shots must be at least 1");
    }
    int survivors = 0;
    for (int k = 0; k < shots; ++k) {
        ShotNoise shot = draw_shot_noise(params, rng, site_detuning_ratio);
        survivors += simulate_shot(sequence, params, shot, rng, group) ? 1 : 0;
    }
    return survivors;
}

RBConfig RBConfig::global_preset() { return RBConfig{}; }

RBConfig RBConfig::single_site_preset() {
    RBConfig config;
    config.lengths = {1, 8, 15, 22, 29, 36, 43, 50};
    config.n_sequences = 10;
    config.shots = 50;
    return config;
}

void RBConfig::validate() const {
    if (lengths.empty()) {
        throw ValidationError("rb.lengths", "must not be empty");
    }
    for (int l : lengths) {
        if (l < 1) {
            throw ValidationError("rb.lengths", "every length must be at least 1");
        }
    }
    if (n_sequences < 1) {
        throw ValidationError("rb.n_sequences", "must be at least 1");
    }
    if (shots < 1) {
        throw ValidationError("rb.shots", "must be at least 1");
    }
}

RBDataset run_rb(std::span<const RBSequence> sequences, const NoiseParams &params, int shots,
                 const RunOptions &options, const CliffordGroup &group) {
    params.validate();
    if (shots < 1) {
        throw DomainError("shots must be at least 1");
    }
    struct Task {
        std::size_t sequence;
        int block;
    };
    std::vector<Task> tasks;
    const int blocks = (shots + kShotBlock - 1) / kShotBlock;
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        for (int b = 0; b < blocks; ++b) {
            tasks.push_back({i, b});
        }
    }
    std::vector<int> bright(tasks.size(), 0);
    parallel_for(tasks.size(), options.workers, [&](std::size_t t) {
        const RBSequence &seq = sequences[tasks[t].sequence];
        const int first = tasks[t].block * kShotBlock;
        const int last = std::min(shots, first + kShotBlock);
        Rng rng = make_stream(options.seed, {tag(StreamTag::kShots), options.stream_key,
                                             static_cast<std::uint64_t>(seq.seq_id),
                                             static_cast<std::uint64_t>(seq.length),
                                             static_cast<std::uint64_t>(tasks[t].block)});
        int count = 0;
        for (int k = first; k < last; ++k) {
            double ratio = options.site_ratio;
            if (options.shot_ratio) {
                ratio += options.shot_ratio(seq.seq_id, seq.length, k);
            }
            ShotNoise shot = draw_shot_noise(params, rng, ratio);
            count += simulate_shot(seq, params, shot, rng, group) ? 1 : 0;
        }
        bright[t] = count;
    });

    RBDataset dataset;
    dataset.seed = options.seed;
    dataset.params_digest = options.params_digest;
    dataset.records.reserve(sequences.size());
    for (const RBSequence &seq : sequences) {
        dataset.records.push_back({seq.seq_id, seq.length, shots, 0});
    }
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        dataset.records[tasks[t].sequence].survivors += bright[t];
    }
    return dataset;
}

RBDataset run_rb(const RBConfig &config, const NoiseParams &params, const RunOptions &options,
                 const CliffordGroup &group) {
    config.validate();
    std::vector<RBSequence> sequences =
        generate_sequences(config.lengths, config.n_sequences, options.seed, config.prefix, group);
    return run_rb(sequences, params, config.shots, options, group);
}

double fidelity_from_d(double d) {
    if (!(d >= 0.0 && d <= 1.0)) {
        throw DomainError("depolarization must lie in [0, 1]");
    }
    return 1.0 - d / 2.0;
}

std::vector<RabiPoint> rabi_scan(const NoiseParams &params, double detuning_ratio, double t_max, int steps,
                                 int shots, std::uint64_t seed) {
    params.validate();
    if (steps < 2) {
        throw DomainError("a Rabi scan needs at least 2 steps");
    }
    if (!(t_max > 0.0)) {
        throw DomainError("scan duration must be positive");
    }
    if (shots < 0) {
        throw DomainError("shots must be non-negative");
    }
    std::vector<RabiPoint> out;
    out.reserve(steps);
    for (int k = 0; k < steps; ++k) {
        RabiPoint point;
        point.time = t_max * k / (steps - 1);
        const double area = params.rabi_freq * point.time;
        point.p_ideal = std::norm(detuned_pulse(0.0, area, detuning_ratio).b());
        point.shots = shots;
        Rng rng = make_stream(seed, {tag(StreamTag::kRabi), static_cast<std::uint64_t>(k)});
        for (int s = 0; s < shots; ++s) {
            ShotNoise shot = draw_shot_noise(params, rng, detuning_ratio);
            const bool flipped = bernoulli(rng, params.spam.prep_error);
            PureState psi = perturbed_pulse(PulseSpec(0.0, area), params, shot, rng) *
                            (flipped ? PureState::zero() : PureState::one());
            const bool in_zero = bernoulli(rng, std::norm(psi.c0));
            point.bright += detect_bright(in_zero, params.spam, rng) ? 1 : 0;
        }
        out.push_back(point);
    }
    return out;
}

}  // namespace rbarray
