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

#ifndef RBARRAY_RB_H_
#define RBARRAY_RB_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rbarray/clifford.h"
#include "rbarray/noise.h"
#include "rbarray/random.h"

namespace rbarray {

/// Whether truncations of one sequence share a prefix or are drawn independently.
enum class PrefixMode { kSharedPrefix, kIndependent };

struct RBSequence {
    std::uint64_t seed = 0;
    int seq_id = 0;
    /// Number of random Cliffords, excluding the recovery gate.
    int length = 0;
    std::vector<int> gates;
    int recovery = 0;
};

/// Recovery gate for `gates` applied in order to |1>, using the group tables.
int sequence_recovery(std::span<const int> gates, const CliffordGroup &group = CliffordGroup::standard());

/// Recomputes `recovery` from the gate list (used after loading sequences from disk).
void refresh_recovery(RBSequence &sequence, const CliffordGroup &group = CliffordGroup::standard());

/// n_sequences master sequences of max(lengths) uniform draws, emitted at every
/// truncation length in the order (sequence, length). Deterministic in `seed`.
std::vector<RBSequence> generate_sequences(std::span<const int> lengths, int n_sequences, std::uint64_t seed,
                                           PrefixMode mode = PrefixMode::kSharedPrefix,
                                           const CliffordGroup &group = CliffordGroup::standard());

/// One shot: start in |1> (flipped to |0> with the prep error), apply every
/// gate's pulses under the shot's noise, depolarize after each sequence gate,
/// apply the recovery gate, then sample a projective push-out measurement.
/// Returns true when the atom reads bright (survives).
bool simulate_shot(const RBSequence &sequence, const NoiseParams &params, const ShotNoise &shot, Rng &rng,
                   const CliffordGroup &group = CliffordGroup::standard());

/// Final |0> population for the given shot noise, before SPAM and sampling.
/// Uses the ideal initial state |1>.
double final_population0(const RBSequence &sequence, const NoiseParams &params, const ShotNoise &shot, Rng &rng,
                         const CliffordGroup &group = CliffordGroup::standard());

/// Runs `shots` shots from `rng`, each with its own quasi-static noise draw.
int simulate_sequence(const RBSequence &sequence, const NoiseParams &params, int shots, Rng &rng,
                      double site_detuning_ratio = 0.0, const CliffordGroup &group = CliffordGroup::standard());

struct SurvivalRecord {
    int seq_id = 0;
    int length = 0;
    int shots = 0;
    int survivors = 0;
};

struct RBDataset {
    std::vector<SurvivalRecord> records;
    std::string params_digest;
    std::uint64_t seed = 0;
};

struct RBConfig {
    std::vector<int> lengths{1, 12, 23, 34, 45, 56, 67, 78, 89, 100};
    int n_sequences = 7;
    int shots = 50;
    PrefixMode prefix = PrefixMode::kSharedPrefix;

    /// Global-gate preset: 7 sequences x 10 lengths x 50 shots.
    static RBConfig global_preset();
    /// Site-selected preset: 10 sequences x 8 lengths x 50 shots.
    static RBConfig single_site_preset();

    void validate() const;
};

/// Per-shot extra detuning ratio, keyed by (seq_id, length, shot) so every
/// simulated site can see the same realization.
using ShotRatioFn = std::function<double(int seq_id, int length, int shot)>;

struct RunOptions {
    std::uint64_t seed = kDefaultSeed;
    int workers = 1;
    /// Separates the shot streams of different simulated sites.
    std::uint64_t stream_key = 0;
    double site_ratio = 0.0;
    /// Added to site_ratio when set.
    ShotRatioFn shot_ratio;
    std::string params_digest;
};

/// Shots are simulated in blocks of this many with one derived stream per block.
inline constexpr int kShotBlock = 256;

/// Simulates every record of `sequences` in parallel. The result is identical
/// for any worker count.
RBDataset run_rb(std::span<const RBSequence> sequences, const NoiseParams &params, int shots,
                 const RunOptions &options, const CliffordGroup &group = CliffordGroup::standard());

/// generate_sequences + run_rb with the config's seed-derived sequences.
RBDataset run_rb(const RBConfig &config, const NoiseParams &params, const RunOptions &options,
                 const CliffordGroup &group = CliffordGroup::standard());

/// F^2 = 1 - d/2.
double fidelity_from_d(double d);

struct SurvivalPoint {
    int length = 0;
    double fraction = 0.0;
    double sigma = 1e-3;
};

struct DecayFit {
    double d_if = 0.0;
    double d = 0.0;
    double f2 = 1.0;
    int sign = +1;
    double rms_residual = 0.0;
    double chi2 = 0.0;
    double stderr_d_if = 0.0;
    double stderr_d = 0.0;
    bool boundary = false;
    int iterations = 0;

    /// Per-gate crosstalk error d/2 for sign -1 fits.
    double crosstalk_error() const { return d / 2.0; }
};

/// Weighted least squares fit of P(l) = 1/2 + sign (1/2)(1 - d_if)(1 - d)^l with
/// (d_if, d) boxed to [0, 1]. A log-spaced grid over d (amplitude solved
/// in closed form per node) seeds a projected Levenberg-Marquardt refinement.
DecayFit fit_decay(std::span<const SurvivalPoint> points, int sign = +1);

/// Binomial-weighted fit of a dataset (see survival_points).
DecayFit fit_decay(const RBDataset &dataset, int sign = +1);

/// One point per length: counts pooled over sequences, binomial sigma floored at 1e-3.
std::vector<SurvivalPoint> survival_points(const RBDataset &dataset);

struct RabiPoint {
    double time = 0.0;  // s
    double p_ideal = 0.0;
    int shots = 0;
    int bright = 0;
};

/// x-drive from |1> for times 0..t_max at detuning ratio r: the ideal transfer
/// probability |<0|U|1>|^2 and a Monte Carlo count under `params`.
std::vector<RabiPoint> rabi_scan(const NoiseParams &params, double detuning_ratio, double t_max, int steps,
                                 int shots, std::uint64_t seed);

}  // namespace rbarray

#endif  // RBARRAY_RB_H_
