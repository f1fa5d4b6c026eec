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
#include <vector>

#include <gtest/gtest.h>

#include "rbarray/clifford.h"
#include "rbarray/errors.h"
#include "rbarray/rb.h"

namespace rbarray {
namespace {

const std::vector<int> kFig3Lengths{1, 12, 23, 34, 45, 56, 67, 78, 89, 100};

// Recovery index recomputed from matrices rather than the product table.
int matrix_recovery(const std::vector<int> &gates) {
    const CliffordGroup &g = CliffordGroup::standard();
    Unitary2 acc;
    for (int index : gates) acc = g.element(index).pulse_product() * acc;
    return g.recovery_gate(acc);
}

TEST(GenerateSequences, Fig3PresetIsReproducible) {
    std::vector<RBSequence> a = generate_sequences(kFig3Lengths, 7, 42);
    std::vector<RBSequence> b = generate_sequences(kFig3Lengths, 7, 42);
    ASSERT_EQ(a.size(), 70u);
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].gates, b[k].gates);
        EXPECT_EQ(a[k].recovery, b[k].recovery);
        EXPECT_EQ(a[k].seed, b[k].seed);
        EXPECT_EQ(a[k].seq_id, static_cast<int>(k / 10));
        EXPECT_EQ(a[k].length, kFig3Lengths[k % 10]);
        EXPECT_EQ(static_cast<int>(a[k].gates.size()), a[k].length);
    }
    std::vector<RBSequence> c = generate_sequences(kFig3Lengths, 7, 43);
    EXPECT_NE(a[9].gates, c[9].gates);
}

TEST(GenerateSequences, SingleGate) {
    std::vector<int> lengths{1};
    std::vector<RBSequence> s = generate_sequences(lengths, 1, 5);
    ASSERT_EQ(s.size(), 1u);
    ASSERT_EQ(s[0].gates.size(), 1u);
    EXPECT_EQ(s[0].recovery, matrix_recovery(s[0].gates));
}

TEST(GenerateSequences, RejectsBadArguments) {
    std::vector<int> empty;
    EXPECT_THROW(generate_sequences(empty, 7, 1), DomainError);
    std::vector<int> zero{0, 5};
    EXPECT_THROW(generate_sequences(zero, 7, 1), DomainError);
    EXPECT_THROW(generate_sequences(kFig3Lengths, 0, 1), DomainError);
}

TEST(GenerateSequences, SharedPrefixTruncatesOneMasterSequence) {
    std::vector<RBSequence> s = generate_sequences(kFig3Lengths, 3, 9, PrefixMode::kSharedPrefix);
    for (int q = 0; q < 3; ++q) {
        const RBSequence &longest = s[q * 10 + 9];
        for (int l = 0; l < 10; ++l) {
            const RBSequence &t = s[q * 10 + l];
            EXPECT_TRUE(std::equal(t.gates.begin(), t.gates.end(), longest.gates.begin()));
        }
    }
}

TEST(GenerateSequences, IndependentModeDrawsFreshGates) {
    std::vector<RBSequence> s = generate_sequences(kFig3Lengths, 1, 9, PrefixMode::kIndependent);
    const RBSequence &longest = s[9];
    int shared_prefixes = 0;
    for (int l = 1; l < 9; ++l) {
        shared_prefixes += std::equal(s[l].gates.begin(), s[l].gates.end(), longest.gates.begin()) ? 1 : 0;
    }
    EXPECT_EQ(shared_prefixes, 0);
}

TEST(GenerateSequences, UniformOverGroupAndRecoveryConsistent) {
    std::vector<int> lengths{100};
    std::vector<RBSequence> s = generate_sequences(lengths, 240, 77);
    std::vector<int> counts(25, 0);
    for (const RBSequence &q : s) {
        for (int g : q.gates) {
            ASSERT_GE(g, 1);
            ASSERT_LE(g, 24);
            ++counts[g];
        }
        EXPECT_EQ(q.recovery, matrix_recovery(q.gates));
    }
    // 24000 draws, 1000 expected per element; 5 sigma is about 156.
    for (int g = 1; g <= 24; ++g) EXPECT_NEAR(counts[g], 1000, 160) << "element " << g;
}

TEST(RefreshRecovery, RecomputesAndChecksLength) {
    std::vector<RBSequence> s = generate_sequences(kFig3Lengths, 1, 3);
    RBSequence q = s[4];
    const int original = q.recovery;
    q.recovery = 0;
    refresh_recovery(q);
    EXPECT_EQ(q.recovery, original);
    q.gates.pop_back();
    EXPECT_THROW(refresh_recovery(q), DomainError);
}

TEST(Simulation, NoiselessSequencesAlwaysSurvive) {
    NoiseParams ideal = NoiseParams::ideal();
    Rng rng(5);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        for (const RBSequence &q : generate_sequences(kFig3Lengths, 2, seed)) {
            ShotNoise shot;
            EXPECT_NEAR(final_population0(q, ideal, shot, rng), 1.0, 1e-9);
        }
    }
    std::vector<RBSequence> s = generate_sequences(kFig3Lengths, 1, 8);
    EXPECT_EQ(simulate_sequence(s[9], ideal, 1000, rng), 1000);
}

TEST(Simulation, DepolarizationFollowsEquationOneExactly) {
    NoiseParams params = NoiseParams::ideal();
    params.depolarization = 0.0035;
    Rng rng(6);
    for (const RBSequence &q : generate_sequences(kFig3Lengths, 2, 11)) {
        ShotNoise shot;
        EXPECT_NEAR(final_population0(q, params, shot, rng), 0.5 + 0.5 * std::pow(1 - 0.0035, q.length), 1e-12);
    }
}

TEST(Simulation, DepolarizedSurvivalMatchesAnalyticAtManyShots) {
    // Spec arithmetic for the anchor value.
    EXPECT_NEAR(0.5 + 0.5 * 0.908 * std::pow(0.9965, 100), 0.8198, 1e-4);

    NoiseParams params = NoiseParams::ideal();
    params.depolarization = 0.0035;
    params.spam = SpamParams{0.04, 0.01, 0.0004};
    std::vector<int> lengths{100};
    std::vector<RBSequence> s = generate_sequences(lengths, 1, 12);
    RunOptions options;
    options.seed = 13;
    options.workers = 4;
    const int shots = 100000;
    RBDataset data = run_rb(s, params, shots, options);
    const double p = expected_survival(100, 0.0035, params.spam);
    const double observed = static_cast<double>(data.records[0].survivors) / shots;
    EXPECT_NEAR(observed, p, 3 * std::sqrt(p * (1 - p) / shots));
}

TEST(Simulation, PrepErrorFlipsOutcome) {
    NoiseParams params = NoiseParams::ideal();
    params.spam.prep_error = 1.0;
    std::vector<RBSequence> s = generate_sequences(kFig3Lengths, 1, 3);
    Rng rng(7);
    EXPECT_EQ(simulate_sequence(s[3], params, 200, rng), 0);
}

TEST(Simulation, RejectsZeroShots) {
    std::vector<RBSequence> s = generate_sequences(kFig3Lengths, 1, 3);
    Rng rng(7);
    EXPECT_THROW(simulate_sequence(s[0], NoiseParams::ideal(), 0, rng), DomainError);
    EXPECT_THROW(run_rb(s, NoiseParams::ideal(), 0, RunOptions{}), DomainError);
}

TEST(Simulation, TimingErrorModesBothRun) {
    NoiseParams params = NoiseParams::ideal();
    params.timing_error_fraction = 0.05;
    std::vector<RBSequence> s = generate_sequences(kFig3Lengths, 1, 3);
    for (TimingMode mode : {TimingMode::kPerPulse, TimingMode::kPerShot}) {
        params.timing_mode = mode;
        Rng rng(8);
        int survivors = simulate_sequence(s[9], params, 400, rng);
        EXPECT_GT(survivors, 0);
        EXPECT_LT(survivors, 400);
    }
}

TEST(Simulation, AmplitudeDampingUsesDensityMatrixPath) {
    NoiseParams params = NoiseParams::ideal();
    params.t1 = 1e-3;
    std::vector<RBSequence> s = generate_sequences(kFig3Lengths, 1, 3);
    Rng rng(9);
    ShotNoise shot;
    double p0 = final_population0(s[9], params, shot, rng);
    EXPECT_LT(p0, 1.0 - 1e-3);
    EXPECT_GT(p0, 0.0);
}

TEST(RunRb, IndependentOfWorkerCount) {
    NoiseParams params;
    params.depolarization = 0.002;
    RBConfig config;
    config.shots = 600;  // more than two shot blocks
    config.n_sequences = 3;
    RunOptions one;
    one.seed = 99;
    one.workers = 1;
    RunOptions many = one;
    many.workers = 7;
    RBDataset a = run_rb(config, params, one);
    RBDataset b = run_rb(config, params, many);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        EXPECT_EQ(a.records[k].survivors, b.records[k].survivors);
        EXPECT_EQ(a.records[k].shots, 600);
    }
    RunOptions other = one;
    other.seed = 100;
    RBDataset c = run_rb(config, params, other);
    int differing = 0;
    for (std::size_t k = 0; k < a.records.size(); ++k) differing += a.records[k].survivors != c.records[k].survivors;
    EXPECT_GT(differing, 0);
}

TEST(RunRb, ValidatesInputs) {
    NoiseParams params;
    RBConfig config;
    config.lengths.clear();
    EXPECT_THROW(run_rb(config, params, RunOptions{}), ValidationError);
    config = RBConfig{};
    params.spam.pushout_error = 2;
    EXPECT_THROW(run_rb(config, params, RunOptions{}), ValidationError);
}

TEST(RBConfig, Presets) {
    RBConfig global = RBConfig::global_preset();
    EXPECT_EQ(global.lengths, kFig3Lengths);
    EXPECT_EQ(global.n_sequences, 7);
    EXPECT_EQ(global.shots, 50);
    RBConfig single = RBConfig::single_site_preset();
    EXPECT_EQ(single.lengths, (std::vector<int>{1, 8, 15, 22, 29, 36, 43, 50}));
    EXPECT_EQ(single.n_sequences, 10);
    EXPECT_EQ(single.shots, 50);
}

TEST(ExpectedSurvival, MonotoneInLengthForDepolarizingModels) {
    SpamParams spam{0.04, 0.01, 0.0004};
    for (double d : {0.0, 0.001, 0.0035, 0.05, 0.5}) {
        double previous = 2.0;
        for (int l = 0; l <= 200; ++l) {
            double p = expected_survival(l, d, spam);
            EXPECT_LE(p, previous + 1e-15);
            previous = p;
        }
    }
}

TEST(FidelityFromD, Examples) {
    EXPECT_DOUBLE_EQ(fidelity_from_d(0.0), 1.0);
    EXPECT_DOUBLE_EQ(fidelity_from_d(0.0035), 0.99825);
    EXPECT_DOUBLE_EQ(fidelity_from_d(1.0), 0.5);
    EXPECT_THROW(fidelity_from_d(-0.01), DomainError);
    EXPECT_THROW(fidelity_from_d(1.01), DomainError);
}

TEST(RabiScan, IdealCurveIsGeneralizedRabi) {
    NoiseParams params = NoiseParams::ideal();
    const double r = 0.5;
    std::vector<RabiPoint> points = rabi_scan(params, r, 400e-6, 41, 200, 3);
    ASSERT_EQ(points.size(), 41u);
    for (const RabiPoint &p : points) {
        double a = params.rabi_freq * p.time;
        double expected = std::pow(std::sin(a * std::sqrt(1 + r * r) / 2), 2) / (1 + r * r);
        EXPECT_NEAR(p.p_ideal, expected, 1e-12);
        EXPECT_NEAR(static_cast<double>(p.bright) / p.shots, expected, 5 * std::sqrt(0.25 / p.shots) + 1e-12);
    }
    EXPECT_THROW(rabi_scan(params, 0, 1e-4, 1, 10, 1), DomainError);
    EXPECT_THROW(rabi_scan(params, 0, 0, 10, 10, 1), DomainError);
}

}  // namespace
}  // namespace rbarray
