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
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "oracle.h"
#include "rbarray/clifford.h"
#include "rbarray/errors.h"

namespace rbarray {
namespace {

// Total area column of the gate table, in quarter turns; independent of the pulse columns.
constexpr int kPrintedTotals[24] = {0, 5, 4, 7, 2, 3, 2, 5, 3, 3, 4, 6, 5, 4, 1, 2, 6, 4, 5, 3, 4, 1, 3, 2};

// Closure of {R_x(pi/2), R_y(pi/2)} up to global phase, by breadth-first search.
std::vector<Unitary2> generated_group() {
    std::vector<Unitary2> found{Unitary2::identity()};
    const Unitary2 gens[2] = {rotation(Axis::kX, kPi / 2), rotation(Axis::kY, kPi / 2)};
    for (std::size_t k = 0; k < found.size(); ++k) {
        for (const Unitary2 &g : gens) {
            Unitary2 next = g * found[k];
            bool seen = std::any_of(found.begin(), found.end(),
                                    [&](const Unitary2 &u) { return oracle::phase_free_diff(u.entries(), next.entries()) < 1e-9; });
            if (!seen) found.push_back(next);
        }
    }
    return found;
}

int oracle_find(const std::vector<CliffordElement> &group, const oracle::M &m) {
    int hit = 0;
    for (const CliffordElement &e : group) {
        if (oracle::phase_free_diff(e.canonical.entries(), m) < 1e-9) {
            EXPECT_EQ(hit, 0) << "two elements match one product";
            hit = e.index;
        }
    }
    return hit;
}

TEST(LoadGroup, SpecExamples) {
    std::vector<CliffordElement> group = load_group();
    ASSERT_EQ(group.size(), 24u);
    EXPECT_TRUE(group[0].pulses.empty());
    EXPECT_EQ(group[0].total_quarter_turns(), 0);
    EXPECT_LT(group[0].canonical.max_abs_diff(Unitary2::identity()), 1e-12);

    const CliffordElement &x_pi = group[6];
    ASSERT_EQ(x_pi.pulses.size(), 1u);
    EXPECT_EQ(x_pi.pulses[0].axis, Axis::kX);
    EXPECT_EQ(x_pi.pulses[0].quarter_turns, 2);
    EXPECT_DOUBLE_EQ(x_pi.total_area(), kPi);

    const CliffordElement &z_half = group[1];
    ASSERT_EQ(z_half.pulses.size(), 3u);
    EXPECT_EQ(z_half.pulses[0].axis, Axis::kX);
    EXPECT_EQ(z_half.pulses[0].quarter_turns, 3);
    EXPECT_EQ(z_half.pulses[1].axis, Axis::kY);
    EXPECT_EQ(z_half.pulses[1].quarter_turns, 1);
    EXPECT_EQ(z_half.pulses[2].axis, Axis::kX);
    EXPECT_EQ(z_half.pulses[2].quarter_turns, 1);
    EXPECT_DOUBLE_EQ(z_half.total_area(), 5 * kPi / 2);
    EXPECT_EQ(z_half.axis_quarter_turns, (std::array<int, 3>{0, 0, 1}));
}

TEST(LoadGroup, AreasMatchPrintedTotals) {
    std::vector<CliffordElement> group = load_group();
    for (int k = 0; k < 24; ++k) {
        EXPECT_EQ(group[k].total_quarter_turns(), kPrintedTotals[k]) << "element " << k + 1;
        EXPECT_EQ(group[k].index, k + 1);
    }
}

TEST(LoadGroup, PulsesUseOnlyPositiveAreas) {
    for (const CliffordElement &e : load_group()) {
        EXPECT_LE(e.pulses.size(), 3u);
        for (const GatePulse &p : e.pulses) {
            EXPECT_GE(p.quarter_turns, 1);
            EXPECT_LE(p.quarter_turns, 3);
            EXPECT_NE(p.axis, Axis::kZ);
        }
    }
}

TEST(LoadGroup, CanonicalMatchesAxisProductByOracle) {
    for (const CliffordElement &e : load_group()) {
        oracle::M product = oracle::eye();
        const oracle::M paulis[3] = {oracle::sx(), oracle::sy(), oracle::sz()};
        for (int a = 0; a < 3; ++a) {
            double theta = e.axis_quarter_turns[a] * kPi / 2;
            product = oracle::mul(product, oracle::expm(oracle::scale(paulis[a], oracle::C{0, -theta / 2})));
        }
        EXPECT_LT(oracle::phase_free_diff(e.canonical.entries(), product), 1e-9) << "element " << e.index;
        // Canonical form: first non-negligible top-row entry is real and positive.
        oracle::C lead = std::abs(e.canonical.a()) > 1e-12 ? e.canonical.a() : e.canonical.b();
        EXPECT_NEAR(lead.imag(), 0, 1e-12) << "element " << e.index;
        EXPECT_GT(lead.real(), 0.5) << "element " << e.index;
    }
}

TEST(LoadGroup, PulseProductsMatchCanonicalByOracle) {
    for (const CliffordElement &e : load_group()) {
        oracle::M u = oracle::eye();
        for (const GatePulse &p : e.pulses) {
            u = oracle::mul(oracle::pulse(p.spec().phase(), p.spec().area(), 0.0), u);
        }
        EXPECT_LT(oracle::phase_free_diff(e.canonical.entries(), u), 1e-9) << "element " << e.index;
    }
}

TEST(LoadGroup, IsTheWholeGeneratedGroup) {
    std::vector<Unitary2> generated = generated_group();
    ASSERT_EQ(generated.size(), 24u);
    std::vector<CliffordElement> group = load_group();
    std::set<int> hits;
    for (const Unitary2 &g : generated) {
        hits.insert(oracle_find(group, g.entries()));
    }
    EXPECT_EQ(hits.size(), 24u);
    EXPECT_EQ(hits.count(0), 0u);
}

TEST(VerifyGroup, StandardTablePasses) {
    GroupReport report = verify_group(load_group());
    EXPECT_TRUE(report.ok());
    EXPECT_EQ(report.size, 24u);
    EXPECT_EQ(report.closure_hits, 576u);
    EXPECT_EQ(report.closure_total, 576u);
    EXPECT_EQ(report.pulse_matches, 24u);
    EXPECT_EQ(report.axis_matches, 24u);
    EXPECT_EQ(report.inverses_found, 24u);
}

TEST(VerifyGroup, SeededPulseFaultIsLocated) {
    std::vector<CliffordElement> group = load_group();
    group[6].pulses = {GatePulse{Axis::kX, 1}};
    GroupReport report = verify_group(group);
    EXPECT_FALSE(report.ok());
    EXPECT_EQ(report.pulse_failures, std::vector<int>{7});
    EXPECT_TRUE(report.axis_failures.empty());
    EXPECT_EQ(report.closure_hits, 576u);
}

TEST(VerifyGroup, SeededMatrixFaultBreaksClosure) {
    std::vector<CliffordElement> group = load_group();
    group[3].canonical = rotation(Axis::kX, 0.3);
    GroupReport report = verify_group(group);
    EXPECT_FALSE(report.ok());
    EXPECT_LT(report.closure_hits, 576u);
    EXPECT_NE(std::find(report.axis_failures.begin(), report.axis_failures.end(), 4), report.axis_failures.end());
    EXPECT_THROW(CliffordGroup{group}, IntegrityError);
}

TEST(VerifyGroup, EmptyTableIsRejected) {
    EXPECT_THROW(verify_group(std::vector<CliffordElement>{}), DomainError);
}

TEST(Multiply, SpecExamples) {
    const CliffordGroup &g = CliffordGroup::standard();
    for (int k = 1; k <= 24; ++k) {
        EXPECT_EQ(g.multiply(1, k), k);
        EXPECT_EQ(g.multiply(k, 1), k);
    }
    EXPECT_EQ(g.multiply(7, 7), 1);
    EXPECT_EQ(g.multiply(7, 5), 3);
    EXPECT_THROW(g.multiply(0, 1), DomainError);
    EXPECT_THROW(g.multiply(1, 25), DomainError);
}

TEST(Multiply, AgreesWithOracleProductsEverywhere) {
    const CliffordGroup &g = CliffordGroup::standard();
    const std::vector<CliffordElement> &elements = g.elements();
    for (int i = 1; i <= 24; ++i) {
        for (int j = 1; j <= 24; ++j) {
            oracle::M product = oracle::mul(elements[i - 1].canonical.entries(), elements[j - 1].canonical.entries());
            EXPECT_EQ(g.multiply(i, j), oracle_find(elements, product)) << i << "*" << j;
        }
    }
}

TEST(Multiply, TableRowsAndColumnsArePermutations) {
    const CliffordGroup &g = CliffordGroup::standard();
    for (int i = 1; i <= 24; ++i) {
        std::set<int> row, col;
        for (int j = 1; j <= 24; ++j) {
            row.insert(g.multiply(i, j));
            col.insert(g.multiply(j, i));
        }
        EXPECT_EQ(row.size(), 24u);
        EXPECT_EQ(col.size(), 24u);
        EXPECT_EQ(g.multiply(i, g.inverse(i)), 1);
        EXPECT_EQ(g.multiply(g.inverse(i), i), 1);
    }
}

TEST(Multiply, IsAssociative) {
    const CliffordGroup &g = CliffordGroup::standard();
    for (int i = 1; i <= 24; ++i)
        for (int j = 1; j <= 24; ++j)
            for (int k = 1; k <= 24; k += 5) EXPECT_EQ(g.multiply(g.multiply(i, j), k), g.multiply(i, g.multiply(j, k)));
}

TEST(AveragePulseArea, IsSevenQuarterPiExactly) {
    std::vector<CliffordElement> group = load_group();
    PiFraction mean = average_pulse_area_exact(group);
    EXPECT_EQ(mean.numerator, 7);
    EXPECT_EQ(mean.denominator, 4);
    EXPECT_EQ(mean.to_string(), "7π/4");
    int printed = std::accumulate(std::begin(kPrintedTotals), std::end(kPrintedTotals), 0);
    EXPECT_DOUBLE_EQ(average_pulse_area(group), printed * kPi / 2 / 24);
    EXPECT_DOUBLE_EQ(average_pulse_area(group), 7 * kPi / 4);
}

TEST(AveragePulseArea, IdentityOnlyListIsZero) {
    std::vector<CliffordElement> only_identity{load_group()[0]};
    PiFraction mean = average_pulse_area_exact(only_identity);
    EXPECT_EQ(mean.numerator, 0);
    EXPECT_EQ(mean.to_string(), "0");
    EXPECT_DOUBLE_EQ(average_pulse_area(only_identity), 0.0);
}

TEST(AveragePulseArea, ShortRotationVariantRecount) {
    std::vector<CliffordElement> group = load_group();
    int three_quarter_pulses = 0;
    for (const CliffordElement &e : group)
        for (const GatePulse &p : e.pulses) three_quarter_pulses += p.quarter_turns == 3 ? 1 : 0;
    EXPECT_EQ(three_quarter_pulses, 16);

    std::vector<CliffordElement> variant = short_rotation_variant(group);
    PiFraction mean = average_pulse_area_exact(variant);
    // Each replacement removes two quarter turns from the 84 in the table.
    const int expected_quarter_turns = 84 - 2 * three_quarter_pulses;
    EXPECT_EQ(mean.numerator * 2 * 24, expected_quarter_turns * mean.denominator);
    EXPECT_EQ(mean.to_string(), "13π/12");
    EXPECT_TRUE(verify_group(variant).ok());
}

TEST(RecoveryGate, SpecExamples) {
    const CliffordGroup &g = CliffordGroup::standard();
    EXPECT_EQ(g.recovery_gate(Unitary2::identity()), 5);
    EXPECT_EQ(g.recovery_gate(g.element(7).canonical), 1);
    EXPECT_EQ(g.recovery_for(1), 5);
    EXPECT_EQ(g.recovery_for(7), 1);
    EXPECT_THROW(g.recovery_gate(Unitary2(1, 1, 0, 1)), DomainError);
}

TEST(RecoveryGate, MatchesEnumerationForEveryElement) {
    const CliffordGroup &g = CliffordGroup::standard();
    for (int a = 1; a <= 24; ++a) {
        const Unitary2 &acc = g.element(a).canonical;
        int best = 0;
        for (const CliffordElement &e : g.elements()) {
            PureState out = (e.canonical * acc) * PureState::one();
            if (std::norm(out.c0) > 1 - 1e-9) {
                if (best == 0 || e.total_quarter_turns() < g.element(best).total_quarter_turns()) best = e.index;
            }
        }
        EXPECT_EQ(g.recovery_for(a), best) << "after element " << a;
    }
}

TEST(RecoveryGate, StabilizerCounts) {
    const CliffordGroup &g = CliffordGroup::standard();
    int to_zero = 0, fix_one = 0;
    for (const CliffordElement &e : g.elements()) {
        PureState out = e.canonical * PureState::one();
        to_zero += std::norm(out.c0) > 1 - 1e-9 ? 1 : 0;
        fix_one += std::norm(out.c1) > 1 - 1e-9 ? 1 : 0;
    }
    EXPECT_EQ(to_zero, 4);
    EXPECT_EQ(fix_one, 4);
}

TEST(RecoveryGate, RandomSequencesReturnToZero) {
    const CliffordGroup &g = CliffordGroup::standard();
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> pick(1, 24), len(1, 100);
    for (int trial = 0; trial < 200; ++trial) {
        int n = len(rng);
        Unitary2 acc;
        for (int k = 0; k < n; ++k) acc = g.element(pick(rng)).pulse_product() * acc;
        int r = g.recovery_gate(acc);
        PureState final_state = g.element(r).pulse_product() * (acc * PureState::one());
        EXPECT_NEAR(std::norm(final_state.c0), 1.0, 1e-9);
    }
}

TEST(CliffordGroup, FindReturnsZeroForNonMembers) {
    const CliffordGroup &g = CliffordGroup::standard();
    EXPECT_EQ(g.find(rotation(Axis::kX, 0.3)), 0);
    EXPECT_EQ(g.find(rotation(Axis::kZ, kPi).scaled(oracle::C{0, 1})), 3);
}

}  // namespace
}  // namespace rbarray
