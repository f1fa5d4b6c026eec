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

#ifndef RBARRAY_CLIFFORD_H_
#define RBARRAY_CLIFFORD_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rbarray/su2.h"

namespace rbarray {

/// A microwave pulse from the gate table, with its rotation angle held as an
/// integer number of quarter turns (units of pi/2). Negative counts are
/// rotations in the opposite sense, realized by shifting the phase by pi.
struct GatePulse {
    Axis axis;
    int quarter_turns;

    PulseSpec spec() const;
    Unitary2 ideal() const { return rotation(axis, quarter_turns * kPi / 2); }
    int area_quarter_turns() const { return quarter_turns < 0 ? -quarter_turns : quarter_turns; }
};

struct CliffordElement {
    /// 1-based position in the gate table.
    int index = 0;
    /// Rotation angles about x, y, z in quarter turns. The gate is R_x R_y R_z (z acts first).
    std::array<int, 3> axis_quarter_turns{};
    /// Applied first to last.
    std::vector<GatePulse> pulses;
    Unitary2 canonical;

    /// Sum of pulse areas in quarter turns.
    int total_quarter_turns() const;
    double total_area() const { return total_quarter_turns() * kPi / 2; }
    /// Product of the axis rotations, R_x(theta_x) R_y(theta_y) R_z(theta_z).
    Unitary2 axis_product() const;
    /// Product of the ideal pulses, first applied first.
    Unitary2 pulse_product() const;
};

/// The 24 single-qubit Clifford gates with their microwave pulse implementations.
/// Minus-quarter-turn rotations are realized as three-quarter-turn pulses.
std::vector<CliffordElement> load_group();

/// Same gates with every 3pi/2 pulse replaced by the shorter -pi/2 rotation.
std::vector<CliffordElement> short_rotation_variant(std::span<const CliffordElement> group);

struct GroupReport {
    std::size_t size = 0;
    std::size_t closure_hits = 0;
    std::size_t closure_total = 0;
    std::size_t pulse_matches = 0;
    std::size_t axis_matches = 0;
    std::size_t inverses_found = 0;
    /// Pairs (i, j) whose product matched zero or several elements.
    std::vector<std::pair<int, int>> closure_failures;
    std::vector<int> missing_inverse;
    std::vector<int> pulse_failures;
    std::vector<int> axis_failures;

    bool ok() const {
        return closure_failures.empty() && missing_inverse.empty() && pulse_failures.empty() &&
               axis_failures.empty();
    }
};

/// Exhaustive consistency check of a gate table. Throws DomainError on an empty table.
GroupReport verify_group(std::span<const CliffordElement> group, double tol = kPhaseTolerance);

/// Mean total area per gate as an exact multiple of pi: numerator / denominator.
struct PiFraction {
    std::int64_t numerator = 0;
    std::int64_t denominator = 1;

    double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator) * kPi; }
    std::string to_string() const;
};

PiFraction average_pulse_area_exact(std::span<const CliffordElement> group);
double average_pulse_area(std::span<const CliffordElement> group);

/// Multiplication and inverse tables over a verified gate table.
///
/// multiply(i, j) is the element equal (up to phase) to U_i U_j, i.e. j applied
/// first. Indices are 1-based as in the gate table.
class CliffordGroup {
   public:
    /// Builds the tables; throws IntegrityError if the table is not closed.
    explicit CliffordGroup(std::vector<CliffordElement> elements);

    /// Shared instance built from load_group().
    static const CliffordGroup &standard();

    std::size_t size() const { return elements_.size(); }
    const std::vector<CliffordElement> &elements() const { return elements_; }
    const CliffordElement &element(int index) const;

    int multiply(int i, int j) const;
    int inverse(int i) const;
    /// Index of the element phase-equivalent to `u`, or 0 if none.
    int find(const Unitary2 &u, double tol = kPhaseTolerance) const;

    /// Among elements R with |<0| U_R accumulated |1>|^2 > 1 - 1e-9, the one of
    /// least total area, lowest index on ties. Throws DomainError for a
    /// non-unitary input and IntegrityError if no element qualifies.
    int recovery_gate(const Unitary2 &accumulated) const;
    /// recovery_gate(element(index).canonical), tabulated.
    int recovery_for(int index) const;

   private:
    void check_index(int index) const;

    std::vector<CliffordElement> elements_;
    std::vector<int> product_;
    std::vector<int> inverse_;
    std::vector<int> recovery_;
};

}  // namespace rbarray

#endif  // RBARRAY_CLIFFORD_H_
