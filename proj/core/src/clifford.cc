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

#include "rbarray/clifford.h"

#include <cmath>
#include <numeric>
#include <string>

#include "rbarray/errors.h"

namespace rbarray {

namespace {

constexpr Complex kI{0, 1};

struct TableRow {
    int index;
    std::array<int, 3> axis_quarter_turns;
    std::vector<GatePulse> pulses;
    // Top-row-normalized matrix; rows 9-24 carry an overall 1/sqrt(2).
    std::array<Complex, 4> matrix;
    bool half_norm;
};

GatePulse X(int q) { return {Axis::kX, q}; }
GatePulse Y(int q) { return {Axis::kY, q}; }

std::vector<TableRow> table_rows() {
    const Complex one{1};
    const Complex zero{0};
    const Complex i = kI;
    return {
        {1, {0, 0, 0}, {}, {one, zero, zero, one}, false},
        {2, {0, 0, 1}, {X(3), Y(1), X(1)}, {one, zero, zero, i}, false},
        {3, {0, 0, 2}, {Y(2), X(2)}, {one, zero, zero, -one}, false},
        {4, {0, 0, -1}, {X(3), Y(3), X(1)}, {one, zero, zero, -i}, false},
        {5, {0, 2, 0}, {Y(2)}, {zero, one, -one, zero}, false},
        {6, {0, 2, 1}, {X(1), Y(1), X(1)}, {zero, one, i, zero}, false},
        {7, {2, 0, 0}, {X(2)}, {zero, one, one, zero}, false},
        {8, {2, 0, 1}, {X(1), Y(3), X(1)}, {zero, one, -i, zero}, false},
        {9, {2, 1, 0}, {Y(1), X(2)}, {one, one, one, -one}, true},
        {10, {0, -1, 0}, {Y(3)}, {one, one, -one, one}, true},
        {11, {1, 0, 1}, {X(1), Y(3)}, {one, one, -i, i}, true},
        {12, {1, 2, 1}, {X(3), Y(3)}, {one, one, i, -i}, true},
        {13, {2, -1, 0}, {Y(3), X(2)}, {one, -one, -one, -one}, true},
        {14, {-1, 0, 1}, {X(3), Y(1)}, {one, -one, i, i}, true},
        {15, {0, 1, 0}, {Y(1)}, {one, -one, one, one}, true},
        {16, {-1, 2, 1}, {X(1), Y(1)}, {one, -one, -i, -i}, true},
        {17, {-1, -1, 0}, {Y(3), X(3)}, {one, i, -one, i}, true},
        {18, {-1, 1, 0}, {Y(1), X(3)}, {one, i, one, -i}, true},
        {19, {-1, 2, 0}, {Y(2), X(3)}, {one, i, -i, -one}, true},
        {20, {-1, 0, 0}, {X(3)}, {one, i, i, one}, true},
        {21, {1, -1, 0}, {Y(3), X(1)}, {one, -i, -one, -i}, true},
        {22, {1, 0, 0}, {X(1)}, {one, -i, -i, one}, true},
        {23, {1, 2, 0}, {Y(2), X(1)}, {one, -i, i, -one}, true},
        {24, {1, 1, 0}, {Y(1), X(1)}, {one, -i, one, i}, true},
    };
}

}  // namespace

PulseSpec GatePulse::spec() const {
    PulseSpec base = PulseSpec::about(axis, area_quarter_turns() * kPi / 2);
    if (quarter_turns < 0) {
        return {base.phase() + kPi, base.area()};
    }
    return base;
}

int CliffordElement::total_quarter_turns() const {
    int total = 0;
    for (const GatePulse &p : pulses) {
        total += p.area_quarter_turns();
    }
    return total;
}

Unitary2 CliffordElement::axis_product() const {
    return rotation(Axis::kX, axis_quarter_turns[0] * kPi / 2) *
           rotation(Axis::kY, axis_quarter_turns[1] * kPi / 2) *
           rotation(Axis::kZ, axis_quarter_turns[2] * kPi / 2);
}

Unitary2 CliffordElement::pulse_product() const {
    Unitary2 total;
    for (const GatePulse &p : pulses) {
        total = p.ideal() * total;
    }
    return total;
}

std::vector<CliffordElement> load_group() {
    std::vector<CliffordElement> group;
    const double norm = 1.0 / std::sqrt(2.0);
    for (TableRow &row : table_rows()) {
        double s = row.half_norm ? norm : 1.0;
        CliffordElement element;
        element.index = row.index;
        element.axis_quarter_turns = row.axis_quarter_turns;
        element.pulses = std::move(row.pulses);
        element.canonical = Unitary2(row.matrix[0] * s, row.matrix[1] * s, row.matrix[2] * s, row.matrix[3] * s);
        group.push_back(std::move(element));
    }
    return group;
}

std::vector<CliffordElement> short_rotation_variant(std::span<const CliffordElement> group) {
    std::vector<CliffordElement> variant(group.begin(), group.end());
    for (CliffordElement &element : variant) {
        for (GatePulse &p : element.pulses) {
            if (p.quarter_turns == 3) {
                p.quarter_turns = -1;
            }
        }
    }
    return variant;
}

GroupReport verify_group(std::span<const CliffordElement> group, double tol) {
    if (group.empty()) {
        throw DomainError("cannot verify an empty gate table");
    }
    GroupReport report;
    report.size = group.size();
    report.closure_total = group.size() * group.size();
    for (const CliffordElement &gi : group) {
        bool has_inverse = false;
        for (const CliffordElement &gj : group) {
            Unitary2 product = gi.canonical * gj.canonical;
            int matches = 0;
            for (const CliffordElement &gk : group) {
                if (phase_equivalent(product, gk.canonical, tol)) {
                    ++matches;
                }
            }
            if (matches == 1) {
                ++report.closure_hits;
            } else {
                report.closure_failures.emplace_back(gi.index, gj.index);
            }
            if (phase_equivalent(product, Unitary2::identity(), tol)) {
                has_inverse = true;
            }
        }
        if (has_inverse) {
            ++report.inverses_found;
        } else {
            report.missing_inverse.push_back(gi.index);
        }
        if (phase_equivalent(gi.pulse_product(), gi.canonical, tol)) {
            ++report.pulse_matches;
        } else {
            report.pulse_failures.push_back(gi.index);
        }
        if (phase_equivalent(gi.axis_product(), gi.canonical, tol)) {
            ++report.axis_matches;
        } else {
            report.axis_failures.push_back(gi.index);
        }
    }
    return report;
}

std::string PiFraction::to_string() const {
    std::string out;
    if (numerator == 0) {
        return "0";
    }
    if (numerator != 1) {
        out += std::to_string(numerator);
    }
    out += "π";
    if (denominator != 1) {
        out += "/" + std::to_string(denominator);
    }
    return out;
}

PiFraction average_pulse_area_exact(std::span<const CliffordElement> group) {
    if (group.empty()) {
        throw DomainError("average over an empty gate table");
    }
    std::int64_t quarter_turns = 0;
    for (const CliffordElement &element : group) {
        quarter_turns += element.total_quarter_turns();
    }
    // mean = quarter_turns * (pi/2) / n
    std::int64_t den = 2 * static_cast<std::int64_t>(group.size());
    std::int64_t g = std::gcd(quarter_turns, den);
    if (g == 0) {
        return {0, 1};
    }
    return {quarter_turns / g, den / g};
}

double average_pulse_area(std::span<const CliffordElement> group) {
    return average_pulse_area_exact(group).value();
}

CliffordGroup::CliffordGroup(std::vector<CliffordElement> elements) : elements_(std::move(elements)) {
    const int n = static_cast<int>(elements_.size());
    if (n == 0) {
        throw DomainError("empty gate table");
    }
    for (int k = 0; k < n; ++k) {
        if (elements_[k].index != k + 1) {
            throw IntegrityError("gate table indices must run 1.." + std::to_string(n));
        }
    }
    product_.assign(static_cast<std::size_t>(n) * n, 0);
    inverse_.assign(n, 0);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            int k = find(elements_[i - 1].canonical * elements_[j - 1].canonical);
            if (k == 0) {
                throw IntegrityError("product of gates " + std::to_string(i) + " and " + std::to_string(j) +
                                     " is not in the table");
            }
            product_[(i - 1) * n + (j - 1)] = k;
            if (k == 1) {
                inverse_[i - 1] = j;
            }
        }
        if (inverse_[i - 1] == 0) {
            throw IntegrityError("gate " + std::to_string(i) + " has no inverse in the table");
        }
    }
    recovery_.assign(n, 0);
    for (int i = 1; i <= n; ++i) {
        recovery_[i - 1] = recovery_gate(elements_[i - 1].canonical);
    }
}

const CliffordGroup &CliffordGroup::standard() {
    static const CliffordGroup group(load_group());
    return group;
}

void CliffordGroup::check_index(int index) const {
    if (index < 1 || index > static_cast<int>(elements_.size())) {
        throw DomainError("gate index " + std::to_string(index) + " out of range");
    }
}

const CliffordElement &CliffordGroup::element(int index) const {
    check_index(index);
    return elements_[index - 1];
}

int CliffordGroup::multiply(int i, int j) const {
    check_index(i);
    check_index(j);
    return product_[(i - 1) * elements_.size() + (j - 1)];
}

int CliffordGroup::inverse(int i) const {
    check_index(i);
    return inverse_[i - 1];
}

int CliffordGroup::find(const Unitary2 &u, double tol) const {
    for (const CliffordElement &element : elements_) {
        if (phase_equivalent(u, element.canonical, tol)) {
            return element.index;
        }
    }
    return 0;
}

int CliffordGroup::recovery_gate(const Unitary2 &accumulated) const {
    if (!accumulated.is_unitary(1e-9)) {
        throw DomainError("accumulated operator is not unitary");
    }
    int best = 0;
    int best_area = 0;
    for (const CliffordElement &element : elements_) {
        PureState out = element.canonical * (accumulated * PureState::one());
        if (std::norm(out.c0) > 1.0 - 1e-9) {
            int area = element.total_quarter_turns();
            if (best == 0 || area < best_area) {
                best = element.index;
                best_area = area;
            }
        }
    }
    if (best == 0) {
        throw IntegrityError("no gate in the table maps the sequence output to |0>");
    }
    return best;
}

int CliffordGroup::recovery_for(int index) const {
    check_index(index);
    return recovery_[index - 1];
}

}  // namespace rbarray
