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

#ifndef RBARRAY_SITE_SELECT_H_
#define RBARRAY_SITE_SELECT_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbarray/noise.h"
#include "rbarray/random.h"
#include "rbarray/rb.h"
#include "rbarray/su2.h"

namespace rbarray {

struct Position {
    double x = 0.0;  // m
    double y = 0.0;  // m
};

/// Rectangular site grid numbered row-major from the upper-left corner.
struct ArrayGeometry {
    int rows = 7;
    int cols = 7;
    double pitch = 3.8e-6;  // m

    int site_count() const { return rows * cols; }
    int row(int site) const { return site / cols; }
    int col(int site) const { return site % cols; }
    Position position(int site) const;
    /// Orthogonally adjacent sites (at most 4).
    std::vector<int> nearest_neighbors(int site) const;
    void check_site(int site) const;
    void validate() const;
};

/// Focused Gaussian beam producing a differential Stark shift proportional to intensity.
struct StarkBeam {
    Position center;
    double waist_x = 3.2e-6;  // 1/e^2 intensity radius, m
    double waist_y = 2.7e-6;
    /// Differential shift at the beam center, rad/s. Unset means "calibrated so
    /// the target site is exactly resonant".
    std::optional<double> peak_shift;
    /// Per-shot Gaussian pointing error (std dev, m) and relative intensity error (std dev).
    double pointing_jitter = 0.0;
    double intensity_jitter = 0.0;

    static StarkBeam centered_on(const ArrayGeometry &geometry, int site);
    void validate() const;
};

struct DriveParams {
    /// Global microwave detuning delta = omega - omega_q, rad/s.
    double detuning = 2 * kPi * 33e3;
    /// Rabi frequency in addressing mode, rad/s.
    double rabi_freq = 2 * kPi * 8.5e3;

    double ratio() const { return detuning / rabi_freq; }
    void validate() const;
};

/// exp(-2 (dx^2 / wx^2 + dy^2 / wy^2)); 1 at the beam center.
double relative_intensity(const StarkBeam &beam, Position position);

struct SiteDriveMap {
    int target = 0;
    /// delta_k / Omega per site.
    std::vector<double> ratios;
};

/// delta_k = delta (1 - I_k / I_target), or delta - peak_shift I_k when the
/// beam's peak shift is given explicitly.
SiteDriveMap effective_detunings(const ArrayGeometry &geometry, const StarkBeam &beam, const DriveParams &drive,
                                 int target);

/// A named gate given as its microwave pulses (first applied first).
struct GateSpec {
    std::string name;
    std::vector<PulseSpec> pulses;

    static GateSpec from_element(const CliffordElement &element, std::string name);
};

/// R_x(pi/2), R_x(pi), R_z(pi/2), R_z(pi); the z gates use their table pulse sequences.
std::vector<GateSpec> crosstalk_reference_gates();

/// The gate's pulses all driven at detuning ratio r in one phase-coherent frame.
Unitary2 spectator_unitary(std::span<const PulseSpec> pulses, double r);

/// 1 - Bloch-averaged survival fidelity of the spectator unitary.
double crosstalk_error(std::span<const PulseSpec> pulses, double r,
                       FidelityMethod method = FidelityMethod::kClosedForm);

/// |<0|U|1>|^2 for the spectator unitary.
double spinflip_error(std::span<const PulseSpec> pulses, double r);

/// delta/Omega = sqrt(16 n^2 pi^2 / area^2 - 1): the spectator's effective area is 4 pi n.
double optimal_detuning(double area, int n);

struct ScanRow {
    double r = 0.0;
    std::string gate;
    double e_xt = 0.0;
    double spinflip = 0.0;
};

/// `steps` evenly spaced ratios over [r_min, r_max], every gate at every ratio.
std::vector<ScanRow> detuning_scan(std::span<const GateSpec> gates, double r_min, double r_max, int steps);

enum class SiteRole { kTarget, kNearestNeighbor, kFar };

const char *role_name(SiteRole role);

struct SiteResult {
    int site = 0;
    int row = 0;
    int col = 0;
    SiteRole role = SiteRole::kFar;
    double r = 0.0;
    DecayFit fit;
    RBDataset data;

    /// F^2 for the target, E_xt = d_xt / 2 for spectators.
    double figure() const;
    double figure_stderr() const;
};

struct SiteSelectSummary {
    std::optional<double> target_f2;
    double mean_ext = 0.0;
    double mean_ext_nn = 0.0;
    double mean_ext_far = 0.0;
    int spectators = 0;
    std::vector<std::string> notices;
};

struct SiteSelectResult {
    std::vector<SiteResult> sites;
    SiteSelectSummary summary;
};

struct SiteSelectConfig {
    ArrayGeometry geometry;
    /// The beam is re-centered on the target; only waists, peak shift and jitter are used.
    StarkBeam beam;
    DriveParams drive;
    NoiseParams noise;
    RBConfig rb = RBConfig::single_site_preset();
    /// Occupancy per site; unoccupied sites are skipped. Empty means fully loaded.
    std::vector<bool> occupancy;
    std::uint64_t seed = kDefaultSeed;
    int workers = 1;
    std::string params_digest;

    void validate() const;
};

/// Site-selected RB over the array. The target evolves at its own (zero)
/// detuning and is fitted with the standard decay; every other occupied site
/// starts in |1>, sees every pulse at its own detuning, and is fitted with the
/// sign-inverted decay. The addressing Rabi frequency replaces noise.rabi_freq.
SiteSelectResult site_selected_rb(int target, const SiteSelectConfig &config);

struct LoadingResult {
    std::vector<std::vector<bool>> masks;
    /// histogram[k] = number of runs with k occupied sites.
    std::vector<int> histogram;
    double mean_occupied = 0.0;
};

/// Independent Bernoulli(p_fill) occupancy per site for each run.
LoadingResult load_array(const ArrayGeometry &geometry, double p_fill, int runs, Rng &rng);

/// Photon-count histograms of dark and bright atoms.
struct ReadoutModel {
    double dark_mean = 10.0;
    double dark_sigma = 4.24;
    double bright_mean = 40.0;
    double bright_sigma = 4.24;

    void validate() const;
    /// Count at which the two densities cross between the means (equal priors).
    double threshold() const;
    /// Overlap coefficient: integral of min(f_dark, f_bright).
    double overlap() const;
    /// Mean misclassification probability at threshold() for equal priors.
    double misclassification() const;
};

struct ReadoutSample {
    double counts = 0.0;
    bool classified_bright = false;
};

/// Draws a photoelectron count (clamped at 0) and classifies it against the threshold.
ReadoutSample readout_counts(bool bright, const ReadoutModel &model, Rng &rng);

}  // namespace rbarray

#endif  // RBARRAY_SITE_SELECT_H_
