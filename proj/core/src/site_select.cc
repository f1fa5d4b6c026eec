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

#include "rbarray/site_select.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rbarray/errors.h"

namespace rbarray {

namespace {

double normal_cdf(double x, double mean, double sigma) {
    return 0.5 * std::erfc(-(x - mean) / (sigma * std::sqrt(2.0)));
}

double normal_pdf(double x, double mean, double sigma) {
    double z = (x - mean) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
}

// Points where the two densities are equal, ascending.
std::vector<double> density_crossings(const ReadoutModel &m) {
    double a = 0.5 / (m.bright_sigma * m.bright_sigma) - 0.5 / (m.dark_sigma * m.dark_sigma);
    double b = -m.bright_mean / (m.bright_sigma * m.bright_sigma) + m.dark_mean / (m.dark_sigma * m.dark_sigma);
    double c = 0.5 * m.bright_mean * m.bright_mean / (m.bright_sigma * m.bright_sigma) -
               0.5 * m.dark_mean * m.dark_mean / (m.dark_sigma * m.dark_sigma) +
               std::log(m.bright_sigma / m.dark_sigma);
    std::vector<double> roots;
    double scale = std::abs(b) + std::abs(c) + 1.0;
    if (std::abs(a) < 1e-15 * scale) {
        if (std::abs(b) > 1e-15 * scale) {
            roots.push_back(-c / b);
        }
        return roots;
    }
    double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
        return roots;
    }
    double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    roots.push_back(q / a);
    if (q != 0.0) {
        roots.push_back(c / q);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// Standard normals for the beam jitter of one shot, derived from the shot key.
std::array<double, 3> shot_normals(std::uint64_t seed, int seq_id, int length, int shot) {
    std::uint64_t base = derive_seed(seed, {tag(StreamTag::kBeam), static_cast<std::uint64_t>(seq_id),
                                            static_cast<std::uint64_t>(length), static_cast<std::uint64_t>(shot)});
    auto uniform = [&](std::uint64_t k) {
        return (static_cast<double>(derive_seed(base, {k}) >> 11) + 0.5) * 0x1.0p-53;
    };
    double r1 = std::sqrt(-2.0 * std::log(uniform(0)));
    double r2 = std::sqrt(-2.0 * std::log(uniform(2)));
    double t1 = 2.0 * kPi * uniform(1);
    double t2 = 2.0 * kPi * uniform(3);
    return {r1 * std::cos(t1), r1 * std::sin(t1), r2 * std::cos(t2)};
}

}  // namespace

Position ArrayGeometry::position(int site) const {
    check_site(site);
    return {col(site) * pitch, row(site) * pitch};
}

std::vector<int> ArrayGeometry::nearest_neighbors(int site) const {
    check_site(site);
    std::vector<int> out;
    int r = row(site);
    int c = col(site);
    if (r > 0) out.push_back(site - cols);
    if (c > 0) out.push_back(site - 1);
    if (c + 1 < cols) out.push_back(site + 1);
    if (r + 1 < rows) out.push_back(site + cols);
    return out;
}

void ArrayGeometry::check_site(int site) const {
    if (site < 0 || site >= site_count()) {
        throw DomainError("site " + std::to_string(site) + " outside the " + std::to_string(rows) + "x" +
                          std::to_string(cols) + " array");
    }
}

void ArrayGeometry::validate() const {
    if (rows < 1) throw ValidationError("geometry.rows", "must be at least 1");
    if (cols < 1) throw ValidationError("geometry.cols", "must be at least 1");
    if (!(pitch > 0.0)) throw ValidationError("geometry.pitch", "must be positive");
}

StarkBeam StarkBeam::centered_on(const ArrayGeometry &geometry, int site) {
    StarkBeam beam;
    beam.center = geometry.position(site);
    return beam;
}

void StarkBeam::validate() const {
    if (!(waist_x > 0.0)) throw ValidationError("beam.waist_x", "must be positive");
    if (!(waist_y > 0.0)) throw ValidationError("beam.waist_y", "must be positive");
    if (peak_shift && !std::isfinite(*peak_shift)) throw ValidationError("beam.peak_shift", "must be finite");
    if (!(pointing_jitter >= 0.0)) throw ValidationError("beam.pointing_jitter", "must be non-negative");
    if (!(intensity_jitter >= 0.0)) throw ValidationError("beam.intensity_jitter", "must be non-negative");
}

void DriveParams::validate() const {
    if (!(rabi_freq > 0.0)) throw ValidationError("drive.rabi_freq", "must be positive");
    if (!std::isfinite(detuning)) throw ValidationError("drive.detuning", "must be finite");
}

double relative_intensity(const StarkBeam &beam, Position position) {
    double dx = (position.x - beam.center.x) / beam.waist_x;
    double dy = (position.y - beam.center.y) / beam.waist_y;
    return std::exp(-2.0 * (dx * dx + dy * dy));
}

SiteDriveMap effective_detunings(const ArrayGeometry &geometry, const StarkBeam &beam, const DriveParams &drive,
                                 int target) {
    geometry.check_site(target);
    beam.validate();
    drive.validate();
    SiteDriveMap map;
    map.target = target;
    const double target_intensity = relative_intensity(beam, geometry.position(target));
    const double peak = beam.peak_shift ? *beam.peak_shift : drive.detuning / target_intensity;
    map.ratios.resize(geometry.site_count());
    for (int k = 0; k < geometry.site_count(); ++k) {
        double shift = peak * relative_intensity(beam, geometry.position(k));
        map.ratios[k] = (drive.detuning - shift) / drive.rabi_freq;
    }
    return map;
}

GateSpec GateSpec::from_element(const CliffordElement &element, std::string name) {
    GateSpec gate;
    gate.name = std::move(name);
    for (const GatePulse &p : element.pulses) {
        gate.pulses.push_back(p.spec());
    }
    return gate;
}

std::vector<GateSpec> crosstalk_reference_gates() {
    const CliffordGroup &group = CliffordGroup::standard();
    return {
        {"Rx(pi/2)", {PulseSpec::about(Axis::kX, kPi / 2)}},
        {"Rx(pi)", {PulseSpec::about(Axis::kX, kPi)}},
        GateSpec::from_element(group.element(2), "Rz(pi/2)"),
        GateSpec::from_element(group.element(3), "Rz(pi)"),
    };
}

Unitary2 spectator_unitary(std::span<const PulseSpec> pulses, double r) {
    Unitary2 u;
    for (const PulseSpec &p : pulses) {
        u = detuned_pulse(p, r) * u;
    }
    return u;
}

double crosstalk_error(std::span<const PulseSpec> pulses, double r, FidelityMethod method) {
    return 1.0 - bloch_avg_fidelity(spectator_unitary(pulses, r), method);
}

double spinflip_error(std::span<const PulseSpec> pulses, double r) {
    return std::norm(spectator_unitary(pulses, r).b());
}

double optimal_detuning(double area, int n) {
    if (!(area > 0.0)) {
        throw DomainError("pulse area must be positive");
    }
    if (n < 1) {
        throw DomainError("n must be a positive integer");
    }
    double radicand = 16.0 * n * n * kPi * kPi / (area * area) - 1.0;
    if (radicand < 0.0) {
        throw DomainError("no spectator-transparent detuning: 4 pi n is below the pulse area");
    }
    return std::sqrt(radicand);
}

std::vector<ScanRow> detuning_scan(std::span<const GateSpec> gates, double r_min, double r_max, int steps) {
    if (steps < 2) {
        throw DomainError("a detuning scan needs at least 2 steps");
    }
    if (!(r_max > r_min)) {
        throw DomainError("r_max must exceed r_min");
    }
    std::vector<ScanRow> rows;
    rows.reserve(gates.size() * steps);
    for (int k = 0; k < steps; ++k) {
        double r = r_min + (r_max - r_min) * k / (steps - 1);
        for (const GateSpec &gate : gates) {
            Unitary2 u = spectator_unitary(gate.pulses, r);
            rows.push_back({r, gate.name, 1.0 - bloch_avg_fidelity(u), std::norm(u.b())});
        }
    }
    return rows;
}

const char *role_name(SiteRole role) {
    switch (role) {
        case SiteRole::kTarget:
            return "target";
        case SiteRole::kNearestNeighbor:
            return "nn";
        case SiteRole::kFar:
            return "far";
    }
    return "far";
}

double SiteResult::figure() const { return role == SiteRole::kTarget ? fit.f2 : fit.crosstalk_error(); }

// Both F^2 = 1 - d/2 and E_xt = d/2 carry half the uncertainty of d.
double SiteResult::figure_stderr() const { return fit.stderr_d / 2.0; }

void SiteSelectConfig::validate() const {
    geometry.validate();
    beam.validate();
    drive.validate();
    noise.validate();
    rb.validate();
    if (!occupancy.empty() && static_cast<int>(occupancy.size()) != geometry.site_count()) {
        throw ValidationError("occupancy", "must list every site");
    }
}

SiteSelectResult site_selected_rb(int target, const SiteSelectConfig &config) {
    config.validate();
    const ArrayGeometry &geometry = config.geometry;
    geometry.check_site(target);

    StarkBeam beam = config.beam;
    beam.center = geometry.position(target);
    const SiteDriveMap map = effective_detunings(geometry, beam, config.drive, target);
    const double nominal_peak = beam.peak_shift ? *beam.peak_shift : config.drive.detuning;
    const bool jitter = beam.pointing_jitter > 0.0 || beam.intensity_jitter > 0.0;

    NoiseParams noise = config.noise;
    noise.rabi_freq = config.drive.rabi_freq;

    const std::vector<int> neighbors = geometry.nearest_neighbors(target);
    const std::vector<RBSequence> sequences = generate_sequences(config.rb.lengths, config.rb.n_sequences,
                                                                 config.seed, config.rb.prefix);

    SiteSelectResult result;
    double sum_all = 0.0;
    double sum_nn = 0.0;
    double sum_far = 0.0;
    int n_nn = 0;
    int n_far = 0;
    for (int site = 0; site < geometry.site_count(); ++site) {
        if (!config.occupancy.empty() && !config.occupancy[site]) {
            result.summary.notices.push_back("site " + std::to_string(site) + " unoccupied, skipped" +
                                             (site == target ? " (target)" : ""));
            continue;
        }
        SiteResult entry;
        entry.site = site;
        entry.row = geometry.row(site);
        entry.col = geometry.col(site);
        entry.r = map.ratios[site];
        if (site == target) {
            entry.role = SiteRole::kTarget;
        } else if (std::find(neighbors.begin(), neighbors.end(), site) != neighbors.end()) {
            entry.role = SiteRole::kNearestNeighbor;
        } else {
            entry.role = SiteRole::kFar;
        }

        RunOptions options;
        options.seed = config.seed;
        options.workers = config.workers;
        options.stream_key = static_cast<std::uint64_t>(site);
        options.params_digest = config.params_digest;
        if (jitter) {
            const Position pos = geometry.position(site);
            const std::uint64_t seed = config.seed;
            const StarkBeam nominal = beam;
            const DriveParams drive = config.drive;
            options.site_ratio = 0.0;
            options.shot_ratio = [=](int seq_id, int length, int shot) {
                std::array<double, 3> z = shot_normals(seed, seq_id, length, shot);
                StarkBeam shifted = nominal;
                shifted.center.x += nominal.pointing_jitter * z[0];
                shifted.center.y += nominal.pointing_jitter * z[1];
                double scale = 1.0 + nominal.intensity_jitter * z[2];
                double shift = nominal_peak * scale * relative_intensity(shifted, pos);
                return (drive.detuning - shift) / drive.rabi_freq;
            };
        } else {
            options.site_ratio = entry.r;
        }
        entry.data = run_rb(sequences, noise, config.rb.shots, options);
        const int sign = entry.role == SiteRole::kTarget ? +1 : -1;
        entry.fit = fit_decay(entry.data, sign);

        if (entry.role == SiteRole::kTarget) {
            result.summary.target_f2 = entry.fit.f2;
        } else {
            double ext = entry.fit.crosstalk_error();
            sum_all += ext;
            if (entry.role == SiteRole::kNearestNeighbor) {
                sum_nn += ext;
                ++n_nn;
            } else {
                sum_far += ext;
                ++n_far;
            }
        }
        result.sites.push_back(std::move(entry));
    }
    result.summary.spectators = n_nn + n_far;
    if (result.summary.spectators > 0) {
        result.summary.mean_ext = sum_all / result.summary.spectators;
    }
    if (n_nn > 0) {
        result.summary.mean_ext_nn = sum_nn / n_nn;
    }
    if (n_far > 0) {
        result.summary.mean_ext_far = sum_far / n_far;
    }
    return result;
}

LoadingResult load_array(const ArrayGeometry &geometry, double p_fill, int runs, Rng &rng) {
    geometry.validate();
    if (!(p_fill >= 0.0 && p_fill <= 1.0)) {
        throw DomainError("fill probability must lie in [0, 1]");
    }
    if (runs < 0) {
        throw DomainError("run count must be non-negative");
    }
    LoadingResult result;
    result.histogram.assign(geometry.site_count() + 1, 0);
    std::bernoulli_distribution fill(p_fill);
    long total = 0;
    for (int run = 0; run < runs; ++run) {
        std::vector<bool> mask(geometry.site_count());
        int occupied = 0;
        for (int k = 0; k < geometry.site_count(); ++k) {
            mask[k] = fill(rng);
            occupied += mask[k] ? 1 : 0;
        }
        ++result.histogram[occupied];
        total += occupied;
        result.masks.push_back(std::move(mask));
    }
    result.mean_occupied = runs > 0 ? static_cast<double>(total) / runs : 0.0;
    return result;
}

void ReadoutModel::validate() const {
    if (!std::isfinite(dark_mean)) throw ValidationError("readout.dark_mean", "must be finite");
    if (!std::isfinite(bright_mean)) throw ValidationError("readout.bright_mean", "must be finite");
    if (!(dark_sigma >= 0.0) || !std::isfinite(dark_sigma)) {
        throw ValidationError("readout.dark_sigma", "must be non-negative");
    }
    if (!(bright_sigma >= 0.0) || !std::isfinite(bright_sigma)) {
        throw ValidationError("readout.bright_sigma", "must be non-negative");
    }
    if (dark_mean > bright_mean) throw ValidationError("readout.dark_mean", "must not exceed bright_mean");
}

double ReadoutModel::threshold() const {
    validate();
    const double mid = 0.5 * (dark_mean + bright_mean);
    if (dark_sigma == 0.0 || bright_sigma == 0.0) {
        return mid;
    }
    for (double x : density_crossings(*this)) {
        if (x >= dark_mean && x <= bright_mean) {
            return x;
        }
    }
    return mid;
}

double ReadoutModel::overlap() const {
    validate();
    if (dark_sigma == 0.0 || bright_sigma == 0.0) {
        return dark_sigma == bright_sigma && dark_mean == bright_mean ? 1.0 : 0.0;
    }
    std::vector<double> cuts = density_crossings(*this);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> edges{-inf};
    edges.insert(edges.end(), cuts.begin(), cuts.end());
    edges.push_back(inf);
    const double spread = dark_sigma + bright_sigma;
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        double lo = edges[k];
        double hi = edges[k + 1];
        double probe = std::isinf(lo) ? (std::isinf(hi) ? dark_mean : hi - spread)
                                      : (std::isinf(hi) ? lo + spread : 0.5 * (lo + hi));
        bool dark_lower = normal_pdf(probe, dark_mean, dark_sigma) <= normal_pdf(probe, bright_mean, bright_sigma);
        double mean = dark_lower ? dark_mean : bright_mean;
        double sigma = dark_lower ? dark_sigma : bright_sigma;
        double upper = std::isinf(hi) ? 1.0 : normal_cdf(hi, mean, sigma);
        double lower = std::isinf(lo) ? 0.0 : normal_cdf(lo, mean, sigma);
        total += upper - lower;
    }
    return std::clamp(total, 0.0, 1.0);
}

double ReadoutModel::misclassification() const {
    const double t = threshold();
    auto tail_above = [&](double mean, double sigma) {
        if (sigma == 0.0) return mean >= t ? 1.0 : 0.0;
        return 1.0 - normal_cdf(t, mean, sigma);
    };
    double dark_as_bright = tail_above(dark_mean, dark_sigma);
    double bright_as_dark = 1.0 - tail_above(bright_mean, bright_sigma);
    return 0.5 * (dark_as_bright + bright_as_dark);
}

ReadoutSample readout_counts(bool bright, const ReadoutModel &model, Rng &rng) {
    model.validate();
    const double mean = bright ? model.bright_mean : model.dark_mean;
    const double sigma = bright ? model.bright_sigma : model.dark_sigma;
    double counts = mean;
    if (sigma > 0.0) {
        std::normal_distribution<double> draw(mean, sigma);
        counts = draw(rng);
    }
    counts = std::max(counts, 0.0);
    return {counts, counts >= model.threshold()};
}

}  // namespace rbarray
