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

#include "rbarray_cli/cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rbarray/clifford.h"
#include "rbarray/errors.h"
#include "rbarray/io.h"
#include "rbarray/noise.h"
#include "rbarray/rb.h"
#include "rbarray/site_select.h"
#include "rbarray_cli/config.h"

#ifndef RBARRAY_VERSION
#define RBARRAY_VERSION "0.0.0"
#endif

namespace rbarray::cli {

namespace {

using nlohmann::json;

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "rbarray_out";
    std::string format = "csv";
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
};

struct RbOverrides {
    std::optional<int> shots;
    std::optional<int> sequences;
    std::vector<int> lengths;

    void apply(RBConfig &rb) const {
        if (shots) rb.shots = *shots;
        if (sequences) rb.n_sequences = *sequences;
        if (!lengths.empty()) rb.lengths = lengths;
    }

    void attach(CLI::App *app) {
        app->add_option("--shots", shots, "Shots per sequence and length");
        app->add_option("--sequences", sequences, "Number of random sequences");
        app->add_option("--lengths", lengths, "Truncation lengths, comma separated")->delimiter(',');
    }
};

// One subcommand invocation: resolved config, artifact bookkeeping, manifest.
class Run {
  public:
    Run(std::string command, const CommonOptions &common, std::ostream &out)
        : command_(std::move(command)), common_(common), out_(out) {
        if (!common.config_path.empty()) {
            config_ = load_config(common.config_path);
        }
        if (common.seed) {
            config_.seed = *common.seed;
        }
    }

    RunConfig &config() { return config_; }
    json &parameters() { return parameters_; }
    std::ostream &out() { return out_; }
    int workers() const { return common_.workers; }
    bool json_format() const { return common_.format == "json"; }

    // Call after all overrides: validates and fixes the digest.
    void seal() {
        config_.validate();
        digest_ = digest(json{{"command", command_}, {"config", to_json(config_)}, {"parameters", parameters_}});
    }

    const std::string &config_digest() const { return digest_; }

    void write(const std::string &name, const std::string &content) {
        write_file_atomic(std::filesystem::path(common_.out_dir) / name, content);
        artifacts_.push_back(name);
    }

    void write_json(const std::string &name, const json &document) { write(name, document.dump(2) + "\n"); }

    void finish() {
        json manifest = {{"tool", "rbarray"},
                         {"version", RBARRAY_VERSION},
                         {"command", command_},
                         {"seed", config_.seed},
                         {"config_digest", digest_},
                         {"parameters", parameters_},
                         {"config", to_json(config_)},
                         {"artifacts", artifacts_}};
        write_file_atomic(std::filesystem::path(common_.out_dir) / "manifest.json", manifest.dump(2) + "\n");
        out_ << "wrote";
        for (const std::string &name : artifacts_) {
            out_ << ' ' << name;
        }
        out_ << " manifest.json to " << common_.out_dir << '\n';
    }

  private:
    std::string command_;
    CommonOptions common_;
    std::ostream &out_;
    RunConfig config_;
    json parameters_ = json::object();
    std::string digest_;
    std::vector<std::string> artifacts_;
};

std::string fixed(double value, int digits) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
    return buffer;
}

int clifford_verify(Run &run) {
    run.seal();
    std::vector<CliffordElement> group = load_group();
    GroupReport report = verify_group(group);
    PiFraction mean = average_pulse_area_exact(group);
    std::vector<CliffordElement> variant = short_rotation_variant(group);
    PiFraction variant_mean = average_pulse_area_exact(variant);

    run.out() << "closure " << report.closure_hits << '/' << report.closure_total << ", pulse-products "
              << report.pulse_matches << '/' << report.size << ", avg area " << mean.to_string() << '\n';
    run.out() << "axis-products " << report.axis_matches << '/' << report.size << ", inverses "
              << report.inverses_found << '/' << report.size << '\n';
    run.out() << "short-rotation variant avg area " << variant_mean.to_string() << '\n';

    json summary = report_to_json(report);
    summary["average_area"] = mean.to_string();
    summary["short_rotation_average_area"] = variant_mean.to_string();
    run.write_json("clifford_group.json", group_to_json(group));
    run.write_json("clifford_report.json", summary);
    run.finish();
    if (!report.ok()) {
        throw IntegrityError("Clifford table failed verification");
    }
    // Building the tables repeats the checks the group relies on.
    CliffordGroup tables(group);
    return kExitOk;
}

int rb_run(Run &run, const RbOverrides &overrides, bool ideal) {
    overrides.apply(run.config().rb);
    if (ideal) {
        run.config().noise = NoiseParams::ideal();
    }
    run.seal();
    RunOptions options;
    options.seed = run.config().seed;
    options.workers = run.workers();
    options.params_digest = run.config_digest();
    RBDataset dataset = run_rb(run.config().rb, run.config().noise, options);
    if (run.json_format()) {
        run.write_json("dataset.json", dataset_to_json(dataset));
    } else {
        std::ostringstream csv;
        write_dataset_csv(csv, dataset);
        run.write("dataset.csv", csv.str());
    }
    run.out() << dataset.records.size() << " records, " << run.config().rb.shots << " shots each\n";
    run.finish();
    return kExitOk;
}

int rb_fit(Run &run, const std::string &input, int sign) {
    std::ifstream probe(input, std::ios::binary);
    if (!probe) {
        throw ValidationError("input", "cannot open " + input);
    }
    std::stringstream content;
    content << probe.rdbuf();
    run.parameters()["input_digest"] = digest(json(content.str()));
    run.parameters()["sign"] = sign;
    run.seal();
    RBDataset dataset = load_dataset(input);
    DecayFit fit = fit_decay(dataset, sign);
    run.write_json("fit.json", fit_to_json(fit));
    run.out() << "d_if " << format_number(fit.d_if) << ", d " << format_number(fit.d) << ", F2 "
              << format_number(fit.f2) << (fit.boundary ? ", boundary" : "") << '\n';
    run.finish();
    return kExitOk;
}

int rabi_scan_command(Run &run, double ratio, double t_max_us, int steps, int shots) {
    run.parameters()["detuning_ratio"] = ratio;
    run.parameters()["t_max_us"] = t_max_us;
    run.parameters()["steps"] = steps;
    run.parameters()["shots"] = shots;
    run.seal();
    std::vector<RabiPoint> points =
        rabi_scan(run.config().noise, ratio, t_max_us * 1e-6, steps, shots, run.config().seed);
    if (run.json_format()) {
        json rows = json::array();
        for (const RabiPoint &p : points) {
            rows.push_back({{"time", p.time}, {"p_ideal", p.p_ideal}, {"shots", p.shots}, {"bright", p.bright}});
        }
        run.write_json("rabi.json", rows);
    } else {
        std::ostringstream csv;
        csv << "time,p_ideal,shots,bright\n";
        for (const RabiPoint &p : points) {
            csv << format_number(p.time) << ',' << format_number(p.p_ideal) << ',' << p.shots << ',' << p.bright
                << '\n';
        }
        run.write("rabi.csv", csv.str());
    }
    run.finish();
    return kExitOk;
}

int crosstalk_scan_command(Run &run, double r_min, double r_max, int steps) {
    run.parameters()["r_min"] = r_min;
    run.parameters()["r_max"] = r_max;
    run.parameters()["steps"] = steps;
    run.seal();
    std::vector<GateSpec> gates = crosstalk_reference_gates();
    std::vector<ScanRow> rows = detuning_scan(gates, r_min, r_max, steps);
    if (run.json_format()) {
        json out = json::array();
        for (const ScanRow &row : rows) {
            out.push_back({{"r", row.r}, {"gate", row.gate}, {"E_xt", row.e_xt}, {"spinflip", row.spinflip}});
        }
        run.write_json("crosstalk_scan.json", out);
    } else {
        std::ostringstream csv;
        write_scan_csv(csv, rows);
        run.write("crosstalk_scan.csv", csv.str());
    }
    run.out() << "zero-crosstalk ratios for pi pulses:";
    for (int n = 1; n <= 3; ++n) {
        run.out() << ' ' << fixed(optimal_detuning(kPi, n), 4);
    }
    run.out() << '\n';
    run.finish();
    return kExitOk;
}

int select_run(Run &run, const RbOverrides &overrides, std::optional<int> target) {
    overrides.apply(run.config().select);
    const RunConfig &config = run.config();
    const int site = target ? *target : config.geometry.site_count() / 2;
    run.parameters()["target"] = site;
    run.seal();
    config.geometry.check_site(site);

    SiteSelectConfig select;
    select.geometry = config.geometry;
    select.beam = config.beam;
    select.drive = config.drive;
    select.noise = config.noise;
    select.rb = config.select;
    select.seed = config.seed;
    select.workers = run.workers();
    select.params_digest = run.config_digest();
    SiteSelectResult result = site_selected_rb(site, select);

    const SiteSelectSummary &s = result.summary;
    json summary = {{"target", site},
                    {"drive_ratio", config.drive.ratio()},
                    {"target_F2", s.target_f2 ? json(*s.target_f2) : json(nullptr)},
                    {"mean_E_xt", s.mean_ext},
                    {"mean_E_xt_nn", s.mean_ext_nn},
                    {"mean_E_xt_far", s.mean_ext_far},
                    {"spectators", s.spectators},
                    {"notices", s.notices}};
    if (run.json_format()) {
        json sites = json::array();
        for (const SiteResult &r : result.sites) {
            sites.push_back({{"site", r.site},
                             {"row", r.row},
                             {"col", r.col},
                             {"role", role_name(r.role)},
                             {"r_ratio", r.r},
                             {"fit", fit_to_json(r.fit)},
                             {"F2_or_Ext", r.figure()},
                             {"stderr", std::isfinite(r.figure_stderr()) ? json(r.figure_stderr()) : json(nullptr)}});
        }
        run.write_json("sites.json", sites);
    } else {
        std::ostringstream csv;
        write_site_csv(csv, result);
        run.write("sites.csv", csv.str());
    }
    run.write_json("select_summary.json", summary);
    if (s.target_f2) {
        run.out() << "target F2 " << fixed(*s.target_f2, 5) << ", ";
    }
    run.out() << "<E_xt> " << format_number(s.mean_ext) << ", nn " << format_number(s.mean_ext_nn) << ", far "
              << format_number(s.mean_ext_far) << '\n';
    run.finish();
    return kExitOk;
}

int array_load(Run &run, std::optional<double> p_fill, std::optional<int> runs) {
    if (p_fill) run.config().loading.p_fill = *p_fill;
    if (runs) run.config().loading.runs = *runs;
    run.seal();
    const RunConfig &config = run.config();
    Rng rng = make_stream(config.seed, {tag(StreamTag::kLoading)});
    LoadingResult loading = load_array(config.geometry, config.loading.p_fill, config.loading.runs, rng);
    if (run.json_format()) {
        json rows = json::array();
        for (std::size_t k = 0; k < loading.histogram.size(); ++k) {
            rows.push_back({{"occupied_count", k}, {"frequency", loading.histogram[k]}});
        }
        run.write_json("loading_histogram.json", rows);
    } else {
        std::ostringstream csv;
        write_histogram_csv(csv, loading);
        run.write("loading_histogram.csv", csv.str());
    }
    json readout = {{"mean_occupied", loading.mean_occupied},
                    {"threshold", config.readout.threshold()},
                    {"overlap", config.readout.overlap()},
                    {"misclassification", config.readout.misclassification()}};
    run.write_json("readout.json", readout);
    run.out() << "mean occupied " << fixed(loading.mean_occupied, 2) << " of " << config.geometry.site_count()
              << ", readout overlap " << format_number(config.readout.overlap()) << '\n';
    run.finish();
    return kExitOk;
}

int budget(Run &run, std::optional<double> rabi_khz, std::optional<double> t2star_ms,
           std::optional<double> mean_area_pi) {
    if (rabi_khz) run.config().noise.rabi_freq = 2 * kPi * *rabi_khz * 1e3;
    if (t2star_ms) run.config().noise.t2_star = *t2star_ms * 1e-3;
    double area = mean_area_pi ? *mean_area_pi * kPi : average_pulse_area(CliffordGroup::standard().elements());
    run.parameters()["mean_area"] = area;
    run.seal();
    if (!(area > 0.0)) {
        throw ValidationError("mean-area-pi", "must be positive");
    }
    FidelityBudget b = analytic_fidelity_budget(run.config().noise, area);
    run.write_json("budget.json", {{"mean_area", area},
                                   {"mean_time", b.mean_time},
                                   {"alpha", b.alpha},
                                   {"d", b.d},
                                   {"F2", b.f2}});
    run.out() << "mean gate time " << fixed(b.mean_time * 1e6, 1) << " us, alpha " << fixed(b.alpha, 6) << ", F2 "
              << fixed(b.f2, 5) << '\n';
    run.finish();
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Randomized benchmarking simulator for addressed qubit arrays", "rbarray"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", RBARRAY_VERSION);

    CommonOptions common;
    app.add_option("--config", common.config_path, "Run configuration (JSON)")->check(CLI::ExistingFile);
    app.add_option("--seed", common.seed, "Master seed");
    app.add_option("--out", common.out_dir, "Output directory")->capture_default_str();
    app.add_option("--format", common.format, "Data artifact format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--workers", common.workers, "Worker threads")->check(CLI::PositiveNumber);

    CLI::App *clifford = app.add_subcommand("clifford", "Clifford group tools")->require_subcommand(1);
    CLI::App *verify = clifford->add_subcommand("verify", "Verify the gate table and export it");

    CLI::App *rb = app.add_subcommand("rb", "Randomized benchmarking")->require_subcommand(1);
    CLI::App *rb_run_cmd = rb->add_subcommand("run", "Simulate global RB and write survival counts");
    RbOverrides rb_overrides;
    rb_overrides.attach(rb_run_cmd);
    bool ideal = false;
    rb_run_cmd->add_flag("--ideal", ideal, "Disable every noise source");
    CLI::App *rb_fit_cmd = rb->add_subcommand("fit", "Fit the decay of a survival dataset");
    std::string input;
    int sign = 1;
    rb_fit_cmd->add_option("--input", input, "Dataset (CSV or JSON)")->required();
    rb_fit_cmd->add_option("--sign", sign, "+1 for standard decay, -1 for spectators")
        ->check(CLI::IsMember({1, -1}));

    CLI::App *rabi = app.add_subcommand("rabi", "Rabi oscillations")->require_subcommand(1);
    CLI::App *rabi_scan_cmd = rabi->add_subcommand("scan", "Transfer probability against drive time");
    double rabi_ratio = 0.0;
    double t_max_us = 500.0;
    int rabi_steps = 101;
    int rabi_shots = 100;
    rabi_scan_cmd->add_option("--ratio", rabi_ratio, "Detuning over Rabi frequency");
    rabi_scan_cmd->add_option("--t-max-us", t_max_us, "Longest drive time in microseconds");
    rabi_scan_cmd->add_option("--steps", rabi_steps, "Number of time points");
    rabi_scan_cmd->add_option("--shots", rabi_shots, "Shots per time point");

    CLI::App *crosstalk = app.add_subcommand("crosstalk", "Spectator crosstalk")->require_subcommand(1);
    CLI::App *scan_cmd = crosstalk->add_subcommand("scan", "Crosstalk error against detuning ratio");
    double r_min = 0.0;
    double r_max = 10.0;
    int scan_steps = 1001;
    scan_cmd->add_option("--r-min", r_min, "Smallest detuning ratio");
    scan_cmd->add_option("--r-max", r_max, "Largest detuning ratio");
    scan_cmd->add_option("--steps", scan_steps, "Number of ratios");

    CLI::App *select = app.add_subcommand("select", "Site-selected benchmarking")->require_subcommand(1);
    CLI::App *select_run_cmd = select->add_subcommand("run", "Benchmark one addressed site and its spectators");
    RbOverrides select_overrides;
    select_overrides.attach(select_run_cmd);
    std::optional<int> target;
    select_run_cmd->add_option("--target", target, "Addressed site (row-major index)");

    CLI::App *array = app.add_subcommand("array", "Array loading")->require_subcommand(1);
    CLI::App *load_cmd = array->add_subcommand("load", "Occupancy histogram over loading runs");
    std::optional<double> p_fill;
    std::optional<int> runs;
    load_cmd->add_option("--p-fill", p_fill, "Loading probability per site");
    load_cmd->add_option("--runs", runs, "Number of loading runs");

    CLI::App *budget_cmd = app.add_subcommand("budget", "Analytic fidelity estimate from dephasing");
    std::optional<double> rabi_khz;
    std::optional<double> t2star_ms;
    std::optional<double> mean_area_pi;
    budget_cmd->add_option("--rabi-khz", rabi_khz, "Rabi frequency in kHz");
    budget_cmd->add_option("--t2star-ms", t2star_ms, "Dephasing time in ms");
    budget_cmd->add_option("--mean-area-pi", mean_area_pi, "Mean pulse area per gate in units of pi");

    CLI::App *config_cmd = app.add_subcommand("config", "Configuration")->require_subcommand(1);
    CLI::App *show_defaults = config_cmd->add_subcommand("show-defaults", "Print the default configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*show_defaults) {
            out << to_json(RunConfig{}).dump(2) << '\n';
            return kExitOk;
        }
        if (*verify) {
            Run run("clifford verify", common, out);
            return clifford_verify(run);
        }
        if (*rb_run_cmd) {
            Run run("rb run", common, out);
            run.parameters()["ideal"] = ideal;
            return rb_run(run, rb_overrides, ideal);
        }
        if (*rb_fit_cmd) {
            Run run("rb fit", common, out);
            return rb_fit(run, input, sign);
        }
        if (*rabi_scan_cmd) {
            Run run("rabi scan", common, out);
            return rabi_scan_command(run, rabi_ratio, t_max_us, rabi_steps, rabi_shots);
        }
        if (*scan_cmd) {
            Run run("crosstalk scan", common, out);
            return crosstalk_scan_command(run, r_min, r_max, scan_steps);
        }
        if (*select_run_cmd) {
            Run run("select run", common, out);
            return select_run(run, select_overrides, target);
        }
        if (*load_cmd) {
            Run run("array load", common, out);
            return array_load(run, p_fill, runs);
        }
        if (*budget_cmd) {
            Run run("budget", common, out);
            return budget(run, rabi_khz, t2star_ms, mean_area_pi);
        }
    } catch (const IntegrityError &e) {
        err << "integrity error: " << e.what() << '\n';
        return kExitIntegrity;
    } catch (const DomainError &e) {
        err << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    err << app.help();
    return kExitUsage;
}

}  // namespace rbarray::cli
