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

#include "rbarray_cli/config.h"

#include <fstream>
#include <optional>
#include <set>
#include <string>

#include "rbarray/errors.h"

namespace rbarray::cli {

namespace {

using nlohmann::json;

json optional_json(const std::optional<double> &value) {
    if (value) {
        return *value;
    }
    return nullptr;
}

const char *prefix_name(PrefixMode mode) {
    return mode == PrefixMode::kSharedPrefix ? "shared" : "independent";
}

json rb_json(const RBConfig &rb) {
    return {{"lengths", rb.lengths},
            {"n_sequences", rb.n_sequences},
            {"shots", rb.shots},
            {"prefix", prefix_name(rb.prefix)}};
}

// Reads the fields of one JSON object, rejecting keys nobody asked for.
class Section {
  public:
    Section(const json &document, std::string path) : path_(std::move(path)) {
        if (document.is_null()) {
            return;
        }
        if (!document.is_object()) {
            throw ValidationError(path_, "must be an object");
        }
        doc_ = &document;
    }

    Section child(const std::string &key) {
        seen_.insert(key);
        if (doc_ == nullptr || !doc_->contains(key)) {
            return Section(json(nullptr), join(key));
        }
        return Section(doc_->at(key), join(key));
    }

    void number(const std::string &key, double &out) {
        if (const json *v = find(key)) {
            if (!v->is_number()) {
                throw ValidationError(join(key), "must be a number");
            }
            out = v->get<double>();
        }
    }

    void optional_number(const std::string &key, std::optional<double> &out) {
        if (const json *v = find(key)) {
            if (v->is_null()) {
                out.reset();
            } else if (v->is_number()) {
                out = v->get<double>();
            } else {
                throw ValidationError(join(key), "must be a number or null");
            }
        }
    }

    void integer(const std::string &key, int &out) {
        if (const json *v = find(key)) {
            if (!v->is_number_integer()) {
                throw ValidationError(join(key), "must be an integer");
            }
            out = v->get<int>();
        }
    }

    void unsigned64(const std::string &key, std::uint64_t &out) {
        if (const json *v = find(key)) {
            if (!v->is_number_unsigned()) {
                throw ValidationError(join(key), "must be a non-negative integer");
            }
            out = v->get<std::uint64_t>();
        }
    }

    void int_list(const std::string &key, std::vector<int> &out) {
        if (const json *v = find(key)) {
            if (!v->is_array()) {
                throw ValidationError(join(key), "must be an array of integers");
            }
            std::vector<int> values;
            for (const json &item : *v) {
                if (!item.is_number_integer()) {
                    throw ValidationError(join(key), "must be an array of integers");
                }
                values.push_back(item.get<int>());
            }
            out = std::move(values);
        }
    }

    template <typename Enum>
    void choice(const std::string &key, Enum &out, std::initializer_list<std::pair<const char *, Enum>> options) {
        if (const json *v = find(key)) {
            if (v->is_string()) {
                for (const auto &[name, value] : options) {
                    if (v->get<std::string>() == name) {
                        out = value;
                        return;
                    }
                }
            }
            std::string allowed;
            for (const auto &[name, value] : options) {
                allowed += allowed.empty() ? "" : ", ";
                allowed += name;
            }
            throw ValidationError(join(key), "must be one of: " + allowed);
        }
    }

    void finish() const {
        if (doc_ == nullptr) {
            return;
        }
        for (const auto &item : doc_->items()) {
            if (!seen_.count(item.key())) {
                throw ValidationError(join(item.key()), "unknown key");
            }
        }
    }

  private:
    const json *find(const std::string &key) {
        seen_.insert(key);
        if (doc_ == nullptr) {
            return nullptr;
        }
        auto it = doc_->find(key);
        return it == doc_->end() ? nullptr : &*it;
    }

    std::string join(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

    const json *doc_ = nullptr;
    std::string path_;
    std::set<std::string> seen_;
};

void read_rb(Section section, RBConfig &rb) {
    section.int_list("lengths", rb.lengths);
    section.integer("n_sequences", rb.n_sequences);
    section.integer("shots", rb.shots);
    section.choice("prefix", rb.prefix,
                   {{"shared", PrefixMode::kSharedPrefix}, {"independent", PrefixMode::kIndependent}});
    section.finish();
}

}  // namespace

void LoadingParams::validate() const {
    if (!(p_fill >= 0.0 && p_fill <= 1.0)) {
        throw ValidationError("loading.p_fill", "must be a probability in [0, 1]");
    }
    if (runs < 1) {
        throw ValidationError("loading.runs", "must be at least 1");
    }
}

void RunConfig::validate() const {
    noise.validate();
    drive.validate();
    geometry.validate();
    beam.validate();
    rb.validate();
    try {
        select.validate();
    } catch (const ValidationError &e) {
        // Same checks, reported under this section's name.
        std::string field = e.field();
        throw ValidationError("select" + field.substr(field.find('.')), std::string(e.what()).substr(field.size() + 2));
    }
    readout.validate();
    loading.validate();
}

json to_json(const RunConfig &config) {
    const NoiseParams &n = config.noise;
    return {
        {"seed", config.seed},
        {"noise",
         {{"rabi_freq", n.rabi_freq},
          {"static_detuning_offset", n.static_detuning_offset},
          {"timing_error_fraction", n.timing_error_fraction},
          {"timing_mode", n.timing_mode == TimingMode::kPerPulse ? "per_pulse" : "per_shot"},
          {"t2_star", optional_json(n.t2_star)},
          {"depolarization", optional_json(n.depolarization)},
          {"t1", optional_json(n.t1)},
          {"spam",
           {{"prep_error", n.spam.prep_error},
            {"pushout_error", n.spam.pushout_error},
            {"readout_overlap", n.spam.readout_overlap}}}}},
        {"drive", {{"detuning", config.drive.detuning}, {"rabi_freq", config.drive.rabi_freq}}},
        {"geometry",
         {{"rows", config.geometry.rows}, {"cols", config.geometry.cols}, {"pitch", config.geometry.pitch}}},
        {"beam",
         {{"waist_x", config.beam.waist_x},
          {"waist_y", config.beam.waist_y},
          {"peak_shift", optional_json(config.beam.peak_shift)},
          {"pointing_jitter", config.beam.pointing_jitter},
          {"intensity_jitter", config.beam.intensity_jitter}}},
        {"rb", rb_json(config.rb)},
        {"select", rb_json(config.select)},
        {"readout",
         {{"dark_mean", config.readout.dark_mean},
          {"dark_sigma", config.readout.dark_sigma},
          {"bright_mean", config.readout.bright_mean},
          {"bright_sigma", config.readout.bright_sigma}}},
        {"loading", {{"p_fill", config.loading.p_fill}, {"runs", config.loading.runs}}},
    };
}

RunConfig overlay(const RunConfig &base, const json &document) {
    RunConfig config = base;
    Section root(document, "");
    root.unsigned64("seed", config.seed);

    Section noise = root.child("noise");
    noise.number("rabi_freq", config.noise.rabi_freq);
    noise.number("static_detuning_offset", config.noise.static_detuning_offset);
    noise.number("timing_error_fraction", config.noise.timing_error_fraction);
    noise.choice("timing_mode", config.noise.timing_mode,
                 {{"per_pulse", TimingMode::kPerPulse}, {"per_shot", TimingMode::kPerShot}});
    noise.optional_number("t2_star", config.noise.t2_star);
    noise.optional_number("depolarization", config.noise.depolarization);
    noise.optional_number("t1", config.noise.t1);
    Section spam = noise.child("spam");
    spam.number("prep_error", config.noise.spam.prep_error);
    spam.number("pushout_error", config.noise.spam.pushout_error);
    spam.number("readout_overlap", config.noise.spam.readout_overlap);
    spam.finish();
    noise.finish();

    Section drive = root.child("drive");
    drive.number("detuning", config.drive.detuning);
    drive.number("rabi_freq", config.drive.rabi_freq);
    drive.finish();

    Section geometry = root.child("geometry");
    geometry.integer("rows", config.geometry.rows);
    geometry.integer("cols", config.geometry.cols);
    geometry.number("pitch", config.geometry.pitch);
    geometry.finish();

    Section beam = root.child("beam");
    beam.number("waist_x", config.beam.waist_x);
    beam.number("waist_y", config.beam.waist_y);
    beam.optional_number("peak_shift", config.beam.peak_shift);
    beam.number("pointing_jitter", config.beam.pointing_jitter);
    beam.number("intensity_jitter", config.beam.intensity_jitter);
    beam.finish();

    read_rb(root.child("rb"), config.rb);
    read_rb(root.child("select"), config.select);

    Section readout = root.child("readout");
    readout.number("dark_mean", config.readout.dark_mean);
    readout.number("dark_sigma", config.readout.dark_sigma);
    readout.number("bright_mean", config.readout.bright_mean);
    readout.number("bright_sigma", config.readout.bright_sigma);
    readout.finish();

    Section loading = root.child("loading");
    loading.number("p_fill", config.loading.p_fill);
    loading.integer("runs", config.loading.runs);
    loading.finish();

    root.finish();
    return config;
}

RunConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("config", "cannot open " + path.string());
    }
    json document;
    try {
        document = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ValidationError("config", std::string("malformed JSON: ") + e.what());
    }
    return overlay(RunConfig{}, document);
}

}  // namespace rbarray::cli
