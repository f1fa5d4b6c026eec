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

#ifndef RBARRAY_CLI_CONFIG_H_
#define RBARRAY_CLI_CONFIG_H_

#include <cstdint>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "rbarray/noise.h"
#include "rbarray/rb.h"
#include "rbarray/site_select.h"

namespace rbarray::cli {

struct LoadingParams {
    double p_fill = 0.6;
    int runs = 500;

    void validate() const;
};

/// Every tunable of a run. Keys in the JSON form match the field names; all
/// quantities are SI (rad/s, s, m).
struct RunConfig {
    NoiseParams noise;
    DriveParams drive;
    ArrayGeometry geometry;
    StarkBeam beam;
    RBConfig rb = RBConfig::global_preset();
    RBConfig select = RBConfig::single_site_preset();
    ReadoutModel readout;
    LoadingParams loading;
    std::uint64_t seed = kDefaultSeed;

    void validate() const;
};

nlohmann::json to_json(const RunConfig &config);

/// Overlays `document` on `base`. Unknown keys and wrong types raise
/// ValidationError naming the field.
RunConfig overlay(const RunConfig &base, const nlohmann::json &document);

RunConfig load_config(const std::filesystem::path &path);

}  // namespace rbarray::cli

#endif  // RBARRAY_CLI_CONFIG_H_
