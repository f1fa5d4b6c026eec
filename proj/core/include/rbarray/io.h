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

#ifndef RBARRAY_IO_H_
#define RBARRAY_IO_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "rbarray/clifford.h"
#include "rbarray/rb.h"
#include "rbarray/site_select.h"

namespace rbarray {

/// Shortest decimal that round-trips the double ("%.17g" trimmed).
std::string format_number(double value);

/// FNV-1a 64 of the compact dump, as 16 hex digits.
std::string digest(const nlohmann::json &document);

// Survival counts: `seq_id,length,shots,survivors`.
void write_dataset_csv(std::ostream &out, const RBDataset &dataset);
RBDataset read_dataset_csv(std::istream &in);

nlohmann::json dataset_to_json(const RBDataset &dataset);
RBDataset dataset_from_json(const nlohmann::json &document);

/// Reads CSV or JSON, picked by extension (.json) or leading '{'.
RBDataset load_dataset(const std::filesystem::path &path);

/// Keys: d_if, d, F2, sign, residual, stderr_dif, stderr_d, boundary_flag.
/// Non-finite standard errors serialize as null.
nlohmann::json fit_to_json(const DecayFit &fit);

nlohmann::json unitary_to_json(const Unitary2 &u);
nlohmann::json group_to_json(std::span<const CliffordElement> group);
nlohmann::json report_to_json(const GroupReport &report);

// `site,row,col,role,r_ratio,d_if,d,F2_or_Ext,stderr`
void write_site_csv(std::ostream &out, const SiteSelectResult &result);
// `r,gate,E_xt,spinflip`
void write_scan_csv(std::ostream &out, std::span<const ScanRow> rows);
// `occupied_count,frequency`
void write_histogram_csv(std::ostream &out, const LoadingResult &loading);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

}  // namespace rbarray

#endif  // RBARRAY_IO_H_
