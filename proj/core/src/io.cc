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

#include "rbarray/io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rbarray/errors.h"

namespace rbarray {

namespace {

nlohmann::json finite_or_null(double value) {
    if (std::isfinite(value)) {
        return value;
    }
    return nullptr;
}

std::vector<std::string> split(const std::string &line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(item);
    }
    return out;
}

int parse_int(const std::string &text, int line_no) {
    try {
        std::size_t used = 0;
        int value = std::stoi(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::exception &) {
        throw DomainError("line " + std::to_string(line_no) + ": not an integer: '" + text + "'");
    }
}

}  // namespace

std::string format_number(double value) {
    if (!std::isfinite(value)) {
        return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
    }
    char buffer[32];
    for (int precision = 6; precision <= 17; ++precision) {
        std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
        if (std::strtod(buffer, nullptr) == value) {
            break;
        }
    }
    return buffer;
}

std::string digest(const nlohmann::json &document) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : document.dump()) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

void write_dataset_csv(std::ostream &out, const RBDataset &dataset) {
    out << "seq_id,length,shots,survivors\n";
    for (const SurvivalRecord &r : dataset.records) {
        out << r.seq_id << ',' << r.length << ',' << r.shots << ',' << r.survivors << '\n';
    }
}

RBDataset read_dataset_csv(std::istream &in) {
    RBDataset dataset;
    std::string line;
    int line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (!header) {
            if (line != "seq_id,length,shots,survivors") {
                throw DomainError("unexpected dataset header: '" + line + "'");
            }
            header = true;
            continue;
        }
        std::vector<std::string> fields = split(line, ',');
        if (fields.size() != 4) {
            throw DomainError("line " + std::to_string(line_no) + ": expected 4 fields");
        }
        SurvivalRecord r{parse_int(fields[0], line_no), parse_int(fields[1], line_no), parse_int(fields[2], line_no),
                         parse_int(fields[3], line_no)};
        if (r.shots < 1 || r.survivors < 0 || r.survivors > r.shots) {
            throw DomainError("line " + std::to_string(line_no) + ": need 0 <= survivors <= shots");
        }
        dataset.records.push_back(r);
    }
    if (!header) {
        throw DomainError("dataset is empty");
    }
    return dataset;
}

nlohmann::json dataset_to_json(const RBDataset &dataset) {
    nlohmann::json records = nlohmann::json::array();
    for (const SurvivalRecord &r : dataset.records) {
        records.push_back({{"seq_id", r.seq_id}, {"length", r.length}, {"shots", r.shots}, {"survivors", r.survivors}});
    }
    return {{"params_digest", dataset.params_digest}, {"seed", dataset.seed}, {"records", records}};
}

RBDataset dataset_from_json(const nlohmann::json &document) {
    RBDataset dataset;
    try {
        dataset.params_digest = document.value("params_digest", std::string{});
        dataset.seed = document.value("seed", std::uint64_t{0});
        for (const auto &r : document.at("records")) {
            SurvivalRecord record{r.at("seq_id").get<int>(), r.at("length").get<int>(), r.at("shots").get<int>(),
                                  r.at("survivors").get<int>()};
            if (record.shots < 1 || record.survivors < 0 || record.survivors > record.shots) {
                throw DomainError("record needs 0 <= survivors <= shots");
            }
            dataset.records.push_back(record);
        }
    } catch (const nlohmann::json::exception &e) {
        throw DomainError(std::string("malformed dataset JSON: ") + e.what());
    }
    return dataset;
}

RBDataset load_dataset(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (path.extension() == ".json" || (first != std::string::npos && text[first] == '{')) {
        try {
            return dataset_from_json(nlohmann::json::parse(text));
        } catch (const nlohmann::json::parse_error &e) {
            throw DomainError(std::string("malformed dataset JSON: ") + e.what());
        }
    }
    std::istringstream stream(text);
    return read_dataset_csv(stream);
}

nlohmann::json fit_to_json(const DecayFit &fit) {
    return {{"d_if", fit.d_if},
            {"d", fit.d},
            {"F2", fit.f2},
            {"sign", fit.sign},
            {"residual", fit.rms_residual},
            {"stderr_dif", finite_or_null(fit.stderr_d_if)},
            {"stderr_d", finite_or_null(fit.stderr_d)},
            {"boundary_flag", fit.boundary}};
}

nlohmann::json unitary_to_json(const Unitary2 &u) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < 2; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < 2; ++c) {
            row.push_back({u(r, c).real(), u(r, c).imag()});
        }
        rows.push_back(row);
    }
    return rows;
}

nlohmann::json group_to_json(std::span<const CliffordElement> group) {
    nlohmann::json elements = nlohmann::json::array();
    for (const CliffordElement &e : group) {
        nlohmann::json pulses = nlohmann::json::array();
        for (const GatePulse &p : e.pulses) {
            pulses.push_back({{"axis", std::string(1, axis_name(p.axis))},
                              {"quarter_turns", p.quarter_turns},
                              {"phase", p.spec().phase()},
                              {"area", p.spec().area()}});
        }
        elements.push_back({{"index", e.index},
                            {"axis_quarter_turns",
                             {{"x", e.axis_quarter_turns[0]}, {"y", e.axis_quarter_turns[1]},
                              {"z", e.axis_quarter_turns[2]}}},
                            {"pulses", pulses},
                            {"matrix", unitary_to_json(e.canonical)},
                            {"total_quarter_turns", e.total_quarter_turns()},
                            {"total_area", e.total_area()}});
    }
    PiFraction mean = average_pulse_area_exact(group);
    return {{"elements", elements},
            {"average_area", {{"pi_numerator", mean.numerator}, {"pi_denominator", mean.denominator},
                              {"radians", mean.value()}}}};
}

nlohmann::json report_to_json(const GroupReport &report) {
    nlohmann::json closure_failures = nlohmann::json::array();
    for (const auto &[i, j] : report.closure_failures) {
        closure_failures.push_back({i, j});
    }
    return {{"size", report.size},
            {"closure_hits", report.closure_hits},
            {"closure_total", report.closure_total},
            {"pulse_matches", report.pulse_matches},
            {"axis_matches", report.axis_matches},
            {"inverses_found", report.inverses_found},
            {"closure_failures", closure_failures},
            {"missing_inverse", report.missing_inverse},
            {"pulse_failures", report.pulse_failures},
            {"axis_failures", report.axis_failures},
            {"ok", report.ok()}};
}

void write_site_csv(std::ostream &out, const SiteSelectResult &result) {
    out << "site,row,col,role,r_ratio,d_if,d,F2_or_Ext,stderr\n";
    for (const SiteResult &s : result.sites) {
        out << s.site << ',' << s.row << ',' << s.col << ',' << role_name(s.role) << ',' << format_number(s.r) << ','
            << format_number(s.fit.d_if) << ',' << format_number(s.fit.d) << ',' << format_number(s.figure()) << ','
            << format_number(s.figure_stderr()) << '\n';
    }
}

void write_scan_csv(std::ostream &out, std::span<const ScanRow> rows) {
    out << "r,gate,E_xt,spinflip\n";
    for (const ScanRow &row : rows) {
        out << format_number(row.r) << ',' << row.gate << ',' << format_number(row.e_xt) << ','
            << format_number(row.spinflip) << '\n';
    }
}

void write_histogram_csv(std::ostream &out, const LoadingResult &loading) {
    out << "occupied_count,frequency\n";
    for (std::size_t k = 0; k < loading.histogram.size(); ++k) {
        out << k << ',' << loading.histogram[k] << '\n';
    }
}

void write_file_atomic(const std::filesystem::path &path, const std::string &content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << content;
        if (!out.flush()) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace rbarray
