// Copyright 2026 The noisy-vqe Authors
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

#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "noisy_vqe/experiment.hpp"
#include "noisy_vqe/optimize.hpp"

// Artifact tables. Numbers are written in the shortest form that parses back
// to the same double. Columns named by the format come first, in order; extra
// columns are appended after them.

namespace noisy_vqe::io {

class CsvError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline std::string format_number(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return {buf, res.ptr};
}

inline std::string format_number(std::uint64_t x) { return std::to_string(x); }
inline std::string format_number(int x) { return std::to_string(x); }

/// Header plus rows of raw fields; no quoting (no artifact field contains a comma).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) {
                return i;
            }
        }
        throw CsvError("missing column '" + std::string(name) + "'");
    }

    /// Number of consecutive columns prefix0, prefix1, ...
    [[nodiscard]] std::size_t count_indexed(std::string_view prefix) const {
        std::size_t k = 0;
        while (true) {
            const auto name = std::string(prefix) + std::to_string(k);
            bool found = false;
            for (const auto &h : header) {
                found = found || h == name;
            }
            if (!found) {
                return k;
            }
            ++k;
        }
    }
};

inline void write_csv(std::ostream &os, const CsvTable &t) {
    auto line = [&os](const std::vector<std::string> &fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            os << (i ? "," : "") << fields[i];
        }
        os << '\n';
    };
    line(t.header);
    for (const auto &r : t.rows) {
        line(r);
    }
}

inline CsvTable read_csv(std::istream &is) {
    CsvTable t;
    std::string line;
    auto split = [](const std::string &s) {
        std::vector<std::string> out;
        std::string field;
        std::istringstream ss(s);
        while (std::getline(ss, field, ',')) {
            out.push_back(field);
        }
        if (!s.empty() && s.back() == ',') {
            out.emplace_back();
        }
        return out;
    };
    if (!std::getline(is, line)) {
        throw CsvError("empty CSV");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    t.header = split(line);
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto fields = split(line);
        if (fields.size() != t.header.size()) {
            throw CsvError("line " + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                           " fields, got " + std::to_string(fields.size()));
        }
        t.rows.push_back(std::move(fields));
    }
    return t;
}

template <typename T>
T parse_field(const std::string &s) {
    T value{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw CsvError("bad numeric field '" + s + "'");
    }
    return value;
}

inline std::vector<std::string> indexed_names(std::string_view prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(std::string(prefix) + std::to_string(i));
    }
    return out;
}

// sweep.csv -----------------------------------------------------------------

/// intensity, repetition, final_energy, params_0..params_k, seed, best_energy.
inline CsvTable sweep_table(std::span<const SweepRow> rows) {
    const std::size_t k = rows.empty() ? 0 : rows.front().final_params.size();
    CsvTable t;
    t.header = {"intensity", "repetition", "final_energy"};
    for (auto &n : indexed_names("params_", k)) {
        t.header.push_back(std::move(n));
    }
    t.header.emplace_back("seed");
    t.header.emplace_back("best_energy");
    for (const auto &r : rows) {
        if (r.final_params.size() != k) {
            throw CsvError("sweep rows have differing parameter counts");
        }
        std::vector<std::string> f = {format_number(r.intensity), format_number(r.repetition),
                                      format_number(r.final_energy)};
        for (double x : r.final_params) {
            f.push_back(format_number(x));
        }
        f.push_back(format_number(r.seed));
        f.push_back(format_number(r.best_energy));
        t.rows.push_back(std::move(f));
    }
    return t;
}

inline std::vector<SweepRow> sweep_rows(const CsvTable &t) {
    const auto ci = t.column("intensity");
    const auto cr = t.column("repetition");
    const auto ce = t.column("final_energy");
    const auto cs = t.column("seed");
    const auto cb = t.column("best_energy");
    const auto k = t.count_indexed("params_");
    std::vector<std::size_t> cp;
    for (const auto &n : indexed_names("params_", k)) {
        cp.push_back(t.column(n));
    }
    std::vector<SweepRow> out;
    for (const auto &f : t.rows) {
        SweepRow r;
        r.intensity = parse_field<double>(f[ci]);
        r.repetition = parse_field<int>(f[cr]);
        r.final_energy = parse_field<double>(f[ce]);
        for (auto c : cp) {
            r.final_params.push_back(parse_field<double>(f[c]));
        }
        r.seed = parse_field<std::uint64_t>(f[cs]);
        r.best_energy = parse_field<double>(f[cb]);
        out.push_back(std::move(r));
    }
    return out;
}

/// Distinct intensities in increasing order.
inline std::vector<double> sweep_intensities(std::span<const SweepRow> rows) {
    std::vector<double> out;
    for (const auto &r : rows) {
        out.push_back(r.intensity);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Trace CSV -----------------------------------------------------------------

/// iteration, cumulative_evals, energy, params_0..params_k, stage.
inline CsvTable trace_table(std::span<const TraceRecord> records) {
    const std::size_t k = records.empty() ? 0 : records.front().params.size();
    CsvTable t;
    t.header = {"iteration", "cumulative_evals", "energy"};
    for (auto &n : indexed_names("params_", k)) {
        t.header.push_back(std::move(n));
    }
    t.header.emplace_back("stage");
    for (const auto &r : records) {
        if (r.params.size() != k) {
            throw CsvError("trace records have differing parameter counts");
        }
        std::vector<std::string> f = {format_number(r.iteration), format_number(r.cumulative_evals),
                                      format_number(r.energy)};
        for (double x : r.params) {
            f.push_back(format_number(x));
        }
        f.push_back(format_number(r.stage));
        t.rows.push_back(std::move(f));
    }
    return t;
}

inline std::vector<TraceRecord> trace_records(const CsvTable &t) {
    const auto ci = t.column("iteration");
    const auto cc = t.column("cumulative_evals");
    const auto ce = t.column("energy");
    const auto cs = t.column("stage");
    const auto k = t.count_indexed("params_");
    std::vector<std::size_t> cp;
    for (const auto &n : indexed_names("params_", k)) {
        cp.push_back(t.column(n));
    }
    std::vector<TraceRecord> out;
    for (const auto &f : t.rows) {
        TraceRecord r;
        r.iteration = parse_field<int>(f[ci]);
        r.cumulative_evals = parse_field<std::uint64_t>(f[cc]);
        r.energy = parse_field<double>(f[ce]);
        for (auto c : cp) {
            r.params.push_back(parse_field<double>(f[c]));
        }
        r.stage = parse_field<int>(f[cs]);
        out.push_back(std::move(r));
    }
    return out;
}

// recalc.csv ----------------------------------------------------------------

struct RecalcRow {
    double intensity = 0.0;
    int repetition = 0;
    int iteration = 0;
    double noisy_energy = 0.0;
    double recalculated_energy = 0.0;

    bool operator==(const RecalcRow &) const = default;
};

inline CsvTable recalc_table(std::span<const RecalcRow> rows) {
    CsvTable t;
    t.header = {"intensity", "repetition", "iteration", "noisy_energy", "recalculated_energy"};
    for (const auto &r : rows) {
        t.rows.push_back({format_number(r.intensity), format_number(r.repetition), format_number(r.iteration),
                          format_number(r.noisy_energy), format_number(r.recalculated_energy)});
    }
    return t;
}

inline std::vector<RecalcRow> recalc_rows(const CsvTable &t) {
    const auto ci = t.column("intensity");
    const auto cr = t.column("repetition");
    const auto ct = t.column("iteration");
    const auto cn = t.column("noisy_energy");
    const auto ce = t.column("recalculated_energy");
    std::vector<RecalcRow> out;
    for (const auto &f : t.rows) {
        out.push_back({parse_field<double>(f[ci]), parse_field<int>(f[cr]), parse_field<int>(f[ct]),
                       parse_field<double>(f[cn]), parse_field<double>(f[ce])});
    }
    return out;
}

// bakeoff.csv ---------------------------------------------------------------

struct BakeoffRow {
    OptimizerKind optimizer = OptimizerKind::NFT;
    int repetition = 0;
    double final_energy = 0.0;
    double best_energy = 0.0;
    std::uint64_t total_evals = 0;
    std::uint64_t seed = 0;

    bool operator==(const BakeoffRow &) const = default;
};

inline CsvTable bakeoff_table(std::span<const BakeoffRow> rows) {
    CsvTable t;
    t.header = {"optimizer", "repetition", "final_energy", "best_energy", "total_evals", "seed"};
    for (const auto &r : rows) {
        t.rows.push_back({std::string(optimizer_name(r.optimizer)), format_number(r.repetition),
                          format_number(r.final_energy), format_number(r.best_energy), format_number(r.total_evals),
                          format_number(r.seed)});
    }
    return t;
}

inline std::vector<BakeoffRow> bakeoff_rows(const CsvTable &t) {
    const auto co = t.column("optimizer");
    const auto cr = t.column("repetition");
    const auto cf = t.column("final_energy");
    const auto cb = t.column("best_energy");
    const auto ce = t.column("total_evals");
    const auto cs = t.column("seed");
    std::vector<BakeoffRow> out;
    for (const auto &f : t.rows) {
        BakeoffRow r;
        try {
            r.optimizer = optimizer_kind_from_name(f[co]);
        } catch (const std::invalid_argument &e) {
            throw CsvError(e.what());
        }
        r.repetition = parse_field<int>(f[cr]);
        r.final_energy = parse_field<double>(f[cf]);
        r.best_energy = parse_field<double>(f[cb]);
        r.total_evals = parse_field<std::uint64_t>(f[ce]);
        r.seed = parse_field<std::uint64_t>(f[cs]);
        out.push_back(r);
    }
    return out;
}

} // namespace noisy_vqe::io
