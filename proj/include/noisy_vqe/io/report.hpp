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
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noisy_vqe/experiment.hpp"
#include "noisy_vqe/hamiltonian.hpp"
#include "noisy_vqe/io/csv.hpp"
#include "noisy_vqe/io/svg.hpp"

namespace noisy_vqe::io {

struct Figure {
    std::string svg;
    std::string table; // aligned plain text
};

/// Right-aligned columns separated by two spaces, header underlined.
inline std::string text_table(const std::vector<std::string> &header, const std::vector<std::vector<std::string>> &rows) {
    std::vector<std::size_t> width(header.size(), 0);
    for (std::size_t i = 0; i < header.size(); ++i) {
        width[i] = header[i].size();
        for (const auto &r : rows) {
            width[i] = std::max(width[i], r[i].size());
        }
    }
    std::string out;
    auto line = [&](const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out += (i ? "  " : "") + std::string(width[i] - cells[i].size(), ' ') + cells[i];
        }
        out += '\n';
    };
    line(header);
    std::size_t total = 0;
    for (auto w : width) {
        total += w;
    }
    out += std::string(total + 2 * (width.size() - 1), '-') + '\n';
    for (const auto &r : rows) {
        line(r);
    }
    return out;
}

/// Axis and ansatz names for labels; empty when unknown.
struct RunLabels {
    std::string axis;
    std::string ansatz;
};

inline std::string intensity_label(const RunLabels &l) {
    return l.axis.empty() ? "noise intensity" : l.axis == "SHOTS" ? "shots" : "p (" + l.axis + ")";
}

inline std::string title_suffix(const RunLabels &l) { return l.ansatz.empty() ? "" : " (" + l.ansatz + ")"; }

inline std::vector<CurvePoint> curve_points(std::span<const IntensityStats> stats) {
    std::vector<CurvePoint> pts;
    for (const auto &s : stats) {
        pts.push_back({s.intensity, s.mean, s.stddev});
    }
    return pts;
}

// Noise curve -----------------------------------------------------------------

/// Mean final energy per intensity with +-1 std error bars, LINEAR and ERF fit
/// overlays (when the fit succeeds) and the exact ground energy as reference.
inline Figure render_noise_curve(std::span<const SweepRow> rows, const RunLabels &labels = {}) {
    const auto intensities = sweep_intensities(rows);
    const auto stats = compute_stats(rows, intensities);
    const auto pts = curve_points(stats);
    std::vector<FitResult> fits;
    std::vector<std::string> fit_notes;
    for (auto model : {FitModel::LINEAR, FitModel::ERF}) {
        try {
            fits.push_back(fit_noise_curve(pts, model));
        } catch (const FitError &e) {
            fit_notes.push_back(std::string(fit_model_name(model)) + ": " + e.what());
        }
    }

    double lo = kH2GroundEnergy;
    double hi = kH2GroundEnergy;
    for (const auto &p : pts) {
        lo = std::min(lo, p.mean - p.stddev);
        hi = std::max(hi, p.mean + p.stddev);
    }
    const auto xr = svg::padded_range(intensities.front(), intensities.back());
    svg::Canvas canvas(720, 480);
    svg::Axes ax(canvas, 90, 40, 580, 370, xr, svg::padded_range(lo, hi));
    ax.frame("Final energy vs noise intensity" + title_suffix(labels), intensity_label(labels), "energy [Ha]");
    ax.hline(kH2GroundEnergy, "#555555");
    std::vector<std::pair<std::string, std::string>> legend{{"mean +- std", svg::kPalette[0]},
                                                            {"exact ground energy", "#555555"}};
    for (std::size_t f = 0; f < fits.size(); ++f) {
        std::vector<std::pair<double, double>> curve;
        constexpr int kSamples = 200;
        for (int i = 0; i <= kSamples; ++i) {
            const double p = intensities.front() + (intensities.back() - intensities.front()) * i / kSamples;
            curve.emplace_back(p, fits[f](p));
        }
        const auto color = svg::kPalette[f + 1];
        ax.polyline(curve, color, 1.5, fits[f].model == FitModel::ERF ? "6,3" : "");
        legend.emplace_back(std::string(fit_model_name(fits[f].model)) + " fit, R2 " + svg::fixed(fits[f].r_squared, 4),
                            color);
    }
    for (const auto &p : pts) {
        ax.error_bar(p.intensity, p.mean, p.stddev, svg::kPalette[0]);
    }
    ax.legend(legend);

    std::vector<std::vector<std::string>> cells;
    for (const auto &s : stats) {
        std::vector<std::string> r{format_number(s.intensity), std::to_string(s.n), svg::fixed(s.mean, 6),
                                   svg::fixed(s.stddev, 6), svg::fixed(100.0 * (s.mean - kH2GroundEnergy) / std::abs(kH2GroundEnergy), 2)};
        for (const auto &f : fits) {
            r.push_back(svg::fixed(f(s.intensity), 6));
        }
        cells.push_back(std::move(r));
    }
    std::vector<std::string> header{"intensity", "n", "mean", "std", "shift_%"};
    for (const auto &f : fits) {
        header.push_back(std::string(fit_model_name(f.model)) + "_fit");
    }
    std::string table = text_table(header, cells) + "\n";
    for (const auto &f : fits) {
        table += std::string(fit_model_name(f.model)) + ": coefficients";
        for (double c : f.coefficients) {
            table += " " + format_number(c);
        }
        table += ", RSS " + format_number(f.residual_sum_squares) + ", R2 " + format_number(f.r_squared) + "\n";
    }
    for (const auto &n : fit_notes) {
        table += n + "\n";
    }
    return {canvas.str(), table};
}

// Heatmap ---------------------------------------------------------------------

/// Repetition counts per (intensity, 0.01 Ha energy bin), one column per intensity.
inline Figure render_heatmap(std::span<const SweepRow> rows, const RunLabels &labels = {}) {
    const auto intensities = sweep_intensities(rows);
    const auto stats = compute_stats(rows, intensities);
    const auto n_bins = static_cast<int>(std::llround((kHistogramHigh - kHistogramLow) / kHistogramBinWidth));
    auto bin_of = [](double lower) { return static_cast<int>(std::llround((lower - kHistogramLow) / kHistogramBinWidth)); };
    int b_lo = n_bins;
    int b_hi = -1;
    std::uint64_t max_count = 1;
    for (const auto &s : stats) {
        for (const auto &b : s.histogram) {
            b_lo = std::min(b_lo, bin_of(b.lower));
            b_hi = std::max(b_hi, bin_of(b.lower));
            max_count = std::max(max_count, b.count);
        }
    }
    if (b_hi < 0) {
        b_lo = 0;
        b_hi = n_bins - 1;
    }
    const double e_lo = kHistogramLow + kHistogramBinWidth * b_lo;
    const double e_hi = kHistogramLow + kHistogramBinWidth * (b_hi + 1);

    svg::Canvas canvas(720, 480);
    const auto n_cols = static_cast<double>(intensities.size());
    svg::Axes ax(canvas, 90, 40, 580, 370, {0.0, n_cols}, {e_lo, e_hi});
    for (std::size_t i = 0; i < stats.size(); ++i) {
        for (const auto &b : stats[i].histogram) {
            const double x0 = ax.x(static_cast<double>(i));
            const double x1 = ax.x(static_cast<double>(i + 1));
            const double y1 = ax.y(b.lower);
            const double y0 = ax.y(b.lower + kHistogramBinWidth);
            canvas.rect(x0, y0, x1 - x0, y1 - y0, svg::heat_color(static_cast<double>(b.count) / max_count));
        }
    }
    // Frame with categorical x labels.
    canvas.rect(ax.left(), ax.top(), ax.width(), ax.height(), "none", "black");
    for (std::size_t i = 0; i < intensities.size(); ++i) {
        canvas.text(ax.x(i + 0.5), ax.top() + ax.height() + 18, format_number(intensities[i]), "middle", 11);
    }
    const auto yt = svg::nice_ticks(e_lo, e_hi);
    for (double t : yt) {
        canvas.line(ax.left() - 5, ax.y(t), ax.left(), ax.y(t), "black");
        canvas.text(ax.left() - 8, ax.y(t) + 4, svg::fixed(t, svg::tick_decimals(yt)), "end", 11);
    }
    canvas.text(ax.left() + ax.width() / 2, ax.top() - 10, "Final energy distribution" + title_suffix(labels), "middle", 14);
    canvas.text(ax.left() + ax.width() / 2, ax.top() + ax.height() + 38, intensity_label(labels), "middle", 12);
    canvas.text(ax.left() - 55, ax.top() + ax.height() / 2, "energy [Ha]", "middle", 12, -90);
    ax.hline(kH2GroundEnergy, "#d62728");
    canvas.text(ax.left() + ax.width() + 5, ax.top() + 12, "max " + std::to_string(max_count), "start", 10);

    std::vector<std::string> header{"bin_lower"};
    for (double p : intensities) {
        header.push_back(format_number(p));
    }
    std::vector<std::vector<std::string>> cells;
    for (int b = b_hi; b >= b_lo; --b) {
        const double lower = kHistogramLow + kHistogramBinWidth * b;
        std::vector<std::string> r{svg::fixed(lower, 2)};
        for (const auto &s : stats) {
            std::uint64_t count = 0;
            for (const auto &hb : s.histogram) {
                count += bin_of(hb.lower) == b ? hb.count : 0;
            }
            r.push_back(std::to_string(count));
        }
        cells.push_back(std::move(r));
    }
    std::vector<std::string> under{"underflow"};
    std::vector<std::string> over{"overflow"};
    for (const auto &s : stats) {
        under.push_back(std::to_string(s.underflow));
        over.push_back(std::to_string(s.overflow));
    }
    cells.push_back(std::move(under));
    cells.push_back(std::move(over));
    return {canvas.str(), text_table(header, cells)};
}

// Histogram -------------------------------------------------------------------

/// One panel per intensity, bars of 0.01 Ha width over a shared energy range.
inline Figure render_histogram(std::span<const SweepRow> rows, const RunLabels &labels = {}) {
    const auto intensities = sweep_intensities(rows);
    const auto stats = compute_stats(rows, intensities);
    double e_lo = kHistogramHigh;
    double e_hi = kHistogramLow;
    std::uint64_t max_count = 1;
    for (const auto &s : stats) {
        for (const auto &b : s.histogram) {
            e_lo = std::min(e_lo, b.lower);
            e_hi = std::max(e_hi, b.lower + kHistogramBinWidth);
            max_count = std::max(max_count, b.count);
        }
    }
    if (e_hi <= e_lo) {
        e_lo = kHistogramLow;
        e_hi = kHistogramHigh;
    }
    const int cols = std::min<int>(4, static_cast<int>(intensities.size()));
    const int n_rows = (static_cast<int>(intensities.size()) + cols - 1) / cols;
    constexpr double kPanelW = 220;
    constexpr double kPanelH = 170;
    constexpr double kGap = 80;
    svg::Canvas canvas(20 + cols * (kPanelW + kGap), 50 + n_rows * (kPanelH + 60));
    canvas.text((20 + cols * (kPanelW + kGap)) / 2.0, 22, "Final energy histograms" + title_suffix(labels), "middle", 14);
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const int c = static_cast<int>(i) % cols;
        const int r = static_cast<int>(i) / cols;
        svg::Axes ax(canvas, 80 + c * (kPanelW + kGap), 60 + r * (kPanelH + 60), kPanelW, kPanelH, {e_lo, e_hi},
                     {0.0, static_cast<double>(max_count)});
        for (const auto &b : stats[i].histogram) {
            const double x0 = ax.x(b.lower);
            const double x1 = ax.x(b.lower + kHistogramBinWidth);
            canvas.rect(x0, ax.y(static_cast<double>(b.count)), x1 - x0,
                        ax.y(0.0) - ax.y(static_cast<double>(b.count)), svg::kPalette[0]);
        }
        ax.frame(intensity_label(labels) + " = " + format_number(intensities[i]), "energy [Ha]", "count");
    }
    std::vector<std::vector<std::string>> cells;
    for (const auto &s : stats) {
        for (const auto &b : s.histogram) {
            cells.push_back({format_number(s.intensity), svg::fixed(b.lower, 2), std::to_string(b.count)});
        }
    }
    return {canvas.str(), text_table({"intensity", "bin_lower", "count"}, cells)};
}

// Traces ----------------------------------------------------------------------

namespace detail {

using Series = std::map<int, std::vector<std::pair<double, double>>>;

inline void draw_series(svg::Axes &ax, const Series &series) {
    std::size_t k = 0;
    for (const auto &[rep, pts] : series) {
        ax.polyline(pts, svg::kPalette[k++ % svg::kPalette.size()], 1.0);
    }
}

} // namespace detail

/// Two panels for the highest intensity in the file: noisy energies the
/// optimizer saw (top) and noiseless recalculated energies (bottom), one line
/// per repetition.
inline Figure render_recalc_trace(std::span<const RecalcRow> rows, const RunLabels &labels = {}) {
    double p_max = rows.front().intensity;
    for (const auto &r : rows) {
        p_max = std::max(p_max, r.intensity);
    }
    detail::Series noisy;
    detail::Series exact;
    double it_max = 1;
    double lo = kH2GroundEnergy;
    double hi = kH2GroundEnergy;
    for (const auto &r : rows) {
        if (r.intensity != p_max) {
            continue;
        }
        noisy[r.repetition].emplace_back(r.iteration, r.noisy_energy);
        exact[r.repetition].emplace_back(r.iteration, r.recalculated_energy);
        it_max = std::max(it_max, static_cast<double>(r.iteration));
        lo = std::min({lo, r.noisy_energy, r.recalculated_energy});
        hi = std::max({hi, r.noisy_energy, r.recalculated_energy});
    }
    svg::Canvas canvas(720, 760);
    const auto yr = svg::padded_range(lo, hi);
    svg::Axes top(canvas, 90, 40, 580, 290, {0.0, it_max}, yr);
    top.frame("Noisy energy, " + intensity_label(labels) + " = " + format_number(p_max) + title_suffix(labels),
              "iteration", "energy [Ha]");
    detail::draw_series(top, noisy);
    top.hline(kH2GroundEnergy, "#555555");
    svg::Axes bottom(canvas, 90, 420, 580, 290, {0.0, it_max}, yr);
    bottom.frame("Recalculated noiseless energy", "iteration", "energy [Ha]");
    detail::draw_series(bottom, exact);
    bottom.hline(kH2GroundEnergy, "#555555");
    bottom.hline(kH2GroundEnergy + kChemicalAccuracy, "#2ca02c", "2,2");

    std::vector<std::vector<std::string>> cells;
    std::map<double, std::pair<int, int>> within; // intensity -> (hits, total)
    std::map<std::pair<double, int>, RecalcRow> last;
    for (const auto &r : rows) {
        last[{r.intensity, r.repetition}] = r;
    }
    for (const auto &[key, r] : last) {
        const double gap = r.recalculated_energy - kH2GroundEnergy;
        const bool ok = gap <= kChemicalAccuracy;
        within[key.first].first += ok ? 1 : 0;
        within[key.first].second += 1;
        cells.push_back({format_number(key.first), std::to_string(key.second), std::to_string(r.iteration),
                         svg::fixed(r.noisy_energy, 6), svg::fixed(r.recalculated_energy, 6), svg::fixed(gap, 6),
                         ok ? "yes" : "no"});
    }
    std::string table = text_table({"intensity", "repetition", "iteration", "noisy", "recalculated", "gap", "chem_acc"}, cells);
    table += "\n";
    std::vector<std::vector<std::string>> summary;
    for (const auto &[p, c] : within) {
        summary.push_back({format_number(p), std::to_string(c.first), std::to_string(c.second),
                           svg::fixed(100.0 * c.first / c.second, 1)});
    }
    table += text_table({"intensity", "within_chem_acc", "repetitions", "percent"}, summary);
    return {canvas.str(), table};
}

/// Single optimization trace: energy per iteration.
inline Figure render_single_trace(std::span<const TraceRecord> records, const RunLabels &labels = {}) {
    double lo = kH2GroundEnergy;
    double hi = kH2GroundEnergy;
    double it_max = 1;
    std::vector<std::pair<double, double>> pts;
    std::vector<std::vector<std::string>> cells;
    for (const auto &r : records) {
        pts.emplace_back(r.iteration, r.energy);
        lo = std::min(lo, r.energy);
        hi = std::max(hi, r.energy);
        it_max = std::max(it_max, static_cast<double>(r.iteration));
        cells.push_back({std::to_string(r.iteration), std::to_string(r.cumulative_evals), svg::fixed(r.energy, 8)});
    }
    svg::Canvas canvas(720, 480);
    svg::Axes ax(canvas, 90, 40, 580, 370, {0.0, it_max}, svg::padded_range(lo, hi));
    ax.frame("Energy per iteration" + title_suffix(labels), "iteration", "energy [Ha]");
    ax.polyline(pts, svg::kPalette[0]);
    ax.hline(kH2GroundEnergy, "#555555");
    return {canvas.str(), text_table({"iteration", "evals", "energy"}, cells)};
}

} // namespace noisy_vqe::io
