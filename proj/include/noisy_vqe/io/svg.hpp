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
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

// Minimal SVG writer: rectangles, lines, polylines, text. All coordinates are
// printed with two decimals so output is byte-stable across runs.

namespace noisy_vqe::io::svg {

inline std::string fixed(double x, int decimals = 2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
    std::string s = buf;
    if (s == "-0.00" || s == "-0.0" || s == "-0") {
        s.erase(0, 1);
    }
    return s;
}

inline std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

inline constexpr std::array<const char *, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                      "#9467bd", "#8c564b", "#e377c2", "#17becf"};

class Canvas {
  public:
    Canvas(double width, double height) : width_(width), height_(height) {}

    void rect(double x, double y, double w, double h, const std::string &fill, const std::string &stroke = "none") {
        body_ += "<rect x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\" width=\"" + fixed(w) + "\" height=\"" + fixed(h) +
                 "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
    }

    void line(double x1, double y1, double x2, double y2, const std::string &stroke, double width = 1.0,
              const std::string &dash = "") {
        body_ += "<line x1=\"" + fixed(x1) + "\" y1=\"" + fixed(y1) + "\" x2=\"" + fixed(x2) + "\" y2=\"" + fixed(y2) +
                 "\" stroke=\"" + stroke + "\" stroke-width=\"" + fixed(width) + "\"" +
                 (dash.empty() ? "" : " stroke-dasharray=\"" + dash + "\"") + "/>\n";
    }

    void polyline(const std::vector<std::pair<double, double>> &pts, const std::string &stroke, double width = 1.0,
                  const std::string &dash = "") {
        if (pts.empty()) {
            return;
        }
        body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + fixed(width) + "\"" +
                 (dash.empty() ? "" : " stroke-dasharray=\"" + dash + "\"") + " points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            body_ += (i ? " " : "") + fixed(pts[i].first) + "," + fixed(pts[i].second);
        }
        body_ += "\"/>\n";
    }

    void circle(double cx, double cy, double r, const std::string &fill) {
        body_ += "<circle cx=\"" + fixed(cx) + "\" cy=\"" + fixed(cy) + "\" r=\"" + fixed(r) + "\" fill=\"" + fill +
                 "\"/>\n";
    }

    /// anchor: start, middle or end.
    void text(double x, double y, const std::string &s, const std::string &anchor = "start", double size = 12,
              double rotate = 0) {
        body_ += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\" font-family=\"sans-serif\" font-size=\"" +
                 fixed(size) + "\" text-anchor=\"" + anchor + "\"";
        if (rotate != 0) {
            body_ += " transform=\"rotate(" + fixed(rotate) + " " + fixed(x) + " " + fixed(y) + ")\"";
        }
        body_ += ">" + escape(s) + "</text>\n";
    }

    [[nodiscard]] std::string str() const {
        return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
               fixed(width_, 0) + "\" height=\"" + fixed(height_, 0) + "\" viewBox=\"0 0 " + fixed(width_, 0) + " " +
               fixed(height_, 0) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ + "</svg>\n";
    }

  private:
    double width_;
    double height_;
    std::string body_;
};

/// Tick positions at 1, 2 or 5 times a power of ten, about `target` of them.
inline std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
    if (!(hi > lo)) {
        return {lo};
    }
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    }
    std::vector<double> out;
    for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * step; t += step) {
        out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    }
    return out;
}

inline int tick_decimals(const std::vector<double> &ticks) {
    if (ticks.size() < 2) {
        return 2;
    }
    const double step = ticks[1] - ticks[0];
    return std::clamp(static_cast<int>(-std::floor(std::log10(step) + 1e-9)), 0, 6);
}

/// Data ranges padded by 5% (or +-0.5 when flat).
inline std::pair<double, double> padded_range(double lo, double hi) {
    if (!(hi > lo)) {
        return {lo - 0.5, hi + 0.5};
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

/// Plot area with linear data-to-pixel maps.
class Axes {
  public:
    Axes(Canvas &canvas, double left, double top, double width, double height, std::pair<double, double> xr,
         std::pair<double, double> yr)
        : c_(&canvas), left_(left), top_(top), w_(width), h_(height), xr_(xr), yr_(yr) {}

    [[nodiscard]] double x(double v) const { return left_ + (v - xr_.first) / (xr_.second - xr_.first) * w_; }
    [[nodiscard]] double y(double v) const { return top_ + h_ - (v - yr_.first) / (yr_.second - yr_.first) * h_; }
    [[nodiscard]] double left() const { return left_; }
    [[nodiscard]] double top() const { return top_; }
    [[nodiscard]] double width() const { return w_; }
    [[nodiscard]] double height() const { return h_; }
    [[nodiscard]] std::pair<double, double> x_range() const { return xr_; }
    [[nodiscard]] std::pair<double, double> y_range() const { return yr_; }

    void frame(const std::string &title, const std::string &xlabel, const std::string &ylabel) {
        c_->rect(left_, top_, w_, h_, "none", "black");
        const auto xt = nice_ticks(xr_.first, xr_.second);
        const int xd = tick_decimals(xt);
        for (double t : xt) {
            c_->line(x(t), top_ + h_, x(t), top_ + h_ + 5, "black");
            c_->text(x(t), top_ + h_ + 18, fixed(t, xd), "middle", 11);
        }
        const auto yt = nice_ticks(yr_.first, yr_.second);
        const int yd = tick_decimals(yt);
        for (double t : yt) {
            c_->line(left_ - 5, y(t), left_, y(t), "black");
            c_->line(left_, y(t), left_ + w_, y(t), "#e0e0e0", 0.5);
            c_->text(left_ - 8, y(t) + 4, fixed(t, yd), "end", 11);
        }
        c_->text(left_ + w_ / 2, top_ - 10, title, "middle", 14);
        c_->text(left_ + w_ / 2, top_ + h_ + 38, xlabel, "middle", 12);
        c_->text(left_ - 55, top_ + h_ / 2, ylabel, "middle", 12, -90);
    }

    void polyline(const std::vector<std::pair<double, double>> &data, const std::string &stroke, double width = 1.5,
                  const std::string &dash = "") {
        std::vector<std::pair<double, double>> px;
        px.reserve(data.size());
        for (const auto &[a, b] : data) {
            px.emplace_back(x(a), y(std::clamp(b, yr_.first, yr_.second)));
        }
        c_->polyline(px, stroke, width, dash);
    }

    void error_bar(double xv, double yv, double err, const std::string &stroke) {
        const double lo = std::clamp(yv - err, yr_.first, yr_.second);
        const double hi = std::clamp(yv + err, yr_.first, yr_.second);
        c_->line(x(xv), y(lo), x(xv), y(hi), stroke);
        c_->line(x(xv) - 4, y(lo), x(xv) + 4, y(lo), stroke);
        c_->line(x(xv) - 4, y(hi), x(xv) + 4, y(hi), stroke);
        c_->circle(x(xv), y(yv), 3, stroke);
    }

    void hline(double yv, const std::string &stroke, const std::string &dash = "4,3") {
        if (yv >= yr_.first && yv <= yr_.second) {
            c_->line(left_, y(yv), left_ + w_, y(yv), stroke, 1.0, dash);
        }
    }

    /// Legend entries stacked in the top-right corner.
    void legend(const std::vector<std::pair<std::string, std::string>> &entries) {
        double yy = top_ + 16;
        for (const auto &[label, color] : entries) {
            c_->line(left_ + w_ - 150, yy - 4, left_ + w_ - 130, yy - 4, color, 2.0);
            c_->text(left_ + w_ - 125, yy, label, "start", 11);
            yy += 16;
        }
    }

  private:
    Canvas *c_;
    double left_;
    double top_;
    double w_;
    double h_;
    std::pair<double, double> xr_;
    std::pair<double, double> yr_;
};

/// White-to-blue ramp for t in [0, 1].
inline std::string heat_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const auto ch = [t](double from, double to) { return static_cast<int>(std::lround(from + (to - from) * t)); };
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", ch(255, 8), ch(255, 48), ch(255, 107));
    return buf;
}

} // namespace noisy_vqe::io::svg
