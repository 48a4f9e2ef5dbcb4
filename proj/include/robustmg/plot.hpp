// Copyright 2026 The RobustMG Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>

#include "robustmg/experiments.hpp"

namespace robustmg {

/// Minimal line-chart renderer for the sweep tables: one polyline per
/// oracle_class series plus a dashed baseline. Pure string output so the
/// emitted SVG is deterministic.
inline std::string sweep_to_svg(const SweepResult& sweep, const std::string& title,
                                const std::string& x_label) {
    constexpr double kw = 640, kh = 400, kml = 70, kmr = 20, kmt = 40, kmb = 50;
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    std::map<std::string, std::vector<std::pair<double, double>>> series;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& row : sweep.rows) {
        if (row.failed || !std::isfinite(row.value)) continue;
        series[row.oracle_class].push_back({row.x, row.value});
        xmin = std::min(xmin, row.x);
        xmax = std::max(xmax, row.x);
        ymin = std::min(ymin, row.value);
        ymax = std::max(ymax, row.value);
    }
    if (std::isfinite(sweep.baseline)) {
        ymin = std::min(ymin, sweep.baseline);
        ymax = std::max(ymax, sweep.baseline);
    }
    if (series.empty()) return "<svg xmlns=\"http://www.w3.org/2000/svg\"/>\n";
    if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const auto px = [&](double x) {
        return kml + (x - xmin) / (xmax - xmin) * (kw - kml - kmr);
    };
    const auto py = [&](double y) {
        return kh - kmb - (y - ymin) / (ymax - ymin) * (kh - kmt - kmb);
    };
    const auto num = [](double v) { return detail::format_double(v); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kw << "\" height=\""
        << kh << "\" viewBox=\"0 0 " << kw << ' ' << kh << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kw / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    svg << "<line x1=\"" << kml << "\" y1=\"" << kh - kmb << "\" x2=\"" << kw - kmr
        << "\" y2=\"" << kh - kmb << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kml << "\" y1=\"" << kmt << "\" x2=\"" << kml << "\" y2=\""
        << kh - kmb << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = xmin + (xmax - xmin) * t / 4;
        const double yv = ymin + (ymax - ymin) * t / 4;
        svg << "<text x=\"" << num(px(xv)) << "\" y=\"" << kh - kmb + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << num(xv) << "</text>\n";
        svg << "<text x=\"" << kml - 8 << "\" y=\"" << num(py(yv) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << num(yv) << "</text>\n";
    }
    svg << "<text x=\"" << kw / 2 << "\" y=\"" << kh - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << x_label << "</text>\n";

    if (std::isfinite(sweep.baseline)) {
        svg << "<line x1=\"" << kml << "\" y1=\"" << num(py(sweep.baseline)) << "\" x2=\""
            << kw - kmr << "\" y2=\"" << num(py(sweep.baseline))
            << "\" stroke=\"#555555\" stroke-dasharray=\"6 4\"/>\n"
            << "<text x=\"" << kw - kmr - 4 << "\" y=\"" << num(py(sweep.baseline) - 6)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
               "fill=\"#555555\">baseline</text>\n";
    }

    int color = 0;
    for (const auto& [label, points] : series) {
        svg << "<polyline fill=\"none\" stroke=\"" << palette[color % 4]
            << "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : points) svg << num(px(x)) << ',' << num(py(y)) << ' ';
        svg << "\"/>\n";
        svg << "<text x=\"" << kml + 10 << "\" y=\"" << kmt + 16 + 16 * color
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
            << palette[color % 4] << "\">" << label << "</text>\n";
        ++color;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace robustmg
