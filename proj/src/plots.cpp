#include "atlab/plots.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace atlab {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

void emit_line_chart(const std::vector<PlotSeries>& series, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::string& out_svg, const std::string& out_csv) {
    if (series.empty()) throw IoError("emit_line_chart: no series to plot");
    for (const PlotSeries& s : series) {
        if (s.xs.empty() || s.xs.size() != s.ys.size())
            throw IoError("emit_line_chart: series '" + s.label + "' is empty or ragged");
    }

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const PlotSeries& s : series)
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            xmin = std::min(xmin, s.xs[i]);
            xmax = std::max(xmax, s.xs[i]);
            ymin = std::min(ymin, s.ys[i]);
            ymax = std::max(ymax, s.ys[i]);
        }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    const double pad_y = 0.05 * (ymax - ymin);
    ymin -= pad_y;
    ymax += pad_y;

    const int width = 640, height = 440;
    const int ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";

    // axes
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
        << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + k * (xmax - xmin) / 4.0;
        const double yv = ymin + k * (ymax - ymin) / 4.0;
        svg << "<text x=\"" << px(xv) << "\" y=\"" << mt + ph + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << format_number(xv) << "</text>\n"
            << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << format_number(yv) << "</text>\n";
    }
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n"
        << "<text x=\"16\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " << mt + ph / 2
        << ")\">" << y_label << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const PlotSeries& s = series[si];
        const char* color = kPalette[si % 6];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < s.xs.size(); ++i)
            svg << px(s.xs[i]) << ',' << py(s.ys[i]) << ' ';
        svg << "\"/>\n";
        for (std::size_t i = 0; i < s.xs.size(); ++i)
            svg << "<circle cx=\"" << px(s.xs[i]) << "\" cy=\"" << py(s.ys[i])
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        // legend entry
        const double ly = mt + 14.0 + 18.0 * static_cast<double>(si);
        svg << "<line x1=\"" << ml + pw - 120 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw - 96
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << ml + pw - 90 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
            << s.label << "</text>\n";
    }
    svg << "</svg>\n";

    std::ostringstream csv;
    csv << "series,x,y\n";
    for (const PlotSeries& s : series)
        for (std::size_t i = 0; i < s.xs.size(); ++i)
            csv << s.label << ',' << format_number(s.xs[i]) << ',' << format_number(s.ys[i]) << '\n';

    write_file_atomic(out_svg, svg.str());
    write_file_atomic(out_csv, csv.str());
}

std::vector<PlotSeries> accuracy_vs_alpha(const std::vector<ExperimentRecord>& records) {
    std::map<std::string, std::map<double, std::pair<double, int>>> agg;
    for (const ExperimentRecord& r : records) {
        if (!r.error.empty()) continue;
        auto& [sum, n] = agg[r.optimizer_kind][r.alpha];
        sum += r.robust_test_acc;
        ++n;
    }
    std::vector<PlotSeries> series;
    for (const auto& [opt, by_alpha] : agg) {
        PlotSeries s;
        s.label = opt;
        for (const auto& [alpha, acc] : by_alpha) {
            s.xs.push_back(alpha);
            s.ys.push_back(acc.first / acc.second);
        }
        series.push_back(std::move(s));
    }
    return series;
}

}  // namespace atlab
