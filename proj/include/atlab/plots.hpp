#pragma once

#include <string>
#include <vector>

#include "atlab/sweep.hpp"
#include "atlab/vec.hpp"

namespace atlab {

struct PlotSeries {
    std::string label;
    Vec xs;
    Vec ys;
};

// Standalone SVG line chart (no external assets) plus a CSV with columns
// series,x,y carrying exactly the plotted values.
void emit_line_chart(const std::vector<PlotSeries>& series, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::string& out_svg, const std::string& out_csv);

// Mean robust test accuracy vs alpha, one series per optimizer.
std::vector<PlotSeries> accuracy_vs_alpha(const std::vector<ExperimentRecord>& records);

}  // namespace atlab
