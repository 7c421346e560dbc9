#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qwl {

// One plotted curve; sd, when present, draws vertical error bars.
struct PlotSeries {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> sd;
};

// Hand-emitted standalone SVG line chart, 800x600 with margins, axes, ticks,
// and a legend. Points with non-finite y are skipped.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series);

}  // namespace qwl
