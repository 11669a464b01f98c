// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace life {

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

// Long format: series_label,x,y. No series -> header only.
std::string plotdata_csv(const std::vector<PlotSeries>& series);
void emit_plotdata(const std::vector<PlotSeries>& series, const std::string& path);

// Exit codes: 0 ok, 1 internal error (or a failing acceptance run), 2 bad input.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace life
