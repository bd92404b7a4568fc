#pragma once

// Standalone SVG plots. Each file embeds the plotted numbers as CSV inside
// <metadata>, so the figure doubles as its data table.

#include <string>
#include <vector>

#include "fairplay/metrics/story_metrics.hpp"

namespace fairplay::runner {

struct LineSeries {
    std::string label;
    std::vector<double> x, y;
    std::vector<double> band_low, band_high;  // optional shaded band, same length as x
    bool dashed = false;
};

// Y axis fixed to [0, 1]; x axis spans the data.
std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<LineSeries>& series);

struct BoxSeries {
    std::string label;
    metrics::WhiskerStats stats;
};

std::string box_plot_svg(const std::string& title, const std::string& y_label, const std::vector<BoxSeries>& boxes);

// Linear interpolation of (x, y) samples (x increasing) at `grid` points;
// points outside the samples take the nearest end value.
std::vector<double> interpolate(const std::vector<double>& x, const std::vector<double>& y,
                                const std::vector<double>& grid);

// `points` evenly spaced positions from 0 to 1 inclusive.
std::vector<double> unit_grid(std::size_t points);

}  // namespace fairplay::runner
