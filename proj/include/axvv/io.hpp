#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "axvv/grid.hpp"

namespace axvv {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Binary field snapshot, little-endian:
///   magic "AXVV1" (5 bytes), version u16 = 1, nr u32, nz u32,
///   R f64, zmin f64, zmax f64, t f64, then nr*nz f64 row-major (z fastest).
void write_snapshot(const ScalarField& f, double t, const std::filesystem::path& path);
std::pair<ScalarField, double> read_snapshot(const std::filesystem::path& path);

/// Shortest text rendering of a double that re-parses to the same bits,
/// capped at 17 significant digits.  Locale independent.
std::string format_float17(double v);

/// Header row then one line per data row; floats via format_float17.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Parses a CSV produced by write_csv back into doubles (header returned
/// separately).
std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(
    const std::filesystem::path& path);

enum class AxisScale { linear, log };

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct PlotLabels {
    std::string title;
    std::string x;
    std::string y;
};

/// Standalone SVG line plot with axes, ticks, markers and a legend.
/// Log axes reject nonpositive coordinates.
void emit_svg_lineplot(const std::vector<PlotSeries>& series, AxisScale xscale, AxisScale yscale,
                       const std::filesystem::path& path, const PlotLabels& labels = {});

}  // namespace axvv
