#include "axvv/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace axvv {

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

namespace {

constexpr char kMagic[5] = {'A', 'X', 'V', 'V', '1'};
constexpr std::uint16_t kVersion = 1;

template <class T>
void put(std::string& buf, T v) {
    char tmp[sizeof(T)];
    std::memcpy(tmp, &v, sizeof(T));
    buf.append(tmp, sizeof(T));
}

template <class T>
T take(const std::string& buf, std::size_t& off) {
    T v;
    std::memcpy(&v, buf.data() + off, sizeof(T));
    off += sizeof(T);
    return v;
}

}  // namespace

void write_snapshot(const ScalarField& f, double t, const std::filesystem::path& path) {
    const Grid& g = f.grid();
    std::string buf;
    buf.reserve(43 + f.data().size() * 8);
    buf.append(kMagic, 5);
    put<std::uint16_t>(buf, kVersion);
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.nr));
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.nz));
    put<double>(buf, g.R);
    put<double>(buf, g.zmin);
    put<double>(buf, g.zmax);
    put<double>(buf, t);
    for (double v : f.data()) put<double>(buf, v);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("write_snapshot: cannot open " + path.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("write_snapshot: write failed for " + path.string());
}

std::pair<ScalarField, double> read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_snapshot: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string buf = ss.str();

    constexpr std::size_t header = 5 + 2 + 4 + 4 + 4 * 8;
    if (buf.size() < header) throw IoError("read_snapshot: truncated payload");
    if (std::memcmp(buf.data(), kMagic, 5) != 0) throw IoError("read_snapshot: bad magic");
    std::size_t off = 5;
    auto version = take<std::uint16_t>(buf, off);
    if (version != kVersion) throw IoError("read_snapshot: unsupported format version");
    auto nr = take<std::uint32_t>(buf, off);
    auto nz = take<std::uint32_t>(buf, off);
    double R = take<double>(buf, off);
    double zmin = take<double>(buf, off);
    double zmax = take<double>(buf, off);
    double t = take<double>(buf, off);
    if (nr < 4 || nz < 4 || nr > (1u << 20) || nz > (1u << 20) || !(R > 0.0) || !(zmax > zmin) ||
        !std::isfinite(R) || !std::isfinite(zmin) || !std::isfinite(zmax) || !std::isfinite(t))
        throw IoError("read_snapshot: corrupt header");
    std::size_t count = static_cast<std::size_t>(nr) * nz;
    if (buf.size() < header + count * 8) throw IoError("read_snapshot: truncated payload");

    Grid g = make_grid(static_cast<int>(nr), static_cast<int>(nz), R, zmin, zmax);
    ScalarField f(g);
    auto dst = f.data();
    for (std::size_t k = 0; k < count; ++k) {
        dst[k] = take<double>(buf, off);
        if (!std::isfinite(dst[k])) throw IoError("read_snapshot: non-finite payload");
    }
    return {std::move(f), t};
}

std::string format_float17(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("write_csv: cannot open " + path.string());
    for (std::size_t k = 0; k < header.size(); ++k)
        out << (k ? "," : "") << header[k];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k)
            out << (k ? "," : "") << format_float17(row[k]);
        out << "\n";
    }
    if (!out) throw IoError("write_csv: write failed for " + path.string());
}

std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_csv: cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError("read_csv: empty file");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc())
                throw IoError("read_csv: bad number '" + cell + "' in " + path.string());
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    return {std::move(header), std::move(rows)};
}

// --- SVG line plots ---

namespace {

struct AxisMap {
    AxisScale scale;
    double lo = 0.0, hi = 1.0;  // transformed range
    double px0 = 0.0, px1 = 1.0;
    bool flip = false;

    double tx(double v) const { return scale == AxisScale::log ? std::log10(v) : v; }
    double to_px(double v) const {
        double t = (tx(v) - lo) / (hi - lo);
        if (flip) t = 1.0 - t;
        return px0 + t * (px1 - px0);
    }
};

std::string fmt_px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::vector<double> linear_ticks(double lo, double hi) {
    double span = hi - lo;
    if (!(span > 0.0)) return {lo};
    double raw = span / 5.0;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double norm = raw / mag;
    double step = (norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0) * mag;
    std::vector<double> ticks;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step)
        ticks.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    return ticks;
}

std::vector<double> log_ticks(double lo10, double hi10) {
    std::vector<double> ticks;
    for (double d = std::ceil(lo10 - 1e-9); d <= hi10 + 1e-9; d += 1.0)
        ticks.push_back(std::pow(10.0, d));
    if (ticks.empty()) {
        ticks.push_back(std::pow(10.0, lo10));
        ticks.push_back(std::pow(10.0, hi10));
    }
    return ticks;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

void emit_svg_lineplot(const std::vector<PlotSeries>& series, AxisScale xscale, AxisScale yscale,
                       const std::filesystem::path& path, const PlotLabels& labels) {
    constexpr double W = 800, H = 560, ML = 78, MR = 170, MT = 42, MB = 58;

    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool any = false;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (xscale == AxisScale::log && !(x > 0.0))
                throw IoError("emit_svg_lineplot: log x-axis requires positive values");
            if (yscale == AxisScale::log && !(y > 0.0))
                throw IoError("emit_svg_lineplot: log y-axis requires positive values");
            if (!any) {
                xmin = xmax = x;
                ymin = ymax = y;
                any = true;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
    if (!any) {
        if (xscale == AxisScale::log) { xmin = 1.0; xmax = 10.0; }
        if (yscale == AxisScale::log) { ymin = 1.0; ymax = 10.0; }
    }

    AxisMap X{xscale, 0, 1, ML, W - MR, false};
    AxisMap Y{yscale, 0, 1, H - MB, MT, false};
    auto pad_range = [](AxisMap& a, double vmin, double vmax) {
        double lo = a.tx(vmin), hi = a.tx(vmax);
        if (hi - lo < 1e-12) {
            lo -= a.scale == AxisScale::log ? 0.5 : std::max(1.0, std::abs(lo) * 0.1);
            hi += a.scale == AxisScale::log ? 0.5 : std::max(1.0, std::abs(hi) * 0.1);
        } else {
            double pad = 0.05 * (hi - lo);
            lo -= pad;
            hi += pad;
        }
        a.lo = lo;
        a.hi = hi;
    };
    pad_range(X, xmin, xmax);
    pad_range(Y, ymin, ymax);

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";

    // frame
    svg << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << (W - ML - MR)
        << "\" height=\"" << (H - MT - MB)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

    auto xticks = xscale == AxisScale::log ? log_ticks(X.lo, X.hi)
                                            : linear_ticks(X.lo, X.hi);
    for (double v : xticks) {
        double px = X.to_px(v);
        if (px < ML - 0.5 || px > W - MR + 0.5) continue;
        svg << "<line x1=\"" << fmt_px(px) << "\" y1=\"" << (H - MB) << "\" x2=\"" << fmt_px(px)
            << "\" y2=\"" << (H - MB + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt_px(px) << "\" y=\"" << (H - MB + 20)
            << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt_tick(v) << "</text>\n";
    }
    auto yticks = yscale == AxisScale::log ? log_ticks(Y.lo, Y.hi)
                                            : linear_ticks(Y.lo, Y.hi);
    for (double v : yticks) {
        double py = Y.to_px(v);
        if (py < MT - 0.5 || py > H - MB + 0.5) continue;
        svg << "<line x1=\"" << (ML - 5) << "\" y1=\"" << fmt_px(py) << "\" x2=\"" << ML
            << "\" y2=\"" << fmt_px(py) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << (ML - 8) << "\" y=\"" << fmt_px(py + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << fmt_tick(v) << "</text>\n";
    }

    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        const auto& pts = series[si].points;
        if (pts.size() >= 2) {
            svg << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [x, y] : pts)
                svg << fmt_px(X.to_px(x)) << "," << fmt_px(Y.to_px(y)) << " ";
            svg << "\"/>\n";
        }
        for (const auto& [x, y] : pts)
            svg << "<circle cx=\"" << fmt_px(X.to_px(x)) << "\" cy=\"" << fmt_px(Y.to_px(y))
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        // legend entry
        double ly = MT + 16 + 18 * static_cast<double>(si);
        svg << "<line x1=\"" << (W - MR + 12) << "\" y1=\"" << fmt_px(ly - 4) << "\" x2=\""
            << (W - MR + 34) << "\" y2=\"" << fmt_px(ly - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << (W - MR + 40) << "\" y=\"" << fmt_px(ly)
            << "\" font-size=\"12\">" << series[si].label << "</text>\n";
    }

    if (!labels.title.empty())
        svg << "<text x=\"" << (ML + (W - ML - MR) / 2) << "\" y=\"" << (MT - 14)
            << "\" font-size=\"15\" text-anchor=\"middle\">" << labels.title << "</text>\n";
    if (!labels.x.empty())
        svg << "<text x=\"" << (ML + (W - ML - MR) / 2) << "\" y=\"" << (H - 14)
            << "\" font-size=\"13\" text-anchor=\"middle\">" << labels.x << "</text>\n";
    if (!labels.y.empty())
        svg << "<text x=\"20\" y=\"" << (MT + (H - MT - MB) / 2)
            << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
            << (MT + (H - MT - MB) / 2) << ")\">" << labels.y << "</text>\n";

    svg << "</svg>\n";

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("emit_svg_lineplot: cannot open " + path.string());
    out << svg.str();
    if (!out) throw IoError("emit_svg_lineplot: write failed for " + path.string());
}

}  // namespace axvv
