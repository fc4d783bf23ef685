#include "pglab/io.hpp"

#include "pglab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace pglab {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\n\r") == std::string::npos) return raw;
    std::string quoted = "\"";
    for (char c : raw) {
        quoted += c;
        if (c == '"') quoted += '"';
    }
    quoted += '"';
    return quoted;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read file: " + path);
    std::ostringstream oss;
    oss << in.rdbuf();
    return oss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << content;
}

void ensure_directory(const std::string& path) { std::filesystem::create_directories(path); }

std::string distribution_csv(const Eigen::VectorXd& values) {
    std::ostringstream oss;
    oss << "state_index,value\n";
    for (Eigen::Index s = 0; s < values.size(); ++s)
        oss << s << ',' << format_double(values(s)) << '\n';
    return oss.str();
}

namespace {

struct AxisTicks {
    double lo = 0.0, hi = 1.0;
    std::vector<double> ticks;
};

AxisTicks nice_axis(double lo, double hi) {
    if (!(hi > lo)) hi = lo + 1.0;
    AxisTicks axis;
    axis.lo = lo;
    axis.hi = hi;
    for (int i = 0; i <= 4; ++i) axis.ticks.push_back(lo + (hi - lo) * i / 4.0);
    return axis;
}

std::string short_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", x);
    return buf;
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<SvgSeries>& series) {
    constexpr int kWidth = 640, kHeight = 420;
    constexpr int kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
    constexpr std::size_t kMaxPoints = 2000;

    double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    bool any = false;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (!any) {
                x_lo = x_hi = s.x[i];
                y_lo = y_hi = s.y[i];
                any = true;
            }
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    const AxisTicks xa = nice_axis(x_lo, x_hi);
    const AxisTicks ya = nice_axis(y_lo, y_hi);
    auto px = [&](double x) {
        return kLeft + (x - xa.lo) / (xa.hi - xa.lo) * (kWidth - kLeft - kRight);
    };
    auto py = [&](double y) {
        return kHeight - kBottom - (y - ya.lo) / (ya.hi - ya.lo) * (kHeight - kTop - kBottom);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
    // axes
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
        << kWidth - kRight << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    for (double t : xa.ticks) {
        svg << "<line x1=\"" << px(t) << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << px(t)
            << "\" y2=\"" << kHeight - kBottom + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << px(t) << "\" y=\"" << kHeight - kBottom + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << short_num(t) << "</text>\n";
    }
    for (double t : ya.ticks) {
        svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(t) << "\" x2=\"" << kLeft
            << "\" y2=\"" << py(t) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(t) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << short_num(t) << "</text>\n";
    }
    svg << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
        << "</text>\n";
    svg << "<text x=\"16\" y=\"" << (kTop + kHeight - kBottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 16 " << (kTop + kHeight - kBottom) / 2 << ")\">" << y_label
        << "</text>\n";

    int legend_row = 0;
    for (const auto& s : series) {
        const std::size_t n = s.x.size();
        const std::size_t stride = n > kMaxPoints ? (n + kMaxPoints - 1) / kMaxPoints : 1;
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < n; i += stride)
            svg << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        if (n > 0 && (n - 1) % stride != 0) svg << px(s.x[n - 1]) << ',' << py(s.y[n - 1]);
        svg << "\"/>\n";
        const int ly = kTop + 8 + 18 * legend_row++;
        svg << "<line x1=\"" << kWidth - kRight - 150 << "\" y1=\"" << ly << "\" x2=\""
            << kWidth - kRight - 120 << "\" y2=\"" << ly << "\" stroke=\"" << s.color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << kWidth - kRight - 114 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace pglab
