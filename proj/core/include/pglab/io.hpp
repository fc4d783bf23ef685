#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace pglab {

/// Doubles in emitted files use 17 significant digits so reruns are
/// byte-identical and values round-trip exactly.
std::string format_double(double x);

/// RFC-4180 field quoting (only when the field needs it).
std::string csv_field(const std::string& raw);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
void ensure_directory(const std::string& path);

/// Distribution CSV rows: state_index, value.
std::string distribution_csv(const Eigen::VectorXd& values);

struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal static SVG line chart: axes, series polylines, legend. Long series
/// are decimated to a fixed point budget with a deterministic stride.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<SvgSeries>& series);

}  // namespace pglab
