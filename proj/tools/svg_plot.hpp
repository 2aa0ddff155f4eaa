#pragma once

#include <string>
#include <vector>

namespace peakonlab::cli {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

// Static line chart; non-finite points break the polyline.
std::string svg_line_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                           const std::vector<Series>& series);
void write_svg_line_chart(const std::string& path, const std::string& title, const std::string& xlabel,
                          const std::string& ylabel, const std::vector<Series>& series);

}  // namespace peakonlab::cli
