#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace sharpnorm {

/// 17-significant-digit decimal rendering, locale-independent.
inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Empirical constant estimate over a seeded suite.
struct RatioReport {
    std::string suite_id;
    std::string regime;  // finite_measure | infinite_measure | small_support | ""
    std::vector<std::uint64_t> seeds;
    std::vector<double> ratios;
    double sup_ratio = 0.0;
    double stability_factor = 0.0;  // sup ratio change across one refinement, when measured
    bool zero_over_zero_flag = false;

    void add(std::uint64_t seed, double ratio) {
        seeds.push_back(seed);
        ratios.push_back(ratio);
        sup_ratio = std::max(sup_ratio, ratio);
    }
};

/// RFC-4180 CSV with a header row; fields never need quoting here
/// (numeric or bare identifiers) but commas/quotes are escaped anyway.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : columns_(std::move(header)) {}

    void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    std::string str() const {
        std::ostringstream os;
        emit(os, columns_);
        for (const auto& r : rows_) emit(os, r);
        return os.str();
    }

    void write(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        f << str();
    }

private:
    static void emit(std::ostringstream& os, const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            const std::string& s = row[i];
            if (s.find_first_of(",\"\n") != std::string::npos) {
                os << '"';
                for (char c : s) {
                    if (c == '"') os << '"';
                    os << c;
                }
                os << '"';
            } else {
                os << s;
            }
        }
        os << "\r\n";
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

/// Minimal hand-emitted SVG line chart; CSV remains the authoritative
/// output, the plot is a convenience.
inline std::string svg_line_chart(const std::string& title, const std::vector<double>& xs,
                                  const std::vector<std::vector<double>>& series,
                                  const std::vector<std::string>& labels) {
    const int w = 640, h = 400, ml = 60, mr = 20, mt = 40, mb = 40;
    double xmin = xs.empty() ? 0 : xs.front(), xmax = xs.empty() ? 1 : xs.front();
    double ymin = 0, ymax = 1;
    bool first = true;
    for (double x : xs) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    for (const auto& s : series)
        for (double y : s) {
            if (first) {
                ymin = ymax = y;
                first = false;
            }
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\">\n";
    os << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
       << "</text>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
       << h - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << py(ymin) << "\" text-anchor=\"end\" font-size=\"10\">"
       << fmt_double(ymin) << "</text>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << py(ymax) + 4
       << "\" text-anchor=\"end\" font-size=\"10\">" << fmt_double(ymax) << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        os << "<polyline fill=\"none\" stroke=\"" << colors[s % 5] << "\" points=\"";
        for (std::size_t i = 0; i < series[s].size() && i < xs.size(); ++i)
            os << px(xs[i]) << ',' << py(series[s][i]) << ' ';
        os << "\"/>\n";
        if (s < labels.size())
            os << "<text x=\"" << w - mr - 5 << "\" y=\"" << mt + 15 * (s + 1)
               << "\" text-anchor=\"end\" fill=\"" << colors[s % 5] << "\" font-size=\"11\">"
               << labels[s] << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace sharpnorm
