#include "displab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace displab {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string to_csv(const SweepResult& r) {
    std::ostringstream os;
    os << "scale,lhs,rhs,ratio\n";
    for (const auto& rec : r.records)
        os << fmt(rec.scale) << ',' << fmt(rec.lhs) << ',' << fmt(rec.rhs) << ','
           << fmt(rec.ratio) << '\n';
    return os.str();
}

std::string to_json(const SweepResult& r, const std::string& config_echo) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"experiment\": \"" << r.experiment << "\",\n";
    os << "  \"fingerprint\": \"" << r.fingerprint << "\",\n";
    os << "  \"records\": [";
    for (std::size_t i = 0; i < r.records.size(); ++i) {
        const auto& rec = r.records[i];
        os << (i ? "," : "") << "\n    {\"scale\": " << fmt(rec.scale)
           << ", \"lhs\": " << fmt(rec.lhs) << ", \"rhs\": " << fmt(rec.rhs)
           << ", \"ratio\": " << fmt(rec.ratio) << "}";
    }
    os << "\n  ],\n";
    os << "  \"slope\": " << fmt(r.fit.slope) << ",\n";
    os << "  \"slope_stderr\": " << fmt(r.fit.stderr_slope) << ",\n";
    os << "  \"r_squared\": " << fmt(r.fit.r_squared) << ",\n";
    os << "  \"fit_reliable\": " << (r.fit.reliable ? "true" : "false") << ",\n";
    os << "  \"target_slope\": " << fmt(r.target_slope) << ",\n";
    os << "  \"tolerance\": " << fmt(r.tolerance) << ",\n";
    os << "  \"slope_asserted\": " << (r.slope_asserted ? "true" : "false")
       << ",\n";
    os << "  \"passed\": " << (r.passed ? "true" : "false") << ",\n";
    os << "  \"notes\": [";
    for (std::size_t i = 0; i < r.notes.size(); ++i)
        os << (i ? ", " : "") << "\"" << r.notes[i] << "\"";
    os << "],\n";
    os << "  \"config\": " << (config_echo.empty() ? "null" : config_echo)
       << "\n";
    os << "}\n";
    return os.str();
}

std::string to_svg(const SweepResult& r) {
    const int W = 640, H = 480, ML = 70, MR = 20, MT = 30, MB = 50;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
       << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H
       << "\" fill=\"white\"/>\n";

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    bool have = false;
    for (const auto& rec : r.records) {
        if (!(rec.scale > 0.0) || !(rec.ratio > 0.0)) continue;
        double x = std::log2(rec.scale), y = std::log2(rec.ratio);
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
        have = true;
    }
    if (!have) {
        os << "<text x=\"40\" y=\"40\">no positive records</text>\n</svg>\n";
        return os.str();
    }
    if (xmax - xmin < 1e-9) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-9) {
        ymax += 0.5;
        ymin -= 0.5;
    }
    double pad = 0.08 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto px = [&](double x) {
        return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR);
    };
    auto py = [&](double y) {
        return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB);
    };

    os << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR
       << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML
       << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\">log2 scale</text>\n";
    os << "<text x=\"18\" y=\"" << H / 2
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << H / 2
       << ")\">log2 ratio</text>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">"
       << r.experiment << " (slope " << r.fit.slope << ", target "
       << r.target_slope << ")</text>\n";

    // mean anchor for the fit and theory lines
    double mx = 0.0, my = 0.0;
    int cnt = 0;
    for (const auto& rec : r.records) {
        if (!(rec.scale > 0.0) || !(rec.ratio > 0.0)) continue;
        mx += std::log2(rec.scale);
        my += std::log2(rec.ratio);
        ++cnt;
    }
    mx /= cnt;
    my /= cnt;
    auto line = [&](double slope, const char* color) {
        double y1 = my + slope * (xmin - mx);
        double y2 = my + slope * (xmax - mx);
        os << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(y1) << "\" x2=\""
           << px(xmax) << "\" y2=\"" << py(y2) << "\" stroke=\"" << color
           << "\" stroke-width=\"1.5\"/>\n";
    };
    line(r.fit.slope, "steelblue");
    if (r.slope_asserted) line(r.target_slope, "firebrick");

    for (const auto& rec : r.records) {
        if (!(rec.scale > 0.0) || !(rec.ratio > 0.0)) continue;
        os << "<circle cx=\"" << px(std::log2(rec.scale)) << "\" cy=\""
           << py(std::log2(rec.ratio)) << "\" r=\"4\" fill=\"black\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << content;
}

}  // namespace displab
