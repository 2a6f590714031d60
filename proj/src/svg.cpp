#include "bnnlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bnnlab/text.hpp"

namespace bnnlab {

namespace {

constexpr double kWidth = 840.0;
constexpr double kHeight = 520.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 180.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
                          "#bcbd22", "#e377c2"};

std::string fmt_tick(double v) {
    std::ostringstream out;
    if (std::fabs(v) >= 1000.0 || (std::fabs(v) < 0.01 && v != 0.0)) {
        out.precision(2);
        out << std::scientific << v;
    } else {
        out.precision(4);
        out << v;
    }
    return out.str();
}

} // namespace

std::string render_risk_curves_svg(const std::vector<RiskCurve>& curves,
                                   const PlotOptions& options) {
    if (curves.empty()) {
        throw std::invalid_argument("render_risk_curves_svg: no curves");
    }
    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = options.reference_level;
    for (const auto& curve : curves) {
        for (double r : curve.r_grid) x_max = std::max(x_max, r);
        for (double v : curve.risks) {
            y_max = std::max(y_max, v);
            y_min = std::min(y_min, v);
        }
    }
    if (x_max == x_min) x_max = x_min + 1.0;
    y_max *= 1.06;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto sx = [&](double x) {
        return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w;
    };
    const auto sy = [&](double y) {
        return kMarginTop + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    if (!options.provenance.empty()) {
        svg << "<!-- " << options.provenance << " -->\n";
    }
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!options.title.empty()) {
        svg << "<text x=\"" << kMarginLeft << "\" y=\"24\" font-family=\"sans-serif\" "
               "font-size=\"16\">"
            << options.title << "</text>\n";
    }

    // axes box and ticks
    svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
    const int n_ticks = 6;
    for (int i = 0; i <= n_ticks; ++i) {
        const double xv = x_min + (x_max - x_min) * i / n_ticks;
        const double yv = y_min + (y_max - y_min) * i / n_ticks;
        svg << "<line x1=\"" << sx(xv) << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\"" << sx(xv)
            << "\" y2=\"" << kMarginTop + plot_h + 5 << "\" stroke=\"#444\"/>\n";
        svg << "<text x=\"" << sx(xv) << "\" y=\"" << kMarginTop + plot_h + 20
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
            << fmt_tick(xv) << "</text>\n";
        svg << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << sy(yv) << "\" x2=\"" << kMarginLeft
            << "\" y2=\"" << sy(yv) << "\" stroke=\"#444\"/>\n";
        svg << "<text x=\"" << kMarginLeft - 10 << "\" y=\"" << sy(yv) + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
            << fmt_tick(yv) << "</text>\n";
    }
    svg << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">signal norm "
           "r</text>\n";
    svg << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 18 "
        << kMarginTop + plot_h / 2 << ")\">risk</text>\n";

    // reference line y = p
    if (options.reference_level > 0.0) {
        svg << "<line x1=\"" << sx(x_min) << "\" y1=\"" << sy(options.reference_level)
            << "\" x2=\"" << sx(x_max) << "\" y2=\"" << sy(options.reference_level)
            << "\" stroke=\"#000\" stroke-dasharray=\"6,4\"/>\n";
        svg << "<text x=\"" << sx(x_max) - 4 << "\" y=\"" << sy(options.reference_level) - 6
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">minimax level "
            << fmt_tick(options.reference_level) << "</text>\n";
    }

    // curves and legend
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& curve = curves[c];
        const char* color = kPalette[c % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < curve.r_grid.size(); ++i) {
            if (i > 0) svg << " ";
            svg << format_double(sx(curve.r_grid[i])) << "," << format_double(sy(curve.risks[i]));
        }
        svg << "\"/>\n";
        std::string label = curve.rule_label;
        if (curve.sparsity) {
            label += " k=" + std::to_string(*curve.sparsity);
        }
        const double ly = kMarginTop + 16.0 + 18.0 * static_cast<double>(c);
        svg << "<line x1=\"" << kWidth - kMarginRight + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
            << kWidth - kMarginRight + 34 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << kWidth - kMarginRight + 40 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace bnnlab
