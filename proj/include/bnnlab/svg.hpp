#ifndef BNNLAB_SVG_HPP
#define BNNLAB_SVG_HPP

#include <string>
#include <vector>

#include "bnnlab/risk.hpp"

namespace bnnlab {

struct PlotOptions {
    std::string title;
    double reference_level = 0.0;  // horizontal minimax benchmark (y = p)
    std::string provenance;        // embedded as an SVG comment
};

/// Self-contained SVG line chart: one polyline per curve (rules split by
/// sparsity level), a dashed reference line, axes with ticks, legend.
std::string render_risk_curves_svg(const std::vector<RiskCurve>& curves,
                                   const PlotOptions& options);

} // namespace bnnlab

#endif
