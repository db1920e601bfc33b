#ifndef FAIRBANDIT_SVG_HPP
#define FAIRBANDIT_SVG_HPP

#include "fairbandit/experiments.hpp"

#include <string>
#include <vector>

namespace fairbandit {

// Line chart of the named metrics against t, one labeled polyline per
// series, as a standalone SVG document. `metric_spec` is a comma-separated
// list of metric names; a metric plots its aggregate rows (trial == -1) when
// present, otherwise one polyline per trial. Throws std::invalid_argument
// when a metric is absent, listing the metrics the table does contain.
std::string render_plot(const std::vector<ResultRow>& rows,
                        const std::string& metric_spec);

}  // namespace fairbandit

#endif
