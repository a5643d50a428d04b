#pragma once

#include <iosfwd>
#include <vector>

#include "holovote/simharness.hpp"

namespace holovote {

/// Renders sweep records as a static SVG line chart (mean decision error
/// over participation, one series per topology, with axes and a legend).
/// Drawn directly so the output bytes depend only on the records.
void write_sweep_svg(std::ostream& out, const std::vector<SweepRecord>& records);

} // namespace holovote
