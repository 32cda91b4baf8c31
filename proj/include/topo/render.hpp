#pragma once

#include "topo/homology.hpp"

#include <string>

namespace topo {

enum class RenderMode { barcode, diagram };

/// Self-contained SVG text with a fixed 640x400 viewBox.
///
/// Barcode mode draws one horizontal `class="bar"` line per pair, H0 bars
/// above H1 bars. Diagram mode draws one `class="point"` circle per pair and
/// the birth = death diagonal. Essential pairs are clamped to 1.05 x the
/// largest finite death and carry the extra class `essential`: an arrow head
/// on the bar in barcode mode, a hollow circle in diagram mode.
std::string render_svg(const PersistenceDiagram& diagram, RenderMode mode);

} // namespace topo
