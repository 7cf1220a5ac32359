#pragma once
#include <vector>

#include "fis/grid.hpp"

namespace fis {

// A K1 symbol is a contour point named by its position in the field;
// the perceptual subsystem emits ordered streams of them.
using K1Symbol = CellPoint;

struct Trace {
    std::vector<K1Symbol> points; // consecutive points 8-adjacent, no repeats
    bool closed = false; // the end touches the departure chain (implicit return)
    K1Symbol start{};    // capture point (first raster hit)
};

// First 1-cell of each 8-connected component in row-major scan order.
std::vector<K1Symbol> scan_capture(const Grid& grid);

// Walks the component from `start`, preferring the straight-ahead direction
// and then clockwise alternatives, east first. For simple closed contours
// this executes the contour clockwise on screen; open chains captured mid-arc
// are completed by walking the untraced arm and prepending it reversed.
// Throws PreconditionError if start is a background cell.
Trace trace_contour(const Grid& grid, K1Symbol start);

// Identity projection of the trace points (rule-2 symbol stream).
std::vector<K1Symbol> emit_symbols(const Trace& trace);

} // namespace fis
