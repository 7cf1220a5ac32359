#include "fis/perception.hpp"

#include <algorithm>

#include "fis/errors.hpp"

namespace fis {

namespace {

struct VisitMap {
    VisitMap(int w, int h) : width(w), flags(static_cast<std::size_t>(w) * h, 0) {}
    std::uint8_t& at(CellPoint p) {
        return flags[static_cast<std::size_t>(p.row) * width + p.col];
    }
    int width;
    std::vector<std::uint8_t> flags;
};

// Moore-neighbor probe: sweep clockwise starting one past the backtrack
// direction, taking the first unvisited contour cell. Returns -1 when stuck.
int pick_step(const Grid& grid, VisitMap& visited, CellPoint cur, int heading) {
    for (int turn = 0; turn < 8; ++turn) {
        const int d = (heading + 5 + turn) % 8;
        const CellPoint next{cur.col + kChainDx[d], cur.row + kChainDy[d]};
        if (!grid.in_bounds(next.col, next.row)) continue;
        if (!grid.at(next) || visited.at(next)) continue;
        return d;
    }
    return -1;
}

std::vector<CellPoint> walk(const Grid& grid, VisitMap& visited, CellPoint start) {
    std::vector<CellPoint> arm;
    CellPoint cur = start;
    int heading = 0; // east-first probing from a raster-scan capture point
    for (;;) {
        const int d = pick_step(grid, visited, cur, heading);
        if (d < 0) break;
        cur = {cur.col + kChainDx[d], cur.row + kChainDy[d]};
        visited.at(cur) = 1;
        arm.push_back(cur);
        heading = d;
    }
    return arm;
}

} // namespace

std::vector<K1Symbol> scan_capture(const Grid& grid) {
    std::vector<K1Symbol> captures;
    if (grid.width() == 0 || grid.height() == 0) return captures;
    VisitMap seen(grid.width(), grid.height());
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            const CellPoint p{c, r};
            if (!grid.at(p) || seen.at(p)) continue;
            captures.push_back(p);
            // Flood the component so later cells of it are not re-captured.
            std::vector<CellPoint> stack{p};
            seen.at(p) = 1;
            while (!stack.empty()) {
                const CellPoint q = stack.back();
                stack.pop_back();
                for (int d = 0; d < 8; ++d) {
                    const CellPoint n{q.col + kChainDx[d], q.row + kChainDy[d]};
                    if (!grid.in_bounds(n.col, n.row) || !grid.at(n) || seen.at(n))
                        continue;
                    seen.at(n) = 1;
                    stack.push_back(n);
                }
            }
        }
    }
    return captures;
}

Trace trace_contour(const Grid& grid, K1Symbol start) {
    if (!grid.in_bounds(start.col, start.row) || !grid.at(start))
        throw PreconditionError("trace start (" + std::to_string(start.col) + "," +
                                std::to_string(start.row) + ") is not a contour cell");
    VisitMap visited(grid.width(), grid.height());
    visited.at(start) = 1;

    Trace trace;
    trace.start = start;

    std::vector<CellPoint> forward = walk(grid, visited, start);
    trace.points.push_back(start);
    trace.points.insert(trace.points.end(), forward.begin(), forward.end());

    // Capture landed mid-arc: complete the untraced arm and prepend it so
    // the emitted order still runs end to end.
    std::vector<CellPoint> backward = walk(grid, visited, start);
    if (!backward.empty()) {
        std::reverse(backward.begin(), backward.end());
        backward.insert(backward.end(), trace.points.begin(), trace.points.end());
        trace.points = std::move(backward);
    }

    // Repair pass: at sharp apexes the probe can hop across to the opposite
    // edge and strand the apex cell. Stitch every stranded cell back where it
    // is 8-adjacent to the walk.
    bool progress = true;
    while (progress) {
        progress = false;
        for (int r = 0; r < grid.height() && !progress; ++r) {
            for (int c = 0; c < grid.width() && !progress; ++c) {
                const CellPoint u{c, r};
                if (!grid.at(u) || visited.at(u)) continue;
                auto& pts = trace.points;
                if (cells_adjacent8(u, pts.back())) {
                    pts.push_back(u);
                } else if (cells_adjacent8(u, pts.front())) {
                    pts.insert(pts.begin(), u);
                } else {
                    std::size_t at = pts.size();
                    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                        if (cells_adjacent8(pts[i], u) &&
                            cells_adjacent8(u, pts[i + 1])) {
                            at = i + 1;
                            break;
                        }
                    }
                    if (at == pts.size()) continue;
                    pts.insert(pts.begin() + at, u);
                }
                visited.at(u) = 1;
                progress = true;
            }
        }
    }

    // Closure: some trace end touches a second traced cell besides its own
    // neighbor in the chain. Sharp apexes may interleave the two edges, so
    // the handshake can land a cell or two past the start; a genuinely open
    // chain has both of its ends touching exactly one traced cell.
    if (trace.points.size() >= 4) {
        auto contact_degree = [&](CellPoint p) {
            int touched = 0;
            for (int d = 0; d < 8; ++d) {
                const CellPoint n{p.col + kChainDx[d], p.row + kChainDy[d]};
                if (grid.in_bounds(n.col, n.row) && visited.at(n)) ++touched;
            }
            return touched;
        };
        trace.closed = contact_degree(trace.points.front()) >= 2 ||
                       contact_degree(trace.points.back()) >= 2;
    }
    return trace;
}

std::vector<K1Symbol> emit_symbols(const Trace& trace) {
    return trace.points;
}

} // namespace fis
