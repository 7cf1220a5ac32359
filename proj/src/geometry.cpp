#include "fis/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace fis {

const int kChainDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
const int kChainDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

int chain_dir(CellPoint from, CellPoint to) {
    const int dx = to.col - from.col;
    const int dy = to.row - from.row;
    for (int d = 0; d < 8; ++d)
        if (kChainDx[d] == dx && kChainDy[d] == dy) return d;
    return -1;
}

bool cells_adjacent8(CellPoint a, CellPoint b) {
    return a != b && std::abs(a.col - b.col) <= 1 && std::abs(a.row - b.row) <= 1;
}

namespace {

// Standard integer Bresenham from a to b, a <= b lexicographically.
std::vector<CellPoint> bresenham_forward(CellPoint a, CellPoint b) {
    std::vector<CellPoint> out;
    int x0 = a.col, y0 = a.row;
    const int x1 = b.col, y1 = b.row;
    const int dx = std::abs(x1 - x0);
    const int dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1;
    const int sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        out.push_back({x0, y0});
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
    return out;
}

} // namespace

std::vector<CellPoint> line_cells(CellPoint a, CellPoint b) {
    if (b < a) {
        auto cells = bresenham_forward(b, a);
        std::reverse(cells.begin(), cells.end());
        return cells;
    }
    return bresenham_forward(a, b);
}

int orientation_bucket(int dx, int dy, int n) {
    if (dx == 0 && dy == 0) return 0;
    // atan2 with screen-clockwise angles: south is +90 degrees.
    const double angle = std::atan2(static_cast<double>(dy), static_cast<double>(dx));
    const double sector = 2.0 * M_PI / n;
    const long bucket = std::lround(angle / sector);
    return static_cast<int>(((bucket % n) + n) % n);
}

long long signed_area2_yup(const std::vector<CellPoint>& poly) {
    long long acc = 0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % n];
        const long long x0 = p.col, y0 = -p.row;
        const long long x1 = q.col, y1 = -q.row;
        acc += x0 * y1 - x1 * y0;
    }
    return acc;
}

} // namespace fis
