#pragma once
#include <cstdint>
#include <vector>

namespace fis {

// Integer cell coordinates, row-major image convention: col grows east,
// row grows south. All contour geometry lives on this lattice.
struct CellPoint {
    int col = 0;
    int row = 0;

    friend bool operator==(const CellPoint&, const CellPoint&) = default;
    friend auto operator<=>(const CellPoint&, const CellPoint&) = default;
};

// The eight chain directions in clockwise screen order starting east:
// 0=E 1=SE 2=S 3=SW 4=W 5=NW 6=N 7=NE.
extern const int kChainDx[8];
extern const int kChainDy[8];

// Direction index for a unit step, or -1 if the step is not a king move.
int chain_dir(CellPoint from, CellPoint to);

bool cells_adjacent8(CellPoint a, CellPoint b);

// Bresenham chain from a to b, endpoints included. Symmetric: the cell set
// does not depend on traversal direction (the chain is computed from the
// lexicographically smaller endpoint and reversed when needed), so rasterized
// edges and traced runs agree regardless of contour execution direction.
std::vector<CellPoint> line_cells(CellPoint a, CellPoint b);

// Orientation bucket of the displacement (dx, dy) in n equal sectors.
// Bucket indices grow clockwise on screen (east = 0, south = n/4).
// A zero displacement maps to bucket 0.
int orientation_bucket(int dx, int dy, int n);

// Twice the signed area of the polygon in y-up mathematical convention
// (rows negated). Clockwise on screen therefore yields a value <= 0.
long long signed_area2_yup(const std::vector<CellPoint>& poly);

} // namespace fis
