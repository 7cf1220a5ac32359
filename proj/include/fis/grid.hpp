#pragma once
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fis/geometry.hpp"

namespace fis {

// Binary perception field. A well-formed scene holds one or more
// 8-connected contour components separated by at least one background cell.
class Grid {
public:
    Grid() = default;
    Grid(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }
    bool in_bounds(int col, int row) const {
        return col >= 0 && col < width_ && row >= 0 && row < height_;
    }
    bool at(int col, int row) const { return cells_[idx(col, row)] != 0; }
    bool at(CellPoint p) const { return at(p.col, p.row); }
    void set(int col, int row, bool v) { cells_[idx(col, row)] = v ? 1 : 0; }
    void set(CellPoint p, bool v) { set(p.col, p.row, v); }

    std::vector<CellPoint> one_cells() const; // row-major order
    std::size_t count_ones() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t idx(int col, int row) const;
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> cells_;
};

// Polyline/polygon on the cell lattice; edges rasterize to 8-connected
// Bresenham chains. Consecutive vertices must differ.
struct ContourObject {
    std::vector<CellPoint> vertices;
    bool closed = false;
};

enum class DeformationGenus {
    AffineTranslate,
    AffineRotate,
    AffineScale,
    Genus1AddElement,
    Genus1RemoveElement,
    Genus2ResizeElement,
};

// Parameter meanings per genus:
//   translate: dx, dy (cells)
//   rotate:    buckets (whole orientation buckets, about the vertex centroid)
//   scale:     factor (about the vertex centroid)
//   g1 add:    element index (edge to split), length (outward bump in cells)
//   g1 remove: element index (vertex to drop)
//   g2 resize: element index (edge), length (new edge length in cells)
struct Deformation {
    DeformationGenus genus = DeformationGenus::AffineTranslate;
    int dx = 0;
    int dy = 0;
    int buckets = 0;
    double factor = 1.0;
    int element = 0;
    int length = 0;
};

// contour_env operations ------------------------------------------------

// Draws every edge of the object as a Bresenham chain. Deterministic.
// Throws BoundsError if any rasterized cell falls outside the grid.
Grid rasterize(const ContourObject& object, int width, int height);

ContourObject apply_deformation(const ContourObject& object, const Deformation& d,
                                int orientation_buckets);

// Grid text format: "<width> <height>" then height rows of {0,1}, LF only.
std::string save_grid(const Grid& g);
Grid load_grid(const std::string& bytes);

// Scene description: one "obj closed|open x0,y0 x1,y1 ..." record per line.
// Blank lines and '#' comments are skipped.
std::vector<ContourObject> parse_scene(std::istream& in);
std::string scene_to_text(const std::vector<ContourObject>& objects);

} // namespace fis
