#include "fis/grid.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>

#include "fis/errors.hpp"

namespace fis {

Grid::Grid(int width, int height) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw ParamError("grid dimensions must be positive");
    cells_.assign(static_cast<std::size_t>(width) * height, 0);
}

std::size_t Grid::idx(int col, int row) const {
    if (!in_bounds(col, row))
        throw BoundsError("cell (" + std::to_string(col) + "," + std::to_string(row) +
                          ") outside " + std::to_string(width_) + "x" +
                          std::to_string(height_) + " grid");
    return static_cast<std::size_t>(row) * width_ + col;
}

std::vector<CellPoint> Grid::one_cells() const {
    std::vector<CellPoint> out;
    for (int r = 0; r < height_; ++r)
        for (int c = 0; c < width_; ++c)
            if (cells_[static_cast<std::size_t>(r) * width_ + c]) out.push_back({c, r});
    return out;
}

std::size_t Grid::count_ones() const {
    return static_cast<std::size_t>(
        std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

namespace {

void validate_object(const ContourObject& object) {
    for (std::size_t i = 1; i < object.vertices.size(); ++i)
        if (object.vertices[i] == object.vertices[i - 1])
            throw ParamError("zero-length edge at vertex " + std::to_string(i));
    if (object.closed && object.vertices.size() >= 2 &&
        object.vertices.front() == object.vertices.back())
        throw ParamError("closed object repeats its first vertex");
}

// Edge list including the closing edge for closed objects.
std::vector<std::pair<CellPoint, CellPoint>> edges_of(const ContourObject& object) {
    std::vector<std::pair<CellPoint, CellPoint>> edges;
    const auto& v = object.vertices;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) edges.emplace_back(v[i], v[i + 1]);
    if (object.closed && v.size() >= 3) edges.emplace_back(v.back(), v.front());
    return edges;
}

CellPoint centroid_of(const std::vector<CellPoint>& vs) {
    long long sx = 0, sy = 0;
    for (const auto& p : vs) {
        sx += p.col;
        sy += p.row;
    }
    const auto n = static_cast<long long>(vs.size());
    return {static_cast<int>(std::llround(static_cast<double>(sx) / n)),
            static_cast<int>(std::llround(static_cast<double>(sy) / n))};
}

} // namespace

Grid rasterize(const ContourObject& object, int width, int height) {
    validate_object(object);
    Grid g(width, height);
    if (object.vertices.empty()) return g;
    if (object.vertices.size() == 1) {
        const auto p = object.vertices.front();
        if (!g.in_bounds(p.col, p.row))
            throw BoundsError("vertex outside grid bounds");
        g.set(p, true);
        return g;
    }
    for (const auto& [a, b] : edges_of(object)) {
        for (const auto& cell : line_cells(a, b)) {
            if (!g.in_bounds(cell.col, cell.row))
                throw BoundsError("rasterized cell (" + std::to_string(cell.col) + "," +
                                  std::to_string(cell.row) + ") outside grid bounds");
            g.set(cell, true);
        }
    }
    return g;
}

namespace {

ContourObject translated(ContourObject o, int dx, int dy) {
    for (auto& v : o.vertices) {
        v.col += dx;
        v.row += dy;
    }
    return o;
}

ContourObject rotated(ContourObject o, int buckets, int n) {
    if (buckets < 0 || buckets >= n)
        throw ParamError("rotation bucket " + std::to_string(buckets) +
                         " outside quantization [0," + std::to_string(n) + ")");
    if (buckets == 0) return o;
    const CellPoint c = centroid_of(o.vertices);
    const double angle = 2.0 * M_PI * buckets / n; // screen-clockwise, y down
    const double ca = std::cos(angle), sa = std::sin(angle);
    for (auto& v : o.vertices) {
        const double x = v.col - c.col, y = v.row - c.row;
        v.col = c.col + static_cast<int>(std::llround(x * ca - y * sa));
        v.row = c.row + static_cast<int>(std::llround(x * sa + y * ca));
    }
    return o;
}

ContourObject scaled(ContourObject o, double factor) {
    if (!(factor > 0.0)) throw ParamError("scale factor must be positive");
    const CellPoint c = centroid_of(o.vertices);
    for (auto& v : o.vertices) {
        v.col = c.col + static_cast<int>(std::llround((v.col - c.col) * factor));
        v.row = c.row + static_cast<int>(std::llround((v.row - c.row) * factor));
    }
    return o;
}

ContourObject bump_added(ContourObject o, int element, int length) {
    const auto edges = edges_of(o);
    if (element < 0 || static_cast<std::size_t>(element) >= edges.size())
        throw ParamError("genus1 element index out of range");
    if (length < 1) throw ParamError("genus1 bump length must be positive");
    const auto [a, b] = edges[static_cast<std::size_t>(element)];
    const CellPoint c = centroid_of(o.vertices);
    const double mx = (a.col + b.col) / 2.0, my = (a.row + b.row) / 2.0;
    // Outward unit normal: the edge normal pointing away from the centroid.
    double nx = -(b.row - a.row), ny = b.col - a.col;
    const double norm = std::hypot(nx, ny);
    nx /= norm;
    ny /= norm;
    if (nx * (mx - c.col) + ny * (my - c.row) < 0) {
        nx = -nx;
        ny = -ny;
    }
    const CellPoint m{static_cast<int>(std::llround(mx + nx * length)),
                      static_cast<int>(std::llround(my + ny * length))};
    ContourObject out = o;
    out.vertices.insert(out.vertices.begin() + element + 1, m);
    validate_object(out);
    return out;
}

ContourObject vertex_removed(ContourObject o, int element) {
    if (element < 0 || static_cast<std::size_t>(element) >= o.vertices.size())
        throw ParamError("genus1 vertex index out of range");
    if (o.vertices.size() <= 2)
        throw ParamError("cannot remove a vertex from a 2-vertex object");
    o.vertices.erase(o.vertices.begin() + element);
    validate_object(o);
    return o;
}

// Resizes one edge to the nearest chain length achieving the exact original
// orientation, then shifts the tail so every later edge keeps its delta.
ContourObject edge_resized(ContourObject o, int element, int length) {
    const std::size_t open_edges = o.vertices.size() >= 2 ? o.vertices.size() - 1 : 0;
    if (element < 0 || static_cast<std::size_t>(element) >= open_edges)
        throw ParamError("genus2 element index out of range");
    if (length < 2) throw ParamError("genus2 length must cover at least 2 cells");
    const CellPoint a = o.vertices[static_cast<std::size_t>(element)];
    const CellPoint b = o.vertices[static_cast<std::size_t>(element) + 1];
    const int dx = b.col - a.col, dy = b.row - a.row;
    const int g = std::gcd(std::abs(dx), std::abs(dy));
    const int px = dx / g, py = dy / g;
    const int unit = std::max(std::abs(px), std::abs(py));
    const long k =
        std::max(1L, std::lround(static_cast<double>(length - 1) / unit));
    const CellPoint nb{a.col + px * static_cast<int>(k),
                       a.row + py * static_cast<int>(k)};
    const int sx = nb.col - b.col, sy = nb.row - b.row;
    ContourObject out = o;
    for (std::size_t i = static_cast<std::size_t>(element) + 1; i < out.vertices.size();
         ++i) {
        out.vertices[i].col += sx;
        out.vertices[i].row += sy;
    }
    validate_object(out);
    return out;
}

} // namespace

ContourObject apply_deformation(const ContourObject& object, const Deformation& d,
                                int orientation_buckets) {
    validate_object(object);
    if (object.vertices.empty()) throw ParamError("cannot deform an empty object");
    switch (d.genus) {
        case DeformationGenus::AffineTranslate:
            return translated(object, d.dx, d.dy);
        case DeformationGenus::AffineRotate:
            return rotated(object, d.buckets, orientation_buckets);
        case DeformationGenus::AffineScale:
            return scaled(object, d.factor);
        case DeformationGenus::Genus1AddElement:
            return bump_added(object, d.element, d.length);
        case DeformationGenus::Genus1RemoveElement:
            return vertex_removed(object, d.element);
        case DeformationGenus::Genus2ResizeElement:
            return edge_resized(object, d.element, d.length);
    }
    throw ParamError("unknown deformation genus");
}

std::string save_grid(const Grid& g) {
    std::string out = std::to_string(g.width()) + " " + std::to_string(g.height()) + "\n";
    out.reserve(out.size() + static_cast<std::size_t>(g.height()) * (g.width() + 1));
    for (int r = 0; r < g.height(); ++r) {
        for (int c = 0; c < g.width(); ++c) out.push_back(g.at(c, r) ? '1' : '0');
        out.push_back('\n');
    }
    return out;
}

Grid load_grid(const std::string& bytes) {
    std::istringstream in(bytes);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty grid file", 1);
    int width = 0, height = 0;
    {
        std::istringstream hdr(line);
        std::string extra;
        if (!(hdr >> width >> height) || (hdr >> extra) || width <= 0 || height <= 0)
            throw FormatError("malformed grid header '" + line + "'", 1);
    }
    Grid g(width, height);
    for (int r = 0; r < height; ++r) {
        if (!std::getline(in, line))
            throw FormatError("expected " + std::to_string(height) + " rows, got " +
                                  std::to_string(r),
                              static_cast<std::size_t>(r) + 1);
        if (static_cast<int>(line.size()) != width)
            throw FormatError("ragged row: expected " + std::to_string(width) +
                                  " cells, got " + std::to_string(line.size()),
                              static_cast<std::size_t>(r) + 2);
        for (int c = 0; c < width; ++c) {
            if (line[c] != '0' && line[c] != '1')
                throw FormatError(std::string("invalid cell character '") + line[c] + "'",
                                  static_cast<std::size_t>(r) + 2);
            g.set(c, r, line[c] == '1');
        }
    }
    if (std::getline(in, line) && !line.empty())
        throw FormatError("trailing content after grid rows",
                          static_cast<std::size_t>(height) + 2);
    return g;
}

std::vector<ContourObject> parse_scene(std::istream& in) {
    std::vector<ContourObject> objects;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        std::string tag, mode;
        if (!(is >> tag) || tag != "obj")
            throw FormatError("expected 'obj' record", line_no);
        if (!(is >> mode) || (mode != "closed" && mode != "open"))
            throw FormatError("expected 'closed' or 'open'", line_no);
        ContourObject o;
        o.closed = mode == "closed";
        std::string pair;
        while (is >> pair) {
            const auto comma = pair.find(',');
            if (comma == std::string::npos)
                throw FormatError("expected 'x,y' pair, got '" + pair + "'", line_no);
            try {
                o.vertices.push_back({std::stoi(pair.substr(0, comma)),
                                      std::stoi(pair.substr(comma + 1))});
            } catch (const std::exception&) {
                throw FormatError("bad coordinate pair '" + pair + "'", line_no);
            }
        }
        if (o.vertices.empty()) throw FormatError("object with no vertices", line_no);
        validate_object(o);
        objects.push_back(std::move(o));
    }
    return objects;
}

std::string scene_to_text(const std::vector<ContourObject>& objects) {
    std::ostringstream os;
    for (const auto& o : objects) {
        os << "obj " << (o.closed ? "closed" : "open");
        for (const auto& v : o.vertices) os << " " << v.col << "," << v.row;
        os << "\n";
    }
    return os.str();
}

} // namespace fis
