#pragma once
#include <vector>

#include "fis/geometry.hpp"
#include "fis/perception.hpp"

namespace fis {

// Incremental recognizer for 8-connected digital straight segments
// (arithmetic lines mu <= a*x - b*y < mu + b after octant normalization).
// A chain stays recognizable while its steps use at most two adjacent
// chain directions and the leaning-point bounds hold.
class DssRecognizer {
public:
    void reset(CellPoint p0);
    // Extends the run by the next 8-adjacent point; returns false (leaving
    // the recognizer unusable until reset) when the run stops being straight.
    bool try_extend(CellPoint next);

    std::size_t size() const { return points_.size(); }
    const std::vector<CellPoint>& points() const { return points_; }

private:
    struct IPoint {
        long long x = 0, y = 0;
    };
    bool extend_normalized(IPoint q);
    IPoint normalize(CellPoint p) const;
    bool fix_transform(int second_dir);

    std::vector<CellPoint> points_;
    bool broken_ = false;
    int dir_first_ = -1; // first chain direction seen, -1 until two points
    bool transform_set_ = false;
    long long t00_ = 1, t01_ = 0, t10_ = 0, t11_ = 1; // raw delta -> octant 0
    int dir_a_ = -1, dir_b_ = -1; // the two admissible chain directions
    // Arithmetic line state over normalized points.
    long long a_ = 0, b_ = 1, mu_ = 0;
    IPoint uf_, ul_, lf_, ll_;
};

// True iff the whole point sequence is one digital straight segment.
bool is_digital_straight(const std::vector<CellPoint>& pts);

// Maximal straight run of a trace; runs partition the trace points, so the
// shared corner cell belongs to the earlier run and lengths sum to the trace
// length exactly.
struct SegmentRun {
    std::vector<CellPoint> points;
    int orientation = 0; // bucket of the first->last displacement
    int length = 0;      // cell count
};

// Splits a trace into maximal straight runs. For closed traces the wrap-around
// pair (last run + first run) is merged when their concatenation stays
// straight, so a capture point landing mid-edge does not split that edge.
std::vector<SegmentRun> extract_segment_runs(const Trace& trace, int buckets);

} // namespace fis
