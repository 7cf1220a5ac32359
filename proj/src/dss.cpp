#include "fis/dss.hpp"

#include <algorithm>

#include "fis/errors.hpp"

namespace fis {

void DssRecognizer::reset(CellPoint p0) {
    points_.assign(1, p0);
    broken_ = false;
    dir_first_ = -1;
    transform_set_ = false;
    t00_ = 1, t01_ = 0, t10_ = 0, t11_ = 1;
    dir_a_ = dir_b_ = -1;
    a_ = 0, b_ = 1, mu_ = 0;
    uf_ = ul_ = lf_ = ll_ = IPoint{};
}

DssRecognizer::IPoint DssRecognizer::normalize(CellPoint p) const {
    const long long rx = p.col - points_.front().col;
    const long long ry = p.row - points_.front().row;
    return {t00_ * rx + t01_ * ry, t10_ * rx + t11_ * ry};
}

// Chooses the unimodular map sending the run's two chain directions onto
// (1,0) and (1,1): octant normalization for the arithmetic recognizer.
bool DssRecognizer::fix_transform(int second_dir) {
    int da, db;
    if (second_dir == (dir_first_ + 1) % 8) {
        da = dir_first_;
        db = second_dir;
    } else if (second_dir == (dir_first_ + 7) % 8) {
        da = second_dir;
        db = dir_first_;
    } else {
        return false; // directions not adjacent: not straight
    }
    const long long dax = kChainDx[da], day = kChainDy[da];
    const long long dbx = kChainDx[db], dby = kChainDy[db];
    const long long det = dax * dby - dbx * day; // +-1 for adjacent directions
    // inv([da db]) scaled by det sign.
    const long long i00 = dby * det, i01 = -dbx * det;
    const long long i10 = -day * det, i11 = dax * det;
    // T = [[1,1],[0,1]] * inv: sends da -> (1,0), db -> (1,1).
    t00_ = i00 + i10;
    t01_ = i01 + i11;
    t10_ = i10;
    t11_ = i11;
    dir_a_ = da;
    dir_b_ = db;
    transform_set_ = true;

    // Replay the run through the arithmetic recognizer.
    const IPoint q0 = normalize(points_[0]);
    const IPoint q1 = normalize(points_[1]);
    a_ = q1.y - q0.y;
    b_ = 1;
    mu_ = a_ * q0.x - b_ * q0.y;
    uf_ = lf_ = q0;
    ul_ = ll_ = q1;
    for (std::size_t i = 2; i < points_.size(); ++i)
        if (!extend_normalized(normalize(points_[i]))) return false;
    return true;
}

bool DssRecognizer::extend_normalized(IPoint q) {
    const long long r = a_ * q.x - b_ * q.y;
    if (r >= mu_ && r <= mu_ + b_ - 1) {
        if (r == mu_) ul_ = q;
        if (r == mu_ + b_ - 1) ll_ = q;
        return true;
    }
    if (r == mu_ - 1) { // weakly exterior above: slope grows
        a_ = q.y - uf_.y;
        b_ = q.x - uf_.x;
        mu_ = a_ * q.x - b_ * q.y;
        ul_ = q;
        lf_ = ll_;
        return true;
    }
    if (r == mu_ + b_) { // weakly exterior below: slope shrinks
        a_ = q.y - lf_.y;
        b_ = q.x - lf_.x;
        mu_ = a_ * q.x - b_ * q.y - b_ + 1;
        ll_ = q;
        uf_ = ul_;
        return true;
    }
    return false;
}

bool DssRecognizer::try_extend(CellPoint next) {
    if (broken_) return false;
    const int d = chain_dir(points_.back(), next);
    if (d < 0) {
        broken_ = true;
        return false;
    }
    if (dir_first_ < 0) {
        dir_first_ = d;
        points_.push_back(next);
        return true;
    }
    if (!transform_set_) {
        if (d == dir_first_) {
            points_.push_back(next);
            return true;
        }
        points_.push_back(next);
        if (!fix_transform(d)) {
            points_.pop_back();
            broken_ = true;
            return false;
        }
        return true;
    }
    if (d != dir_a_ && d != dir_b_) {
        broken_ = true;
        return false;
    }
    if (!extend_normalized(normalize(next))) {
        broken_ = true;
        return false;
    }
    points_.push_back(next);
    return true;
}

bool is_digital_straight(const std::vector<CellPoint>& pts) {
    if (pts.empty()) return false;
    DssRecognizer rec;
    rec.reset(pts.front());
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (!rec.try_extend(pts[i])) return false;
    return true;
}

namespace {

SegmentRun make_run(std::vector<CellPoint> pts, int buckets) {
    SegmentRun run;
    run.length = static_cast<int>(pts.size());
    const CellPoint first = pts.front(), last = pts.back();
    run.orientation = orientation_bucket(last.col - first.col, last.row - first.row, buckets);
    run.points = std::move(pts);
    return run;
}

} // namespace

std::vector<SegmentRun> extract_segment_runs(const Trace& trace, int buckets) {
    std::vector<SegmentRun> runs;
    const auto& pts = trace.points;
    if (pts.empty()) return runs;
    if (buckets < 4) throw ParamError("orientation bucket count must be >= 4");

    DssRecognizer rec;
    rec.reset(pts.front());
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (rec.try_extend(pts[i])) continue;
        runs.push_back(make_run(rec.points(), buckets));
        rec.reset(pts[i]);
    }
    runs.push_back(make_run(rec.points(), buckets));

    if (trace.closed && runs.size() >= 2) {
        std::vector<CellPoint> wrap = runs.back().points;
        wrap.insert(wrap.end(), runs.front().points.begin(), runs.front().points.end());
        if (is_digital_straight(wrap)) {
            runs.erase(runs.begin());
            runs.pop_back();
            runs.push_back(make_run(std::move(wrap), buckets));
        }
    }
    return runs;
}

} // namespace fis
