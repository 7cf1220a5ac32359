#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fis/errors.hpp"
#include "fis/pipeline.hpp"

using namespace fis;

namespace {

Grid shape_grid(const std::vector<CellPoint>& vertices, bool closed, int size = 32) {
    ContourObject o;
    o.vertices = vertices;
    o.closed = closed;
    return rasterize(o, size, size);
}

// Brute-force oracle for the cyclic orientation walk: enumerate both walk
// directions exhaustively and pick the shorter, clockwise on ties.
std::pair<std::string, int> cyclic_walk_oracle(int f, int g, int n) {
    int cw = 0, v = f;
    while (v != g) {
        v = (v + 1) % n;
        ++cw;
    }
    int ccw = 0;
    v = f;
    while (v != g) {
        v = (v - 1 + n) % n;
        ++ccw;
    }
    if (cw <= ccw) return {"turn_r", cw};
    return {"turn_l", ccw};
}

StageInput segment_input(StageEngine& eng, int orient, int len) {
    SegmentRun run;
    run.orientation = orient;
    run.length = len;
    run.points.assign(static_cast<std::size_t>(len), CellPoint{0, 0});
    // points are only carried for the mode vector; give them real positions
    for (int i = 0; i < len; ++i) run.points[static_cast<std::size_t>(i)] = {i, 0};
    auto out = eng.run_segment_stage(run);
    REQUIRE(out.has_value());
    return eng.to_input(*out);
}

} // namespace

TEST_CASE("integrate_structural: two segments in execution order") {
    Substrate sub;
    StageEngine eng(sub);
    const StageInput a = segment_input(eng, 0, 7);
    const StageInput b = segment_input(eng, 4, 4);
    const ModeVector mv = eng.integrate_structural("ang", {a, b});
    REQUIRE(mv.pb() != nullptr);
    CHECK(mv.pb()->value == a.signal);
    CHECK(mv.pe()->value == b.signal);

    const ModeVector single = eng.integrate_structural("ang", {a});
    CHECK(single.pb() == single.pe());

    const ModeVector empty = eng.integrate_structural("ang", {});
    CHECK(empty.pb() == nullptr);
}

TEST_CASE("integrate_characteristic: coincidence counts, difference hands off") {
    Substrate sub;
    StageEngine eng(sub);
    // identical zone responses -> count detector with k = 2
    const auto zi = eng.integrate_characteristic("ang", "zone", {3, 3});
    CHECK(zi.coincident);
    CHECK(zi.response == "cnt#2");
    // differing orientations -> decomposition handoff
    const auto oi = eng.integrate_characteristic("ang", "orient", {0, 2});
    CHECK_FALSE(oi.coincident);
    CHECK(oi.first == 0);
    CHECK(oi.last == 2);
    // equal lengths -> count coincidence, no decomposition
    const auto li = eng.integrate_characteristic("ang", "len", {5, 5});
    CHECK(li.coincident);
    CHECK(li.response == "len_eq#2");
}

TEST_CASE("decompose: orientation 0 -> 2 is a clockwise walk of 2") {
    Substrate sub;
    StageEngine eng(sub);
    const auto d = eng.decompose_characteristic("ang", "orient", 0, 2);
    CHECK(d.direction_zone == "turn_r");
    CHECK(d.magnitude == 2);
    CHECK(d.response == "turn_r#2");
}

TEST_CASE("decompose: length 7 -> 4 is a reduction of 3") {
    Substrate sub;
    StageEngine eng(sub);
    const auto d = eng.decompose_characteristic("ang", "len", 7, 4);
    CHECK(d.direction_zone == "len_v");
    CHECK(d.magnitude == 3);
    // the walk restored the missing chain 6, 5
    CHECK(sub.find_by_signal("len#6") != nullptr);
    CHECK(sub.find_by_signal("len#5") != nullptr);
}

TEST_CASE("decompose: orientation matches the cyclic walk oracle") {
    Substrate sub; // 16 buckets
    StageEngine eng(sub);
    for (int f = 0; f < 16; ++f) {
        for (int g = 0; g < 16; ++g) {
            if (f == g) continue;
            const auto d = eng.decompose_characteristic("ang", "orient", f, g);
            const auto [dir, mag] = cyclic_walk_oracle(f, g, 16);
            CHECK(d.direction_zone == dir);
            CHECK(d.magnitude == mag);
        }
    }
    CHECK_THROWS_AS(eng.decompose_characteristic("ang", "orient", 3, 3),
                    PreconditionError);
}

TEST_CASE("synthesize: capture, idempotent recognition, class separation") {
    Substrate sub;
    StageEngine eng(sub);
    const StageInput s1 = segment_input(eng, 0, 7);
    const StageInput s2 = segment_input(eng, 4, 4);

    auto angle = eng.run_stage("ang", {s1, s2});
    REQUIRE(angle.has_value());
    CHECK(angle->newly_captured);
    CHECK(angle->identifying_header ==
          std::vector<Signal>{s1.signal, s2.signal});
    CHECK(angle->qual.at("turn") == "turn_r");

    // identical second presentation re-excites the same detector
    auto again = eng.run_stage("ang", {s1, s2});
    REQUIRE(again.has_value());
    CHECK_FALSE(again->newly_captured);
    CHECK(again->structural_response == angle->structural_response);

    // same class, different magnitudes: same ZI and SZI, new detector
    const StageInput s3 = segment_input(eng, 0, 9);
    const StageInput s4 = segment_input(eng, 5, 3);
    auto other = eng.run_stage("ang", {s3, s4});
    REQUIRE(other.has_value());
    CHECK(other->zone == angle->zone);
    CHECK(other->subzone == angle->subzone);
    CHECK(other->structural_response != angle->structural_response);
}

TEST_CASE("angle with coincident orientations takes the equality branch") {
    // Two straight runs whose orientations land in the same bucket: the
    // comparison coincides, no decomposition runs, the class carries the
    // coincidence-count quality.
    Substrate sub;
    StageEngine eng(sub);
    const StageInput a = segment_input(eng, 3, 9);
    const StageInput b = segment_input(eng, 3, 5);
    auto angle = eng.run_stage("ang", {a, b});
    REQUIRE(angle.has_value());
    CHECK(angle->qual.at("turn") == "turn_eq");
    CHECK(angle->qual.at("lench") == "len_v");
    bool has_eq = false;
    for (const auto& s : angle->characteristic_responses)
        if (s == "turn_eq#2") has_eq = true;
    CHECK(has_eq);

    // end to end: a bent polyline whose two edges stay within one bucket
    Substrate sub2;
    const Grid g = shape_grid({{2, 16}, {16, 15}, {30, 12}}, false);
    const auto r = run_pipeline(sub2, g);
    REQUIRE(r.figures.size() == 1);
    REQUIRE(r.figures[0].angles.size() == 1);
    CHECK(r.figures[0].angles[0].qual.at("turn") == "turn_eq");
}

TEST_CASE("run_pipeline: triangle lifts to 3 segments, 3 angles, one figure") {
    Substrate sub;
    const Grid g = shape_grid({{2, 2}, {14, 2}, {2, 14}}, true);
    const PipelineResult r = run_pipeline(sub, g);
    REQUIRE(r.figures.size() == 1);
    const auto& fp = r.figures[0];
    CHECK(fp.segments.size() == 3);
    CHECK(fp.angles.size() == 3);
    REQUIRE(r.scene.has_value());

    // part-whole: the figure header consists of angle signals
    std::set<Signal> angle_signals;
    for (const auto& a : fp.angles) angle_signals.insert(a.signal);
    for (const auto& h : fp.figure.identifying_header)
        CHECK(angle_signals.count(h) == 1);

    // stage-0 partition: segment lengths sum to the trace length
    std::size_t total = 0;
    for (const auto& s : fp.segments)
        total += static_cast<std::size_t>(s.quant.at("len"));
    CHECK(total == fp.trace.points.size());
}

TEST_CASE("run_pipeline: blank grid yields nothing, reruns are stable") {
    Substrate sub;
    CHECK_FALSE(run_pipeline(sub, Grid(16, 16)).scene.has_value());

    const Grid g = shape_grid({{2, 2}, {10, 2}, {10, 10}, {2, 10}}, true);
    const auto first = run_pipeline(sub, g);
    const auto second = run_pipeline(sub, g);
    REQUIRE(first.scene.has_value());
    REQUIRE(second.scene.has_value());
    CHECK(first.scene->structural_response == second.scene->structural_response);
    CHECK_FALSE(second.figures[0].figure.newly_captured);
}

TEST_CASE("run_pipeline: translated grid reaches the same final detector") {
    Substrate sub;
    const Grid a = shape_grid({{2, 2}, {10, 2}, {10, 10}, {2, 10}}, true);
    const Grid b = shape_grid({{7, 5}, {15, 5}, {15, 13}, {7, 13}}, true);
    const auto ra = run_pipeline(sub, a);
    const auto rb = run_pipeline(sub, b);
    REQUIRE(ra.scene.has_value());
    REQUIRE(rb.scene.has_value());
    CHECK(ra.scene->structural_response == rb.scene->structural_response);
    CHECK(ra.figures[0].figure.structural_response ==
          rb.figures[0].figure.structural_response);
}

TEST_CASE("run_pipeline: two figures feed one scene") {
    Substrate sub;
    Grid g(48, 48);
    for (const auto& cell :
         shape_grid({{2, 2}, {10, 2}, {10, 10}, {2, 10}}, true, 48).one_cells())
        g.set(cell, true);
    for (const auto& cell :
         shape_grid({{24, 24}, {36, 24}, {24, 36}}, true, 48).one_cells())
        g.set(cell, true);
    const auto r = run_pipeline(sub, g);
    CHECK(r.figures.size() == 2);
    REQUIRE(r.scene.has_value());
    CHECK(r.scene->identifying_header.size() == 2);
    bool has_count = false;
    for (const auto& s : r.scene->characteristic_responses)
        if (s == "cnt#2") has_count = true;
    CHECK(has_count);
}

TEST_CASE("step algebra: every stage group is step1, step2*, step3") {
    Substrate sub;
    const Grid g = shape_grid({{2, 2}, {14, 2}, {2, 14}}, true);
    run_pipeline(sub, g);
    int open_group = 0;
    for (const auto& line : sub.trace_log()) {
        if (line.find("ev=step1") != std::string::npos) {
            CHECK(open_group == 0);
            open_group = 1;
        } else if (line.find("ev=step2") != std::string::npos) {
            CHECK(open_group == 1);
        } else if (line.find("ev=step3") != std::string::npos) {
            CHECK(open_group == 1);
            open_group = 0;
        }
    }
    CHECK(open_group == 0);
}

TEST_CASE("classifying/identifying split under exact matching") {
    Config cfg;
    cfg.genus1_match_threshold = 1.0; // exact-only classes
    Substrate sub(cfg);
    const Grid sq1 = shape_grid({{2, 2}, {10, 2}, {10, 10}, {2, 10}}, true);
    const Grid sq2 = shape_grid({{3, 3}, {17, 3}, {17, 17}, {3, 17}}, true);
    const Grid tri = shape_grid({{2, 2}, {14, 2}, {2, 14}}, true);
    const auto r1 = run_pipeline(sub, sq1);
    const auto r2 = run_pipeline(sub, sq2);
    const auto r3 = run_pipeline(sub, tri);
    // equal qualitative sequences share ZI + SZI
    CHECK(r1.figures[0].figure.zone == r2.figures[0].figure.zone);
    CHECK(r1.figures[0].figure.subzone == r2.figures[0].figure.subzone);
    // quantitative differences split identifying detectors only
    CHECK(r1.figures[0].figure.structural_response !=
          r2.figures[0].figure.structural_response);
    // different qualitative sequences split the class
    const bool same_class =
        r1.figures[0].figure.zone == r3.figures[0].figure.zone &&
        r1.figures[0].figure.subzone == r3.figures[0].figure.subzone;
    CHECK_FALSE(same_class);
}

TEST_CASE("figure wff symbols are position-free and class-stable") {
    Substrate sub;
    const Grid a = shape_grid({{2, 2}, {10, 2}, {10, 10}, {2, 10}}, true);
    const Grid b = shape_grid({{7, 5}, {15, 5}, {15, 13}, {7, 13}}, true);
    const auto ra = run_pipeline(sub, a);
    const auto rb = run_pipeline(sub, b);
    CHECK(ra.figures[0].wff_symbols == rb.figures[0].wff_symbols);
    // quantitative tail differs across scales, classful prefix survives
    const Grid big = shape_grid({{2, 2}, {18, 2}, {18, 18}, {2, 18}}, true, 32);
    const auto rbig = run_pipeline(sub, big);
    const auto& wa = ra.figures[0].wff_symbols;
    const auto& wb = rbig.figures[0].wff_symbols;
    CHECK(wa != wb);
    CHECK(std::equal(wa.begin(), wa.begin() + 7, wb.begin()));
}
