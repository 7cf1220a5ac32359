#include "fis/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "fis/errors.hpp"
#include "fis/kernel.hpp"

namespace fis {

namespace {

// Characteristic zone names. Direction zones carry the classifying binary
// outputs of decomposition; magnitudes are the detector indexes inside them.
constexpr const char* kCount = "cnt";
constexpr const char* kOrient = "orient";
constexpr const char* kLength = "len";
constexpr const char* kClosure = "cls";
constexpr const char* kOrdering = "ord";

std::string eq_zone_of(const std::string& characteristic) {
    if (characteristic == kOrient) return "turn_eq";
    if (characteristic == kLength) return "len_eq";
    return kCount;
}

std::string zone_of_signal(const Signal& s) {
    const auto hash = s.find('#');
    return hash == std::string::npos ? s : s.substr(0, hash);
}

std::string pos_token(CellPoint p) {
    return "p" + std::to_string(p.col) + "_" + std::to_string(p.row);
}

} // namespace

const Mode* ModeVector::pb() const {
    for (const auto& g : groups)
        for (const auto& m : g.modes)
            if (!m.value.empty()) return &m;
    return nullptr;
}

const Mode* ModeVector::pe() const {
    const Mode* last = nullptr;
    for (const auto& g : groups)
        for (const auto& m : g.modes)
            if (!m.value.empty()) last = &m;
    return last;
}

ModeVector StageEngine::integrate_structural(const std::string& stage,
                                             const std::vector<StageInput>& inputs) {
    ModeVector mv;
    if (inputs.empty()) return mv;
    ModalGroup group;
    group.kind = SlotKind::Structural;
    for (const auto& in : inputs)
        group.modes.push_back({SlotKind::Structural, "", in.signal});
    mv.groups.push_back(std::move(group));

    sub_.trace_event("ev=step1 stage=" + stage + " n=" + std::to_string(inputs.size()) +
                     " pb=" + inputs.front().signal + " pe=" + inputs.back().signal);
    // Echo signals: the vertical locus of every integrated input returns to
    // actual, one input after another; downstream modes fill in this order.
    for (const auto& in : inputs) {
        int touched = 0;
        for (const auto& sig : in.stored) {
            const auto addr = sub_.address_of(sig);
            if (!addr || !sub_.find_live(*addr)) continue;
            const Detector* d = sub_.find_live(*addr);
            sub_.force_state(*addr, ExcitationLevel::Actual,
                             std::max<int>(1, static_cast<int>(
                                                  d->stored_sequence.size())));
            ++touched;
        }
        sub_.trace_event("ev=echo tok=" + in.signal + " n=" + std::to_string(touched));
    }
    return mv;
}

StageEngine::CharIntegration StageEngine::integrate_characteristic(
    const std::string& stage, const std::string& characteristic,
    const std::vector<int>& values_in_t_order) {
    if (values_in_t_order.empty())
        throw PreconditionError("characteristic integration without modes");
    CharIntegration out;
    const bool all_equal =
        std::adjacent_find(values_in_t_order.begin(), values_in_t_order.end(),
                           std::not_equal_to<>()) == values_in_t_order.end();
    sub_.trace_event("ev=compare stage=" + stage + " char=" + characteristic +
                     " coincident=" + (all_equal ? "1" : "0"));
    if (all_equal || characteristic == "zone") {
        // Coincidence: the count detector of this characteristic's
        // coincidence zone responds with the element count.
        out.coincident = true;
        out.response = sub_.excite_value(
            characteristic == "zone" ? kCount : eq_zone_of(characteristic),
            static_cast<int>(values_in_t_order.size()));
        return out;
    }
    if (values_in_t_order.size() != 2)
        throw PreconditionError("difference handoff expects exactly two modes");
    out.coincident = false;
    out.first = values_in_t_order.front();
    out.last = values_in_t_order.back();
    return out;
}

StageEngine::Decomposition StageEngine::decompose_characteristic(
    const std::string& stage, const std::string& characteristic, int first,
    int last) {
    if (first == last)
        throw PreconditionError(
            "decomposition of coincident modes (should have counted at step 1)");
    Decomposition d;
    std::vector<int> walk; // restored chain between pb and pe, exclusive
    if (characteristic == kOrient) {
        const int n = sub_.config().orientation_buckets;
        const int cw = ((last - first) % n + n) % n;
        const int ccw = ((first - last) % n + n) % n;
        // Shortest signed walk in the cyclic bucket space; exact opposites
        // resolve clockwise.
        if (cw <= ccw) {
            d.direction_zone = "turn_r";
            d.magnitude = cw;
            for (int v = (first + 1) % n; v != last; v = (v + 1) % n)
                walk.push_back(v);
        } else {
            d.direction_zone = "turn_l";
            d.magnitude = ccw;
            for (int v = (first - 1 + n) % n; v != last; v = (v - 1 + n) % n)
                walk.push_back(v);
        }
    } else if (characteristic == kLength) {
        d.direction_zone = last > first ? "len_w" : "len_v"; // growth / reduction
        d.magnitude = std::abs(last - first);
        const int step = last > first ? 1 : -1;
        for (int v = first + step; v != last; v += step) walk.push_back(v);
    } else {
        throw ParamError("no ordered zone for characteristic '" + characteristic +
                         "'");
    }
    // Restore the missing chain: the horizontal locus walk excites the
    // intermediate value detectors until pe stops the propagation.
    for (const int v : walk) sub_.excite_value(characteristic, v);
    d.response = sub_.excite_value(d.direction_zone, d.magnitude);
    sub_.trace_event("ev=step2 stage=" + stage + " char=" + characteristic +
                     " dir=" + d.direction_zone + " mag=" +
                     std::to_string(d.magnitude) + " walk=" +
                     std::to_string(walk.size()));
    return d;
}

StageOutput StageEngine::synthesize(const std::string& stage,
                                    const std::vector<Signal>& identifying_header,
                                    const std::vector<Signal>& characteristic_responses,
                                    const std::vector<Signal>& zone_concept,
                                    const std::vector<Signal>& subzone_concept) {
    std::vector<Signal> stored = identifying_header;
    stored.insert(stored.end(), characteristic_responses.begin(),
                  characteristic_responses.end());

    // Zone identifier: the characteristic modal group projects onto the
    // stage's ZIs; an unmatched classifying sequence founds a new zone.
    int zone_id = -1;
    for (const int id : sub_.zones_named(stage)) {
        if (sub_.zone_concept(id) == zone_concept) {
            zone_id = id;
            break;
        }
    }
    if (zone_id < 0) {
        zone_id = sub_.ensure_structural_zone(stage, zone_concept);
    } else {
        sub_.force_state({zone_id, kNoSubzone, kIdentifierIndex},
                         ExcitationLevel::Actual,
                         static_cast<int>(zone_concept.size()));
    }

    // Sub-zone identifier: exact concept first; otherwise alpha competition
    // over partial matches, accepted at the configured threshold (the
    // 1st-genus tolerance); otherwise a new sub-zone is learned.
    int sub_id = -1;
    const Zone& z = sub_.zone(zone_id);
    for (const auto& [sid, subzone] : z.subzones) {
        if (sub_.subzone_concept(zone_id, sid) == subzone_concept) {
            sub_id = sid;
            sub_.force_state({zone_id, sid, kIdentifierIndex},
                             ExcitationLevel::Actual,
                             std::max<int>(1, static_cast<int>(
                                                  subzone_concept.size())));
            break;
        }
    }
    if (sub_id < 0 && !z.subzones.empty() && !subzone_concept.empty()) {
        std::vector<DetectorAddress> candidates;
        std::map<int, std::size_t> scores;
        for (const auto& [sid, subzone] : z.subzones) {
            const std::size_t score = lcs_substring_length(
                subzone_concept, sub_.subzone_concept(zone_id, sid));
            if (score == 0) continue;
            scores[sid] = score;
            const DetectorAddress szi{zone_id, sid, kIdentifierIndex};
            sub_.force_state(szi, ExcitationLevel::Actual, static_cast<int>(score));
            candidates.push_back(szi);
        }
        if (!candidates.empty()) {
            const DetectorAddress winner = sub_.alpha_compete(candidates);
            const auto& wconcept = sub_.subzone_concept(zone_id, winner.subzone);
            const double denom = static_cast<double>(
                std::max(subzone_concept.size(), wconcept.size()));
            const double fraction = scores.at(winner.subzone) / denom;
            if (fraction >= sub_.config().genus1_match_threshold)
                sub_id = winner.subzone;
        }
    }
    if (sub_id < 0) sub_id = sub_.ensure_subzone(zone_id, subzone_concept);

    const bool existed = sub_.find_by_sequence(zone_id, sub_id, stored).has_value();
    const DetectorAddress addr = sub_.capture_free_detector(zone_id, sub_id, stored);
    sub_.excitation_wave(addr);

    StageOutput out;
    out.structural_response = addr;
    out.signal = sub_.signal_of(addr);
    out.identifying_header = identifying_header;
    out.characteristic_responses = characteristic_responses;
    out.zone = zone_id;
    out.subzone = sub_id;
    out.newly_captured = !existed;
    sub_.trace_event("ev=step3 stage=" + stage + " tok=" + out.signal + " zone=" +
                     std::to_string(zone_id) + " sub=" + std::to_string(sub_id) +
                     " new=" + (out.newly_captured ? "1" : "0"));
    return out;
}

StageInput StageEngine::to_input(const StageOutput& out) const {
    StageInput in;
    in.address = out.structural_response;
    in.signal = out.signal;
    in.stored = out.identifying_header;
    in.stored.insert(in.stored.end(), out.characteristic_responses.begin(),
                     out.characteristic_responses.end());
    in.quant = out.quant;
    in.qual = out.qual;
    return in;
}

std::optional<StageOutput> StageEngine::run_segment_stage(const SegmentRun& run) {
    if (run.points.empty()) return std::nullopt;
    // Step 1: the point modes fill the structural group in SBC order; the
    // fundamental position characteristic stays in the vector and out of
    // every concept.
    sub_.trace_event("ev=step1 stage=seg n=" + std::to_string(run.points.size()) +
                     " pb=" + pos_token(run.points.front()) + " pe=" +
                     pos_token(run.points.back()));
    sub_.tick();

    // Step 2: position differences decompose into the orientation direction
    // and the chain length.
    const Signal orient_sig = sub_.excite_value(kOrient, run.orientation);
    const Signal len_sig = sub_.excite_value(kLength, run.length);
    sub_.trace_event("ev=step2 stage=seg char=pos dir=" + orient_sig + " mag=" +
                     std::to_string(run.length));
    sub_.tick();

    StageOutput out = synthesize("seg", {}, {orient_sig, len_sig}, {"seg"},
                                 {orient_sig});
    out.quant[kOrient] = run.orientation;
    out.quant[kLength] = run.length;
    sub_.tick();
    return out;
}

std::optional<StageOutput> StageEngine::run_stage(const std::string& stage,
                                                  const std::vector<StageInput>& inputs,
                                                  std::optional<bool> closed) {
    if (inputs.empty()) return std::nullopt;
    if (stage == "seg")
        throw ParamError("segment stage runs through run_segment_stage");

    integrate_structural(stage, inputs);
    sub_.tick();

    std::vector<Signal> header;
    for (const auto& in : inputs) header.push_back(in.signal);

    std::vector<Signal> responses;
    std::vector<Signal> q_zone{stage};
    std::vector<Signal> q_sub;
    StageOutput out;

    // Zone-class coincidence: counts the integrated elements.
    std::vector<int> zone_ids;
    for (const auto& in : inputs) zone_ids.push_back(in.address.zone);
    const Signal cnt_sig =
        integrate_characteristic(stage, "zone", zone_ids).response;
    responses.push_back(cnt_sig);

    if (stage == "ang") {
        std::vector<int> orients, lengths;
        for (const auto& in : inputs) {
            orients.push_back(in.quant.at(kOrient));
            lengths.push_back(in.quant.at(kLength));
        }
        auto oi = integrate_characteristic(stage, kOrient, orients);
        if (oi.coincident) {
            responses.push_back(oi.response);
            q_sub.push_back(zone_of_signal(oi.response));
            out.qual["turn"] = zone_of_signal(oi.response);
        } else {
            auto d = decompose_characteristic(stage, kOrient, oi.first, oi.last);
            sub_.tick();
            responses.push_back(d.response);
            q_sub.push_back(d.direction_zone);
            out.qual["turn"] = d.direction_zone;
            out.quant["ang"] = d.magnitude;
        }
        auto li = integrate_characteristic(stage, kLength, lengths);
        if (li.coincident) {
            responses.push_back(li.response);
            q_sub.push_back(zone_of_signal(li.response));
            out.qual["lench"] = zone_of_signal(li.response);
        } else {
            auto d = decompose_characteristic(stage, kLength, li.first, li.last);
            sub_.tick();
            responses.push_back(d.response);
            q_sub.push_back(d.direction_zone);
            out.qual["lench"] = d.direction_zone;
            out.quant["ldf"] = d.magnitude;
        }
        q_zone.push_back(cnt_sig);
    } else if (stage == "fig") {
        const Signal cls_sig =
            sub_.excite_value(kClosure, closed.value_or(false) ? 1 : 0);
        responses.push_back(cls_sig);
        q_zone.push_back(cls_sig);
        std::vector<std::string> turns;
        for (const auto& in : inputs) {
            const auto it = in.qual.find("turn");
            if (it != in.qual.end()) turns.push_back(it->second);
        }
        if (!turns.empty()) {
            // Ordered binary quals of the elements form the n-ary quality of
            // the whole image (same ordering = convex, mixed = concave).
            const bool same =
                std::adjacent_find(turns.begin(), turns.end(),
                                   std::not_equal_to<>()) == turns.end();
            const Signal ord_sig = sub_.excite_value(kOrdering, same ? 0 : 1);
            responses.push_back(ord_sig);
            q_sub.insert(q_sub.end(), turns.begin(), turns.end());
        }
    } else if (stage == "scn") {
        q_sub.push_back(cnt_sig);
    } else {
        throw ParamError("unknown stage '" + stage + "'");
    }

    StageOutput result = synthesize(stage, header, responses, q_zone, q_sub);
    result.quant = out.quant;
    result.qual = out.qual;
    result.quant[kCount] = static_cast<int>(inputs.size());
    sub_.tick();
    return result;
}

namespace {

// Canonical cyclic start for closed figures: the rotation minimizing
// (turn sequence, angular values, element lengths, header signals), so the
// class concept does not depend on where the capture landed.
std::size_t canonical_offset(const std::vector<StageOutput>& angles,
                             const std::vector<StageOutput>& segments) {
    const std::size_t k = angles.size();
    if (k < 2) return 0;
    auto key_at = [&](std::size_t off) {
        std::vector<std::string> key;
        for (std::size_t i = 0; i < k; ++i) {
            const auto& a = angles[(off + i) % k];
            const auto it = a.qual.find("turn");
            key.push_back(it == a.qual.end() ? "" : it->second);
        }
        for (std::size_t i = 0; i < k; ++i) {
            const auto& a = angles[(off + i) % k];
            const auto it = a.quant.find("ang");
            key.push_back(std::to_string(it == a.quant.end() ? 0 : it->second));
        }
        if (segments.size() == k)
            for (std::size_t i = 0; i < k; ++i)
                key.push_back(std::to_string(
                    segments[(off + i) % k].quant.at(kLength)));
        for (std::size_t i = 0; i < k; ++i)
            key.push_back(angles[(off + i) % k].signal);
        return key;
    };
    std::size_t best = 0;
    auto best_key = key_at(0);
    for (std::size_t off = 1; off < k; ++off) {
        auto key = key_at(off);
        if (key < best_key) {
            best_key = std::move(key);
            best = off;
        }
    }
    return best;
}

template <typename T>
std::vector<T> rotated_by(const std::vector<T>& v, std::size_t off) {
    std::vector<T> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(v[(off + i) % v.size()]);
    return out;
}

} // namespace

std::vector<std::string> figure_wff_symbols(const FigurePerception& fp) {
    std::vector<std::string> syms{"fig"};
    syms.push_back(Substrate::value_signal(kClosure, fp.trace.closed ? 1 : 0));
    for (const auto& a : fp.angles) {
        const auto it = a.qual.find("turn");
        syms.push_back(it == a.qual.end() ? "turn_eq" : it->second);
    }
    const std::size_t n = fp.angles.empty() ? fp.segments.size() : fp.angles.size();
    syms.push_back(Substrate::value_signal(kCount, static_cast<int>(n)));
    if (!fp.angles.empty()) {
        bool same = true;
        for (std::size_t i = 1; i < fp.angles.size(); ++i)
            if (fp.angles[i].qual.at("turn") != fp.angles[0].qual.at("turn"))
                same = false;
        syms.push_back(Substrate::value_signal(kOrdering, same ? 0 : 1));
        for (const auto& a : fp.angles) {
            const auto it = a.quant.find("ang");
            syms.push_back(Substrate::value_signal(
                "ang", it == a.quant.end() ? 0 : it->second));
        }
    }
    for (const auto& s : fp.segments)
        syms.push_back(Substrate::value_signal(kLength, s.quant.at(kLength)));
    return syms;
}

PipelineResult run_pipeline(Substrate& substrate, const Grid& grid) {
    StageEngine engine(substrate);
    PipelineResult result;
    const int buckets = substrate.config().orientation_buckets;

    for (const K1Symbol& capture : scan_capture(grid)) {
        FigurePerception fp;
        fp.trace = trace_contour(grid, capture);
        const auto runs = extract_segment_runs(fp.trace, buckets);
        for (const auto& run : runs) {
            auto seg = engine.run_segment_stage(run);
            if (seg) fp.segments.push_back(std::move(*seg));
        }
        if (fp.segments.empty()) continue;

        // Angle grouping: consecutive segment pairs in execution order,
        // wrapping for closed contours.
        const std::size_t k = fp.segments.size();
        if (k >= 2) {
            const std::size_t pairs = fp.trace.closed ? k : k - 1;
            for (std::size_t i = 0; i < pairs; ++i) {
                std::vector<StageInput> pair;
                pair.push_back(engine.to_input(fp.segments[i]));
                pair.push_back(engine.to_input(fp.segments[(i + 1) % k]));
                auto angle = engine.run_stage("ang", pair);
                if (angle) fp.angles.push_back(std::move(*angle));
            }
        }

        if (fp.trace.closed && fp.angles.size() >= 2) {
            const std::size_t off = canonical_offset(fp.angles, fp.segments);
            fp.angles = rotated_by(fp.angles, off);
            if (fp.segments.size() == fp.angles.size())
                fp.segments = rotated_by(fp.segments, off);
        }

        std::vector<StageInput> fig_inputs;
        if (!fp.angles.empty())
            for (const auto& a : fp.angles) fig_inputs.push_back(engine.to_input(a));
        else
            for (const auto& s : fp.segments)
                fig_inputs.push_back(engine.to_input(s));
        auto figure = engine.run_stage("fig", fig_inputs, fp.trace.closed);
        if (!figure) continue;
        fp.figure = std::move(*figure);
        fp.wff_symbols = figure_wff_symbols(fp);
        result.figures.push_back(std::move(fp));
    }

    if (!result.figures.empty()) {
        std::vector<StageInput> scene_inputs;
        for (const auto& fp : result.figures)
            scene_inputs.push_back(engine.to_input(fp.figure));
        auto scene = engine.run_stage("scn", scene_inputs);
        if (scene) {
            result.scene = std::move(*scene);
            result.scene_wff.push_back("scn");
            result.scene_wff.push_back(Substrate::value_signal(
                kCount, static_cast<int>(result.figures.size())));
            for (const auto& fp : result.figures)
                result.scene_wff.push_back(
                    "z" + std::to_string(fp.figure.zone) + "." +
                    std::to_string(fp.figure.subzone));
        }
    }
    return result;
}

} // namespace fis
