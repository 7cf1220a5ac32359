#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fis/dss.hpp"
#include "fis/grid.hpp"
#include "fis/perception.hpp"
#include "fis/substrate.hpp"

namespace fis {

// Characteristic taxonomy used by the stage table. Basic characteristics
// order the mode vectors (SBC is the only implemented value), fundamental
// position rides along in mode vectors but never enters concepts, derived
// characteristics come out of comparison.
enum class SlotKind { Structural, Characteristic };

struct Mode {
    SlotKind slot_kind = SlotKind::Structural;
    std::string characteristic; // empty for structural modes
    Signal value;               // empty until interpreted
};

struct ModalGroup {
    SlotKind kind = SlotKind::Structural;
    std::string characteristic;
    std::vector<Mode> modes;
};

struct ModeVector {
    std::vector<ModalGroup> groups;
    const Mode* pb() const; // first occupied mode
    const Mode* pe() const; // last occupied mode
};

// One unit of previous-stage output as the next stage consumes it.
struct StageInput {
    DetectorAddress address;
    Signal signal;
    std::vector<Signal> stored;              // vertical locus signals
    std::map<std::string, int> quant;        // e.g. orient -> bucket, len -> cells
    std::map<std::string, std::string> qual; // e.g. turn -> turn_r
};

struct StageOutput {
    DetectorAddress structural_response;
    Signal signal;
    std::vector<Signal> identifying_header;       // child structural signals
    std::vector<Signal> characteristic_responses; // classifying + quantitative
    int zone = 0;
    int subzone = kNoSubzone;
    bool newly_captured = false;
    std::map<std::string, int> quant;
    std::map<std::string, std::string> qual;
};

// Three-step stage engine over one substrate. Processors hold no memory of
// their own; every durable thing lives in detectors and identifiers.
class StageEngine {
public:
    explicit StageEngine(Substrate& substrate) : sub_(substrate) {}

    // Step 1, processor A: assembles the structural mode vector in SBC order
    // and echoes every input's vertical locus to actual, fixing t-order.
    ModeVector integrate_structural(const std::string& stage,
                                    const std::vector<StageInput>& inputs);

    // Step 1, processors B_i: compares the two mode values of one
    // characteristic. Coincidence excites a count/eq response; difference
    // hands off to decomposition.
    struct CharIntegration {
        bool coincident = false;
        Signal response;     // set when coincident
        int first = 0;       // pb / pe projections for the decomposition step
        int last = 0;
    };
    CharIntegration integrate_characteristic(const std::string& stage,
                                             const std::string& characteristic,
                                             const std::vector<int>& values_in_t_order);

    // Step 2, processors C_i: walks the ordered characteristic zone from the
    // pb projection to the pe projection, restoring the intermediate chain.
    struct Decomposition {
        std::string direction_zone; // classifying binary output
        int magnitude = 0;          // identifying output (walk step count)
        Signal response;
    };
    Decomposition decompose_characteristic(const std::string& stage,
                                           const std::string& characteristic,
                                           int first, int last);

    // Step 3, processor D: projects the characteristic modal group onto the
    // stage's zone identifiers, routes through the matching SZI (alpha
    // competition on partial matches) and captures/recognizes the
    // identifying detector.
    StageOutput synthesize(const std::string& stage,
                           const std::vector<Signal>& identifying_header,
                           const std::vector<Signal>& characteristic_responses,
                           const std::vector<Signal>& zone_concept,
                           const std::vector<Signal>& subzone_concept);

    // One full stage over one input group (angles take segment pairs, the
    // figure stage takes all angles of a contour, the scene stage all
    // figures). `closed` feeds the figure-stage closure characteristic.
    std::optional<StageOutput> run_stage(const std::string& stage,
                                         const std::vector<StageInput>& inputs,
                                         std::optional<bool> closed = std::nullopt);

    // Stage 0: lifts one straight run of trace points to a segment
    // presentation (position decomposes into orientation + length).
    std::optional<StageOutput> run_segment_stage(const SegmentRun& run);

    StageInput to_input(const StageOutput& out) const;
    Substrate& substrate() { return sub_; }

private:
    Substrate& sub_;
};

struct FigurePerception {
    Trace trace;
    std::vector<StageOutput> segments;
    std::vector<StageOutput> angles;
    StageOutput figure;
    std::vector<std::string> wff_symbols; // position-free presentation image
};

struct PipelineResult {
    std::vector<FigurePerception> figures;
    std::optional<StageOutput> scene;
    std::vector<std::string> scene_wff;
};

// Perception + stages 0..3. Deterministic; the final scene response is the
// input "dot" for any later coordinate stage.
PipelineResult run_pipeline(Substrate& substrate, const Grid& grid);

// The position-free symbol image of a figure presentation, as numbered by
// the kernel layer.
std::vector<std::string> figure_wff_symbols(const FigurePerception& figure);

} // namespace fis
