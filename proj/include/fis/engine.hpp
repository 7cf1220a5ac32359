#pragma once
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fis/config.hpp"
#include "fis/kernel.hpp"
#include "fis/pipeline.hpp"
#include "fis/representation.hpp"
#include "fis/substrate.hpp"

namespace fis {

// One FIS instance: substrate + axiom base + representation store, driven by
// perception. Instances are plain values; two of them interact only through
// align_alphabets.
class Engine {
public:
    explicit Engine(Config cfg = {});

    Substrate& substrate() { return substrate_; }
    const Substrate& substrate() const { return substrate_; }
    AxiomBase& kernel() { return kernel_; }
    const AxiomBase& kernel() const { return kernel_; }
    Z2Store& z2() { return z2_; }
    const Z2Store& z2() const { return z2_; }
    const Config& config() const { return substrate_.config(); }

    struct FigureResult {
        AxiomIndex axiom = 0;
        bool new_axiom = false;
        StageOutput output;
        std::vector<std::string> wff_symbols;
    };
    struct Perception {
        std::vector<FigureResult> figures;
        std::optional<AxiomIndex> scene_axiom;
        std::optional<StageOutput> scene;
    };
    // Runs the full pipeline and numbers the figure and scene presentations.
    Perception perceive(const Grid& grid);

    struct Recognition {
        AxiomIndex axiom = 0;
        Signal address;
        int zone = 0;
        int subzone = kNoSubzone;
        std::optional<std::string> label; // taught SD whose concept matches
    };
    // Perceive then identify each figure against the taught concepts.
    std::vector<Recognition> recognize(const Grid& grid);

    // Axioms whose identifying detector has been forgotten stay numbered and
    // are reported dormant.
    std::vector<AxiomIndex> dormant_axioms() const;
    std::optional<Signal> detector_of_axiom(AxiomIndex i) const;

    // Teacher corpus: label/pred/chain/contra/fact/sample records; grids are
    // fetched through `load_grid_file`. Returns one report line per record.
    std::vector<std::string> learn_corpus(
        std::istream& corpus, bool teacher,
        const std::function<Grid(const std::string&)>& load_grid_file);

    void save(std::ostream& out) const;
    std::string save_to_string() const;
    static Engine load(std::istream& in);

private:
    Substrate substrate_;
    AxiomBase kernel_;
    Z2Store z2_;
    std::map<AxiomIndex, Signal> axiom_detector_;
};

struct AlignmentEntry {
    std::string a_symbol;
    std::string b_symbol;
    std::string common;
};

struct AlignmentReport {
    std::vector<AlignmentEntry> entries;
    std::vector<std::size_t> skipped; // indexes of shared grids not perceived
    bool bijective = true;

    // K followed by K^-1 must be the identity on the shared vocabulary.
    bool roundtrip_identity() const;
};

// Requirement 1: both instances perceive the shared objects and bind their
// (generally different) axiom indexes to one common K2 symbol.
AlignmentReport align_alphabets(Engine& a, Engine& b,
                                const std::vector<Grid>& shared_objects);

} // namespace fis
