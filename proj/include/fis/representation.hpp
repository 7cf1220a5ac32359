#pragma once
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fis/kernel.hpp"

namespace fis {

enum class SdKind { ObjectClass, Process, Membership, Interconnection };

std::string sd_kind_name(SdKind kind);
std::optional<SdKind> sd_kind_from(const std::string& name);

// A K2 symbol. Bindings are z1 axiom indexes the symbol implies; the first
// binding is primary and anchors locus membership.
struct SemanticDeterminer {
    std::string symbol;
    SdKind kind = SdKind::ObjectClass;
    std::vector<AxiomIndex> bindings;

    AxiomIndex primary() const { return bindings.empty() ? 0 : bindings.front(); }
};

// The X2 syntactic rule of one predicate/sentence name: actant count and the
// SD kind admitted in each slot ("any" admits every kind).
struct X2Rule {
    std::string name;
    int arity = 0;
    std::vector<std::string> slot_classes;
};

struct Slot {
    enum class Kind { Ground, Variable, Anonymous, Negated };
    Kind kind = Kind::Ground;
    std::string text; // symbol or variable name

    friend bool operator==(const Slot&, const Slot&) = default;
};

struct Hypothesis {
    bool negated = false; // whole-formula negation
    std::string name;
    std::vector<Slot> slots;

    bool ground() const;
    std::string to_line() const;
    friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

// Canonical grammar: ["not" SP] NAME "(" slot {"," slot} ")" with
// slot = SYMBOL | "?"IDENT | "_" | "!"SYMBOL. Formula negation and actant
// negation never combine. Throws ParseError with the byte position.
Hypothesis parse_hypothesis(const std::string& text);

enum class VerdictStatus { ActuallyTrue, ConditionallyTrue, False, Undecidable };

std::string verdict_status_name(VerdictStatus s);

struct Verdict {
    VerdictStatus status = VerdictStatus::Undecidable;
    std::map<std::string, std::string> bindings; // named variables only
    int falsity_criterion = 0;                   // 1..4 when status == False
    long steps = 0; // locus-member examinations (resolution step bound)
    std::vector<std::string> grounded_slots;     // full grounding when true
};

bool same_verdict(const Verdict& a, const Verdict& b); // status+criterion+bindings

// The representation system of one engine instance: alphabet, rules,
// contradiction pairs, taught concepts, and the A2/T2/R2/pending stores.
class Z2Store {
public:
    // --- alphabet & rules ------------------------------------------------
    SemanticDeterminer& ensure_sd(const std::string& symbol, SdKind kind);
    const SemanticDeterminer* find_sd(const std::string& symbol) const;
    void bind(const std::string& symbol, AxiomIndex index, bool primary = false);
    const std::map<std::string, SemanticDeterminer>& alphabet() const {
        return alphabet_;
    }

    void declare_rule(const std::string& name, int arity,
                      const std::vector<std::string>& slot_classes);
    const X2Rule* rule_of(const std::string& name) const;
    void declare_contradiction(const std::string& a, const std::string& b);
    bool contradicts(const std::string& a, const std::string& b) const;

    // --- teaching with labels ----------------------------------------------
    // Binds the label to the minimum-length pairwise intersection of the
    // labeled presentations; single iteration, no sample replay.
    Concept teach(AxiomBase& z1, const std::vector<AxiomIndex>& presentations,
                  const std::string& label);
    const std::map<std::string, Concept>& taught_concepts() const {
        return taught_;
    }

    // Ground assertion: joins A2 and wires the z1 chain locus of its name.
    void assert_fact(AxiomBase& z1, const Hypothesis& ground);
    void add_chain_triple(AxiomBase& z1, const std::string& a, const std::string& b,
                          const std::string& c);

    // --- resolution --------------------------------------------------------
    void set_link_enabled(bool enabled) { link_enabled_ = enabled; }
    bool link_enabled() const { return link_enabled_; }

    Verdict resolve(const AxiomBase& z1, const Hypothesis& h) const;
    void commit_verdict(AxiomBase& z1, const Hypothesis& h, const Verdict& v);

    const std::vector<Hypothesis>& a2() const { return a2_; }
    const std::vector<std::pair<Hypothesis, int>>& r2() const { return r2_; }
    const std::vector<Hypothesis>& pending() const { return pending_; }

    // Locus of a symbol: chain predecessors + successors of its primary
    // presentation, in first-seen order.
    std::vector<AxiomIndex> locus_of_symbol(const AxiomBase& z1,
                                            const std::string& symbol) const;

    // Ensures a synthetic z1 presentation backs the symbol (alphabet
    // closure for process-like SDs that no grid perception produces).
    AxiomIndex ensure_synthetic_binding(AxiomBase& z1, const std::string& symbol,
                                        SdKind kind);

    // --- persistence --------------------------------------------------------
    void serialize(std::ostream& out) const;
    void load_record(const std::string& tag, const std::string& rest,
                     std::size_t line_no);

private:
    struct ResolveCtx;
    Verdict resolve_scheme1(const AxiomBase& z1, const Hypothesis& h,
                            bool actant_negation) const;
    Verdict resolve_scheme2(const AxiomBase& z1, const Hypothesis& h) const;
    std::optional<int> hereditary_conflict(const Hypothesis& grounded) const;

    std::map<std::string, SemanticDeterminer> alphabet_;
    std::map<std::string, X2Rule> rules_;
    std::vector<std::pair<std::string, std::string>> contradictions_;
    std::map<std::string, Concept> taught_;
    std::vector<Hypothesis> a2_;
    std::vector<std::pair<Hypothesis, int>> r2_;
    std::vector<Hypothesis> pending_;
    bool link_enabled_ = true;
};

} // namespace fis
