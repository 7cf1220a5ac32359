#pragma once
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fis {

using AxiomIndex = std::uint64_t;

// A well-formed formula of z1: symbols in the order imposed by the named
// characteristic. Most characteristics (sbc, t) take the given order as
// authoritative; names beginning with "asc" demand non-decreasing symbol
// order and make the rejection path testable.
struct Wff {
    std::string characteristic;
    std::vector<std::string> symbols;

    friend bool operator==(const Wff&, const Wff&) = default;
};

struct Concept {
    std::string class_id;
    std::vector<std::string> sequence;
    int stability_count = 0;
};

// Length of the longest common contiguous subsequence of two token lists.
std::size_t lcs_substring_length(const std::vector<std::string>& a,
                                 const std::vector<std::string>& b);

struct Z1CheckReport {
    bool all_numbered = true;
    bool bijective = true;
    bool no_rejected_stored = true;
    bool dense = true;
    std::vector<std::string> diagnostics;
    bool ok() const { return all_numbered && bijective && no_rejected_stored && dense; }
};

// The axiom base A1 = T1: every stored formula is an axiom, numbering is a
// bijection, and indexes are never reused. There is no false-formula store;
// rejected expressions are only remembered as keys so the consistency check
// can witness T1 and R1 staying disjoint.
class AxiomBase {
public:
    // Numbers a novel WFF (next dense index) or returns the existing index.
    // Ill-formed expressions are recorded as rejected and refused.
    AxiomIndex number_axiom(const Wff& w);
    std::optional<AxiomIndex> identify(const Wff& w) const;
    const Wff& wff_of(AxiomIndex i) const;
    bool contains(AxiomIndex i) const { return forward_.count(i) != 0; }
    std::size_t size() const { return forward_.size(); }
    AxiomIndex max_index() const { return next_ - 1; }
    std::size_t rejected_count() const { return rejected_.size(); }

    // Longest common contiguous subsequence; ties resolved to the earliest
    // occurrence in `a`, then in `b`. Empty intersection -> nullopt.
    static std::optional<Wff> intersect(const Wff& a, const Wff& b);

    // Self-learning: groups the sample by maximal pairwise intersections; every
    // distinct maximal-length intersection founds a class. Concepts join the
    // axiom base.
    std::vector<Concept> self_learn(const std::vector<AxiomIndex>& sample);

    void add_chain(AxiomIndex from, AxiomIndex to);
    const std::vector<std::pair<AxiomIndex, AxiomIndex>>& chains() const {
        return chains_;
    }
    // Direct chain predecessors then successors, first-seen order.
    std::vector<AxiomIndex> chain_neighbors(AxiomIndex i) const;

    Z1CheckReport check_z1_properties() const;

    void serialize(std::ostream& out) const;
    void load_ax_record(const std::string& rest, std::size_t line_no);
    void load_chain_record(const std::string& rest, std::size_t line_no);

private:
    static std::string key_of(const Wff& w);
    static bool well_formed(const Wff& w, std::string* why);

    std::map<AxiomIndex, Wff> forward_;
    std::map<std::string, AxiomIndex> reverse_;
    std::vector<std::string> rejected_;
    std::vector<std::pair<AxiomIndex, AxiomIndex>> chains_;
    AxiomIndex next_ = 1;
};

} // namespace fis
