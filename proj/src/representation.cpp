#include "fis/representation.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <sstream>

#include "fis/errors.hpp"

namespace fis {

std::string sd_kind_name(SdKind kind) {
    switch (kind) {
        case SdKind::ObjectClass: return "object";
        case SdKind::Process: return "process";
        case SdKind::Membership: return "membership";
        case SdKind::Interconnection: return "interconnection";
    }
    return "?";
}

std::optional<SdKind> sd_kind_from(const std::string& name) {
    if (name == "object") return SdKind::ObjectClass;
    if (name == "process") return SdKind::Process;
    if (name == "membership") return SdKind::Membership;
    if (name == "interconnection") return SdKind::Interconnection;
    return std::nullopt;
}

std::string verdict_status_name(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::ActuallyTrue: return "actually-true";
        case VerdictStatus::ConditionallyTrue: return "conditionally-true";
        case VerdictStatus::False: return "false";
        case VerdictStatus::Undecidable: return "undecidable";
    }
    return "?";
}

bool same_verdict(const Verdict& a, const Verdict& b) {
    return a.status == b.status && a.falsity_criterion == b.falsity_criterion &&
           a.bindings == b.bindings;
}

bool Hypothesis::ground() const {
    for (const auto& s : slots)
        if (s.kind == Slot::Kind::Variable || s.kind == Slot::Kind::Anonymous)
            return false;
    return true;
}

std::string Hypothesis::to_line() const {
    std::string out;
    if (negated) out += "not ";
    out += name + "(";
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (i) out += ",";
        switch (slots[i].kind) {
            case Slot::Kind::Ground: out += slots[i].text; break;
            case Slot::Kind::Variable: out += "?" + slots[i].text; break;
            case Slot::Kind::Anonymous: out += "_"; break;
            case Slot::Kind::Negated: out += "!" + slots[i].text; break;
        }
    }
    out += ")";
    return out;
}

// --- grammar -----------------------------------------------------------------

namespace {

bool symbol_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
           (c >= '0' && c <= '9') || c == '_' || c == ':' || c == '.' || c == '-';
}

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    std::string take_symbol() {
        const std::size_t start = pos;
        while (pos < text.size() && symbol_char(text[pos])) ++pos;
        if (pos == start) throw ParseError("expected a symbol", start);
        return text.substr(start, pos - start);
    }
};

} // namespace

Hypothesis parse_hypothesis(const std::string& text) {
    Cursor c{text};
    Hypothesis h;
    c.skip_ws();
    if (text.compare(c.pos, 4, "not ") == 0) {
        h.negated = true;
        c.pos += 4;
        c.skip_ws();
    }
    h.name = c.take_symbol();
    c.skip_ws();
    if (c.eof() || c.peek() != '(')
        throw ParseError("expected '(' after hypothesis name", c.pos);
    ++c.pos;
    for (;;) {
        c.skip_ws();
        if (c.eof()) throw ParseError("unterminated actant list", c.pos);
        Slot slot;
        if (c.peek() == '?') {
            ++c.pos;
            slot.kind = Slot::Kind::Variable;
            slot.text = c.take_symbol();
        } else if (c.peek() == '!') {
            if (h.negated)
                throw ParseError(
                    "formula negation cannot combine with actant negation", c.pos);
            ++c.pos;
            slot.kind = Slot::Kind::Negated;
            slot.text = c.take_symbol();
        } else {
            slot.text = c.take_symbol();
            slot.kind = slot.text == "_" ? Slot::Kind::Anonymous : Slot::Kind::Ground;
            if (slot.kind == Slot::Kind::Anonymous) slot.text.clear();
        }
        h.slots.push_back(std::move(slot));
        c.skip_ws();
        if (c.eof()) throw ParseError("unterminated actant list", c.pos);
        if (c.peek() == ',') {
            ++c.pos;
            continue;
        }
        if (c.peek() == ')') {
            ++c.pos;
            break;
        }
        throw ParseError("expected ',' or ')'", c.pos);
    }
    c.skip_ws();
    if (!c.eof()) throw ParseError("trailing input after hypothesis", c.pos);
    return h;
}

// --- alphabet & rules ----------------------------------------------------------

SemanticDeterminer& Z2Store::ensure_sd(const std::string& symbol, SdKind kind) {
    auto it = alphabet_.find(symbol);
    if (it == alphabet_.end()) {
        SemanticDeterminer sd;
        sd.symbol = symbol;
        sd.kind = kind;
        it = alphabet_.emplace(symbol, std::move(sd)).first;
    }
    return it->second;
}

const SemanticDeterminer* Z2Store::find_sd(const std::string& symbol) const {
    const auto it = alphabet_.find(symbol);
    return it == alphabet_.end() ? nullptr : &it->second;
}

void Z2Store::bind(const std::string& symbol, AxiomIndex index, bool primary) {
    auto it = alphabet_.find(symbol);
    if (it == alphabet_.end())
        throw PreconditionError("binding an undeclared SD '" + symbol + "'");
    auto& b = it->second.bindings;
    const auto found = std::find(b.begin(), b.end(), index);
    if (primary) {
        if (found != b.end()) b.erase(found);
        b.insert(b.begin(), index);
    } else if (found == b.end()) {
        b.push_back(index);
    }
}

void Z2Store::declare_rule(const std::string& name, int arity,
                           const std::vector<std::string>& slot_classes) {
    if (arity < 1) throw ParamError("predicate arity must be positive");
    if (!slot_classes.empty() && static_cast<int>(slot_classes.size()) != arity)
        throw ParamError("slot class count must match arity");
    X2Rule rule;
    rule.name = name;
    rule.arity = arity;
    rule.slot_classes = slot_classes;
    if (rule.slot_classes.empty())
        rule.slot_classes.assign(static_cast<std::size_t>(arity), "any");
    for (const auto& cls : rule.slot_classes)
        if (cls != "any" && !sd_kind_from(cls))
            throw ParamError("unknown slot class '" + cls + "'");
    rules_[name] = std::move(rule);
}

const X2Rule* Z2Store::rule_of(const std::string& name) const {
    const auto it = rules_.find(name);
    return it == rules_.end() ? nullptr : &it->second;
}

void Z2Store::declare_contradiction(const std::string& a, const std::string& b) {
    if (!contradicts(a, b)) contradictions_.emplace_back(a, b);
}

bool Z2Store::contradicts(const std::string& a, const std::string& b) const {
    for (const auto& [x, y] : contradictions_)
        if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
}

// --- teaching -------------------------------------------------------------------

Concept Z2Store::teach(AxiomBase& z1, const std::vector<AxiomIndex>& presentations,
                       const std::string& label) {
    if (presentations.size() < 2)
        throw PreconditionError("teaching needs at least two presentations");
    std::optional<Wff> minimal;
    for (std::size_t i = 0; i < presentations.size(); ++i) {
        for (std::size_t j = i + 1; j < presentations.size(); ++j) {
            const auto common = AxiomBase::intersect(z1.wff_of(presentations[i]),
                                                     z1.wff_of(presentations[j]));
            if (!common)
                throw Error("no common feature between presentations " +
                            std::to_string(presentations[i]) + " and " +
                            std::to_string(presentations[j]));
            if (!minimal || common->symbols.size() < minimal->symbols.size())
                minimal = common;
        }
    }
    const AxiomIndex concept_index = z1.number_axiom(*minimal);
    ensure_sd(label, SdKind::ObjectClass);
    bind(label, concept_index, /*primary=*/true);
    for (const AxiomIndex p : presentations) bind(label, p);

    Concept c;
    c.class_id = label;
    c.sequence = minimal->symbols;
    const auto prev = taught_.find(label);
    c.stability_count = prev != taught_.end() && prev->second.sequence == c.sequence
                            ? prev->second.stability_count + 1
                            : 1;
    taught_[label] = c;
    return c;
}

AxiomIndex Z2Store::ensure_synthetic_binding(AxiomBase& z1, const std::string& symbol,
                                             SdKind kind) {
    ensure_sd(symbol, kind);
    Wff w;
    w.characteristic = "sd";
    w.symbols = {"sd:" + symbol};
    const AxiomIndex i = z1.number_axiom(w);
    auto& sd = alphabet_.at(symbol);
    if (sd.bindings.empty()) sd.bindings.push_back(i);
    return i;
}

void Z2Store::add_chain_triple(AxiomBase& z1, const std::string& a,
                               const std::string& b, const std::string& c) {
    const AxiomIndex fa = ensure_synthetic_binding(z1, a, SdKind::ObjectClass);
    const AxiomIndex fb = ensure_synthetic_binding(z1, b, SdKind::Process);
    const AxiomIndex fc = ensure_synthetic_binding(z1, c, SdKind::ObjectClass);
    z1.add_chain(fa, fb);
    z1.add_chain(fb, fc);
}

void Z2Store::assert_fact(AxiomBase& z1, const Hypothesis& ground) {
    if (!ground.ground())
        throw PreconditionError("facts must be fully ground");
    const X2Rule* rule = rule_of(ground.name);
    if (!rule) {
        declare_rule(ground.name, static_cast<int>(ground.slots.size()), {});
        ensure_sd(ground.name, SdKind::Process);
    }
    const AxiomIndex fp =
        ensure_synthetic_binding(z1, ground.name, SdKind::Process);
    for (const auto& slot : ground.slots) {
        if (slot.kind != Slot::Kind::Ground) continue;
        const AxiomIndex fs =
            ensure_synthetic_binding(z1, slot.text, SdKind::ObjectClass);
        if (!ground.negated) z1.add_chain(fp, fs);
    }
    if (std::find(a2_.begin(), a2_.end(), ground) == a2_.end())
        a2_.push_back(ground);
}

std::vector<AxiomIndex> Z2Store::locus_of_symbol(const AxiomBase& z1,
                                                 const std::string& symbol) const {
    const SemanticDeterminer* sd = find_sd(symbol);
    if (!sd || sd->bindings.empty()) return {};
    return z1.chain_neighbors(sd->primary());
}

// --- resolution ------------------------------------------------------------------

namespace {

bool kind_matches(SdKind kind, const std::string& slot_class) {
    if (slot_class == "any") return true;
    const auto want = sd_kind_from(slot_class);
    return want && *want == kind;
}

// Distinct variables of a hypothesis in first-occurrence order. Anonymous
// slots are variables with synthesized private names.
struct VariableSet {
    std::vector<std::string> order;                   // internal keys
    std::map<std::string, std::vector<std::size_t>> slots_of;
    std::map<std::string, std::string> report_name;   // key -> ?name, "" if anon
};

VariableSet collect_variables(const Hypothesis& h) {
    VariableSet vs;
    for (std::size_t i = 0; i < h.slots.size(); ++i) {
        const auto& s = h.slots[i];
        std::string key;
        if (s.kind == Slot::Kind::Variable)
            key = "?" + s.text;
        else if (s.kind == Slot::Kind::Anonymous)
            key = "_" + std::to_string(i);
        else
            continue;
        if (!vs.slots_of.count(key)) {
            vs.order.push_back(key);
            vs.report_name[key] = s.kind == Slot::Kind::Variable ? s.text : "";
        }
        vs.slots_of[key].push_back(i);
    }
    return vs;
}

} // namespace

struct Z2Store::ResolveCtx {
    const AxiomBase& z1;
    const Hypothesis& h;
    const Z2Store& store;
    const X2Rule* rule = nullptr;
    std::vector<AxiomIndex> locus = {};
    long steps = 0;

    std::string slot_class(std::size_t i) const {
        if (!rule || i >= rule->slot_classes.size()) return "any";
        return rule->slot_classes[i];
    }

    // Linear locus scan; every examined member counts as one step.
    bool in_locus(AxiomIndex p) {
        for (const AxiomIndex q : locus) {
            ++steps;
            if (q == p) return true;
        }
        return false;
    }
};

std::optional<int> Z2Store::hereditary_conflict(const Hypothesis& grounded) const {
    // Criterion 3: a stored sentence of the same name agreeing on one ground
    // actant and differing on another contradicts the hypothesis.
    auto conflicts_with_store = [&](const Hypothesis& h) {
        for (const auto& s : a2_) {
            if (s.negated || s.name != h.name || s.slots.size() != h.slots.size())
                continue;
            bool agree = false, differ = false;
            for (std::size_t i = 0; i < h.slots.size(); ++i) {
                if (h.slots[i].kind != Slot::Kind::Ground) continue;
                if (s.slots[i].kind != Slot::Kind::Ground) continue;
                if (s.slots[i].text == h.slots[i].text)
                    agree = true;
                else
                    differ = true;
            }
            if (agree && differ) return true;
        }
        return false;
    };
    if (conflicts_with_store(grounded)) return 3;

    // Criterion 4, one level deep: follow each class actant's membership
    // chain once; a member that conflicts with the store (same-name clash or
    // a declared contradictory event) refutes the hypothesis hereditarily.
    for (std::size_t t = 0; t < grounded.slots.size(); ++t) {
        if (grounded.slots[t].kind != Slot::Kind::Ground) continue;
        const std::string& cls = grounded.slots[t].text;
        const SemanticDeterminer* cls_sd = find_sd(cls);
        if (!cls_sd || cls_sd->kind != SdKind::ObjectClass) continue;
        for (const auto& member_fact : a2_) {
            if (member_fact.negated || member_fact.slots.size() != 2) continue;
            const SemanticDeterminer* msd = find_sd(member_fact.name);
            if (!msd || msd->kind != SdKind::Membership) continue;
            if (member_fact.slots[1].text != cls) continue;
            const std::string& member = member_fact.slots[0].text;
            for (const auto& s : a2_) {
                if (s.negated) continue;
                if (!contradicts(s.name, grounded.name)) continue;
                for (const auto& slot : s.slots)
                    if (slot.kind == Slot::Kind::Ground && slot.text == member)
                        return 4;
            }
            Hypothesis substituted = grounded;
            substituted.slots[t].text = member;
            if (conflicts_with_store(substituted)) return 4;
        }
    }
    return std::nullopt;
}

Verdict Z2Store::resolve_scheme1(const AxiomBase& z1, const Hypothesis& h,
                                 bool actant_negation) const {
    ResolveCtx ctx{z1, h, *this};
    ctx.rule = rule_of(h.name);
    Verdict v;

    auto fail = [&](int criterion) {
        v.status = VerdictStatus::False;
        v.falsity_criterion = criterion;
        v.steps = ctx.steps;
        return v;
    };

    // Step 1: identify the process and the ground objects (criterion 1).
    const SemanticDeterminer* psd = find_sd(h.name);
    if (!psd || psd->bindings.empty()) return fail(1);
    if (ctx.rule && ctx.rule->arity != static_cast<int>(h.slots.size()))
        return fail(1);
    for (const auto& slot : h.slots) {
        if (slot.kind != Slot::Kind::Ground) continue;
        const SemanticDeterminer* sd = find_sd(slot.text);
        if (!sd || sd->bindings.empty()) return fail(1);
    }

    ctx.locus = z1.chain_neighbors(psd->primary());

    // Step 2/3: locus membership (criterion 2). A negated actant must be
    // absent from the locus; an unknown negated symbol is absent trivially.
    for (const auto& slot : h.slots) {
        if (slot.kind == Slot::Kind::Ground) {
            const SemanticDeterminer* sd = find_sd(slot.text);
            if (!ctx.in_locus(sd->primary())) return fail(2);
        } else if (slot.kind == Slot::Kind::Negated) {
            const SemanticDeterminer* sd = find_sd(slot.text);
            if (sd && !sd->bindings.empty() && ctx.in_locus(sd->primary()))
                return fail(2);
        }
    }
    (void)actant_negation;

    // Criteria 3 and 4 over the stored base.
    if (const auto crit = hereditary_conflict(h)) return fail(*crit);

    // Variable interpretation from the locus; unbindable variables leave
    // the hypothesis conditionally true.
    const VariableSet vars = collect_variables(h);
    std::map<AxiomIndex, std::vector<const SemanticDeterminer*>> by_presentation;
    if (!vars.order.empty())
        for (const auto& [sym, sd] : alphabet_)
            if (!sd.bindings.empty()) by_presentation[sd.primary()].push_back(&sd);

    std::map<std::string, std::string> chosen;
    for (const auto& key : vars.order) {
        const SemanticDeterminer* pick = nullptr;
        for (const AxiomIndex p : ctx.locus) {
            ++ctx.steps;
            if (pick) continue; // scan completes; first match already chosen
            const auto it = by_presentation.find(p);
            if (it == by_presentation.end()) continue;
            for (const SemanticDeterminer* sd : it->second) {
                bool ok = true;
                for (const std::size_t slot : vars.slots_of.at(key))
                    if (!kind_matches(sd->kind, ctx.slot_class(slot))) ok = false;
                if (ok) {
                    pick = sd;
                    break;
                }
            }
        }
        if (!pick) {
            v.status = VerdictStatus::ConditionallyTrue;
            v.steps = ctx.steps;
            return v;
        }
        chosen[key] = pick->symbol;
    }

    v.status = VerdictStatus::ActuallyTrue;
    for (const auto& [key, sym] : chosen)
        if (!vars.report_name.at(key).empty())
            v.bindings[vars.report_name.at(key)] = sym;
    for (std::size_t i = 0; i < h.slots.size(); ++i) {
        const auto& s = h.slots[i];
        if (s.kind == Slot::Kind::Ground || s.kind == Slot::Kind::Negated)
            v.grounded_slots.push_back(s.text);
        else if (s.kind == Slot::Kind::Variable)
            v.grounded_slots.push_back(chosen.at("?" + s.text));
        else
            v.grounded_slots.push_back(chosen.at("_" + std::to_string(i)));
    }
    v.steps = ctx.steps;
    return v;
}

Verdict Z2Store::resolve_scheme2(const AxiomBase& z1, const Hypothesis& h) const {
    Verdict v;
    Hypothesis positive = h;
    positive.negated = false;

    if (positive.ground()) {
        // Ground duality: the negation is true exactly when the positive
        // fails; a holding positive refutes it on the locus check.
        Verdict pos = resolve_scheme1(z1, positive, false);
        v.steps = pos.steps;
        if (pos.status == VerdictStatus::ActuallyTrue) {
            v.status = VerdictStatus::False;
            v.falsity_criterion = 2;
        } else {
            v.status = VerdictStatus::ActuallyTrue;
            for (const auto& s : h.slots) v.grounded_slots.push_back(s.text);
        }
        return v;
    }

    // With variables the scheme is locus-only: the negation holds if some
    // interpretation leaves the core unsatisfied, the lexicographically first
    // such interpretation supplying the bindings.
    ResolveCtx ctx{z1, h, *this};
    ctx.rule = rule_of(h.name);
    const SemanticDeterminer* psd = find_sd(h.name);
    bool core_grounds_hold = psd && !psd->bindings.empty() &&
                             !(ctx.rule && ctx.rule->arity !=
                                               static_cast<int>(h.slots.size()));
    if (core_grounds_hold) ctx.locus = z1.chain_neighbors(psd->primary());
    if (core_grounds_hold) {
        for (const auto& slot : h.slots) {
            if (slot.kind != Slot::Kind::Ground) continue;
            const SemanticDeterminer* sd = find_sd(slot.text);
            if (!sd || sd->bindings.empty() || !ctx.in_locus(sd->primary())) {
                core_grounds_hold = false;
                break;
            }
        }
    }

    const VariableSet vars = collect_variables(h);
    // Candidate lists per variable: kind-matching alphabet symbols, sorted.
    std::map<std::string, std::vector<const SemanticDeterminer*>> candidates;
    for (const auto& key : vars.order) {
        auto& list = candidates[key];
        for (const auto& [sym, sd] : alphabet_) {
            if (sd.bindings.empty()) continue;
            bool ok = true;
            for (const std::size_t slot : vars.slots_of.at(key))
                if (!kind_matches(sd.kind, ctx.slot_class(slot))) ok = false;
            if (ok) list.push_back(&sd);
        }
        if (list.empty()) {
            v.status = VerdictStatus::ConditionallyTrue;
            v.steps = ctx.steps;
            return v;
        }
    }

    std::map<std::string, std::string> chosen;
    if (!core_grounds_hold) {
        // Every interpretation falsifies the core; take the first.
        for (const auto& key : vars.order) chosen[key] = candidates[key][0]->symbol;
    } else {
        // One locus sweep per variable tells which candidates can escape it.
        std::set<AxiomIndex> locus_set;
        for (const AxiomIndex p : ctx.locus) {
            ++ctx.steps;
            locus_set.insert(p);
        }
        std::map<std::string, const SemanticDeterminer*> first_outside;
        for (const auto& key : vars.order) {
            const SemanticDeterminer* outside = nullptr;
            for (const SemanticDeterminer* sd : candidates[key]) {
                if (!locus_set.count(sd->primary())) {
                    outside = sd;
                    break;
                }
            }
            if (outside) first_outside[key] = outside;
        }
        if (first_outside.empty()) {
            v.status = VerdictStatus::False;
            v.falsity_criterion = 2;
            v.steps = ctx.steps;
            return v;
        }
        bool escaped = false;
        for (std::size_t i = 0; i < vars.order.size(); ++i) {
            const auto& key = vars.order[i];
            bool later_can_escape = false;
            for (std::size_t j = i + 1; j < vars.order.size(); ++j)
                if (first_outside.count(vars.order[j])) later_can_escape = true;
            if (escaped || later_can_escape || !first_outside.count(key)) {
                chosen[key] = candidates[key][0]->symbol;
                if (first_outside.count(key) &&
                    candidates[key][0] == first_outside.at(key))
                    escaped = true;
            } else {
                chosen[key] = first_outside.at(key)->symbol;
                escaped = true;
            }
        }
    }

    v.status = VerdictStatus::ActuallyTrue;
    for (const auto& [key, sym] : chosen)
        if (!vars.report_name.at(key).empty())
            v.bindings[vars.report_name.at(key)] = sym;
    for (std::size_t i = 0; i < h.slots.size(); ++i) {
        const auto& s = h.slots[i];
        if (s.kind == Slot::Kind::Ground)
            v.grounded_slots.push_back(s.text);
        else if (s.kind == Slot::Kind::Variable)
            v.grounded_slots.push_back(chosen.at("?" + s.text));
        else
            v.grounded_slots.push_back(chosen.at("_" + std::to_string(i)));
    }
    v.steps = ctx.steps;
    return v;
}

Verdict Z2Store::resolve(const AxiomBase& z1, const Hypothesis& h) const {
    if (!link_enabled_) {
        // Isolated store: only what already sits in A2 stays decidable.
        Verdict v;
        if (h.ground() &&
            std::find(a2_.begin(), a2_.end(), h) != a2_.end()) {
            v.status = VerdictStatus::ActuallyTrue;
            for (const auto& s : h.slots) v.grounded_slots.push_back(s.text);
        } else {
            v.status = VerdictStatus::Undecidable;
        }
        return v;
    }

    // Membership sentence equivalence: is-a(<symbol>) is true iff
    // the symbol's presentation is identified in z1.
    const SemanticDeterminer* psd = find_sd(h.name);
    if (psd && psd->kind == SdKind::Membership && h.slots.size() == 1 &&
        h.slots[0].kind == Slot::Kind::Ground) {
        Verdict v;
        const SemanticDeterminer* sd = find_sd(h.slots[0].text);
        const bool identified = sd && !sd->bindings.empty();
        const bool truth = h.negated ? !identified : identified;
        if (truth) {
            v.status = VerdictStatus::ActuallyTrue;
            v.grounded_slots.push_back(h.slots[0].text);
        } else {
            v.status = VerdictStatus::False;
            v.falsity_criterion = h.negated ? 2 : 1;
        }
        return v;
    }

    if (h.negated) return resolve_scheme2(z1, h);
    bool actant_negation = false;
    for (const auto& s : h.slots)
        if (s.kind == Slot::Kind::Negated) actant_negation = true;
    return resolve_scheme1(z1, h, actant_negation);
}

void Z2Store::commit_verdict(AxiomBase& z1, const Hypothesis& h, const Verdict& v) {
    switch (v.status) {
        case VerdictStatus::Undecidable:
            throw PreconditionError("cannot commit an undecidable verdict");
        case VerdictStatus::ActuallyTrue: {
            Hypothesis ground = h;
            for (std::size_t i = 0; i < ground.slots.size(); ++i) {
                if (ground.slots[i].kind == Slot::Kind::Variable ||
                    ground.slots[i].kind == Slot::Kind::Anonymous) {
                    ground.slots[i].kind = Slot::Kind::Ground;
                    ground.slots[i].text = v.grounded_slots.at(i);
                }
            }
            assert_fact(z1, ground);
            break;
        }
        case VerdictStatus::False: {
            const auto entry = std::make_pair(h, v.falsity_criterion);
            if (std::find(r2_.begin(), r2_.end(), entry) == r2_.end())
                r2_.push_back(entry);
            break;
        }
        case VerdictStatus::ConditionallyTrue:
            if (std::find(pending_.begin(), pending_.end(), h) == pending_.end())
                pending_.push_back(h);
            break;
    }
}

// --- persistence ------------------------------------------------------------------

void Z2Store::serialize(std::ostream& out) const {
    for (const auto& [sym, sd] : alphabet_) {
        out << "sd " << sym << " " << sd_kind_name(sd.kind);
        for (const AxiomIndex b : sd.bindings) out << " " << b;
        out << "\n";
    }
    for (const auto& [name, rule] : rules_) {
        out << "xrule " << name << " " << rule.arity;
        for (const auto& cls : rule.slot_classes) out << " " << cls;
        out << "\n";
    }
    for (const auto& [a, b] : contradictions_) out << "contra " << a << " " << b << "\n";
    for (const auto& [label, c] : taught_) {
        out << "tcon " << label << " " << c.stability_count;
        for (const auto& s : c.sequence) out << " " << s;
        out << "\n";
    }
    for (const auto& h : a2_) out << "a2 " << h.to_line() << "\n";
    for (const auto& [h, crit] : r2_) out << "r2 " << crit << " " << h.to_line() << "\n";
    for (const auto& h : pending_) out << "pend " << h.to_line() << "\n";
}

void Z2Store::load_record(const std::string& tag, const std::string& rest,
                          std::size_t line_no) {
    std::istringstream is(rest);
    if (tag == "sd") {
        std::string sym, kind;
        if (!(is >> sym >> kind)) throw FormatError("malformed sd record", line_no);
        const auto k = sd_kind_from(kind);
        if (!k) throw FormatError("unknown SD kind '" + kind + "'", line_no);
        auto& sd = ensure_sd(sym, *k);
        AxiomIndex b = 0;
        while (is >> b) sd.bindings.push_back(b);
    } else if (tag == "xrule") {
        std::string name;
        int arity = 0;
        if (!(is >> name >> arity)) throw FormatError("malformed xrule record", line_no);
        std::vector<std::string> classes;
        std::string cls;
        while (is >> cls) classes.push_back(cls);
        declare_rule(name, arity, classes);
    } else if (tag == "contra") {
        std::string a, b;
        if (!(is >> a >> b)) throw FormatError("malformed contra record", line_no);
        contradictions_.emplace_back(a, b);
    } else if (tag == "tcon") {
        std::string label;
        int stability = 0;
        if (!(is >> label >> stability))
            throw FormatError("malformed tcon record", line_no);
        Concept c;
        c.class_id = label;
        c.stability_count = stability;
        std::string s;
        while (is >> s) c.sequence.push_back(s);
        taught_[label] = std::move(c);
    } else if (tag == "a2" || tag == "pend") {
        try {
            const Hypothesis h = parse_hypothesis(rest);
            (tag == "a2" ? a2_ : pending_).push_back(h);
        } catch (const ParseError& e) {
            throw FormatError(std::string("bad hypothesis: ") + e.what(), line_no);
        }
    } else if (tag == "r2") {
        std::istringstream rs(rest);
        int crit = 0;
        if (!(rs >> crit)) throw FormatError("malformed r2 record", line_no);
        std::string line;
        std::getline(rs, line);
        if (!line.empty() && line.front() == ' ') line.erase(line.begin());
        try {
            r2_.emplace_back(parse_hypothesis(line), crit);
        } catch (const ParseError& e) {
            throw FormatError(std::string("bad hypothesis: ") + e.what(), line_no);
        }
    } else {
        throw FormatError("unknown z2 record '" + tag + "'", line_no);
    }
}

} // namespace fis
