#include "fis/kernel.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "fis/errors.hpp"

namespace fis {

std::size_t lcs_substring_length(const std::vector<std::string>& a,
                                 const std::vector<std::string>& b) {
    std::size_t best = 0;
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
            best = std::max(best, cur[j]);
        }
        std::swap(prev, cur);
    }
    return best;
}

std::string AxiomBase::key_of(const Wff& w) {
    std::string key = w.characteristic;
    for (const auto& s : w.symbols) {
        key.push_back('\x1e');
        key += s;
    }
    return key;
}

bool AxiomBase::well_formed(const Wff& w, std::string* why) {
    if (w.characteristic.empty()) {
        if (why) *why = "missing characteristic";
        return false;
    }
    if (w.symbols.empty()) {
        if (why) *why = "empty symbol sequence";
        return false;
    }
    for (const auto& s : w.symbols) {
        if (s.empty() || s.find_first_of(" \t\n") != std::string::npos) {
            if (why) *why = "symbol with whitespace";
            return false;
        }
    }
    if (w.characteristic.rfind("asc", 0) == 0 &&
        !std::is_sorted(w.symbols.begin(), w.symbols.end())) {
        if (why) *why = "symbols violate the '" + w.characteristic + "' ordering";
        return false;
    }
    return true;
}

AxiomIndex AxiomBase::number_axiom(const Wff& w) {
    std::string why;
    if (!well_formed(w, &why)) {
        const std::string key = key_of(w);
        if (std::find(rejected_.begin(), rejected_.end(), key) == rejected_.end())
            rejected_.push_back(key);
        throw PreconditionError("expression rejected: " + why);
    }
    const std::string key = key_of(w);
    const auto it = reverse_.find(key);
    if (it != reverse_.end()) return it->second;
    const AxiomIndex i = next_++;
    forward_.emplace(i, w);
    reverse_.emplace(key, i);
    return i;
}

std::optional<AxiomIndex> AxiomBase::identify(const Wff& w) const {
    const auto it = reverse_.find(key_of(w));
    if (it == reverse_.end()) return std::nullopt;
    return it->second;
}

const Wff& AxiomBase::wff_of(AxiomIndex i) const {
    const auto it = forward_.find(i);
    if (it == forward_.end())
        throw PreconditionError("no axiom numbered " + std::to_string(i));
    return it->second;
}

std::optional<Wff> AxiomBase::intersect(const Wff& a, const Wff& b) {
    if (a.characteristic != b.characteristic)
        throw ParamError("intersect needs a shared ordering characteristic ('" +
                         a.characteristic + "' vs '" + b.characteristic + "')");
    const auto& x = a.symbols;
    const auto& y = b.symbols;
    // Longest common substring by suffix DP; earliest start in a, then in b.
    std::size_t best_len = 0, best_i = 0;
    std::vector<std::size_t> prev(y.size() + 1, 0), cur(y.size() + 1, 0);
    for (std::size_t i = 1; i <= x.size(); ++i) {
        for (std::size_t j = 1; j <= y.size(); ++j) {
            if (x[i - 1] == y[j - 1]) {
                cur[j] = prev[j - 1] + 1;
                if (cur[j] > best_len) {
                    best_len = cur[j];
                    best_i = i - cur[j];
                }
            } else {
                cur[j] = 0;
            }
        }
        std::swap(prev, cur);
    }
    if (best_len == 0) return std::nullopt;
    Wff out;
    out.characteristic = a.characteristic;
    out.symbols.assign(x.begin() + best_i, x.begin() + best_i + best_len);
    return out;
}

std::vector<Concept> AxiomBase::self_learn(const std::vector<AxiomIndex>& sample) {
    for (const AxiomIndex i : sample)
        if (!contains(i))
            throw PreconditionError("sample presentation " + std::to_string(i) +
                                    " is not numbered");
    std::vector<Concept> concepts;
    if (sample.size() < 2) return concepts;

    std::size_t max_len = 0;
    std::vector<std::vector<std::string>> winners; // distinct, first-seen order
    for (std::size_t i = 0; i < sample.size(); ++i) {
        for (std::size_t j = i + 1; j < sample.size(); ++j) {
            const Wff& wi = wff_of(sample[i]);
            const Wff& wj = wff_of(sample[j]);
            if (wi.characteristic != wj.characteristic) continue;
            const auto common = intersect(wi, wj);
            if (!common) continue;
            if (common->symbols.size() > max_len) {
                max_len = common->symbols.size();
                winners.clear();
            }
            if (common->symbols.size() == max_len &&
                std::find(winners.begin(), winners.end(), common->symbols) ==
                    winners.end())
                winners.push_back(common->symbols);
        }
    }
    if (max_len == 0) return concepts;

    for (const auto& seq : winners) {
        Wff cw;
        cw.characteristic = wff_of(sample.front()).characteristic;
        cw.symbols = seq;
        const AxiomIndex ci = number_axiom(cw); // class axioms join the base
        Concept c;
        c.class_id = "Q" + std::to_string(ci);
        c.sequence = seq;
        c.stability_count = 1;
        concepts.push_back(std::move(c));
    }
    return concepts;
}

void AxiomBase::add_chain(AxiomIndex from, AxiomIndex to) {
    if (!contains(from) || !contains(to))
        throw PreconditionError("chain endpoints must be numbered axioms");
    const auto edge = std::make_pair(from, to);
    if (std::find(chains_.begin(), chains_.end(), edge) == chains_.end())
        chains_.push_back(edge);
}

std::vector<AxiomIndex> AxiomBase::chain_neighbors(AxiomIndex i) const {
    std::vector<AxiomIndex> out;
    auto push = [&](AxiomIndex v) {
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    };
    for (const auto& [from, to] : chains_)
        if (to == i) push(from);
    for (const auto& [from, to] : chains_)
        if (from == i) push(to);
    return out;
}

Z1CheckReport AxiomBase::check_z1_properties() const {
    Z1CheckReport report;
    for (const auto& [i, w] : forward_) {
        const auto it = reverse_.find(key_of(w));
        if (it == reverse_.end()) {
            report.all_numbered = false;
            report.diagnostics.push_back("axiom " + std::to_string(i) +
                                         " missing from the reverse association");
        } else if (it->second != i) {
            report.bijective = false;
            report.diagnostics.push_back(
                "axiom " + std::to_string(i) + " reverse-maps to " +
                std::to_string(it->second));
        }
    }
    for (const auto& [key, i] : reverse_) {
        const auto it = forward_.find(i);
        if (it == forward_.end() || key_of(it->second) != key) {
            report.bijective = false;
            report.diagnostics.push_back("reverse entry for axiom " +
                                         std::to_string(i) + " has no matching WFF");
        }
    }
    for (const auto& key : rejected_) {
        if (reverse_.count(key)) {
            report.no_rejected_stored = false;
            report.diagnostics.push_back("rejected expression stored as axiom " +
                                         std::to_string(reverse_.at(key)));
        }
    }
    AxiomIndex expect = 1;
    for (const auto& [i, w] : forward_) {
        if (i != expect) {
            report.dense = false;
            report.diagnostics.push_back("index gap: expected " +
                                         std::to_string(expect) + ", found " +
                                         std::to_string(i));
            break;
        }
        ++expect;
    }
    return report;
}

void AxiomBase::serialize(std::ostream& out) const {
    for (const auto& [i, w] : forward_) {
        out << "ax " << i << " " << w.characteristic;
        for (const auto& s : w.symbols) out << " " << s;
        out << "\n";
    }
    for (const auto& [from, to] : chains_)
        out << "chain " << from << " -> " << to << "\n";
}

void AxiomBase::load_ax_record(const std::string& rest, std::size_t line_no) {
    std::istringstream is(rest);
    AxiomIndex i = 0;
    Wff w;
    if (!(is >> i >> w.characteristic))
        throw FormatError("malformed ax record", line_no);
    std::string s;
    while (is >> s) w.symbols.push_back(s);
    if (forward_.count(i)) throw FormatError("duplicate axiom index", line_no);
    reverse_.emplace(key_of(w), i); // first association wins; check() audits
    forward_.emplace(i, std::move(w));
    next_ = std::max(next_, i + 1);
}

void AxiomBase::load_chain_record(const std::string& rest, std::size_t line_no) {
    std::istringstream is(rest);
    AxiomIndex from = 0, to = 0;
    std::string arrow;
    if (!(is >> from >> arrow >> to) || arrow != "->")
        throw FormatError("malformed chain record", line_no);
    chains_.emplace_back(from, to);
}

} // namespace fis
