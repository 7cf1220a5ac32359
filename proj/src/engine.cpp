#include "fis/engine.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "fis/errors.hpp"

namespace fis {

Engine::Engine(Config cfg) : substrate_(cfg) {}

Engine::Perception Engine::perceive(const Grid& grid) {
    Perception result;
    PipelineResult pr = run_pipeline(substrate_, grid);
    for (auto& fp : pr.figures) {
        FigureResult fr;
        fr.output = fp.figure;
        fr.wff_symbols = fp.wff_symbols;
        Wff w;
        w.characteristic = "sbc";
        w.symbols = fp.wff_symbols;
        const bool known = kernel_.identify(w).has_value();
        fr.axiom = kernel_.number_axiom(w);
        fr.new_axiom = !known;
        axiom_detector_[fr.axiom] = fp.figure.signal;
        substrate_.trace_event("ev=presentation ax=" + std::to_string(fr.axiom) +
                               " tok=" + fp.figure.signal +
                               (fr.new_axiom ? " new=1" : " new=0"));
        result.figures.push_back(std::move(fr));
    }
    if (pr.scene) {
        Wff w;
        w.characteristic = "sbc";
        w.symbols = pr.scene_wff;
        result.scene_axiom = kernel_.number_axiom(w);
        result.scene = pr.scene;
        axiom_detector_[*result.scene_axiom] = pr.scene->signal;
        substrate_.trace_event("ev=presentation ax=" +
                               std::to_string(*result.scene_axiom) + " tok=" +
                               pr.scene->signal + " scene=1");
    }
    return result;
}

std::vector<Engine::Recognition> Engine::recognize(const Grid& grid) {
    std::vector<Recognition> out;
    const Perception p = perceive(grid);
    for (const auto& fr : p.figures) {
        Recognition r;
        r.axiom = fr.axiom;
        r.address = fr.output.signal;
        r.zone = fr.output.zone;
        r.subzone = fr.output.subzone;
        // A taught class matches when its concept is a contiguous substring
        // of the presentation image; the longest matching concept wins, like
        // competition by coincident chain length.
        std::size_t best_len = 0;
        for (const auto& [label, cls] : z2_.taught_concepts()) {
            const auto& seq = cls.sequence;
            if (seq.empty() || seq.size() > fr.wff_symbols.size()) continue;
            if (seq.size() <= best_len) continue;
            for (std::size_t i = 0; i + seq.size() <= fr.wff_symbols.size(); ++i) {
                if (std::equal(seq.begin(), seq.end(), fr.wff_symbols.begin() + i)) {
                    r.label = label;
                    best_len = seq.size();
                    break;
                }
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<AxiomIndex> Engine::dormant_axioms() const {
    std::vector<AxiomIndex> out;
    for (const auto& [ax, sig] : axiom_detector_)
        if (!substrate_.find_by_signal(sig)) out.push_back(ax);
    return out;
}

std::optional<Signal> Engine::detector_of_axiom(AxiomIndex i) const {
    const auto it = axiom_detector_.find(i);
    if (it == axiom_detector_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> Engine::learn_corpus(
    std::istream& corpus, bool teacher,
    const std::function<Grid(const std::string&)>& load_grid_file) {
    std::vector<std::string> report;
    std::vector<AxiomIndex> self_sample;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(corpus, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        std::string tag;
        is >> tag;
        if (tag == "label" || tag == "sample") {
            std::string sd;
            if (tag == "label" && !(is >> sd))
                throw FormatError("label record needs an SD", line_no);
            std::vector<AxiomIndex> presentations;
            std::string file;
            while (is >> file) {
                const Perception p = perceive(load_grid_file(file));
                for (const auto& fr : p.figures) presentations.push_back(fr.axiom);
            }
            if (tag == "label" && teacher) {
                const Concept c = z2_.teach(kernel_, presentations, sd);
                report.push_back("concept " + sd + " len=" +
                                 std::to_string(c.sequence.size()));
            } else {
                self_sample.insert(self_sample.end(), presentations.begin(),
                                   presentations.end());
            }
        } else if (tag == "pred") {
            std::string name, second;
            if (!(is >> name >> second))
                throw FormatError("malformed pred record", line_no);
            SdKind kind = SdKind::Process;
            int arity = 0;
            if (const auto k = sd_kind_from(second)) {
                kind = *k;
                if (!(is >> arity)) throw FormatError("pred needs an arity", line_no);
            } else {
                try {
                    arity = std::stoi(second);
                } catch (const std::exception&) {
                    throw FormatError("pred needs an arity", line_no);
                }
            }
            std::vector<std::string> classes;
            std::string cls;
            while (is >> cls) classes.push_back(cls);
            z2_.declare_rule(name, arity, classes);
            z2_.ensure_sd(name, kind);
            z2_.ensure_synthetic_binding(kernel_, name, kind);
            report.push_back("pred " + name);
        } else if (tag == "chain") {
            std::string a, b, c;
            if (!(is >> a >> b >> c)) throw FormatError("malformed chain record", line_no);
            z2_.add_chain_triple(kernel_, a, b, c);
            report.push_back("chain " + a + "->" + b + "->" + c);
        } else if (tag == "contra") {
            std::string a, b;
            if (!(is >> a >> b)) throw FormatError("malformed contra record", line_no);
            z2_.declare_contradiction(a, b);
            report.push_back("contra " + a + " " + b);
        } else if (tag == "fact") {
            std::string rest;
            std::getline(is, rest);
            if (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
            try {
                z2_.assert_fact(kernel_, parse_hypothesis(rest));
            } catch (const ParseError& e) {
                throw FormatError(std::string("bad fact: ") + e.what(), line_no);
            }
            report.push_back("fact " + rest);
        } else {
            throw FormatError("unknown corpus record '" + tag + "'", line_no);
        }
    }
    if (!teacher && self_sample.size() >= 2) {
        const auto concepts = kernel_.self_learn(self_sample);
        for (const auto& c : concepts)
            report.push_back("concept " + c.class_id + " len=" +
                             std::to_string(c.sequence.size()));
    }
    return report;
}

void Engine::save(std::ostream& out) const {
    out << "fisstate v1\n";
    out << "config " << config().to_line() << "\n";
    out << "tick " << substrate_.now() << "\n";
    substrate_.serialize(out);
    kernel_.serialize(out);
    for (const auto& [ax, sig] : axiom_detector_)
        out << "axdet " << ax << " " << sig << "\n";
    z2_.serialize(out);
}

std::string Engine::save_to_string() const {
    std::ostringstream os;
    save(os);
    return os.str();
}

Engine Engine::load(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line) || line != "fisstate v1")
        throw FormatError("missing 'fisstate v1' header", 1);
    ++line_no;
    if (!std::getline(in, line) || line.rfind("config ", 0) != 0)
        throw FormatError("missing config line", 2);
    ++line_no;
    Engine engine(Config::from_line(line.substr(7), line_no));
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto sp = line.find(' ');
        const std::string tag = line.substr(0, sp);
        const std::string rest = sp == std::string::npos ? "" : line.substr(sp + 1);
        if (tag == "tick") {
            try {
                engine.substrate_.set_now(std::stoll(rest));
            } catch (const std::exception&) {
                throw FormatError("malformed tick record", line_no);
            }
        } else if (tag == "zone") {
            engine.substrate_.load_zone_record(rest, line_no);
        } else if (tag == "zi") {
            engine.substrate_.load_zi_record(rest, line_no);
        } else if (tag == "det") {
            engine.substrate_.load_det_record(rest, line_no);
        } else if (tag == "ax") {
            engine.kernel_.load_ax_record(rest, line_no);
        } else if (tag == "chain") {
            engine.kernel_.load_chain_record(rest, line_no);
        } else if (tag == "axdet") {
            std::istringstream is(rest);
            AxiomIndex ax = 0;
            Signal sig;
            if (!(is >> ax >> sig)) throw FormatError("malformed axdet record", line_no);
            engine.axiom_detector_[ax] = sig;
        } else {
            engine.z2_.load_record(tag, rest, line_no);
        }
    }
    return engine;
}

bool AlignmentReport::roundtrip_identity() const {
    for (const auto& e : entries) {
        // K: a -> b by common symbol; K^-1 must return the same a.
        for (const auto& f : entries)
            if (f.b_symbol == e.b_symbol && f.a_symbol != e.a_symbol) return false;
        for (const auto& f : entries)
            if (f.a_symbol == e.a_symbol && f.b_symbol != e.b_symbol) return false;
    }
    return true;
}

AlignmentReport align_alphabets(Engine& a, Engine& b,
                                const std::vector<Grid>& shared_objects) {
    AlignmentReport report;
    for (std::size_t k = 0; k < shared_objects.size(); ++k) {
        const auto ra = a.recognize(shared_objects[k]);
        const auto rb = b.recognize(shared_objects[k]);
        if (ra.empty() || rb.empty()) {
            report.skipped.push_back(k);
            continue;
        }
        const std::string label_a = ra.front().label.value_or("");
        const std::string label_b = rb.front().label.value_or("");
        std::string common = label_a.empty() ? label_b : label_a;
        if (common.empty()) common = "obj" + std::to_string(k);

        a.z2().ensure_sd(common, SdKind::ObjectClass);
        a.z2().bind(common, ra.front().axiom);
        b.z2().ensure_sd(common, SdKind::ObjectClass);
        b.z2().bind(common, rb.front().axiom);

        AlignmentEntry entry;
        entry.a_symbol = label_a.empty() ? common : label_a;
        entry.b_symbol = label_b.empty() ? common : label_b;
        entry.common = common;
        report.entries.push_back(std::move(entry));
    }
    report.bijective = report.roundtrip_identity();
    return report;
}

} // namespace fis
