#include "fis/substrate.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "fis/errors.hpp"

namespace fis {

std::string level_name(ExcitationLevel level) {
    switch (level) {
        case ExcitationLevel::Actual: return "actual";
        case ExcitationLevel::Latent: return "latent";
        case ExcitationLevel::Residual: return "residual";
    }
    return "?";
}

std::string join_signals(const std::vector<Signal>& seq, char sep) {
    std::string out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) out.push_back(sep);
        out += seq[i];
    }
    return out;
}

Substrate::Substrate(Config cfg) : config_(cfg) { config_.validate(); }

// --- zone management -----------------------------------------------------

int Substrate::ensure_structural_zone(const std::string& name,
                                      const std::vector<Signal>& concept_seq) {
    for (int id : zones_named(name)) {
        const Zone& z = zones_.at(id);
        const auto zi = z.detectors.find(kIdentifierIndex);
        if (zi != z.detectors.end() && zi->second.stored_sequence == concept_seq)
            return id;
    }
    const int id = next_zone_id_++;
    Zone z;
    z.id = id;
    z.structural = true;
    z.name = name;
    zones_.emplace(id, std::move(z));
    zones_by_name_[name].push_back(id);

    Detector zi;
    zi.address = {id, kNoSubzone, kIdentifierIndex};
    zi.stored_sequence = concept_seq;
    zi.state = {ExcitationLevel::Actual, static_cast<int>(concept_seq.size()), 0};
    zi.last_excited_tick = now_;
    zi.exposure_count = 1;
    index_signal(zi);
    zones_.at(id).detectors.emplace(kIdentifierIndex, std::move(zi));
    trace_event("ev=zone id=" + std::to_string(id) + " kind=struct name=" + name +
                " concept=" + join_signals(concept_seq));
    return id;
}

std::vector<int> Substrate::zones_named(const std::string& name) const {
    const auto it = zones_by_name_.find(name);
    return it == zones_by_name_.end() ? std::vector<int>{} : it->second;
}

int Substrate::ensure_subzone(int zone_id, const std::vector<Signal>& concept_seq) {
    Zone& z = zones_.at(zone_id);
    for (const auto& [sid, sub] : z.subzones) {
        const auto szi = sub.detectors.find(kIdentifierIndex);
        if (szi != sub.detectors.end() && szi->second.stored_sequence == concept_seq)
            return sid;
    }
    const int sid = z.subzones.empty() ? 0 : z.subzones.rbegin()->first + 1;
    SubZone sub;
    sub.id = sid;
    Detector szi;
    szi.address = {zone_id, sid, kIdentifierIndex};
    szi.stored_sequence = concept_seq;
    szi.state = {ExcitationLevel::Actual, static_cast<int>(concept_seq.size()), 0};
    szi.last_excited_tick = now_;
    szi.exposure_count = 1;
    index_signal(szi);
    sub.detectors.emplace(kIdentifierIndex, std::move(szi));
    z.subzones.emplace(sid, std::move(sub));
    trace_event("ev=subzone zone=" + std::to_string(zone_id) + " id=" +
                std::to_string(sid) + " concept=" + join_signals(concept_seq));
    return sid;
}

const Zone& Substrate::zone(int id) const {
    const auto it = zones_.find(id);
    if (it == zones_.end())
        throw PreconditionError("unknown zone " + std::to_string(id));
    return it->second;
}

ZoneIdentifierView Substrate::zone_identifier(int zone_id) const {
    const Zone& z = zone(zone_id);
    ZoneIdentifierView view;
    view.zone = zone_id;
    view.concept_seq = zone_concept(zone_id);
    for (const auto& [idx, d] : z.detectors)
        if (idx != kIdentifierIndex) view.children.push_back(idx);
    for (const auto& [sid, sub] : z.subzones) {
        const auto szi = sub.detectors.find(kIdentifierIndex);
        view.subidentifiers.emplace_back(
            sid, szi == sub.detectors.end() ? std::vector<Signal>{}
                                            : szi->second.stored_sequence);
    }
    return view;
}

const std::vector<Signal>& Substrate::zone_concept(int zone_id) const {
    static const std::vector<Signal> empty;
    const Zone& z = zone(zone_id);
    const auto zi = z.detectors.find(kIdentifierIndex);
    return zi == z.detectors.end() ? empty : zi->second.stored_sequence;
}

const std::vector<Signal>& Substrate::subzone_concept(int zone_id, int sub) const {
    static const std::vector<Signal> empty;
    const Zone& z = zone(zone_id);
    const auto sit = z.subzones.find(sub);
    if (sit == z.subzones.end())
        throw PreconditionError("unknown subzone " + std::to_string(sub));
    const auto szi = sit->second.detectors.find(kIdentifierIndex);
    return szi == sit->second.detectors.end() ? empty : szi->second.stored_sequence;
}

// --- characteristic values -------------------------------------------------

Signal Substrate::value_signal(const std::string& zone_name, int value) {
    return zone_name + "#" + std::to_string(value);
}

Signal Substrate::excite_value(const std::string& zone_name, int value) {
    int zone_id = -1;
    for (int id : zones_named(zone_name))
        if (!zones_.at(id).structural) zone_id = id;
    if (zone_id < 0) {
        zone_id = next_zone_id_++;
        Zone z;
        z.id = zone_id;
        z.structural = false;
        z.name = zone_name;
        zones_.emplace(zone_id, std::move(z));
        zones_by_name_[zone_name].push_back(zone_id);
        trace_event("ev=zone id=" + std::to_string(zone_id) +
                    " kind=char name=" + zone_name);
    }
    Zone& z = zones_.at(zone_id);
    auto it = z.detectors.find(value);
    if (it == z.detectors.end()) {
        Detector d;
        d.address = {zone_id, kNoSubzone, value};
        d.state = {ExcitationLevel::Actual, 1, 0};
        d.last_excited_tick = now_;
        d.exposure_count = 1;
        index_signal(d);
        it = z.detectors.emplace(value, std::move(d)).first;
        z.allocated++;
        z.next_index = std::max(z.next_index, value + 1);
        trace_event("ev=capture tok=" + value_signal(zone_name, value) +
                    " grade=1 dup=0");
    } else {
        re_excite(it->second.address);
    }
    return value_signal(zone_name, value);
}

// --- detectors --------------------------------------------------------------

Signal Substrate::signal_of(const DetectorAddress& a) const {
    const Zone& z = zone(a.zone);
    if (!z.structural && !a.is_identifier()) return value_signal(z.name, a.index);
    std::string s = z.structural ? "s" + std::to_string(a.zone) : z.name;
    if (a.subzone != kNoSubzone) s += "." + std::to_string(a.subzone);
    if (a.is_identifier())
        s += "@zi";
    else
        s += "#" + std::to_string(a.index);
    return s;
}

std::optional<DetectorAddress> Substrate::address_of(const Signal& s) const {
    const auto it = signal_index_.find(s);
    if (it == signal_index_.end()) return std::nullopt;
    return it->second;
}

void Substrate::index_signal(const Detector& d) {
    signal_index_[signal_of(d.address)] = d.address;
}

std::map<int, Detector>& Substrate::bucket_for(int zone_id, int subzone) {
    Zone& z = zones_.at(zone_id);
    if (subzone == kNoSubzone) return z.detectors;
    const auto it = z.subzones.find(subzone);
    if (it == z.subzones.end())
        throw PreconditionError("unknown subzone " + std::to_string(subzone) +
                                " in zone " + std::to_string(zone_id));
    return it->second.detectors;
}

DetectorAddress Substrate::capture_free_detector(int zone_id, int subzone,
                                                 const std::vector<Signal>& seq) {
    if (seq.empty())
        throw PreconditionError("cannot capture a detector for an empty sequence");
    if (!zones_.count(zone_id))
        throw PreconditionError("unknown zone " + std::to_string(zone_id));
    auto& bucket = bucket_for(zone_id, subzone);
    for (auto& [idx, d] : bucket) {
        if (idx == kIdentifierIndex) continue;
        if (d.stored_sequence == seq) {
            re_excite(d.address);
            trace_event("ev=capture tok=" + signal_of(d.address) + " grade=" +
                        std::to_string(d.state.grade) + " dup=1");
            return d.address;
        }
    }
    Zone& z = zones_.at(zone_id);
    Detector d;
    d.address = {zone_id, subzone, z.next_index++};
    d.stored_sequence = seq;
    d.state = {ExcitationLevel::Actual, static_cast<int>(seq.size()), 0};
    d.last_excited_tick = now_;
    d.exposure_count = 1;
    z.allocated++;
    index_signal(d);
    const DetectorAddress addr = d.address;
    bucket.emplace(addr.index, std::move(d));
    trace_event("ev=capture tok=" + signal_of(addr) + " grade=" +
                std::to_string(seq.size()) + " dup=0 seq=" + join_signals(seq));
    return addr;
}

std::optional<DetectorAddress> Substrate::find_by_sequence(
    int zone_id, int subzone, const std::vector<Signal>& seq) const {
    const auto zit = zones_.find(zone_id);
    if (zit == zones_.end()) return std::nullopt;
    const std::map<int, Detector>* bucket = &zit->second.detectors;
    if (subzone != kNoSubzone) {
        const auto sit = zit->second.subzones.find(subzone);
        if (sit == zit->second.subzones.end()) return std::nullopt;
        bucket = &sit->second.detectors;
    }
    for (const auto& [idx, d] : *bucket) {
        if (idx == kIdentifierIndex) continue;
        if (d.stored_sequence == seq) return d.address;
    }
    return std::nullopt;
}

const Detector* Substrate::find_live(const DetectorAddress& a) const {
    const auto zit = zones_.find(a.zone);
    if (zit == zones_.end()) return nullptr;
    const std::map<int, Detector>* bucket = &zit->second.detectors;
    if (a.subzone != kNoSubzone) {
        const auto sit = zit->second.subzones.find(a.subzone);
        if (sit == zit->second.subzones.end()) return nullptr;
        bucket = &sit->second.detectors;
    }
    const auto dit = bucket->find(a.index);
    return dit == bucket->end() ? nullptr : &dit->second;
}

Detector* Substrate::find_live_mut(const DetectorAddress& a) {
    return const_cast<Detector*>(std::as_const(*this).find_live(a));
}

const Detector* Substrate::find_by_signal(const Signal& s) const {
    const auto a = address_of(s);
    return a ? find_live(*a) : nullptr;
}

void Substrate::set_actual(Detector& d, int grade) {
    d.state = {ExcitationLevel::Actual, grade, 0};
    d.last_excited_tick = now_;
}

void Substrate::re_excite(const DetectorAddress& a) {
    Detector* d = find_live_mut(a);
    if (!d) throw PreconditionError("re_excite of a free detector");
    set_actual(*d, std::max<int>(1, static_cast<int>(d->stored_sequence.size())));
    d->exposure_count++;
}

void Substrate::force_state(const DetectorAddress& a, ExcitationLevel level, int grade) {
    Detector* d = find_live_mut(a);
    if (!d) throw PreconditionError("force_state of a free detector");
    d->state = {level, grade, 0};
    if (level == ExcitationLevel::Actual) d->last_excited_tick = now_;
}

DetectorAddress Substrate::alpha_compete(
    const std::vector<DetectorAddress>& candidates) {
    if (candidates.empty())
        throw PreconditionError("alpha_compete needs at least one candidate");
    const Detector* best = nullptr;
    bool tie_seen = false;
    for (const auto& a : candidates) {
        const Detector* d = find_live(a);
        if (!d || d->state.level != ExcitationLevel::Actual)
            throw PreconditionError("alpha_compete candidate not in actual state");
        if (!best || d->state.grade > best->state.grade) {
            best = d;
        } else if (d->state.grade == best->state.grade) {
            tie_seen = true;
            if (d->address < best->address) best = d;
        }
    }
    const DetectorAddress winner = best->address;
    for (const auto& a : candidates) {
        if (a == winner) continue;
        Detector* d = find_live_mut(a);
        d->state = {ExcitationLevel::Latent, 1, 0};
    }
    Detector* w = find_live_mut(winner);
    w->state.ticks_in_level = 0;
    trace_event("ev=compete winner=" + signal_of(winner) + " n=" +
                std::to_string(candidates.size()) +
                (tie_seen ? " tie=1" : ""));
    return winner;
}

Locus Substrate::locus_of(const DetectorAddress& center) const {
    const Detector* c = find_live(center);
    if (!c) throw PreconditionError("locus of a free detector");
    Locus locus;
    locus.center = center;
    const Zone& z = zone(center.zone);
    auto add_bucket = [&](const std::map<int, Detector>& bucket) {
        for (const auto& [idx, d] : bucket)
            if (!(d.address == center)) locus.horizontal.push_back(d.address);
    };
    add_bucket(z.detectors);
    for (const auto& [sid, sub] : z.subzones) add_bucket(sub.detectors);
    locus.vertical_signals = c->stored_sequence;
    for (const auto& s : c->stored_sequence) {
        const auto a = address_of(s);
        if (!a) continue;
        if (std::find(locus.vertical.begin(), locus.vertical.end(), *a) ==
            locus.vertical.end())
            locus.vertical.push_back(*a);
    }
    return locus;
}

WaveReport Substrate::excitation_wave(const DetectorAddress& center) {
    const Detector* c = find_live(center);
    if (!c || c->state.level != ExcitationLevel::Actual)
        throw PreconditionError("excitation wave requires an actual center");
    const int center_grade = c->state.grade;
    const Locus locus = locus_of(center);
    std::vector<DetectorAddress> members = locus.horizontal;
    members.insert(members.end(), locus.vertical.begin(), locus.vertical.end());
    auto in_locus = [&](const DetectorAddress& a) {
        return std::find(members.begin(), members.end(), a) != members.end();
    };

    WaveReport report;
    for (auto& [zid, z] : zones_) {
        auto sweep = [&](std::map<int, Detector>& bucket) {
            for (auto& [idx, d] : bucket) {
                if (d.address == center) continue;
                if (idx == kIdentifierIndex) continue; // control elements
                if (in_locus(d.address)) {
                    if (d.state.level == ExcitationLevel::Actual &&
                        d.state.grade < center_grade) {
                        d.state = {ExcitationLevel::Latent, 1, 0};
                        report.demoted++;
                    } else if (d.state.level == ExcitationLevel::Residual) {
                        d.state = {ExcitationLevel::Latent, 1, 0};
                        report.raised++;
                    }
                } else if (d.state.level == ExcitationLevel::Latent) {
                    enter_residual(d);
                    report.decayed++;
                }
            }
        };
        sweep(z.detectors);
        for (auto& [sid, sub] : z.subzones) sweep(sub.detectors);
    }
    trace_event("ev=wave center=" + signal_of(center) + " demoted=" +
                std::to_string(report.demoted) + " raised=" +
                std::to_string(report.raised) + " decayed=" +
                std::to_string(report.decayed));
    return report;
}

void Substrate::enter_residual(Detector& d) {
    d.state = {ExcitationLevel::Residual,
               std::min(d.exposure_count, kMaxResidualGrade), 0};
}

void Substrate::free_detector(Detector& d) {
    signal_index_.erase(signal_of(d.address));
}

void Substrate::tick() {
    ++now_;
    std::vector<DetectorAddress> to_free;
    for (auto& [zid, z] : zones_) {
        auto age = [&](std::map<int, Detector>& bucket) {
            for (auto& [idx, d] : bucket) {
                if (idx == kIdentifierIndex) continue; // identifiers persist
                d.state.ticks_in_level++;
                switch (d.state.level) {
                    case ExcitationLevel::Actual:
                        if (d.state.ticks_in_level >= config_.delta_t_sel) {
                            d.state = {ExcitationLevel::Latent, 1, 0};
                            trace_event("ev=decay tok=" + signal_of(d.address) +
                                        " to=latent");
                        }
                        break;
                    case ExcitationLevel::Latent:
                        if (d.state.ticks_in_level >= config_.delta_t_sel) {
                            enter_residual(d);
                            trace_event("ev=decay tok=" + signal_of(d.address) +
                                        " to=residual grade=" +
                                        std::to_string(d.state.grade));
                        }
                        break;
                    case ExcitationLevel::Residual:
                        if (d.state.ticks_in_level >= config_.decay_interval) {
                            d.state.grade--;
                            d.state.ticks_in_level = 0;
                            if (d.state.grade <= 0) to_free.push_back(d.address);
                        }
                        break;
                }
            }
        };
        age(z.detectors);
        for (auto& [sid, sub] : z.subzones) age(sub.detectors);
    }
    for (const auto& a : to_free) {
        Zone& z = zones_.at(a.zone);
        auto& bucket = a.subzone == kNoSubzone ? z.detectors
                                               : z.subzones.at(a.subzone).detectors;
        auto it = bucket.find(a.index);
        trace_event("ev=decay tok=" + signal_of(a) + " to=free");
        free_detector(it->second);
        bucket.erase(it);
        z.freed++;
    }
}

void Substrate::tick_n(int n) {
    for (int i = 0; i < n; ++i) tick();
}

long Substrate::live_count(int zone_id) const {
    const Zone& z = zone(zone_id);
    long n = 0;
    for (const auto& [idx, d] : z.detectors)
        if (idx != kIdentifierIndex) ++n;
    for (const auto& [sid, sub] : z.subzones)
        for (const auto& [idx, d] : sub.detectors)
            if (idx != kIdentifierIndex) ++n;
    return n;
}

std::vector<DetectorAddress> Substrate::all_live_addresses() const {
    std::vector<DetectorAddress> out;
    for (const auto& [zid, z] : zones_) {
        for (const auto& [idx, d] : z.detectors) out.push_back(d.address);
        for (const auto& [sid, sub] : z.subzones)
            for (const auto& [idx, d] : sub.detectors) out.push_back(d.address);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void Substrate::trace_event(const std::string& body) {
    trace_.push_back("t=" + std::to_string(now_) + " " + body);
}

std::vector<std::string> Substrate::drain_trace() {
    std::vector<std::string> out;
    out.swap(trace_);
    return out;
}

// --- persistence -------------------------------------------------------------

namespace {

int persisted_grade(const Detector& d) {
    if (d.state.level == ExcitationLevel::Residual) return d.state.grade;
    return std::min(d.exposure_count, kMaxResidualGrade);
}

} // namespace

void Substrate::serialize(std::ostream& out) const {
    for (const auto& [zid, z] : zones_) {
        out << "zone " << zid << " " << (z.structural ? "struct" : "char") << ":"
            << z.name << " " << z.next_index << " " << z.allocated << " " << z.freed
            << "\n";
        const auto zi = z.detectors.find(kIdentifierIndex);
        if (zi != z.detectors.end()) {
            out << "zi " << zid;
            for (const auto& s : zi->second.stored_sequence) out << " " << s;
            out << "\n";
        }
        for (const auto& [sid, sub] : z.subzones) {
            const auto szi = sub.detectors.find(kIdentifierIndex);
            if (szi != sub.detectors.end()) {
                out << "zi " << zid << "." << sid;
                for (const auto& s : szi->second.stored_sequence) out << " " << s;
                out << "\n";
            }
        }
        auto dump = [&](const std::map<int, Detector>& bucket, int sub) {
            for (const auto& [idx, d] : bucket) {
                if (idx == kIdentifierIndex) continue;
                out << "det " << zid;
                if (sub != kNoSubzone) out << "." << sub;
                out << " " << idx << " " << persisted_grade(d) << " "
                    << d.exposure_count;
                for (const auto& s : d.stored_sequence) out << " " << s;
                out << "\n";
            }
        };
        dump(z.detectors, kNoSubzone);
        for (const auto& [sid, sub] : z.subzones) dump(sub.detectors, sid);
    }
}

namespace {

// "<zone>" or "<zone>.<sub>"
std::pair<int, int> parse_zone_ref(const std::string& tok, std::size_t line_no) {
    try {
        const auto dot = tok.find('.');
        if (dot == std::string::npos) return {std::stoi(tok), kNoSubzone};
        return {std::stoi(tok.substr(0, dot)), std::stoi(tok.substr(dot + 1))};
    } catch (const std::exception&) {
        throw FormatError("bad zone reference '" + tok + "'", line_no);
    }
}

} // namespace

void Substrate::load_zone_record(const std::string& rest, std::size_t line_no) {
    std::istringstream is(rest);
    int id = 0;
    std::string kind;
    int next = 0;
    long allocated = 0, freed = 0;
    if (!(is >> id >> kind >> next >> allocated >> freed))
        throw FormatError("malformed zone record", line_no);
    const auto colon = kind.find(':');
    if (colon == std::string::npos)
        throw FormatError("zone kind must be struct:<name> or char:<name>", line_no);
    Zone z;
    z.id = id;
    z.structural = kind.substr(0, colon) == "struct";
    z.name = kind.substr(colon + 1);
    z.next_index = next;
    z.allocated = allocated;
    z.freed = freed;
    if (zones_.count(id)) throw FormatError("duplicate zone id", line_no);
    zones_by_name_[z.name].push_back(id);
    zones_.emplace(id, std::move(z));
    next_zone_id_ = std::max(next_zone_id_, id + 1);
}

void Substrate::load_zi_record(const std::string& rest, std::size_t line_no) {
    std::istringstream is(rest);
    std::string ref;
    if (!(is >> ref)) throw FormatError("malformed zi record", line_no);
    const auto [zid, sub] = parse_zone_ref(ref, line_no);
    if (!zones_.count(zid)) throw FormatError("zi for unknown zone", line_no);
    std::vector<Signal> concept_seq;
    Signal s;
    while (is >> s) concept_seq.push_back(s);
    Zone& z = zones_.at(zid);
    Detector d;
    d.address = {zid, sub, kIdentifierIndex};
    d.stored_sequence = std::move(concept_seq);
    d.state = {ExcitationLevel::Residual, 1, 0};
    d.exposure_count = 1;
    index_signal(d);
    if (sub == kNoSubzone) {
        z.detectors.emplace(kIdentifierIndex, std::move(d));
    } else {
        SubZone& s2 = z.subzones[sub];
        s2.id = sub;
        s2.detectors.emplace(kIdentifierIndex, std::move(d));
    }
}

void Substrate::load_det_record(const std::string& rest, std::size_t line_no) {
    std::istringstream is(rest);
    std::string ref;
    int idx = 0, grade = 0, exposure = 0;
    if (!(is >> ref >> idx >> grade >> exposure))
        throw FormatError("malformed det record", line_no);
    const auto [zid, sub] = parse_zone_ref(ref, line_no);
    if (!zones_.count(zid)) throw FormatError("det for unknown zone", line_no);
    std::vector<Signal> seq;
    Signal s;
    while (is >> s) seq.push_back(s);
    Detector d;
    d.address = {zid, sub, idx};
    d.stored_sequence = std::move(seq);
    d.state = {ExcitationLevel::Residual, grade, 0};
    d.exposure_count = exposure;
    index_signal(d);
    Zone& z = zones_.at(zid);
    if (sub == kNoSubzone) {
        z.detectors.emplace(idx, std::move(d));
    } else {
        SubZone& s2 = z.subzones[sub];
        s2.id = sub;
        s2.detectors.emplace(idx, std::move(d));
    }
    z.next_index = std::max(z.next_index, idx + 1);
}

} // namespace fis
