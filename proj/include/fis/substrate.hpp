#pragma once
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fis/config.hpp"

namespace fis {

using Tick = std::int64_t;

// Every detector responds by placing its address at its output; a Signal is
// the printable form of that address and is what stored sequences, concepts,
// WFF symbols and state files carry.
//   structural detector   s<zone>#<idx>   or  s<zone>.<sub>#<idx>
//   zone identifier       s<zone>@zi      or  s<zone>.<sub>@zi
//   characteristic value  <name>#<value>  e.g. orient#3, turn_r#2, cls#1
using Signal = std::string;

enum class ExcitationLevel { Actual, Latent, Residual };

constexpr int kIdentifierIndex = -1; // detector index reserved for ZI/SZI
constexpr int kNoSubzone = -1;
constexpr int kMaxResidualGrade = 8;

struct DetectorAddress {
    int zone = 0;
    int subzone = kNoSubzone;
    int index = 0;

    bool is_identifier() const { return index == kIdentifierIndex; }
    friend bool operator==(const DetectorAddress&, const DetectorAddress&) = default;
    friend auto operator<=>(const DetectorAddress&, const DetectorAddress&) = default;
};

struct ExcitationState {
    ExcitationLevel level = ExcitationLevel::Residual;
    int grade = 0;          // degree within level; latent is single-valued
    Tick ticks_in_level = 0;
};

struct Detector {
    DetectorAddress address;
    std::vector<Signal> stored_sequence; // immutable after capture
    ExcitationState state;
    Tick last_excited_tick = 0;
    int exposure_count = 0;
};

struct SubZone {
    int id = 0;
    std::map<int, Detector> detectors; // index -> detector, kIdentifierIndex = SZI
};

struct Zone {
    int id = 0;
    bool structural = true;
    std::string name;                  // stage or characteristic name
    std::map<int, Detector> detectors; // zone-level detectors, -1 = ZI
    std::map<int, SubZone> subzones;
    int next_index = 0;   // never reused; freed indexes stay retired
    long allocated = 0;   // detectors ever created (identifiers excluded)
    long freed = 0;       // detectors fully forgotten
};

struct Locus {
    DetectorAddress center;
    std::vector<DetectorAddress> horizontal; // zone siblings + identifiers
    std::vector<DetectorAddress> vertical;   // resolved sequence sources
    std::vector<Signal> vertical_signals;    // raw stored sequence
};

struct WaveReport {
    int demoted = 0; // actual -> latent within the locus
    int raised = 0;  // residual -> latent within the locus
    int decayed = 0; // latent -> residual outside the locus
};

// Flattened view of a zone identifier tree.
struct ZoneIdentifierView {
    int zone = 0;
    std::vector<Signal> concept_seq;
    std::vector<int> children;
    std::vector<std::pair<int, std::vector<Signal>>> subidentifiers;
};

// The memory fabric: zones of graded-excitation detectors driven by a global
// integer tick. One instance per engine; all mutation single-threaded.
class Substrate {
public:
    explicit Substrate(Config cfg = {});

    const Config& config() const { return config_; }
    Tick now() const { return now_; }
    void set_now(Tick t) { now_ = t; }

    // --- zones ---------------------------------------------------------
    // Finds the structural zone of this name whose ZI concept equals
    // `concept_seq`, creating zone + ZI when absent.
    int ensure_structural_zone(const std::string& name,
                               const std::vector<Signal>& concept_seq);
    std::vector<int> zones_named(const std::string& name) const;
    int ensure_subzone(int zone, const std::vector<Signal>& concept_seq);
    bool has_zone(int id) const { return zones_.count(id) != 0; }
    const Zone& zone(int id) const;
    ZoneIdentifierView zone_identifier(int zone) const;
    const std::vector<Signal>& zone_concept(int zone) const;
    const std::vector<Signal>& subzone_concept(int zone, int sub) const;

    // --- characteristic values -----------------------------------------
    // Excites (creating on first use) the value detector of an ordered
    // characteristic zone and returns its signal.
    Signal excite_value(const std::string& zone_name, int value);
    static Signal value_signal(const std::string& zone_name, int value);

    // --- detectors -----------------------------------------------------
    DetectorAddress capture_free_detector(int zone, int subzone,
                                          const std::vector<Signal>& seq);
    std::optional<DetectorAddress> find_by_sequence(
        int zone, int subzone, const std::vector<Signal>& seq) const;
    const Detector* find_live(const DetectorAddress& a) const;
    const Detector* find_by_signal(const Signal& s) const;
    Signal signal_of(const DetectorAddress& a) const;
    std::optional<DetectorAddress> address_of(const Signal& s) const;

    DetectorAddress alpha_compete(const std::vector<DetectorAddress>& candidates);
    Locus locus_of(const DetectorAddress& center) const;
    WaveReport excitation_wave(const DetectorAddress& center);

    // Converts an existing detector back to full actual excitation, as on
    // recognition of its stored sequence.
    void re_excite(const DetectorAddress& a);
    void force_state(const DetectorAddress& a, ExcitationLevel level, int grade);

    void tick();
    void tick_n(int n);

    // --- bookkeeping for invariants -------------------------------------
    long live_count(int zone) const;
    long freed_count(int zone) const { return this->zone(zone).freed; }
    long allocated_count(int zone) const { return this->zone(zone).allocated; }
    std::vector<DetectorAddress> all_live_addresses() const; // sorted

    // --- trace & persistence --------------------------------------------
    void trace_event(const std::string& body); // prefixes "t=<now> "
    const std::vector<std::string>& trace_log() const { return trace_; }
    std::vector<std::string> drain_trace();

    void serialize(std::ostream& out) const;
    // Line-by-line loading used by the engine state reader.
    void load_zone_record(const std::string& rest, std::size_t line_no);
    void load_zi_record(const std::string& rest, std::size_t line_no);
    void load_det_record(const std::string& rest, std::size_t line_no);

private:
    Detector& detector_slot(const DetectorAddress& a);
    Detector* find_live_mut(const DetectorAddress& a);
    void enter_residual(Detector& d);
    void free_detector(Detector& d);
    void index_signal(const Detector& d);
    void set_actual(Detector& d, int grade);
    std::map<int, Detector>& bucket_for(int zone, int subzone);

    Config config_;
    Tick now_ = 0;
    std::map<int, Zone> zones_;
    std::map<std::string, std::vector<int>> zones_by_name_;
    std::map<Signal, DetectorAddress> signal_index_;
    std::vector<std::string> trace_;
    int next_zone_id_ = 1;
};

std::string level_name(ExcitationLevel level);
std::string join_signals(const std::vector<Signal>& seq, char sep = ',');

} // namespace fis
