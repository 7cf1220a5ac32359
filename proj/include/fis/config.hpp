#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>

namespace fis {

// Engine tuning knobs. All time quantities are integer ticks of the global
// substrate clock; there are no physical units anywhere in the engine.
struct Config {
    int orientation_buckets = 16;     // angular sectors of the orientation zone
    int delta_t_sel = 1;              // ticks a detector stays actual awaiting selection
    int decay_interval = 1000;        // ticks per residual grade step
    double genus1_match_threshold = 0.8; // partial concept match accepted as same class
    std::uint64_t seed = 0;

    void validate() const; // throws ParamError on nonsense values

    // "key=value" lines, unknown keys rejected.
    static Config parse(std::istream& in);
    void serialize(std::ostream& out) const;
    std::string to_line() const; // single-line form used in state files
    static Config from_line(const std::string& line, std::size_t line_no);
};

bool operator==(const Config& a, const Config& b);

} // namespace fis
