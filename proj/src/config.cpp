#include "fis/config.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "fis/errors.hpp"

namespace fis {

namespace {

// Canonical double formatting: shortest %g form, stable across runs.
std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

void apply_kv(Config& c, const std::string& key, const std::string& value,
              std::size_t line_no) {
    try {
        if (key == "orientation_buckets")
            c.orientation_buckets = std::stoi(value);
        else if (key == "delta_t_sel")
            c.delta_t_sel = std::stoi(value);
        else if (key == "decay_interval")
            c.decay_interval = std::stoi(value);
        else if (key == "genus1_match_threshold")
            c.genus1_match_threshold = std::stod(value);
        else if (key == "seed")
            c.seed = std::stoull(value);
        else
            throw FormatError("unknown config key '" + key + "'", line_no);
    } catch (const std::invalid_argument&) {
        throw FormatError("bad value for config key '" + key + "'", line_no);
    } catch (const std::out_of_range&) {
        throw FormatError("out-of-range value for config key '" + key + "'", line_no);
    }
}

} // namespace

void Config::validate() const {
    if (orientation_buckets < 4)
        throw ParamError("orientation_buckets must be >= 4");
    if (delta_t_sel < 1) throw ParamError("delta_t_sel must be positive");
    if (decay_interval < 1) throw ParamError("decay_interval must be positive");
    if (!(genus1_match_threshold > 0.0 && genus1_match_threshold <= 1.0))
        throw ParamError("genus1_match_threshold must be in (0,1]");
}

Config Config::parse(std::istream& in) {
    Config c;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw FormatError("expected key=value", line_no);
        apply_kv(c, line.substr(0, eq), line.substr(eq + 1), line_no);
    }
    c.validate();
    return c;
}

void Config::serialize(std::ostream& out) const {
    out << "orientation_buckets=" << orientation_buckets << "\n"
        << "delta_t_sel=" << delta_t_sel << "\n"
        << "decay_interval=" << decay_interval << "\n"
        << "genus1_match_threshold=" << fmt_double(genus1_match_threshold) << "\n"
        << "seed=" << seed << "\n";
}

std::string Config::to_line() const {
    std::ostringstream os;
    os << "orientation_buckets=" << orientation_buckets
       << " delta_t_sel=" << delta_t_sel
       << " decay_interval=" << decay_interval
       << " genus1_match_threshold=" << fmt_double(genus1_match_threshold)
       << " seed=" << seed;
    return os.str();
}

Config Config::from_line(const std::string& line, std::size_t line_no) {
    Config c;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw FormatError("expected key=value token in config line", line_no);
        apply_kv(c, tok.substr(0, eq), tok.substr(eq + 1), line_no);
    }
    c.validate();
    return c;
}

bool operator==(const Config& a, const Config& b) {
    return a.orientation_buckets == b.orientation_buckets &&
           a.delta_t_sel == b.delta_t_sel && a.decay_interval == b.decay_interval &&
           a.genus1_match_threshold == b.genus1_match_threshold && a.seed == b.seed;
}

} // namespace fis
