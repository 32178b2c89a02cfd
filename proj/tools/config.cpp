#include "config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "plasmonqd/errors.hpp"
#include "plasmonqd/model.hpp"

namespace plasmonqd::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
    return s;
}

bool parse_bool(const std::string& t) {
    const auto s = trim(t);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw InvalidParams("expected a boolean, got '" + s + "'");
}

std::size_t parse_count(const std::string& t) {
    const double v = parse_number(t);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e9) throw InvalidParams("expected a count, got '" + t + "'");
    return static_cast<std::size_t>(v);
}

using Setter = std::function<void(RunConfig&, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Key {
    Setter set;
    Getter get;
};

// section -> key -> accessors; also fixes the output order of to_ini
const std::vector<std::pair<std::string, std::vector<std::pair<std::string, Key>>>>& schema() {
    static const std::vector<std::pair<std::string, std::vector<std::pair<std::string, Key>>>> s = [] {
        std::vector<std::pair<std::string, std::vector<std::pair<std::string, Key>>>> out;
#define PQ_NUM(sec, field)                                                              \
    Key {                                                                               \
        [](RunConfig& c, const std::string& v) { c.sec.field = parse_number(v); },      \
            [](const RunConfig& c) { return num(c.sec.field); }                         \
    }
#define PQ_COUNT(sec, field)                                                            \
    Key {                                                                               \
        [](RunConfig& c, const std::string& v) { c.sec.field = parse_count(v); },       \
            [](const RunConfig& c) { return std::to_string(c.sec.field); }              \
    }
#define PQ_BOOL(sec, field)                                                             \
    Key {                                                                               \
        [](RunConfig& c, const std::string& v) { c.sec.field = parse_bool(v); },        \
            [](const RunConfig& c) { return std::string(c.sec.field ? "true" : "false"); } \
    }
#define PQ_LIST(sec, field)                                                             \
    Key {                                                                               \
        [](RunConfig& c, const std::string& v) { c.sec.field = parse_list(v); },        \
            [](const RunConfig& c) { return list(c.sec.field); }                        \
    }
        out.push_back({"run",
                       {{"experiment", Key{[](RunConfig& c, const std::string& v) { c.experiment = trim(v); },
                                           [](const RunConfig& c) { return c.experiment; }}},
                        {"out", Key{[](RunConfig& c, const std::string& v) { c.out = trim(v); },
                                    [](const RunConfig& c) { return c.out.string(); }}},
                        {"format", Key{[](RunConfig& c, const std::string& v) { c.format = parse_format(v); },
                                       [](const RunConfig& c) { return format_name(c.format); }}},
                        {"threads", Key{[](RunConfig& c, const std::string& v) {
                                            c.threads = static_cast<unsigned>(parse_count(v));
                                        },
                                        [](const RunConfig& c) { return std::to_string(c.threads); }}},
                        {"seed", Key{[](RunConfig& c, const std::string& v) {
                                         c.seed = std::stoull(trim(v));
                                     },
                                     [](const RunConfig& c) { return std::to_string(c.seed); }}}}});
        out.push_back({"spectrum",
                       {{"preset", PQ_BOOL(spectrum, preset)},
                        {"kd", PQ_LIST(spectrum, kd)},
                        {"gamma0", PQ_LIST(spectrum, gamma0)},
                        {"gamma_nr", PQ_LIST(spectrum, gamma_nr)},
                        {"single_dot", PQ_BOOL(spectrum, single_dot)},
                        {"gamma_prime", PQ_LIST(spectrum, gamma_prime)},
                        {"superradiance", PQ_BOOL(spectrum, superradiance)},
                        {"k0d", PQ_NUM(spectrum, k0d)},
                        {"delta_min", PQ_NUM(spectrum, delta_min)},
                        {"delta_max", PQ_NUM(spectrum, delta_max)},
                        {"points", PQ_COUNT(spectrum, points)}}});
        out.push_back({"peaks",
                       {{"kd_min", PQ_NUM(peaks, kd_min)},
                        {"kd_max", PQ_NUM(peaks, kd_max)},
                        {"kd_points", PQ_COUNT(peaks, kd_points)},
                        {"gamma0", PQ_NUM(peaks, gamma0)},
                        {"gamma_nr", PQ_NUM(peaks, gamma_nr)},
                        {"k0d", PQ_NUM(peaks, k0d)},
                        {"delta_min", PQ_NUM(peaks, delta_min)},
                        {"delta_max", PQ_NUM(peaks, delta_max)},
                        {"scan_points", PQ_COUNT(peaks, scan_points)}}});
        out.push_back({"concurrence",
                       {{"kd_min", PQ_NUM(map, kd_min)},
                        {"kd_max", PQ_NUM(map, kd_max)},
                        {"kd_points", PQ_COUNT(map, kd_points)},
                        {"delta_min", PQ_NUM(map, delta_min)},
                        {"delta_max", PQ_NUM(map, delta_max)},
                        {"delta_points", PQ_COUNT(map, delta_points)},
                        {"gamma0", PQ_NUM(map, gamma0)},
                        {"gamma_nr", PQ_NUM(map, gamma_nr)},
                        {"superradiance", PQ_BOOL(map, superradiance)},
                        {"k0d", PQ_NUM(map, k0d)}}});
        out.push_back({"phase",
                       {{"delta_min", PQ_NUM(phase, delta_min)},
                        {"delta_max", PQ_NUM(phase, delta_max)},
                        {"delta_points", PQ_COUNT(phase, delta_points)},
                        {"gamma_prime", PQ_LIST(phase, gamma_prime)},
                        {"kd_centre", PQ_NUM(phase, kd_centre)}}});
        out.push_back({"oracle",
                       {{"kd", PQ_LIST(oracle, kd)},
                        {"delta", PQ_LIST(oracle, delta)},
                        {"loss", PQ_LIST(oracle, loss)},
                        {"extra_points", PQ_COUNT(oracle, extra_points)},
                        {"sigma_k", PQ_NUM(oracle, sigma_k)},
                        {"separation", PQ_NUM(oracle, separation)},
                        {"coarse", PQ_BOOL(oracle, coarse)},
                        {"tolerance", PQ_NUM(oracle, tolerance)}}});
        out.push_back({"storage",
                       {{"P", PQ_LIST(storage, P)},
                        {"sigma", PQ_NUM(storage, sigma)},
                        {"odd_twin", PQ_BOOL(storage, odd_twin)},
                        {"dump", PQ_BOOL(storage, dump)}}});
#undef PQ_NUM
#undef PQ_COUNT
#undef PQ_BOOL
#undef PQ_LIST
        return out;
    }();
    return s;
}

void check_range(const char* what, double lo, double hi, std::size_t n) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        throw InvalidParams(std::string(what) + ": need finite min < max");
    if (n < 2) throw InvalidParams(std::string(what) + ": need at least 2 points");
}

void check_rate(const char* what, double v) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidParams(std::string(what) + " must be finite and >= 0");
}

}  // namespace

double parse_number(const std::string& text) {
    std::string s = trim(text);
    if (s.empty()) throw InvalidParams("empty number");
    if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    auto plain = [&](const std::string& t) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            throw InvalidParams("not a number: '" + text + "'");
        }
        if (used != t.size()) throw InvalidParams("not a number: '" + text + "'");
        return v;
    };
    // [coef][*]pi[/den]
    const auto at = s.find("pi");
    if (at == std::string::npos) return plain(s);
    std::string coef = trim(s.substr(0, at)), rest = trim(s.substr(at + 2));
    if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
    double v = pi;
    if (coef == "-")
        v = -pi;
    else if (!coef.empty() && coef != "+")
        v *= plain(coef);
    if (!rest.empty()) {
        if (rest.front() != '/') throw InvalidParams("not a number: '" + text + "'");
        v /= plain(trim(rest.substr(1)));
    }
    return v;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');)
        if (!trim(item).empty()) out.push_back(parse_number(item));
    return out;
}

std::string format_name(Format f) { return f == Format::csv ? "csv" : "json"; }

Format parse_format(const std::string& s) {
    const auto t = trim(s);
    if (t == "csv") return Format::csv;
    if (t == "json") return Format::json;
    throw InvalidParams("format must be csv or json, got '" + t + "'");
}

RunConfig parse_config(const std::string& text) {
    boost::property_tree::ptree tree;
    std::istringstream in(text);
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw InvalidParams(std::string("config: ") + e.what());
    }
    RunConfig cfg;
    bool spectrum_lists = false, spectrum_preset_given = false;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) throw InvalidParams("config: key '" + section + "' outside a section");
        const auto sec = std::find_if(schema().begin(), schema().end(), [&](const auto& s) { return s.first == section; });
        if (sec == schema().end()) throw InvalidParams("config: unknown section [" + section + "]");
        for (const auto& [key, value] : body) {
            const auto k =
                std::find_if(sec->second.begin(), sec->second.end(), [&](const auto& e) { return e.first == key; });
            if (k == sec->second.end()) throw InvalidParams("config: unknown key '" + key + "' in [" + section + "]");
            try {
                k->second.set(cfg, value.data());
            } catch (const InvalidParams& e) {
                throw InvalidParams("config [" + section + "] " + key + ": " + e.what());
            }
            if (section == "spectrum") {
                if (key == "preset") spectrum_preset_given = true;
                if (key == "kd" || key == "gamma0" || key == "gamma_nr" || key == "gamma_prime" || key == "single_dot")
                    spectrum_lists = true;
            }
        }
    }
    if (spectrum_lists && !spectrum_preset_given) cfg.spectrum.preset = false;
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParams("cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string to_ini(const RunConfig& cfg) {
    std::ostringstream out;
    for (const auto& [section, keys] : schema()) {
        out << "[" << section << "]\n";
        for (const auto& [key, acc] : keys) out << key << " = " << acc.get(cfg) << "\n";
        out << "\n";
    }
    return out.str();
}

void RunConfig::validate() const {
    const auto& s = spectrum;
    check_range("spectrum delta", s.delta_min, s.delta_max, s.points);
    if (!s.preset) {
        if (s.single_dot) {
            if (s.gamma_prime.empty()) throw InvalidParams("spectrum: single_dot needs gamma_prime");
            for (double g : s.gamma_prime) check_rate("spectrum gamma_prime", g);
        } else {
            if (s.kd.empty()) throw InvalidParams("spectrum: kd list is empty");
            for (double k : s.kd)
                if (!std::isfinite(k)) throw InvalidParams("spectrum: kd must be finite");
            for (double g : s.gamma0) check_rate("spectrum gamma0", g);
            for (double g : s.gamma_nr) check_rate("spectrum gamma_nr", g);
        }
    }
    if (s.superradiance) {
        if (s.k0d < 0.0 || !std::isfinite(s.k0d)) throw InvalidParams("spectrum k0d must be finite and >= 0");
        for (double k : s.kd)
            if (s.k0d == 0.0 && !(k > 0.0)) throw InvalidParams("spectrum: SR with k0d = kd needs kd > 0");
    }

    check_range("peaks kd", peaks.kd_min, peaks.kd_max, peaks.kd_points);
    check_range("peaks delta", peaks.delta_min, peaks.delta_max, peaks.scan_points);
    check_rate("peaks gamma0", peaks.gamma0);
    check_rate("peaks gamma_nr", peaks.gamma_nr);
    if (!(peaks.k0d >= 0.0)) throw InvalidParams("peaks k0d must be >= 0");
    if (peaks.k0d == 0.0 && !(peaks.kd_min > 0.0)) throw InvalidParams("peaks: SR series with k0d = kd needs kd_min > 0");

    check_range("concurrence kd", map.kd_min, map.kd_max, map.kd_points);
    check_range("concurrence delta", map.delta_min, map.delta_max, map.delta_points);
    check_rate("concurrence gamma0", map.gamma0);
    check_rate("concurrence gamma_nr", map.gamma_nr);
    if (map.superradiance && !(map.k0d > 0.0)) throw InvalidParams("concurrence: SR needs k0d > 0");

    check_range("phase delta", phase.delta_min, phase.delta_max, phase.delta_points);
    if (phase.gamma_prime.empty()) throw InvalidParams("phase: gamma_prime list is empty");
    for (double g : phase.gamma_prime) check_rate("phase gamma_prime", g);

    if (oracle.kd.empty() || oracle.delta.empty() || oracle.loss.empty())
        if (oracle.extra_points == 0) throw InvalidParams("oracle: empty verification matrix");
    for (double l : oracle.loss) check_rate("oracle loss", l);
    if (!(oracle.sigma_k > 0.0) || !(oracle.separation > 0.0) || !(oracle.tolerance > 0.0))
        throw InvalidParams("oracle: sigma_k, separation and tolerance must be > 0");

    if (storage.P.empty()) throw InvalidParams("storage: P list is empty");
    for (double P : storage.P)
        if (!(P > 1.0)) throw InvalidParams("storage: every P must be > 1");
    if (!(storage.sigma > 0.0)) throw InvalidParams("storage: sigma must be > 0");
}

}  // namespace plasmonqd::cli
