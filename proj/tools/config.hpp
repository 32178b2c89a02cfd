#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace plasmonqd::cli {

enum class Format { csv, json };

struct SpectrumConfig {
    bool preset = true;  // figure defaults unless any list below is set
    std::vector<double> kd, gamma0, gamma_nr;
    bool single_dot = false;
    std::vector<double> gamma_prime;  // single-dot mode
    bool superradiance = false;
    double k0d = 0.0;  // 0: k0d = kd
    double delta_min = -3.0, delta_max = 3.0;
    std::size_t points = 1201;
};

struct PeaksConfig {
    double kd_min = 0.015707963267948967;  // pi / 200
    double kd_max = 6.2831853071795862;
    std::size_t kd_points = 400;
    double gamma0 = 0.025, gamma_nr = 0.025;
    double k0d = 0.0;  // 0: k0d = kd for the SR series
    double delta_min = -3.0, delta_max = 3.0;
    std::size_t scan_points = 2001;
};

struct MapConfig {
    double kd_min = 0.0, kd_max = 12.566370614359172;
    std::size_t kd_points = 401;
    double delta_min = -3.0, delta_max = 3.0;
    std::size_t delta_points = 241;
    double gamma0 = 0.0, gamma_nr = 0.0;
    bool superradiance = false;
    double k0d = 0.0;
};

struct PhaseConfig {
    double delta_min = -3.0, delta_max = 3.0;
    std::size_t delta_points = 601;
    std::vector<double> gamma_prime{0.0, 0.025, 0.125};
    double kd_centre = 6.2831853071795862;
};

struct OracleConfig {
    std::vector<double> kd{0.78539816339744828, 1.5707963267948966, 2.3561944901923448, 3.1415926535897931,
                           6.2831853071795862};
    std::vector<double> delta{-1.0, -0.5, -0.2, 0.3, 1.0};
    std::vector<double> loss{0.0, 0.025};  // gamma0 = gamma_nr = loss
    std::size_t extra_points = 0;          // random (kd, delta) points drawn from seed
    double sigma_k = 0.02;
    double separation = 5.0;
    bool coarse = false;  // deliberately under-resolved grid
    double tolerance = 1e-3;
};

struct StorageConfig {
    std::vector<double> P{5.0, 10.0, 20.0, 50.0};
    double sigma = 0.05;
    bool odd_twin = true;
    bool dump = false;
};

struct RunConfig {
    std::string experiment;
    std::filesystem::path out = "out";
    Format format = Format::csv;
    unsigned threads = 1;
    std::uint64_t seed = 1;
    SpectrumConfig spectrum;
    PeaksConfig peaks;
    MapConfig map;
    PhaseConfig phase;
    OracleConfig oracle;
    StorageConfig storage;

    void validate() const;
};

// Numbers accept a trailing "pi" ("0.25pi", "2pi", "pi") and "inf".
double parse_number(const std::string& text);
std::vector<double> parse_list(const std::string& text);

// INI file; unknown sections or keys are rejected with InvalidParams.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

// Effective configuration, readable back by parse_config.
std::string to_ini(const RunConfig& cfg);

std::string format_name(Format f);
Format parse_format(const std::string& s);

}  // namespace plasmonqd::cli
