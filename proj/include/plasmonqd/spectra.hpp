#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "plasmonqd/model.hpp"

namespace plasmonqd {

struct SpectrumRow {
    double delta, T, R, Loss;
};

// Uniform grid, endpoints included. SingularSystem propagates with the offending delta.
std::vector<SpectrumRow> sweep_detuning(const ModelParams& params, double delta_min, double delta_max,
                                        std::size_t n_points, unsigned threads = 1);
std::vector<SpectrumRow> sweep_single_dot(double gamma_prime, double delta_min, double delta_max,
                                          std::size_t n_points);

struct Bracket {
    double lo = -3.0;
    double hi = 3.0;
    std::size_t scan_points = 2001;
};

inline constexpr double refine_tolerance = 1e-8;

struct PeakRecord {
    double kd, delta_peak, R_peak;
    bool with_sr;
};

// argmax of R(delta) inside the bracket; NoPeakInBracket if the maximum sits on an edge
PeakRecord reflection_peak(const ModelParams& params, const Bracket& bracket = {});

struct PeakCurves {
    std::vector<PeakRecord> without_sr, with_sr;
    std::vector<std::string> warnings;  // skipped kd values and why
};

// SR series uses k0d = kd unless fixed_k0d is given.
PeakCurves peak_position_curve(const std::vector<double>& kd_values, const ModelParams& base,
                               const Bracket& bracket = {}, std::optional<double> fixed_k0d = {},
                               unsigned threads = 1);

bool near_tangent_pole(double kd, double tol);

struct ReflectionMinimum {
    double delta_min, R_min, tan2_residual;
};

// Lowest interior local minimum of R; the residual is that of
// -tan^2(kd) = -4 delta^2 - gamma'^2 at the located delta.
ReflectionMinimum reflection_minimum(const ModelParams& params, const Bracket& bracket = {});
double tunneling_residual(double kd, double delta, double gamma_prime);

}  // namespace plasmonqd
