#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plasmonqd/model.hpp"

namespace plasmonqd {

struct ProjectedState {
    cplx xi1, xi2;  // normalised
    double concurrence;
    double theta;  // arg(xi2 / xi1) in (-pi, pi]
};

double concurrence(cplx xi1, cplx xi2);
ProjectedState project_state(cplx xi1, cplx xi2);
ProjectedState project_state(const ScatteringSolution& sol);

// delta on the high-concurrence locus for given kd; TangentPole within 1e-6 of a pole
double high_c_curve(double kd, double gamma_prime);

struct ConcurrenceCell {
    double kd, delta;
    std::optional<double> C;
    bool limit = false;  // evaluated as a two-sided limit at a dark point
};

struct ConcurrenceMap {
    std::vector<ConcurrenceCell> cells;  // kd-major
    std::vector<std::string> warnings;
};

ConcurrenceMap concurrence_map(const std::vector<double>& kd_values, const std::vector<double>& delta_values,
                               const ModelParams& base, unsigned threads = 1);

// For each delta pick kd on the high-concurrence locus, on the branch kd in
// (centre - pi/2, centre + pi/2). centre must be a multiple of pi.
struct KdPolicy {
    double centre = 2.0 * pi;
    double kd_for(double delta, double gamma_prime) const;
};

struct PhaseRow {
    double delta, gamma_prime, theta, kd;
    bool limit;
};

std::vector<PhaseRow> phase_scan(const std::vector<double>& delta_values,
                                 const std::vector<double>& gamma_prime_values, const KdPolicy& policy = {},
                                 double limit_step = 1e-6);

}  // namespace plasmonqd
