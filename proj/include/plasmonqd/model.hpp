#pragma once

#include <complex>
#include <cstdint>

namespace plasmonqd {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Every rate is measured in units of the plasmon decay rate, which is 1.
// With v_g = 1 the dot-wire coupling is g = 1/2 (Gamma_pl = 4 g^2 / v_g).
inline constexpr double gamma_pl = 1.0;
inline constexpr double v_g = 1.0;
inline constexpr double coupling_g = 0.5;

struct ModelParams {
    double gamma0 = 0.0;    // free-space radiative decay
    double gamma_nr = 0.0;  // ohmic / non-radiative loss
    double kd = 0.0;
    double k0d = 1.0;
    double delta = 0.0;
    bool include_superradiance = false;

    double gamma_prime() const { return gamma0 + gamma_nr; }
    void validate() const;  // throws InvalidParams
};

cplx superradiant_rate(double k0d, double gamma0);

struct ScatteringSolution {
    cplx t{1.0}, r{0.0};
    cplx a{1.0}, b{0.0};  // right/left movers between the dots
    cplx xi1{0.0}, xi2{0.0};
    double T = 1.0, R = 0.0, Loss = 0.0;
    double residual = 0.0;  // worst relative residual of the coefficient relations
};

// Throws SingularSystem when |det| of the reduced 2x2 system is below this.
inline constexpr double singular_det_floor = 1e-14;

ScatteringSolution solve_two_dot(const ModelParams& params);

// plasmon_width = 2 gives the collective two-dot line at kd = 2 n pi
ScatteringSolution solve_single_dot(double gamma_prime, double delta, double plasmon_width = 1.0);

struct Probabilities {
    double T, R, Loss;
};
Probabilities probabilities(const ScatteringSolution& sol);

// Relative residuals of the coefficient relations, recomputed from scratch.
double coefficient_residual(const ModelParams& params, const ScatteringSolution& sol);
double single_dot_residual(double gamma_prime, double delta, double plasmon_width,
                           const ScatteringSolution& sol);

// Process-wide monitor of every solver call (lock-free, read-only for callers).
struct SolverDiagnostics {
    std::uint64_t calls = 0;
    double max_residual = 0.0;
};
SolverDiagnostics solver_diagnostics();
void reset_solver_diagnostics();

}  // namespace plasmonqd
