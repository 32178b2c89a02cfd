#include "plasmonqd/model.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <initializer_list>
#include <sstream>

#include "plasmonqd/errors.hpp"

namespace plasmonqd {

namespace {

std::atomic<std::uint64_t> g_calls{0};
std::atomic<double> g_max_residual{0.0};

void record(double residual) {
    g_calls.fetch_add(1, std::memory_order_relaxed);
    double cur = g_max_residual.load(std::memory_order_relaxed);
    while (residual > cur &&
           !g_max_residual.compare_exchange_weak(cur, residual, std::memory_order_relaxed)) {
    }
}

// |sum of terms| relative to the sum of their magnitudes
double rel(std::initializer_list<cplx> terms) {
    cplx s{0.0};
    double scale = 0.0;
    for (const auto& z : terms) {
        s += z;
        scale += std::abs(z);
    }
    return scale > 0.0 ? std::abs(s) / scale : 0.0;
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void ModelParams::validate() const {
    std::ostringstream msg;
    if (!finite(gamma0) || !finite(gamma_nr) || !finite(kd) || !finite(k0d) || !finite(delta))
        msg << "non-finite parameter; ";
    if (gamma0 < 0.0) msg << "gamma0 = " << gamma0 << " < 0; ";
    if (gamma_nr < 0.0) msg << "gamma_nr = " << gamma_nr << " < 0; ";
    if (include_superradiance && !(k0d > 0.0)) msg << "k0d must be > 0 with super-radiance on; ";
    if (!msg.str().empty()) throw InvalidParams(msg.str());
}

cplx superradiant_rate(double k0d, double gamma0) {
    if (std::abs(k0d) < 1e-8) {
        // sin(x)/x = 1 - x^2/6 + ..., second term is below double resolution here
        return cplx(0.0, 0.5 * gamma0);
    }
    return cplx(0.0, std::sin(k0d) / (2.0 * k0d) * gamma0);
}

ScatteringSolution solve_two_dot(const ModelParams& p) {
    p.validate();
    const double gp = p.gamma_prime();
    const cplx i(0.0, 1.0);
    const cplx E = std::exp(i * p.kd);
    const cplx sr = p.include_superradiance ? superradiant_rate(p.k0d, p.gamma0) : cplx(0.0);
    const cplx c = coupling_g / (i * v_g);

    // [[A, B], [B, A]] (xi1, xi2) = 2g (1, E)
    const cplx A = p.delta + i * (gamma_pl + gp) / 2.0;
    const cplx B = (i * gamma_pl / 2.0) * E + sr;
    const cplx ApB = A + B, AmB = A - B;
    const cplx det = ApB * AmB;
    if (std::abs(det) < singular_det_floor) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "|det| = " << std::abs(det) << " at kd = " << p.kd << ", delta = " << p.delta
            << ", gamma_prime = " << gp;
        throw SingularSystem(msg.str());
    }
    const double rhs = 2.0 * coupling_g;
    const cplx sum = rhs * (1.0 + E) / ApB;   // xi1 + xi2
    const cplx diff = rhs * (1.0 - E) / AmB;  // xi1 - xi2

    ScatteringSolution s;
    s.xi1 = 0.5 * (sum + diff);
    s.xi2 = 0.5 * (sum - diff);
    s.a = 1.0 + c * s.xi1;
    s.b = c * s.xi2 * E;
    s.t = 1.0 + c * (s.xi1 + s.xi2 * std::conj(E));
    s.r = c * (s.xi1 + s.xi2 * E);
    const auto pr = probabilities(s);
    s.T = pr.T;
    s.R = pr.R;
    s.Loss = pr.Loss;
    s.residual = coefficient_residual(p, s);
    record(s.residual);
    return s;
}

ScatteringSolution solve_single_dot(double gamma_prime, double delta, double plasmon_width) {
    if (!(gamma_prime >= 0.0) || !finite(delta) || !(plasmon_width > 0.0))
        throw InvalidParams("single dot needs gamma_prime >= 0, finite delta, plasmon_width > 0");
    const cplx i(0.0, 1.0);
    const double g = std::sqrt(plasmon_width * v_g) / 2.0;
    const cplx c = g / (i * v_g);
    ScatteringSolution s;
    s.xi1 = 2.0 * g / (delta + i * (plasmon_width + gamma_prime) / 2.0);
    s.xi2 = 0.0;
    s.r = c * s.xi1;
    s.t = 1.0 + s.r;
    s.a = s.t;
    s.b = 0.0;
    const auto pr = probabilities(s);
    s.T = pr.T;
    s.R = pr.R;
    s.Loss = pr.Loss;
    s.residual = single_dot_residual(gamma_prime, delta, plasmon_width, s);
    record(s.residual);
    return s;
}

Probabilities probabilities(const ScatteringSolution& sol) {
    const double T = std::norm(sol.t);
    const double R = std::norm(sol.r);
    return {T, R, 1.0 - T - R};
}

double coefficient_residual(const ModelParams& p, const ScatteringSolution& s) {
    const cplx i(0.0, 1.0);
    const double g = coupling_g;
    const cplx E = std::exp(i * p.kd);
    const cplx sr = p.include_superradiance ? superradiant_rate(p.k0d, p.gamma0) : cplx(0.0);
    const cplx c = g / (i * v_g);
    const cplx lam = p.delta + i * p.gamma_prime() / 2.0;

    const double r1 = rel({2.0 * g * s.a * E, 2.0 * g * s.b * std::conj(E), -sr * s.xi1, -lam * s.xi2});
    const double r2 = rel({g, g * s.a, g * s.r, g * s.b, -sr * s.xi2, -lam * s.xi1});
    const double r3 = rel({s.a, cplx(-1.0), -c * s.xi1});
    const double r4 = rel({s.b, -c * s.xi2 * E});
    const double r5 = rel({s.t, cplx(-1.0), -c * s.xi1, -c * s.xi2 * std::conj(E)});
    const double r6 = rel({s.r, -c * s.xi1, -c * s.xi2 * E});
    return std::max({r1, r2, r3, r4, r5, r6});
}

double single_dot_residual(double gamma_prime, double delta, double plasmon_width,
                           const ScatteringSolution& s) {
    const cplx i(0.0, 1.0);
    const double g = std::sqrt(plasmon_width * v_g) / 2.0;
    const cplx c = g / (i * v_g);
    const cplx lam = delta + i * gamma_prime / 2.0;
    const double r1 = rel({g, g * s.t, g * s.r, -lam * s.xi1});
    const double r2 = rel({s.t, cplx(-1.0), -c * s.xi1});
    const double r3 = rel({s.r, -c * s.xi1});
    return std::max({r1, r2, r3});
}

SolverDiagnostics solver_diagnostics() {
    return {g_calls.load(std::memory_order_relaxed), g_max_residual.load(std::memory_order_relaxed)};
}

void reset_solver_diagnostics() {
    g_calls.store(0);
    g_max_residual.store(0.0);
}

}  // namespace plasmonqd
