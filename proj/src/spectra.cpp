#include "plasmonqd/spectra.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "plasmonqd/errors.hpp"
#include "plasmonqd/parallel.hpp"

namespace plasmonqd {

namespace {

double grid_point(double lo, double hi, std::size_t n, std::size_t i) {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

void check_grid(double lo, double hi, std::size_t n) {
    if (n < 2 || !(lo < hi)) throw InvalidParams("need n_points >= 2 and delta_min < delta_max");
}

// Searches walk straight through the measure-zero dark points (kd = n pi, delta = 0,
// no loss), where t and r stay finite. There the two-sided mean stands in.
ScatteringSolution solve_for_search(ModelParams p) {
    try {
        return solve_two_dot(p);
    } catch (const SingularSystem&) {
        const double h = 1e-7;
        const double d0 = p.delta;
        p.delta = d0 - h;
        auto lo = solve_two_dot(p);
        p.delta = d0 + h;
        auto hi = solve_two_dot(p);
        ScatteringSolution s = lo;
        s.t = 0.5 * (lo.t + hi.t);
        s.r = 0.5 * (lo.r + hi.r);
        s.T = std::norm(s.t);
        s.R = std::norm(s.r);
        s.Loss = 1.0 - s.T - s.R;
        return s;
    }
}

double golden(const std::function<double(double)>& f, double a, double b, double tol) {
    // minimises f on [a, b]
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

std::vector<SpectrumRow> sweep_detuning(const ModelParams& params, double delta_min, double delta_max,
                                        std::size_t n_points, unsigned threads) {
    check_grid(delta_min, delta_max, n_points);
    params.validate();
    std::vector<SpectrumRow> rows(n_points);
    parallel_for(n_points, threads, [&](std::size_t i) {
        ModelParams p = params;
        p.delta = grid_point(delta_min, delta_max, n_points, i);
        const auto s = solve_two_dot(p);
        rows[i] = {p.delta, s.T, s.R, s.Loss};
    });
    return rows;
}

std::vector<SpectrumRow> sweep_single_dot(double gamma_prime, double delta_min, double delta_max,
                                          std::size_t n_points) {
    check_grid(delta_min, delta_max, n_points);
    std::vector<SpectrumRow> rows(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double d = grid_point(delta_min, delta_max, n_points, i);
        const auto s = solve_single_dot(gamma_prime, d);
        rows[i] = {d, s.T, s.R, s.Loss};
    }
    return rows;
}

PeakRecord reflection_peak(const ModelParams& params, const Bracket& br) {
    check_grid(br.lo, br.hi, br.scan_points);
    auto negR = [&](double d) {
        ModelParams p = params;
        p.delta = d;
        return -solve_for_search(p).R;
    };
    const std::size_t n = br.scan_points;
    std::size_t best = 0;
    double best_v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = negR(grid_point(br.lo, br.hi, n, i));
        if (i == 0 || v < best_v) {
            best = i;
            best_v = v;
        }
    }
    if (best == 0 || best == n - 1) {
        std::ostringstream msg;
        msg << "R is largest at the bracket edge [" << br.lo << ", " << br.hi << "] for kd = " << params.kd;
        throw NoPeakInBracket(msg.str());
    }
    const double d = golden(negR, grid_point(br.lo, br.hi, n, best - 1),
                            grid_point(br.lo, br.hi, n, best + 1), refine_tolerance);
    return {params.kd, d, -negR(d), params.include_superradiance};
}

bool near_tangent_pole(double kd, double tol) {
    // distance to the nearest odd multiple of pi/2
    const double x = kd / pi - 0.5;
    return std::abs(x - std::round(x)) * pi < tol;
}

PeakCurves peak_position_curve(const std::vector<double>& kd_values, const ModelParams& base,
                               const Bracket& bracket, std::optional<double> fixed_k0d,
                               unsigned threads) {
    const std::size_t n = kd_values.size();
    std::vector<std::optional<PeakRecord>> off(n), on(n);
    std::vector<std::string> why_off(n), why_on(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const double kd = kd_values[i];
        if (near_tangent_pole(kd, 1e-3)) {
            why_off[i] = why_on[i] = "kd within 1e-3 of a tangent pole";
            return;
        }
        ModelParams p = base;
        p.kd = kd;
        p.include_superradiance = false;
        try {
            off[i] = reflection_peak(p, bracket);
        } catch (const NoPeakInBracket& e) {
            why_off[i] = e.what();
        }
        p.include_superradiance = true;
        p.k0d = fixed_k0d ? *fixed_k0d : kd;
        try {
            on[i] = reflection_peak(p, bracket);
        } catch (const NoPeakInBracket& e) {
            why_on[i] = e.what();
        }
    });
    PeakCurves out;
    for (std::size_t i = 0; i < n; ++i) {
        if (off[i]) out.without_sr.push_back(*off[i]);
        else out.warnings.push_back("skipped kd = " + std::to_string(kd_values[i]) + " (no SR): " + why_off[i]);
        if (on[i]) out.with_sr.push_back(*on[i]);
        else out.warnings.push_back("skipped kd = " + std::to_string(kd_values[i]) + " (SR): " + why_on[i]);
    }
    return out;
}

double tunneling_residual(double kd, double delta, double gamma_prime) {
    const double t = std::tan(kd);
    return std::abs(-t * t + 4.0 * delta * delta + gamma_prime * gamma_prime);
}

ReflectionMinimum reflection_minimum(const ModelParams& params, const Bracket& br) {
    check_grid(br.lo, br.hi, br.scan_points);
    // |r| has a kink at an exact zero, which golden section resolves far better than |r|^2
    auto absr = [&](double d) {
        ModelParams p = params;
        p.delta = d;
        return std::abs(solve_for_search(p).r);
    };
    const std::size_t n = br.scan_points;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = absr(grid_point(br.lo, br.hi, n, i));
    std::size_t best = 0;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (v[i] <= v[i - 1] && v[i] <= v[i + 1] && (best == 0 || v[i] < v[best])) best = i;
    if (best == 0) {
        std::ostringstream msg;
        msg << "no interior minimum of R in [" << br.lo << ", " << br.hi << "] for kd = " << params.kd;
        throw NoMinimumInBracket(msg.str());
    }
    const double d = golden(absr, grid_point(br.lo, br.hi, n, best - 1),
                            grid_point(br.lo, br.hi, n, best + 1), refine_tolerance);
    const double rmin = absr(d);
    return {d, rmin * rmin, tunneling_residual(params.kd, d, params.gamma_prime())};
}

}  // namespace plasmonqd
