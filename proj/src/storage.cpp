#include "plasmonqd/storage.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plasmonqd/errors.hpp"

namespace plasmonqd {

namespace {

constexpr double kappa = v_g * v_g / (2.0 * pi * storage_g * storage_g);  // = 2

std::vector<double> central_derivative(const std::vector<double>& f, double h) {
    // 4th order inside, 2nd order one step from the ends, 1st order at the ends
    const std::size_t n = f.size();
    std::vector<double> d(n, 0.0);
    if (n < 5) return d;
    for (std::size_t k = 2; k + 2 < n; ++k)
        d[k] = (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) / (12.0 * h);
    d[1] = (f[2] - f[0]) / (2.0 * h);
    d[n - 2] = (f[n - 1] - f[n - 3]) / (2.0 * h);
    d[0] = (f[1] - f[0]) / h;
    d[n - 1] = (f[n - 1] - f[n - 2]) / h;
    return d;
}

std::vector<cplx> central_derivative(const std::vector<cplx>& f, double h) {
    std::vector<double> re(f.size()), im(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        re[k] = f[k].real();
        im[k] = f[k].imag();
    }
    const auto dr = central_derivative(re, h), di = central_derivative(im, h);
    std::vector<cplx> out(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) out[k] = {dr[k], di[k]};
    return out;
}

// a_hat(q) = int a(t) e^{i q t} dt, trapezoid on a thinned copy of the samples
std::vector<cplx> spectrum_of(const std::vector<cplx>& a, double sample_dt, const std::vector<double>& q) {
    const std::size_t stride = std::max<std::size_t>(1, static_cast<std::size_t>(0.02 / sample_dt));
    const double h = sample_dt * static_cast<double>(stride);
    std::vector<cplx> out(q.size(), cplx(0.0));
    const cplx i(0.0, 1.0);
    for (std::size_t j = 0; j < q.size(); ++j) {
        const cplx rot = std::exp(i * q[j] * h);
        cplx ph{1.0};
        cplx acc{0.0};
        std::size_t k = 0;
        for (; k < a.size(); k += stride) {
            const double wgt = (k == 0 || k + stride >= a.size()) ? 0.5 : 1.0;
            acc += wgt * a[k] * ph;
            ph *= rot;
        }
        out[j] = acc * h;
    }
    return out;
}

}  // namespace

double StorageParams::gamma_prime() const { return std::isinf(P) ? 0.0 : gamma_pl / P; }
double StorageParams::pulse_centre() const { return t0 > 0.0 ? t0 : 6.2 / sigma; }
double StorageParams::run_time() const { return duration > 0.0 ? duration : 2.0 * pulse_centre() + 20.0; }

void StorageParams::validate() const {
    if (!(P > 1.0)) throw InvalidParams("Purcell factor must be > 1");
    if (!(sigma > 0.0)) throw InvalidParams("input bandwidth must be > 0");
    if (sigma > 0.1 * gamma_pl) {
        std::ostringstream msg;
        msg << "input bandwidth " << sigma << " exceeds 0.1 Gamma_pl";
        throw BandwidthTooWide(msg.str());
    }
    if (!(omega_cap > 0.0) || !(dt_factor > 0.0)) throw InvalidParams("omega_cap and dt_factor must be > 0");
    if (run_time() <= pulse_centre()) throw InvalidParams("run must extend past the pulse centre");
}

std::pair<cplx, cplx> singlet_triplet_couplings(double kd) {
    const cplx e = std::exp(cplx(0.0, kd));
    const double s = std::sqrt(2.0);
    return {(1.0 + e) / s, (1.0 - e) / s};
}

StorageSetup prepare_storage(const StorageParams& params) {
    params.validate();
    StorageSetup s;
    s.grid = make_mode_grid(params.grid);
    s.t_end = params.run_time();
    const double dev = discretized_decay_deviation(s.grid, s.grid.centre, 0.5 * gamma_pl);
    if (dev > 0.01) throw GridTooCoarse("storage grid: discretised decay off by more than 1%");
    if (s.grid.recurrence_time() < s.t_end) {
        std::ostringstream msg;
        msg << "storage grid recurrence time " << s.grid.recurrence_time() << " < run time " << s.t_end;
        throw GridTooCoarse(msg.str());
    }
    double g2 = 0.0;
    for (std::size_t j = 0; j < s.grid.size(); ++j) g2 += 2.0 * s.grid.w[j] * s.grid.f[j] * gamma_pl / (8.0 * pi);
    const double bound = std::max(s.grid.max_abs_energy(), 0.5 * params.gamma_prime()) +
                         std::sqrt(2.0 * g2) + params.omega_cap;
    s.steps = static_cast<std::size_t>(std::ceil(s.t_end * bound / params.dt_factor));
    s.dt = s.t_end / static_cast<double>(s.steps);
    return s;
}

InputField gaussian_input(const StorageSetup& setup, const StorageParams& params) {
    InputField in;
    in.sample_dt = setup.sample_dt();
    in.a.resize(setup.n_samples());
    const double amp = std::pow(params.sigma * params.sigma / pi, 0.25);
    const double t0 = params.pulse_centre();
    const cplx carrier = std::polar(1.0, params.phase);
    for (std::size_t k = 0; k < in.a.size(); ++k) {
        const double u = params.sigma * (in.time(k) - t0);
        in.a[k] = amp * std::exp(-0.5 * u * u) * carrier;
    }
    return in;
}

double input_bandwidth(const InputField& in) {
    // sqrt(2 <|a'|^2> / <|a|^2>), equal to sigma for a Gaussian envelope
    const auto d = central_derivative(in.a, in.sample_dt);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < in.a.size(); ++k) {
        num += std::norm(d[k]);
        den += std::norm(in.a[k]);
    }
    return den > 0.0 ? std::sqrt(2.0 * num / den) : 0.0;
}

std::vector<cplx> field_envelope(const std::vector<cplx>& c_bright) {
    const cplx f = cplx(0.0, -1.0) * std::sqrt(2.0 * pi) * storage_g / v_g;
    std::vector<cplx> e(c_bright.size());
    for (std::size_t k = 0; k < e.size(); ++k) e[k] = f * c_bright[k];
    return e;
}

ControlPulse impedance_matched_pulse(const InputField& input, const StorageParams& params) {
    params.validate();
    if (input.a.size() < 5 || !(input.sample_dt > 0.0)) throw InvalidParams("input needs >= 5 samples");
    const double bw = input_bandwidth(input);
    if (bw > 0.1 * gamma_pl) {
        std::ostringstream msg;
        msg << "input bandwidth " << bw << " exceeds 0.1 Gamma_pl";
        throw BandwidthTooWide(msg.str());
    }
    const double G = gamma_pl, gp = params.gamma_prime();
    const double h = input.sample_dt;
    const std::size_t n = input.a.size();
    const auto& a = input.a;
    const auto adot = central_derivative(a, h);

    // Holding c_B = i a / sqrt(G) nulls both outputs; then
    //   Omega c_M = X = (a' + (G' - G) a / 2) / sqrt(G)
    //   |c_M|^2 = -|a|^2 / G + (G - G') / G * int |a|^2
    //   arg(c_M)' = -Im(X* a) / (sqrt(G) |c_M|^2)
    ControlPulse pulse;
    pulse.sample_dt = h;
    pulse.omega.assign(n, cplx(0.0));
    pulse.c_m_design.assign(n, cplx(0.0));
    double energy = 0.0, phase = 0.0, prev_rate = 0.0;
    bool in_window = false;
    double window_start = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) energy += 0.5 * h * (std::norm(a[k - 1]) + std::norm(a[k]));
        const cplx X = (adot[k] + 0.5 * (gp - G) * a[k]) / std::sqrt(G);
        const double rho2 = -std::norm(a[k]) / G + (G - gp) / G * energy;
        const double t = input.time(k);
        if (rho2 < params.population_floor) {
            if (!in_window) {
                in_window = true;
                window_start = t;
            }
            pulse.truncated_energy += h * std::norm(a[k]);
            prev_rate = 0.0;
            continue;
        }
        if (in_window) {
            pulse.truncated.emplace_back(window_start, t);
            in_window = false;
        }
        const double rate = -std::imag(std::conj(X) * a[k]) / (std::sqrt(G) * rho2);
        phase += 0.5 * h * (prev_rate + rate);
        prev_rate = rate;
        const cplx cm = std::polar(std::sqrt(rho2), phase);
        cplx om = X / cm;
        if (std::abs(om) > params.omega_cap) om *= params.omega_cap / std::abs(om);
        pulse.omega[k] = om;
        pulse.c_m_design[k] = cm;
        pulse.peak_abs = std::max(pulse.peak_abs, std::abs(om));
    }
    if (in_window) pulse.truncated.emplace_back(window_start, input.time(n - 1));
    if (pulse.truncated_energy > params.truncation_tolerance) {
        std::ostringstream msg;
        msg << "input energy " << pulse.truncated_energy << " falls where |c_M|^2 < " << params.population_floor;
        throw PopulationUnderflow(msg.str());
    }
    return pulse;
}

StorageRun simulate_storage(const ControlPulse& pulse, const InputField& input, const StorageParams& params,
                            const SimulationOptions& opts) {
    const StorageSetup setup = prepare_storage(params);
    const std::size_t ns = setup.n_samples();
    if (pulse.omega.size() != ns || std::abs(pulse.sample_dt - setup.sample_dt()) > 1e-12 * setup.sample_dt())
        throw InvalidParams("pulse is not sampled on the run's half-step grid");
    if (opts.with_input && (input.a.size() != ns || std::abs(input.sample_dt - setup.sample_dt()) > 1e-12))
        throw InvalidParams("input is not sampled on the run's half-step grid");
    for (const auto& om : pulse.omega)
        if (!std::isfinite(std::abs(om)) || std::abs(om) > params.omega_cap * (1.0 + 1e-12))
            throw StepTooLarge("control pulse exceeds the Rabi cap used to size the step");

    const ModeGrid& grid = setup.grid;
    const std::size_t n = grid.size();
    const double gp = params.gamma_prime();
    const double ph = params.parity == Parity::even ? 1.0 : -1.0;
    std::vector<double> G(n);
    for (std::size_t j = 0; j < n; ++j) G[j] = std::sqrt(grid.w[j] * grid.f[j] * gamma_pl / (8.0 * pi));

    // [right | left | e1 e2 s1 s2]
    const std::size_t ie1 = 2 * n, ie2 = ie1 + 1, is1 = ie1 + 2, is2 = ie1 + 3;
    std::vector<cplx> y(2 * n + 4, cplx(0.0));
    if (opts.with_input) {
        const auto ahat = spectrum_of(input.a, input.sample_dt, grid.q);
        for (std::size_t j = 0; j < n; ++j) {
            const cplx c = std::sqrt(grid.w[j] / (2.0 * pi)) * ahat[j] / std::sqrt(2.0);
            y[j] = c;
            y[n + j] = c;
        }
    }
    y[is1] = y[is2] = opts.initial_c_m / std::sqrt(2.0);

    const cplx i(0.0, 1.0);
    const double hs = setup.sample_dt();
    auto rhs = [&](double t, const cplx* u, cplx* du) {
        const auto k = static_cast<std::size_t>(std::llround(t / hs));
        const cplx o1 = pulse.omega[std::min(k, ns - 1)];
        const cplx o2 = ph * o1;
        const cplx e1 = u[ie1], e2 = u[ie2];
        const cplx drive = i * (e1 + ph * e2);
        cplx s{0.0};
        for (std::size_t j = 0; j < n; ++j) {
            s += G[j] * (u[j] + u[n + j]);
            du[j] = -i * grid.q[j] * u[j] + G[j] * drive;
            du[n + j] = -i * grid.q[j] * u[n + j] + G[j] * drive;
        }
        du[ie1] = -0.5 * gp * e1 + i * s + i * o1 * u[is1];
        du[ie2] = -0.5 * gp * e2 + i * ph * s + i * o2 * u[is2];
        du[is1] = i * std::conj(o1) * e1;
        du[is2] = i * std::conj(o2) * e2;
    };

    StorageRun run;
    const double r2 = 1.0 / std::sqrt(2.0);
    auto record = [&](double t) {
        run.times.push_back(t);
        run.c_t.push_back(r2 * (y[ie1] + y[ie2]));
        run.c_s.push_back(r2 * (y[ie1] - y[ie2]));
        run.c_mt.push_back(r2 * (y[is1] + y[is2]));
        run.c_ms.push_back(r2 * (y[is1] - y[is2]));
        run.c_bright.push_back(r2 * (y[ie1] + ph * y[ie2]));
        run.c_m.push_back(r2 * (y[is1] + y[is2]));
    };
    for (auto* v : {&run.c_t, &run.c_s, &run.c_mt, &run.c_ms, &run.c_bright, &run.c_m}) v->reserve(setup.steps + 1);
    run.times.reserve(setup.steps + 1);
    record(0.0);
    Rk4Workspace ws;
    for (std::size_t st = 0; st < setup.steps; ++st) {
        rk4_step(rhs, setup.dt * static_cast<double>(st), y, setup.dt, ws);
        record(setup.dt * static_cast<double>(st + 1));
    }
    run.e_field = field_envelope(run.c_bright);
    run.modes_right.assign(y.begin(), y.begin() + static_cast<long>(n));
    run.modes_left.assign(y.begin() + static_cast<long>(n), y.begin() + static_cast<long>(2 * n));
    for (std::size_t j = 0; j < n; ++j) {
        run.outgoing_right += std::norm(y[j]);
        run.outgoing_left += std::norm(y[n + j]);
    }
    run.outgoing_norm = run.outgoing_right + run.outgoing_left;
    run.efficiency = std::norm(y[is1]) + std::norm(y[is2]);
    run.c_m_final = run.c_m.back();
    run.dot_population_final = std::norm(y[ie1]) + std::norm(y[ie2]);
    run.truncated = pulse.truncated;
    return run;
}

namespace {

std::vector<double> identity_rhs(const StorageRun& run, double P, double h) {
    const double gp = std::isinf(P) ? 0.0 : gamma_pl / P;
    std::vector<double> e2(run.e_field.size());
    for (std::size_t k = 0; k < e2.size(); ++k) e2[k] = std::norm(run.e_field[k]);
    const auto de2 = central_derivative(e2, h);
    std::vector<double> rhs(e2.size());
    for (std::size_t k = 0; k < e2.size(); ++k) rhs[k] = -kappa * (de2[k] - (gamma_pl - gp) * e2[k]);
    return rhs;
}

}  // namespace

double verify_population_identity(const StorageRun& run, double P) {
    if (run.times.size() < 5) throw InvalidParams("trajectory too short");
    const double h = run.times[1] - run.times[0];
    std::vector<double> m2(run.c_m.size());
    for (std::size_t k = 0; k < m2.size(); ++k) m2[k] = std::norm(run.c_m[k]);
    const auto lhs = central_derivative(m2, h);
    const auto rhs = identity_rhs(run, P, h);
    double worst = 0.0, scale = 0.0;
    // the one-sided end stencils are lower order; judge the interior
    for (std::size_t k = 2; k + 2 < lhs.size(); ++k) {
        worst = std::max(worst, std::abs(lhs[k] - rhs[k]));
        scale = std::max(scale, std::abs(rhs[k]));
    }
    return scale > 0.0 ? worst / scale : worst;
}

double integrated_identity_rhs(const StorageRun& run, double P) {
    if (run.times.size() < 5) throw InvalidParams("trajectory too short");
    const double h = run.times[1] - run.times[0];
    const auto rhs = identity_rhs(run, P, h);
    double s = 0.0;
    for (std::size_t k = 1; k < rhs.size(); ++k) s += 0.5 * h * (rhs[k - 1] + rhs[k]);
    return s;
}

MatchedStorage run_matched_storage(const StorageParams& params) {
    const StorageSetup setup = prepare_storage(params);
    MatchedStorage m;
    m.input = gaussian_input(setup, params);
    m.pulse = impedance_matched_pulse(m.input, params);
    m.run = simulate_storage(m.pulse, m.input, params);
    m.identity_residual = verify_population_identity(m.run, params.P);
    return m;
}

RetrievalReport retrieval_overlap(const StorageParams& params) {
    const StorageSetup setup = prepare_storage(params);
    const InputField in = gaussian_input(setup, params);
    const ControlPulse store = impedance_matched_pulse(in, params);
    const std::size_t ns = setup.n_samples();

    ControlPulse rev = store;
    InputField expected;
    expected.sample_dt = in.sample_dt;
    expected.a.resize(ns);
    for (std::size_t k = 0; k < ns; ++k) {
        rev.omega[k] = std::conj(store.omega[ns - 1 - k]);
        expected.a[k] = std::conj(in.a[ns - 1 - k]);
    }
    SimulationOptions opts;
    opts.initial_c_m = 1.0;
    opts.with_input = false;
    const StorageRun run = simulate_storage(rev, in, params, opts);

    // a field b(t) emitted at the dots leaves mode amplitudes ~ sqrt(w) b_hat(q) e^{-i q T}
    const auto& grid = setup.grid;
    const auto bhat = spectrum_of(expected.a, expected.sample_dt, grid.q);
    const cplx i(0.0, 1.0);
    cplx dot{0.0};
    double ne = 0.0, nv = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const cplx e = std::sqrt(grid.w[j]) * bhat[j] * std::exp(-i * grid.q[j] * setup.t_end);
        dot += std::conj(e) * (run.modes_right[j] + run.modes_left[j]);
        ne += 2.0 * std::norm(e);
        nv += std::norm(run.modes_right[j]) + std::norm(run.modes_left[j]);
    }
    return {std::abs(dot) / std::sqrt(ne * nv), nv};
}

}  // namespace plasmonqd
