#include "plasmonqd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "plasmonqd/errors.hpp"

namespace plasmonqd {

void ModeHamiltonian::apply(const cplx* y, cplx* dy) const {
    // split real arithmetic; this loop is the whole cost of an oracle run
    const std::size_t n = q.size();
    const double* yr = reinterpret_cast<const double*>(y);
    const double* yl = reinterpret_cast<const double*>(y + n);
    double* dr = reinterpret_cast<double*>(dy);
    double* dl = reinterpret_cast<double*>(dy + n);
    const cplx x1 = y[2 * n];
    const cplx x2 = n_dots > 1 ? y[2 * n + 1] : cplx(0.0);
    const double x1r = x1.real(), x1i = x1.imag(), x2r = x2.real(), x2i = x2.imag();
    double s1r = 0, s1i = 0, s2r = 0, s2i = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double g = G[j], pr = ph[j].real(), pi_ = ph[j].imag(), e = q[j];
        const double ar = yr[2 * j], ai = yr[2 * j + 1], br = yl[2 * j], bi = yl[2 * j + 1];
        // right movers feel g (x1 + conj(ph) x2), left movers g (x1 + ph x2)
        const double cr = pr * x2r + pi_ * x2i, ci = pr * x2i - pi_ * x2r;
        const double lr = pr * x2r - pi_ * x2i, li = pr * x2i + pi_ * x2r;
        const double ur = g * (x1r + cr), ui = g * (x1i + ci);
        const double vr = g * (x1r + lr), vi = g * (x1i + li);
        dr[2 * j] = e * ai - ui;
        dr[2 * j + 1] = -e * ar + ur;
        dl[2 * j] = e * bi - vi;
        dl[2 * j + 1] = -e * br + vr;
        s1r += g * (ar + br);
        s1i += g * (ai + bi);
        // ph * right + conj(ph) * left
        s2r += g * (pr * (ar + br) - pi_ * (ai - bi));
        s2i += g * (pr * (ai + bi) + pi_ * (ar - br));
    }
    const cplx i(0.0, 1.0);
    const cplx s1(s1r, s1i), s2(s2r, s2i);
    dy[2 * n] = -0.5 * gamma_prime * x1 - i * h12 * x2 + i * s1;
    if (n_dots > 1) dy[2 * n + 1] = -0.5 * gamma_prime * x2 - i * h12 * x1 + i * s2;
}

Eigen::MatrixXcd ModeHamiltonian::dense() const {
    const std::size_t n = q.size();
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim(), dim());
    const cplx i(0.0, 1.0);
    const auto d1 = static_cast<Eigen::Index>(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto r = static_cast<Eigen::Index>(j), l = static_cast<Eigen::Index>(n + j);
        H(r, r) = q[j];
        H(l, l) = q[j];
        H(r, d1) = H(d1, r) = -G[j];
        H(l, d1) = H(d1, l) = -G[j];
        if (n_dots > 1) {
            H(r, d1 + 1) = -G[j] * std::conj(ph[j]);
            H(d1 + 1, r) = -G[j] * ph[j];
            H(l, d1 + 1) = -G[j] * ph[j];
            H(d1 + 1, l) = -G[j] * std::conj(ph[j]);
        }
    }
    H(d1, d1) = -0.5 * i * gamma_prime;
    if (n_dots > 1) {
        H(d1 + 1, d1 + 1) = -0.5 * i * gamma_prime;
        H(d1, d1 + 1) = h12;
        H(d1 + 1, d1) = h12;
    }
    return H;
}

double ModeHamiltonian::norm_bound() const {
    double emax = 0.5 * gamma_prime;
    double g2 = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
        emax = std::max(emax, std::abs(q[j]));
        g2 += 2.0 * G[j] * G[j];
    }
    return emax + std::sqrt(static_cast<double>(n_dots) * g2) + std::abs(h12);
}

ModeHamiltonian free_hamiltonian(const ModeGrid& grid, std::size_t n_dots) {
    ModeHamiltonian H;
    H.q = grid.q;
    H.G.assign(grid.size(), 0.0);
    H.ph.assign(grid.size(), cplx(1.0));
    H.n_dots = n_dots;
    return H;
}

ModeHamiltonian build_hamiltonian(const ModelParams& params, const ModeGrid& grid, double separation,
                                  std::size_t n_dots) {
    params.validate();
    if (n_dots != 1 && n_dots != 2) throw InvalidParams("n_dots must be 1 or 2");
    if (!(separation > 0.0)) throw InvalidParams("separation must be > 0");
    const double dev = discretized_decay_deviation(grid, grid.centre, 0.5 * gamma_pl);
    if (dev > 0.01) {
        std::ostringstream msg;
        msg << "discretised decay rate deviates by " << dev * 100.0 << "% (max spacing " << grid.max_spacing()
            << ")";
        throw GridTooCoarse(msg.str());
    }
    ModeHamiltonian H = free_hamiltonian(grid, n_dots);
    H.gamma_prime = params.gamma_prime();
    if (n_dots == 2 && params.include_superradiance) H.h12 = -superradiant_rate(params.k0d, params.gamma0);
    const cplx i(0.0, 1.0);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        H.G[j] = std::sqrt(grid.w[j] * grid.f[j] * gamma_pl / (4.0 * pi));
        // wavevector relative to the carrier: k d = kd + (q - delta) d / v_g
        const double phase = params.kd + (grid.q[j] - params.delta) * separation / v_g;
        H.ph[j] = std::exp(i * phase);
    }
    return H;
}

EvolutionResult evolve(const std::vector<cplx>& state0, const ModeHamiltonian& H, double dt, double t_final,
                       std::size_t sample_every) {
    if (state0.size() != H.dim()) throw InvalidParams("state size does not match the Hamiltonian");
    if (!(dt > 0.0) || !(t_final > 0.0)) throw InvalidParams("dt and t_final must be > 0");
    const double bound = H.norm_bound();
    if (dt * bound > 0.1 * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "dt * max|E| = " << dt * bound << " > 0.1";
        throw StepTooLarge(msg.str());
    }
    EvolutionResult res;
    res.steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
    res.dt = t_final / static_cast<double>(res.steps);
    std::vector<cplx> y = state0;
    auto norm2 = [](const std::vector<cplx>& v) {
        double s = 0.0;
        for (const auto& z : v) s += std::norm(z);
        return s;
    };
    const double n0 = norm2(y);
    res.times.reserve(res.steps + 1);
    res.norms.reserve(res.steps + 1);
    res.times.push_back(0.0);
    res.norms.push_back(n0);
    if (sample_every) {
        res.samples.push_back(y);
        res.sample_times.push_back(0.0);
    }
    Rk4Workspace ws;
    auto rhs = [&H](double, const cplx* in, cplx* out) { H.apply(in, out); };
    for (std::size_t s = 1; s <= res.steps; ++s) {
        rk4_step(rhs, res.dt * static_cast<double>(s - 1), y, res.dt, ws);
        const double t = res.dt * static_cast<double>(s);
        const double nrm = norm2(y);
        res.times.push_back(t);
        res.norms.push_back(nrm);
        res.max_norm_excess = std::max(res.max_norm_excess, nrm - n0);
        if (sample_every && (s % sample_every == 0 || s == res.steps)) {
            res.samples.push_back(y);
            res.sample_times.push_back(t);
        }
    }
    res.final_state = std::move(y);
    return res;
}

std::vector<cplx> initial_wavepacket(const ModeGrid& grid, const WavepacketSpec& spec, std::size_t n_dots) {
    if (!(spec.sigma_k > 0.0)) throw InvalidParams("sigma_k must be > 0");
    const std::size_t n = grid.size();
    std::vector<cplx> y(2 * n + n_dots, cplx(0.0));
    const cplx i(0.0, 1.0);
    double norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double u = (grid.q[j] - spec.k_center) / spec.sigma_k;
        y[j] = std::sqrt(grid.w[j]) * std::exp(-0.5 * u * u) * std::exp(-i * grid.q[j] * spec.x0);
        norm += std::norm(y[j]);
    }
    const double s = 1.0 / std::sqrt(norm);
    for (std::size_t j = 0; j < n; ++j) y[j] *= s;
    return y;
}

cplx right_mover_field(const ModeGrid& grid, const std::vector<cplx>& state, double x) {
    const cplx i(0.0, 1.0);
    cplx acc{0.0};
    for (std::size_t j = 0; j < grid.size(); ++j)
        acc += std::sqrt(grid.w[j] / (2.0 * pi)) * state[j] * std::exp(i * grid.q[j] * x);
    return acc;
}

ExtractedScattering extract_scattering(const EvolutionResult& result, const ModeGrid& grid,
                                       const WavepacketSpec& spec) {
    const std::size_t n = grid.size();
    const auto& y = result.final_state;
    if (y.size() < 2 * n + 1) throw InvalidParams("final state does not match grid");
    const double tf = result.times.empty() ? 0.0 : result.times.back();
    ExtractedScattering ex{};
    ex.dot_population = 0.0;
    for (std::size_t k = 2 * n; k < y.size(); ++k) ex.dot_population += std::norm(y[k]);
    if (ex.dot_population > 1e-6) {
        std::ostringstream msg;
        msg << "dot population " << ex.dot_population << " > 1e-6 at t = " << tf;
        throw NotConverged(msg.str());
    }
    const auto in = initial_wavepacket(grid, spec, y.size() - 2 * n);
    const cplx i(0.0, 1.0);
    cplx ot{0.0}, orr{0.0};
    double nn = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const cplx free = in[j] * std::exp(-i * grid.q[j] * tf);
        ot += std::conj(free) * y[j];
        orr += std::conj(free) * y[n + j];
        nn += std::norm(free);
    }
    ex.t_packet = ot / nn;
    ex.r_packet = orr / nn;
    const std::size_t c = grid.centre_index;
    const cplx free_c = in[c] * std::exp(-i * grid.q[c] * tf);
    ex.t_num = y[c] / free_c;
    ex.r_num = y[n + c] / free_c;
    return ex;
}

OracleComparison run_oracle(const ModelParams& params, const OracleSettings& st) {
    params.validate();
    if (!(st.sigma_k > 0.0) || !(st.separation > 0.0) || !(st.dt_factor > 0.0))
        throw InvalidParams("oracle settings must be positive");
    WavepacketSpec wp{params.delta, st.sigma_k, -st.launch_sigmas / st.sigma_k};
    const double t_final = 2.0 * std::abs(wp.x0) + st.separation + st.settle_time;

    ModeGridSpec gs;
    gs.centre = params.delta;
    gs.fine_spacing = st.fine_spacing > 0.0 ? st.fine_spacing : st.sigma_k / 20.0;
    gs.fine_half_width = 5.0 * st.sigma_k;
    gs.coarse_spacing = st.coarse_spacing;
    if (st.enforce_recurrence) gs.coarse_spacing = std::min(gs.coarse_spacing, 2.0 * pi / (1.05 * t_final));
    gs.coarse_spacing = std::max(gs.coarse_spacing, gs.fine_spacing);
    gs.band_width = st.band_width;
    gs.band_extent = 6.0;
    const ModeGrid grid = make_mode_grid(gs);

    const auto support = static_cast<std::size_t>(std::floor(2.0 * gs.fine_half_width / gs.fine_spacing)) + 1;
    if (support < 200) throw GridTooCoarse("packet support covered by fewer than 200 modes");
    if (grid.recurrence_time() < t_final) {
        std::ostringstream msg;
        msg << "grid recurrence time " << grid.recurrence_time() << " < run time " << t_final;
        throw GridTooCoarse(msg.str());
    }

    const ModeHamiltonian H = build_hamiltonian(params, grid, st.separation);
    const double dt = st.dt_factor / H.norm_bound();
    const auto res = evolve(initial_wavepacket(grid, wp), H, dt, t_final);

    OracleComparison out;
    out.params = params;
    out.solver = solve_two_dot(params);
    out.oracle = extract_scattering(res, grid, wp);
    out.err_t = std::abs(out.oracle.t_num - out.solver.t);
    out.err_r = std::abs(out.oracle.r_num - out.solver.r);
    out.err_t_packet = std::abs(out.oracle.t_packet - out.solver.t);
    out.err_r_packet = std::abs(out.oracle.r_packet - out.solver.r);
    out.norm_final = res.norms.back();
    out.max_norm_excess = res.max_norm_excess;
    out.modes = H.dim();
    out.steps = res.steps;
    return out;
}

double wigner_weisskopf_rate(double band_width, double spacing, double t_lo, double t_hi, FormFactor form) {
    ModeGridSpec gs;
    gs.centre = 0.0;
    gs.fine_spacing = spacing;
    gs.coarse_spacing = spacing;
    gs.fine_half_width = 0.0;
    gs.band_width = band_width;
    gs.form = form;
    const ModeGrid grid = make_mode_grid(gs);
    if (grid.recurrence_time() < t_hi) throw GridTooCoarse("recurrence time shorter than the fit window");
    ModelParams p;
    p.delta = 0.0;
    const ModeHamiltonian H = build_hamiltonian(p, grid, 1.0, 1);
    std::vector<cplx> y(H.dim(), cplx(0.0));
    y[H.dot_index(0)] = 1.0;
    const double dt = 0.1 / H.norm_bound();
    const auto every = std::max<std::size_t>(1, static_cast<std::size_t>(t_hi / dt / 400.0));
    const auto res = evolve(y, H, dt, t_hi, every);
    // least-squares slope of log population
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t k = 0; k < res.samples.size(); ++k) {
        const double t = res.sample_times[k];
        if (t < t_lo) continue;
        const double ly = std::log(std::norm(res.samples[k][H.dot_index(0)]));
        sx += t;
        sy += ly;
        sxx += t * t;
        sxy += t * ly;
        ++m;
    }
    return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace plasmonqd
