#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "plasmonqd/entanglement.hpp"
#include "plasmonqd/errors.hpp"
#include "plasmonqd/oracle.hpp"
#include "plasmonqd/parallel.hpp"
#include "plasmonqd/spectra.hpp"
#include "plasmonqd/storage.hpp"

namespace plasmonqd::cli {

namespace {

using nlohmann::json;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

Table spectrum_table(const std::vector<SpectrumRow>& rows) {
    Table t{{{"delta"}, {"T"}, {"R"}, {"Loss"}}, {}};
    for (const auto& r : rows) t.rows.push_back({r.delta, r.T, r.R, r.Loss});
    return t;
}

struct SpectrumJob {
    std::string stem;
    bool single = false;
    double kd = 0.0, gamma0 = 0.0, gamma_nr = 0.0, gamma_prime = 0.0;
};

std::vector<SpectrumJob> spectrum_jobs(const SpectrumConfig& s) {
    std::vector<SpectrumJob> jobs;
    auto pair = [&](const std::string& prefix, double kd, double g0, double gnr) {
        jobs.push_back({prefix + "_kd" + tag(kd) + "_g0" + tag(g0) + "_gnr" + tag(gnr), false, kd, g0, gnr, g0 + gnr});
    };
    auto single = [&](const std::string& prefix, double gp) {
        jobs.push_back({prefix + "_single_gp" + tag(gp), true, 0.0, 0.0, 0.0, gp});
    };
    if (s.preset) {
        // panel a: several separations at gamma0 = Gamma0 = 0.025
        for (double kd : {pi / 4, pi / 2, 3 * pi / 4, pi, 2 * pi}) pair("fig2a", kd, 0.025, 0.025);
        // panel b: kd = pi/4 with rising non-radiative loss
        for (double gnr : {0.0, 0.025, 0.1, 0.25}) pair("fig2b", pi / 4, 0.025, gnr);
        for (double gp : {0.0, 0.05}) single("fig2d", gp);
        return jobs;
    }
    if (s.single_dot) {
        for (double gp : s.gamma_prime) single("spectrum", gp);
        return jobs;
    }
    const std::vector<double> g0s = s.gamma0.empty() ? std::vector<double>{0.0} : s.gamma0;
    const std::vector<double> gnrs = s.gamma_nr.empty() ? std::vector<double>{0.0} : s.gamma_nr;
    for (double kd : s.kd)
        for (double g0 : g0s)
            for (double gnr : gnrs) pair("spectrum", kd, g0, gnr);
    return jobs;
}

}  // namespace

int cmd_spectrum(const RunConfig& cfg, OutputDir& out) {
    const auto& s = cfg.spectrum;
    for (const auto& job : spectrum_jobs(s)) {
        json meta{{"single_dot", job.single}, {"gamma_prime", job.gamma_prime}};
        std::vector<SpectrumRow> rows;
        if (job.single) {
            rows = sweep_single_dot(job.gamma_prime, s.delta_min, s.delta_max, s.points);
        } else {
            ModelParams p;
            p.kd = job.kd;
            p.gamma0 = job.gamma0;
            p.gamma_nr = job.gamma_nr;
            p.include_superradiance = s.superradiance;
            p.k0d = s.k0d > 0.0 ? s.k0d : job.kd;
            rows = sweep_detuning(p, s.delta_min, s.delta_max, s.points, cfg.threads);
            meta.update({{"kd", job.kd},
                         {"gamma0", job.gamma0},
                         {"gamma_nr", job.gamma_nr},
                         {"superradiance", s.superradiance},
                         {"k0d", p.k0d}});
        }
        out.write_table(job.stem, spectrum_table(rows), meta);
    }
    return 0;
}

int cmd_peaks(const RunConfig& cfg, OutputDir& out) {
    const auto& c = cfg.peaks;
    ModelParams base;
    base.gamma0 = c.gamma0;
    base.gamma_nr = c.gamma_nr;
    const Bracket br{c.delta_min, c.delta_max, c.scan_points};
    std::optional<double> fixed;
    if (c.k0d > 0.0) fixed = c.k0d;
    const auto curves = peak_position_curve(linspace(c.kd_min, c.kd_max, c.kd_points), base, br, fixed, cfg.threads);
    Table t{{{"kd"}, {"delta_peak"}, {"R_peak"}, {"with_sr", true}}, {}};
    for (const auto* series : {&curves.without_sr, &curves.with_sr})
        for (const auto& r : *series) t.rows.push_back({r.kd, r.delta_peak, r.R_peak, r.with_sr ? 1.0 : 0.0});
    for (const auto& w : curves.warnings) out.warn(w);
    out.write_table("peaks", t,
                    {{"gamma0", c.gamma0}, {"gamma_nr", c.gamma_nr}, {"k0d", c.k0d > 0.0 ? json(c.k0d) : json("kd")}});
    return 0;
}

int cmd_concurrence_map(const RunConfig& cfg, OutputDir& out) {
    const auto& c = cfg.map;
    ModelParams base;
    base.gamma0 = c.gamma0;
    base.gamma_nr = c.gamma_nr;
    base.include_superradiance = c.superradiance;
    if (c.superradiance) base.k0d = c.k0d;
    const auto map = concurrence_map(linspace(c.kd_min, c.kd_max, c.kd_points),
                                     linspace(c.delta_min, c.delta_max, c.delta_points), base, cfg.threads);
    Table t{{{"kd"}, {"delta"}, {"C"}}, {}};
    for (const auto& cell : map.cells) t.rows.push_back({cell.kd, cell.delta, cell.C ? *cell.C : nan});
    for (const auto& w : map.warnings) out.warn(w);
    out.write_table("concurrence_map", t, {{"gamma_prime", c.gamma0 + c.gamma_nr}, {"superradiance", c.superradiance}});
    return 0;
}

int cmd_phase(const RunConfig& cfg, OutputDir& out) {
    const auto& c = cfg.phase;
    KdPolicy pol;
    pol.centre = c.kd_centre;
    const auto rows = phase_scan(linspace(c.delta_min, c.delta_max, c.delta_points), c.gamma_prime, pol);
    Table t{{{"delta"}, {"gamma_prime"}, {"theta"}}, {}};
    std::size_t limits = 0;
    for (const auto& r : rows) {
        t.rows.push_back({r.delta, r.gamma_prime, r.theta});
        limits += r.limit;
    }
    if (limits) out.warn(std::to_string(limits) + " phase rows taken as two-sided limits at dark points");
    out.write_table("phase", t, {{"kd_centre", c.kd_centre}});
    return 0;
}

int cmd_oracle_verify(const RunConfig& cfg, OutputDir& out) {
    const auto& c = cfg.oracle;
    std::vector<ModelParams> points;
    for (double loss : c.loss)
        for (double kd : c.kd)
            for (double d : c.delta) {
                ModelParams p;
                p.kd = kd;
                p.delta = d;
                p.gamma0 = p.gamma_nr = loss;
                points.push_back(p);
            }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> ukd(0.1, 2 * pi), ud(-1.0, 1.0);
    for (std::size_t i = 0; i < c.extra_points; ++i) {
        ModelParams p;
        p.kd = ukd(rng);
        p.delta = ud(rng);
        const double loss = c.loss.empty() ? 0.0 : c.loss[i % c.loss.size()];
        p.gamma0 = p.gamma_nr = loss;
        points.push_back(p);
    }

    OracleSettings st;
    st.sigma_k = c.sigma_k;
    st.separation = c.separation;
    if (c.coarse) st.fine_spacing = 10.0 * c.sigma_k / 20.0;

    std::vector<json> rows(points.size());
    parallel_for(points.size(), cfg.threads, [&](std::size_t i) {
        const auto& p = points[i];
        json r{{"kd", p.kd}, {"delta", p.delta}, {"gamma0", p.gamma0}, {"gamma_nr", p.gamma_nr}};
        try {
            const auto cmp = run_oracle(p, st);
            const double Tn = std::norm(cmp.oracle.t_num), Rn = std::norm(cmp.oracle.r_num);
            r.update({{"t_solver", {cmp.solver.t.real(), cmp.solver.t.imag()}},
                      {"r_solver", {cmp.solver.r.real(), cmp.solver.r.imag()}},
                      {"t_num", {cmp.oracle.t_num.real(), cmp.oracle.t_num.imag()}},
                      {"r_num", {cmp.oracle.r_num.real(), cmp.oracle.r_num.imag()}},
                      {"err_t", cmp.err_t},
                      {"err_r", cmp.err_r},
                      {"norm_final", cmp.norm_final},
                      {"modes", cmp.modes},
                      {"steps", cmp.steps}});
            bool ok = cmp.err_t <= c.tolerance && cmp.err_r <= c.tolerance;
            if (p.gamma_prime() == 0.0) {
                const double flux_solver = std::abs(cmp.solver.T + cmp.solver.R - 1.0);
                const double flux_oracle = std::abs(Tn + Rn - 1.0);
                r.update({{"flux_solver", flux_solver}, {"flux_oracle", flux_oracle}});
                ok = ok && flux_solver <= 1e-10 && flux_oracle <= c.tolerance;
            }
            r["pass"] = ok;
        } catch (const NotConverged& e) {
            r["pass"] = false;
            r["error"] = e.what();
        }
        rows[i] = std::move(r);
    });

    double max_t = 0.0, max_r = 0.0;
    std::size_t failures = 0;
    for (const auto& r : rows) {
        if (r.contains("err_t")) {
            max_t = std::max(max_t, r["err_t"].get<double>());
            max_r = std::max(max_r, r["err_r"].get<double>());
        }
        failures += !r["pass"].get<bool>();
    }
    const json report{{"tolerance", c.tolerance},
                      {"sigma_k", c.sigma_k},
                      {"separation", c.separation},
                      {"points", rows},
                      {"max_err_t", max_t},
                      {"max_err_r", max_r},
                      {"failures", failures},
                      {"pass", failures == 0}};
    out.write_json("oracle_report.json", report, {{"points", rows.size()}});
    if (failures) out.warn(std::to_string(failures) + " oracle point(s) outside tolerance or not converged");
    return failures ? 2 : 0;
}

int cmd_storage(const RunConfig& cfg, OutputDir& out) {
    const auto& c = cfg.storage;
    struct Job {
        double P;
        Parity parity;
    };
    std::vector<Job> jobs;
    for (double P : c.P) {
        jobs.push_back({P, Parity::even});
        if (c.odd_twin) jobs.push_back({P, Parity::odd});
    }
    std::vector<MatchedStorage> runs(jobs.size());
    parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
        StorageParams sp;
        sp.P = jobs[i].P;
        sp.parity = jobs[i].parity;
        sp.sigma = c.sigma;
        runs[i] = run_matched_storage(sp);
    });

    Table even{{{"P"}, {"efficiency"}, {"bound"}}, {}}, odd = even;
    json details = json::array();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& j = jobs[i];
        const auto& r = runs[i].run;
        const double bound = std::isinf(j.P) ? 1.0 : 1.0 - 1.0 / j.P;
        (j.parity == Parity::even ? even : odd).rows.push_back({j.P, r.efficiency, bound});
        const std::string par = j.parity == Parity::even ? "even" : "odd";
        json windows = json::array();
        for (const auto& [a, b] : r.truncated) windows.push_back({a, b});
        details.push_back({{"P", std::isinf(j.P) ? json("inf") : json(j.P)},
                           {"parity", par},
                           {"efficiency", r.efficiency},
                           {"bound", bound},
                           {"identity_residual", runs[i].identity_residual},
                           {"outgoing_norm", r.outgoing_norm},
                           {"dot_population_final", r.dot_population_final},
                           {"pulse_peak", runs[i].pulse.peak_abs},
                           {"truncated_windows", windows}});
        if (!r.truncated.empty())
            out.warn("P = " + tag(j.P) + " (" + par + "): control pulse truncated in " +
                     std::to_string(r.truncated.size()) + " window(s)");
        if (c.dump) {
            Table d{{{"t"}, {"omega_re"}, {"omega_im"}, {"a_in_re"}, {"a_in_im"}, {"c_bright_re"}, {"c_bright_im"},
                     {"c_m_re"}, {"c_m_im"}, {"E_re"}, {"E_im"}},
                    {}};
            const auto& pulse = runs[i].pulse;
            const auto& in = runs[i].input;
            for (std::size_t k = 0; k < r.times.size(); ++k) {
                const cplx om = pulse.omega[2 * k], a = in.a[2 * k];
                d.rows.push_back({r.times[k], om.real(), om.imag(), a.real(), a.imag(), r.c_bright[k].real(),
                                  r.c_bright[k].imag(), r.c_m[k].real(), r.c_m[k].imag(), r.e_field[k].real(),
                                  r.e_field[k].imag()});
            }
            out.write_table("storage_trajectory_P" + tag(j.P) + "_" + par, d, {{"P", j.P}, {"parity", par}});
        }
    }
    out.write_table("storage", even, {{"parity", "even"}, {"sigma", c.sigma}});
    if (c.odd_twin) out.write_table("storage_odd", odd, {{"parity", "odd"}, {"sigma", c.sigma}});
    out.write_json("storage_report.json", {{"sigma", c.sigma}, {"runs", details}});
    return 0;
}

bool known_experiment(const std::string& name) {
    for (const char* n : {"spectrum", "peaks", "concurrence-map", "phase", "oracle-verify", "storage"})
        if (name == n) return true;
    return false;
}

int run_experiment(const RunConfig& cfg) {
    if (!known_experiment(cfg.experiment)) throw InvalidParams("unknown experiment '" + cfg.experiment + "'");
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    OutputDir out(cfg.out, cfg.format);
    int status = 0;
    const auto& e = cfg.experiment;
    if (e == "spectrum")
        status = cmd_spectrum(cfg, out);
    else if (e == "peaks")
        status = cmd_peaks(cfg, out);
    else if (e == "concurrence-map")
        status = cmd_concurrence_map(cfg, out);
    else if (e == "phase")
        status = cmd_phase(cfg, out);
    else if (e == "oracle-verify")
        status = cmd_oracle_verify(cfg, out);
    else
        status = cmd_storage(cfg, out);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.finish({{"tool", "plasmonqd"},
                {"version", PLASMONQD_VERSION},
                {"experiment", e},
                {"config_ini", to_ini(cfg)},
                {"seed", cfg.seed},
                {"threads", cfg.threads},
                {"format", format_name(cfg.format)},
                {"wall_time_s", wall},
                {"status", status}});
    return status;
}

}  // namespace plasmonqd::cli
