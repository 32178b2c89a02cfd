#include "plasmonqd/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plasmonqd/errors.hpp"
#include "plasmonqd/parallel.hpp"

namespace plasmonqd {

namespace {

double wrap_angle(double a) {
    // std::arg lands in [-pi, pi]; fold -pi onto pi
    return a <= -pi ? a + 2.0 * pi : a;
}

}  // namespace

double concurrence(cplx xi1, cplx xi2) {
    const double n = std::norm(xi1) + std::norm(xi2);
    if (!(n > 1e-30)) throw EmptyProjection("both dot amplitudes vanish");
    return std::min(1.0, 2.0 * std::abs(xi1) * std::abs(xi2) / n);
}

ProjectedState project_state(cplx xi1, cplx xi2) {
    const double n2 = std::norm(xi1) + std::norm(xi2);
    if (!(n2 > 1e-30)) throw EmptyProjection("both dot amplitudes vanish");
    const double n = std::sqrt(n2);
    ProjectedState s;
    s.xi1 = xi1 / n;
    s.xi2 = xi2 / n;
    s.concurrence = 2.0 * std::abs(s.xi1) * std::abs(s.xi2);
    // theta is undefined for a product state; report 0 there
    s.theta = (std::abs(xi1) > 0.0 && std::abs(xi2) > 0.0) ? wrap_angle(std::arg(xi2 / xi1)) : 0.0;
    return s;
}

ProjectedState project_state(const ScatteringSolution& sol) { return project_state(sol.xi1, sol.xi2); }

double high_c_curve(double kd, double gamma_prime) {
    const double x = kd / pi - 0.5;
    if (std::abs(x - std::round(x)) * pi < 1e-6) {
        std::ostringstream msg;
        msg << "kd = " << kd << " is within 1e-6 of an odd multiple of pi/2";
        throw TangentPole(msg.str());
    }
    return -((gamma_pl + gamma_prime) / 2.0) * std::tan(kd);
}

ConcurrenceMap concurrence_map(const std::vector<double>& kd_values, const std::vector<double>& delta_values,
                               const ModelParams& base, unsigned threads) {
    if (kd_values.empty() || delta_values.empty()) throw InvalidParams("concurrence map needs non-empty grids");
    base.validate();
    const std::size_t nd = delta_values.size();
    ConcurrenceMap out;
    out.cells.resize(kd_values.size() * nd);
    std::vector<std::string> notes(out.cells.size());
    parallel_for(out.cells.size(), threads, [&](std::size_t idx) {
        ModelParams p = base;
        p.kd = kd_values[idx / nd];
        p.delta = delta_values[idx % nd];
        ConcurrenceCell cell{p.kd, p.delta, std::nullopt, false};
        try {
            cell.C = project_state(solve_two_dot(p)).concurrence;
        } catch (const SingularSystem&) {
            const double h = 1e-7;
            ModelParams lo = p, hi = p;
            lo.delta -= h;
            hi.delta += h;
            try {
                cell.C = 0.5 * (project_state(solve_two_dot(lo)).concurrence +
                                project_state(solve_two_dot(hi)).concurrence);
                cell.limit = true;
                notes[idx] = "two-sided limit used at dark point";
            } catch (const Error& e) {
                notes[idx] = e.what();
            }
        } catch (const EmptyProjection& e) {
            notes[idx] = e.what();
        }
        out.cells[idx] = cell;
    });
    for (std::size_t i = 0; i < notes.size(); ++i)
        if (!notes[i].empty()) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "cell kd = " << out.cells[i].kd << ", delta = " << out.cells[i].delta << ": " << notes[i];
            out.warnings.push_back(msg.str());
        }
    return out;
}

double KdPolicy::kd_for(double delta, double gamma_prime) const {
    // tan(kd) = -2 delta / (1 + gamma')
    return centre + std::atan(-2.0 * delta / (gamma_pl + gamma_prime));
}

std::vector<PhaseRow> phase_scan(const std::vector<double>& delta_values,
                                 const std::vector<double>& gamma_prime_values, const KdPolicy& policy,
                                 double limit_step) {
    const double m = policy.centre / pi;
    if (std::abs(m - std::round(m)) > 1e-12) throw InvalidParams("branch centre must be a multiple of pi");
    std::vector<PhaseRow> rows;
    rows.reserve(delta_values.size() * gamma_prime_values.size());
    for (double gp : gamma_prime_values) {
        if (!(gp >= 0.0)) throw InvalidParams("gamma_prime must be >= 0");
        for (double d : delta_values) {
            ModelParams p;
            p.gamma_nr = gp;
            p.delta = d;
            p.kd = policy.kd_for(d, gp);
            PhaseRow row{d, gp, 0.0, p.kd, false};
            try {
                row.theta = project_state(solve_two_dot(p)).theta;
            } catch (const SingularSystem&) {
                // dark point: circular mean of both sides of the branch
                cplx acc{0.0};
                for (double s : {-1.0, 1.0}) {
                    ModelParams q = p;
                    q.delta = d + s * limit_step;
                    q.kd = policy.kd_for(q.delta, gp);
                    acc += std::polar(1.0, project_state(solve_two_dot(q)).theta);
                }
                row.theta = wrap_angle(std::arg(acc));
                row.limit = true;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace plasmonqd
