#include "plasmonqd/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "plasmonqd/errors.hpp"

namespace plasmonqd {

namespace {

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 : std::sin(x) / x; }

}  // namespace

CollectiveRates gamma_pm(double k0d, double gamma0) {
    if (!(gamma0 >= 0.0)) throw InvalidParams("gamma0 must be >= 0");
    const double s = sinc(k0d);
    return {gamma0 * (1.0 + s), gamma0 * (1.0 - s)};
}

TwoDotOp lowering(int dot) {
    TwoDotOp s = TwoDotOp::Zero();
    if (dot == 1) {
        s(0, 1) = 1.0;  // |eg> -> |gg>
        s(2, 3) = 1.0;  // |ee> -> |ge>
    } else if (dot == 2) {
        s(0, 2) = 1.0;  // |ge> -> |gg>
        s(1, 3) = 1.0;  // |ee> -> |eg>
    } else {
        throw InvalidParams("dot index must be 1 or 2");
    }
    return s;
}

TwoDotOp effective_hamiltonian_sr(double k0d, double gamma0) {
    const cplx i(0.0, 1.0);
    const TwoDotOp s1 = lowering(1), s2 = lowering(2);
    const TwoDotOp n = s1.adjoint() * s1 + s2.adjoint() * s2;
    const TwoDotOp x = s1.adjoint() * s2 + s2.adjoint() * s1;
    return -i * (gamma0 / 2.0) * n - i * (gamma0 * sinc(k0d) / 2.0) * x;
}

TwoDotOp collective_jump(double k0d, double gamma0, bool plus) {
    const auto rates = gamma_pm(k0d, gamma0);
    const double rate = plus ? rates.plus : rates.minus;
    const double sign = plus ? 1.0 : -1.0;
    return std::sqrt(rate / 2.0) * (lowering(1) + sign * lowering(2));
}

TwoDotOp lindblad_rhs(const TwoDotOp& rho, double k0d, double gamma0, bool with_jumps) {
    TwoDotOp out = TwoDotOp::Zero();
    for (bool plus : {true, false}) {
        const TwoDotOp L = collective_jump(k0d, gamma0, plus);
        const TwoDotOp LdL = L.adjoint() * L;
        out -= 0.5 * (LdL * rho + rho * LdL);
        if (with_jumps) out += L * rho * L.adjoint();
    }
    return out;
}

double trace_distance(const TwoDotOp& a, const TwoDotOp& b) {
    const TwoDotOp d = a - b;
    const TwoDotOp herm = 0.5 * (d + d.adjoint());
    Eigen::SelfAdjointEigenSolver<TwoDotOp> es(herm, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

NoJumpReport no_jump_equivalence(double k0d, double gamma0, const TwoDotState& psi0, double t_final, double dt) {
    if (std::abs(psi0(0)) > 1e-12 || std::abs(psi0(3)) > 1e-12)
        throw InvalidParams("initial state must be in the one-excitation subspace");
    if (!(t_final > 0.0) || !(dt > 0.0)) throw InvalidParams("t_final and dt must be > 0");
    const cplx i(0.0, 1.0);
    const TwoDotOp Heff = effective_hamiltonian_sr(k0d, gamma0);
    const TwoDotOp A = -i * Heff;  // d psi / dt = A psi

    const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
    const double h = t_final / static_cast<double>(steps);

    TwoDotState psi = psi0;
    TwoDotOp rho = psi0 * psi0.adjoint();
    auto f = [&](const TwoDotOp& r) { return lindblad_rhs(r, k0d, gamma0, false); };

    NoJumpReport rep;
    auto record = [&](double t) {
        const TwoDotOp proj = psi * psi.adjoint();
        rep.times.push_back(t);
        rep.population_master.push_back(rho.trace().real());
        rep.population_pure.push_back(psi.squaredNorm());
        rep.max_trace_distance = std::max(rep.max_trace_distance, trace_distance(rho, proj));
    };
    record(0.0);
    for (std::size_t s = 1; s <= steps; ++s) {
        const TwoDotState a1 = A * psi;
        const TwoDotState a2 = A * (psi + 0.5 * h * a1);
        const TwoDotState a3 = A * (psi + 0.5 * h * a2);
        const TwoDotState a4 = A * (psi + h * a3);
        psi += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);

        const TwoDotOp r1 = f(rho);
        const TwoDotOp r2 = f(rho + 0.5 * h * r1);
        const TwoDotOp r3 = f(rho + 0.5 * h * r2);
        const TwoDotOp r4 = f(rho + h * r3);
        rho += h / 6.0 * (r1 + 2.0 * r2 + 2.0 * r3 + r4);
        record(h * static_cast<double>(s));
    }
    return rep;
}

}  // namespace plasmonqd
