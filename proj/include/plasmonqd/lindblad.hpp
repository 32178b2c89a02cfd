#pragma once

#include <Eigen/Dense>
#include <vector>

#include "plasmonqd/model.hpp"

namespace plasmonqd {

struct CollectiveRates {
    double plus, minus;  // triplet (super-) and singlet (sub-radiant) rates
};

CollectiveRates gamma_pm(double k0d, double gamma0);

// Two-dot basis order: |g g>, |e g>, |g e>, |e e>  (dot 1 first)
using TwoDotOp = Eigen::Matrix4cd;
using TwoDotState = Eigen::Vector4cd;

TwoDotOp lowering(int dot);  // sigma_-^{(dot)}, dot in {1, 2}

// -i (gamma0/2)(n1 + n2) - i (gamma0 sinc / 2)(s1+ s2- + s2+ s1-)
TwoDotOp effective_hamiltonian_sr(double k0d, double gamma0);

// Collective jump operators L_+- = sqrt(Gamma_+- / 2) (s1- +- s2-)
TwoDotOp collective_jump(double k0d, double gamma0, bool plus);

// d rho / dt; with_jumps = false drops the L rho L^dagger refill terms
TwoDotOp lindblad_rhs(const TwoDotOp& rho, double k0d, double gamma0, bool with_jumps);

double trace_distance(const TwoDotOp& a, const TwoDotOp& b);

struct NoJumpReport {
    double max_trace_distance = 0.0;
    std::vector<double> times;
    std::vector<double> population_master;  // tr rho(t) without jumps
    std::vector<double> population_pure;    // <psi|psi>
};

// Initial state must lie in the one-excitation subspace.
NoJumpReport no_jump_equivalence(double k0d, double gamma0, const TwoDotState& psi0, double t_final,
                                 double dt = 1e-3);

}  // namespace plasmonqd
