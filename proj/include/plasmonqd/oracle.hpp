#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "plasmonqd/model.hpp"
#include "plasmonqd/modes.hpp"

namespace plasmonqd {

// Single-excitation Hamiltonian on [right movers | left movers | dot 1 | dot 2],
// energies measured from the dot transition. Stored by structure, never densely.
struct ModeHamiltonian {
    std::vector<double> q;
    std::vector<double> G;          // per-mode coupling, same for both branches
    std::vector<cplx> ph;           // dot-2 phase e^{ikd} seen by right movers; left movers see conj
    std::size_t n_dots = 2;
    double gamma_prime = 0.0;
    cplx h12{0.0};                  // dot-dot exchange (-Gamma_SR)

    std::size_t n_modes() const { return q.size(); }
    std::size_t dim() const { return 2 * q.size() + n_dots; }
    std::size_t dot_index(std::size_t j) const { return 2 * q.size() + j; }

    void apply(const cplx* y, cplx* dydt) const;  // dydt = -i H y
    Eigen::MatrixXcd dense() const;                // for small grids / checks
    double norm_bound() const;
};

// Coupling per mode: G^2 = w f / (4 pi), so a lone dot decays at f(q) Gamma_pl into
// both branches together. Throws GridTooCoarse if the discretised decay rate at the
// grid centre is off by more than 1%.
ModeHamiltonian build_hamiltonian(const ModelParams& params, const ModeGrid& grid, double separation,
                                  std::size_t n_dots = 2);
ModeHamiltonian free_hamiltonian(const ModeGrid& grid, std::size_t n_dots = 2);

struct EvolutionResult {
    std::vector<double> times;                  // every step
    std::vector<double> norms;                  // total probability at each time
    std::vector<std::vector<cplx>> samples;     // full state every sample_every steps (if asked)
    std::vector<double> sample_times;
    std::vector<cplx> final_state;
    double dt = 0.0;
    std::size_t steps = 0;
    double max_norm_excess = 0.0;               // max(norm(t) - norm(0))
};

// Fixed-step RK4. StepTooLarge unless dt * ||H|| <= 0.1. The step is shrunk so
// that an integer number of steps lands exactly on t_final.
EvolutionResult evolve(const std::vector<cplx>& state0, const ModeHamiltonian& H, double dt, double t_final,
                       std::size_t sample_every = 0);

struct WavepacketSpec {
    double k_center = 0.0;  // in the detuning coordinate, i.e. the carrier delta
    double sigma_k = 0.02;
    double x0 = -275.0;     // centre at t = 0; dot 1 sits at x = 0
};

std::vector<cplx> initial_wavepacket(const ModeGrid& grid, const WavepacketSpec& spec, std::size_t n_dots = 2);

// Right-mover field amplitude at position x.
cplx right_mover_field(const ModeGrid& grid, const std::vector<cplx>& state, double x);

struct ExtractedScattering {
    cplx t_num, r_num;        // ratio at the centre mode
    cplx t_packet, r_packet;  // overlap with the freely propagated packet
    double dot_population;
};

// NotConverged if dot population at the end is above 1e-6.
ExtractedScattering extract_scattering(const EvolutionResult& result, const ModeGrid& grid,
                                       const WavepacketSpec& spec);

struct OracleSettings {
    double sigma_k = 0.02;
    double separation = 5.0;
    double band_width = 1.0;
    double fine_spacing = 0.0;     // 0: sigma_k / 20
    double coarse_spacing = 1e-2;  // capped by the recurrence condition
    double dt_factor = 0.1;
    double launch_sigmas = 5.5;
    double settle_time = 30.0;
    bool enforce_recurrence = true;
};

struct OracleComparison {
    ModelParams params;
    ScatteringSolution solver;
    ExtractedScattering oracle;
    double err_t, err_r, err_t_packet, err_r_packet;
    double norm_final, max_norm_excess;
    std::size_t modes, steps;
};

OracleComparison run_oracle(const ModelParams& params, const OracleSettings& settings = {});

// Initially excited lone dot in a wide band; returns the decay rate fitted to
// log |xi(t)|^2 over [t_lo, t_hi]. A plain Gaussian band leaves an O(1/W) error
// in the rate; the compensated band removes it.
double wigner_weisskopf_rate(double band_width = 10.0, double spacing = 0.05, double t_lo = 1.0,
                             double t_hi = 5.0, FormFactor form = FormFactor::compensated_flat);

}  // namespace plasmonqd
