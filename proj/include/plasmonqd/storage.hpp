#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "plasmonqd/model.hpp"
#include "plasmonqd/modes.hpp"

namespace plasmonqd {

// Storage frame: Gamma_pl is the decay rate of the bright (plasmon-coupled)
// two-dot state, so the bright-state coupling is g = 1/sqrt(4 pi) and each dot
// alone decays at Gamma_pl / 2 into the wire.
inline constexpr double storage_g = 0.28209479177387814;  // 1 / sqrt(4 pi)

enum class Parity { even, odd };

struct StorageParams {
    double P = 10.0;           // Purcell factor Gamma_pl / Gamma'; infinity means lossless
    Parity parity = Parity::even;
    double sigma = 0.05;       // input bandwidth
    double t0 = 0.0;           // pulse centre; 0 picks 6.2 / sigma
    double duration = 0.0;     // run length; 0 picks 2 t0 + 20
    double phase = 0.0;        // carrier phase of the input
    double omega_cap = 5.0;
    double population_floor = 1e-12;
    double truncation_tolerance = 1e-8;  // input energy allowed inside truncated windows
    ModeGridSpec grid{0.0, 2.5e-3, 0.3, 2e-2, 5.0, 2.0, FormFactor::compensated_flat};
    double dt_factor = 0.1;

    double gamma_prime() const;
    double pulse_centre() const;
    double run_time() const;
    void validate() const;
};

// g_T, g_S up to the common coupling: (1 + e^{ikd}) / sqrt2, (1 - e^{ikd}) / sqrt2
std::pair<cplx, cplx> singlet_triplet_couplings(double kd);

// Time discretisation shared by input, pulse and simulation. Inputs and pulses are
// sampled at half steps so every RK4 stage hits a sample.
struct StorageSetup {
    ModeGrid grid;
    double dt = 0.0;
    std::size_t steps = 0;
    double t_end = 0.0;
    double sample_dt() const { return 0.5 * dt; }
    std::size_t n_samples() const { return 2 * steps + 1; }
};

StorageSetup prepare_storage(const StorageParams& params);

// Incoming single-photon flux amplitude at the dots, int |a|^2 dt = 1.
struct InputField {
    double sample_dt = 0.0;
    std::vector<cplx> a;
    double time(std::size_t k) const { return sample_dt * static_cast<double>(k); }
};

InputField gaussian_input(const StorageSetup& setup, const StorageParams& params);
double input_bandwidth(const InputField& in);

struct ControlPulse {
    double sample_dt = 0.0;
    std::vector<cplx> omega;                         // Omega_1; Omega_2 = +-Omega_1 by parity
    std::vector<cplx> c_m_design;                    // metastable amplitude it was built for
    std::vector<std::pair<double, double>> truncated;  // windows with Omega forced to 0
    double truncated_energy = 0.0;
    double peak_abs = 0.0;
};

// E_T = -i sqrt(2 pi) g c_T / v_g
std::vector<cplx> field_envelope(const std::vector<cplx>& c_bright);

// Zero-outgoing-field pulse from the Markov-eliminated equations.
ControlPulse impedance_matched_pulse(const InputField& input, const StorageParams& params);

struct StorageRun {
    std::vector<double> times;
    std::vector<cplx> c_t, c_s;          // triplet / singlet excited amplitudes
    std::vector<cplx> c_mt, c_ms;        // metastable triplet / singlet amplitudes
    std::vector<cplx> c_bright, c_m;     // channel driven by the wire and its metastable partner
    std::vector<cplx> e_field;           // field_envelope(c_bright)
    double outgoing_right = 0.0, outgoing_left = 0.0, outgoing_norm = 0.0;
    double efficiency = 0.0;             // total metastable population at the end
    cplx c_m_final{0.0};
    double dot_population_final = 0.0;
    std::vector<std::pair<double, double>> truncated;
    std::vector<cplx> modes_right, modes_left;  // final mode amplitudes
};

struct SimulationOptions {
    cplx initial_c_m{0.0};   // start with this metastable amplitude
    bool with_input = true;
};

StorageRun simulate_storage(const ControlPulse& pulse, const InputField& input, const StorageParams& params,
                            const SimulationOptions& opts = {});

// max |d|c_M|^2/dt + kappa (d|E|^2/dt - (Gamma_pl - Gamma')|E|^2)| / max |rhs|
double verify_population_identity(const StorageRun& run, double P);
// time integral of the right-hand side over the run
double integrated_identity_rhs(const StorageRun& run, double P);

// Store, then release with the time-reversed pulse from c_M = 1, and return the
// overlap of the emitted field with the time-reversed input.
struct RetrievalReport {
    double overlap;
    double emitted_norm;
};
RetrievalReport retrieval_overlap(const StorageParams& params);

struct MatchedStorage {
    InputField input;
    ControlPulse pulse;
    StorageRun run;
    double identity_residual;
};

// Gaussian input, matched pulse, full simulation, identity check.
MatchedStorage run_matched_storage(const StorageParams& params);

}  // namespace plasmonqd
