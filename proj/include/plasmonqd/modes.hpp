#pragma once

#include <cstddef>
#include <vector>

#include "plasmonqd/model.hpp"

namespace plasmonqd {

// Shape of the coupling spectrum |g(q)|^2 relative to its value at the grid centre.
//  gaussian:          exp(-u^2 / 2W^2), |u| < extent * W
//  compensated_flat:  1 for |u| < W, 2 for W < |u| < 2W. The outer shelf cancels
//                     the linear part of the principal-value (Lamb) shift near u = 0.
enum class FormFactor { gaussian, compensated_flat };

struct ModeGridSpec {
    double centre = 0.0;  // detuning coordinate q = (k - k_res) v_g, in Gamma_pl units
    double fine_spacing = 1e-3;
    double fine_half_width = 0.1;
    double coarse_spacing = 1e-2;
    double band_width = 1.0;
    double band_extent = 6.0;  // gaussian only
    FormFactor form = FormFactor::gaussian;
};

// One chiral branch; right and left movers share it.
struct ModeGrid {
    std::vector<double> q;  // mode energies (cell centres)
    std::vector<double> w;  // quadrature weights (cell widths)
    std::vector<double> f;  // form factor per mode
    double centre = 0.0;
    std::size_t centre_index = 0;
    FormFactor form = FormFactor::gaussian;
    double band_width = 1.0;
    double band_extent = 6.0;

    std::size_t size() const { return q.size(); }
    double max_spacing() const;
    double max_abs_energy() const;
    // a packet leaves the coarsest cells in phase again after this long
    double recurrence_time() const;
    double form_factor(double q_abs) const;
};

ModeGrid make_mode_grid(const ModeGridSpec& spec);

// Decay rate implied by the discrete couplings, smoothed by a Lorentzian of
// half-width eta, relative to the same quantity on a 64x refined quadrature.
double discretized_decay_deviation(const ModeGrid& grid, double energy, double eta);

// Classic RK4 on a flat complex vector. `rhs(t, y, dy)` must write dy = dy/dt.
struct Rk4Workspace {
    std::vector<cplx> k1, k2, k3, k4, tmp;
    void resize(std::size_t n) {
        k1.resize(n);
        k2.resize(n);
        k3.resize(n);
        k4.resize(n);
        tmp.resize(n);
    }
};

template <class Rhs>
void rk4_step(Rhs&& rhs, double t, std::vector<cplx>& y, double dt, Rk4Workspace& ws) {
    const std::size_t n = y.size();
    ws.resize(n);
    const double h2 = 0.5 * dt;
    rhs(t, y.data(), ws.k1.data());
    for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + h2 * ws.k1[i];
    rhs(t + h2, ws.tmp.data(), ws.k2.data());
    for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + h2 * ws.k2[i];
    rhs(t + h2, ws.tmp.data(), ws.k3.data());
    for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + dt * ws.k3[i];
    rhs(t + dt, ws.tmp.data(), ws.k4.data());
    const double h6 = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i) y[i] += h6 * (ws.k1[i] + 2.0 * ws.k2[i] + 2.0 * ws.k3[i] + ws.k4[i]);
}

}  // namespace plasmonqd
