#include "plasmonqd/modes.hpp"

#include <algorithm>
#include <cmath>

#include "plasmonqd/errors.hpp"

namespace plasmonqd {

double ModeGrid::max_spacing() const { return w.empty() ? 0.0 : *std::max_element(w.begin(), w.end()); }

double ModeGrid::max_abs_energy() const {
    double m = 0.0;
    for (double x : q) m = std::max(m, std::abs(x));
    return m;
}

double ModeGrid::recurrence_time() const { return 2.0 * pi / max_spacing(); }

double ModeGrid::form_factor(double u) const {
    u = std::abs(u);
    if (form == FormFactor::gaussian) {
        if (u > band_extent * band_width) return 0.0;
        return std::exp(-u * u / (2.0 * band_width * band_width));
    }
    if (u < band_width) return 1.0;
    if (u < 2.0 * band_width) return 2.0;
    return 0.0;
}

ModeGrid make_mode_grid(const ModeGridSpec& s) {
    if (!(s.fine_spacing > 0.0) || !(s.coarse_spacing >= s.fine_spacing) || !(s.fine_half_width >= 0.0) ||
        !(s.band_width > 0.0) || !(s.band_extent > 0.0))
        throw InvalidParams("mode grid needs 0 < fine_spacing <= coarse_spacing and positive band");
    ModeGrid g;
    g.centre = s.centre;
    g.form = s.form;
    g.band_width = s.band_width;
    g.band_extent = s.form == FormFactor::gaussian ? s.band_extent : 2.0;
    const double edge_out = g.band_extent * s.band_width;

    const auto nf = static_cast<long>(std::llround(s.fine_half_width / s.fine_spacing));
    const double edge_in = (static_cast<double>(nf) + 0.5) * s.fine_spacing;
    long nc = 0;
    if (edge_out > edge_in) nc = static_cast<long>(std::ceil((edge_out - edge_in) / s.coarse_spacing));

    std::vector<double> u, w;
    for (long i = nc - 1; i >= 0; --i) {
        u.push_back(-(edge_in + s.coarse_spacing * (static_cast<double>(i) + 0.5)));
        w.push_back(s.coarse_spacing);
    }
    for (long i = -nf; i <= nf; ++i) {
        u.push_back(s.fine_spacing * static_cast<double>(i));
        w.push_back(s.fine_spacing);
    }
    for (long i = 0; i < nc; ++i) {
        u.push_back(edge_in + s.coarse_spacing * (static_cast<double>(i) + 0.5));
        w.push_back(s.coarse_spacing);
    }
    g.centre_index = static_cast<std::size_t>(nc + nf);
    for (std::size_t i = 0; i < u.size(); ++i) {
        g.q.push_back(s.centre + u[i]);
        g.w.push_back(w[i]);
        g.f.push_back(g.form_factor(u[i]));
    }
    return g;
}

double discretized_decay_deviation(const ModeGrid& g, double energy, double eta) {
    auto lor = [eta](double x) { return eta / (pi * (x * x + eta * eta)); };
    double coarse = 0.0, fine = 0.0;
    const int sub = 64;
    for (std::size_t j = 0; j < g.size(); ++j) {
        coarse += g.w[j] * g.f[j] * lor(energy - g.q[j]);
        const double h = g.w[j] / sub;
        const double lo = g.q[j] - 0.5 * g.w[j];
        for (int k = 0; k < sub; ++k) {
            const double x = lo + (k + 0.5) * h;
            fine += h * g.form_factor(x - g.centre) * lor(energy - x);
        }
    }
    return std::abs(coarse - fine) / fine;
}

}  // namespace plasmonqd
