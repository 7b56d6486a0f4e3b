#ifndef TASIM_SIMULATOR_HPP
#define TASIM_SIMULATOR_HPP

#include "tasim/closed_form.hpp"
#include "tasim/config.hpp"
#include "tasim/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tasim::simulator {

struct SimulationEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    SelectionPolicy policy = SelectionPolicy::ssi;
    std::string metadata; // interpretation notes (index mapping, correlation model)
};

struct Trial {
    int selected = 0;  // antenna the transmitter actually uses
    double snr = 0.0;  // end-to-end SNR sample
};

// One channel realization under the given policy / feedback / correlation
// options.
Trial draw_trial(const ChannelConfig& cfg, const SimOptions& opts, RngStream& rng);

// BSC feedback corruption of a ceil(log2 L)-bit index; out-of-range corrupted
// patterns map back modulo L.
int feedback_corrupt(int r, int L, double pe, RngStream& rng);

// Equal-correlation Gamma shadowing powers: marginally Gamma(m_alpha,
// gamma_tilde/m_alpha) with pairwise power correlation rho. Requires equal
// integer m_alpha across links.
std::vector<double> correlated_shadow_draw(const ChannelConfig& cfg, double rho, RngStream& rng);

SimulationEstimate estimate_outage(const ChannelConfig& cfg, const SimOptions& opts,
                                   double gamma_th);

// Semi-analytic SEP: sample mean of a Q(sqrt(2 b gamma)).
SimulationEstimate estimate_sep(const ChannelConfig& cfg, const SimOptions& opts,
                                const closed_form::Modulation& mod);

SimulationEstimate estimate_moment(const ChannelConfig& cfg, const SimOptions& opts, int p);

} // namespace tasim::simulator

#endif
