#ifndef TASIM_CLOSED_FORM_HPP
#define TASIM_CLOSED_FORM_HPP

#include "tasim/config.hpp"

#include <string>

namespace tasim::closed_form {

enum class Method { closed, asymptotic, oracle, mc };

struct MetricResult {
    double value = 0.0;
    Method method = Method::closed;
    std::string meta;
};

// SEP constants of the a*Q(sqrt(2 b gamma)) family.
struct Modulation {
    enum class Family { bpsk, bfsk_orthogonal, pam, psk_approx, qam_approx };
    Family family = Family::bpsk;
    int M = 2;
    double a = 1.0;
    double b = 1.0;
    bool approximate = false;

    static Modulation make(Family fam, int M = 2);
    static Modulation parse(const std::string& text); // bpsk|bfsk|pam:M|psk:M|qam:M
    std::string name() const;
};

// CDF of the end-to-end SNR given antenna r is selected (Bessel-K form).
double cdf_conditional(const ChannelConfig& cfg, int r, double x);

// Outage probability: selection-probability average of the conditional CDFs.
double outage(const ChannelConfig& cfg, double gamma_th);

// p-th moment of the end-to-end SNR. Ships the exact independence
// factorization; the printed radical form is evaluated as a cross-check.
double moment(const ChannelConfig& cfg, int p);
MetricResult moment_detail(const ChannelConfig& cfg, int p);

// Normalized SNR variance.
double amount_of_fading(const ChannelConfig& cfg);

// MGF in the Laplace convention M(s) = E[e^{-s gamma}].
double mgf(const ChannelConfig& cfg, double s);

// Average symbol error probability for the supported modulation family.
double sep(const ChannelConfig& cfg, const Modulation& mod);

} // namespace tasim::closed_form

#endif
