#ifndef TASIM_EXPANSION_HPP
#define TASIM_EXPANSION_HPP

#include "tasim/config.hpp"
#include "tasim/logsum.hpp"

#include <cstdint>
#include <vector>

namespace tasim::expansion {

// One (n, k) multi-index of the max-of-Gammas expansion:
//   F_alpha_max(x) = 1 + sum kappa * exp(-x B) * x^A   over n != 0.
struct ExpansionTerm {
    std::uint32_t mask = 0;          // n as a bit set over links
    std::vector<std::uint8_t> k;     // k_ell; zero on inactive links
    double log_abs_kappa = 0.0;
    int sign_kappa = 1;
    double decay_b = 0.0;            // B_n, units 1/SNR
    int power_a = 0;                 // A_{n,k}
};

// Merged view: terms with identical (B, A) collapsed by signed log-domain
// addition of kappa. This is what every closed-form consumer iterates.
struct MergedTerm {
    SignedLog kappa;
    double decay_b = 0.0;
    int power_a = 0;
};

inline constexpr std::size_t kDefaultTermCap = 1000000;

// All terms with n != 0 over `links` (default: every link of cfg).
// Throws CapacityError when the term count would exceed `cap`.
std::vector<ExpansionTerm> enumerate_terms(const ChannelConfig& cfg,
                                           const std::vector<int>& links = {},
                                           std::size_t cap = kDefaultTermCap);

std::vector<MergedTerm> merge_terms(const std::vector<ExpansionTerm>& terms);

std::vector<MergedTerm> merged_terms(const ChannelConfig& cfg,
                                     const std::vector<int>& links = {},
                                     std::size_t cap = kDefaultTermCap);

// CDF of alpha_max at x >= 0 via the expansion.
double cdf_alpha_max(const ChannelConfig& cfg, double x);

// Density of alpha_max at x > 0 via the term-wise derivative.
double pdf_alpha_max(const ChannelConfig& cfg, double x);

// P_r = P(antenna r has the largest shadowing power), closed form; sums to 1.
std::vector<double> selection_probabilities(const ChannelConfig& cfg);

// E[alpha_max^p] in closed form: -p * sum kappa Gamma(p+A) / B^(p+A).
double alpha_max_moment(const ChannelConfig& cfg, int p);

namespace testhook {
// When set, the first merged term's kappa sign is flipped. Exists solely so
// the validate command's negative-control test can prove it detects a broken
// expansion; never enabled in normal operation.
extern bool corrupt_kappa_sign;
}

} // namespace tasim::expansion

#endif
