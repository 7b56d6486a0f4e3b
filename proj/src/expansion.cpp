#include "tasim/expansion.hpp"
#include "tasim/errors.hpp"
#include "tasim/specfun.hpp"

#include <cmath>
#include <map>
#include <numeric>

namespace tasim::expansion {

namespace testhook {
bool corrupt_kappa_sign = false;
}

std::vector<ExpansionTerm> enumerate_terms(const ChannelConfig& cfg,
                                           const std::vector<int>& links, std::size_t cap) {
    std::vector<int> ls = links;
    if (ls.empty() && links.empty()) {
        ls.resize(cfg.num_links());
        std::iota(ls.begin(), ls.end(), 0);
    }
    const int n = static_cast<int>(ls.size());
    if (n > 30) throw CapacityError("enumerate_terms: too many links");

    // Total term count: prod(1 + m_alpha_ell) - 1.
    double count = 1.0;
    for (int ell : ls) count *= 1.0 + cfg.m_alpha(ell);
    if (count - 1.0 > static_cast<double>(cap)) {
        throw CapacityError("enumerate_terms: term count " + std::to_string(count - 1.0) +
                            " exceeds cap; reduce L or m_alpha");
    }

    std::vector<double> log_rate(n), rate(n); // m_ell / gamma_tilde_ell
    for (int i = 0; i < n; ++i) {
        rate[i] = cfg.m_alpha(ls[i]) / cfg.mean_branch_snr(ls[i]);
        log_rate[i] = std::log(rate[i]);
    }

    std::vector<ExpansionTerm> out;
    out.reserve(static_cast<std::size_t>(count) - 1);

    for (std::uint32_t subset = 1; subset < (1u << n); ++subset) {
        std::vector<int> active;
        double b = 0.0;
        int parity = 0;
        for (int i = 0; i < n; ++i) {
            if (subset & (1u << i)) {
                active.push_back(i);
                b += rate[i];
                ++parity;
            }
        }
        // Every k combination over the active links; inactive links contribute
        // factor 1 (the Lemma's n_ell = 0 case).
        std::vector<int> k(active.size(), 0);
        while (true) {
            ExpansionTerm t;
            t.k.assign(cfg.num_links(), 0);
            t.decay_b = b;
            t.sign_kappa = (parity % 2 == 0) ? 1 : -1;
            double lk = 0.0;
            int a = 0;
            std::uint32_t mask = 0;
            for (std::size_t j = 0; j < active.size(); ++j) {
                const int i = active[j];
                mask |= (1u << ls[i]);
                t.k[ls[i]] = static_cast<std::uint8_t>(k[j]);
                lk += k[j] * log_rate[i] - std::lgamma(k[j] + 1.0);
                a += k[j];
            }
            t.mask = mask;
            t.log_abs_kappa = lk;
            t.power_a = a;
            out.push_back(std::move(t));

            // next k vector (odometer)
            std::size_t pos = 0;
            for (; pos < active.size(); ++pos) {
                if (k[pos] + 1 < cfg.m_alpha(ls[active[pos]])) {
                    ++k[pos];
                    break;
                }
                k[pos] = 0;
            }
            if (pos == active.size()) break;
        }
    }
    return out;
}

std::vector<MergedTerm> merge_terms(const std::vector<ExpansionTerm>& terms) {
    // Exact (B, A) key: equal subsets produce bit-identical B sums.
    std::map<std::pair<double, int>, SignedLog> acc;
    for (const auto& t : terms) {
        SignedLog s{t.log_abs_kappa, t.sign_kappa};
        auto& slot = acc[{t.decay_b, t.power_a}];
        slot = signed_log_add(slot, s);
    }
    std::vector<MergedTerm> out;
    out.reserve(acc.size());
    for (const auto& [key, s] : acc) {
        if (s.sign == 0) continue;
        out.push_back({s, key.first, key.second});
    }
    if (testhook::corrupt_kappa_sign && !out.empty()) {
        out.front().kappa.sign = -out.front().kappa.sign;
    }
    return out;
}

std::vector<MergedTerm> merged_terms(const ChannelConfig& cfg, const std::vector<int>& links,
                                     std::size_t cap) {
    return merge_terms(enumerate_terms(cfg, links, cap));
}

double cdf_alpha_max(const ChannelConfig& cfg, double x) {
    if (x < 0.0) throw DomainError("cdf_alpha_max: x must be >= 0");
    if (x == 0.0) return 0.0;
    const auto terms = merged_terms(cfg);
    const double lx = std::log(x);
    std::vector<SignedLog> parts;
    parts.reserve(terms.size() + 1);
    parts.push_back(SignedLog::from_value(1.0));
    for (const auto& t : terms) {
        parts.push_back({t.kappa.log_abs - x * t.decay_b + t.power_a * lx, t.kappa.sign});
    }
    const double v = sum_signed_logs(std::move(parts));
    return std::clamp(v, 0.0, 1.0);
}

double pdf_alpha_max(const ChannelConfig& cfg, double x) {
    if (x <= 0.0) throw DomainError("pdf_alpha_max: x must be > 0");
    const auto terms = merged_terms(cfg);
    const double lx = std::log(x);
    std::vector<SignedLog> parts;
    parts.reserve(2 * terms.size());
    for (const auto& t : terms) {
        const double base = t.kappa.log_abs - x * t.decay_b;
        if (t.power_a > 0) {
            parts.push_back({base + std::log(static_cast<double>(t.power_a)) +
                                 (t.power_a - 1) * lx,
                             t.kappa.sign});
        }
        parts.push_back({base + std::log(t.decay_b) + t.power_a * lx, -t.kappa.sign});
    }
    const double v = sum_signed_logs(std::move(parts));
    return std::max(v, 0.0);
}

std::vector<double> selection_probabilities(const ChannelConfig& cfg) {
    const int L = cfg.num_links();
    std::vector<double> p(L, 0.0);
    if (L == 1) {
        p[0] = 1.0;
        return p;
    }
    for (int r = 0; r < L; ++r) {
        std::vector<int> others;
        for (int ell = 0; ell < L; ++ell) {
            if (ell != r) others.push_back(ell);
        }
        auto terms = merged_terms(cfg, others);
        // The empty subset survives here (kappa = 1, B = 0, A = 0); it is what
        // makes the probabilities sum to one.
        terms.push_back({SignedLog::from_value(1.0), 0.0, 0});
        const double c = cfg.m_alpha(r) / cfg.mean_branch_snr(r);
        const double ma = cfg.m_alpha(r);
        std::vector<SignedLog> parts;
        parts.reserve(terms.size());
        for (const auto& t : terms) {
            parts.push_back({t.kappa.log_abs + std::lgamma(t.power_a + ma) -
                                 (t.power_a + ma) * std::log(t.decay_b + c),
                             t.kappa.sign});
        }
        const double sum = sum_signed_logs(std::move(parts));
        p[r] = std::exp(ma * std::log(c) - std::lgamma(ma)) * sum;
    }
    return p;
}

double alpha_max_moment(const ChannelConfig& cfg, int p) {
    if (p < 1) throw DomainError("alpha_max_moment: order must be >= 1");
    const auto terms = merged_terms(cfg);
    std::vector<SignedLog> parts;
    parts.reserve(terms.size());
    for (const auto& t : terms) {
        parts.push_back({t.kappa.log_abs + std::lgamma(p + t.power_a) -
                             (p + t.power_a) * std::log(t.decay_b),
                         -t.kappa.sign});
    }
    return p * sum_signed_logs(std::move(parts));
}

} // namespace tasim::expansion
