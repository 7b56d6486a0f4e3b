#include "tasim/simulator.hpp"
#include "tasim/errors.hpp"
#include "tasim/specfun.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>

namespace tasim::simulator {

namespace {

int thread_budget() {
    if (const char* env = std::getenv("TASIM_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

int index_bits(int L) {
    int k = 0;
    while ((1 << k) < L) ++k;
    return k;
}

// Per-partition running sums; merged in fixed partition order so the result
// does not depend on thread scheduling.
struct Accum {
    double sum = 0.0;
    double sumsq = 0.0;
    std::uint64_t count = 0;
};

template <typename PerTrial>
Accum run_partitioned(const ChannelConfig& cfg, const SimOptions& opts, PerTrial&& per_trial) {
    const int P = opts.partitions;
    std::vector<Accum> acc(P);
    std::vector<std::uint64_t> trials(P, opts.trials / P);
    for (std::uint64_t i = 0; i < opts.trials % P; ++i) ++trials[i];

    auto run_one = [&](int p) {
        RngStream rng = RngStream::substream(opts.seed, static_cast<std::uint64_t>(p));
        Accum a;
        for (std::uint64_t t = 0; t < trials[p]; ++t) {
            const double v = per_trial(draw_trial(cfg, opts, rng));
            a.sum += v;
            a.sumsq += v * v;
            ++a.count;
        }
        acc[p] = a;
    };

    const int workers = std::min(P, thread_budget());
    if (workers <= 1) {
        for (int p = 0; p < P; ++p) run_one(p);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int p = next.fetch_add(1); p < P; p = next.fetch_add(1)) run_one(p);
            });
        }
        for (auto& t : pool) t.join();
    }

    Accum total;
    for (const auto& a : acc) {
        total.sum += a.sum;
        total.sumsq += a.sumsq;
        total.count += a.count;
    }
    return total;
}

std::string run_metadata(const SimOptions& opts) {
    std::string m = "seed=" + std::to_string(opts.seed) +
                    ";partitions=" + std::to_string(opts.partitions) +
                    ";substream=splitmix64(seed^0x9e3779b97f4a7c15*(p+1))";
    if (opts.pe > 0.0) m += ";feedback-index-map=modulo-L (interpretation)";
    if (opts.rho > 0.0) m += ";correlation=equal-corr-gaussian,normal-corr=sqrt(rho) (interpretation)";
    return m;
}

} // namespace

int feedback_corrupt(int r, int L, double pe, RngStream& rng) {
    if (r < 0 || r >= L) throw DomainError("feedback_corrupt: index out of range");
    if (pe <= 0.0 || L == 1) return r;
    const int k = index_bits(L);
    int out = r;
    for (int b = 0; b < k; ++b) {
        if (rng.uniform() < pe) out ^= (1 << b);
    }
    return out % L;
}

std::vector<double> correlated_shadow_draw(const ChannelConfig& cfg, double rho, RngStream& rng) {
    const int L = cfg.num_links();
    const int m = cfg.m_alpha(0);
    for (int ell = 1; ell < L; ++ell) {
        if (cfg.m_alpha(ell) != m) {
            throw ConfigError("correlated shadowing requires equal integer m_alpha on all links");
        }
    }
    if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("correlated_shadow_draw: rho in [0,1)");

    // alpha_ell = (gamma_tilde/2m) * sum of 2m squared normals; each normal is
    // sqrt(rho_n) * common + sqrt(1-rho_n) * private with rho_n = sqrt(rho),
    // which makes the power correlation equal rho.
    const double rn = std::sqrt(rho);
    const double c1 = std::sqrt(rn);
    const double c2 = std::sqrt(1.0 - rn);
    std::vector<double> alpha(L, 0.0);
    for (int dof = 0; dof < 2 * m; ++dof) {
        const double common = rng.normal();
        for (int ell = 0; ell < L; ++ell) {
            const double x = c1 * common + c2 * rng.normal();
            alpha[ell] += x * x;
        }
    }
    for (int ell = 0; ell < L; ++ell) {
        alpha[ell] *= cfg.mean_branch_snr(ell) / (2.0 * m);
    }
    return alpha;
}

Trial draw_trial(const ChannelConfig& cfg, const SimOptions& opts, RngStream& rng) {
    const int L = cfg.num_links();
    std::vector<double> alpha(L);
    if (opts.rho > 0.0) {
        alpha = correlated_shadow_draw(cfg, opts.rho, rng);
    } else {
        for (int ell = 0; ell < L; ++ell) {
            alpha[ell] = rng.gamma(cfg.m_alpha(ell), cfg.mean_branch_snr(ell) / cfg.m_alpha(ell));
        }
    }

    int r;
    if (opts.policy == SelectionPolicy::ssi) {
        r = static_cast<int>(std::max_element(alpha.begin(), alpha.end()) - alpha.begin());
    } else {
        r = std::min(L - 1, static_cast<int>(rng.uniform() * L));
    }
    if (opts.pe > 0.0) {
        // The transmitter acts on the corrupted index: wrong antenna, its own
        // shadowing and fading.
        r = feedback_corrupt(r, L, opts.pe, rng);
    }
    const double mb = cfg.m_beta(r);
    const double beta = rng.gamma(mb, 1.0 / mb);
    return {r, alpha[r] * beta};
}

SimulationEstimate estimate_outage(const ChannelConfig& cfg, const SimOptions& opts,
                                   double gamma_th) {
    if (gamma_th < 0.0) throw DomainError("estimate_outage: threshold must be >= 0");
    SimulationEstimate est;
    est.trials = opts.trials;
    est.seed = opts.seed;
    est.policy = opts.policy;
    est.metadata = run_metadata(opts);
    if (gamma_th == 0.0) return est;
    const Accum a = run_partitioned(cfg, opts, [gamma_th](const Trial& t) {
        return t.snr < gamma_th ? 1.0 : 0.0;
    });
    const double p = a.sum / static_cast<double>(a.count);
    est.value = p;
    est.stderr_ = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(a.count));
    return est;
}

SimulationEstimate estimate_sep(const ChannelConfig& cfg, const SimOptions& opts,
                                const closed_form::Modulation& mod) {
    SimulationEstimate est;
    est.trials = opts.trials;
    est.seed = opts.seed;
    est.policy = opts.policy;
    est.metadata = run_metadata(opts);
    const double aa = mod.a, bb = mod.b;
    const Accum a = run_partitioned(cfg, opts, [aa, bb](const Trial& t) {
        return aa * specfun::gaussian_q(std::sqrt(2.0 * bb * t.snr));
    });
    const double n = static_cast<double>(a.count);
    est.value = a.sum / n;
    const double var = std::max(a.sumsq / n - est.value * est.value, 0.0);
    est.stderr_ = std::sqrt(var / n);
    return est;
}

SimulationEstimate estimate_moment(const ChannelConfig& cfg, const SimOptions& opts, int p) {
    if (p < 1) throw DomainError("estimate_moment: order must be >= 1");
    SimulationEstimate est;
    est.trials = opts.trials;
    est.seed = opts.seed;
    est.policy = opts.policy;
    est.metadata = run_metadata(opts);
    const Accum a =
        run_partitioned(cfg, opts, [p](const Trial& t) { return std::pow(t.snr, p); });
    const double n = static_cast<double>(a.count);
    est.value = a.sum / n;
    const double var = std::max(a.sumsq / n - est.value * est.value, 0.0);
    est.stderr_ = std::sqrt(var / n);
    return est;
}

} // namespace tasim::simulator
