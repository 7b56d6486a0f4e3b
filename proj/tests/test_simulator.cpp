#include <doctest.h>

#include "tasim/closed_form.hpp"
#include "tasim/errors.hpp"
#include "tasim/expansion.hpp"
#include "tasim/rng.hpp"
#include "tasim/simulator.hpp"
#include "tasim/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace tasim;
using namespace tasim::simulator;

TEST_CASE("gamma variates have the right moments") {
    RngStream rng(101);
    const double shape = 3.0, scale = 2.0;
    const int n = 1000000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        double g = rng.gamma(shape, scale);
        sum += g;
        sumsq += g * g;
    }
    double mean = sum / n;
    double var = sumsq / n - mean * mean;
    // 4 sigma bands around the exact Gamma moments.
    double mean_sd = std::sqrt(shape * scale * scale / n);
    CHECK(std::fabs(mean - shape * scale) < 4.0 * mean_sd);
    // Var[g^2-ish] bound: relative 4 sigma on the variance needs the 4th moment;
    // a 2% band is ~5 sigma at this n.
    CHECK(var == doctest::Approx(shape * scale * scale).epsilon(0.02));
}

TEST_CASE("shape below one still samples correctly") {
    RngStream rng(103);
    const double shape = 0.6;
    const int n = 400000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rng.gamma(shape, 1.0);
    CHECK(sum / n == doctest::Approx(shape).epsilon(0.01));
}

TEST_CASE("gamma variates pass a Kolmogorov-Smirnov test") {
    RngStream rng(107);
    const double shape = 2.3;
    const int n = 100000;
    std::vector<double> xs(n);
    for (auto& x : xs) x = rng.gamma(shape, 1.0);
    std::sort(xs.begin(), xs.end());
    double dmax = 0.0;
    for (int i = 0; i < n; ++i) {
        double F = specfun::reg_lower_gamma(shape, xs[i]);
        dmax = std::max(dmax, std::fabs(F - (i + 1.0) / n));
        dmax = std::max(dmax, std::fabs(F - static_cast<double>(i) / n));
    }
    // alpha = 0.01 critical value of the KS statistic: 1.628/sqrt(n).
    CHECK(dmax < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("empirical exponential CDF at one") {
    RngStream rng(109);
    const int n = 500000;
    int below = 0;
    for (int i = 0; i < n; ++i)
        if (rng.gamma(1.0, 1.0) < 1.0) ++below;
    CHECK(static_cast<double>(below) / n ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(5e-3));
}

TEST_CASE("ssi policy selects each antenna at the closed-form frequency") {
    ChannelConfig cfg(2, {2, 3}, {1.5, 2.5}, {1.0, 1.5}, 10.0);
    SimOptions opts;
    RngStream rng(211);
    const int n = 200000;
    std::vector<int> counts(2, 0);
    for (int i = 0; i < n; ++i) ++counts[draw_trial(cfg, opts, rng).selected];
    auto ps = expansion::selection_probabilities(cfg);
    for (int r = 0; r < 2; ++r) {
        double phat = static_cast<double>(counts[r]) / n;
        double sd = std::sqrt(ps[r] * (1.0 - ps[r]) / n);
        CHECK(std::fabs(phat - ps[r]) < 4.0 * sd);
    }
}

TEST_CASE("random policy selects uniformly") {
    ChannelConfig cfg(3, {1, 2, 3}, {1.0, 1.0, 1.0}, {0.2, 1.0, 5.0}, 10.0);
    SimOptions opts;
    opts.policy = SelectionPolicy::random_antenna;
    RngStream rng(223);
    const int n = 120000;
    std::vector<int> counts(3, 0);
    for (int i = 0; i < n; ++i) ++counts[draw_trial(cfg, opts, rng).selected];
    for (int c : counts)
        CHECK(static_cast<double>(c) / n == doctest::Approx(1.0 / 3.0).epsilon(0.02));
}

TEST_CASE("single link trivia") {
    ChannelConfig cfg(1, {1}, {1.0}, {1.0}, 0.0);
    SimOptions opts;
    RngStream rng(1);
    for (int i = 0; i < 50; ++i) {
        auto t = draw_trial(cfg, opts, rng);
        CHECK(t.selected == 0);
        CHECK(t.snr > 0.0);
    }
}

TEST_CASE("feedback corruption") {
    SUBCASE("pe = 0 or L = 1 never corrupts and consumes no randomness") {
        RngStream a(5), b(5);
        CHECK(feedback_corrupt(2, 4, 0.0, a) == 2);
        CHECK(feedback_corrupt(0, 1, 0.3, a) == 0);
        CHECK(a.next_u64() == b.next_u64()); // stream untouched
    }
    SUBCASE("L = 4: index survives with probability (1-pe)^2") {
        RngStream rng(31);
        const double pe = 0.1;
        const int n = 200000;
        int kept = 0;
        for (int i = 0; i < n; ++i)
            if (feedback_corrupt(1, 4, pe, rng) == 1) ++kept;
        CHECK(static_cast<double>(kept) / n == doctest::Approx(0.81).epsilon(0.01));
    }
    SUBCASE("L = 3: out-of-range patterns wrap modulo L") {
        // 2 bits cover {0,1,2,3}; pattern 3 maps to 0. Starting from r=1, flips
        // give: 00->0, 01->1(kept), 10->... enumerate exact probabilities.
        RngStream rng(37);
        const double pe = 0.2;
        const int n = 300000;
        std::vector<int> counts(3, 0);
        for (int i = 0; i < n; ++i) ++counts[feedback_corrupt(1, 3, pe, rng)];
        // r=1 is bits 01. Received patterns: 01 keep (0.8*0.8), 00 (0.8*0.2),
        // 11 (0.2*0.8), 10 (0.2*0.2). Pattern 11 = 3 wraps to 0.
        double p0 = 0.8 * 0.2 + 0.2 * 0.8; // 00 and 11->0
        double p1 = 0.8 * 0.8;
        double p2 = 0.2 * 0.2;
        CHECK(static_cast<double>(counts[0]) / n == doctest::Approx(p0).epsilon(0.02));
        CHECK(static_cast<double>(counts[1]) / n == doctest::Approx(p1).epsilon(0.02));
        CHECK(static_cast<double>(counts[2]) / n == doctest::Approx(p2).epsilon(0.05));
    }
}

TEST_CASE("corrupted feedback transmits on the wrong antenna") {
    // With certain corruption on L=2 (pe ~ 1 flips the single bit), the
    // selected antenna reported by the trial must differ from argmax alpha
    // half the time-ish; easiest observable: SEP degrades vs pe = 0.
    ChannelConfig cfg(2, {1, 1}, {1.0, 1.0}, {1.0, 1.0}, 20.0);
    auto mod = closed_form::Modulation::make(closed_form::Modulation::Family::bpsk);
    SimOptions clean;
    clean.trials = 200000;
    clean.seed = 77;
    SimOptions noisy = clean;
    noisy.pe = 0.2;
    auto a = estimate_sep(cfg, clean, mod);
    auto b = estimate_sep(cfg, noisy, mod);
    CHECK(b.value > a.value + 3.0 * (a.stderr_ + b.stderr_));
}

TEST_CASE("correlated shadowing draws") {
    ChannelConfig cfg(2, {2, 2}, {1.0, 1.0}, {1.0, 1.0}, 10.0);
    SUBCASE("marginal moments survive correlation") {
        RngStream rng(41);
        const int n = 200000;
        double s0 = 0.0, s1 = 0.0;
        for (int i = 0; i < n; ++i) {
            auto a = correlated_shadow_draw(cfg, 0.5, rng);
            s0 += a[0];
            s1 += a[1];
        }
        CHECK(s0 / n == doctest::Approx(cfg.mean_branch_snr(0)).epsilon(0.02));
        CHECK(s1 / n == doctest::Approx(cfg.mean_branch_snr(1)).epsilon(0.02));
    }
    SUBCASE("sample power correlation tracks rho") {
        for (double rho : {0.3, 0.8}) {
            RngStream rng(43);
            const int n = 300000;
            double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
            for (int i = 0; i < n; ++i) {
                auto a = correlated_shadow_draw(cfg, rho, rng);
                sx += a[0];
                sy += a[1];
                sxx += a[0] * a[0];
                syy += a[1] * a[1];
                sxy += a[0] * a[1];
            }
            double cx = sxx / n - (sx / n) * (sx / n);
            double cy = syy / n - (sy / n) * (sy / n);
            double cxy = sxy / n - (sx / n) * (sy / n);
            CHECK(cxy / std::sqrt(cx * cy) == doctest::Approx(rho).epsilon(0.03));
        }
    }
    SUBCASE("unequal shapes are rejected") {
        ChannelConfig bad(2, {1, 2}, {1.0, 1.0}, {1.0, 1.0}, 10.0);
        RngStream rng(47);
        CHECK_THROWS_AS(correlated_shadow_draw(bad, 0.5, rng), ConfigError);
    }
}

TEST_CASE("outage estimate agrees with the closed form") {
    ChannelConfig cfg(2, {2, 3}, {1.5, 2.5}, {1.0, 1.5}, 10.0);
    SimOptions opts;
    opts.trials = 400000;
    opts.seed = 999;
    opts.partitions = 4;
    double gth = 2.0;
    auto est = estimate_outage(cfg, opts, gth);
    double expect = closed_form::outage(cfg, gth);
    CHECK(std::fabs(est.value - expect) < 3.5 * est.stderr_);
    CHECK(est.stderr_ ==
          doctest::Approx(std::sqrt(est.value * (1.0 - est.value) / opts.trials)).epsilon(1e-9));
    CHECK(est.trials == opts.trials);
}

TEST_CASE("semi-analytic SEP estimate agrees with the closed form") {
    ChannelConfig cfg(2, {2, 3}, {1.5, 2.5}, {1.0, 1.5}, 10.0);
    auto mod = closed_form::Modulation::make(closed_form::Modulation::Family::bpsk);
    SimOptions opts;
    opts.trials = 300000;
    opts.seed = 1234;
    auto est = estimate_sep(cfg, opts, mod);
    CHECK(std::fabs(est.value - closed_form::sep(cfg, mod)) < 3.5 * est.stderr_);
}

TEST_CASE("moment estimate agrees with the closed form") {
    ChannelConfig cfg(2, {2, 3}, {1.5, 2.5}, {1.0, 1.5}, 10.0);
    SimOptions opts;
    opts.trials = 400000;
    opts.seed = 4321;
    auto est = estimate_moment(cfg, opts, 1);
    CHECK(std::fabs(est.value - closed_form::moment(cfg, 1)) < 3.5 * est.stderr_);
}

TEST_CASE("ssi selection beats random selection on outage") {
    ChannelConfig cfg(3, {1, 1, 1}, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, 10.0);
    SimOptions ssi;
    ssi.trials = 400000;
    ssi.seed = 5;
    SimOptions rnd = ssi;
    rnd.policy = SelectionPolicy::random_antenna;
    auto a = estimate_outage(cfg, ssi, 1.0);
    auto b = estimate_outage(cfg, rnd, 1.0);
    CHECK(a.value + 3.0 * (a.stderr_ + b.stderr_) < b.value);
}

TEST_CASE("determinism and partition merging") {
    ChannelConfig cfg(2, {2, 3}, {1.5, 2.5}, {1.0, 1.5}, 10.0);
    SimOptions opts;
    opts.trials = 100000;
    opts.seed = 31337;
    opts.partitions = 4;
    auto a = estimate_outage(cfg, opts, 2.0);
    auto b = estimate_outage(cfg, opts, 2.0);
    CHECK(a.value == b.value); // bit identical
    CHECK(a.stderr_ == b.stderr_);

    // pe = 0 must reproduce the error-free stream bit-exactly.
    SimOptions pe0 = opts;
    pe0.pe = 0.0;
    auto c = estimate_outage(cfg, pe0, 2.0);
    CHECK(c.value == a.value);

    // Merging four single-partition runs, each seeded with the sub-stream of
    // the corresponding partition, reproduces the 4-partition estimate.
    // Sub-stream p of seed s is RngStream::substream(s, p); run_partitioned
    // hands partition p trials [p*n/4 .. ) of the total.
    std::uint64_t per = opts.trials / 4;
    double merged_sum = 0.0;
    for (int p = 0; p < 4; ++p) {
        RngStream rng = RngStream::substream(opts.seed, static_cast<std::uint64_t>(p));
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < per; ++i)
            if (draw_trial(cfg, opts, rng).snr < 2.0) ++hits;
        merged_sum += static_cast<double>(hits);
    }
    CHECK(merged_sum / opts.trials == doctest::Approx(a.value).epsilon(1e-15));
}

TEST_CASE("metadata documents the stream derivation") {
    ChannelConfig cfg(1, {1}, {1.0}, {1.0}, 0.0);
    SimOptions opts;
    opts.trials = 10000;
    auto est = estimate_outage(cfg, opts, 1.0);
    CHECK(est.metadata.find("substream") != std::string::npos);
}
