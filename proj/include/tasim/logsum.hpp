#ifndef TASIM_LOGSUM_HPP
#define TASIM_LOGSUM_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace tasim {

// A signed magnitude kept as (log|v|, sign). sign 0 <=> exact zero.
struct SignedLog {
    double log_abs = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static SignedLog from_value(double v) {
        if (v == 0.0) return {};
        return {std::log(std::fabs(v)), v > 0.0 ? 1 : -1};
    }
    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

inline SignedLog signed_log_add(const SignedLog& a, const SignedLog& b) {
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    const SignedLog& hi = a.log_abs >= b.log_abs ? a : b;
    const SignedLog& lo = a.log_abs >= b.log_abs ? b : a;
    const double d = lo.log_abs - hi.log_abs; // <= 0
    if (hi.sign == lo.sign) {
        return {hi.log_abs + std::log1p(std::exp(d)), hi.sign};
    }
    const double m = -std::expm1(d); // 1 - e^d in [0,1]
    if (m <= 0.0) return {};
    return {hi.log_abs + std::log(m), hi.sign};
}

// Sum of signed log-magnitude terms, accumulated largest-first with
// error compensation. Returns the linear value.
inline double sum_signed_logs(std::vector<SignedLog> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const SignedLog& a, const SignedLog& b) { return a.log_abs > b.log_abs; });
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms) {
        if (t.sign != 0) { m = t.log_abs; break; }
    }
    if (!std::isfinite(m)) return 0.0;
    double sum = 0.0, comp = 0.0;
    for (const auto& t : terms) {
        if (t.sign == 0) continue;
        const double v = t.sign * std::exp(t.log_abs - m);
        const double y = v - comp;
        const double u = sum + y;
        comp = (u - sum) - y;
        sum = u;
    }
    return sum * std::exp(m);
}

} // namespace tasim

#endif
