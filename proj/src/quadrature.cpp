#include "tasim/quadrature.hpp"

#include <algorithm>

namespace tasim::quad {

namespace {

// 15-point Kronrod nodes/weights on [-1,1] with the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double result;
    double err;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);
    double resk = kWgk[7] * fv[7];
    double resg = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        resk += kWgk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) resg += kWg[i / 2] * (fv[i] + fv[14 - i]);
    }
    return {resk * h, std::fabs((resk - resg) * h)};
}

void refine(const std::function<double(double)>& f, double a, double b, double tol, int depth,
            int max_depth, QuadResult& out) {
    const Panel p = gk15(f, a, b);
    // A panel whose error estimate sits at the roundoff floor of its own
    // result cannot be improved by splitting; treat it as converged.
    const bool at_roundoff = p.err <= 5e-15 * std::fabs(p.result);
    if (p.err <= tol || at_roundoff || depth >= max_depth) {
        out.value += p.result;
        out.abs_err_est += p.err;
        if (p.err > tol && !at_roundoff) out.converged = false;
        return;
    }
    ++out.subdivisions;
    const double c = 0.5 * (a + b);
    refine(f, a, c, 0.5 * tol, depth + 1, max_depth, out);
    refine(f, c, b, 0.5 * tol, depth + 1, max_depth, out);
}

} // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     double rel_tol, int max_depth) {
    // Survey on a fixed initial split so narrow features are not missed and
    // the relative tolerance has a magnitude to work against.
    constexpr int kInitial = 8;
    const double h = (b - a) / kInitial;
    double mag = 0.0;
    for (int i = 0; i < kInitial; ++i) {
        const Panel p = gk15(f, a + i * h, a + (i + 1) * h);
        mag += std::fabs(p.result);
    }
    const double tol = std::max(abs_tol, rel_tol * std::max(mag, 1e-300)) / kInitial;
    QuadResult out;
    out.converged = true;
    for (int i = 0; i < kInitial; ++i) {
        refine(f, a + i * h, a + (i + 1) * h, tol, 0, max_depth, out);
    }
    return out;
}

QuadResult integrate_semi_inf(const std::function<double(double)>& f, double abs_tol,
                              double rel_tol, int max_depth, double scale) {
    auto g = [&f, scale](double t) {
        const double omt = 1.0 - t;
        const double u = scale * t / omt;
        const double v = f(u);
        return v * scale / (omt * omt);
    };
    return integrate(g, 0.0, 1.0 - 1e-14, abs_tol, rel_tol, max_depth);
}

} // namespace tasim::quad
