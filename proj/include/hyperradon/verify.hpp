#ifndef HYPERRADON_VERIFY_HPP
#define HYPERRADON_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hyperradon/analysis.hpp"
#include "hyperradon/config.hpp"
#include "hyperradon/laplacian.hpp"
#include "hyperradon/transforms.hpp"

namespace hyperradon {

struct Check {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
    double noise_floor = 0.0;
};

struct VerificationReport {
    std::string suite;
    SpaceParams space;
    std::string probe;
    std::vector<Check> checks;

    bool passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
};

namespace detail {

inline std::string num(double x)
{
    std::ostringstream os;
    os << x;
    return os.str();
}

inline Check at_most(std::string name, double measured, double threshold, double noise = 0.0)
{
    return {std::move(name), measured, threshold, measured <= threshold, noise};
}

inline Check at_least(std::string name, double measured, double threshold, double noise = 0.0)
{
    return {std::move(name), measured, threshold, measured >= threshold, noise};
}

inline void need_reduced(const SpaceParams& sp, const std::string& suite)
{
    require(sp.p < sp.q, errc::incompatible, suite + " needs p < q; " + sp.label() + " has none");
}

inline double max_abs(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

/// Least-squares slope of log|af| on [lo, hi].
inline double log_slope(const TransformGrid& g, double lo, double hi)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.s[i] < lo - 1e-12 || g.s[i] > hi + 1e-12 || g.af[i] == 0.0) {
            continue;
        }
        const double x = g.s[i], y = std::log(std::abs(g.af[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    require(n >= 2, errc::invalid_argument, "slope window holds fewer than two samples");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Decay verdicts of both tails of a sampled function.
inline void decay_checks(std::vector<Check>& out, const std::string& what, std::span<const double> s,
                         std::span<const std::optional<double>> values, std::span<const double> err, int N_max)
{
    for (Side side : {Side::plus, Side::minus}) {
        const auto tail = select_tail(s, values, err, side, N_max);
        const DecayCheck dc = rapid_decay_check(tail, N_max);
        const std::string name = what + (side == Side::plus ? " decay at +inf" : " decay at -inf") +
                                 " certified N (need " + std::to_string(N_max) + ")";
        out.push_back(at_least(name, dc.max_certified(), N_max, dc.noise_floor));
    }
}

inline void parity_checks(std::vector<Check>& out, const TestFunction& f, const SpaceParams& sp,
                          const QuadratureSpec& spec, const VerifyOptions& v, TaylorResult* keep = nullptr)
{
    const int count = std::min(9, std::max(2, k0_eps(sp).k0 + 1));
    const TaylorResult t = taylor_coeffs(f, sp, spec, count);
    double noise = 0.0;
    for (double e : t.err) {
        noise = std::max(noise, e);
    }
    const double scale = t.scale > 0 ? t.scale : 1.0;
    double odd = 0.0;
    for (int j = 1; j < count; j += 2) {
        odd = std::max(odd, std::abs(t.c[j]));
    }
    if (sp.variant == Variant::real_nonprojective && f.invariance() == Invariance::odd) {
        out.push_back(at_least("largest odd-index Taylor coefficient / scale", odd / scale, v.odd_min, noise / scale));
    } else {
        const double ref = std::max(std::abs(t.c[0]), t.scale);
        out.push_back(
            at_most("largest odd-index Taylor coefficient / max(|c0|, scale)", ref > 0 ? odd / ref : 0.0,
                    v.parity_tol, ref > 0 ? noise / ref : 0.0));
    }
    if (keep) {
        *keep = t;
    }
}

/// Grid of Af without an operator, then L applied with the noise test turned
/// into a check instead of an exception.
inline TransformGrid grid_with_L(const TestFunction& f, const RunConfig& c, const OperatorD& D,
                                 std::vector<Check>& out)
{
    TransformGrid g = compute_grid(f, c.space, c.grid, c.quad, std::nullopt, c.method);
    const LApplied l = apply_L(g, D, std::numeric_limits<double>::infinity());
    g.adf = l.adf;
    g.adf_noise = l.noise;
    g.op = D;
    const double mx = max_abs(g.af);
    const double noise = max_abs(l.noise);
    out.push_back(at_most("L-stencil noise / max|Af|", mx > 0 ? noise / mx : 0.0, c.noise_limit));
    return g;
}

} // namespace detail

/// Direct against reduced Radon transform, and F(z) z^d against Rf.
inline VerificationReport verify_consistency(const RunConfig& c)
{
    detail::need_reduced(c.space, "consistency");
    const TestFunction f = make_probe(c.space, c.probe);
    VerificationReport r{"consistency", c.space, f.name(), {}};
    for (double s : {0.0, 1.0, 2.0}) {
        const QuadResult red = radon_reduced(f, c.space, s, c.quad);
        const QuadResult dir = radon_direct(f, c.space, s, c.direct);
        r.checks.push_back(detail::at_most("|direct - reduced| at s = " + detail::num(s),
                                           std::abs(dir.value - red.value), 3.0 * (dir.err + red.err),
                                           dir.err + red.err));
    }
    const int d = c.space.d();
    for (double s : {0.1, 0.5, 1.0, 2.0, 3.0}) {
        const QuadResult rf = radon_reduced(f, c.space, s, c.quad);
        const QuadResult fz = f_of_z(f, c.space, std::exp(-s), c.quad);
        const double lhs = fz.value * std::exp(-d * s);
        const double ref = std::abs(rf.value) > 0 ? std::abs(rf.value) : 1.0;
        r.checks.push_back(detail::at_most("|F(e^-s) e^-ds - Rf| / |Rf| at s = " + detail::num(s),
                                           std::abs(lhs - rf.value) / ref, c.verify.consistency_tol,
                                           (fz.err * std::exp(-d * s) + rf.err) / ref));
    }
    return r;
}

/// Homogeneity and symmetries of G_f, plus the parity of X G_f on the line
/// t = (-v, -1, -v).
inline VerificationReport verify_g_integral(const RunConfig& c)
{
    detail::need_reduced(c.space, "lemmaG");
    const TestFunction f = make_probe(c.space, c.probe);
    VerificationReport r{"lemmaG", c.space, f.name(), {}};
    const GIntegrator G(f, c.space, c.quad);
    const int degree = c.space.d() * c.space.p + c.space.d() - 1;
    const VerifyOptions& v = c.verify;

    for (const GPoint t : {GPoint{0.3, -1.2, 0.4}, GPoint{-0.7, 0.5, 1.1}}) {
        const std::string at = " at t = (" + detail::num(t.t1) + ", " + detail::num(t.t2) + ", " +
                               detail::num(t.t3) + ")";
        const QuadResult g0 = G(t);
        const double ref = std::max(std::abs(g0.value), std::numeric_limits<double>::min());
        // Slope of log|G(a t)/G(t)| against log a through the origin.
        double num = 0.0, den = 0.0, noise = 0.0;
        for (double a : {0.5, 0.75, 1.25, 1.5, 2.0}) {
            const QuadResult ga = G(GPoint{a * t.t1, a * t.t2, a * t.t3});
            if (g0.value == 0.0) {
                continue;
            }
            const double la = std::log(a);
            num += la * std::log(std::abs(ga.value / g0.value));
            den += la * la;
            noise = std::max(noise, (ga.err / std::abs(ga.value) + g0.err / ref) / std::abs(la));
        }
        const double fitted = den > 0 ? num / den : degree;
        r.checks.push_back(detail::at_most("|homogeneity exponent - " + std::to_string(degree) + "|" + at,
                                           std::abs(fitted - degree), v.homogeneity_tol, noise));
        const QuadResult even = G(GPoint{t.t1, -t.t2, t.t3});
        r.checks.push_back(detail::at_most("t2-evenness relative gap" + at, std::abs(even.value - g0.value) / ref,
                                           v.symmetry_tol, (even.err + g0.err) / ref));
        const QuadResult flip = G(GPoint{-t.t1, t.t2, -t.t3});
        r.checks.push_back(detail::at_most("(-t1, t2, -t3) symmetry relative gap" + at,
                                           std::abs(flip.value - g0.value) / ref, v.symmetry_tol,
                                           (flip.err + g0.err) / ref));
    }
    const double vv = 0.7;
    const double xp = x_operator_g(G, GPoint{-vv, -1.0, -vv}, 1);
    const double xm = x_operator_g(G, GPoint{vv, -1.0, vv}, 1);
    const double scale = std::max(std::abs(G(GPoint{-vv, -1.0, -vv}).value), std::numeric_limits<double>::min());
    r.checks.push_back(detail::at_most("|X G(-v,-1,-v) + X G(v,-1,v)| / |G| at v = 0.7", std::abs(xp + xm) / scale,
                                       1e-6));
    return r;
}

/// Support of Af for compactly supported probes on p >= q. Non-compact
/// probes are replaced by the bump of radius probe.radius.
inline VerificationReport verify_support(const RunConfig& c)
{
    require(c.space.p >= c.space.q, errc::incompatible,
            "support needs p >= q; " + c.space.label() + " is in the expansion regime");
    TestFunction f = make_probe(c.space, c.probe);
    if (f.decay().kind != Decay::Kind::compact) {
        f = bump_radial(c.space, c.probe.radius);
    }
    const double R = f.decay().radius;
    VerificationReport r{"support", c.space, f.name(), {}};
    QuadratureSpec q = c.quad;
    q.abs_tol = std::max(q.abs_tol, 1e-14);
    q.target_rel_tol = std::max(q.target_rel_tol, 1e-10);
    // The edge of the support is smooth but not analytic; panels must resolve it.
    q.panel_width = std::min(q.panel_width, 0.25 * R);
    const TransformGrid g = compute_grid(f, c.space, c.grid, q, std::nullopt, RadonMethod::direct);
    const SupportVerdict sv = support_check(g, R, c.verify.support_tol);
    const double mx = detail::max_abs(g.af);
    const double noise = mx > 0 ? detail::max_abs(g.point_err) / mx : 0.0;
    r.checks.push_back({"max |Af| / max|Af| beyond 1.05 R", sv.worst_outside, c.verify.support_tol, sv.pass, noise});
    r.checks.push_back(detail::at_most("observed support radius", sv.observed_radius, 1.05 * R, noise));
    return r;
}

/// A(Delta f) against (d^2/ds^2 - rho_q^2) Af.
inline VerificationReport verify_exchange(const RunConfig& c)
{
    const TestFunction f = make_probe(c.space, c.probe);
    require(f.invariance() == Invariance::k_invariant && f.has_profile(), errc::incompatible,
            "exchange needs a K-invariant probe with a radial profile, got " + f.name());
    VerificationReport r{"exchange", c.space, f.name(), {}};
    const TestFunction lap = operator_probe(f, {}, true);
    const OperatorD d2 = operator_from_lambdas({});
    const TransformGrid g = detail::grid_with_L(f, c, d2, r.checks);
    const TransformGrid gl = compute_grid(lap, c.space, c.grid, c.quad, std::nullopt, c.method);
    const double shift = rho_q(c.space) * rho_q(c.space);
    double worst = 0.0, noise = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!g.adf[i]) {
            continue;
        }
        worst = std::max(worst, std::abs(gl.af[i] - (*g.adf[i] - shift * g.af[i])));
        noise = std::max(noise, g.adf_noise[i] + gl.point_err[i] + shift * g.point_err[i]);
    }
    const double mx = detail::max_abs(g.af);
    const double ref = mx > 0 ? mx : 1.0;
    r.checks.push_back(detail::at_most("max |A(Delta f) - (Af'' - rho_q^2 Af)| / max|Af|", worst / ref,
                                       c.verify.exchange_tol, noise / ref));
    return r;
}

inline VerificationReport verify_parity(const RunConfig& c)
{
    detail::need_reduced(c.space, "parity");
    require(c.space.codim() > 1, errc::incompatible, "parity needs d(q-p) > 1");
    const TestFunction f = make_probe(c.space, c.probe);
    VerificationReport r{"parity", c.space, f.name(), {}};
    detail::parity_checks(r.checks, f, c.space, c.quad, c.verify);
    return r;
}

/// Rapid decay of Af itself when d(q-p) <= 1.
inline VerificationReport verify_schwartz(const RunConfig& c)
{
    require(c.space.codim() <= 1, errc::incompatible,
            "schwartz covers d(q-p) <= 1; " + c.space.label() + " needs D (theorem-vi)");
    const TestFunction f = make_probe(c.space, c.probe);
    VerificationReport r{"schwartz", c.space, f.name(), {}};
    const int N = c.verify.decay_order.value_or(4);
    const TransformGrid g = compute_grid(f, c.space, c.grid, c.quad, std::nullopt, c.method);
    const std::vector<std::optional<double>> af(g.af.begin(), g.af.end());
    detail::decay_checks(r.checks, "Af", g.s, af, g.point_err, N);
    return r;
}

/// The full pipeline for d(q-p) > 1: leading growth, parity, decay of
/// A(Df) = L(d^2/ds^2) Af and, for K-invariant probes, the second route
/// through D applied to f.
inline VerificationReport verify_decay_pipeline(const RunConfig& c)
{
    require(c.space.codim() > 1, errc::incompatible,
            "theorem-vi needs d(q-p) > 1; " + c.space.label() + " is covered by schwartz or support");
    const TestFunction f = make_probe(c.space, c.probe);
    VerificationReport r{"theorem-vi", c.space, f.name(), {}};
    const OperatorD D = c.operator_d().value_or(build_D(c.space));
    const int N = c.verify.decay_order.value_or(3);
    const VerifyOptions& v = c.verify;

    TaylorResult t;
    detail::parity_checks(r.checks, f, c.space, c.quad, v, &t);
    int lead = 0;
    while (lead + 1 < static_cast<int>(t.c.size()) && std::abs(t.c[lead]) <= v.parity_tol * t.scale) {
        ++lead;
    }
    const TransformGrid g = detail::grid_with_L(f, c, D, r.checks);
    const double lo = std::max(v.slope_lo, c.grid.s_min), hi = std::min(v.slope_hi, c.grid.s_max);
    if (hi - lo >= 1.0) {
        const double expected = rho_1(c.space) - c.space.d() - lead;
        const double slope = detail::log_slope(g, lo, hi);
        r.checks.push_back(detail::at_most("|slope of log|Af| on [" + detail::num(lo) + ", " + detail::num(hi) +
                                               "] - " + detail::num(expected) + "|",
                                           std::abs(slope - expected), v.slope_tol));
    }
    if (D.lambdas.empty()) {
        // Af tends to a constant: what is left after removing it must sit in
        // the noise on the far window.
        const double flo = std::max(c.grid.s_max - 2.0, c.grid.s_min);
        const FitResult fit = fit_exponents(g, {0.0}, flo, c.grid.s_max);
        double noise = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g.s[i] >= flo - 1e-12) {
                noise = std::max(noise, g.point_err[i]);
            }
        }
        r.checks.push_back(detail::at_most("residual after constant removal on [" + detail::num(flo) + ", " +
                                               detail::num(c.grid.s_max) + "]",
                                           fit.residual, noise, noise));
    }
    detail::decay_checks(r.checks, "A(Df)", g.s, g.adf, g.adf_noise, N);

    if (f.invariance() == Invariance::k_invariant && f.has_profile()) {
        const TestFunction df = operator_probe(f, D.lambdas);
        const TransformGrid g2 = compute_grid(df, c.space, c.grid, c.quad, std::nullopt, c.method);
        const double scale = std::max(detail::max_abs(g2.af), std::numeric_limits<double>::min());
        double worst = 0.0, noise = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g.adf[i]) {
                worst = std::max(worst, std::abs(*g.adf[i] - g2.af[i]));
                noise = std::max(noise, g.adf_noise[i] + g2.point_err[i]);
            }
        }
        r.checks.push_back(detail::at_most("max |A(Df) via D f - L(d^2/ds^2) Af| / max|A(Df)|", worst / scale,
                                           v.two_route_tol, noise / scale));
    }
    return r;
}

inline VerificationReport run_suite(const std::string& suite, const RunConfig& c)
{
    if (suite == "consistency") {
        return verify_consistency(c);
    }
    if (suite == "lemmaG") {
        return verify_g_integral(c);
    }
    if (suite == "support") {
        return verify_support(c);
    }
    if (suite == "exchange") {
        return verify_exchange(c);
    }
    if (suite == "parity") {
        return verify_parity(c);
    }
    if (suite == "schwartz") {
        return verify_schwartz(c);
    }
    if (suite == "theorem-vi") {
        return verify_decay_pipeline(c);
    }
    fail(errc::invalid_argument, "unknown suite '" + suite + "'");
}

/// The suite that covers the regime of a space: support for p >= q,
/// schwartz when d(q-p) = 1, theorem-vi otherwise.
inline std::string auto_suite(const SpaceParams& sp)
{
    if (sp.p >= sp.q) {
        return "support";
    }
    if (sp.codim() <= 1) {
        return "schwartz";
    }
    return "theorem-vi";
}

} // namespace hyperradon

#endif // HYPERRADON_VERIFY_HPP
