#ifndef HYPERRADON_TRANSFORMS_HPP
#define HYPERRADON_TRANSFORMS_HPP

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperradon/error.hpp"
#include "hyperradon/finite_difference.hpp"
#include "hyperradon/geometry.hpp"
#include "hyperradon/parallel.hpp"
#include "hyperradon/params.hpp"
#include "hyperradon/quadrature.hpp"
#include "hyperradon/testfuncs.hpp"

namespace hyperradon {

/// Argument (t1, t2, t3) of G_f.
struct GPoint {
    double t1 = 0.0;
    double t2 = 0.0;
    double t3 = 0.0;

    double form() const noexcept { return t1 * t1 - t2 * t2 - t3 * t3; }
};

/// t(z, v) = (-v, -(1 + 2zv - z^2)^{1/2}, z - v); lies on t1^2 - t2^2 - t3^2 = -1.
inline GPoint t_of(double z, double v)
{
    const double r2 = 1.0 + 2.0 * z * v - z * z;
    require(r2 >= 0, errc::domain_error, "1 + 2zv - z^2 < 0");
    return {-v, -std::sqrt(r2), z - v};
}

namespace detail {

constexpr int max_ambient = 64;

inline void check_probe(const TestFunction& f, const SpaceParams& sp)
{
    require(f.layout().size() == Layout(sp).size(), errc::dimension_mismatch,
            "probe built for " + f.space().label() + " used on " + sp.label());
    require(Layout(sp).size() <= max_ambient, errc::invalid_argument, "space too large: " + sp.label());
}

/// Point (wbar + t1, conj(u); u^r, t2 vbar, t3 + wbar) of the reduced
/// integral. vbar has d(q-p) reals, u has dp, wbar has d-1.
inline void write_reduced_point(const Layout& L, double t1, double t2, double t3, const double* vbar,
                                const double* u, const double* wbar, double* out) noexcept
{
    const int d = L.d;
    const int first = L.block(0);
    const int last = L.block(L.last());
    for (int k = 0; k < d - 1; ++k) {
        out[first + k] = wbar[k];
        out[last + k] = wbar[k];
    }
    out[first + d - 1] = t1;
    out[last + d - 1] = t3;
    for (int k = 0; k < L.p; ++k) {
        const int b = L.block(1 + k);
        for (int c = 0; c < d - 1; ++c) {
            out[b + c] = -u[d * k + c];
        }
        out[b + d - 1] = u[d * k + d - 1];
        const int nb = L.block(1 + L.p + k);
        for (int c = 0; c < d; ++c) {
            out[nb + c] = u[d * (L.p - 1 - k) + c];
        }
    }
    const int tail = L.block(1 + 2 * L.p);
    for (int c = 0; c < d * (L.q - L.p); ++c) {
        out[tail + c] = t2 * vbar[c];
    }
}

/// Sphere, u-box and wbar-box factors of the G_f integral.
inline std::vector<PointRule> g_factors(const SpaceParams& sp, const QuadratureSpec& spec, int level)
{
    std::vector<PointRule> fs;
    fs.push_back(sphere_rule(sp.codim() - 1, spec.sphere_nodes * level));
    const int box = sp.d() * sp.p + sp.d() - 1;
    if (box > 0) {
        const PointRule b = box_rule(spec, level);
        for (int i = 0; i < box; ++i) {
            fs.push_back(b);
        }
    }
    return fs;
}

inline std::vector<std::vector<PointRule>> cached_levels(const QuadratureSpec& spec,
                                                         const std::function<std::vector<PointRule>(int)>& make)
{
    std::vector<std::vector<PointRule>> out;
    for (int r = 0, level = 1; r <= spec.doubling_rounds; ++r, level *= 2) {
        out.push_back(make(level));
    }
    return out;
}

inline int level_index(int level)
{
    int k = 0;
    while ((1 << k) < level) {
        ++k;
    }
    return k;
}

} // namespace detail

/// Rf(s) as the plain Lebesgue integral of f[a_s exp(N) x0] over the
/// parameters (free, tail, w). The tail enters the point through e^s |tail|^2
/// and w through e^s w, so the box [-T, T] is laid out in the rescaled
/// variables e^{s/2} tail and e^s w; the Jacobian is applied to the result.
inline QuadResult radon_direct(const TestFunction& f, const SpaceParams& sp, double s, const QuadratureSpec& spec)
{
    detail::check_probe(f, sp);
    const Layout L(sp);
    const int d = sp.d();
    const int nfree = d * std::min(sp.p, sp.q);
    const int ntail = d * std::abs(sp.q - sp.p);
    const int m = NilpotentParam::box_dim(sp);
    const double ct = std::exp(-0.5 * s);
    const double cw = std::exp(-s);
    auto g = [&](std::span<const double> x) {
        std::array<double, detail::max_ambient> buf, par;
        std::copy(x.begin(), x.begin() + nfree, par.begin());
        for (int i = 0; i < ntail; ++i) {
            par[nfree + i] = ct * x[nfree + i];
        }
        for (int i = 0; i < d - 1; ++i) {
            par[nfree + ntail + i] = cw * x[nfree + ntail + i];
        }
        const std::span<const double> ps(par.data(), m);
        std::span<double> out(buf.data(), L.size());
        write_orbit_point(L, s, ps.subspan(0, nfree), ps.subspan(nfree, ntail), ps.subspan(nfree + ntail, d - 1),
                          out);
        return f(std::span<const double>(out));
    };
    QuadResult res = integrate_box(g, m, spec);
    const double jac = std::pow(ct, ntail) * std::pow(cw, d - 1);
    res.value *= jac;
    res.err *= jac;
    res.scale *= jac;
    return res;
}

/// Rf(s) = e^{-ds} int_{-sinh s}^inf G_f(t(z, v)) (1 + 2zv - z^2)^alpha dv,
/// z = e^{-s}, alpha = d(q-p)/2 - 1, evaluated as one tensor integral over
/// v, the sphere, u and wbar. Needs p < q.
inline QuadResult radon_reduced(const TestFunction& f, const SpaceParams& sp, double s, const QuadratureSpec& spec)
{
    detail::check_probe(f, sp);
    require(sp.p < sp.q, errc::incompatible, "reduced Radon integral needs p < q, got " + sp.label());
    const Layout L(sp);
    const int D = sp.codim();
    const int nu = sp.d() * sp.p;
    const double alpha = 0.5 * D - 1.0;
    const double z = std::exp(-s);
    const double a = -std::sinh(s);
    QuadratureSpec hs = spec;
    hs.endpoint_power = alpha;

    auto make = [&](int level) {
        std::vector<PointRule> fs{halfline_rule(a, hs, level)};
        for (PointRule& r : detail::g_factors(sp, spec, level)) {
            fs.push_back(std::move(r));
        }
        return fs;
    };
    auto g = [&](std::span<const double> x) {
        const double v = x[0];
        // 1 + 2zv - z^2 = 2z(v - a), with v - a carried exactly by the rule.
        const double r2 = 2.0 * z * x[1];
        if (r2 <= 0.0) {
            return 0.0;
        }
        std::array<double, detail::max_ambient> buf;
        detail::write_reduced_point(L, -v, -std::sqrt(r2), z - v, &x[2], &x[2 + D], &x[2 + D + nu], buf.data());
        const double w = alpha == 0.0 ? 1.0 : std::pow(r2, alpha);
        return w * f(std::span<const double>(buf.data(), L.size()));
    };
    QuadResult res = integrate_doubling(make, g, spec);
    const double scale = std::exp(-sp.d() * s);
    res.value *= scale;
    res.err *= scale;
    res.scale *= scale;
    return res;
}

enum class RadonMethod { automatic, direct, reduced };

inline std::string to_string(RadonMethod m)
{
    switch (m) {
    case RadonMethod::automatic: return "auto";
    case RadonMethod::direct: return "direct";
    case RadonMethod::reduced: return "reduced";
    }
    return "?";
}

inline QuadResult radon(const TestFunction& f, const SpaceParams& sp, double s, const QuadratureSpec& spec,
                        RadonMethod method = RadonMethod::automatic)
{
    if (method == RadonMethod::direct || (method == RadonMethod::automatic && sp.p >= sp.q)) {
        return radon_direct(f, sp, s, spec);
    }
    return radon_reduced(f, sp, s, spec);
}

/// Af(s) = e^{rho_1 s} Rf(s).
inline QuadResult abel(const TestFunction& f, const SpaceParams& sp, double s, const QuadratureSpec& spec,
                       RadonMethod method = RadonMethod::automatic)
{
    QuadResult res = radon(f, sp, s, spec, method);
    const double scale = std::exp(rho_1(sp) * s);
    res.value *= scale;
    res.err *= scale;
    res.scale *= scale;
    return res;
}

/// G_f with its quadrature rules built once, for repeated evaluation.
class GIntegrator {
public:
    GIntegrator(const TestFunction& f, const SpaceParams& sp, const QuadratureSpec& spec)
        : f_(f), sp_(sp), spec_(spec), L_(sp)
    {
        detail::check_probe(f, sp);
        require(sp.p < sp.q, errc::incompatible, "G_f needs p < q, got " + sp.label());
        spec_.validate();
        levels_ = detail::cached_levels(spec_, [&](int level) { return detail::g_factors(sp_, spec_, level); });
    }

    QuadResult operator()(const GPoint& t) const
    {
        require(t.form() < 0, errc::domain_error, "G_f needs t1^2 - t2^2 - t3^2 < 0");
        const int D = sp_.codim();
        const int nu = sp_.d() * sp_.p;
        auto g = [&](std::span<const double> x) {
            std::array<double, detail::max_ambient> buf;
            detail::write_reduced_point(L_, t.t1, t.t2, t.t3, &x[0], &x[D], &x[D + nu], buf.data());
            return f_(std::span<const double>(buf.data(), L_.size()));
        };
        auto rules = [&](int level) -> const std::vector<PointRule>& { return levels_[detail::level_index(level)]; };
        return integrate_doubling(rules, g, spec_);
    }

    const SpaceParams& space() const noexcept { return sp_; }

private:
    const TestFunction& f_;
    SpaceParams sp_;
    QuadratureSpec spec_;
    Layout L_;
    std::vector<std::vector<PointRule>> levels_;
};

/// G_f(t) = int f[(wbar + t1, conj(u); u^r, t2 vbar, t3 + wbar)] dvbar du dwbar.
inline QuadResult g_function(const TestFunction& f, const SpaceParams& sp, const GPoint& t, const QuadratureSpec& spec)
{
    require(t.form() < 0, errc::domain_error, "G_f needs t1^2 - t2^2 - t3^2 < 0");
    return GIntegrator(f, sp, spec)(t);
}

namespace detail {

/// Outer doubling over a one-dimensional rule whose integrand is itself a
/// quadrature. The inner relative error is folded into the outer estimate.
template <class MakeRule, class Inner>
QuadResult nested_doubling(MakeRule&& make_rule, Inner&& inner, const QuadratureSpec& spec)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    auto run = [&](int level, double& inner_rel) {
        const PointRule r = make_rule(level);
        CompensatedSum sum, sum_abs;
        for (std::size_t i = 0; i < r.count(); ++i) {
            const QuadResult q = inner(r.point(i));
            sum.add(r.weights[i] * q.value);
            sum_abs.add(std::abs(r.weights[i] * q.value));
            if (q.scale > 0) {
                inner_rel = std::max(inner_rel, q.err / q.scale);
            }
        }
        return std::pair{sum.value(), sum_abs.value()};
    };
    double inner_rel = 0.0;
    auto prev = run(1, inner_rel);
    QuadResult res;
    for (int round = 0, level = 2; round < spec.doubling_rounds; ++round, level *= 2) {
        const auto cur = run(level, inner_rel);
        res.value = cur.first;
        res.scale = cur.second;
        res.err = std::abs(cur.first - prev.first) + (inner_rel + 16.0 * eps) * cur.second;
        const double bound =
            std::max(spec.abs_tol, spec.target_rel_tol * std::max(std::abs(cur.first), cur.second));
        if (res.err <= bound) {
            res.converged = true;
            return res;
        }
        prev = cur;
    }
    fail(errc::no_convergence, "nested quadrature did not reach tolerance (err " + std::to_string(res.err) + ")");
}

} // namespace detail

/// F(z) = int_{(z - 1/z)/2}^inf G_f(t(z, v)) (1 + 2zv - z^2)^alpha dv, with
/// G_f computed as a separate inner quadrature at every outer node.
inline QuadResult f_of_z(const TestFunction& f, const SpaceParams& sp, double z, const QuadratureSpec& spec)
{
    require(z > 0 && z < 1, errc::invalid_argument, "F(z) needs 0 < z < 1");
    const GIntegrator G(f, sp, spec);
    const double alpha = 0.5 * sp.codim() - 1.0;
    const double a = 0.5 * (z - 1.0 / z);
    QuadratureSpec hs = spec;
    hs.endpoint_power = alpha;
    auto inner = [&](std::span<const double> x) {
        const double r2 = 2.0 * z * x[1];
        QuadResult q = G(GPoint{-x[0], -std::sqrt(r2), z - x[0]});
        const double w = alpha == 0.0 ? 1.0 : std::pow(r2, alpha);
        q.value *= w;
        q.err *= w;
        q.scale *= w;
        return q;
    };
    return detail::nested_doubling([&](int level) { return halfline_rule(a, hs, level); }, inner, spec);
}

struct TaylorResult {
    std::vector<double> c;
    std::vector<double> err;
    double scale = 0.0; // int |G_f(t(0, v))| dv
    double delta = 0.0;
};

/// Taylor coefficients c_0 .. c_{count-1} of F at z = 0:
/// c_j = (1/j!) int d^j/dz^j [G_f(t(z, v)) (1 + 2zv - z^2)^alpha]_{z=0} dv.
/// The z-derivatives come from an 11-point central stencil whose step keeps
/// 1 + 2zv - z^2 > 0 on [-T, T]; the step is audited by halving.
inline TaylorResult taylor_coeffs(const TestFunction& f, const SpaceParams& sp, const QuadratureSpec& spec,
                                  int count = -1, double audit_rel_tol = 1e-7)
{
    require(sp.codim() > 1, errc::invalid_argument, "Taylor coefficients need d(q-p) > 1");
    const int k0 = k0_eps(sp).k0;
    if (count < 0) {
        count = k0;
    }
    constexpr int m = 5;
    require(count >= 1 && count <= 2 * m - 1, errc::depth_exceeded, "Taylor order out of range");
    const GIntegrator G(f, sp, spec);
    const double alpha = 0.5 * sp.codim() - 1.0;
    const double T = spec.truncation_radius;
    const double delta0 = 0.4 / (m * T);

    std::vector<double> x(2 * m + 1);
    for (int i = 0; i <= 2 * m; ++i) {
        x[i] = i - m;
    }
    const auto W = fornberg_weights(0.0, x, count - 1);

    struct Pass {
        std::vector<double> c, inner_rel;
        double scale = 0.0;
    };
    auto pass = [&](double delta, int level) {
        const PointRule r = composite_rule(-T, T, spec.nodes_per_dim * level, spec.panel_width);
        std::vector<CompensatedSum> acc(count);
        CompensatedSum scale;
        double inner_rel = 0.0;
        std::vector<double> vals(2 * m + 1);
        for (std::size_t i = 0; i < r.count(); ++i) {
            const double v = r.points[i];
            for (int k = -m; k <= m; ++k) {
                const double z = k * delta;
                const double r2 = 1.0 + 2.0 * z * v - z * z;
                const QuadResult q = G(GPoint{-v, -std::sqrt(r2), z - v});
                if (q.scale > 0) {
                    inner_rel = std::max(inner_rel, q.err / q.scale);
                }
                vals[k + m] = q.value * (alpha == 0.0 ? 1.0 : std::pow(r2, alpha));
            }
            scale.add(r.weights[i] * std::abs(vals[m]));
            double fact = 1.0, dpow = 1.0;
            for (int j = 0; j < count; ++j) {
                if (j > 0) {
                    fact *= j;
                    dpow *= delta;
                }
                double dj = 0.0;
                for (int k = 0; k <= 2 * m; ++k) {
                    dj += W[j][k] * vals[k];
                }
                acc[j].add(r.weights[i] * dj / (dpow * fact));
            }
        }
        Pass p;
        for (auto& a : acc) {
            p.c.push_back(a.value());
        }
        p.inner_rel.assign(count, inner_rel);
        p.scale = scale.value();
        return p;
    };

    const Pass coarse = pass(delta0, 1);
    const Pass fine = pass(delta0, 2);
    const Pass half = pass(0.5 * delta0, 2);
    TaylorResult out;
    out.delta = delta0;
    out.scale = fine.scale;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int j = 0; j < count; ++j) {
        const double quad = std::abs(fine.c[j] - coarse.c[j]) + (fine.inner_rel[j] + 16 * eps) * fine.scale;
        const double step = std::abs(half.c[j] - fine.c[j]);
        if (quad > spec.target_rel_tol * fine.scale * 1e3) {
            fail(errc::no_convergence, "Taylor coefficient c_" + std::to_string(j) + " did not converge");
        }
        if (step > audit_rel_tol * fine.scale) {
            fail(errc::step_audit, "halving the z-step moved c_" + std::to_string(j) + " by " + std::to_string(step));
        }
        out.c.push_back(fine.c[j]);
        out.err.push_back(quad + step);
    }
    return out;
}

/// X^k G_f(t) with X = t3 d/dt2 - t2 d/dt3. The flow of X is the rotation
/// (t2, t3) -> (t2 cos a + t3 sin a, -t2 sin a + t3 cos a), so X^k G_f is the
/// k-th a-derivative at 0, taken on a 7-point stencil.
inline double x_operator_g(const GIntegrator& G, const GPoint& t, int k)
{
    require(k >= 0, errc::invalid_argument, "X-power must be >= 0");
    require(k <= 3, errc::depth_exceeded, "X-power limited to 3");
    require(t.form() < 0, errc::domain_error, "G_f needs t1^2 - t2^2 - t3^2 < 0");
    if (k == 0) {
        return G(t).value;
    }
    constexpr double step = 0.05;
    std::vector<double> th(7);
    for (int i = 0; i < 7; ++i) {
        th[i] = (i - 3) * step;
    }
    const auto W = fornberg_weights(0.0, th, k);
    double acc = 0.0;
    for (int i = 0; i < 7; ++i) {
        const double c = std::cos(th[i]), s = std::sin(th[i]);
        acc += W[k][i] * G(GPoint{t.t1, t.t2 * c + t.t3 * s, -t.t2 * s + t.t3 * c}).value;
    }
    return acc;
}

inline double x_operator_g(const TestFunction& f, const SpaceParams& sp, const GPoint& t, int k,
                           const QuadratureSpec& spec)
{
    return x_operator_g(GIntegrator(f, sp, spec), t, k);
}

/// Uniform s-grid.
struct GridSpec {
    double s_min = -4.0;
    double s_max = 9.0;
    double h = 0.05;

    std::size_t size() const
    {
        require(h > 0 && s_max > s_min, errc::invalid_argument, "grid needs h > 0 and s_max > s_min");
        return static_cast<std::size_t>(std::llround((s_max - s_min) / h)) + 1;
    }
    double at(std::size_t i) const { return s_min + static_cast<double>(i) * h; }
};

/// Output of L(d^2/ds^2) on a sampled function.
struct LApplied {
    std::vector<std::optional<double>> adf;
    std::vector<double> noise; // 0 outside the valid interior
    int margin = 0;
    double kernel_l1 = 0.0;
};

/// Kernel of L(D2) where D2 is the 9-point, order-8 second difference.
inline std::vector<double> l_kernel(const OperatorD& D, double h)
{
    std::vector<double> d2 = central_weights(4, 2);
    for (double& w : d2) {
        w /= h * h;
    }
    std::vector<double> power{1.0};
    std::vector<double> K;
    const std::size_t deg = D.image_poly.size() - 1;
    const std::size_t width = 8 * deg + 1;
    K.assign(width, 0.0);
    for (std::size_t k = 0; k <= deg; ++k) {
        if (k > 0) {
            power = convolve(power, d2);
        }
        const std::size_t off = (width - power.size()) / 2;
        for (std::size_t i = 0; i < power.size(); ++i) {
            K[off + i] += D.image_poly[k] * power[i];
        }
    }
    return K;
}

/// adf = L(d^2/ds^2) af. Points closer than 4(r+1) samples to an end are
/// left empty. noise_i bounds the propagated quadrature and rounding error.
/// Throws GridTooCoarse when max noise exceeds noise_limit * max |af|.
inline LApplied apply_L(std::span<const double> af, std::span<const double> err, double h, const OperatorD& D,
                        double noise_limit = 1e-3)
{
    require(af.size() == err.size(), errc::dimension_mismatch, "af and err differ in length");
    const std::vector<double> K = l_kernel(D, h);
    const int half = static_cast<int>(K.size() / 2);
    const int n = static_cast<int>(af.size());
    LApplied out;
    out.margin = half;
    out.adf.assign(n, std::nullopt);
    out.noise.assign(n, 0.0);
    for (double k : K) {
        out.kernel_l1 += std::abs(k);
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double max_af = 0.0, max_noise = 0.0;
    for (double a : af) {
        max_af = std::max(max_af, std::abs(a));
    }
    for (int i = half; i < n - half; ++i) {
        CompensatedSum acc;
        double noise = 0.0;
        for (int m = -half; m <= half; ++m) {
            const double k = K[m + half];
            acc.add(k * af[i + m]);
            noise += std::abs(k) * (err[i + m] + 4.0 * eps * std::abs(af[i + m]));
        }
        out.adf[i] = acc.value();
        out.noise[i] = noise;
        max_noise = std::max(max_noise, noise);
    }
    if (max_af > 0 && max_noise > noise_limit * max_af) {
        fail(errc::grid_too_coarse, "L-stencil noise " + std::to_string(max_noise / max_af) +
                                        " of max|Af| exceeds " + std::to_string(noise_limit));
    }
    return out;
}

struct TransformGrid {
    SpaceParams space;
    std::string probe;
    QuadratureSpec spec;
    GridSpec grid;
    std::vector<double> s, rf, af, point_err; // point_err is the error of af
    std::vector<std::optional<double>> adf;
    std::vector<double> adf_noise;
    std::optional<OperatorD> op;

    std::size_t size() const noexcept { return s.size(); }
};

inline LApplied apply_L(const TransformGrid& grid, const OperatorD& D, double noise_limit = 1e-3)
{
    return apply_L(grid.af, grid.point_err, grid.grid.h, D, noise_limit);
}

/// Samples Rf and Af on the grid, one independent quadrature per point, and
/// applies L when an operator is given.
inline TransformGrid compute_grid(const TestFunction& f, const SpaceParams& sp, const GridSpec& grid,
                                  const QuadratureSpec& spec, std::optional<OperatorD> op = std::nullopt,
                                  RadonMethod method = RadonMethod::automatic, double noise_limit = 1e-3)
{
    TransformGrid out;
    out.space = sp;
    out.probe = f.name();
    out.spec = spec;
    out.grid = grid;
    const std::size_t n = grid.size();
    out.s.resize(n);
    out.rf.resize(n);
    out.af.resize(n);
    out.point_err.resize(n);
    QuadratureSpec inner = spec;
    inner.threads = 1;
    const double r1 = rho_1(sp);
    parallel_for(n, spec.threads, [&](std::size_t i) {
        const double s = grid.at(i);
        QuadResult r;
        try {
            r = radon(f, sp, s, inner, method);
        } catch (const Error& e) {
            throw Error(e.code(), e.message() + " at s = " + std::to_string(s));
        }
        out.s[i] = s;
        out.rf[i] = r.value;
        out.af[i] = std::exp(r1 * s) * r.value;
        out.point_err[i] = std::exp(r1 * s) * r.err;
    });
    if (op) {
        const LApplied l = apply_L(out.af, out.point_err, grid.h, *op, noise_limit);
        out.adf = l.adf;
        out.adf_noise = l.noise;
        out.op = op;
    } else {
        out.adf.assign(n, std::nullopt);
        out.adf_noise.assign(n, 0.0);
    }
    return out;
}

} // namespace hyperradon

#endif // HYPERRADON_TRANSFORMS_HPP
