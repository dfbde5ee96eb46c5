#ifndef HYPERRADON_LAPLACIAN_HPP
#define HYPERRADON_LAPLACIAN_HPP

#include <cmath>
#include <string>

#include "hyperradon/error.hpp"
#include "hyperradon/jet.hpp"
#include "hyperradon/params.hpp"
#include "hyperradon/testfuncs.hpp"

namespace hyperradon {

/// Radial part d^2/ds^2 + A(s) d/ds of the Laplace-Beltrami operator with
/// A(s) = dp coth s + dq tanh s + 2(d-1) coth 2s.
struct RadialOperator {
    SpaceParams space;

    explicit RadialOperator(const SpaceParams& sp) : space(sp) {}

    double A(double s) const
    {
        const int d = space.d();
        return d * space.p / std::tanh(s) + d * space.q * std::tanh(s) + 2.0 * (d - 1) / std::tanh(2.0 * s);
    }

    /// Same coefficient via 2 coth 2s = coth s + tanh s.
    double A_split(double s) const
    {
        const int d = space.d();
        return (d * space.p + d - 1) / std::tanh(s) + (d * space.q + d - 1) * std::tanh(s);
    }

    double shift() const { return rho_q(space) * rho_q(space); }
};

/// Delta on a profile g(y), y = sinh^2 s, where it becomes
///   4y(1+y) g'' + (2d(p+1) + 4(rho_q+1) y) g',
/// polynomial in y, so there is no pole at the origin. g is a jet about y0;
/// the result is two orders lower.
inline Jet delta_jet(const SpaceParams& sp, double y0, const Jet& g)
{
    require(g.order() >= 2, errc::depth_exceeded, "Delta needs a jet of order >= 2");
    const int n = g.order() - 2;
    const Jet y = Jet::variable(y0, n);
    const Jet g1 = g.differentiate().truncated(n);
    const Jet g2 = g.differentiate().differentiate();
    const double d = sp.d();
    const Jet a = 4.0 * (y * (1.0 + y));
    const Jet b = 2.0 * d * (sp.p + 1) + (4.0 * (rho_q(sp) + 1.0)) * y;
    return a * g2 + b * g1;
}

/// Jet of D g about y0, where D = Delta_rho prod (Delta_rho - lambda_j^2).
/// An empty lambda list and with_rho = false gives plain Delta.
inline Jet operator_jet(const SpaceParams& sp, double y0, Jet g, const std::vector<double>& lambdas, bool with_rho = true)
{
    const double shift = with_rho ? rho_q(sp) * rho_q(sp) : 0.0;
    for (auto it = lambdas.rbegin(); it != lambdas.rend(); ++it) {
        const Jet dg = delta_jet(sp, y0, g);
        g = dg + (shift - (*it) * (*it)) * g.truncated(dg.order());
    }
    const Jet dg = delta_jet(sp, y0, g);
    return dg + shift * g.truncated(dg.order());
}

inline double delta_radial(const TestFunction& f, double s)
{
    require(f.has_profile(), errc::missing_profile, f.name() + " has no radial profile");
    const double y0 = std::sinh(s) * std::sinh(s);
    return operator_jet(f.space(), y0, f.profile_y(y0, 2), {}, false).value();
}

inline double delta_rho_radial(const TestFunction& f, double s)
{
    require(f.has_profile(), errc::missing_profile, f.name() + " has no radial profile");
    const double y0 = std::sinh(s) * std::sinh(s);
    return operator_jet(f.space(), y0, f.profile_y(y0, 2), {}, true).value();
}

inline double apply_D_radial(const TestFunction& f, double s, const OperatorD& D)
{
    require(f.has_profile(), errc::missing_profile, f.name() + " has no radial profile");
    const int order = 2 * (D.order() + 1);
    require(order <= Jet::max_order, errc::depth_exceeded, "D needs more radial derivatives than supported");
    const double y0 = std::sinh(s) * std::sinh(s);
    return operator_jet(f.space(), y0, f.profile_y(y0, order), D.lambdas, true).value();
}

/// The K-invariant function D f (or Delta f with plain = true) as a probe of
/// its own, so that its Radon transform can be computed directly.
inline TestFunction operator_probe(const TestFunction& f, const std::vector<double>& lambdas, bool plain = false)
{
    require(f.has_profile(), errc::missing_profile, f.name() + " has no radial profile");
    const SpaceParams sp = f.space();
    const int depth = plain ? 2 : 2 * (static_cast<int>(lambdas.size()) + 1);
    require(depth <= Jet::max_order, errc::depth_exceeded, "operator too deep for the jet order");
    const Layout L(sp);
    const TestFunction::ProfileFn g = f.profile();
    auto at = [sp, g, lambdas, plain, depth](double y0, int extra) {
        const Jet gj = g(Jet::variable(y0, depth + extra));
        return plain ? operator_jet(sp, y0, gj, {}, false) : operator_jet(sp, y0, gj, lambdas, true);
    };
    std::string name = (plain ? "Delta(" : "D(") + f.name() + ")";
    const Decay decay = f.decay();
    auto value = [L, sp, g, plain, at](std::span<const double> x) {
        const double y0 = radial_y(L, x);
        if (!plain) {
            return at(y0, 0).value();
        }
        // Delta g at y0 from g' and g'' alone.
        const Jet gj = g(Jet::variable(y0, 2));
        const double d = sp.d();
        return 8.0 * y0 * (1.0 + y0) * gj[2] + (2.0 * d * (sp.p + 1) + 4.0 * (rho_q(sp) + 1.0) * y0) * gj[1];
    };
    return TestFunction(
        name, sp, value,
        Invariance::k_invariant, decay, true, [at, depth](const Jet& y) {
            const int extra = std::min(y.order(), Jet::max_order - depth);
            return compose(at(y.value(), extra), y);
        });
}

} // namespace hyperradon

#endif // HYPERRADON_LAPLACIAN_HPP
