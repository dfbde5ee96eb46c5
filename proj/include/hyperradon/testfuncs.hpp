#ifndef HYPERRADON_TESTFUNCS_HPP
#define HYPERRADON_TESTFUNCS_HPP

#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>

#include "hyperradon/error.hpp"
#include "hyperradon/geometry.hpp"
#include "hyperradon/jet.hpp"
#include "hyperradon/params.hpp"

namespace hyperradon {

enum class Invariance { k_invariant, generic, odd };

inline std::string to_string(Invariance v)
{
    switch (v) {
    case Invariance::k_invariant: return "K_INVARIANT";
    case Invariance::generic: return "GENERIC";
    case Invariance::odd: return "ODD";
    }
    return "?";
}

struct Decay {
    enum class Kind { super_schwartz, compact, schwartz };
    Kind kind = Kind::super_schwartz;
    double radius = 0.0; // only for compact

    static Decay super_schwartz() { return {Kind::super_schwartz, 0.0}; }
    static Decay compact(double r) { return {Kind::compact, r}; }
};

/// y = |x+|^2 / -[x,x], which equals sinh^2 of the radial coordinate.
inline double radial_y(const Layout& L, std::span<const double> x)
{
    const double pos = positive_norm2(L, x);
    const double h = pos - negative_norm2(L, x);
    require(h < 0, errc::non_timelike, "test functions live on the cone [x,x] < 0");
    return pos / -h;
}

/// Homogeneous degree-0 function on the cone [x,x] < 0.
///
/// K-invariant probes also carry their profile g with f = g(y); the jet of g
/// about any y gives every radial derivative without finite differences.
class TestFunction {
public:
    using EvalFn = std::function<double(std::span<const double>)>;
    using ProfileFn = std::function<Jet(const Jet& y)>;

    TestFunction(std::string name, const SpaceParams& sp, EvalFn eval, Invariance inv, Decay decay,
                 bool projective_ok, ProfileFn profile = {})
        : name_(std::move(name)), space_(sp), layout_(sp), eval_(std::move(eval)), invariance_(inv),
          decay_(decay), projective_ok_(projective_ok), profile_(std::move(profile))
    {
    }

    double operator()(std::span<const double> x) const { return eval_(x); }

    double operator()(const AmbientVector& x) const
    {
        require(x.layout().size() == layout_.size(), errc::dimension_mismatch,
                "point does not belong to " + space_.label());
        return eval_(x.coords());
    }

    const std::string& name() const noexcept { return name_; }
    const SpaceParams& space() const noexcept { return space_; }
    const Layout& layout() const noexcept { return layout_; }
    Invariance invariance() const noexcept { return invariance_; }
    Decay decay() const noexcept { return decay_; }
    bool projective_ok() const noexcept { return projective_ok_; }
    bool has_profile() const noexcept { return static_cast<bool>(profile_); }
    const ProfileFn& profile() const noexcept { return profile_; }

    /// Jet of g about y.
    Jet profile_y(double y, int order) const
    {
        require(has_profile(), errc::missing_profile, name_ + " has no radial profile");
        return profile_(Jet::variable(y, order));
    }

    /// Jet of phi(s) = g(sinh^2 s) about s.
    Jet profile_s(double s, int order) const
    {
        require(has_profile(), errc::missing_profile, name_ + " has no radial profile");
        const Jet sh = sinh(Jet::variable(s, order));
        return profile_(sh * sh);
    }

private:
    std::string name_;
    SpaceParams space_;
    Layout layout_;
    EvalFn eval_;
    Invariance invariance_;
    Decay decay_;
    bool projective_ok_;
    ProfileFn profile_;
};

namespace detail {

inline int resolve_index(int i, int n, const char* what)
{
    const int r = i < 0 ? n + i : i;
    require(r >= 0 && r < n, errc::invalid_argument,
            std::string(what) + " index " + std::to_string(i) + " out of range");
    return r;
}

} // namespace detail

inline TestFunction zero_function(const SpaceParams& sp)
{
    return TestFunction(
        "zero", sp, [](std::span<const double>) { return 0.0; }, Invariance::k_invariant,
        Decay::compact(0.0), true, [](const Jet& y) { return 0.0 * y; });
}

/// exp(-beta y)
inline TestFunction gaussian_radial(const SpaceParams& sp, double beta = 1.0)
{
    require(beta > 0, errc::invalid_argument, "gaussian beta must be positive");
    const Layout L(sp);
    return TestFunction(
        "gaussian", sp, [L, beta](std::span<const double> x) { return std::exp(-beta * radial_y(L, x)); },
        Invariance::k_invariant, Decay::super_schwartz(), true,
        [beta](const Jet& y) { return exp(-beta * y); });
}

/// chi(y / sinh^2 R) with chi(t) = exp(1 - 1/(1-t)) on t < 1, so the
/// support is exactly the ball of radius R.
inline TestFunction bump_radial(const SpaceParams& sp, double radius = 1.0)
{
    require(radius > 0, errc::invalid_argument, "bump radius must be positive");
    const Layout L(sp);
    const double scale = 1.0 / (std::sinh(radius) * std::sinh(radius));
    auto chi = [](double t) { return t < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t)) : 0.0; };
    return TestFunction(
        "bump", sp, [L, scale, chi](std::span<const double> x) { return chi(radial_y(L, x) * scale); },
        Invariance::k_invariant, Decay::compact(radius), true, [scale](const Jet& y) {
            const Jet t = scale * y;
            if (t.value() >= 1.0) {
                return 0.0 * y;
            }
            return exp(1.0 - reciprocal(1.0 - t));
        });
}

/// Re(z_i conj(z_j)) / -[x,x] times the gaussian. Indices are F-coordinates;
/// negative values count from the end.
inline TestFunction angular_modulated(const SpaceParams& sp, double beta = 1.0, int i = 0, int j = -1)
{
    require(beta > 0, errc::invalid_argument, "angular beta must be positive");
    const Layout L(sp);
    const int a = detail::resolve_index(i, L.fcoords(), "angular");
    const int b = detail::resolve_index(j, L.fcoords(), "angular");
    require(a != b, errc::invalid_argument, "angular probe needs i != j");
    return TestFunction(
        "angular", sp,
        [L, beta, a, b](std::span<const double> x) {
            const double pos = positive_norm2(L, x);
            const double h = pos - negative_norm2(L, x);
            require(h < 0, errc::non_timelike, "test functions live on the cone [x,x] < 0");
            // Re(a conj b) is the real dot product of the two blocks.
            double re = 0.0;
            for (int k = 0; k < L.d; ++k) {
                re += x[L.block(a) + k] * x[L.block(b) + k];
            }
            return re / -h * std::exp(-beta * pos / -h);
        },
        Invariance::generic, Decay::super_schwartz(), true);
}

/// x_i / sqrt(-[x,x]) times the gaussian, i a real-coordinate index
/// (negative counts from the end). Odd under x -> -x, so it only makes sense
/// on the non-projective real spaces.
inline TestFunction odd_modulated(const SpaceParams& sp, double beta = 1.0, int i = -1)
{
    require(sp.variant == Variant::real_nonprojective, errc::invalid_argument,
            "odd probe needs a non-projective space, got " + sp.label());
    require(beta > 0, errc::invalid_argument, "odd beta must be positive");
    const Layout L(sp);
    const int a = detail::resolve_index(i, L.size(), "odd");
    return TestFunction(
        "odd", sp,
        [L, beta, a](std::span<const double> x) {
            const double pos = positive_norm2(L, x);
            const double h = pos - negative_norm2(L, x);
            require(h < 0, errc::non_timelike, "test functions live on the cone [x,x] < 0");
            return x[a] / std::sqrt(-h) * std::exp(-beta * pos / -h);
        },
        Invariance::odd, Decay::super_schwartz(), false);
}

/// Probe selection by name, as used by the config layer.
struct ProbeSpec {
    std::string name = "gaussian";
    double beta = 1.0;
    double radius = 1.0;
    int i = 0;
    int j = -1;
    int index = -1; // odd probe, real coordinate
};

inline TestFunction make_probe(const SpaceParams& sp, const ProbeSpec& ps)
{
    if (ps.name == "gaussian") {
        return gaussian_radial(sp, ps.beta);
    }
    if (ps.name == "bump") {
        return bump_radial(sp, ps.radius);
    }
    if (ps.name == "angular") {
        return angular_modulated(sp, ps.beta, ps.i, ps.j);
    }
    if (ps.name == "odd") {
        return odd_modulated(sp, ps.beta, ps.index);
    }
    if (ps.name == "zero") {
        return zero_function(sp);
    }
    fail(errc::invalid_argument, "unknown probe '" + ps.name + "'");
}

} // namespace hyperradon

#endif // HYPERRADON_TESTFUNCS_HPP
