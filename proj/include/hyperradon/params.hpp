#ifndef HYPERRADON_PARAMS_HPP
#define HYPERRADON_PARAMS_HPP

#include <algorithm>
#include <compare>
#include <cstdlib>
#include <string>
#include <vector>

#include "hyperradon/error.hpp"

namespace hyperradon {

/// Real, complex or quaternionic scalars; the enumerator value is d = dim_R F.
enum class FieldKind : int { real = 1, complex = 2, quaternion = 4 };

enum class Variant { projective, real_nonprojective };

constexpr int dim(FieldKind f) noexcept { return static_cast<int>(f); }

inline std::string to_string(FieldKind f)
{
    switch (f) {
    case FieldKind::real: return "R";
    case FieldKind::complex: return "C";
    case FieldKind::quaternion: return "H";
    }
    return "?";
}

inline std::string to_string(Variant v)
{
    return v == Variant::projective ? "projective" : "nonprojective";
}

/// A half-integer n/2 held exactly. All rho-factors and series parameters
/// of the spaces are of this form.
struct Half {
    int twice = 0;

    static constexpr Half of_int(int n) noexcept { return Half{2 * n}; }
    constexpr double value() const noexcept { return twice / 2.0; }
    constexpr bool is_integer() const noexcept { return twice % 2 == 0; }

    friend constexpr Half operator+(Half a, Half b) noexcept { return Half{a.twice + b.twice}; }
    friend constexpr Half operator-(Half a, Half b) noexcept { return Half{a.twice - b.twice}; }
    friend constexpr auto operator<=>(Half, Half) = default;
};

inline std::string to_string(Half h)
{
    if (h.is_integer()) {
        return std::to_string(h.twice / 2);
    }
    return std::to_string(h.twice) + "/2";
}

/// Parameters (F, p, q) of X(p+1, q+1; F), plus the projective / real
/// non-projective variant.
struct SpaceParams {
    FieldKind field = FieldKind::real;
    int p = 0;
    int q = 1;
    Variant variant = Variant::projective;

    SpaceParams() = default;
    SpaceParams(FieldKind f, int p_, int q_, Variant v = Variant::projective)
        : field(f), p(p_), q(q_), variant(v)
    {
        validate();
    }

    void validate() const
    {
        require(p >= 0, errc::invalid_argument, "p must be >= 0");
        require(q >= 1, errc::invalid_argument, "q must be >= 1");
        require(variant == Variant::projective || field == FieldKind::real, errc::invalid_argument,
                "the non-projective variant exists only over R");
    }

    int d() const noexcept { return dim(field); }
    /// d(q - p): the quantity that selects the asymptotic regime.
    int codim() const noexcept { return d() * (q - p); }
    /// Number of real ambient coordinates, d(p+q+2).
    int ambient_dim() const noexcept { return d() * (p + q + 2); }

    std::string label() const
    {
        std::string s = "(" + to_string(field) + "," + std::to_string(p) + "," + std::to_string(q);
        if (variant == Variant::real_nonprojective) {
            s += ",nonprojective";
        }
        return s + ")";
    }

    friend bool operator==(const SpaceParams&, const SpaceParams&) = default;
};

inline Half rho_q_half(const SpaceParams& sp) noexcept
{
    const int d = sp.d();
    return Half{d * sp.p + d * sp.q + 2 * (d - 1)};
}

inline Half rho_1_half(const SpaceParams& sp) noexcept
{
    const int d = sp.d();
    return Half{std::abs(d * sp.p - d * sp.q) + 2 * (d - 1)};
}

/// rho_q = (dp + dq + 2(d-1)) / 2
inline double rho_q(const SpaceParams& sp) noexcept { return rho_q_half(sp).value(); }

/// rho_1 = (|dp - dq| + 2(d-1)) / 2
inline double rho_1(const SpaceParams& sp) noexcept { return rho_1_half(sp).value(); }

struct K0Eps {
    int k0 = 0;
    Half eps;
};

/// k0 is the largest integer below d(q-p)/2 and eps the remainder, so eps is 1/2 or 1.
inline K0Eps k0_eps(const SpaceParams& sp)
{
    const int twice = sp.codim();
    require(twice >= 1, errc::invalid_argument,
            "k0/eps need d(q-p) >= 1; " + sp.label() + " is in the support regime");
    const int k0 = (twice - 1) / 2;
    return K0Eps{k0, Half{twice - 2 * k0}};
}

struct SeriesParam {
    Half lambda;
    Half mu;
    bool spherical = false;
    bool cuspidal = true;
};

/// Discrete series parameters lambda <= lambda_max, ascending.
///
/// General branch (q > 1 or d > 1): lambda = d(q-p)/2 - 1 + mu, mu even. For
/// q = d = 1 the condition is |lambda| + rho_q even and only positive lambda
/// are listed. The non-projective real spaces add the exceptional members
/// with odd negative mu, which are non-cuspidal but not spherical.
inline std::vector<SeriesParam> discrete_series(const SpaceParams& sp, double lambda_max = 20.0)
{
    require(lambda_max > 0, errc::invalid_argument, "lambda_max must be positive");
    std::vector<SeriesParam> out;
    const int limit = static_cast<int>(2.0 * lambda_max + 1e-9);

    if (sp.q == 1 && sp.d() == 1) {
        const int rq = rho_q_half(sp).twice;
        for (int twice = 1; twice <= limit; ++twice) {
            if ((twice + rq) % 4 == 0) {
                SeriesParam s;
                s.lambda = Half{twice};
                s.mu = Half{twice + rq};
                out.push_back(s);
            }
        }
        return out;
    }

    const Half base{sp.codim() - 2};
    const bool nonproj = sp.variant == Variant::real_nonprojective;
    // lambda > 0 bounds mu from below, lambda <= lambda_max from above.
    const int mu_min = -(base.twice / 2) - 2;
    const int mu_max = (limit - base.twice) / 2 + 2;
    for (int mu = mu_min; mu <= mu_max; ++mu) {
        const bool even = mu % 2 == 0;
        if (!even && !(nonproj && mu < 0)) {
            continue;
        }
        const Half lambda = base + Half::of_int(mu);
        if (lambda.twice <= 0 || lambda.twice > limit) {
            continue;
        }
        SeriesParam s;
        s.lambda = lambda;
        s.mu = Half::of_int(mu);
        s.spherical = even && mu <= 0;
        s.cuspidal = mu > 0;
        out.push_back(s);
    }
    std::sort(out.begin(), out.end(),
              [](const SeriesParam& a, const SeriesParam& b) { return a.lambda < b.lambda; });
    return out;
}

/// The non-cuspidal parameters lambda_1 > ... > lambda_r, read off the
/// exponents d(q-p)/2 - 1 - j of the Abel-transform expansion. Only even j
/// contribute on projective spaces.
inline std::vector<Half> noncuspidal_half(const SpaceParams& sp)
{
    std::vector<Half> out;
    if (sp.codim() <= 2) {
        return out;
    }
    const int k0 = k0_eps(sp).k0;
    const Half base{sp.codim() - 2};
    for (int j = 0; j <= k0 - 1; ++j) {
        if (sp.variant == Variant::projective && j % 2 != 0) {
            continue;
        }
        const Half lambda = base - Half::of_int(j);
        if (lambda.twice > 0) {
            out.push_back(lambda);
        }
    }
    return out;
}

inline std::vector<double> noncuspidal(const SpaceParams& sp)
{
    std::vector<double> out;
    for (Half h : noncuspidal_half(sp)) {
        out.push_back(h.value());
    }
    return out;
}

/// D = Delta_rho (Delta_rho - lambda_1^2) ... (Delta_rho - lambda_r^2) and
/// its image L(xi) = xi prod_j (xi - lambda_j^2) on the Abel side.
struct OperatorD {
    std::vector<double> lambdas;
    /// Coefficients of L in ascending powers of xi.
    std::vector<double> image_poly;

    int order() const noexcept { return static_cast<int>(lambdas.size()); }

    double L(double xi) const noexcept
    {
        double acc = 0.0;
        for (auto it = image_poly.rbegin(); it != image_poly.rend(); ++it) {
            acc = acc * xi + *it;
        }
        return acc;
    }
};

inline OperatorD operator_from_lambdas(std::vector<double> lambdas)
{
    OperatorD op;
    op.lambdas = std::move(lambdas);
    op.image_poly = {0.0, 1.0};
    for (double lam : op.lambdas) {
        const double root = lam * lam;
        std::vector<double> next(op.image_poly.size() + 1, 0.0);
        for (std::size_t k = 0; k < op.image_poly.size(); ++k) {
            next[k + 1] += op.image_poly[k];
            next[k] -= root * op.image_poly[k];
        }
        op.image_poly = std::move(next);
    }
    return op;
}

inline OperatorD build_D(const SpaceParams& sp)
{
    require(sp.codim() > 1, errc::invalid_argument,
            "D is defined for d(q-p) > 1; " + sp.label() + " needs no correction");
    return operator_from_lambdas(noncuspidal(sp));
}

} // namespace hyperradon

#endif // HYPERRADON_PARAMS_HPP
