#ifndef HYPERRADON_JET_HPP
#define HYPERRADON_JET_HPP

#include <algorithm>
#include <array>
#include <cmath>

#include "hyperradon/error.hpp"

namespace hyperradon {

/// Truncated Taylor series c_0 + c_1 e + ... + c_n e^n of a function about a
/// point, with c_k = f^(k)/k!. Arithmetic on jets propagates derivatives
/// exactly, which is how radial profiles supply their higher derivatives.
class Jet {
public:
    static constexpr int max_order = 16;

    Jet() = default;
    explicit Jet(int order) : order_(order)
    {
        if (order < 0 || order > max_order) [[unlikely]] {
            fail(errc::depth_exceeded, "jet order " + std::to_string(order) + " exceeds " + std::to_string(max_order));
        }
    }

    static Jet constant(double c, int order)
    {
        Jet j(order);
        j.c_[0] = c;
        return j;
    }

    /// The identity function about x0.
    static Jet variable(double x0, int order)
    {
        Jet j(order);
        j.c_[0] = x0;
        if (order >= 1) {
            j.c_[1] = 1.0;
        }
        return j;
    }

    int order() const noexcept { return order_; }
    double operator[](int k) const noexcept { return c_[k]; }
    double& operator[](int k) noexcept { return c_[k]; }
    double value() const noexcept { return c_[0]; }

    /// k-th derivative at the expansion point.
    double derivative(int k) const noexcept
    {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) {
            f *= i;
        }
        return c_[k] * f;
    }

    /// Jet of f' (one order lower).
    Jet differentiate() const
    {
        require(order_ >= 1, errc::depth_exceeded, "cannot differentiate an order-0 jet");
        Jet out(order_ - 1);
        for (int k = 0; k < order_; ++k) {
            out.c_[k] = (k + 1) * c_[k + 1];
        }
        return out;
    }

    Jet truncated(int order) const
    {
        Jet out(std::min(order, order_));
        for (int k = 0; k <= out.order_; ++k) {
            out.c_[k] = c_[k];
        }
        return out;
    }

    friend Jet operator+(const Jet& a, const Jet& b)
    {
        Jet out(std::min(a.order_, b.order_));
        for (int k = 0; k <= out.order_; ++k) {
            out.c_[k] = a.c_[k] + b.c_[k];
        }
        return out;
    }

    friend Jet operator-(const Jet& a, const Jet& b)
    {
        Jet out(std::min(a.order_, b.order_));
        for (int k = 0; k <= out.order_; ++k) {
            out.c_[k] = a.c_[k] - b.c_[k];
        }
        return out;
    }

    friend Jet operator*(const Jet& a, const Jet& b)
    {
        Jet out(std::min(a.order_, b.order_));
        for (int k = 0; k <= out.order_; ++k) {
            double s = 0.0;
            for (int i = 0; i <= k; ++i) {
                s += a.c_[i] * b.c_[k - i];
            }
            out.c_[k] = s;
        }
        return out;
    }

    friend Jet operator*(double a, Jet b)
    {
        for (int k = 0; k <= b.order_; ++k) {
            b.c_[k] *= a;
        }
        return b;
    }

    friend Jet operator+(double a, Jet b)
    {
        b.c_[0] += a;
        return b;
    }

    friend Jet operator-(double a, const Jet& b) { return a + (-1.0) * b; }

private:
    int order_ = 0;
    std::array<double, max_order + 1> c_{};
};

inline Jet exp(const Jet& a)
{
    // f' = a' f, solved coefficient by coefficient.
    Jet out(a.order());
    out[0] = std::exp(a[0]);
    for (int k = 1; k <= a.order(); ++k) {
        double s = 0.0;
        for (int i = 1; i <= k; ++i) {
            s += i * a[i] * out[k - i];
        }
        out[k] = s / k;
    }
    return out;
}

inline Jet reciprocal(const Jet& a)
{
    require(a[0] != 0.0, errc::domain_error, "reciprocal of a jet with zero value");
    Jet out(a.order());
    out[0] = 1.0 / a[0];
    for (int k = 1; k <= a.order(); ++k) {
        double s = 0.0;
        for (int i = 1; i <= k; ++i) {
            s += a[i] * out[k - i];
        }
        out[k] = -s / a[0];
    }
    return out;
}

inline Jet sinh(const Jet& a) { return 0.5 * (exp(a) - exp(-1.0 * a)); }
inline Jet cosh(const Jet& a) { return 0.5 * (exp(a) + exp(-1.0 * a)); }

/// Composition g(inner) where outer holds the Taylor coefficients of g about
/// inner.value().
inline Jet compose(const Jet& outer, const Jet& inner)
{
    const int n = std::min(outer.order(), inner.order());
    Jet delta = inner.truncated(n);
    delta[0] = 0.0;
    // Horner in the nilpotent increment.
    Jet acc = Jet::constant(outer[n], n);
    for (int k = n - 1; k >= 0; --k) {
        acc = acc * delta;
        acc[0] += outer[k];
    }
    return acc;
}

} // namespace hyperradon

#endif // HYPERRADON_JET_HPP
