#ifndef HYPERRADON_GEOMETRY_HPP
#define HYPERRADON_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hyperradon/error.hpp"
#include "hyperradon/field.hpp"
#include "hyperradon/params.hpp"

namespace hyperradon {

/// Real-coordinate layout of F^{p+q+2}: F-coordinate j occupies the reals
/// [d j, d j + d), real part last. The first p+1 F-coordinates form the
/// positive block of the form, the remaining q+1 the negative block.
struct Layout {
    int d = 1;
    int p = 0;
    int q = 1;

    Layout() = default;
    explicit Layout(const SpaceParams& sp) : d(sp.d()), p(sp.p), q(sp.q) {}

    int fcoords() const noexcept { return p + q + 2; }
    int size() const noexcept { return d * fcoords(); }
    int positive_size() const noexcept { return d * (p + 1); }
    int block(int j) const noexcept { return d * j; }
    int real_index(int j) const noexcept { return d * j + d - 1; }
    int last() const noexcept { return fcoords() - 1; }
};

/// Point of F^{p+q+2} as d(p+q+2) reals.
class AmbientVector {
public:
    AmbientVector() = default;
    explicit AmbientVector(const Layout& layout) : layout_(layout), coords_(layout.size(), 0.0) {}
    AmbientVector(const Layout& layout, std::vector<double> coords)
        : layout_(layout), coords_(std::move(coords))
    {
        require(static_cast<int>(coords_.size()) == layout_.size(), errc::dimension_mismatch,
                "coordinate count does not match layout");
    }

    /// x0 = (0, ..., 0, 1)
    static AmbientVector base_point(const Layout& layout)
    {
        AmbientVector x(layout);
        x.coords_[layout.real_index(layout.last())] = 1.0;
        return x;
    }

    const Layout& layout() const noexcept { return layout_; }
    std::span<const double> coords() const noexcept { return coords_; }
    std::span<double> coords() noexcept { return coords_; }
    double operator[](std::size_t i) const noexcept { return coords_[i]; }
    double& operator[](std::size_t i) noexcept { return coords_[i]; }

    AmbientVector scaled(double a) const
    {
        AmbientVector out = *this;
        for (double& c : out.coords_) {
            c *= a;
        }
        return out;
    }

private:
    Layout layout_;
    std::vector<double> coords_;
};

/// |x+|^2 over the positive block.
inline double positive_norm2(const Layout& L, std::span<const double> x) noexcept
{
    double s = 0.0;
    for (int i = 0; i < L.positive_size(); ++i) {
        s += x[i] * x[i];
    }
    return s;
}

inline double negative_norm2(const Layout& L, std::span<const double> x) noexcept
{
    double s = 0.0;
    for (int i = L.positive_size(); i < L.size(); ++i) {
        s += x[i] * x[i];
    }
    return s;
}

/// [x, x] = |x+|^2 - |x-|^2
inline double hermitian_self(const Layout& L, std::span<const double> x) noexcept
{
    return positive_norm2(L, x) - negative_norm2(L, x);
}

inline double hermitian_self(const AmbientVector& x) noexcept
{
    return hermitian_self(x.layout(), x.coords());
}

/// Coordinates of n* = N_{u,v,w} in the constrained parametrization. For
/// p < q the free part is u in F^p and the tail v' in F^{q-p}, with
/// v = (-conj(u)^r, v'); for p >= q the free part is v in F^q and the tail
/// u' in F^{p-q}, with u = (-conj(v)^r, u').
struct NilpotentParam {
    std::vector<double> free;
    std::vector<double> tail;
    std::vector<double> w;

    static NilpotentParam zero(const SpaceParams& sp)
    {
        const int d = sp.d();
        NilpotentParam n;
        n.free.assign(d * std::min(sp.p, sp.q), 0.0);
        n.tail.assign(d * std::abs(sp.q - sp.p), 0.0);
        n.w.assign(d - 1, 0.0);
        return n;
    }

    static int box_dim(const SpaceParams& sp)
    {
        const int d = sp.d();
        return d * std::min(sp.p, sp.q) + d * std::abs(sp.q - sp.p) + d - 1;
    }
};

namespace detail {

inline void check_param_dims(const SpaceParams& sp, std::size_t free, std::size_t tail, std::size_t w)
{
    const int d = sp.d();
    require(free == static_cast<std::size_t>(d * std::min(sp.p, sp.q)) &&
                tail == static_cast<std::size_t>(d * std::abs(sp.q - sp.p)) &&
                w == static_cast<std::size_t>(d - 1),
            errc::dimension_mismatch, "nilpotent parameter has wrong dimensions for " + sp.label());
}

} // namespace detail

/// Writes a_s exp(N_{u,v,w}) x0 into out using the closed form
///   (sinh s + e^s (|u|^2-|v|^2)/2 + e^s w, conj(u); -conj(v), cosh s + ...)
/// where the constraint reduces |u|^2 - |v|^2 to |u'|^2 (p >= q) or -|v'|^2 (p < q).
/// No allocation; this is the hot path of the direct Radon integral.
inline void write_orbit_point(const Layout& L, double s, std::span<const double> free,
                              std::span<const double> tail, std::span<const double> w,
                              std::span<double> out) noexcept
{
    const int d = L.d;
    std::fill(out.begin(), out.end(), 0.0);
    double tail2 = 0.0;
    for (double t : tail) {
        tail2 += t * t;
    }
    const double es = std::exp(s);
    const double half_diff = L.p >= L.q ? 0.5 * tail2 : -0.5 * tail2;

    const int first = L.block(0);
    const int last = L.block(L.last());
    out[first + d - 1] = std::sinh(s) + es * half_diff;
    out[last + d - 1] = std::cosh(s) + es * half_diff;
    for (int k = 0; k < d - 1; ++k) {
        out[first + k] = es * w[k];
        out[last + k] = es * w[k];
    }

    // Middle blocks: conj(u) in the positive block, -conj(v) in the negative one.
    const int m = std::min(L.p, L.q);
    auto put_conj = [&](int dst_block, const double* src, double sign) {
        const int b = L.block(dst_block);
        for (int k = 0; k < d - 1; ++k) {
            out[b + k] = -sign * src[k];
        }
        out[b + d - 1] = sign * src[d - 1];
    };
    auto put = [&](int dst_block, const double* src, double sign) {
        const int b = L.block(dst_block);
        for (int k = 0; k < d; ++k) {
            out[b + k] = sign * src[k];
        }
    };
    if (L.p < L.q) {
        // u = free; v = (-conj(u)^r, v')
        for (int k = 0; k < L.p; ++k) {
            put_conj(1 + k, &free[d * k], 1.0);
            // -conj(v_k) = -conj(-conj(u_{p-1-k})) = u_{p-1-k}
            put(1 + L.p + k, &free[d * (L.p - 1 - k)], 1.0);
        }
        for (int k = 0; k < L.q - L.p; ++k) {
            put_conj(1 + L.p + m + k, &tail[d * k], -1.0);
        }
    } else {
        // v = free; u = (-conj(v)^r, u')
        for (int k = 0; k < L.q; ++k) {
            // conj(u_k) = conj(-conj(v_{q-1-k})) = -v_{q-1-k}
            put(1 + k, &free[d * (L.q - 1 - k)], -1.0);
            put_conj(1 + L.p + k, &free[d * k], -1.0);
        }
        for (int k = 0; k < L.p - L.q; ++k) {
            put_conj(1 + m + k, &tail[d * k], 1.0);
        }
    }
}

inline AmbientVector orbit_point(const SpaceParams& sp, double s, const NilpotentParam& n)
{
    detail::check_param_dims(sp, n.free.size(), n.tail.size(), n.w.size());
    const Layout L(sp);
    AmbientVector x(L);
    write_orbit_point(L, s, n.free, n.tail, n.w, x.coords());
    return x;
}

/// Full u in F^p and v in F^q implied by the constrained parameters.
inline std::pair<std::vector<double>, std::vector<double>> expand_uv(const SpaceParams& sp,
                                                                     const NilpotentParam& n)
{
    const int d = sp.d();
    std::vector<double> u(d * sp.p, 0.0), v(d * sp.q, 0.0);
    auto neg_conj_into = [d](const double* src, double* dst) {
        for (int k = 0; k < d - 1; ++k) {
            dst[k] = src[k];
        }
        dst[d - 1] = -src[d - 1];
    };
    if (sp.p < sp.q) {
        std::copy(n.free.begin(), n.free.end(), u.begin());
        for (int k = 0; k < sp.p; ++k) {
            neg_conj_into(&u[d * (sp.p - 1 - k)], &v[d * k]);
        }
        std::copy(n.tail.begin(), n.tail.end(), v.begin() + d * sp.p);
    } else {
        std::copy(n.free.begin(), n.free.end(), v.begin());
        for (int k = 0; k < sp.q; ++k) {
            neg_conj_into(&v[d * (sp.q - 1 - k)], &u[d * k]);
        }
        std::copy(n.tail.begin(), n.tail.end(), u.begin() + d * sp.q);
    }
    return {u, v};
}

/// Real (d n) x (d n) representation of the F-matrix N_{u,v,w}.
inline Eigen::MatrixXd nilpotent_matrix(const SpaceParams& sp, const NilpotentParam& n)
{
    detail::check_param_dims(sp, n.free.size(), n.tail.size(), n.w.size());
    const int d = sp.d();
    const int nf = sp.p + sp.q + 2;
    const auto [u, v] = expand_uv(sp, n);

    std::vector<double> w(d, 0.0);
    std::copy(n.w.begin(), n.w.end(), w.begin());
    std::vector<double> tmp(d);
    auto scaled = [&](std::span<const double> a, double sign) {
        for (int k = 0; k < d; ++k) {
            tmp[k] = sign * a[k];
        }
        return std::span<const double>(tmp);
    };
    auto conj_scaled = [&](std::span<const double> a, double sign) {
        field::conj(d, a, tmp);
        for (int k = 0; k < d; ++k) {
            tmp[k] *= sign;
        }
        return std::span<const double>(tmp);
    };

    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(d * nf, d * nf);
    auto set = [&](int r, int c, std::span<const double> a) {
        N.block(d * r, d * c, d, d) = field::left_mul_matrix(d, a);
    };
    const int last = nf - 1;
    for (int row : {0, last}) {
        set(row, 0, scaled(w, -1.0));
        set(row, last, scaled(w, 1.0));
        for (int k = 0; k < sp.p; ++k) {
            set(row, 1 + k, scaled(std::span<const double>(&u[d * k], d), 1.0));
        }
        for (int k = 0; k < sp.q; ++k) {
            set(row, 1 + sp.p + k, scaled(std::span<const double>(&v[d * k], d), 1.0));
        }
    }
    for (int k = 0; k < sp.p; ++k) {
        const std::span<const double> uk(&u[d * k], d);
        set(1 + k, 0, conj_scaled(uk, -1.0));
        set(1 + k, last, conj_scaled(uk, 1.0));
    }
    for (int k = 0; k < sp.q; ++k) {
        const std::span<const double> vk(&v[d * k], d);
        set(1 + sp.p + k, 0, conj_scaled(vk, 1.0));
        set(1 + sp.p + k, last, conj_scaled(vk, -1.0));
    }
    return N;
}

/// exp(X_s): cosh s / sinh s in the corner entries (1,1), (1,n), (n,1), (n,n).
inline Eigen::MatrixXd a_matrix(const SpaceParams& sp, double s)
{
    const int d = sp.d();
    const int nf = sp.p + sp.q + 2;
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(d * nf, d * nf);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
    const int last = nf - 1;
    A.block(0, 0, d, d) = std::cosh(s) * I;
    A.block(d * last, d * last, d, d) = std::cosh(s) * I;
    A.block(0, d * last, d, d) = std::sinh(s) * I;
    A.block(d * last, 0, d, d) = std::sinh(s) * I;
    return A;
}

/// exp(X_s) (I + N + N^2/2) as a real matrix. Test oracle for orbit_point.
inline Eigen::MatrixXd matrix_oracle(const SpaceParams& sp, double s, const NilpotentParam& n)
{
    const Eigen::MatrixXd N = nilpotent_matrix(sp, n);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(N.rows(), N.cols());
    return a_matrix(sp, s) * (I + N + 0.5 * N * N);
}

/// F-valued form [x, y] = sum_j sign_j conj(x_j) y_j, written into out (d
/// reals). Matrices act on the left and scalars on the right, so this is the
/// ordering the group preserves; its real part is symmetric in the order.
inline void hermitian_form(const Layout& L, std::span<const double> x, std::span<const double> y,
                           std::span<double> out)
{
    const int d = L.d;
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> xc(d), prod(d);
    for (int j = 0; j < L.fcoords(); ++j) {
        field::conj(d, x.subspan(L.block(j), d), xc);
        field::mul(d, xc, y.subspan(L.block(j), d), prod);
        const double sign = j <= L.p ? 1.0 : -1.0;
        for (int k = 0; k < d; ++k) {
            out[k] += sign * prod[k];
        }
    }
}

/// K-radial coordinate s >= 0 with x ~ k a_s x0.
inline double radial_coordinate(const Layout& L, std::span<const double> x)
{
    const double h = hermitian_self(L, x);
    require(h < 0, errc::non_timelike, "radial coordinate needs [x,x] < 0");
    const double c = std::sqrt(negative_norm2(L, x) / -h);
    return std::acosh(std::max(1.0, c));
}

inline double radial_coordinate(const AmbientVector& x) { return radial_coordinate(x.layout(), x.coords()); }

inline AmbientVector normalize(const AmbientVector& x)
{
    const double h = hermitian_self(x);
    require(h < 0, errc::non_timelike, "normalize needs [x,x] < 0");
    return x.scaled(1.0 / std::sqrt(-h));
}

} // namespace hyperradon

#endif // HYPERRADON_GEOMETRY_HPP
