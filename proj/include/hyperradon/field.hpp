#ifndef HYPERRADON_FIELD_HPP
#define HYPERRADON_FIELD_HPP

#include <array>
#include <cassert>
#include <span>

#include <Eigen/Dense>

namespace hyperradon::field {

// An element of F is a block of d reals. The real part sits in the last
// slot; imaginary parts precede it in the fixed order (i) for C and
// (i, j, k) for H.

inline void conj(int d, std::span<const double> a, std::span<double> out)
{
    for (int k = 0; k < d - 1; ++k) {
        out[k] = -a[k];
    }
    out[d - 1] = a[d - 1];
}

inline double norm2(int d, std::span<const double> a)
{
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
        s += a[k] * a[k];
    }
    return s;
}

/// out = a * b in F.
inline void mul(int d, std::span<const double> a, std::span<const double> b, std::span<double> out)
{
    switch (d) {
    case 1:
        out[0] = a[0] * b[0];
        return;
    case 2: {
        const double ai = a[0], ar = a[1], bi = b[0], br = b[1];
        out[0] = ar * bi + ai * br;
        out[1] = ar * br - ai * bi;
        return;
    }
    case 4: {
        const double ai = a[0], aj = a[1], ak = a[2], ar = a[3];
        const double bi = b[0], bj = b[1], bk = b[2], br = b[3];
        out[0] = ar * bi + ai * br + aj * bk - ak * bj;
        out[1] = ar * bj - ai * bk + aj * br + ak * bi;
        out[2] = ar * bk + ai * bj - aj * bi + ak * br;
        out[3] = ar * br - ai * bi - aj * bj - ak * bk;
        return;
    }
    default:
        assert(false && "unsupported field dimension");
    }
}

/// Real d x d matrix of left multiplication x -> a x.
inline Eigen::MatrixXd left_mul_matrix(int d, std::span<const double> a)
{
    Eigen::MatrixXd m(d, d);
    std::array<double, 4> e{};
    std::array<double, 4> col{};
    for (int c = 0; c < d; ++c) {
        e.fill(0.0);
        e[c] = 1.0;
        mul(d, a, std::span<const double>(e.data(), d), std::span<double>(col.data(), d));
        for (int r = 0; r < d; ++r) {
            m(r, c) = col[r];
        }
    }
    return m;
}

} // namespace hyperradon::field

#endif // HYPERRADON_FIELD_HPP
