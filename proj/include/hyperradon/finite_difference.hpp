#ifndef HYPERRADON_FINITE_DIFFERENCE_HPP
#define HYPERRADON_FINITE_DIFFERENCE_HPP

#include <span>
#include <vector>

#include "hyperradon/error.hpp"

namespace hyperradon {

/// Fornberg's recursion: weights c[k][i] such that
/// f^(k)(x0) ~ sum_i c[k][i] f(x_i), for k = 0..max_order.
inline std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x, int max_order)
{
    const int n = static_cast<int>(x.size());
    require(n > max_order, errc::invalid_argument, "stencil too small for the derivative order");
    std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(n, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, max_order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) {
                c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

/// Weights of the centred (2m+1)-point stencil for the k-th derivative on
/// unit spacing, offsets -m..m.
inline std::vector<double> central_weights(int m, int k)
{
    std::vector<double> x(2 * m + 1);
    for (int i = 0; i < 2 * m + 1; ++i) {
        x[i] = i - m;
    }
    return fornberg_weights(0.0, x, k)[k];
}

/// Discrete convolution of two centred kernels.
inline std::vector<double> convolve(std::span<const double> a, std::span<const double> b)
{
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

} // namespace hyperradon

#endif // HYPERRADON_FINITE_DIFFERENCE_HPP
