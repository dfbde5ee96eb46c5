#ifndef HYPERRADON_ANALYSIS_HPP
#define HYPERRADON_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperradon/error.hpp"
#include "hyperradon/transforms.hpp"

namespace hyperradon {

struct FitResult {
    std::vector<double> exponents;
    std::vector<double> coefficients;
    double residual = 0.0; // RMS misfit over the window
    double condition = 1.0;
    int points = 0;
};

/// Least-squares fit of values against sum_k c_k e^{mu_k s} on [s_lo, s_hi].
/// Columns are normalised before the solve; IllConditioned when the scaled
/// design matrix still has condition number above cond_limit.
inline FitResult fit_exponents(std::span<const double> s, std::span<const double> values,
                               const std::vector<double>& exponents, double s_lo, double s_hi,
                               double cond_limit = 1e12)
{
    require(s.size() == values.size(), errc::dimension_mismatch, "s and values differ in length");
    require(s_hi > s_lo, errc::invalid_argument, "empty fit window");
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        for (std::size_t j = i + 1; j < exponents.size(); ++j) {
            require(exponents[i] != exponents[j], errc::invalid_argument, "fit exponents must be distinct");
        }
    }
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] >= s_lo - 1e-12 && s[i] <= s_hi + 1e-12) {
            idx.push_back(i);
        }
    }
    require(!idx.empty(), errc::invalid_argument, "fit window contains no samples");
    FitResult out;
    out.exponents = exponents;
    out.points = static_cast<int>(idx.size());
    const int n = static_cast<int>(idx.size());
    const int k = static_cast<int>(exponents.size());
    Eigen::VectorXd b(n);
    for (int r = 0; r < n; ++r) {
        b(r) = values[idx[r]];
    }
    if (k == 0) {
        out.residual = std::sqrt(b.squaredNorm() / n);
        return out;
    }
    require(n >= k, errc::ill_conditioned, "fewer samples than exponents");
    Eigen::MatrixXd A(n, k);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < k; ++c) {
            A(r, c) = std::exp(exponents[c] * s[idx[r]]);
        }
    }
    Eigen::VectorXd norms = A.colwise().norm();
    for (int c = 0; c < k; ++c) {
        A.col(c) /= norms(c);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    out.condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    require(out.condition <= cond_limit, errc::ill_conditioned,
            "fit window too short to separate the exponents (condition " + std::to_string(out.condition) + ")");
    const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
    for (int c = 0; c < k; ++c) {
        out.coefficients.push_back(x(c) / norms(c));
    }
    out.residual = std::sqrt((A * x - b).squaredNorm() / n);
    return out;
}

inline FitResult fit_exponents(const TransformGrid& grid, const std::vector<double>& exponents, double s_lo,
                               double s_hi)
{
    return fit_exponents(grid.s, grid.af, exponents, s_lo, s_hi);
}

struct Sample {
    double s = 0.0;
    double value = 0.0;
    double err = 0.0;
};

struct DecayVerdict {
    int N = 0;
    bool pass = false;
    std::string reason;
    double noise_s = 0.0;      // s from which noise dominates
    double decay_factor = 0.0; // weighted signal ratio across the certified stretch
};

struct DecayCheck {
    std::vector<DecayVerdict> verdicts;
    std::vector<int> certified; // consecutive from 0
    double noise_floor = 0.0;

    int max_certified() const { return certified.empty() ? -1 : certified.back(); }
    bool certifies(int N) const { return max_certified() >= N; }
};

/// Operational test of rapid decay on a tail ordered outward (|s| growing).
///
/// For each N the weighted signal W = (1+|s|)^N |value| must peak at the
/// window start (within error bars) up to the first sample where |value|
/// drops under its error bar, and its outer envelope max_{j >= i} W_j must
/// fall by a factor >= 2 over that stretch. Sign changes of the signal are
/// allowed; the envelope carries the monotonicity. Past the crossing the
/// value must stay within 4 error bars, and the weighted noise at the
/// crossing must lie below the starting signal, so no pass is vacuous.
inline DecayCheck rapid_decay_check(std::span<const Sample> tail, int N_max)
{
    DecayCheck out;
    const int n = static_cast<int>(tail.size());
    for (const Sample& x : tail) {
        out.noise_floor = std::max(out.noise_floor, x.err);
    }
    int crossing = n;
    for (int i = 0; i < n; ++i) {
        if (std::abs(tail[i].value) <= tail[i].err) {
            crossing = i;
            break;
        }
    }
    bool streak = true;
    for (int N = 0; N <= N_max; ++N) {
        DecayVerdict v;
        v.N = N;
        v.noise_s = crossing < n ? tail[crossing].s : (n > 0 ? tail[n - 1].s : 0.0);
        auto weight = [&](int i) { return std::pow(1.0 + std::abs(tail[i].s), N); };
        auto fail_with = [&](std::string why) {
            v.pass = false;
            v.reason = std::move(why);
        };
        if (n < 20) {
            fail_with("fewer than 20 tail samples");
        } else if (crossing < 4) {
            fail_with("signal below noise from the start");
        } else {
            v.pass = true;
            const double W0 = weight(0) * std::abs(tail[0].value);
            for (int i = 1; i < crossing && v.pass; ++i) {
                const double Wi = weight(i) * std::abs(tail[i].value);
                if (Wi > W0 + weight(i) * (tail[i].err + tail[0].err)) {
                    fail_with("weighted signal exceeds its starting value at s = " + std::to_string(tail[i].s));
                }
            }
            for (int i = crossing; i < n && v.pass; ++i) {
                if (std::abs(tail[i].value) > 4.0 * tail[i].err) {
                    fail_with("signal re-emerges above noise at s = " + std::to_string(tail[i].s));
                }
            }
            if (v.pass) {
                // Envelope over the last quarter of the stretch above noise.
                const int k = 3 * (crossing - 1) / 4;
                double env = 0.0;
                for (int i = k; i < crossing; ++i) {
                    env = std::max(env, weight(i) * std::abs(tail[i].value));
                }
                v.decay_factor = env > 0 ? W0 / env : std::numeric_limits<double>::infinity();
                const int c = crossing < n ? crossing : n - 1;
                if (!(weight(c) * tail[c].err < W0)) {
                    fail_with("vacuous: weighted noise exceeds the starting signal");
                } else if (v.decay_factor < 2.0) {
                    fail_with("weighted signal does not decay (factor " + std::to_string(v.decay_factor) + ")");
                }
            }
        }
        if (v.pass && streak) {
            out.certified.push_back(N);
        } else {
            streak = false;
        }
        out.verdicts.push_back(std::move(v));
    }
    return out;
}

enum class Side { plus, minus };

/// Tail samples of a sampled function, ordered outward from the point where
/// (1+|s|)^N_max |value| peaks on that side of the origin among samples that
/// stand above their error bar. Unset values (the stencil margin) are skipped.
inline std::vector<Sample> select_tail(std::span<const double> s, std::span<const std::optional<double>> values,
                                       std::span<const double> err, Side side, int N_max)
{
    std::vector<Sample> all;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!values[i]) {
            continue;
        }
        if ((side == Side::plus && s[i] >= 0) || (side == Side::minus && s[i] <= 0)) {
            all.push_back({s[i], *values[i], err[i]});
        }
    }
    if (side == Side::minus) {
        std::reverse(all.begin(), all.end());
    }
    std::size_t best = 0;
    double best_w = -1.0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (std::abs(all[i].value) <= all[i].err) {
            continue;
        }
        const double w = std::pow(1.0 + std::abs(all[i].s), N_max) * std::abs(all[i].value);
        if (w > best_w) {
            best_w = w;
            best = i;
        }
    }
    return std::vector<Sample>(all.begin() + static_cast<std::ptrdiff_t>(std::min(best, all.size())), all.end());
}

inline std::vector<Sample> select_tail(std::span<const double> s, std::span<const double> values,
                                       std::span<const double> err, Side side, int N_max)
{
    std::vector<std::optional<double>> v(values.begin(), values.end());
    return select_tail(s, v, err, side, N_max);
}

struct SupportVerdict {
    bool pass = true;
    double observed_radius = 0.0;
    double worst_outside = 0.0; // max |Af| / max|Af| beyond the allowed radius
};

/// |Af(s)| <= tol max|Af| for |s| > 1.05 R. The observed radius is the
/// largest |s| where |Af| exceeds the threshold.
inline SupportVerdict support_check(std::span<const double> s, std::span<const double> af, double R, double tol)
{
    SupportVerdict out;
    double mx = 0.0;
    for (double a : af) {
        mx = std::max(mx, std::abs(a));
    }
    if (mx == 0.0) {
        return out;
    }
    const double thr = tol * mx;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double a = std::abs(af[i]);
        if (a > thr) {
            out.observed_radius = std::max(out.observed_radius, std::abs(s[i]));
        }
        if (std::abs(s[i]) > 1.05 * R) {
            out.worst_outside = std::max(out.worst_outside, a / mx);
            if (a > thr) {
                out.pass = false;
            }
        }
    }
    return out;
}

inline SupportVerdict support_check(const TransformGrid& grid, double R, double tol)
{
    return support_check(grid.s, grid.af, R, tol);
}

struct ConstantTerm {
    double value = 0.0;
    double uncertainty = 0.0;
    bool non_convergent_tail = false;
};

/// Limit of a tail sequence by Aitken's delta-squared on two triples of
/// different spacing taken from the end; their disagreement is the
/// uncertainty.
inline ConstantTerm constant_term(std::span<const double> values)
{
    const int n = static_cast<int>(values.size());
    require(n >= 7, errc::invalid_argument, "constant_term needs at least 7 samples");
    auto aitken = [&](int k, bool& contracting) {
        const double x0 = values[n - 1 - 2 * k], x1 = values[n - 1 - k], x2 = values[n - 1];
        const double d1 = x1 - x0, d2 = x2 - x1;
        if (std::abs(d2) > std::abs(d1) && std::abs(d2) > 0) {
            contracting = false;
        }
        const double den = d2 - d1;
        if (den == 0.0 || d2 == 0.0) {
            return x2;
        }
        return x2 - d2 * d2 / den;
    };
    const int k = std::max(1, (n - 1) / 4);
    const int k2 = std::max(1, k / 2);
    bool contracting = true;
    const double a1 = aitken(k, contracting);
    const double a2 = aitken(k2, contracting);
    ConstantTerm out;
    out.value = a1;
    out.uncertainty = std::abs(a1 - a2);
    out.non_convergent_tail = !contracting || !std::isfinite(a1);
    return out;
}

/// Everything the decay analysis learned about one grid.
struct DecayReport {
    FitResult fit;
    double noise_floor = 0.0;
    DecayCheck decay_plus;
    DecayCheck decay_minus;
    std::optional<double> support_radius_observed;
    std::optional<ConstantTerm> constant;
};

} // namespace hyperradon

#endif // HYPERRADON_ANALYSIS_HPP
