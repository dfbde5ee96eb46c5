#ifndef HYPERRADON_QUADRATURE_HPP
#define HYPERRADON_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "hyperradon/error.hpp"

namespace hyperradon {

struct QuadratureSpec {
    int nodes_per_dim = 16;   // Gauss-Legendre nodes per panel
    int sphere_nodes = 8;     // nodes per polar angle; the periodic angle gets twice as many
    double panel_width = 2.0;
    double truncation_radius = 10.0;
    double target_rel_tol = 1e-10;
    double abs_tol = 0.0;
    double endpoint_power = 0.0;
    int doubling_rounds = 3;
    int threads = 1;

    void validate() const
    {
        require(nodes_per_dim >= 2, errc::invalid_argument, "nodes_per_dim must be >= 2");
        require(sphere_nodes >= 1, errc::invalid_argument, "sphere_nodes must be >= 1");
        require(panel_width > 0, errc::invalid_argument, "panel_width must be positive");
        require(truncation_radius > 0, errc::invalid_argument, "truncation_radius must be positive");
        require(target_rel_tol > 0, errc::invalid_argument, "target_rel_tol must be positive");
        require(abs_tol >= 0, errc::invalid_argument, "abs_tol must be >= 0");
        require(endpoint_power > -1, errc::invalid_argument, "endpoint_power must be > -1");
        require(doubling_rounds >= 1, errc::invalid_argument, "doubling_rounds must be >= 1");
        require(threads >= 1, errc::invalid_argument, "threads must be >= 1");
    }
};

struct Estimate {
    double value = 0.0;
    double err = 0.0;
};

/// Result of a doubled quadrature. scale is sum |w g|, the size of the
/// integrand before cancellation.
struct QuadResult {
    double value = 0.0;
    double err = 0.0;
    double scale = 0.0;
    long long evaluations = 0;
    bool converged = false;

    Estimate estimate() const { return {value, err}; }
};

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct GaussLegendre {
    std::vector<double> nodes;   // on [-1, 1], ascending
    std::vector<double> weights;
};

namespace detail {

inline GaussLegendre compute_gauss_legendre(int n)
{
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        if (n == 1) {
            x = 0.0;
            dp = 1.0;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        gl.nodes[i] = -x;
        gl.nodes[n - 1 - i] = x;
        gl.weights[i] = w;
        gl.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        gl.nodes[n / 2] = 0.0;
    }
    return gl;
}

} // namespace detail

/// Cached n-point Gauss-Legendre rule. Safe to call from several threads.
inline const GaussLegendre& gauss_legendre(int n)
{
    require(n >= 1, errc::invalid_argument, "Gauss-Legendre needs n >= 1");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussLegendre>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<GaussLegendre>(detail::compute_gauss_legendre(n));
    }
    return *slot;
}

/// Weighted point set in R^dim. A tensor product of these is the basic
/// integration object.
struct PointRule {
    int dim = 1;
    std::vector<double> points; // count * dim
    std::vector<double> weights;

    std::size_t count() const noexcept { return weights.size(); }
    std::span<const double> point(std::size_t i) const noexcept
    {
        return std::span<const double>(points.data() + i * dim, dim);
    }
    void push(std::span<const double> x, double w)
    {
        points.insert(points.end(), x.begin(), x.end());
        weights.push_back(w);
    }
};

/// Composite Gauss-Legendre on [lo, hi] with panels no wider than panel_width.
inline PointRule composite_rule(double lo, double hi, int n, double panel_width)
{
    PointRule r;
    if (!(hi > lo)) {
        return r;
    }
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / panel_width - 1e-12)));
    const double w = (hi - lo) / panels;
    const GaussLegendre& gl = gauss_legendre(n);
    r.points.reserve(panels * n);
    r.weights.reserve(panels * n);
    for (int k = 0; k < panels; ++k) {
        const double a = lo + k * w;
        for (int i = 0; i < n; ++i) {
            r.points.push_back(a + 0.5 * w * (gl.nodes[i] + 1.0));
            r.weights.push_back(0.5 * w * gl.weights[i]);
        }
    }
    return r;
}

/// Rule on [-T, T].
inline PointRule box_rule(const QuadratureSpec& spec, int level = 1)
{
    const double T = spec.truncation_radius;
    return composite_rule(-T, T, spec.nodes_per_dim * level, spec.panel_width);
}

/// Rule for [a, inf) truncated to [max(a, -T), T]. Points are pairs
/// (v, v - a); the second component is exact near the endpoint, where the
/// integrand typically carries a factor (v - a)^power. A non-integer power
/// gets a leading segment mapped by v = a + tau^2.
inline PointRule halfline_rule(double a, const QuadratureSpec& spec, int level = 1)
{
    PointRule r;
    r.dim = 2;
    const double T = spec.truncation_radius;
    if (a >= T) {
        return r;
    }
    const int n = spec.nodes_per_dim * level;
    double lo = std::max(a, -T);
    const double pw = spec.endpoint_power;
    const bool singular = a > -T && std::abs(pw - std::round(pw)) > 1e-12;
    if (singular) {
        const double len = std::min(1.0, T - a);
        const PointRule tau = composite_rule(0.0, std::sqrt(len), n, spec.panel_width);
        for (std::size_t i = 0; i < tau.count(); ++i) {
            const double t = tau.points[i];
            const double x[2] = {a + t * t, t * t};
            r.push(x, 2.0 * t * tau.weights[i]);
        }
        lo = a + len;
    }
    const PointRule main = composite_rule(lo, T, n, spec.panel_width);
    for (std::size_t i = 0; i < main.count(); ++i) {
        const double v = main.points[i];
        const double x[2] = {v, v - a};
        r.push(x, main.weights[i]);
    }
    return r;
}

/// n-point Gauss rule for the weight (1 - x^2)^a on [-1, 1], from the
/// eigen-decomposition of the Jacobi matrix (Golub-Welsch). Cached.
inline const GaussLegendre& gauss_gegenbauer(int n, double a)
{
    require(n >= 1 && a > -1, errc::invalid_argument, "Gauss-Gegenbauer needs n >= 1, a > -1");
    static std::mutex mu;
    static std::map<std::pair<int, long long>, std::unique_ptr<GaussLegendre>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{n, std::llround(a * 1e6)}];
    if (!slot) {
        // Monic recurrence for the ultraspherical weight, lambda = a + 1/2:
        // beta_k = k (k + 2 lambda - 1) / (4 (k + lambda) (k + lambda - 1)).
        const double lam = a + 0.5;
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
        for (int k = 1; k < n; ++k) {
            // k = 1 simplified, so lam = 0 (Chebyshev) is not 0/0.
            const double b = k == 1 ? 1.0 / (2.0 * (1.0 + lam))
                                    : k * (k + 2 * lam - 1) / (4.0 * (k + lam) * (k + lam - 1));
            J(k, k - 1) = J(k - 1, k) = std::sqrt(b);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
        const double mu0 = std::sqrt(std::numbers::pi) * std::tgamma(a + 1) / std::tgamma(a + 1.5);
        auto gl = std::make_unique<GaussLegendre>();
        for (int i = 0; i < n; ++i) {
            gl->nodes.push_back(es.eigenvalues()(i));
            const double v0 = es.eigenvectors()(0, i);
            gl->weights.push_back(mu0 * v0 * v0);
        }
        slot = std::move(gl);
    }
    return *slot;
}

/// Product rule on the unit sphere S^r in R^{r+1}.
///
/// x = (cos t1, sin t1 cos t2, ..., sin t1 ... sin t_{r-1} cos phi, ... sin phi)
/// with measure sin^{r-1} t1 ... sin t_{r-1} dt dphi. Each polar angle with
/// weight power m is integrated in c = cos t against (1 - c^2)^{(m-1)/2} by
/// a Gauss-Gegenbauer rule; phi is uniform with 2n points. The rule is exact
/// for polynomials of degree < 2n in the ambient coordinates.
inline PointRule sphere_rule(int r, int n)
{
    require(r >= 0, errc::invalid_argument, "sphere dimension must be >= 0");
    PointRule out;
    out.dim = r + 1;
    if (r == 0) {
        const double p = 1.0, m = -1.0;
        out.push(std::span<const double>(&p, 1), 1.0);
        out.push(std::span<const double>(&m, 1), 1.0);
        return out;
    }
    // One-dimensional factors: for each polar angle a list of (cos, sin, w).
    struct Node {
        double c, s, w;
    };
    std::vector<std::vector<Node>> polar;
    for (int k = 0; k < r - 1; ++k) {
        const int m = r - 1 - k;
        const GaussLegendre& gg = gauss_gegenbauer(n, 0.5 * (m - 1));
        std::vector<Node> nodes;
        for (int i = 0; i < n; ++i) {
            const double c = gg.nodes[i];
            nodes.push_back({c, std::sqrt(std::max(0.0, 1.0 - c * c)), gg.weights[i]});
        }
        polar.push_back(std::move(nodes));
    }
    const int nphi = 2 * n;
    std::vector<Node> phi;
    for (int i = 0; i < nphi; ++i) {
        const double t = 2.0 * std::numbers::pi * (i + 0.5) / nphi;
        phi.push_back({std::cos(t), std::sin(t), 2.0 * std::numbers::pi / nphi});
    }

    std::vector<std::size_t> idx(polar.size(), 0);
    std::vector<double> x(r + 1);
    while (true) {
        double w = 1.0, prod = 1.0;
        for (std::size_t k = 0; k < polar.size(); ++k) {
            const Node& nd = polar[k][idx[k]];
            x[k] = prod * nd.c;
            prod *= nd.s;
            w *= nd.w;
        }
        for (const Node& nd : phi) {
            x[r - 1] = prod * nd.c;
            x[r] = prod * nd.s;
            out.push(x, w * nd.w);
        }
        std::size_t k = polar.size();
        while (k > 0) {
            --k;
            if (++idx[k] < polar[k].size()) {
                break;
            }
            idx[k] = 0;
            if (k == 0) {
                return out;
            }
        }
        if (polar.empty()) {
            return out;
        }
    }
}

inline double sphere_volume(int r)
{
    // |S^r| = 2 pi^{(r+1)/2} / Gamma((r+1)/2)
    return 2.0 * std::pow(std::numbers::pi, 0.5 * (r + 1)) / std::tgamma(0.5 * (r + 1));
}

struct TensorSum {
    double value = 0.0;
    double scale = 0.0;
    long long evaluations = 0;
};

/// Sum of w g(x) over the tensor product of the factor rules. g receives the
/// concatenated coordinates. The outermost factor is split into chunks whose
/// partial sums are combined in index order, so the result does not depend
/// on the thread count.
template <class G>
TensorSum tensor_sum(const std::vector<PointRule>& factors, G&& g, int threads = 1)
{
    TensorSum out;
    for (const PointRule& f : factors) {
        if (f.count() == 0) {
            return out;
        }
    }
    int total_dim = 0;
    for (const PointRule& f : factors) {
        total_dim += f.dim;
    }
    if (factors.empty()) {
        std::vector<double> none;
        const double v = g(std::span<const double>(none));
        return {v, std::abs(v), 1};
    }

    const std::size_t outer = factors[0].count();
    std::vector<double> part(outer, 0.0), part_abs(outer, 0.0);
    std::vector<long long> part_n(outer, 0);

    auto work = [&](std::size_t first, std::size_t stride) {
        std::vector<double> x(total_dim);
        std::vector<std::size_t> idx(factors.size(), 0);
        std::vector<int> offset(factors.size(), 0);
        for (std::size_t k = 1; k < factors.size(); ++k) {
            offset[k] = offset[k - 1] + factors[k - 1].dim;
        }
        for (std::size_t i0 = first; i0 < outer; i0 += stride) {
            CompensatedSum sum, sum_abs;
            long long n = 0;
            std::fill(idx.begin(), idx.end(), 0);
            idx[0] = i0;
            std::vector<double> wprefix(factors.size() + 1, 1.0);
            for (std::size_t k = 0; k < factors.size(); ++k) {
                auto p = factors[k].point(idx[k]);
                std::copy(p.begin(), p.end(), x.begin() + offset[k]);
                wprefix[k + 1] = wprefix[k] * factors[k].weights[idx[k]];
            }
            while (true) {
                const double val = wprefix.back() * g(std::span<const double>(x));
                sum.add(val);
                sum_abs.add(std::abs(val));
                ++n;
                // Odometer over factors 1..end.
                std::size_t k = factors.size();
                bool done = true;
                while (k > 1) {
                    --k;
                    if (++idx[k] < factors[k].count()) {
                        done = false;
                        break;
                    }
                    idx[k] = 0;
                }
                if (done) {
                    break;
                }
                for (std::size_t j = k; j < factors.size(); ++j) {
                    auto p = factors[j].point(idx[j]);
                    std::copy(p.begin(), p.end(), x.begin() + offset[j]);
                    wprefix[j + 1] = wprefix[j] * factors[j].weights[idx[j]];
                }
            }
            part[i0] = sum.value();
            part_abs[i0] = sum_abs.value();
            part_n[i0] = n;
        }
    };

    const int nt = std::max(1, std::min<int>(threads, static_cast<int>(outer)));
    if (nt == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(nt);
        for (int t = 0; t < nt; ++t) {
            pool.emplace_back([&, t] {
                try {
                    work(t, nt);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
        for (auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }
    CompensatedSum sum, sum_abs;
    for (std::size_t i = 0; i < outer; ++i) {
        sum.add(part[i]);
        sum_abs.add(part_abs[i]);
        out.evaluations += part_n[i];
    }
    out.value = sum.value();
    out.scale = sum_abs.value();
    return out;
}

/// Runs make_rules(level) for level = 1, 2, 4, ... and stops once two
/// consecutive levels agree. The reported error is the last difference plus a
/// roundoff allowance.
template <class MakeRules, class G>
QuadResult integrate_doubling(MakeRules&& make_rules, G&& g, const QuadratureSpec& spec,
                              bool throw_on_failure = true)
{
    spec.validate();
    constexpr double eps = std::numeric_limits<double>::epsilon();
    QuadResult res;
    TensorSum prev = tensor_sum(make_rules(1), g, spec.threads);
    res.evaluations = prev.evaluations;
    int level = 1;
    for (int round = 0; round < spec.doubling_rounds; ++round) {
        level *= 2;
        const TensorSum cur = tensor_sum(make_rules(level), g, spec.threads);
        res.evaluations += cur.evaluations;
        res.value = cur.value;
        res.scale = cur.scale;
        res.err = std::abs(cur.value - prev.value) + 16.0 * eps * cur.scale;
        const double bound =
            std::max(spec.abs_tol, spec.target_rel_tol * std::max(std::abs(cur.value), cur.scale));
        if (res.err <= bound) {
            res.converged = true;
            return res;
        }
        prev = cur;
    }
    if (throw_on_failure) {
        std::ostringstream os;
        os << "quadrature did not reach tolerance " << spec.target_rel_tol << " (err " << res.err << ", value "
           << res.value << ")";
        fail(errc::no_convergence, os.str());
    }
    return res;
}

/// Integral over R^m truncated to [-T, T]^m. m = 0 returns g().
template <class G>
QuadResult integrate_box(G&& g, int m, const QuadratureSpec& spec)
{
    require(m >= 0, errc::invalid_argument, "box dimension must be >= 0");
    return integrate_doubling(
        [&](int level) { return std::vector<PointRule>(m, box_rule(spec, level)); }, g, spec);
}

/// Integral of g(v) over [a, inf); g receives (v, v - a).
template <class G>
QuadResult integrate_halfline(G&& g, double a, const QuadratureSpec& spec)
{
    return integrate_doubling(
        [&](int level) { return std::vector<PointRule>{halfline_rule(a, spec, level)}; },
        [&](std::span<const double> x) { return g(x[0], x[1]); }, spec);
}

template <class G>
QuadResult integrate_sphere(G&& g, int r, const QuadratureSpec& spec)
{
    return integrate_doubling(
        [&](int level) { return std::vector<PointRule>{sphere_rule(r, spec.sphere_nodes * level)}; }, g,
        spec);
}

} // namespace hyperradon

#endif // HYPERRADON_QUADRATURE_HPP
