#include "survfilter/scalar_quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "survfilter/errors.hpp"
#include "survfilter/math.hpp"

namespace survfilter {

namespace {

// Midpoints m_0 = -inf < m_1 < ... < m_{n-1} < m_n = +inf define the cells.
// Cell mass:          w_i = Phi(m_i) - Phi(m_{i-1})
// Cell partial mean:  E[Z 1{cell_i}] = phi(m_{i-1}) - phi(m_i)
struct CellStats {
    std::vector<double> mass;
    std::vector<double> partial_mean;
};

CellStats cell_stats(const std::vector<double>& a) {
    const std::size_t n = a.size();
    CellStats s;
    s.mass.resize(n);
    s.partial_mean.resize(n);
    double cdf_prev = 0.0, pdf_prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double cdf, pdf;
        if (i + 1 < n) {
            const double mid = 0.5 * (a[i] + a[i + 1]);
            cdf = norm_cdf(mid);
            pdf = norm_pdf(mid);
        } else {
            cdf = 1.0;
            pdf = 0.0;
        }
        s.mass[i] = cdf - cdf_prev;
        s.partial_mean[i] = pdf_prev - pdf;
        cdf_prev = cdf;
        pdf_prev = pdf;
    }
    return s;
}

// Residual of the centroid condition, F_i = E[Z 1{cell_i}] - a_i w_i.
// The distortion gradient is -2 F.
std::vector<double> residual(const std::vector<double>& a, const CellStats& s) {
    std::vector<double> f(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) f[i] = s.partial_mean[i] - a[i] * s.mass[i];
    return f;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

bool strictly_increasing(const std::vector<double>& a) {
    for (std::size_t i = 0; i + 1 < a.size(); ++i)
        if (!(a[i] < a[i + 1])) return false;
    return true;
}

// One Newton step on F(a) = 0 with the tridiagonal Jacobian
//  dF_i/da_{i-1} = (a_i - m_{i-1})/2 * phi(m_{i-1})
//  dF_i/da_{i+1} = (m_i - a_i)/2 * phi(m_i)
//  dF_i/da_i     = -w_i + (a_i - m_{i-1})/2 * phi(m_{i-1}) + (m_i - a_i)/2 * phi(m_i)
// solved by the Thomas algorithm. Note the Jacobian here is dF/da, so we solve
// J delta = -F and update a += delta.
std::vector<double> newton_step(const std::vector<double>& a, const CellStats& s,
                                const std::vector<double>& f) {
    const std::size_t n = a.size();
    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d = -s.mass[i];
        if (i > 0) {
            const double mid = 0.5 * (a[i - 1] + a[i]);
            const double c = 0.5 * (a[i] - mid) * norm_pdf(mid);
            lower[i] = c;
            d += c;
        }
        if (i + 1 < n) {
            const double mid = 0.5 * (a[i] + a[i + 1]);
            const double c = 0.5 * (mid - a[i]) * norm_pdf(mid);
            upper[i] = c;
            d += c;
        }
        diag[i] = d;
        rhs[i] = -f[i];
    }
    // Thomas solve (the matrix is strictly diagonally dominant by columns).
    std::vector<double> cp(n, 0.0), dp(n, 0.0);
    cp[0] = upper[0] / diag[0];
    dp[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double denom = diag[i] - lower[i] * cp[i - 1];
        cp[i] = upper[i] / denom;
        dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / denom;
    }
    std::vector<double> delta(n);
    delta[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) delta[i] = dp[i] - cp[i] * delta[i + 1];
    return delta;
}

void lloyd_step(std::vector<double>& a) {
    const CellStats s = cell_stats(a);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (s.mass[i] > 0.0) a[i] = s.partial_mean[i] / s.mass[i];
}

// Kill the asymmetric numerical noise; the optimal grid is antisymmetric.
void symmetrize(std::vector<double>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double v = 0.5 * (a[i] - a[n - 1 - i]);
        a[i] = v;
        a[n - 1 - i] = -v;
    }
    if (n % 2 == 1) a[n / 2] = 0.0;
}

}  // namespace

double ScalarQuantizer::distortion() const {
    // E Z^2 - 2 sum a_i E[Z 1{cell_i}] + sum a_i^2 w_i, with exact cell stats.
    const CellStats s = cell_stats(levels);
    double d = 1.0;
    for (std::size_t i = 0; i < levels.size(); ++i)
        d += levels[i] * (levels[i] * s.mass[i] - 2.0 * s.partial_mean[i]);
    return d;
}

double ScalarQuantizer::stationarity_residual() const {
    const CellStats s = cell_stats(levels);
    double r = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (s.mass[i] > 0.0)
            r = std::max(r, std::abs(s.partial_mean[i] / s.mass[i] - levels[i]));
    return r;
}

ScalarQuantizer optimal_gaussian_quantizer(std::size_t n) {
    if (n == 0) throw InvalidParameter("quantizer size must be at least 1");
    if (n == 1) return ScalarQuantizer{{0.0}, {1.0}};

    constexpr double tol = 1e-13;
    constexpr int max_iter = 200;

    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i)
        a[i] = norm_quantile((2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n)));

    CellStats s = cell_stats(a);
    std::vector<double> f = residual(a, s);
    double res = max_abs(f);

    for (int iter = 0; iter < max_iter && res > tol; ++iter) {
        const std::vector<double> delta = newton_step(a, s, f);
        double step = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 40; ++halving) {
            std::vector<double> trial(n);
            for (std::size_t i = 0; i < n; ++i) trial[i] = a[i] + step * delta[i];
            if (strictly_increasing(trial)) {
                const CellStats ts = cell_stats(trial);
                const std::vector<double> tf = residual(trial, ts);
                const double tres = max_abs(tf);
                if (tres < res) {
                    a = std::move(trial);
                    s = ts;
                    f = tf;
                    res = tres;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) {
            lloyd_step(a);
            s = cell_stats(a);
            f = residual(a, s);
            res = max_abs(f);
        }
    }

    if (res > tol) {
        // Newton stalled short of tolerance; polish with Lloyd.
        for (int iter = 0; iter < 100000 && res > tol; ++iter) {
            lloyd_step(a);
            s = cell_stats(a);
            f = residual(a, s);
            res = max_abs(f);
        }
        if (res > 1e-10) throw SolverFailure("optimal_gaussian_quantizer did not converge", res);
    }

    symmetrize(a);
    ScalarQuantizer q;
    q.levels = std::move(a);
    q.weights = cell_stats(q.levels).mass;
    return q;
}

}  // namespace survfilter
