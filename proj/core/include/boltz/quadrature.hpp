#pragma once

#include <functional>
#include <span>
#include <vector>

namespace boltz
{
//! Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1]
struct GaussLegendre
{
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int n);

    //! Rule mapped to [a, b]
    template<class F>
    double integrate(F&& f, double a, double b) const
    {
        double const half = (b - a) / 2;
        double const mid = (a + b) / 2;
        double sum = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            sum += weights[i] * f(mid + half * nodes[i]);
        return sum * half;
    }
};

//! Cached rule; thread-safe after first use for a given n
GaussLegendre const& gauss_legendre(int n);

//! Result of a one-dimensional maximization
struct Extremum
{
    double x;
    double value;
};

/*!
 * Golden-section search for the maximum of a unimodal function on [a, b].
 * Stops when the bracket is narrower than \c tol.
 */
Extremum golden_section_max(std::function<double(double)> const& f,
                            double a,
                            double b,
                            double tol = 1e-12);

//! Ordinary least squares y ~ beta0 + beta1 x1 + ... (columns of design)
struct LinearFit
{
    std::vector<double> coef;
    //! Root-mean-square residual
    double rms_residual{0};
};
LinearFit least_squares(std::span<std::vector<double> const> columns,
                        std::span<double const> y);

//! Slope of y against x through simple linear regression
double fit_slope(std::span<double const> x, std::span<double const> y);

}  // namespace boltz
