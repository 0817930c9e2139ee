#include <cmath>
#include <stdexcept>

#include "boltz/measure.hpp"
#include "boltz/quadrature.hpp"

namespace boltz
{
double smoothness_exponent_hard(double nu)
{
    if (!(nu > 0 && nu < 1))
        throw std::domain_error("smoothness_exponent_hard: nu must lie in (0, 1)");
    double const breakpoint = (std::sqrt(2.0) - 1) / 2;
    if (nu < breakpoint)
        return (nu - 2 * nu * nu) / (1 + 2 * nu);
    double const d = std::sqrt(2.0) - 1;
    return d * d / 2;
}

SoftExponent smoothness_exponent_soft_detail(double gamma, double nu)
{
    if (!(gamma > -1 && gamma <= 0))
        throw std::domain_error("smoothness_exponent_soft: gamma must lie in (-1, 0]");
    if (!(nu > 0 && nu < 1))
        throw std::domain_error("smoothness_exponent_soft: nu must lie in (0, 1)");
    if (!(gamma + nu > 0))
        throw std::domain_error("smoothness_exponent_soft: gamma + nu must be positive");

    double const m = 2 + gamma / nu;
    auto const objective = [m](double alpha) { return m * alpha / (1 + m * alpha) - alpha; };
    Extremum const best = golden_section_max(objective, 0, nu, 1e-12);

    SoftExponent out;
    out.value = best.value;
    double const interior = (std::sqrt(m) - 1) / m;
    if (interior <= nu)
    {
        double const d = std::sqrt(m) - 1;
        out.closed_form = d * d / m;
        out.alpha_star = interior;
    }
    else
    {
        out.closed_form = objective(nu);
        out.alpha_star = nu;
    }
    return out;
}

double smoothness_exponent_soft(double gamma, double nu)
{
    return smoothness_exponent_soft_detail(gamma, nu).value;
}

}  // namespace boltz
