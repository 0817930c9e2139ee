#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vec3.hpp"

namespace boltz
{
//---------------------------------------------------------------------------//
/*!
 * Weighted atomic probability measure on R^3.
 *
 * Stands in for f_t throughout the diagnostics. Weights are normalized on
 * construction and must be nonnegative.
 */
class EmpiricalMeasure
{
  public:
    EmpiricalMeasure() = default;
    //! Uniform weights
    explicit EmpiricalMeasure(std::vector<Vec3> samples);
    EmpiricalMeasure(std::vector<Vec3> samples, std::vector<double> weights);

    std::span<Vec3 const> samples() const { return samples_; }
    std::span<double const> weights() const { return weights_; }
    std::size_t size() const { return samples_.size(); }
    bool uniform_weights() const { return uniform_; }

    Vec3 mean() const;

    //! Unweighted copy via systematic resampling (identity when uniform)
    EmpiricalMeasure resample_uniform(std::uint64_t seed) const;

  private:
    std::vector<Vec3> samples_;
    std::vector<double> weights_;
    bool uniform_{true};
};

//! m_p = sum_i w_i |v_i|^p
double moment(EmpiricalMeasure const& m, double p);

//---------------------------------------------------------------------------//
//! Axis-aligned regular grid of cell centers
struct GridSpec
{
    Vec3 origin;  //!< center of cell (0, 0, 0)
    double spacing{1};
    std::array<int, 3> counts{1, 1, 1};

    std::size_t size() const
    {
        return static_cast<std::size_t>(counts[0]) * counts[1] * counts[2];
    }
    std::size_t index(int i, int j, int k) const
    {
        return (static_cast<std::size_t>(i) * counts[1] + j) * counts[2] + k;
    }
    Vec3 center(int i, int j, int k) const
    {
        return origin + Vec3{i * spacing, j * spacing, k * spacing};
    }
    double cell_volume() const { return spacing * spacing * spacing; }

    //! Cubic grid with \c n cells per axis covering [lo, hi]^3 exactly
    static GridSpec cube(double lo, double hi, int n);
    //! Grid covering the central \c mass_fraction bounding box plus padding
    static GridSpec covering(EmpiricalMeasure const& m,
                             double spacing,
                             double padding,
                             double mass_fraction = 0.999);
};

struct GridDensity
{
    GridSpec grid;
    std::vector<double> values;
    //! Set when the grid misses more than 0.1% of the sample mass
    bool coverage_warning{false};

    double total_mass() const;
    double at(int i, int j, int k) const { return values[grid.index(i, j, k)]; }
};

//! Silverman's rule-of-thumb bandwidth for a 3D Gaussian kernel
double silverman_bandwidth(EmpiricalMeasure const& m);

/*!
 * Gaussian kernel density estimate evaluated at grid cell centers.
 *
 * The kernel is cut at 5 bandwidths and each sample's discrete kernel is
 * renormalized to unit mass, so the grid integral equals the captured mass.
 */
GridDensity kde_density(EmpiricalMeasure const& m, double bandwidth, GridSpec const& grid);

//---------------------------------------------------------------------------//
struct EntropyEstimate
{
    //! Differential entropy -int f log f
    double entropy{0};
    //! Number of coincident samples that had to be jittered
    std::size_t jittered{0};
    bool resampled{false};
};

/*!
 * Kozachenko-Leonenko k-nearest-neighbour differential entropy.
 *
 * Weighted measures are resampled to uniform weights first; coincident
 * points are separated by a tiny deterministic jitter and counted.
 */
EntropyEstimate entropy_knn(EmpiricalMeasure const& m, int k_nn, std::uint64_t seed = 0);

//---------------------------------------------------------------------------//
struct BesovOptions
{
    //! Grid spacing as a fraction of the smallest radius (at most 1/4)
    double spacing_over_r{0.25};
    //! r-exponent above which kappa is reported as diverging
    double singular_r_exponent{0.5};
};

//! Mollified L1 shift difference D(h, r) for one (h, r) pair
struct ShiftDifference
{
    double h;
    double r;
    double value;
};

/*!
 * Fit log D(h, r) = log kappa + a log h - rho log r.
 *
 * \c s_est = a - alpha is left empty when D is not increasing in h (noise
 * dominated). \c singular flags rho above BesovOptions::singular_r_exponent,
 * i.e. a constant kappa that diverges as r -> 0.
 */
struct BesovEstimate
{
    double kappa{0};
    double a_exp{0};
    double alpha{0};
    std::optional<double> s_est;
    double fit_residual{0};
    double r_exponent{0};
    bool monotone{true};
    bool singular{false};
    std::vector<ShiftDifference> table;
};

BesovEstimate besov_estimate(EmpiricalMeasure const& m,
                             std::span<double const> r_set,
                             std::span<double const> h_set,
                             double alpha,
                             BesovOptions const& options = {});

/*!
 * Ball-mollified density on a grid: count of samples within r of each cell
 * center, divided by the ball volume.
 */
GridDensity ball_mollify(EmpiricalMeasure const& m, double r, GridSpec const& grid);

//! Grid L1 norm of g(x + shift * e_axis) - g(x), shift in whole cells
double shift_l1(GridDensity const& g, int axis, int shift_cells);

//---------------------------------------------------------------------------//
//! Smoothness exponent for hard potentials (two-branch closed form)
double smoothness_exponent_hard(double nu);

struct SoftExponent
{
    double value;         //!< golden-section supremum
    double closed_form;   //!< (sqrt(m)-1)^2/m or the boundary value
    double alpha_star;    //!< maximizing alpha
};

/*!
 * Smoothness exponent for moderately soft potentials: supremum over
 * alpha in (0, nu] of m alpha/(1 + m alpha) - alpha with m = 2 + gamma/nu.
 */
SoftExponent smoothness_exponent_soft_detail(double gamma, double nu);
double smoothness_exponent_soft(double gamma, double nu);

}  // namespace boltz
