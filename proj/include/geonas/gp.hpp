#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace geonas::gp {

using Point = std::vector<double>;

/// Matern nu=5/2 kernel with unit variance and unit length-scale:
/// k = (1 + sqrt(5) r + 5 r^2 / 3) exp(-sqrt(5) r), r = Euclidean distance.
/// Always in (0, 1], equal to 1 iff r = 0.
double matern52(const Point& a, const Point& b);

struct PosteriorPoint {
    double mean;
    double std;
};

/// Zero-mean GP regressor. Targets are standardized at fit time (centered
/// always, scaled unless the variance is zero); posterior results are
/// de-standardized back to the original units.
class GPModel {
public:
    /// Builds and Cholesky-factors K + jitter*I. On factorization failure
    /// the jitter escalates tenfold up to max_jitter, then a singular-kernel
    /// error is thrown. Duplicate input points are rejected.
    static GPModel fit(const std::vector<Point>& inputs, const std::vector<double>& targets,
                       double jitter = 1e-8, double max_jitter = 1e-4);

    /// Posterior mean and standard deviation at each query, per the
    /// joint-Gaussian conditioning equations. Round-off-negative variances
    /// clamp to zero.
    std::vector<PosteriorPoint> posterior(const std::vector<Point>& queries) const;

    double jitter_used() const { return jitter_; }
    double target_mean() const { return mean_; }
    double target_scale() const { return scale_; }
    size_t observation_count() const { return inputs_.size(); }

private:
    GPModel() = default;

    std::vector<Point> inputs_;
    std::vector<double> z_;      // standardized targets
    std::vector<double> alpha_;  // (K + jitter I)^-1 z
    std::vector<double> chol_;   // lower-triangular factor, row-major n x n
    double mean_ = 0.0;
    double scale_ = 1.0;
    double jitter_ = 0.0;
};

/// Draws `count` joint samples of the zero-mean prior at the query points:
/// each sample ~ N(0, K + jitter*I). Deterministic per seed.
std::vector<std::vector<double>> sample_prior(const std::vector<Point>& queries, int count,
                                              uint64_t seed, double jitter = 1e-8);

/// In-place Cholesky of a dense symmetric matrix (row-major n x n).
/// Returns false if a non-positive pivot is met.
bool cholesky(std::vector<double>& a, size_t n);

/// Solve L y = b with L lower-triangular (row-major).
std::vector<double> forward_solve(const std::vector<double>& L, size_t n,
                                  const std::vector<double>& b);

/// Solve L^T x = y.
std::vector<double> backward_solve(const std::vector<double>& L, size_t n,
                                   const std::vector<double>& y);

}  // namespace geonas::gp
