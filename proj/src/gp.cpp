#include "geonas/gp.hpp"

#include <algorithm>
#include <cmath>

#include "geonas/errors.hpp"
#include "geonas/rng.hpp"

namespace geonas::gp {

double matern52(const Point& a, const Point& b) {
    if (a.size() != b.size()) throw DimensionError("kernel point dimension mismatch");
    double r2 = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        r2 += d * d;
    }
    const double r = std::sqrt(r2);
    const double s = 2.2360679774997896964091736687747;  // sqrt(5)
    return (1.0 + s * r + 5.0 * r2 / 3.0) * std::exp(-s * r);
}

bool cholesky(std::vector<double>& a, size_t n) {
    for (size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        a[j * n + j] = ljj;
        for (size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / ljj;
        }
        for (size_t k = j + 1; k < n; ++k) a[j * n + k] = 0.0;  // zero the upper triangle
    }
    return true;
}

std::vector<double> forward_solve(const std::vector<double>& L, size_t n,
                                  const std::vector<double>& b) {
    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (size_t k = 0; k < i; ++k) s -= L[i * n + k] * y[k];
        y[i] = s / L[i * n + i];
    }
    return y;
}

std::vector<double> backward_solve(const std::vector<double>& L, size_t n,
                                   const std::vector<double>& y) {
    std::vector<double> x(n);
    for (size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (size_t k = ii + 1; k < n; ++k) s -= L[k * n + ii] * x[k];
        x[ii] = s / L[ii * n + ii];
    }
    return x;
}

namespace {

/// Gram matrix of the queries, with `jitter` on the diagonal; factored in
/// place with tenfold escalation. Returns the jitter that succeeded.
double factor_gram(const std::vector<Point>& pts, double jitter, double max_jitter,
                   std::vector<double>& out) {
    const size_t n = pts.size();
    std::vector<double> gram(n * n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j <= i; ++j) {
            const double k = matern52(pts[i], pts[j]);
            gram[i * n + j] = k;
            gram[j * n + i] = k;
        }
    }
    for (double j = jitter;; j *= 10.0) {
        out = gram;
        for (size_t i = 0; i < n; ++i) out[i * n + i] += j;
        if (cholesky(out, n)) return j;
        if (j >= max_jitter)
            throw SingularKernelError("kernel matrix not positive definite with jitter up to " +
                                      std::to_string(max_jitter));
    }
}

}  // namespace

GPModel GPModel::fit(const std::vector<Point>& inputs, const std::vector<double>& targets,
                     double jitter, double max_jitter) {
    if (inputs.empty()) throw ConfigError("GP fit needs at least one observation");
    if (inputs.size() != targets.size())
        throw DimensionError("GP fit: inputs and targets differ in length");
    const size_t dim = inputs[0].size();
    for (const auto& p : inputs)
        if (p.size() != dim) throw DimensionError("GP fit: inconsistent point dimensions");
    for (size_t i = 0; i < inputs.size(); ++i)
        for (size_t j = i + 1; j < inputs.size(); ++j)
            if (inputs[i] == inputs[j])
                throw ConfigError("GP fit: duplicate observed points at indices " +
                                  std::to_string(i) + " and " + std::to_string(j));

    GPModel m;
    m.inputs_ = inputs;

    const size_t n = targets.size();
    double mean = 0.0;
    for (double t : targets) mean += t;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double t : targets) var += (t - mean) * (t - mean);
    var /= static_cast<double>(n);
    m.mean_ = mean;
    m.scale_ = (var > 0.0) ? std::sqrt(var) : 1.0;

    m.z_.resize(n);
    for (size_t i = 0; i < n; ++i) m.z_[i] = (targets[i] - mean) / m.scale_;

    m.jitter_ = factor_gram(inputs, jitter, max_jitter, m.chol_);
    m.alpha_ = backward_solve(m.chol_, n, forward_solve(m.chol_, n, m.z_));
    return m;
}

std::vector<PosteriorPoint> GPModel::posterior(const std::vector<Point>& queries) const {
    const size_t n = inputs_.size();
    std::vector<PosteriorPoint> out;
    out.reserve(queries.size());
    std::vector<double> k1q(n);
    for (const auto& q : queries) {
        for (size_t i = 0; i < n; ++i) k1q[i] = matern52(inputs_[i], q);
        double mu = 0.0;
        for (size_t i = 0; i < n; ++i) mu += k1q[i] * alpha_[i];
        const std::vector<double> v = forward_solve(chol_, n, k1q);
        double var = matern52(q, q);
        for (size_t i = 0; i < n; ++i) var -= v[i] * v[i];
        if (var < 0.0) var = 0.0;
        out.push_back({mean_ + scale_ * mu, scale_ * std::sqrt(var)});
    }
    return out;
}

std::vector<std::vector<double>> sample_prior(const std::vector<Point>& queries, int count,
                                              uint64_t seed, double jitter) {
    if (count < 1) throw ConfigError("sample count must be >= 1");
    if (queries.empty()) throw ConfigError("sample_prior needs at least one query point");
    const size_t n = queries.size();
    std::vector<double> L;
    factor_gram(queries, jitter, 1e-4, L);

    Rng rng(seed);
    std::vector<std::vector<double>> samples;
    samples.reserve(count);
    for (int s = 0; s < count; ++s) {
        std::vector<double> xi(n);
        for (double& x : xi) x = rng.normal();
        std::vector<double> z(n, 0.0);
        for (size_t i = 0; i < n; ++i)
            for (size_t k = 0; k <= i; ++k) z[i] += L[i * n + k] * xi[k];
        samples.push_back(std::move(z));
    }
    return samples;
}

}  // namespace geonas::gp
