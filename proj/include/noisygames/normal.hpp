#pragma once

namespace noisy {

/// Φ(x), computed as erfc(-x/√2)/2 so the lower tail keeps full relative
/// precision.
double std_normal_cdf(double x) noexcept;
double std_normal_pdf(double x) noexcept;

/// Gaussian N(mu, sd^2). sd = 0 is a point mass at mu.
struct NormalDist {
    double mu = 0.0;
    double sd = 1.0;

    NormalDist() = default;
    NormalDist(double mu, double sd);

    bool deterministic() const noexcept { return sd == 0.0; }
    /// P[X <= t]. For a point mass this is the indicator t >= mu.
    double cdf(double t) const noexcept;
    /// Density; zero everywhere for a point mass.
    double pdf(double t) const noexcept;
};

}  // namespace noisy
