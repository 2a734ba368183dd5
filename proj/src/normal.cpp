#include "noisygames/normal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace noisy {

double std_normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_pdf(double x) noexcept {
    return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

NormalDist::NormalDist(double mu_, double sd_) : mu(mu_), sd(sd_) {
    if (!std::isfinite(mu) || !std::isfinite(sd) || sd < 0)
        throw std::invalid_argument(fmt::format("invalid normal parameters mu={} sd={}", mu, sd));
}

double NormalDist::cdf(double t) const noexcept {
    if (sd == 0.0) return t >= mu ? 1.0 : 0.0;
    return std_normal_cdf((t - mu) / sd);
}

double NormalDist::pdf(double t) const noexcept {
    if (sd == 0.0) return 0.0;
    return std_normal_pdf((t - mu) / sd) / sd;
}

}  // namespace noisy
