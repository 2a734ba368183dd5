#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "noisygames/misinfo.hpp"
#include "noisygames/probability.hpp"

namespace noisy {

struct McConfig {
    std::size_t reps = 3000;
    std::uint64_t seed = 0;
    bool resample_degenerate = true;
    double degeneracy_tol = 1e-12;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;

    void validate() const;
};

struct McEstimate {
    std::size_t reps = 0;
    double freq_mis = 0, freq_inv = 0;
    double freq_best = 0, freq_worst = 0;
    /// Binomial sqrt(f(1-f)/n) for each frequency.
    double se_mis = 0, se_inv = 0, se_best = 0, se_worst = 0;
    std::size_t degenerate_resamples = 0;
};

/// Raised when a sampled subjective game is degenerate and resampling is off,
/// or when resampling keeps failing.
class DegenerateSampleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// <G0, G0 + Δr, G0 + Δc>, drawing Δr then Δc entry by entry
/// (P_r row-major, then P_c row-major).
MisinformationGame sample_noisy_game(const Bimatrix2x2& g0, const NoiseSpec& spec, std::mt19937_64& rng);

/// Repetitions are split into fixed blocks, each with its own generator
/// seeded from (seed, block index), so results do not depend on threading.
McEstimate estimate(const Bimatrix2x2& g0, const NoiseSpec& spec, Tolerance eps, const McConfig& cfg);

enum class SweepMode { theory, mc, both };

struct SweepRow {
    double d;
    std::optional<double> p_mis_theory;
    std::optional<double> p_inv_theory;
    std::optional<McEstimate> mc;
};

/// One row per noise level d, with stds of spec_shape scaled by d.
/// Row k runs its simulation with seed cfg.seed ^ k.
std::vector<SweepRow> sweep(const Bimatrix2x2& g0, const NoiseSpec& spec_shape, Tolerance eps,
                            const std::vector<double>& d_values, const McConfig& cfg, SweepMode mode,
                            const QuadratureConfig& qcfg = {});

}  // namespace noisy
