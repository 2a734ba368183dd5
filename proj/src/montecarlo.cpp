#include "noisygames/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

namespace noisy {

namespace {

constexpr std::size_t block_size = 512;
constexpr std::size_t max_consecutive_resamples = 100000;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool near_degenerate(const Bimatrix2x2& g, double tol) {
    for (Player x : {Player::row, Player::col})
        for (int i : {1, 2})
            if (std::abs(utility_gain(g, x, i)) < tol) return true;
    return false;
}

struct Counts {
    std::size_t mis = 0, inv = 0, best = 0, worst = 0, resamples = 0;
};

Counts run_block(const Bimatrix2x2& g0, const NoiseSpec& spec, Tolerance eps, const McConfig& cfg,
                 std::size_t block, std::size_t n) {
    std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(block)));
    Counts c;
    for (std::size_t k = 0; k < n; ++k) {
        MisinformationGame mg = sample_noisy_game(g0, spec, rng);
        std::size_t tries = 0;
        while (near_degenerate(mg.view_r, cfg.degeneracy_tol) || near_degenerate(mg.view_c, cfg.degeneracy_tol)) {
            if (!cfg.resample_degenerate) throw DegenerateSampleError("sampled a degenerate subjective game");
            if (++tries > max_consecutive_resamples)
                throw DegenerateSampleError(
                    "subjective games keep coming out degenerate; the noise cannot break a zero utility gain");
            ++c.resamples;
            mg = sample_noisy_game(g0, spec, rng);
        }
        c.mis += is_epsilon_misinformed(mg, eps);
        c.inv += is_inverse_epsilon_misinformed(mg, eps);
        c.best += has_best_nme(mg);
        c.worst += has_worst_nme(mg);
    }
    return c;
}

double binomial_se(double f, std::size_t n) { return std::sqrt(f * (1 - f) / double(n)); }

}  // namespace

void McConfig::validate() const {
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    if (!(degeneracy_tol >= 0)) throw std::invalid_argument("degeneracy tolerance must be >= 0");
}

MisinformationGame sample_noisy_game(const Bimatrix2x2& g0, const NoiseSpec& spec, std::mt19937_64& rng) {
    std::normal_distribution<double> z(0.0, 1.0);
    MisinformationGame mg{g0, g0, g0};
    for (Player y : {Player::row, Player::col}) {
        const NoiseParams& p = spec.view(y);
        Bimatrix2x2& v = y == Player::row ? mg.view_r : mg.view_c;
        for (Player t : {Player::row, Player::col})
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const double sd = p.std(t)[i][j];
                    v.payoff(t)[i][j] += p.mean(t)[i][j] + (sd > 0 ? sd * z(rng) : 0.0);
                }
    }
    return mg;
}

McEstimate estimate(const Bimatrix2x2& g0, const NoiseSpec& spec, Tolerance eps, const McConfig& cfg) {
    cfg.validate();
    spec.validate();
    classify_player(g0, Player::row);
    classify_player(g0, Player::col);

    const std::size_t blocks = (cfg.reps + block_size - 1) / block_size;
    std::vector<Counts> counts(blocks);
    unsigned nthreads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    nthreads = unsigned(std::min<std::size_t>(nthreads, blocks));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t b; (b = next.fetch_add(1)) < blocks;) {
            try {
                const std::size_t n = std::min(block_size, cfg.reps - b * block_size);
                counts[b] = run_block(g0, spec, eps, cfg, b, n);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = blocks;
            }
        }
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    Counts total;
    for (const Counts& c : counts) {
        total.mis += c.mis;
        total.inv += c.inv;
        total.best += c.best;
        total.worst += c.worst;
        total.resamples += c.resamples;
    }
    McEstimate e;
    e.reps = cfg.reps;
    const double n = double(cfg.reps);
    e.freq_mis = double(total.mis) / n;
    e.freq_inv = double(total.inv) / n;
    e.freq_best = double(total.best) / n;
    e.freq_worst = double(total.worst) / n;
    e.se_mis = binomial_se(e.freq_mis, cfg.reps);
    e.se_inv = binomial_se(e.freq_inv, cfg.reps);
    e.se_best = binomial_se(e.freq_best, cfg.reps);
    e.se_worst = binomial_se(e.freq_worst, cfg.reps);
    e.degenerate_resamples = total.resamples;
    return e;
}

std::vector<SweepRow> sweep(const Bimatrix2x2& g0, const NoiseSpec& spec_shape, Tolerance eps,
                            const std::vector<double>& d_values, const McConfig& cfg, SweepMode mode,
                            const QuadratureConfig& qcfg) {
    for (double d : d_values)
        if (!(d > 0) || !std::isfinite(d)) throw std::invalid_argument(fmt::format("noise level {} must be positive", d));
    std::vector<SweepRow> rows;
    rows.reserve(d_values.size());
    for (std::size_t k = 0; k < d_values.size(); ++k) {
        const double d = d_values[k];
        const NoiseSpec spec = spec_shape.with_scaled_std(d);
        SweepRow row{d, std::nullopt, std::nullopt, std::nullopt};
        if (mode != SweepMode::mc) {
            const ConsistencyReport rep = consistency_probabilities(g0, spec, eps, qcfg);
            row.p_mis_theory = rep.p_mis;
            row.p_inv_theory = rep.p_inv;
        }
        if (mode != SweepMode::theory) {
            McConfig c = cfg;
            c.seed = cfg.seed ^ std::uint64_t(k);
            row.mc = estimate(g0, spec, eps, c);
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace noisy
