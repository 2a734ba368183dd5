#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "noisygames/game.hpp"
#include "noisygames/misinfo.hpp"
#include "noisygames/normal.hpp"

namespace noisy {

/// A utility gain whose distribution has zero spread at zero, so the
/// subjective game is degenerate with positive probability.
class DegenerateNoiseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Outer-integral settings. abs_tol is handed to Gauss-Kronrod as its error
/// target relative to the L1 norm of the integrand, which never exceeds 1
/// here, so it also bounds the absolute error.
struct QuadratureConfig {
    double abs_tol = 1e-10;
    double truncation_sigmas = 12.0;
    std::size_t max_subdivisions = 1'000'000;

    void validate() const;
    /// Defaults, with abs_tol taken from NOISYGAMES_QUAD_TOL when set.
    static QuadratureConfig from_env();
};

enum class RatioSign { positive, negative };

/// corrected: ∫ (F_X(Ω₂y) - F_X(Ω₁y)) f_Y(y) dy over the sign half-line.
/// literal: the same integrand divided by |y|, with |y| < 1e-8 cut out.
enum class RatioMode { corrected, literal };

/// Law of the utility gain of `subject` against opponent pure strategy i,
/// as seen in the subjective game of `viewer`.
struct UGainDist {
    NormalDist dist;
    Player viewer;
    Player subject;
    int opponent_pure;
};

UGainDist ugain_distribution(const Bimatrix2x2& g0, const NoiseSpec& spec, Player viewer, Player subject, int i);

/// P[Ω₁ <= X/Y <= Ω₂, sign(Y) = s] for independent X, Y.
/// Requires -inf <= Ω₁ <= Ω₂ <= 0.
double ratio_region_integral(const NormalDist& x, const NormalDist& y, double omega1, double omega2, RatioSign s,
                             const QuadratureConfig& cfg = {}, RatioMode mode = RatioMode::corrected);

/// (ω-1)/ω, with 0 mapped to -inf.
double ratio_bound(double omega) noexcept;

/// NE-class probabilities of player x's subjective game.
class ClassProbabilities {
public:
    ClassProbabilities(Player x, std::array<NormalDist, 2> own, std::array<NormalDist, 2> opp,
                       QuadratureConfig cfg, RatioMode mode);

    Player player() const noexcept { return x_; }

    double p_op1() const noexcept { return op1_; }
    double p_op2() const noexcept { return op2_; }
    double p_in() const noexcept { return 0.0; }
    /// Only-mixed with mixed probability in (w1, w2).
    double p_rom(double w1, double w2) const;
    /// Pure-and-mixed with mixed probability in (w1, w2).
    double p_rpm(double w1, double w2) const;
    double p_rom(const Window& w) const { return p_rom(w.lo, w.hi); }
    double p_rpm(const Window& w) const { return p_rpm(w.lo, w.hi); }

    /// F(0) of own gains (i = 1, 2) then opponent gains, all in x's view.
    std::array<double, 4> f_at_zero() const noexcept { return {a_[0], a_[1], b_[0], b_[1]}; }
    const std::array<NormalDist, 2>& own_gains() const noexcept { return own_; }
    const std::array<NormalDist, 2>& opponent_gains() const noexcept { return opp_; }

private:
    Player x_;
    std::array<NormalDist, 2> own_, opp_;
    QuadratureConfig cfg_;
    RatioMode mode_;
    std::array<double, 2> a_{}, b_{};
    double op1_ = 0, op2_ = 0;

    std::pair<double, double> ratio_terms(double w1, double w2) const;
};

ClassProbabilities class_probabilities(const Bimatrix2x2& g0, const NoiseSpec& spec, Player x,
                                       const QuadratureConfig& cfg = {}, RatioMode mode = RatioMode::corrected);

struct PlayerConsistency {
    Player player;
    NEClass actual_class;
    /// Window used for the mixed terms: the ε-window around the actual
    /// mixed probability, the InfiniteNash window, or (0,1) for pure rows.
    Window window;
    ClassProbabilities probs;
    double p_op1, p_op2, p_rom, p_rpm;
    double factor_mis;
    double factor_inv;
};

struct ConsistencyReport {
    double epsilon;
    /// Probability of being ε-misinformed. Equal to the product of the
    /// per-player factor_mis except for pure-and-mixed actual games, where
    /// pure nme must pair up like the actual pure equilibria.
    double p_mis;
    double p_inv;
    /// factor_mis(r) * factor_mis(c).
    double p_mis_factorized;
    std::array<PlayerConsistency, 2> players;

    const PlayerConsistency& of(Player x) const noexcept { return players[x == Player::row ? 0 : 1]; }
};

ConsistencyReport consistency_probabilities(const Bimatrix2x2& g0, const NoiseSpec& spec, Tolerance eps,
                                            const QuadratureConfig& cfg = {},
                                            RatioMode mode = RatioMode::corrected);

struct Crossing {
    double lo;
    double hi;
};

/// Brackets where p_mis(d) over spec_shape.with_scaled_std(d) crosses
/// target, each bisected to width 1e-4.
std::vector<Crossing> noise_threshold_scan(const Bimatrix2x2& g0, const NoiseSpec& spec_shape, Tolerance eps,
                                           double target, const std::vector<double>& d_grid,
                                           const QuadratureConfig& cfg = {});

}  // namespace noisy
