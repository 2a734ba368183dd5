#pragma once

#include <optional>
#include <vector>

#include "noisygames/game.hpp"

namespace noisy {

/// Actual game plus one subjective game per player.
struct MisinformationGame {
    Bimatrix2x2 actual;
    Bimatrix2x2 view_r;
    Bimatrix2x2 view_c;

    const Bimatrix2x2& view(Player x) const noexcept { return x == Player::row ? view_r : view_c; }

    /// Both players see the actual game.
    static MisinformationGame identity(const Bimatrix2x2& g) { return {g, g, g}; }
};

/// Gaussian perturbation seen by one player: entry [i][j] of each payoff
/// table gets independent N(mean, std^2) noise.
struct NoiseParams {
    Matrix2 mean_r{};
    Matrix2 mean_c{};
    Matrix2 std_r{};
    Matrix2 std_c{};

    const Matrix2& mean(Player table) const noexcept { return table == Player::row ? mean_r : mean_c; }
    const Matrix2& std(Player table) const noexcept { return table == Player::row ? std_r : std_c; }

    /// Mean perturbation as a bimatrix (M_r; M_c).
    Bimatrix2x2 mean_game() const noexcept { return {mean_r, mean_c}; }

    bool zero_noise() const noexcept;
};

/// Noise for both subjective games. The usual case uses the same parameters
/// for both views; they may also differ.
struct NoiseSpec {
    NoiseParams view_r;
    NoiseParams view_c;

    NoiseSpec() = default;
    explicit NoiseSpec(const NoiseParams& both);
    NoiseSpec(const NoiseParams& r, const NoiseParams& c);

    /// Every std entry equal to d, zero means.
    static NoiseSpec uniform(double d);

    const NoiseParams& view(Player y) const noexcept { return y == Player::row ? view_r : view_c; }
    NoiseParams& view(Player y) noexcept { return y == Player::row ? view_r : view_c; }

    /// Standard deviations multiplied by d; means untouched.
    NoiseSpec with_scaled_std(double d) const;

    /// Throws std::invalid_argument on negative or non-finite entries.
    void validate() const;
};

/// Non-negative closeness tolerance.
class Tolerance {
public:
    Tolerance(double eps);  // NOLINT: implicit on purpose
    double value() const noexcept { return eps_; }
    operator double() const noexcept { return eps_; }

private:
    double eps_;
};

/// Open window (lo, hi) of mixed probabilities.
struct Window {
    double lo;
    double hi;

    bool empty() const noexcept { return !(lo < hi); }
    bool contains(double p) const noexcept { return lo < p && p < hi; }
};

/// (max{0, p0-eps}, min{1, p0+eps}).
Window epsilon_window(double p0, Tolerance eps);
/// (max{0, 1-eps}, min{1, eps}); non-empty only for eps > 1/2.
Window in_window(Tolerance eps);

/// NE_r(G^r) x NE_c(G^c). Views must be non-degenerate.
std::vector<StrategyProfile> natural_misinformed_equilibria(const MisinformationGame& mg);

/// Identical supports and |p - p'| <= eps.
bool epsilon_close(const Strategy& a, const Strategy& b, Tolerance eps) noexcept;
bool epsilon_close(const StrategyProfile& a, const StrategyProfile& b, Tolerance eps) noexcept;

/// Per-player conditions: `mis` asks that every equilibrium strategy of the
/// view is close to one of the actual game, `inv` that every actual
/// equilibrium strategy has a close view strategy.
struct PlayerVerdict {
    bool mis;
    bool inv;
};

PlayerVerdict player_verdict(const NEClass& actual, const NEClass& view, Tolerance eps);

/// Every nme is eps-close to some equilibrium of the actual game.
/// When the actual game has pure-and-mixed equilibria the pairing of pure
/// profiles matters, so that case is decided on the joint view classes.
bool is_epsilon_misinformed(const MisinformationGame& mg, Tolerance eps);

/// Every equilibrium of the actual game has an eps-close nme.
bool is_inverse_epsilon_misinformed(const MisinformationGame& mg, Tolerance eps);

/// SW(opt) / min over nme of SW, both on the actual payoffs.
double price_of_misinformation(const MisinformationGame& mg);

/// Welfare-value rule: best iff SW >= SW(opt) - 1e-9, worst iff SW <= the
/// smallest vertex SW + 1e-9.
bool has_best_nme(const MisinformationGame& mg);
bool has_worst_nme(const MisinformationGame& mg);

constexpr double welfare_tie_tol = 1e-9;

/// (n+1) x (n+1) grid of SW(opt) / SW(p, q) with p = a/n, q = b/n.
/// Cells with zero welfare are empty.
std::vector<std::vector<std::optional<double>>> welfare_ratio_plane(const Bimatrix2x2& g, int n);

}  // namespace noisy
