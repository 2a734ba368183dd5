#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace noisy {

using Matrix2 = std::array<std::array<double, 2>, 2>;

enum class Player { row, col };

constexpr Player opponent(Player x) noexcept {
    return x == Player::row ? Player::col : Player::row;
}

constexpr std::string_view to_string(Player x) noexcept {
    return x == Player::row ? "r" : "c";
}

/// Thrown when an operation needs a non-degenerate game, or when a degenerate
/// game falls outside the Infinite-Nash pattern.
class DegenerateGameError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoMixedEquilibriumError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Welfare ratio whose denominator is zero (zero-sum games and friends).
class UndefinedRatioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two-player, two-strategy game. Entry [i][j] is the payoff when the row
/// player plays s_{i+1} and the column player plays s_{j+1}.
struct Bimatrix2x2 {
    Matrix2 payoff_r{};
    Matrix2 payoff_c{};

    const Matrix2& payoff(Player x) const noexcept { return x == Player::row ? payoff_r : payoff_c; }
    Matrix2& payoff(Player x) noexcept { return x == Player::row ? payoff_r : payoff_c; }

    bool all_finite() const noexcept;

    friend bool operator==(const Bimatrix2x2&, const Bimatrix2x2&) = default;
};

Bimatrix2x2 operator+(const Bimatrix2x2& a, const Bimatrix2x2& b);

/// Mixed strategy (p, 1-p) over {s1, s2}.
class Strategy {
public:
    enum class Support { first, second, both };

    explicit Strategy(double p);
    static Strategy pure(int index);

    double p() const noexcept { return p_; }
    Support support() const noexcept;
    bool is_pure() const noexcept { return p_ == 0.0 || p_ == 1.0; }

    friend bool operator==(const Strategy&, const Strategy&) = default;

private:
    double p_;
};

struct StrategyProfile {
    Strategy row;
    Strategy col;

    const Strategy& of(Player x) const noexcept { return x == Player::row ? row : col; }
    friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;
};

std::string to_string(const Strategy& s);
std::string to_string(const StrategyProfile& s);

// Per-player equilibrium-strategy classes.
struct OnlyPure {
    int index;  // 1 or 2
    friend bool operator==(const OnlyPure&, const OnlyPure&) = default;
};
struct OnlyMixed {
    double p;
    friend bool operator==(const OnlyMixed&, const OnlyMixed&) = default;
};
struct PureAndMixed {
    double p;
    friend bool operator==(const PureAndMixed&, const PureAndMixed&) = default;
};
struct InfiniteNash {
    friend bool operator==(const InfiniteNash&, const InfiniteNash&) = default;
};

using NEClass = std::variant<OnlyPure, OnlyMixed, PureAndMixed, InfiniteNash>;

std::string to_string(const NEClass& c);

/// Mixed probability carried by an OnlyMixed / PureAndMixed class.
std::optional<double> mixed_part(const NEClass& c) noexcept;

/// Equilibrium strategies of a finite class, pure ones first.
/// Throws std::invalid_argument for InfiniteNash.
std::vector<Strategy> strategies_of(const NEClass& c);

/// Gain of s1 over s2 for player x when the opponent plays s_i (i in {1,2}).
double utility_gain(const Bimatrix2x2& g, Player x, int i);

/// Exact test: some utility gain is exactly zero.
bool is_degenerate(const Bimatrix2x2& g) noexcept;

/// s1-probability of x's mixed equilibrium strategy: it makes the opponent
/// indifferent, p = ug(x̄,2) / (ug(x̄,2) - ug(x̄,1)).
double mixed_probability(const Bimatrix2x2& g, Player x);

/// Sign-pattern cases of the 2x2 equilibrium taxonomy, from x's point of view.
enum class SignCase { c1a, c1b, c1c, c2a, c2b, c2c, c3a, c3b, c4a, c4b };

std::string_view to_string(SignCase c) noexcept;

/// Matching case for a non-degenerate game, seen from player x.
SignCase sign_case(const Bimatrix2x2& g, Player x);

NEClass classify_player(const Bimatrix2x2& g, Player x);

/// Full Nash equilibrium set of a non-degenerate game: pure profiles first
/// (lexicographic, s1 before s2), then the mixed one.
std::vector<StrategyProfile> enumerate_nash(const Bimatrix2x2& g);

double payoff(const Bimatrix2x2& g, Player x, const StrategyProfile& s) noexcept;
double social_welfare(const Bimatrix2x2& g, const StrategyProfile& s) noexcept;

struct WelfareOptimum {
    StrategyProfile profile;
    double welfare;
};

/// Best pure profile; SW is bilinear so a vertex always attains the maximum.
/// Ties go to the lexicographically first (i, j).
WelfareOptimum optimal_welfare(const Bimatrix2x2& g) noexcept;

/// Smallest SW over the four pure profiles.
double min_vertex_welfare(const Bimatrix2x2& g) noexcept;

double price_of_anarchy(const Bimatrix2x2& g);

Bimatrix2x2 shift_game(const Bimatrix2x2& g, double a) noexcept;
Bimatrix2x2 scale_game(const Bimatrix2x2& g, double lambda);

namespace games {

Bimatrix2x2 prisoners_dilemma();
Bimatrix2x2 matching_pennies();
Bimatrix2x2 battle_of_the_sexes();
Bimatrix2x2 win_win();
/// Battle of the Sexes with payoffs 3 and 2: ((3,2),(0,0);(0,0),(2,3)).
Bimatrix2x2 bos_variant();

/// "pd", "mp", "bos" or "ww".
std::optional<Bimatrix2x2> by_name(std::string_view name);

}  // namespace games

}  // namespace noisy
