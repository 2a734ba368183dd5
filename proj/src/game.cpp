#include "noisygames/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <fmt/format.h>

namespace noisy {

bool Bimatrix2x2::all_finite() const noexcept {
    for (const Matrix2* m : {&payoff_r, &payoff_c})
        for (const auto& row : *m)
            for (double v : row)
                if (!std::isfinite(v)) return false;
    return true;
}

Bimatrix2x2 operator+(const Bimatrix2x2& a, const Bimatrix2x2& b) {
    Bimatrix2x2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            out.payoff_r[i][j] = a.payoff_r[i][j] + b.payoff_r[i][j];
            out.payoff_c[i][j] = a.payoff_c[i][j] + b.payoff_c[i][j];
        }
    return out;
}

Strategy::Strategy(double p) : p_(p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(fmt::format("strategy probability {} outside [0,1]", p));
}

Strategy Strategy::pure(int index) {
    if (index != 1 && index != 2)
        throw std::invalid_argument(fmt::format("pure strategy index {} not in {{1,2}}", index));
    return Strategy(index == 1 ? 1.0 : 0.0);
}

Strategy::Support Strategy::support() const noexcept {
    if (p_ == 1.0) return Support::first;
    if (p_ == 0.0) return Support::second;
    return Support::both;
}

std::string to_string(const Strategy& s) {
    return fmt::format("({:.6g},{:.6g})", s.p(), 1.0 - s.p());
}

std::string to_string(const StrategyProfile& s) {
    return fmt::format("({},{})", to_string(s.row), to_string(s.col));
}

std::string to_string(const NEClass& c) {
    struct {
        std::string operator()(const OnlyPure& v) const { return fmt::format("OnlyPure({})", v.index); }
        std::string operator()(const OnlyMixed& v) const { return fmt::format("OnlyMixed({:.17g})", v.p); }
        std::string operator()(const PureAndMixed& v) const { return fmt::format("PureAndMixed({:.17g})", v.p); }
        std::string operator()(const InfiniteNash&) const { return "InfiniteNash"; }
    } visitor;
    return std::visit(visitor, c);
}

std::optional<double> mixed_part(const NEClass& c) noexcept {
    if (auto* m = std::get_if<OnlyMixed>(&c)) return m->p;
    if (auto* m = std::get_if<PureAndMixed>(&c)) return m->p;
    return std::nullopt;
}

std::vector<Strategy> strategies_of(const NEClass& c) {
    if (auto* v = std::get_if<OnlyPure>(&c)) return {Strategy::pure(v->index)};
    if (auto* v = std::get_if<OnlyMixed>(&c)) return {Strategy(v->p)};
    if (auto* v = std::get_if<PureAndMixed>(&c)) return {Strategy(1.0), Strategy(0.0), Strategy(v->p)};
    throw std::invalid_argument("InfiniteNash has no finite strategy list");
}

double utility_gain(const Bimatrix2x2& g, Player x, int i) {
    if (i != 1 && i != 2)
        throw std::invalid_argument(fmt::format("pure index {} not in {{1,2}}", i));
    const int k = i - 1;
    if (x == Player::row) return g.payoff_r[0][k] - g.payoff_r[1][k];
    return g.payoff_c[k][0] - g.payoff_c[k][1];
}

bool is_degenerate(const Bimatrix2x2& g) noexcept {
    for (Player x : {Player::row, Player::col})
        for (int i : {1, 2})
            if (utility_gain(g, x, i) == 0.0) return true;
    return false;
}

double mixed_probability(const Bimatrix2x2& g, Player x) {
    const Player o = opponent(x);
    const double u1 = utility_gain(g, o, 1);
    const double u2 = utility_gain(g, o, 2);
    if (is_degenerate(g) || (u1 > 0) == (u2 > 0))
        throw NoMixedEquilibriumError(
            fmt::format("no mixed equilibrium strategy for player {}: opponent gains {} and {}",
                        to_string(x), u1, u2));
    return u2 / (u2 - u1);
}

std::string_view to_string(SignCase c) noexcept {
    switch (c) {
        case SignCase::c1a: return "1a";
        case SignCase::c1b: return "1b";
        case SignCase::c1c: return "1c";
        case SignCase::c2a: return "2a";
        case SignCase::c2b: return "2b";
        case SignCase::c2c: return "2c";
        case SignCase::c3a: return "3a";
        case SignCase::c3b: return "3b";
        case SignCase::c4a: return "4a";
        case SignCase::c4b: return "4b";
    }
    return "?";
}

SignCase sign_case(const Bimatrix2x2& g, Player x) {
    if (is_degenerate(g)) throw DegenerateGameError("sign case undefined for a degenerate game");
    const Player o = opponent(x);
    const bool a1 = utility_gain(g, x, 1) > 0, a2 = utility_gain(g, x, 2) > 0;
    const bool b1 = utility_gain(g, o, 1) > 0, b2 = utility_gain(g, o, 2) > 0;
    if (a1 && a2) return SignCase::c1a;
    if (!a1 && !a2) return SignCase::c2a;
    if (a1) {  // (+,-)
        if (b1 && b2) return SignCase::c1b;
        if (!b1 && !b2) return SignCase::c2c;
        return b2 ? SignCase::c3a : SignCase::c4a;
    }
    // (-,+)
    if (!b1 && !b2) return SignCase::c1c;
    if (b1 && b2) return SignCase::c2b;
    return b1 ? SignCase::c3b : SignCase::c4b;
}

namespace {

// Best-response set of a player whose s1-advantage is `gain`, as an interval
// of s1-probabilities.
std::pair<double, double> best_response(double gain) noexcept {
    if (gain > 0) return {1.0, 1.0};
    if (gain < 0) return {0.0, 0.0};
    return {0.0, 1.0};
}

// x's s1-advantage is linear in the opponent's s1-probability q, with
// value gain2 at q = 0 and gain1 at q = 1. Checks whether some q in
// [qlo, qhi] makes p a best response of x.
bool supports(double p, std::pair<double, double> qs, double gain1, double gain2) {
    auto at = [&](double q) { return q == 1.0 ? gain1 : gain2; };
    const double lo = at(qs.first), hi = at(qs.second);
    if (p == 1.0) return std::max(lo, hi) >= 0;
    if (p == 0.0) return std::min(lo, hi) <= 0;
    return std::min(lo, hi) <= 0 && std::max(lo, hi) >= 0;
}

bool every_strategy_is_equilibrium(const Bimatrix2x2& g, Player x) {
    const Player o = opponent(x);
    const double a1 = utility_gain(g, x, 1), a2 = utility_gain(g, x, 2);
    const double b1 = utility_gain(g, o, 1), b2 = utility_gain(g, o, 2);
    // Opponent advantage at p = 1 is b1, at p = 0 is b2, linear in between.
    if (!supports(1.0, best_response(b1), a1, a2)) return false;
    if (!supports(0.0, best_response(b2), a1, a2)) return false;
    // Sign classes of the opponent advantage reached on the open interval.
    std::vector<double> interior;
    if (b1 == 0 && b2 == 0) {
        interior = {0.0};
    } else if ((b1 > 0 && b2 < 0) || (b1 < 0 && b2 > 0)) {
        interior = {1.0, -1.0, 0.0};
    } else {
        interior = {b1 != 0 ? b1 : b2};
    }
    return std::all_of(interior.begin(), interior.end(),
                       [&](double s) { return supports(0.5, best_response(s), a1, a2); });
}

}  // namespace

NEClass classify_player(const Bimatrix2x2& g, Player x) {
    if (is_degenerate(g)) {
        if (every_strategy_is_equilibrium(g, x)) return InfiniteNash{};
        throw DegenerateGameError(fmt::format(
            "degenerate game with a finite equilibrium-strategy set for player {} is not classifiable",
            to_string(x)));
    }
    switch (sign_case(g, x)) {
        case SignCase::c1a:
        case SignCase::c1b:
        case SignCase::c1c: return OnlyPure{1};
        case SignCase::c2a:
        case SignCase::c2b:
        case SignCase::c2c: return OnlyPure{2};
        case SignCase::c3a:
        case SignCase::c3b: return OnlyMixed{mixed_probability(g, x)};
        case SignCase::c4a:
        case SignCase::c4b: return PureAndMixed{mixed_probability(g, x)};
    }
    throw std::logic_error("unreachable sign case");
}

std::vector<StrategyProfile> enumerate_nash(const Bimatrix2x2& g) {
    if (is_degenerate(g)) throw DegenerateGameError("equilibrium enumeration needs a non-degenerate game");
    const NEClass r = classify_player(g, Player::row);
    const NEClass c = classify_player(g, Player::col);
    if (auto* pr = std::get_if<OnlyPure>(&r)) {
        const auto& pc = std::get<OnlyPure>(c);
        return {{Strategy::pure(pr->index), Strategy::pure(pc.index)}};
    }
    if (auto* mr = std::get_if<OnlyMixed>(&r)) return {{Strategy(mr->p), Strategy(std::get<OnlyMixed>(c).p)}};
    const double p = std::get<PureAndMixed>(r).p;
    const double q = std::get<PureAndMixed>(c).p;
    if (sign_case(g, Player::row) == SignCase::c4a)
        return {{Strategy(1.0), Strategy(1.0)}, {Strategy(0.0), Strategy(0.0)}, {Strategy(p), Strategy(q)}};
    return {{Strategy(1.0), Strategy(0.0)}, {Strategy(0.0), Strategy(1.0)}, {Strategy(p), Strategy(q)}};
}

double payoff(const Bimatrix2x2& g, Player x, const StrategyProfile& s) noexcept {
    const Matrix2& m = g.payoff(x);
    const double p = s.row.p(), q = s.col.p();
    return p * (q * m[0][0] + (1 - q) * m[0][1]) + (1 - p) * (q * m[1][0] + (1 - q) * m[1][1]);
}

double social_welfare(const Bimatrix2x2& g, const StrategyProfile& s) noexcept {
    return payoff(g, Player::row, s) + payoff(g, Player::col, s);
}

WelfareOptimum optimal_welfare(const Bimatrix2x2& g) noexcept {
    WelfareOptimum best{{Strategy(1.0), Strategy(1.0)}, -std::numeric_limits<double>::infinity()};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double sw = g.payoff_r[i][j] + g.payoff_c[i][j];
            if (sw > best.welfare) best = {{Strategy(i == 0 ? 1.0 : 0.0), Strategy(j == 0 ? 1.0 : 0.0)}, sw};
        }
    return best;
}

double min_vertex_welfare(const Bimatrix2x2& g) noexcept {
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) lo = std::min(lo, g.payoff_r[i][j] + g.payoff_c[i][j]);
    return lo;
}

double price_of_anarchy(const Bimatrix2x2& g) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& s : enumerate_nash(g)) worst = std::min(worst, social_welfare(g, s));
    if (worst == 0.0) throw UndefinedRatioError("undefined PoA: worst equilibrium has zero welfare (zero-sum)");
    return optimal_welfare(g).welfare / worst;
}

Bimatrix2x2 shift_game(const Bimatrix2x2& g, double a) noexcept {
    Bimatrix2x2 out = g;
    for (Matrix2* m : {&out.payoff_r, &out.payoff_c})
        for (auto& row : *m)
            for (double& v : row) v += a;
    return out;
}

Bimatrix2x2 scale_game(const Bimatrix2x2& g, double lambda) {
    if (!(lambda > 0)) throw std::invalid_argument(fmt::format("scale factor {} must be positive", lambda));
    Bimatrix2x2 out = g;
    for (Matrix2* m : {&out.payoff_r, &out.payoff_c})
        for (auto& row : *m)
            for (double& v : row) v *= lambda;
    return out;
}

namespace games {

Bimatrix2x2 prisoners_dilemma() { return {{{{2, 0}, {3, 1}}}, {{{2, 3}, {0, 1}}}}; }
Bimatrix2x2 matching_pennies() { return {{{{1, -1}, {-1, 1}}}, {{{-1, 1}, {1, -1}}}}; }
Bimatrix2x2 battle_of_the_sexes() { return {{{{2, 0}, {0, 1}}}, {{{1, 0}, {0, 2}}}}; }
Bimatrix2x2 win_win() { return {{{{3, 4}, {1, 2}}}, {{{2, 4}, {1, 3}}}}; }
Bimatrix2x2 bos_variant() { return {{{{3, 0}, {0, 2}}}, {{{2, 0}, {0, 3}}}}; }

std::optional<Bimatrix2x2> by_name(std::string_view name) {
    if (name == "pd") return prisoners_dilemma();
    if (name == "mp") return matching_pennies();
    if (name == "bos") return battle_of_the_sexes();
    if (name == "ww") return win_win();
    return std::nullopt;
}

}  // namespace games

}  // namespace noisy
