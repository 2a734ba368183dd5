#include "noisygames/misinfo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace noisy {

bool NoiseParams::zero_noise() const noexcept {
    for (const Matrix2* m : {&mean_r, &mean_c, &std_r, &std_c})
        for (const auto& row : *m)
            for (double v : row)
                if (v != 0.0) return false;
    return true;
}

NoiseSpec::NoiseSpec(const NoiseParams& both) : view_r(both), view_c(both) {}

NoiseSpec::NoiseSpec(const NoiseParams& r, const NoiseParams& c) : view_r(r), view_c(c) {}

NoiseSpec NoiseSpec::uniform(double d) {
    NoiseParams p;
    for (Matrix2* m : {&p.std_r, &p.std_c})
        for (auto& row : *m) row = {d, d};
    NoiseSpec s(p);
    s.validate();
    return s;
}

NoiseSpec NoiseSpec::with_scaled_std(double d) const {
    if (!(d >= 0) || !std::isfinite(d)) throw std::invalid_argument(fmt::format("noise scale {} must be >= 0", d));
    NoiseSpec out = *this;
    for (NoiseParams* v : {&out.view_r, &out.view_c})
        for (Matrix2* m : {&v->std_r, &v->std_c})
            for (auto& row : *m)
                for (double& s : row) s *= d;
    return out;
}

void NoiseSpec::validate() const {
    for (Player y : {Player::row, Player::col}) {
        const NoiseParams& v = view(y);
        for (Player t : {Player::row, Player::col})
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const double m = v.mean(t)[i][j], s = v.std(t)[i][j];
                    if (!std::isfinite(m) || !std::isfinite(s) || s < 0)
                        throw std::invalid_argument(fmt::format(
                            "view {}: noise on {}[{}][{}] has mean {} and std {}", to_string(y),
                            t == Player::row ? "P_r" : "P_c", i, j, m, s));
                }
    }
}

Tolerance::Tolerance(double eps) : eps_(eps) {
    if (!(eps >= 0) || std::isnan(eps)) throw std::invalid_argument(fmt::format("tolerance {} must be >= 0", eps));
}

Window epsilon_window(double p0, Tolerance eps) {
    if (!(p0 > 0 && p0 < 1)) throw std::invalid_argument(fmt::format("window centre {} not in (0,1)", p0));
    return {std::max(0.0, p0 - eps.value()), std::min(1.0, p0 + eps.value())};
}

Window in_window(Tolerance eps) {
    return {std::max(0.0, 1.0 - eps.value()), std::min(1.0, eps.value())};
}

namespace {

NEClass view_class(const MisinformationGame& mg, Player x) {
    const Bimatrix2x2& v = mg.view(x);
    if (is_degenerate(v))
        throw DegenerateGameError(fmt::format("subjective game of player {} is degenerate", to_string(x)));
    return classify_player(v, x);
}

bool is_pure(const NEClass& c, int index) {
    const auto* p = std::get_if<OnlyPure>(&c);
    return p && p->index == index;
}

bool only_mixed_in(const NEClass& c, const Window& w) {
    const auto* m = std::get_if<OnlyMixed>(&c);
    return m && w.contains(m->p);
}

}  // namespace

std::vector<StrategyProfile> natural_misinformed_equilibria(const MisinformationGame& mg) {
    const auto rs = strategies_of(view_class(mg, Player::row));
    const auto cs = strategies_of(view_class(mg, Player::col));
    std::vector<StrategyProfile> out;
    out.reserve(rs.size() * cs.size());
    for (const auto& r : rs)
        for (const auto& c : cs) out.push_back({r, c});
    return out;
}

bool epsilon_close(const Strategy& a, const Strategy& b, Tolerance eps) noexcept {
    return a.support() == b.support() && std::abs(a.p() - b.p()) <= eps.value();
}

bool epsilon_close(const StrategyProfile& a, const StrategyProfile& b, Tolerance eps) noexcept {
    return epsilon_close(a.row, b.row, eps) && epsilon_close(a.col, b.col, eps);
}

PlayerVerdict player_verdict(const NEClass& actual, const NEClass& view, Tolerance eps) {
    if (std::holds_alternative<InfiniteNash>(view))
        throw std::invalid_argument("subjective game must have a finite equilibrium set");
    const auto view_p = mixed_part(view);
    const bool view_pm = std::holds_alternative<PureAndMixed>(view);

    if (const auto* op = std::get_if<OnlyPure>(&actual)) {
        const bool same = is_pure(view, op->index);
        return {same, same || view_pm};
    }
    if (const auto* om = std::get_if<OnlyMixed>(&actual)) {
        const Window w = epsilon_window(om->p, eps);
        const bool in = view_p && w.contains(*view_p);
        return {in && !view_pm, in};
    }
    if (const auto* pm = std::get_if<PureAndMixed>(&actual)) {
        const Window w = epsilon_window(pm->p, eps);
        const bool in = view_p && w.contains(*view_p);
        return {!view_p || in, in && view_pm};
    }
    const Window w = in_window(eps);
    return {true, view_pm && w.contains(*view_p)};
}

bool is_epsilon_misinformed(const MisinformationGame& mg, Tolerance eps) {
    const NEClass ar = classify_player(mg.actual, Player::row);
    const NEClass ac = classify_player(mg.actual, Player::col);
    const NEClass vr = view_class(mg, Player::row);
    const NEClass vc = view_class(mg, Player::col);
    if (const auto* pr = std::get_if<PureAndMixed>(&ar)) {
        // Pure nme must land on a pure equilibrium pair, mixed ones on the
        // mixed equilibrium; any view with both kinds fails.
        const double qc = std::get<PureAndMixed>(ac).p;
        const bool coord = sign_case(mg.actual, Player::row) == SignCase::c4a;
        const int partner1 = coord ? 1 : 2, partner2 = coord ? 2 : 1;
        if (is_pure(vr, 1)) return is_pure(vc, partner1);
        if (is_pure(vr, 2)) return is_pure(vc, partner2);
        return only_mixed_in(vr, epsilon_window(pr->p, eps)) && only_mixed_in(vc, epsilon_window(qc, eps));
    }
    return player_verdict(ar, vr, eps).mis && player_verdict(ac, vc, eps).mis;
}

bool is_inverse_epsilon_misinformed(const MisinformationGame& mg, Tolerance eps) {
    const NEClass ar = classify_player(mg.actual, Player::row);
    const NEClass ac = classify_player(mg.actual, Player::col);
    return player_verdict(ar, view_class(mg, Player::row), eps).inv &&
           player_verdict(ac, view_class(mg, Player::col), eps).inv;
}

double price_of_misinformation(const MisinformationGame& mg) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& s : natural_misinformed_equilibria(mg)) worst = std::min(worst, social_welfare(mg.actual, s));
    if (worst == 0.0) throw UndefinedRatioError("undefined PoM: worst nme has zero welfare (zero-sum)");
    return optimal_welfare(mg.actual).welfare / worst;
}

bool has_best_nme(const MisinformationGame& mg) {
    const double opt = optimal_welfare(mg.actual).welfare;
    const auto nme = natural_misinformed_equilibria(mg);
    return std::any_of(nme.begin(), nme.end(),
                       [&](const auto& s) { return social_welfare(mg.actual, s) >= opt - welfare_tie_tol; });
}

bool has_worst_nme(const MisinformationGame& mg) {
    const double lo = min_vertex_welfare(mg.actual);
    const auto nme = natural_misinformed_equilibria(mg);
    return std::any_of(nme.begin(), nme.end(),
                       [&](const auto& s) { return social_welfare(mg.actual, s) <= lo + welfare_tie_tol; });
}

std::vector<std::vector<std::optional<double>>> welfare_ratio_plane(const Bimatrix2x2& g, int n) {
    if (n < 2) throw std::invalid_argument(fmt::format("plane resolution {} must be >= 2", n));
    const double opt = optimal_welfare(g).welfare;
    std::vector<std::vector<std::optional<double>>> plane(n + 1, std::vector<std::optional<double>>(n + 1));
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b) {
            const double sw = social_welfare(g, {Strategy(double(a) / n), Strategy(double(b) / n)});
            if (sw != 0.0) plane[a][b] = opt / sw;
        }
    return plane;
}

}  // namespace noisy
