#include "noisygames/probability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

namespace noisy {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double literal_cut = 1e-8;

// Globally adaptive Gauss-Kronrod: keep splitting the interval with the
// largest error estimate until the summed estimate drops below abs_tol.
template <class F>
double integrate(F f, double a, double b, const QuadratureConfig& cfg, std::vector<double> breaks = {}) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    struct Seg {
        double a, b, value, err;
    };
    auto by_err = [](const Seg& l, const Seg& r) { return l.err < r.err; };
    auto eval = [&](double lo, double hi) {
        double err = 0;
        const double v = GK::integrate(f, lo, hi, 0, cfg.abs_tol, &err);
        return Seg{lo, hi, v, err};
    };

    std::vector<double> cuts{a, b};
    for (double t : breaks)
        if (t > a && t < b) cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Seg> heap;
    double err = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        heap.push_back(eval(cuts[k], cuts[k + 1]));
        err += heap.back().err;
    }
    std::make_heap(heap.begin(), heap.end(), by_err);
    while (err > cfg.abs_tol && heap.size() < cfg.max_subdivisions) {
        std::pop_heap(heap.begin(), heap.end(), by_err);
        const Seg top = heap.back();
        const double mid = 0.5 * (top.a + top.b);
        if (!(mid > top.a && mid < top.b)) {
            std::push_heap(heap.begin(), heap.end(), by_err);
            break;
        }
        heap.back() = eval(top.a, mid);
        std::push_heap(heap.begin(), heap.end(), by_err);
        heap.push_back(eval(mid, top.b));
        std::push_heap(heap.begin(), heap.end(), by_err);
        err = 0;
        for (const Seg& s : heap) err += s.err;
    }
    double total = 0;
    for (const Seg& s : heap) total += s.value;
    return total;
}

const char* table_name(Player t) { return t == Player::row ? "P_r" : "P_c"; }

// The two payoff entries whose difference forms the gain of x against s_i.
std::array<std::array<int, 2>, 2> gain_entries(Player x, int i) {
    const int k = i - 1;
    if (x == Player::row) return {{{0, k}, {1, k}}};
    return {{{k, 0}, {k, 1}}};
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0)) throw std::invalid_argument(fmt::format("quadrature tolerance {} must be > 0", abs_tol));
    if (!(truncation_sigmas >= 8))
        throw std::invalid_argument(fmt::format("truncation at {} sigmas is below 8", truncation_sigmas));
    if (max_subdivisions < 1) throw std::invalid_argument("max_subdivisions must be >= 1");
}

QuadratureConfig QuadratureConfig::from_env() {
    QuadratureConfig cfg;
    if (const char* s = std::getenv("NOISYGAMES_QUAD_TOL"); s && *s) {
        char* end = nullptr;
        const double v = std::strtod(s, &end);
        if (end == s || *end != '\0')
            throw std::invalid_argument(fmt::format("NOISYGAMES_QUAD_TOL='{}' is not a number", s));
        cfg.abs_tol = v;
    }
    cfg.validate();
    return cfg;
}

UGainDist ugain_distribution(const Bimatrix2x2& g0, const NoiseSpec& spec, Player viewer, Player subject, int i) {
    if (i != 1 && i != 2) throw std::invalid_argument(fmt::format("pure index {} not in {{1,2}}", i));
    const auto e = gain_entries(subject, i);
    const Matrix2& p = g0.payoff(subject);
    const Matrix2& m = spec.view(viewer).mean(subject);
    const Matrix2& d = spec.view(viewer).std(subject);
    const double mu = (p[e[0][0]][e[0][1]] + m[e[0][0]][e[0][1]]) - (p[e[1][0]][e[1][1]] + m[e[1][0]][e[1][1]]);
    const double sd = std::hypot(d[e[0][0]][e[0][1]], d[e[1][0]][e[1][1]]);
    return {NormalDist(mu, sd), viewer, subject, i};
}

double ratio_bound(double omega) noexcept {
    if (omega == 0.0) return -inf;
    return (omega - 1.0) / omega;
}

double ratio_region_integral(const NormalDist& x, const NormalDist& y, double o1, double o2, RatioSign s,
                             const QuadratureConfig& cfg, RatioMode mode) {
    cfg.validate();
    if (std::isnan(o1) || std::isnan(o2) || !(o2 <= 0) || o1 > o2 || o2 == -inf)
        throw std::invalid_argument(fmt::format("ratio bounds ({}, {}) need -inf <= lo <= hi <= 0", o1, o2));
    if (x.deterministic() && x.mu == 0) throw DegenerateNoiseError("numerator is a point mass at 0");
    if (y.deterministic() && y.mu == 0) throw DegenerateNoiseError("denominator is a point mass at 0");
    if (o1 == o2) return 0.0;

    const bool pos = s == RatioSign::positive;
    const bool literal = mode == RatioMode::literal;
    // P[X between Ω₁t and Ω₂t]; -inf * t gives the right CDF limit.
    auto band = [&](double t) {
        if (t == 0) return 0.0;
        return pos ? x.cdf(o2 * t) - x.cdf(o1 * t) : x.cdf(o1 * t) - x.cdf(o2 * t);
    };
    auto clamp01 = [&](double v) { return literal ? v : std::clamp(v, 0.0, 1.0); };

    if (y.deterministic()) {
        if ((y.mu > 0) != pos) return 0.0;
        return clamp01(literal ? band(y.mu) / std::abs(y.mu) : band(y.mu));
    }

    const double k = cfg.truncation_sigmas;
    double lo = y.mu - k * y.sd, hi = y.mu + k * y.sd;
    if (pos) lo = std::max(lo, literal ? literal_cut : 0.0);
    else hi = std::min(hi, literal ? -literal_cut : 0.0);

    if (x.deterministic()) {
        // The event is Y in an interval determined by x0 / Ω.
        const double x0 = x.mu;
        double ylo, yhi;
        if (pos) {
            if (x0 > 0) return 0.0;
            ylo = o1 == -inf ? 0.0 : x0 / o1;
            yhi = o2 == 0 ? inf : x0 / o2;
        } else {
            if (x0 < 0) return 0.0;
            ylo = o2 == 0 ? -inf : x0 / o2;
            yhi = o1 == -inf ? 0.0 : x0 / o1;
        }
        if (!literal) return clamp01(y.cdf(yhi) - y.cdf(ylo));
        lo = std::max(lo, ylo);
        hi = std::min(hi, yhi);
        if (!(lo < hi)) return 0.0;
        return integrate([&](double t) { return y.pdf(t) / std::abs(t); }, lo, hi, cfg);
    }

    if (!(lo < hi)) return 0.0;
    // F_X(Ω t) turns over near t = (μ_X + z σ_X) / Ω, which is a narrow
    // strip when |Ω| is large. Start the subdivision there.
    std::vector<double> breaks{y.mu};
    for (double o : {o1, o2}) {
        if (o == 0 || o == -inf) continue;
        for (double z : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0}) breaks.push_back((x.mu + z * x.sd) / o);
    }
    if (literal)
        return integrate([&](double t) { return band(t) * y.pdf(t) / std::abs(t); }, lo, hi, cfg, breaks);
    return clamp01(integrate([&](double t) { return band(t) * y.pdf(t); }, lo, hi, cfg, breaks));
}

ClassProbabilities::ClassProbabilities(Player x, std::array<NormalDist, 2> own, std::array<NormalDist, 2> opp,
                                       QuadratureConfig cfg, RatioMode mode)
    : x_(x), own_(own), opp_(opp), cfg_(cfg), mode_(mode) {
    cfg_.validate();
    for (const auto* group : {&own_, &opp_})
        for (const NormalDist& d : *group)
            if (d.deterministic() && d.mu == 0)
                throw DegenerateNoiseError("a utility gain is identically zero");
    for (int i = 0; i < 2; ++i) {
        a_[i] = own_[i].cdf(0.0);
        b_[i] = opp_[i].cdf(0.0);
    }
    const double a1 = a_[0], a2 = a_[1], b1 = b_[0], b2 = b_[1];
    op1_ = (1 - a1) * (1 - a2) + (1 - a1) * a2 * (1 - b1) * (1 - b2) + a1 * (1 - a2) * b1 * b2;
    op2_ = a1 * a2 + a1 * (1 - a2) * (1 - b1) * (1 - b2) + (1 - a1) * a2 * b1 * b2;
}

std::pair<double, double> ClassProbabilities::ratio_terms(double w1, double w2) const {
    if (!(w1 >= 0 && w2 <= 1))
        throw std::invalid_argument(fmt::format("window ({}, {}) not inside [0,1]", w1, w2));
    if (!(w1 < w2)) return {0.0, 0.0};
    const double o1 = ratio_bound(w1), o2 = ratio_bound(w2);
    // Own gains (+,-) pair with opponent (-,+) for only-mixed and (+,-) for
    // pure-and-mixed; own (-,+) the other way round.
    const double plus_minus = (1 - a_[0]) * a_[1];
    const double minus_plus = a_[0] * (1 - a_[1]);
    const double i_pos = plus_minus + minus_plus > 0
                             ? ratio_region_integral(opp_[0], opp_[1], o1, o2, RatioSign::positive, cfg_, mode_)
                             : 0.0;
    const double i_neg = plus_minus + minus_plus > 0
                             ? ratio_region_integral(opp_[0], opp_[1], o1, o2, RatioSign::negative, cfg_, mode_)
                             : 0.0;
    return {plus_minus * i_pos + minus_plus * i_neg, plus_minus * i_neg + minus_plus * i_pos};
}

double ClassProbabilities::p_rom(double w1, double w2) const { return ratio_terms(w1, w2).first; }

double ClassProbabilities::p_rpm(double w1, double w2) const { return ratio_terms(w1, w2).second; }

ClassProbabilities class_probabilities(const Bimatrix2x2& g0, const NoiseSpec& spec, Player x,
                                       const QuadratureConfig& cfg, RatioMode mode) {
    spec.validate();
    std::array<NormalDist, 2> own, opp;
    for (Player subject : {x, opponent(x)})
        for (int i : {1, 2}) {
            const UGainDist u = ugain_distribution(g0, spec, x, subject, i);
            if (u.dist.deterministic() && u.dist.mu == 0) {
                const auto e = gain_entries(subject, i);
                throw DegenerateNoiseError(fmt::format(
                    "view {}: {}[{}][{}] - {}[{}][{}] is exactly 0 with no noise, so the subjective game is "
                    "always degenerate",
                    to_string(x), table_name(subject), e[0][0] + 1, e[0][1] + 1, table_name(subject), e[1][0] + 1,
                    e[1][1] + 1));
            }
            (subject == x ? own : opp)[i - 1] = u.dist;
        }
    return ClassProbabilities(x, own, opp, cfg, mode);
}

namespace {

PlayerConsistency player_consistency(const Bimatrix2x2& g0, const NoiseSpec& spec, Player x, Tolerance eps,
                                     const QuadratureConfig& cfg, RatioMode mode) {
    const NEClass cls = classify_player(g0, x);
    ClassProbabilities probs = class_probabilities(g0, spec, x, cfg, mode);
    Window w{0.0, 1.0};
    if (auto p = mixed_part(cls)) w = epsilon_window(*p, eps);
    else if (std::holds_alternative<InfiniteNash>(cls)) w = in_window(eps);
    const double rom = probs.p_rom(w), rpm = probs.p_rpm(w);
    const double op1 = probs.p_op1(), op2 = probs.p_op2();

    double mis = 0, inv = 0;
    if (const auto* op = std::get_if<OnlyPure>(&cls)) {
        mis = op->index == 1 ? op1 : op2;
        inv = mis + rpm;
    } else if (std::holds_alternative<OnlyMixed>(cls)) {
        mis = rom;
        inv = rom + rpm;
    } else if (std::holds_alternative<PureAndMixed>(cls)) {
        mis = op1 + op2 + rom + rpm;
        inv = rpm;
    } else {
        mis = 1.0;
        inv = eps.value() <= 0.5 ? 0.0 : rpm;
    }
    return {x, cls, w, std::move(probs), op1, op2, rom, rpm, mis, inv};
}

}  // namespace

ConsistencyReport consistency_probabilities(const Bimatrix2x2& g0, const NoiseSpec& spec, Tolerance eps,
                                            const QuadratureConfig& cfg, RatioMode mode) {
    if (!g0.all_finite()) throw std::invalid_argument("actual game has non-finite payoffs");
    const auto r = player_consistency(g0, spec, Player::row, eps, cfg, mode);
    const auto c = player_consistency(g0, spec, Player::col, eps, cfg, mode);
    const double factorized = r.factor_mis * c.factor_mis;
    double p_mis = factorized;
    if (std::holds_alternative<PureAndMixed>(r.actual_class)) {
        if (sign_case(g0, Player::row) == SignCase::c4a)
            p_mis = r.p_op1 * c.p_op1 + r.p_op2 * c.p_op2 + r.p_rom * c.p_rom;
        else
            p_mis = r.p_op1 * c.p_op2 + r.p_op2 * c.p_op1 + r.p_rom * c.p_rom;
    }
    return {eps.value(), p_mis, r.factor_inv * c.factor_inv, factorized, {r, c}};
}

std::vector<Crossing> noise_threshold_scan(const Bimatrix2x2& g0, const NoiseSpec& spec_shape, Tolerance eps,
                                           double target, const std::vector<double>& d_grid,
                                           const QuadratureConfig& cfg) {
    if (d_grid.empty()) throw std::invalid_argument("noise grid is empty");
    for (std::size_t k = 0; k < d_grid.size(); ++k) {
        if (!(d_grid[k] > 0)) throw std::invalid_argument(fmt::format("noise level {} must be positive", d_grid[k]));
        if (k > 0 && !(d_grid[k] > d_grid[k - 1])) throw std::invalid_argument("noise grid must be increasing");
    }
    if (!(target > 0 && target < 1)) throw std::invalid_argument(fmt::format("target {} not in (0,1)", target));

    auto below = [&](double d) {
        return consistency_probabilities(g0, spec_shape.with_scaled_std(d), eps, cfg).p_mis < target;
    };
    std::vector<Crossing> out;
    bool prev = below(d_grid.front());
    for (std::size_t k = 1; k < d_grid.size(); ++k) {
        const bool cur = below(d_grid[k]);
        if (cur != prev) {
            double lo = d_grid[k - 1], hi = d_grid[k];
            while (hi - lo > 1e-4) {
                const double mid = 0.5 * (lo + hi);
                (below(mid) == prev ? lo : hi) = mid;
            }
            out.push_back({lo, hi});
        }
        prev = cur;
    }
    return out;
}

}  // namespace noisy
