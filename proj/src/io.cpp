#include "noisygames/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace noisy::io {

using nlohmann::json;

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

namespace {

double parse_number(std::string_view s, const std::string& what) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError(fmt::format("{}: '{}' is not a number", what, s));
    return v;
}

double finite_number(const json& j, const std::string& what) {
    if (!j.is_number()) throw ParseError(fmt::format("{} must be a number", what));
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(fmt::format("{} must be finite", what));
    return v;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
    for (const auto& [k, _] : j.items())
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
            throw ParseError(fmt::format("{}: unknown key '{}'", what, k));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

json normal_to_json(const NormalDist& d) { return {{"mu", d.mu}, {"sd", d.sd}}; }

void apply_params(const json& j, NoiseParams& p, const std::string& what) {
    if (j.contains("mean_r")) p.mean_r = parse_matrix(j["mean_r"], what + ".mean_r");
    if (j.contains("mean_c")) p.mean_c = parse_matrix(j["mean_c"], what + ".mean_c");
    if (j.contains("std_r")) p.std_r = parse_matrix(j["std_r"], what + ".std_r");
    if (j.contains("std_c")) p.std_c = parse_matrix(j["std_c"], what + ".std_c");
}

}  // namespace

Matrix2 parse_matrix(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2) throw ParseError(fmt::format("{} must be a 2x2 array", what));
    Matrix2 m{};
    for (int i = 0; i < 2; ++i) {
        if (!j[i].is_array() || j[i].size() != 2) throw ParseError(fmt::format("{} must be a 2x2 array", what));
        for (int k = 0; k < 2; ++k) m[i][k] = finite_number(j[i][k], fmt::format("{}[{}][{}]", what, i, k));
    }
    return m;
}

json matrix_to_json(const Matrix2& m) { return json::array({{m[0][0], m[0][1]}, {m[1][0], m[1][1]}}); }

Bimatrix2x2 parse_game(const json& j) {
    if (!j.is_object()) throw ParseError("game must be an object with payoff_r and payoff_c");
    reject_unknown_keys(j, {"payoff_r", "payoff_c"}, "game");
    if (!j.contains("payoff_r") || !j.contains("payoff_c"))
        throw ParseError("game needs both payoff_r and payoff_c");
    return {parse_matrix(j["payoff_r"], "payoff_r"), parse_matrix(j["payoff_c"], "payoff_c")};
}

json game_to_json(const Bimatrix2x2& g) {
    return {{"payoff_r", matrix_to_json(g.payoff_r)}, {"payoff_c", matrix_to_json(g.payoff_c)}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(fmt::format("cannot open '{}'", path));
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("{}: {}", path, e.what()));
    }
}

Bimatrix2x2 load_game(const std::string& name_or_path) {
    if (auto g = games::by_name(name_or_path)) return *g;
    try {
        return parse_game(read_json_file(name_or_path));
    } catch (const ParseError& e) {
        if (!std::filesystem::exists(name_or_path))
            throw ParseError(fmt::format("'{}' is neither a built-in game (pd, mp, bos, ww) nor a readable file",
                                         name_or_path));
        throw;
    }
}

NoisyGameFile parse_noisy(const json& j, const std::string& base_dir) {
    if (!j.is_object()) throw ParseError("noisy game must be an object");
    reject_unknown_keys(j, {"game", "mean_r", "mean_c", "std_r", "std_c", "epsilon", "views"}, "noisy game");
    if (!j.contains("game")) throw ParseError("noisy game needs a 'game'");
    if (!j.contains("std_r") || !j.contains("std_c")) throw ParseError("noisy game needs std_r and std_c");

    NoisyGameFile f;
    const json& g = j["game"];
    if (g.is_object()) {
        f.game = parse_game(g);
    } else if (g.is_string()) {
        const std::string s = g.get<std::string>();
        if (auto named = games::by_name(s)) {
            f.game = *named;
        } else {
            std::filesystem::path p(s);
            if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
            f.game = load_game(p.string());
        }
    } else {
        throw ParseError("'game' must be an object, a built-in name or a path");
    }

    NoiseParams both;
    apply_params(j, both, "noise");
    NoiseParams r = both, c = both;
    if (j.contains("views")) {
        const json& v = j["views"];
        if (!v.is_object()) throw ParseError("'views' must be an object");
        reject_unknown_keys(v, {"r", "c"}, "views");
        for (const auto& [key, params] : v.items()) {
            if (!params.is_object()) throw ParseError(fmt::format("views.{} must be an object", key));
            reject_unknown_keys(params, {"mean_r", "mean_c", "std_r", "std_c"}, "views." + key);
            apply_params(params, key == "r" ? r : c, "views." + key);
        }
    }
    f.noise = NoiseSpec(r, c);
    try {
        f.noise.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    if (j.contains("epsilon")) {
        const double e = finite_number(j["epsilon"], "epsilon");
        if (e < 0) throw ParseError("epsilon must be >= 0");
        f.epsilon = e;
    }
    return f;
}

NoisyGameFile load_noisy(const std::string& path) {
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_noisy(read_json_file(path), dir.empty() ? "." : dir.string());
}

json noisy_to_json(const NoisyGameFile& f) {
    auto params = [](const NoiseParams& p) {
        return json{{"mean_r", matrix_to_json(p.mean_r)},
                    {"mean_c", matrix_to_json(p.mean_c)},
                    {"std_r", matrix_to_json(p.std_r)},
                    {"std_c", matrix_to_json(p.std_c)}};
    };
    json j = params(f.noise.view_r);
    j["game"] = game_to_json(f.game);
    if (!(f.noise.view_c.mean_r == f.noise.view_r.mean_r && f.noise.view_c.mean_c == f.noise.view_r.mean_c &&
          f.noise.view_c.std_r == f.noise.view_r.std_r && f.noise.view_c.std_c == f.noise.view_r.std_c))
        j["views"] = {{"c", params(f.noise.view_c)}};
    if (f.epsilon) j["epsilon"] = *f.epsilon;
    return j;
}

std::string class_name(const NEClass& c) {
    if (std::holds_alternative<OnlyPure>(c)) return "OnlyPure";
    if (std::holds_alternative<OnlyMixed>(c)) return "OnlyMixed";
    if (std::holds_alternative<PureAndMixed>(c)) return "PureAndMixed";
    return "InfiniteNash";
}

json report_to_json(const ConsistencyReport& r) {
    json players = json::object();
    for (const PlayerConsistency& p : r.players) {
        json cls = {{"name", class_name(p.actual_class)}};
        if (const auto* op = std::get_if<OnlyPure>(&p.actual_class)) cls["index"] = op->index;
        if (auto m = mixed_part(p.actual_class)) cls["p"] = *m;
        const auto f = p.probs.f_at_zero();
        json own = json::array(), opp = json::array();
        for (const auto& d : p.probs.own_gains()) own.push_back(normal_to_json(d));
        for (const auto& d : p.probs.opponent_gains()) opp.push_back(normal_to_json(d));
        players[std::string(to_string(p.player))] = {
            {"class", cls},
            {"window", {p.window.lo, p.window.hi}},
            {"p_op1", p.p_op1},
            {"p_op2", p.p_op2},
            {"p_rom", p.p_rom},
            {"p_rpm", p.p_rpm},
            {"p_rom_full", p.probs.p_rom(0, 1)},
            {"p_rpm_full", p.probs.p_rpm(0, 1)},
            {"factor_mis", p.factor_mis},
            {"factor_inv", p.factor_inv},
            {"f_own_at_zero", {f[0], f[1]}},
            {"f_opponent_at_zero", {f[2], f[3]}},
            {"own_gains", own},
            {"opponent_gains", opp},
        };
    }
    return {{"epsilon", r.epsilon},
            {"p_mis", r.p_mis},
            {"p_inv", r.p_inv},
            {"p_mis_factorized", r.p_mis_factorized},
            {"per_player", players}};
}

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> out;
    for (const std::string& item : split(spec, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(parse_number(parts[0], "grid"));
        } else if (parts.size() == 3) {
            const double start = parse_number(parts[0], "grid start");
            const double step = parse_number(parts[1], "grid step");
            const double stop = parse_number(parts[2], "grid stop");
            if (!(step > 0)) throw ParseError(fmt::format("grid step {} must be positive", step));
            if (stop < start) throw ParseError(fmt::format("grid stop {} below start {}", stop, start));
            const auto n = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
            if (n > 10'000'000) throw ParseError("grid too large");
            for (long long k = 0; k <= n; ++k) out.push_back(start + double(k) * step);
        } else {
            throw ParseError(fmt::format("grid item '{}' is neither a number nor start:step:stop", item));
        }
    }
    if (out.empty()) throw ParseError("empty grid");
    for (double v : out)
        if (!std::isfinite(v)) throw ParseError("grid values must be finite");
    return out;
}

const std::vector<std::string> sweep_columns = {"d",        "p_mis_theory", "p_inv_theory", "freq_mis",
                                                "freq_inv", "se_mis",       "se_inv",       "freq_best",
                                                "freq_worst", "degenerate_resamples"};

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    for (std::size_t k = 0; k < sweep_columns.size(); ++k) out << (k ? "," : "") << sweep_columns[k];
    out << '\n';
    auto opt = [](std::optional<double> v) { return v ? format_double(*v) : std::string(); };
    for (const SweepRow& r : rows) {
        out << format_double(r.d) << ',' << opt(r.p_mis_theory) << ',' << opt(r.p_inv_theory);
        if (r.mc) {
            const McEstimate& m = *r.mc;
            out << ',' << format_double(m.freq_mis) << ',' << format_double(m.freq_inv) << ','
                << format_double(m.se_mis) << ',' << format_double(m.se_inv) << ',' << format_double(m.freq_best)
                << ',' << format_double(m.freq_worst) << ',' << m.degenerate_resamples;
        } else {
            out << ",,,,,,,";
        }
        out << '\n';
    }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("sweep CSV is empty");
    if (split(line, ',') != sweep_columns) throw ParseError("sweep CSV header mismatch");
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != sweep_columns.size()) throw ParseError(fmt::format("sweep CSV row '{}' has wrong arity", line));
        auto opt = [&](std::size_t k) -> std::optional<double> {
            if (f[k].empty()) return std::nullopt;
            return parse_number(f[k], sweep_columns[k]);
        };
        SweepRow r{parse_number(f[0], "d"), opt(1), opt(2), std::nullopt};
        if (!f[3].empty()) {
            McEstimate m;
            m.freq_mis = *opt(3);
            m.freq_inv = *opt(4);
            m.se_mis = *opt(5);
            m.se_inv = *opt(6);
            m.freq_best = *opt(7);
            m.freq_worst = *opt(8);
            m.degenerate_resamples = static_cast<std::size_t>(parse_number(f[9], "degenerate_resamples"));
            r.mc = m;
        }
        rows.push_back(r);
    }
    return rows;
}

void write_plane_csv(std::ostream& out, const std::vector<std::vector<std::optional<double>>>& plane) {
    for (const auto& row : plane) {
        for (std::size_t b = 0; b < row.size(); ++b)
            out << (b ? "," : "") << (row[b] ? format_double(*row[b]) : std::string("inf"));
        out << '\n';
    }
}

std::vector<std::vector<std::optional<double>>> read_plane_csv(std::istream& in) {
    std::vector<std::vector<std::optional<double>>> plane;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::optional<double>> row;
        for (const auto& cell : split(line, ','))
            row.push_back(cell == "inf" ? std::nullopt : std::optional<double>(parse_number(cell, "plane cell")));
        if (!plane.empty() && row.size() != plane.front().size()) throw ParseError("ragged plane CSV");
        plane.push_back(std::move(row));
    }
    return plane;
}

std::string svg_line_plot(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                          const std::string& ylabel) {
    constexpr double W = 640, H = 420, L = 60, R = 150, T = 40, B = 50;
    double x0 = INFINITY, x1 = -INFINITY, y0 = 0, y1 = 1;
    for (const auto& s : series)
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            x0 = std::min(x0, s.x[k]);
            x1 = std::max(x1, s.x[k]);
            y0 = std::min(y0, s.y[k]);
            y1 = std::max(y1, s.y[k]);
        }
    if (!(x1 > x0)) {
        x0 = std::isfinite(x0) ? x0 - 1 : 0;
        x1 = x0 + 2;
    }
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        W, H);
    svg += fmt::format("<text x=\"{}\" y=\"20\" text-anchor=\"middle\">{}</text>\n", (L + W - R) / 2, title);
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", L, H - B, W - R);
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", L, T, H - B);
    for (int k = 0; k <= 5; ++k) {
        const double xv = x0 + (x1 - x0) * k / 5, yv = y0 + (y1 - y0) * k / 5;
        svg += fmt::format("<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{:.3g}</text>\n", px(xv), H - B + 16, xv);
        svg += fmt::format("<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{:.3g}</text>\n", L - 6, py(yv) + 4, yv);
    }
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", (L + W - R) / 2, H - 12, xlabel);
    svg += fmt::format("<text x=\"16\" y=\"{0}\" transform=\"rotate(-90 16 {0})\" text-anchor=\"middle\">{1}</text>\n",
                       (T + H - B) / 2, ylabel);
    for (std::size_t s = 0; s < series.size(); ++s) {
        std::string pts;
        for (std::size_t k = 0; k < series[s].x.size(); ++k)
            pts += fmt::format("{}{:.2f},{:.2f}", k ? " " : "", px(series[s].x[k]), py(series[s].y[k]));
        svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                           series[s].colour, pts);
        const double ly = T + 16.0 * double(s);
        svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
                           W - R + 10, ly, W - R + 30, series[s].colour);
        svg += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", W - R + 36, ly + 4, series[s].label);
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace noisy::io
