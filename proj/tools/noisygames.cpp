// noisygames: equilibria, behavioural-consistency probabilities and Monte
// Carlo checks for 2x2 games with Gaussian payoff noise.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "noisygames/game.hpp"
#include "noisygames/io.hpp"
#include "noisygames/misinfo.hpp"
#include "noisygames/montecarlo.hpp"
#include "noisygames/probability.hpp"

using namespace noisy;

namespace {

const char* default_grid = "0.001,0.5:0.5:10";

// Writes to `path`, or stdout when empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
    out << text;
    if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path));
}

std::string fmt_matrix(const Matrix2& m) {
    return fmt::format("[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1]);
}

int run_solve(const std::string& game_arg) {
    const Bimatrix2x2 g = io::load_game(game_arg);
    std::ostringstream out;
    out << "payoff_r " << fmt_matrix(g.payoff_r) << "\n";
    out << "payoff_c " << fmt_matrix(g.payoff_c) << "\n";
    out << fmt::format("utility gains r: {} {}  c: {} {}\n", utility_gain(g, Player::row, 1),
                       utility_gain(g, Player::row, 2), utility_gain(g, Player::col, 1),
                       utility_gain(g, Player::col, 2));
    out << "degenerate " << (is_degenerate(g) ? "yes" : "no") << "\n";
    for (Player x : {Player::row, Player::col}) out << "class " << to_string(x) << " " << to_string(classify_player(g, x)) << "\n";
    const auto opt = optimal_welfare(g);
    if (!is_degenerate(g)) {
        const auto ne = enumerate_nash(g);
        out << "equilibria " << ne.size() << "\n";
        for (const auto& s : ne) out << "  " << to_string(s) << "  SW " << io::format_double(social_welfare(g, s)) << "\n";
    }
    out << "SW(opt) " << io::format_double(opt.welfare) << " at " << to_string(opt.profile) << "\n";
    if (!is_degenerate(g)) {
        try {
            const double poa = price_of_anarchy(g);
            out << "PoA " << io::format_double(poa) << "\n";
        } catch (const UndefinedRatioError&) {
            out << "PoA undefined: zero-sum (try pom-plane --shift)\n";
        }
    }
    std::cout << out.str();
    return 0;
}

int run_analyze(const std::string& path, std::optional<double> eps_arg, const std::string& mode,
                const std::string& out_path) {
    const auto f = io::load_noisy(path);
    const double eps = eps_arg ? *eps_arg : f.epsilon.value_or(-1);
    if (eps < 0) throw std::runtime_error("no epsilon: pass --epsilon or set it in the file");
    const RatioMode m = mode == "paper" || mode == "literal" ? RatioMode::literal : RatioMode::corrected;
    const auto rep = consistency_probabilities(f.game, f.noise, eps, QuadratureConfig::from_env(), m);
    auto j = io::report_to_json(rep);
    j["lemma1_mode"] = m == RatioMode::literal ? "paper" : "corrected";
    emit(out_path, j.dump(2) + "\n");
    return 0;
}

McConfig mc_config(std::size_t reps, std::uint64_t seed, unsigned threads, bool no_resample) {
    McConfig c;
    c.reps = reps;
    c.seed = seed;
    c.threads = threads;
    c.resample_degenerate = !no_resample;
    return c;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    io::write_sweep_csv(out, rows);
    return out.str();
}

void write_svg(const std::string& path, const std::vector<SweepRow>& rows, const std::string& title) {
    io::Series tm{"p_mis theory", "#1f77b4", {}, {}}, ti{"p_inv theory", "#d62728", {}, {}};
    io::Series mm{"p_mis MC", "#2ca02c", {}, {}}, mi{"p_inv MC", "#ff7f0e", {}, {}};
    for (const auto& r : rows) {
        if (r.p_mis_theory) {
            tm.x.push_back(r.d), tm.y.push_back(*r.p_mis_theory);
            ti.x.push_back(r.d), ti.y.push_back(*r.p_inv_theory);
        }
        if (r.mc) {
            mm.x.push_back(r.d), mm.y.push_back(r.mc->freq_mis);
            mi.x.push_back(r.d), mi.y.push_back(r.mc->freq_inv);
        }
    }
    std::vector<io::Series> series;
    for (auto* s : {&tm, &ti, &mm, &mi})
        if (!s->x.empty()) series.push_back(*s);
    emit(path, io::svg_line_plot(series, title, "d", "probability"));
}

int run_mc(const std::string& path, std::optional<double> eps_arg, std::size_t reps, std::uint64_t seed,
           unsigned threads, bool no_resample, bool mc_only, const std::string& out_path) {
    const auto f = io::load_noisy(path);
    const double eps = eps_arg ? *eps_arg : f.epsilon.value_or(-1);
    if (eps < 0) throw std::runtime_error("no epsilon: pass --epsilon or set it in the file");
    const auto rows = sweep(f.game, f.noise, eps, {1.0}, mc_config(reps, seed, threads, no_resample),
                            mc_only ? SweepMode::mc : SweepMode::both, QuadratureConfig::from_env());
    emit(out_path, sweep_csv(rows));
    return 0;
}

int run_sweep(const std::string& game_arg, const std::string& shape_path, const std::string& grid, double eps,
              std::size_t reps, std::uint64_t seed, unsigned threads, bool no_resample, const std::string& out_path,
              const std::string& svg_path) {
    Bimatrix2x2 g;
    NoiseSpec shape = NoiseSpec::uniform(1.0);
    if (!shape_path.empty()) {
        const auto f = io::load_noisy(shape_path);
        g = f.game;
        shape = f.noise;
        if (!game_arg.empty()) g = io::load_game(game_arg);
    } else {
        if (game_arg.empty()) throw std::runtime_error("sweep needs --game or --noisy-shape");
        g = io::load_game(game_arg);
    }
    const auto d = io::parse_grid(grid);
    const SweepMode mode = reps > 0 ? SweepMode::both : SweepMode::theory;
    const auto rows =
        sweep(g, shape, eps, d, mc_config(std::max<std::size_t>(reps, 1), seed, threads, no_resample), mode,
              QuadratureConfig::from_env());
    emit(out_path, sweep_csv(rows));
    if (!svg_path.empty()) write_svg(svg_path, rows, fmt::format("{} eps={}", game_arg.empty() ? shape_path : game_arg, eps));
    return 0;
}

int run_pom_plane(const std::string& game_arg, double shift, int n, const std::string& out_path) {
    const Bimatrix2x2 g = shift_game(io::load_game(game_arg), shift);
    std::ostringstream out;
    io::write_plane_csv(out, welfare_ratio_plane(g, n));
    emit(out_path, out.str());
    return 0;
}

int run_threshold(const std::string& shape_path, std::optional<double> eps_arg, double target,
                  const std::string& grid) {
    const auto f = io::load_noisy(shape_path);
    const double eps = eps_arg ? *eps_arg : f.epsilon.value_or(-1);
    if (eps < 0) throw std::runtime_error("no epsilon: pass --epsilon or set it in the file");
    const auto crossings =
        noise_threshold_scan(f.game, f.noise, eps, target, io::parse_grid(grid), QuadratureConfig::from_env());
    std::ostringstream out;
    out << "d_lo,d_hi\n";
    for (const auto& c : crossings) out << io::format_double(c.lo) << "," << io::format_double(c.hi) << "\n";
    std::cout << out.str();
    std::cerr << crossings.size() << " crossing(s) of p_mis = " << target << "\n";
    return 0;
}

void line(std::ostream& out, const std::string& label, const std::vector<double>& got, const std::vector<double>& ref) {
    double dev = 0;
    std::string g, r;
    for (std::size_t k = 0; k < got.size(); ++k) {
        g += fmt::format(" {:.4f}", got[k]);
        r += fmt::format(" {:.3f}", ref[k]);
        dev = std::max(dev, std::abs(got[k] - ref[k]));
    }
    out << fmt::format("{:<28}{}   reference{}   max deviation {:.4f}\n", label, g, r, dev);
}

int run_example() {
    const Bimatrix2x2 g = games::bos_variant();
    const NoiseSpec spec = NoiseSpec::uniform(1.0);
    const double eps = 0.1;
    const auto rep = consistency_probabilities(g, spec, eps, QuadratureConfig::from_env());
    const auto& r = rep.of(Player::row);
    const auto& c = rep.of(Player::col);
    std::ostringstream out;
    out << "BoS variant P_r " << fmt_matrix(g.payoff_r) << " P_c " << fmt_matrix(g.payoff_c)
        << ", noise N(0,1) on every entry, eps = 0.1\n";
    line(out, "utility gains r1 r2 c1 c2",
         {utility_gain(g, Player::row, 1), utility_gain(g, Player::row, 2), utility_gain(g, Player::col, 1),
          utility_gain(g, Player::col, 2)},
         {3, -2, 2, -3});
    const auto fa = r.probs.f_at_zero();
    line(out, "F(0) in view r", {fa[0], fa[1], fa[2], fa[3]}, {0.017, 0.921, 0.078, 0.983});
    out << "classes " << to_string(r.actual_class) << " " << to_string(c.actual_class) << ", windows ("
        << r.window.lo << "," << r.window.hi << ") (" << c.window.lo << "," << c.window.hi << ")\n";
    line(out, "r: op1 op2 rom rpm", {r.p_op1, r.p_op2, r.p_rom, r.p_rpm}, {0.091, 0.085, 0.001, 0.207});
    line(out, "c: op1 op2 rom rpm", {c.p_op1, c.p_op2, c.p_rom, c.p_rpm}, {0.091, 0.085, 0.001, 0.171});
    line(out, "factors mis_r inv_r mis_c inv_c", {r.factor_mis, r.factor_inv, c.factor_mis, c.factor_inv},
         {0.386, 0.207, 0.349, 0.171});
    line(out, "p_mis p_inv", {rep.p_mis, rep.p_inv}, {0.135, 0.035});
    line(out, "p_mis (per-player product)", {rep.p_mis_factorized}, {0.135});
    std::cout << out.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equilibria and behavioural consistency of 2x2 games with Gaussian payoff noise"};
    app.require_subcommand(1);

    std::string game, noisy, mode = "corrected", out, svg, grid = default_grid;
    std::optional<double> eps_opt;
    double eps = 0.01, shift = 0, target = 0.5;
    std::size_t reps = 0, mc_reps = 3000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    int resolution = 100;
    bool no_resample = false, mc_only = false;

    auto* solve = app.add_subcommand("solve", "Classify a game, list its equilibria, SW(opt) and PoA");
    solve->add_option("--game", game, "Built-in name (pd, mp, bos, ww) or game JSON file")->required();

    auto* analyze = app.add_subcommand("analyze", "Closed-form consistency probabilities as JSON");
    analyze->add_option("--noisy", noisy, "Noisy-game JSON file")->required();
    analyze->add_option("--epsilon", eps_opt, "Tolerance (overrides the file)");
    analyze->add_option("--lemma1-mode", mode, "Ratio integral form")
        ->check(CLI::IsMember({"corrected", "paper", "literal"}));
    analyze->add_option("--out", out, "Output file (default stdout)");

    auto* mc = app.add_subcommand("mc", "Monte Carlo estimate for one noisy game, as a one-row sweep CSV (d = 1)");
    mc->add_option("--noisy", noisy, "Noisy-game JSON file")->required();
    mc->add_option("--epsilon", eps_opt, "Tolerance (overrides the file)");
    mc->add_option("--reps", mc_reps, "Repetitions")->capture_default_str();
    mc->add_option("--seed", seed, "Seed")->capture_default_str();
    mc->add_option("--threads", threads, "Worker threads (0 = all cores)");
    mc->add_flag("--no-resample", no_resample, "Fail on degenerate samples instead of redrawing");
    mc->add_flag("--mc-only", mc_only, "Skip the closed-form columns");
    mc->add_option("--out", out, "Output CSV (default stdout)");

    auto* sw = app.add_subcommand("sweep", "Theory and optional Monte Carlo over a grid of noise levels");
    sw->add_option("--game", game, "Built-in name or game file (unit noise on every entry)");
    sw->add_option("--noisy-shape", noisy, "Noisy-game file whose stds are scaled by d");
    sw->add_option("--d-grid", grid, "start:step:stop and/or comma list")->capture_default_str();
    sw->add_option("--epsilon", eps, "Tolerance")->required();
    sw->add_option("--mc", reps, "Monte Carlo repetitions per row (0 = theory only)");
    sw->add_option("--seed", seed, "Seed; row k uses seed ^ k")->capture_default_str();
    sw->add_option("--threads", threads, "Worker threads (0 = all cores)");
    sw->add_flag("--no-resample", no_resample, "Fail on degenerate samples instead of redrawing");
    sw->add_option("--out", out, "Output CSV (default stdout)");
    sw->add_option("--svg", svg, "Also write a line plot");

    auto* plane = app.add_subcommand("pom-plane", "SW(opt)/SW(p,q) over a (p,q) grid");
    plane->add_option("--game", game, "Built-in name or game file")->required();
    plane->add_option("--shift", shift, "Constant added to every payoff first");
    plane->add_option("--resolution", resolution, "Grid has n+1 points per axis")->capture_default_str();
    plane->add_option("--out", out, "Output CSV (default stdout)");

    auto* thr = app.add_subcommand("threshold", "Noise levels where p_mis crosses a target");
    thr->add_option("--noisy-shape", noisy, "Noisy-game file whose stds are scaled by d")->required();
    thr->add_option("--epsilon", eps_opt, "Tolerance (overrides the file)");
    thr->add_option("--target", target, "Target probability in (0,1)")->required();
    thr->add_option("--d-grid", grid, "start:step:stop and/or comma list")->capture_default_str();

    auto* ex = app.add_subcommand("example", "Recompute the BoS-variant worked example");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return run_solve(game);
        if (*analyze) return run_analyze(noisy, eps_opt, mode, out);
        if (*mc) return run_mc(noisy, eps_opt, mc_reps, seed, threads, no_resample, mc_only, out);
        if (*sw) return run_sweep(game, noisy, grid, eps, reps, seed, threads, no_resample, out, svg);
        if (*plane) return run_pom_plane(game, shift, resolution, out);
        if (*thr) return run_threshold(noisy, eps_opt, target, grid);
        if (*ex) return run_example();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
