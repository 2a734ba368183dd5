#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "noisygames/io.hpp"

using namespace noisy;
using nlohmann::json;

namespace {

std::string data(const std::string& name) { return std::string(NOISYGAMES_DATA) + "/" + name; }

}  // namespace

TEST_CASE("numbers print round-trip safe") {
    for (double v : {0.1, 1.0 / 3, 1e-300, 123456789.123456789, -2.5}) CHECK(std::stod(io::format_double(v)) == v);
}

TEST_CASE("games") {
    const auto g = games::bos_variant();
    CHECK(io::parse_game(io::game_to_json(g)) == g);
    CHECK(io::load_game("pd") == games::prisoners_dilemma());
    CHECK_THROWS_AS(io::parse_game(json{{"payoff_r", {{1, 2}, {3, 4}}}}), io::ParseError);
    CHECK_THROWS_AS(io::parse_game(json{{"payoff_r", {{1, 2}, {3}}}, {"payoff_c", {{1, 2}, {3, 4}}}}), io::ParseError);
    CHECK_THROWS_AS(io::parse_game(json{{"payoff_r", {{1, "x"}, {3, 4}}}, {"payoff_c", {{1, 2}, {3, 4}}}}),
                    io::ParseError);
    CHECK_THROWS_AS(io::parse_game(json{{"payoff_r", {{1, 2}, {3, 4}}}, {"payoff_c", {{1, 2}, {3, 4}}}, {"extra", 1}}),
                    io::ParseError);
    CHECK_THROWS_AS(io::load_game("/nonexistent/game.json"), io::ParseError);
}

TEST_CASE("noisy game files") {
    const auto f = io::load_noisy(data("running_example.json"));
    CHECK(f.game == games::bos_variant());
    CHECK(f.noise.view_r.std_r[1][1] == 1);
    CHECK(f.noise.view_c.std_c[0][1] == 1);
    CHECK(*f.epsilon == 0.1);

    const auto pd = io::load_noisy(data("pd_upper_left_biased.json"));
    CHECK(pd.game == games::prisoners_dilemma());
    CHECK(pd.noise.view_r.mean_r[0][0] == 3.6);
    CHECK(pd.noise.view_c.mean_r[0][0] == 3.6);
    CHECK(pd.noise.view_r.mean_c[0][0] == 0);

    // Per-view overrides and a round trip through JSON.
    json j = {{"game", "bos"},
              {"std_r", {{1, 1}, {1, 1}}},
              {"std_c", {{1, 1}, {1, 1}}},
              {"views", {{"c", {{"mean_r", {{0.5, 0}, {0, 0}}}}}}}};
    const auto v = io::parse_noisy(j);
    CHECK(v.noise.view_c.mean_r[0][0] == 0.5);
    CHECK(v.noise.view_r.mean_r[0][0] == 0);
    CHECK_FALSE(v.epsilon);
    const auto back = io::parse_noisy(io::noisy_to_json(v));
    CHECK(back.game == v.game);
    CHECK(back.noise.view_c.mean_r == v.noise.view_c.mean_r);
    CHECK(back.noise.view_r.std_c == v.noise.view_r.std_c);

    CHECK_THROWS_AS(io::parse_noisy(json{{"game", "pd"}, {"std_r", {{1, 1}, {1, 1}}}}), io::ParseError);
    CHECK_THROWS_AS(io::parse_noisy(json{{"game", "pd"}, {"std_r", {{-1, 1}, {1, 1}}}, {"std_c", {{1, 1}, {1, 1}}}}),
                    io::ParseError);
    CHECK_THROWS_AS(io::parse_noisy(json{{"game", "pd"}, {"std_r", {{1, 1}, {1, 1}}}, {"std_c", {{1, 1}, {1, 1}}},
                                         {"epsilon", -0.1}}),
                    io::ParseError);
    CHECK_THROWS_AS(io::parse_noisy(json{{"game", "pd"}, {"std_r", {{1, 1}, {1, 1}}}, {"std_c", {{1, 1}, {1, 1}}},
                                         {"sigma", 1}}),
                    io::ParseError);
    CHECK_THROWS_AS(io::parse_noisy(json{{"game", 3}, {"std_r", {{1, 1}, {1, 1}}}, {"std_c", {{1, 1}, {1, 1}}}}),
                    io::ParseError);
}

TEST_CASE("game paths resolve next to the noisy file") {
    const auto dir = std::filesystem::temp_directory_path() / "noisygames_io_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "g.json") << io::game_to_json(games::win_win()).dump();
    std::ofstream(dir / "n.json") << R"({"game": "g.json", "std_r": [[1,1],[1,1]], "std_c": [[0,0],[0,0]]})";
    CHECK(io::load_noisy((dir / "n.json").string()).game == games::win_win());
    std::filesystem::remove_all(dir);
}

TEST_CASE("grids") {
    CHECK(io::parse_grid("0.001,0.5:0.5:2") == std::vector<double>{0.001, 0.5, 1.0, 1.5, 2.0});
    CHECK(io::parse_grid("3") == std::vector<double>{3});
    const auto g = io::parse_grid("0.02:0.02:10");
    CHECK(g.size() == 500);
    CHECK(g.back() == doctest::Approx(10));
    CHECK_THROWS_AS(io::parse_grid(""), io::ParseError);
    CHECK_THROWS_AS(io::parse_grid("1:0:2"), io::ParseError);
    CHECK_THROWS_AS(io::parse_grid("a,b"), io::ParseError);
    CHECK_THROWS_AS(io::parse_grid("1:2"), io::ParseError);
    CHECK_THROWS_AS(io::parse_grid("2:1:1"), io::ParseError);
}

TEST_CASE("sweep CSV round trip") {
    McEstimate m;
    m.reps = 3000;
    m.freq_mis = 0.1 / 3;
    m.freq_inv = 0.25;
    m.se_mis = 0.0123456789;
    m.se_inv = 0.5 / 7;
    m.freq_best = 1;
    m.freq_worst = 0;
    m.degenerate_resamples = 2;
    const std::vector<SweepRow> rows = {{0.001, 0.9, 1.0 / 3, m}, {0.5, 0.7, 0.2, std::nullopt}};
    std::stringstream ss;
    io::write_sweep_csv(ss, rows);
    const std::string text = ss.str();
    CHECK(text.rfind("d,p_mis_theory,p_inv_theory,freq_mis,freq_inv,se_mis,se_inv,freq_best,freq_worst,"
                     "degenerate_resamples\n",
                     0) == 0);
    const auto back = io::read_sweep_csv(ss);
    REQUIRE(back.size() == 2);
    CHECK(*back[0].p_inv_theory == 1.0 / 3);
    CHECK(back[0].mc->freq_mis == m.freq_mis);
    CHECK(back[0].mc->se_inv == m.se_inv);
    CHECK(back[0].mc->degenerate_resamples == 2);
    CHECK_FALSE(back[1].mc);
    std::stringstream again;
    io::write_sweep_csv(again, back);
    CHECK(again.str() == text);

    std::stringstream bad("x,y\n1,2\n");
    CHECK_THROWS_AS(io::read_sweep_csv(bad), io::ParseError);
}

TEST_CASE("plane CSV round trip") {
    const auto plane = welfare_ratio_plane(games::matching_pennies(), 4);
    std::stringstream ss;
    io::write_plane_csv(ss, plane);
    CHECK(ss.str().find("inf") != std::string::npos);
    CHECK(io::read_plane_csv(ss) == plane);
}

TEST_CASE("report JSON") {
    const auto rep = consistency_probabilities(games::bos_variant(), NoiseSpec::uniform(1), 0.1);
    const json j = io::report_to_json(rep);
    CHECK(j["p_mis"].get<double>() == rep.p_mis);
    CHECK(j["per_player"]["r"]["class"]["name"] == "PureAndMixed");
    CHECK(j["per_player"]["c"]["class"]["p"].get<double>() == doctest::Approx(0.4));
    CHECK(j["per_player"]["r"]["f_own_at_zero"].size() == 2);
    CHECK(json::parse(j.dump()) == j);
}

TEST_CASE("svg plot") {
    const std::string svg = io::svg_line_plot({{"theory", "black", {0, 1, 2}, {1, 0.5, 0.2}}}, "t", "d", "p");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("theory") != std::string::npos);
}
