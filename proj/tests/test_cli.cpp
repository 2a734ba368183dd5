#include <doctest.h>

#include <sstream>
#include <unistd.h>

#include "cli_run.hpp"
#include "noisygames/io.hpp"

using namespace noisy;
using nlohmann::json;

namespace {

std::string scratch(const std::string& name) { return (scratch_dir() / name).string(); }

}  // namespace

TEST_CASE("solve") {
    const auto bos = run_cli("solve --game bos");
    CHECK(bos.code == 0);
    CHECK(bos.out.find("equilibria 3") != std::string::npos);
    CHECK(bos.err.empty());
    CHECK(run_cli("solve --game pd").out.find("PoA 2\n") != std::string::npos);
    CHECK(run_cli("solve --game mp").out.find("PoA undefined") != std::string::npos);

    std::ofstream(scratch("ww.json")) << io::game_to_json(games::win_win()).dump();
    CHECK(run_cli("solve --game " + scratch("ww.json")).out.find("PoA 1\n") != std::string::npos);
}

TEST_CASE("errors go to stderr with a nonzero exit") {
    const auto missing = run_cli("solve --game nosuchgame");
    CHECK(missing.code != 0);
    CHECK(missing.out.empty());
    CHECK(missing.err.find("error:") != std::string::npos);
    CHECK(run_cli("").code != 0);
    CHECK(run_cli("analyze").code != 0);
    CHECK(run_cli("pom-plane --game pd --resolution 1").code != 0);
    CHECK(run_cli("sweep --game pd --epsilon 0.01 --d-grid 1:0:2").code != 0);
    CHECK(run_cli("sweep --game pd --epsilon 0.01 --d-grid 1 --out /nonexistent/dir/x.csv").code != 0);

    // Degenerate noise: the zero gain of P_c row 2 has no noise.
    std::ofstream(scratch("degen.json")) << R"({"game": {"payoff_r": [[1,0],[0,1]], "payoff_c": [[1,0],[2,2]]},
        "std_r": [[1,1],[1,1]], "std_c": [[1,1],[0,0]], "epsilon": 0.1})";
    const auto degen = run_cli("analyze --noisy " + scratch("degen.json"));
    CHECK(degen.code == 1);
    CHECK(degen.err.find("degenerate") != std::string::npos);
}

TEST_CASE("analyze") {
    const auto r = run_cli("analyze --noisy " + data_file("running_example.json"));
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["p_mis"].get<double>() == doctest::Approx(0.015687705497883876).epsilon(1e-9));
    CHECK(j["p_inv"].get<double>() == doctest::Approx(0.11260304528766185).epsilon(1e-9));
    CHECK(j["lemma1_mode"] == "corrected");

    const json zero = json::parse(run_cli("analyze --noisy " + data_file("running_example.json") + " --epsilon 0").out);
    for (const char* x : {"r", "c"}) {
        CHECK(zero["per_player"][x]["p_rom"].get<double>() == 0);
        CHECK(zero["per_player"][x]["p_rpm"].get<double>() == 0);
    }

    const json lit =
        json::parse(run_cli("analyze --noisy " + data_file("running_example.json") + " --lemma1-mode paper").out);
    CHECK(lit["lemma1_mode"] == "paper");

    std::ofstream(scratch("exact.json")) << R"({"game": "pd", "std_r": [[0,0],[0,0]], "std_c": [[0,0],[0,0]]})";
    const json exact = json::parse(run_cli("analyze --noisy " + scratch("exact.json") + " --epsilon 0.2").out);
    CHECK(exact["p_mis"].get<double>() == 1);
    CHECK(exact["p_inv"].get<double>() == 1);

    const auto to_file = run_cli("analyze --noisy " + data_file("running_example.json") + " --out " + scratch("a.json"));
    CHECK(to_file.out.empty());
    CHECK(json::parse(slurp(scratch("a.json"))) == j);
}

TEST_CASE("sweep output parses and is reproducible") {
    const std::string args = "sweep --game pd --epsilon 0.01 --d-grid 0.001,0.5:0.5:2 --mc 300 --seed 9 --out ";
    REQUIRE(run_cli(args + scratch("s1.csv") + " --svg " + scratch("s1.svg")).code == 0);
    REQUIRE(run_cli(args + scratch("s2.csv") + " --threads 3").code == 0);
    const std::string a = slurp(scratch("s1.csv")), b = slurp(scratch("s2.csv"));
    CHECK(a == b);
    std::istringstream in(a);
    const auto rows = io::read_sweep_csv(in);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].d == 0.001);
    CHECK(rows[4].mc);
    CHECK(slurp(scratch("s1.svg")).find("<polyline") != std::string::npos);

    const auto theory = run_cli("sweep --game bos --epsilon 0.01 --d-grid 0.001");
    std::istringstream tin(theory.out);
    const auto trows = io::read_sweep_csv(tin);
    REQUIRE(trows.size() == 1);
    CHECK_FALSE(trows[0].mc);
    CHECK(*trows[0].p_mis_theory <= 1e-6);
}

TEST_CASE("mc") {
    const std::string args = "mc --noisy " + data_file("running_example.json") + " --reps 1000 --seed 4";
    const auto a = run_cli(args), b = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    std::istringstream in(a.out);
    const auto rows = io::read_sweep_csv(in);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mc);
    CHECK(rows[0].p_mis_theory);
    std::istringstream only(run_cli(args + " --mc-only").out);
    CHECK_FALSE(io::read_sweep_csv(only)[0].p_mis_theory);
}

TEST_CASE("pom-plane") {
    const auto mp = run_cli("pom-plane --game mp --shift 2 --resolution 20");
    REQUIRE(mp.code == 0);
    std::istringstream in(mp.out);
    const auto plane = io::read_plane_csv(in);
    REQUIRE(plane.size() == 21);
    for (const auto& row : plane)
        for (const auto& v : row) CHECK(std::abs(*v - 1) <= 1e-12);
    std::istringstream small(run_cli("pom-plane --game pd --resolution 2").out);
    const auto pd = io::read_plane_csv(small);
    REQUIRE(pd.size() == 3);
    CHECK(pd[0].size() == 3);
    CHECK(*pd[2][2] == 1);
    CHECK(*pd[0][0] == 2);
    CHECK(run_cli("pom-plane --game mp --resolution 4").out.find("inf") != std::string::npos);
}

TEST_CASE("threshold") {
    const auto r = run_cli("threshold --noisy-shape " + data_file("pd_upper_left.json") + " --target 0.99");
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("d_lo,d_hi\n", 0) == 0);
    CHECK(r.err.find("crossing") != std::string::npos);
}

TEST_CASE("example") {
    const auto r = run_cli("example");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("utility gains") != std::string::npos);
    CHECK(r.out.find("p_mis p_inv") != std::string::npos);
}
