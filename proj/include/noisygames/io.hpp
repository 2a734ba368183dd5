#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "noisygames/game.hpp"
#include "noisygames/misinfo.hpp"
#include "noisygames/montecarlo.hpp"
#include "noisygames/probability.hpp"

namespace noisy::io {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest round-trip-safe text ("{:.17g}").
std::string format_double(double v);

Matrix2 parse_matrix(const nlohmann::json& j, const std::string& what);
nlohmann::json matrix_to_json(const Matrix2& m);

/// {"payoff_r": [[..],[..]], "payoff_c": [[..],[..]]}
Bimatrix2x2 parse_game(const nlohmann::json& j);
nlohmann::json game_to_json(const Bimatrix2x2& g);

/// Built-in name ("pd", "mp", "bos", "ww") or path to a game file.
Bimatrix2x2 load_game(const std::string& name_or_path);

struct NoisyGameFile {
    Bimatrix2x2 game;
    NoiseSpec noise;
    std::optional<double> epsilon;
};

/// "game" is an inline object, a built-in name or a path (relative paths
/// resolve against base_dir). Top-level mean_r/mean_c/std_r/std_c apply to
/// both subjective games; an optional "views": {"r": {...}, "c": {...}}
/// overrides them per player.
NoisyGameFile parse_noisy(const nlohmann::json& j, const std::string& base_dir = ".");
NoisyGameFile load_noisy(const std::string& path);
nlohmann::json noisy_to_json(const NoisyGameFile& f);

nlohmann::json read_json_file(const std::string& path);

std::string class_name(const NEClass& c);

nlohmann::json report_to_json(const ConsistencyReport& r);

/// "start:step:stop" (inclusive stop) or a comma-separated list.
std::vector<double> parse_grid(const std::string& spec);

extern const std::vector<std::string> sweep_columns;

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

/// Rows are p = a/n, columns q = b/n; empty cells print as "inf".
void write_plane_csv(std::ostream& out, const std::vector<std::vector<std::optional<double>>>& plane);
std::vector<std::vector<std::optional<double>>> read_plane_csv(std::istream& in);

struct Series {
    std::string label;
    std::string colour;
    std::vector<double> x, y;
};

/// Bare polyline plot with axes and a legend.
std::string svg_line_plot(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                          const std::string& ylabel);

}  // namespace noisy::io
