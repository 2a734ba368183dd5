#include <doctest.h>

#include "properties.hpp"

namespace {

void run(const props::Outcome& out) {
    INFO(out.summary());
    CHECK(out.ok);
}

}  // namespace

TEST_CASE("class probabilities cover the window exactly") { run(props::exhaustiveness(200, 11)); }
TEST_CASE("interval additivity") { run(props::additivity(200, 12)); }
TEST_CASE("monotone in epsilon") { run(props::monotonicity(200, 13)); }
TEST_CASE("values at epsilon 0 and 1") { run(props::extremal_values(200, 14)); }
TEST_CASE("biases absorbed by the actual game") { run(props::bias_absorption(200, 15)); }
TEST_CASE("global shift") { run(props::global_shift(200, 16)); }
TEST_CASE("positive scaling") { run(props::scale_invariance(200, 17)); }
TEST_CASE("verdicts agree with the direct definition") { run(props::verdicts_vs_definition(200, 18)); }
