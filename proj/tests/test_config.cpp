#include <cmath>

#include "doctest.h"

#include "fixtures.hpp"
#include "hyperstab/config.hpp"
#include "hyperstab/errors.hpp"

using namespace hyperstab;
using namespace fixtures;

namespace {

const char* kExampleConfig = R"({
  "name": "quadratic-2d",
  "dim": 2,
  "tensors": [
    {"order": 2, "dense": [0.1, 0.1, 0.1, 0.1]},
    {"order": 3, "fill": 1.0, "entries": [
      {"idx": [1, 1, 2], "value": 0.5},
      {"idx": [2, 1, 2], "value": 0.5},
      {"idx": [1, 2, 1], "value": 0.5},
      {"idx": [2, 2, 1], "value": 0.5}
    ]}
  ]
})";

} // namespace

TEST_CASE("fill-plus-exceptions config reproduces the worked system") {
    const LoadedSystem loaded = parse_system_config(kExampleConfig);
    CHECK(loaded.name == "quadratic-2d");
    const PolySystem expected = example_quadratic_system();
    for (const auto& [m, t] : expected.tensors()) {
        REQUIRE(loaded.system.tensor(m) != nullptr);
        for (std::size_t i = 0; i < t.size(); ++i) CHECK(loaded.system.tensor(m)->entries()[i] == t.entries()[i]);
    }
}

TEST_CASE("config schema violations carry the offending path") {
    CHECK_THROWS_WITH_AS(parse_system_config("{"), doctest::Contains("invalid JSON"), InputError);
    CHECK_THROWS_WITH_AS(parse_system_config(R"({"dim": 2, "tensors": []})"), doctest::Contains("non-empty"),
                         InputError);
    CHECK_THROWS_WITH_AS(parse_system_config(R"({"tensors": [{"order": 2, "dense": [1]}]})"),
                         doctest::Contains("dim"), InputError);
    CHECK_THROWS_WITH_AS(
        parse_system_config(
            R"({"dim": 2, "tensors": [{"order": 2, "entries": [{"idx": [3, 1], "value": 1.0}]}]})"),
        doctest::Contains("tensors[0].entries[0].idx[0]"), InputError);
    CHECK_THROWS_WITH_AS(
        parse_system_config(
            R"({"dim": 2, "tensors": [{"order": 2, "entries": [{"idx": [1, 1], "value": 1.0}, {"idx": [1, 1], "value": 2.0}]}]})"),
        doctest::Contains("duplicate idx"), InputError);
    CHECK_THROWS_WITH_AS(
        parse_system_config(R"({"dim": 2, "tensors": [{"order": 2, "dense": [1, 2, 3]}]})"),
        doctest::Contains("tensors[0]"), InputError);
    CHECK_THROWS_WITH_AS(
        parse_system_config(
            R"({"dim": 2, "tensors": [{"order": 2, "dense": [1, 2, 3, 4]}, {"order": 2, "dense": [1, 2, 3, 4]}]})"),
        doctest::Contains("duplicate tensor order"), InputError);
    CHECK_THROWS_WITH_AS(
        parse_system_config(R"({"dim": 2, "tensors": [{"order": 2, "dense": [1, 2, 3, 4], "fill": 0.5}]})"),
        doctest::Contains("mixes"), InputError);
    CHECK_THROWS_WITH_AS(
        parse_system_config(R"({"dim": 2, "tensors": [{"order": 2, "dense": [1, 2, 3, 4]}], "constant": [1]})"),
        doctest::Contains("constant"), InputError);
}

TEST_CASE("serialized configs re-parse to the identical system") {
    auto gen = rng(601);
    for (int trial = 0; trial < 10; ++trial) {
        PolySystem sys(2 + static_cast<int>(gen() % 2));
        sys.set_tensor(random_tensor(gen, 2, sys.dim(), -1.0, 1.0));
        sys.set_tensor(random_tensor(gen, 3, sys.dim(), -1.0, 1.0));
        if (trial % 2 == 0) sys.set_constant(random_vec(gen, sys.dim(), -1.0, 1.0));

        const LoadedSystem back = parse_system_config(serialize_system_config(sys, "roundtrip"));
        CHECK(back.name == "roundtrip");
        CHECK(back.system.dim() == sys.dim());
        for (const auto& [m, t] : sys.tensors()) {
            REQUIRE(back.system.tensor(m) != nullptr);
            for (std::size_t i = 0; i < t.size(); ++i) CHECK(back.system.tensor(m)->entries()[i] == t.entries()[i]);
        }
        CHECK(back.system.constant().has_value() == sys.constant().has_value());
        if (sys.constant())
            for (int i = 0; i < sys.dim(); ++i) CHECK((*back.system.constant())[i] == (*sys.constant())[i]);
    }
}

TEST_CASE("trajectory csv layout") {
    Trajectory traj;
    traj.states = {{0.5, -0.25}, {0.125, 0.0}};
    const std::string plain = trajectory_csv(traj);
    CHECK(plain == "t,x_1,x_2\n0,0.5,-0.25\n1,0.125,0\n");

    const std::string weighted = trajectory_csv(traj, Vec{0.5, 0.5});
    CHECK(weighted == "t,x_1,x_2,V\n0,0.5,-0.25,1\n1,0.125,0,0.25\n");
}

TEST_CASE("region csv layout and determinism") {
    RegionSample sample;
    sample.grid = {{0.0, 0.0}, {0.25, -0.5}};
    sample.labels = {RegionLabel::inside_converged, RegionLabel::outside_diverged};
    const std::string csv = region_csv(sample);
    CHECK(csv == "x0_1,x0_2,label\n0,0,inside-converged\n0.25,-0.5,outside-diverged\n");
    CHECK(csv == region_csv(sample));
}
