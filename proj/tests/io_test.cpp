#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccsm/errors.hpp"
#include "ccsm/instance_io.hpp"

using namespace ccsm;

TEST_CASE("canonical serialization round-trips byte for byte") {
  InstanceFile file{
      Instance({4, 100, 100, 100, 4, 4}, 2, ConcaveFunction::sqrt_scaled(1.0)),
      std::vector<double>{60, 90, 80, 70, 55, 65}, 0.01};
  std::string text = serialize_instance(file);
  InstanceFile parsed = parse_instance_text(text);
  CHECK(serialize_instance(parsed) == text);
  CHECK(parsed.instance.weights() == file.instance.weights());
  CHECK(parsed.instance.k() == 2);
  REQUIRE(parsed.lambda.has_value());
  CHECK(*parsed.lambda == *file.lambda);
  REQUIRE(parsed.epsilon.has_value());
  CHECK(*parsed.epsilon == 0.01);
}

TEST_CASE("all function families survive the round trip") {
  std::vector<ConcaveFunction> families = {
      ConcaveFunction::sqrt_scaled(1.25), ConcaveFunction::power(0.3),
      ConcaveFunction::capped_quadratic(8.0),
      ConcaveFunction::piecewise_linear({1.5, 4.0}, {2.0, 1.0, 0.25})};
  for (const auto& f : families) {
    InstanceFile file{Instance({1.25, 3.5, 3.5}, 2, f), std::nullopt, std::nullopt};
    std::string text = serialize_instance(file);
    InstanceFile parsed = parse_instance_text(text);
    CHECK(parsed.instance.f() == f);
    CHECK(serialize_instance(parsed) == text);
  }
}

TEST_CASE("irrational weights keep full precision") {
  double weight = 0.1 + 0.2;  // not representable exactly in decimal
  InstanceFile file{Instance({weight, 1.0}, 1, ConcaveFunction::power(0.3)),
                    std::nullopt, std::nullopt};
  InstanceFile parsed = parse_instance_text(serialize_instance(file));
  CHECK(parsed.instance.weight(0) == weight);  // bit-identical
}

TEST_CASE("malformed documents are rejected with input errors") {
  CHECK_THROWS_AS(parse_instance_text("not json"), InputError);
  CHECK_THROWS_AS(parse_instance_text("{}"), InputError);
  CHECK_THROWS_AS(parse_instance_text(R"({"n":2,"k":1,"a":[1.0],"f":{"family":"sqrt"}})"),
                  InputError);
  CHECK_THROWS_AS(
      parse_instance_text(R"({"n":1,"k":1,"a":[1.0],"f":{"family":"cubic"}})"),
      InputError);
  CHECK_THROWS_AS(
      parse_instance_text(
          R"({"n":2,"k":1,"a":[1.0,2.0],"f":{"family":"sqrt"},"lambda":[5.0]})"),
      InputError);
  CHECK_THROWS_AS(load_instance_file("/nonexistent/path.json"), InputError);
}
