#include "doctest.h"
#include "frf/errors.hpp"
#include "frf/validation.hpp"

using namespace frf;

TEST_CASE("suite registry") {
  CHECK(suite_names().size() == 6);
  for (const auto& name : suite_names()) CHECK(is_known_suite(name));
  CHECK(is_known_suite("all"));
  CHECK_FALSE(is_known_suite("everything"));
  CHECK_THROWS_AS(run_suite("everything"), InvalidInput);
}

TEST_CASE("cheap suites pass and are reproducible") {
  for (const char* name : {"calculus", "group", "duality"}) {
    const auto first = run_suite(name);
    const auto second = run_suite(name);
    REQUIRE(first.size() == second.size());
    REQUIRE_FALSE(first.empty());
    for (std::size_t i = 0; i < first.size(); ++i) {
      INFO(first[i].suite << "/" << first[i].name << " = " << first[i].measured);
      CHECK(first[i].suite == name);
      CHECK(first[i].passed);
      CHECK(first[i].measured == second[i].measured);
    }
  }
}
