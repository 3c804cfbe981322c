#include <random>

#include "doctest.h"
#include "streamcode/blockcodes.hpp"
#include "streamcode/conformance.hpp"
#include "streamcode/serialize.hpp"
#include "support.hpp"

using namespace streamcode;
using namespace streamcode::serialize;

TEST_CASE("elements round-trip") {
  std::mt19937_64 rng(1);
  for (const auto& f : {gf::make_field(7, {1}), gf::make_field(5, {11}), gf::make_field(3, {2, 2})}) {
    for (int rep = 0; rep < 50; ++rep) {
      const auto x = testsupport::random_element(*f, rng);
      CHECK(element_from_json(*f, element_to_json(x)) == x);
    }
  }
  auto p = gf::make_field(7, {1});
  CHECK(element_to_json(p->from_int(4)) == Json(4));
  CHECK_THROWS(element_from_json(*p, Json(9)));
}

TEST_CASE("field specs round-trip") {
  for (const auto& f : {gf::make_field(2, {1}), gf::make_field(11, {2}), gf::make_field(2, {2, 3})}) {
    const auto j = field_to_json(f->spec());
    CHECK(j.contains("p"));
    CHECK(j.contains("degrees"));
    CHECK(j.contains("irreducible"));
    CHECK(field_from_json(j) == f->spec());
  }
  auto j = field_to_json(gf::make_field(11, {2})->spec());
  CHECK(j["irreducible"] == Json::parse("[[1,0,1]]"));
}

TEST_CASE("codes round-trip bit-exactly") {
  for (const auto& code : {construct_a(2, 4, 10), construct_b(2, 7, 10), construct_mds(3, 5), construct_a_binary(3, 5),
                           construct_a_swap(2, 3, 6), construct_b(1, 7, 12)}) {
    const auto text = dump_code(code);
    const auto back = load_code(text);
    CHECK(back.params.N == code.params.N);
    CHECK(back.params.T == code.params.T);
    CHECK(back.construction == code.construction);
    CHECK(back.field->spec() == code.field->spec());
    CHECK(back.subfield_order == code.subfield_order);
    CHECK(back.generator == code.generator);
    CHECK(back.eval_points == code.eval_points);
    CHECK(back.gamma.has_value() == code.gamma.has_value());
    CHECK(dump_code(back) == text);
  }
}

TEST_CASE("malformed dumps are rejected") {
  auto j = code_to_json(construct_a(2, 4, 10));
  j["generator"].erase(0);
  CHECK_THROWS(code_from_json(j));
  CHECK_THROWS(load_code("{"));
  CHECK_THROWS(load_code("{}"));
  CHECK_THROWS(load_code_file("does/not/exist.json"));
}

TEST_CASE("conformance reports serialize their violations") {
  auto code = construct_a(2, 4, 10);
  for (std::size_t r = 0; r < 9; ++r) code.generator(r, 12) = code.field->zero();
  const auto rep = conformance::conforms(code, 2, 4, 10);
  const auto j = report_to_json(rep);
  CHECK(j["pass"] == false);
  CHECK(j["violation_count"].get<std::size_t>() == rep.violation_count);
  REQUIRE(!j["violations"].empty());
  CHECK(j["violations"][0].contains("coordinate"));
  CHECK(j["violations"][0].contains("clause"));
  CHECK(j["violations"][0].contains("erased"));
}
