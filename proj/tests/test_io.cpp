#include <doctest.h>

#include "kvw/error.hpp"
#include "kvw/io.hpp"
#include "kvw/verification.hpp"

using namespace kvw;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    parse_input(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("accepted: " << text);
  return ErrorCode::ParseError;
}

}  // namespace

TEST_CASE("full input document") {
  const auto doc = parse_input(R"({
    "K": [[3, 2], [2, 3]], "n": [1, 1], "tau": [0.3, 1.1],
    "xi": [[0.1, 0.2], [0, 0]], "c": ["1/5", "1/5"],
    "config": [[[0.1, 0.2]], [[0.5, 0.5]]],
    "theta": {"a": [0.5, 0], "b": [0, 0.5], "z": [[0.1, 0], [0, 0.1]]}
  })");
  CHECK(doc.K == IntMatrix::from_rows({{3, 2}, {2, 3}}));
  CHECK(*doc.n == std::vector<std::int64_t>{1, 1});
  CHECK(*doc.tau == cplx(0.3, 1.1));
  CHECK((*doc.xi)[0] == cplx(0.1, 0.2));
  CHECK((*doc.c)[1] == Rational(1, 5));
  CHECK((*doc.config)[1][0] == cplx(0.5, 0.5));
  CHECK(doc.theta->a == std::vector<double>{0.5, 0.0});
  CHECK_FALSE(doc.theta->omega.has_value());
}

TEST_CASE("minimal and scalar forms") {
  CHECK(parse_input(R"({"K": 3})").K == IntMatrix::from_rows({{3}}));
  CHECK(parse_input(R"({"K": [3]})").K == IntMatrix::from_rows({{3}}));
  CHECK(parse_input(R"({"K": [[2.0]]})").K == IntMatrix::from_rows({{2}}));
  const auto doc = parse_input(R"({"K": [[2]]})");
  CHECK_FALSE(doc.n.has_value());
  CHECK_FALSE(doc.tau.has_value());
}

TEST_CASE("strict schema rejections") {
  CHECK(code_of(R"({"K": [[2]], "extra": 1})") == ErrorCode::ParseError);
  CHECK(code_of(R"({"K": [[2]], "theta": {"q": 1}})") == ErrorCode::ParseError);
  CHECK(code_of(R"({"n": [1]})") == ErrorCode::ParseError);
  CHECK(code_of(R"({"K": [[2.5]]})") == ErrorCode::ParseError);
  CHECK(code_of(R"({"K": [[2, 1], [1]]})") == ErrorCode::ParseError);
  CHECK(code_of(R"({"K": [[2]], "tau": [1, 2, 3]})") == ErrorCode::ParseError);
  CHECK(code_of(R"({"K": [[2]], "c": ["x/y"]})") == ErrorCode::ParseError);
  CHECK(code_of(R"({"K": [[2]])") == ErrorCode::ParseError);
  CHECK(code_of("[\"x\", 2]") == ErrorCode::ParseError);
  CHECK(code_of("") == ErrorCode::ParseError);
  CHECK(code_of("2 x\n1 2") == ErrorCode::ParseError);
}

TEST_CASE("plain-text matrices") {
  CHECK(parse_matrix_text("2 1\n1 2\n") == IntMatrix::from_rows({{2, 1}, {1, 2}}));
  CHECK(parse_matrix_text("# Jain\n[3, 2]\n[2, 3]  # second row\n\n") == IntMatrix::from_rows({{3, 2}, {2, 3}}));
  CHECK(parse_input("  5\n").K == IntMatrix::from_rows({{5}}));
  // rectangular input parses; validation reports NotSquare later
  CHECK(parse_matrix_text("1 2 3\n4 5 6").cols() == 3);
  CHECK_THROWS_AS(load_input("/nonexistent/kvw-input.json"), Error);
}

TEST_CASE("report serialisation") {
  CHECK(to_json(cplx(1.5, -2.0)).dump() == "[1.5,-2.0]");
  CHECK(to_json(std::vector<Rational>{Rational(-2, 5), Rational(3)}).dump() == R"(["-2/5","3"])");
  CHECK(to_json(IntMatrix::from_rows({{1, 0}, {0, 1}})).dump() == "[[1,0],[0,1]]");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-12) == "1e-12");

  const auto c = make_check("x", "anchor", 0.5, 1.0);
  CHECK(c.verdict == Verdict::Pass);
  const auto j = to_json(c);
  CHECK(j["verdict"] == "PASS");
  CHECK(j["anchor"] == "anchor");
  CHECK_FALSE(j.contains("detail"));
  CHECK(make_check("x", "a", 1.0, 1.0).verdict == Verdict::Fail);
  CHECK(make_check("x", "a", 1.0, 1.0, true).verdict == Verdict::Pass);
}
