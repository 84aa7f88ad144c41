#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "kvw/theta.hpp"
#include "kvw/wen_algebra.hpp"

namespace kvw {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "kvw-report/1";

struct ThetaInput {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<cplx> z;
  std::optional<CMatrix> omega;  // defaults to tau K
};

// The one input document shared by every subcommand.  Fields:
//   K       integer matrix (required)
//   n       particle counts per layer
//   tau     [re, im]
//   xi      list of [re, im], one per layer
//   c       list of "p/q", an element of K^{-1}Z^g
//   config  list (per layer) of lists of [re, im]
//   theta   {"a": [...], "b": [...], "z": [[re, im], ...], "omega": [[[re, im], ...], ...]}
// Unknown fields are rejected.
struct InputDocument {
  IntMatrix K;
  std::optional<std::vector<std::int64_t>> n;
  std::optional<cplx> tau;
  std::optional<std::vector<cplx>> xi;
  std::optional<std::vector<Rational>> c;
  std::optional<std::vector<std::vector<cplx>>> config;
  std::optional<ThetaInput> theta;
};

// JSON when the text starts with '{', otherwise a whitespace/comma separated
// integer matrix, one row per line ('#' starts a comment).  Throws ParseError.
InputDocument parse_input(const std::string& text);
InputDocument load_input(const std::string& path);

// Integer matrix in the plain-text form above.
IntMatrix parse_matrix_text(const std::string& text);

Json to_json(cplx z);
Json to_json(const CMatrix& m);
Json to_json(const RMatrix& m);
Json to_json(const IntMatrix& m);
Json to_json(const std::vector<Rational>& v);

// Shortest text that reads back to the same double.
std::string format_double(double x);

}  // namespace kvw
