#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kvw/io.hpp"

namespace kvw {

enum class Verdict { Pass, Fail, Info };

std::string to_string(Verdict v);

struct Check {
  std::string name;
  std::string anchor;  // the statement being checked
  double measured = 0;
  double threshold = 0;
  Verdict verdict = Verdict::Fail;
  std::string detail;
};

// Pass when measured < threshold (or <= when `inclusive`).
Check make_check(std::string name, std::string anchor, double measured, double threshold, bool inclusive = false,
                 std::string detail = {});

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0;
  double time_limit = 0;

  bool checks_pass() const;
  bool within_time() const { return seconds <= time_limit; }
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::size_t points = 48;
  std::size_t samples = 1'000'000;
};

inline constexpr int kCriterionCount = 10;

// Runs one of the ten acceptance criteria (1-based) and times it.
CriterionResult run_criterion(int id, const VerifyOptions& opts = {});

// Checks for the datum in one input document.  Throws the validation error of
// K or of (K, n) unchanged.
std::vector<Check> verify_datum(const InputDocument& doc, const VerifyOptions& opts = {});

Json to_json(const Check& c);
// Without the measured runtime, so the document is reproducible.
Json to_json(const CriterionResult& r);

}  // namespace kvw
