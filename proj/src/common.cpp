#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "kvw/error.hpp"
#include "kvw/parallel.hpp"

namespace kvw {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::MixedParity: return "MixedParity";
    case ErrorCode::NonPositiveU: return "NonPositiveU";
    case ErrorCode::NotEigenvectorOfE: return "NotEigenvectorOfE";
    case ErrorCode::NonPositiveCounts: return "NonPositiveCounts";
    case ErrorCode::NonconvergentModulus: return "NonconvergentModulus";
    case ErrorCode::AsymmetricOmega: return "AsymmetricOmega";
    case ErrorCode::ImagNotPositiveDefinite: return "ImagNotPositiveDefinite";
    case ErrorCode::NonCyclicBasisOrder: return "NonCyclicBasisOrder";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::QuadratureTooCoarse: return "QuadratureTooCoarse";
    case ErrorCode::SamplingBudgetExceeded: return "SamplingBudgetExceeded";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

unsigned worker_count() {
  if (const char* env = std::getenv("KVW_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_chunks(std::size_t count, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  const std::size_t chunks = chunk_count(count, chunk);
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), chunks));
  auto run_one = [&](std::size_t c) { body(c, c * chunk, std::min(count, (c + 1) * chunk)); };
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_one(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) {
        try {
          run_one(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace kvw
