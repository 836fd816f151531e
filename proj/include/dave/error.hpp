#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dave {

enum class errc {
  step_past_end,
  height_out_of_range,
  index_out_of_range,
  non_divisible_grace,
  invalid_param,
  clock_not_running,
  budget_exhausted,
  identical_claims,
  invalid_reveal,
  not_running,
  wrong_height,
  not_at_leaf,
  witness_hash_mismatch,
  search_space_too_large,
  insufficient_samples,
  alpha_out_of_domain,
  precondition_violated,
  config_error,
};

constexpr std::string_view to_string(errc code) {
  switch (code) {
    case errc::step_past_end: return "StepPastEnd";
    case errc::height_out_of_range: return "HeightOutOfRange";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::non_divisible_grace: return "NonDivisibleGrace";
    case errc::invalid_param: return "InvalidParam";
    case errc::clock_not_running: return "ClockNotRunning";
    case errc::budget_exhausted: return "BudgetExhausted";
    case errc::identical_claims: return "IdenticalClaims";
    case errc::invalid_reveal: return "InvalidReveal";
    case errc::not_running: return "NotRunning";
    case errc::wrong_height: return "WrongHeight";
    case errc::not_at_leaf: return "NotAtLeaf";
    case errc::witness_hash_mismatch: return "WitnessHashMismatch";
    case errc::search_space_too_large: return "SearchSpaceTooLarge";
    case errc::insufficient_samples: return "InsufficientSamples";
    case errc::alpha_out_of_domain: return "AlphaOutOfDomain";
    case errc::precondition_violated: return "PreconditionViolated";
    case errc::config_error: return "ConfigError";
  }
  return "Unknown";
}

// Every recoverable failure in the library is reported through this type.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace dave
