#pragma once

#include <stdexcept>
#include <string>

namespace locc {

// One code per documented failure mode across the library.
enum class Errc {
  Empty,
  NegativeEntry,
  NotNormalized,
  DimensionMismatch,
  NotApplicable,
  EmptyRegion,
  SearchExhausted,
  NotFeasibleAtZero,
  InvalidTransfer,
  PatternInfeasible,
  UniformInput,
  BudgetExceeded,
  MajorizationFailed,
  NoEntropyGain,
};

inline const char* to_string(Errc c) {
  switch (c) {
    case Errc::Empty: return "Empty";
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotApplicable: return "NotApplicable";
    case Errc::EmptyRegion: return "EmptyRegion";
    case Errc::SearchExhausted: return "SearchExhausted";
    case Errc::NotFeasibleAtZero: return "NotFeasibleAtZero";
    case Errc::InvalidTransfer: return "InvalidTransfer";
    case Errc::PatternInfeasible: return "PatternInfeasible";
    case Errc::UniformInput: return "UniformInput";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::MajorizationFailed: return "MajorizationFailed";
    case Errc::NoEntropyGain: return "NoEntropyGain";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void throw_error(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace locc
