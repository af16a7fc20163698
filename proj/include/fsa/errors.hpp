#pragma once
#include <stdexcept>
#include <string>

namespace fsa {

// Error classes map 1:1 onto CLI exit codes (parse=2, contract=3, guardrail=4).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& m) : std::runtime_error(m) {}
};

struct ContractError : std::runtime_error {
  explicit ContractError(const std::string& m) : std::runtime_error(m) {}
};

struct GuardrailError : std::runtime_error {
  explicit GuardrailError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace fsa
