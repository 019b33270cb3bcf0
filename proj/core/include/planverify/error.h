#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace planverify {

enum class ErrorKind {
  MalformedAp,
  SyntaxError,
  UnknownProposition,
  AlphabetTooLarge,
  TranslationError,
  SchemaError,
  CyclicPlan,
  DanglingPredecessor,
  DuplicateTask,
  UnknownResource,
  CapabilityMismatch,
  EventNotEnabled,
  StateBudgetExceeded,
  TooLargeForOracle,
  Unrepairable,
  UnresolvableProposition,
  TransportError,
  ConfigError,
  UnrecognizedRequirement,
  InfeasibleSpec,
  IoError,
};

const char * to_string(ErrorKind kind);

class Error : public std::runtime_error
{
 public:
  Error(ErrorKind kind, const std::string & message);

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse error in LTLf text; position is a byte offset into the input.
class SyntaxError : public Error
{
 public:
  SyntaxError(std::size_t position, const std::string & message);

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class CyclicPlanError : public Error
{
 public:
  explicit CyclicPlanError(std::vector<std::string> cycle);

  // Task ids along the cycle; the first id is repeated at the end.
  const std::vector<std::string> & cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

}  // namespace planverify
