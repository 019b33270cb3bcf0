#include "planverify/error.h"

namespace planverify {

const char * to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::MalformedAp: return "MalformedAp";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownProposition: return "UnknownProposition";
    case ErrorKind::AlphabetTooLarge: return "AlphabetTooLarge";
    case ErrorKind::TranslationError: return "TranslationError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::CyclicPlan: return "CyclicPlan";
    case ErrorKind::DanglingPredecessor: return "DanglingPredecessor";
    case ErrorKind::DuplicateTask: return "DuplicateTask";
    case ErrorKind::UnknownResource: return "UnknownResource";
    case ErrorKind::CapabilityMismatch: return "CapabilityMismatch";
    case ErrorKind::EventNotEnabled: return "EventNotEnabled";
    case ErrorKind::StateBudgetExceeded: return "StateBudgetExceeded";
    case ErrorKind::TooLargeForOracle: return "TooLargeForOracle";
    case ErrorKind::Unrepairable: return "Unrepairable";
    case ErrorKind::UnresolvableProposition: return "UnresolvableProposition";
    case ErrorKind::TransportError: return "TransportError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::UnrecognizedRequirement: return "UnrecognizedRequirement";
    case ErrorKind::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string & message)
    : std::runtime_error(message), kind_(kind)
{
}

SyntaxError::SyntaxError(std::size_t position, const std::string & message)
    : Error(ErrorKind::SyntaxError,
            "syntax error at position " + std::to_string(position) + ": "
                + message),
      position_(position)
{
}

namespace {

std::string describe_cycle(const std::vector<std::string> & cycle)
{
  std::string out = "plan contains a precedence cycle: ";
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (i) out += " -> ";
    out += cycle[i];
  }
  return out;
}

}  // namespace

CyclicPlanError::CyclicPlanError(std::vector<std::string> cycle)
    : Error(ErrorKind::CyclicPlan, describe_cycle(cycle)), cycle_(std::move(cycle))
{
}

}  // namespace planverify
