#pragma once

#include <stdexcept>
#include <string>

namespace torsion {

/// Base for all recoverable failures reported by the library. `kind()` is a
/// stable machine-readable tag; `anchor()` names the statement whose
/// hypothesis or conclusion was being checked when the failure happened.
class Error : public std::runtime_error {
public:
  Error(std::string kind, std::string anchor, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)), anchor_(std::move(anchor)) {}

  const std::string& kind() const noexcept { return kind_; }
  const std::string& anchor() const noexcept { return anchor_; }

private:
  std::string kind_;
  std::string anchor_;
};

class BudgetExhausted : public Error {
public:
  BudgetExhausted(std::string anchor, const std::string& what)
      : Error("BudgetExhausted", std::move(anchor), what) {}
};

class SearchExhausted : public Error {
public:
  SearchExhausted(std::string anchor, const std::string& what)
      : Error("SearchExhausted", std::move(anchor), what) {}
};

class NoWitness : public Error {
public:
  NoWitness(std::string anchor, const std::string& what)
      : Error("NoWitness", std::move(anchor), what) {}
};

class CertificationFailed : public Error {
public:
  CertificationFailed(std::string anchor, const std::string& what)
      : Error("CertificationFailed", std::move(anchor), what) {}
};

class HypothesisUnmet : public Error {
public:
  HypothesisUnmet(std::string anchor, const std::string& what)
      : Error("HypothesisUnmet", std::move(anchor), what) {}
};

}  // namespace torsion
