#pragma once

#include <stdexcept>
#include <string>

namespace golomb {

// Caller handed us something outside an operation's domain
// (non-prime p, a = 1, non-coprime progression parameters, ...).
class domain_error : public std::invalid_argument {
 public:
  explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// Input is legal but the computation would exceed representable bounds.
// Periodic-set moduli and thresholds are capped at 2^64, residue tables at
// kResidueLimit; distinct from domain_error so callers can tell misuse from
// blow-up.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// A cross-check that can only fail through an implementation bug fired.
class internal_error : public std::logic_error {
 public:
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace golomb
