#pragma once

#include <stdexcept>
#include <string>

namespace hgconc {

// Bad input: malformed hypergraph, parameter outside its domain, mismatched
// arguments. The CLI maps these to exit code 1.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A well-formed request that cannot be satisfied (no admissible exposure
// schedule, more edges requested than k-sets exist). Exit code 2.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Work guard tripped (enumeration or pair-loop too large). Exit code 2.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgument(what);
}

}  // namespace detail

}  // namespace hgconc
