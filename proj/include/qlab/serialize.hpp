#pragma once

#include <iosfwd>
#include <string>

#include "qlab/state_vector.hpp"

namespace qlab {

// Plain-text fixture format, used by the CLI for fixtures and golden files.
//   line 1: "operator" | "state"
//   line 2: "dims" followed by the factor dimensions
//   then:   row-major entries, one row per line, each entry "re,im",
//           entries separated by single spaces (a state is one row).
// Round trips exactly (hexfloat encoding).
std::string to_text(const Operator& op);
std::string to_text(const StateVector& psi);
Operator operator_from_text(std::istream& in);
StateVector state_from_text(std::istream& in);

} // namespace qlab
