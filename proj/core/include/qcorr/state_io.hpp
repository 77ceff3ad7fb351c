#pragma once

#include <iosfwd>
#include <string>

#include "qcorr/state.hpp"

namespace qcorr {

/// Raised on malformed state files; the message names the offending field.
struct StateFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// State file format: a JSON object
//   {"labels": ["A","B"], "dims": [2,2], "re": [[...]], "im": [[...]]}
// with row-major matrices. Writers emit 17 significant digits so values
// round-trip exactly.
DensityMatrix read_state_json(std::istream& in, Repair repair = Repair::None);
DensityMatrix read_state_file(const std::string& path, Repair repair = Repair::None);
void write_state_json(std::ostream& out, const DensityMatrix& rho);
void write_state_file(const std::string& path, const DensityMatrix& rho);

}  // namespace qcorr
