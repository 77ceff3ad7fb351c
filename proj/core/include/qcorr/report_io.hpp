#pragma once

#include <string>

#include "qcorr/protocol.hpp"

namespace qcorr {

// Verification records stream as JSON lines (one record per line) with a CSV
// mirror carrying the same columns:
//   name, lhs_value, lhs_direction, rhs_value, rhs_direction, slack,
//   sound, pass, certificate_kind
// Numeric fields print with 12 significant digits.

std::string format_sig(double value, int digits = 12);

std::string record_json_line(const VerificationRecord& rec);
std::string record_csv_header();
std::string record_csv_line(const VerificationRecord& rec);

}  // namespace qcorr
