#include "qcorr/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace qcorr {

std::string format_sig(double value, int digits) {
  if (std::isinf(value)) return value > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
  return buf;
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string record_json_line(const VerificationRecord& rec) {
  std::ostringstream os;
  os << "{\"name\": \"" << escape(rec.name) << "\""
     << ", \"lhs_value\": " << format_sig(rec.lhs.value)
     << ", \"lhs_direction\": \"" << to_string(rec.lhs.direction) << "\""
     << ", \"rhs_value\": " << format_sig(rec.rhs.value)
     << ", \"rhs_direction\": \"" << to_string(rec.rhs.direction) << "\""
     << ", \"slack\": " << format_sig(rec.slack)
     << ", \"sound\": " << (rec.sound ? "true" : "false")
     << ", \"pass\": " << (rec.pass ? "true" : "false")
     << ", \"certificate_kind\": \"" << escape(rec.certificate_kind) << "\"}";
  return os.str();
}

std::string record_csv_header() {
  return "name,lhs_value,lhs_direction,rhs_value,rhs_direction,slack,sound,pass,certificate_kind";
}

std::string record_csv_line(const VerificationRecord& rec) {
  std::ostringstream os;
  os << rec.name << ',' << format_sig(rec.lhs.value) << ',' << to_string(rec.lhs.direction) << ','
     << format_sig(rec.rhs.value) << ',' << to_string(rec.rhs.direction) << ','
     << format_sig(rec.slack) << ',' << (rec.sound ? "true" : "false") << ','
     << (rec.pass ? "true" : "false") << ',' << rec.certificate_kind;
  return os.str();
}

}  // namespace qcorr
