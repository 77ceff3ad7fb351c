#include "qcorr/state_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qcorr {
namespace {

using nlohmann::json;

Eigen::MatrixXd parse_real_matrix(const json& j, const char* field, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw StateFormatError(std::string("field '") + field + "' must be a " + std::to_string(dim) +
                           "-row matrix");
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw StateFormatError(std::string("field '") + field + "' row " + std::to_string(r) +
                             " must have " + std::to_string(dim) + " entries");
    for (int c = 0; c < dim; ++c) {
      if (!row[c].is_number())
        throw StateFormatError(std::string("field '") + field + "' entry (" + std::to_string(r) +
                               "," + std::to_string(c) + ") is not a number");
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

DensityMatrix read_state_json(std::istream& in, Repair repair) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw StateFormatError(std::string("JSON parse failure: ") + e.what());
  }
  if (!j.is_object()) throw StateFormatError("top level value must be an object");
  for (const char* field : {"labels", "dims", "re", "im"})
    if (!j.contains(field)) throw StateFormatError(std::string("missing field '") + field + "'");

  std::vector<std::string> labels;
  for (const auto& l : j["labels"]) {
    if (!l.is_string()) throw StateFormatError("field 'labels' must hold strings");
    labels.push_back(l.get<std::string>());
  }
  std::vector<int> dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer()) throw StateFormatError("field 'dims' must hold integers");
    dims.push_back(d.get<int>());
  }
  if (labels.size() != dims.size()) throw StateFormatError("'labels' and 'dims' lengths differ");
  long total = 1;
  for (int d : dims) {
    if (d < 2) throw StateFormatError("field 'dims' entries must be >= 2");
    total *= d;
  }
  if (total > 4096) throw StateFormatError("state dimension too large");

  Eigen::MatrixXd re = parse_real_matrix(j["re"], "re", static_cast<int>(total));
  Eigen::MatrixXd im = parse_real_matrix(j["im"], "im", static_cast<int>(total));
  Matrix m = re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();
  try {
    return DensityMatrix(std::move(labels), std::move(dims), std::move(m), repair);
  } catch (const std::invalid_argument& e) {
    throw StateFormatError(e.what());
  }
}

DensityMatrix read_state_file(const std::string& path, Repair repair) {
  std::ifstream in(path);
  if (!in) throw StateFormatError("cannot open state file: " + path);
  try {
    return read_state_json(in, repair);
  } catch (const StateFormatError& e) {
    throw StateFormatError(path + ": " + e.what());
  }
}

void write_state_json(std::ostream& out, const DensityMatrix& rho) {
  out << "{\"labels\": [";
  for (std::size_t k = 0; k < rho.labels().size(); ++k) {
    if (k) out << ", ";
    out << '"' << rho.labels()[k] << '"';
  }
  out << "], \"dims\": [";
  for (std::size_t k = 0; k < rho.dims().size(); ++k) {
    if (k) out << ", ";
    out << rho.dims()[k];
  }
  out << "],\n";
  const int d = rho.dim();
  for (const char* part : {"re", "im"}) {
    out << '"' << part << "\": [";
    const bool real_part = part[0] == 'r';
    for (int r = 0; r < d; ++r) {
      out << (r ? ",\n  [" : "\n  [");
      for (int c = 0; c < d; ++c) {
        if (c) out << ", ";
        const Complex v = rho.entries()(r, c);
        out << fmt17(real_part ? v.real() : v.imag());
      }
      out << "]";
    }
    out << (real_part ? "],\n" : "]}\n");
  }
}

void write_state_file(const std::string& path, const DensityMatrix& rho) {
  std::ofstream out(path);
  if (!out) throw StateFormatError("cannot open output file: " + path);
  write_state_json(out, rho);
}

}  // namespace qcorr
