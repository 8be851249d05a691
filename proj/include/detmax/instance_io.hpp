#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "detmax/errors.hpp"
#include "detmax/types.hpp"

namespace detmax {

enum class InstanceKind { PsdMatrix, Points, GeneralMatrix };

inline const char* to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::PsdMatrix: return "psd-matrix";
    case InstanceKind::Points: return "points";
    case InstanceKind::GeneralMatrix: return "general-matrix";
  }
  return "unknown";
}

inline InstanceKind parse_instance_kind(const std::string& s) {
  if (s == "psd-matrix") return InstanceKind::PsdMatrix;
  if (s == "points") return InstanceKind::Points;
  if (s == "general-matrix") return InstanceKind::GeneralMatrix;
  throw ParseError("unknown instance kind: " + s);
}

/// Plain-text numeric instance. The payload grid is written row-major after a
/// `kind rows cols` header; for the points kind each row is one point.
struct InstanceFile {
  InstanceKind kind = InstanceKind::PsdMatrix;
  Eigen::MatrixXd payload;
  std::string name;
  std::optional<std::uint64_t> seed;

  SymmetricMatrix as_matrix() const {
    if (kind == InstanceKind::Points)
      throw InvalidInput("instance holds points, not a matrix");
    return SymmetricMatrix(payload);
  }

  PointSet as_points() const {
    if (kind != InstanceKind::Points)
      throw InvalidInput("instance holds a matrix, not points");
    return PointSet(payload.transpose()); // points become columns
  }
};

namespace detail {

inline std::string format_double(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

} // namespace detail

inline void write_instance(std::ostream& os, const InstanceFile& file) {
  if (!file.name.empty()) os << "# name: " << file.name << "\n";
  if (file.seed) os << "# seed: " << *file.seed << "\n";
  os << to_string(file.kind) << ' ' << file.payload.rows() << ' '
     << file.payload.cols() << "\n";
  for (Eigen::Index i = 0; i < file.payload.rows(); ++i) {
    for (Eigen::Index k = 0; k < file.payload.cols(); ++k) {
      if (k) os << ' ';
      os << detail::format_double(file.payload(i, k));
    }
    os << "\n";
  }
}

inline void write_instance(const std::string& path, const InstanceFile& file) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  write_instance(os, file);
  if (!os) throw IoError("write failed: " + path);
}

inline InstanceFile read_instance(std::istream& is) {
  InstanceFile file;
  std::string line;
  bool have_header = false;
  Eigen::Index rows = 0, cols = 0, filled = 0;

  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      auto colon = body.find(':');
      if (colon != std::string::npos) {
        std::string key = body.substr(0, colon);
        std::string value = body.substr(colon + 1);
        auto trim = [](std::string s) {
          const auto a = s.find_first_not_of(" \t");
          const auto b = s.find_last_not_of(" \t");
          return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        key = trim(key);
        value = trim(value);
        if (key == "name") file.name = value;
        if (key == "seed" && !value.empty()) file.seed = std::stoull(value);
      }
      continue;
    }
    std::istringstream ss(line);
    if (!have_header) {
      std::string kind;
      if (!(ss >> kind >> rows >> cols))
        throw ParseError("bad header line: " + line);
      file.kind = parse_instance_kind(kind);
      if (rows < 1 || cols < 1) throw ParseError("header dimensions must be positive");
      file.payload.resize(rows, cols);
      have_header = true;
      continue;
    }
    if (filled >= rows) throw ParseError("more rows than the header declares");
    for (Eigen::Index k = 0; k < cols; ++k) {
      double value;
      if (!(ss >> value)) throw ParseError("short or malformed data row: " + line);
      file.payload(filled, k) = value;
    }
    double extra;
    if (ss >> extra) throw ParseError("data row longer than the header declares");
    ++filled;
  }
  if (!have_header) throw ParseError("missing header line");
  if (filled != rows) throw ParseError("fewer rows than the header declares");

  if (file.kind == InstanceKind::PsdMatrix) {
    if (rows != cols) throw ParseError("psd-matrix payload must be square");
    const double scale = 1.0 + file.payload.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index k = i + 1; k < cols; ++k)
        if (std::abs(file.payload(i, k) - file.payload(k, i)) > 1e-9 * scale)
          throw ParseError("psd-matrix payload is not symmetric");
  }
  return file;
}

inline InstanceFile read_instance(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open for reading: " + path);
  return read_instance(is);
}

} // namespace detmax
