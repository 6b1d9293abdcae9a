#pragma once

// File formats: point-set CSV, values CSV, matrix CSV, CoefficientSeries JSON.
// Floats are written with 17 significant digits so they round-trip exactly.

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pdk/domains.hpp"
#include "pdk/gegenbauer.hpp"

namespace pdk {

/// Malformed input file; the message carries source, line and field.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string format_double(double v);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view data) noexcept;
std::string hex64(std::uint64_t h);

struct PointSet {
  DomainId domain;
  std::vector<DomainPoint> points;
};

/// "# <kind>,<params>" followed by one comma separated point per row.
std::string points_to_csv(const DomainId& domain, std::span<const DomainPoint> points);
PointSet points_from_csv(std::string_view text, std::string_view source = "<points>");

/// Hash of the canonical CSV text of a point set.
std::uint64_t points_hash(const DomainId& domain, std::span<const DomainPoint> points);

std::string values_to_csv(std::span<const double> values);
std::vector<double> values_from_csv(std::string_view text, std::string_view source = "<values>");

std::string matrix_to_csv(const Eigen::MatrixXd& m);

nlohmann::json series_to_json(const CoefficientSeries& series);
/// Requires exactly the fields lambda, coeffs, parity (others are ignored).
CoefficientSeries series_from_json(const nlohmann::json& j);
/// Hash of the compact JSON form, used as a series id.
std::uint64_t series_id(const CoefficientSeries& series);

std::string read_file(const std::filesystem::path& path);
/// Writes to a temporary file next to the target and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace pdk
