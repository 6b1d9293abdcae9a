#include "pdk/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace pdk {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& msg) {
  throw ParseError(std::string(source) + ":" + std::to_string(line) + ": " + msg);
}

double parse_number(std::string_view field, std::string_view source, std::size_t line,
                    std::size_t column) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    fail(source, line, "field " + std::to_string(column) + ": invalid number '" + std::string(field) + "'");
  }
  return v;
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    ++line_no;
    f(text.substr(0, nl), line_no);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(std::string_view data) noexcept {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string points_to_csv(const DomainId& domain, std::span<const DomainPoint> points) {
  std::string header = domain.spec();
  if (const auto colon = header.find(':'); colon != std::string::npos) header[colon] = ',';
  std::string out = "# " + header + "\n";
  for (const auto& p : points) {
    if (!(p.domain() == domain)) {
      throw std::invalid_argument("point on " + p.domain().spec() + " in a set for " + domain.spec());
    }
    const auto& c = p.coords();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) out += ',';
      out += format_double(c[i]);
    }
    out += '\n';
  }
  return out;
}

PointSet points_from_csv(std::string_view text, std::string_view source) {
  std::optional<DomainId> domain;
  std::vector<DomainPoint> points;
  for_each_line(text, [&](std::string_view raw, std::size_t line) {
    const std::string_view s = trim(raw);
    if (s.empty()) return;
    if (s.front() == '#') {
      if (domain) return;
      std::string spec(trim(s.substr(1)));
      if (spec.find(':') == std::string::npos) {
        if (const auto comma = spec.find(','); comma != std::string::npos) spec[comma] = ':';
      }
      try {
        domain = parse_domain(spec);
      } catch (const std::exception& e) {
        fail(source, line, std::string("bad domain header: ") + e.what());
      }
      return;
    }
    if (!domain) fail(source, line, "missing '# <domain>' header line");
    std::vector<double> coords;
    std::size_t column = 1;
    std::string_view rest = s;
    while (true) {
      const auto comma = rest.find(',');
      coords.push_back(parse_number(rest.substr(0, comma), source, line, column));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
      ++column;
    }
    try {
      points.emplace_back(*domain, std::move(coords));
    } catch (const std::domain_error& e) {
      fail(source, line, e.what());
    }
  });
  if (!domain) throw ParseError(std::string(source) + ": missing '# <domain>' header line");
  return PointSet{*domain, std::move(points)};
}

std::uint64_t points_hash(const DomainId& domain, std::span<const DomainPoint> points) {
  return fnv1a64(points_to_csv(domain, points));
}

std::string values_to_csv(std::span<const double> values) {
  std::string out;
  for (double v : values) {
    out += format_double(v);
    out += '\n';
  }
  return out;
}

std::vector<double> values_from_csv(std::string_view text, std::string_view source) {
  std::vector<double> out;
  for_each_line(text, [&](std::string_view raw, std::size_t line) {
    const std::string_view s = trim(raw);
    if (s.empty() || s.front() == '#') return;
    if (s.find(',') != std::string_view::npos) fail(source, line, "expected one value per row");
    out.push_back(parse_number(s, source, line, 1));
  });
  return out;
}

std::string matrix_to_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

nlohmann::json series_to_json(const CoefficientSeries& series) {
  return nlohmann::json{{"lambda", series.lambda().value()},
                        {"coeffs", series.coeffs()},
                        {"parity", std::string(to_string(series.parity()))}};
}

CoefficientSeries series_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("series: expected a JSON object");
  for (const char* key : {"lambda", "coeffs", "parity"}) {
    if (!j.contains(key)) throw ParseError(std::string("series: missing field \"") + key + "\"");
  }
  if (!j["lambda"].is_number()) throw ParseError("series: field \"lambda\" must be a number");
  if (!j["coeffs"].is_array()) throw ParseError("series: field \"coeffs\" must be an array");
  if (!j["parity"].is_string()) throw ParseError("series: field \"parity\" must be a string");
  std::vector<double> coeffs;
  for (std::size_t i = 0; i < j["coeffs"].size(); ++i) {
    const auto& c = j["coeffs"][i];
    if (!c.is_number()) {
      throw ParseError("series: coeffs[" + std::to_string(i) + "] is not a number");
    }
    coeffs.push_back(c.get<double>());
  }
  try {
    return CoefficientSeries(Lambda(j["lambda"].get<double>()), std::move(coeffs),
                             parse_parity(j["parity"].get<std::string>()));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("series: ") + e.what());
  }
}

std::uint64_t series_id(const CoefficientSeries& series) { return fnv1a64(series_to_json(series).dump()); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("error writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
  }
}

}  // namespace pdk
