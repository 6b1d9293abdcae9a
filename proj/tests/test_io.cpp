#include "doctest.h"

#include <filesystem>
#include <string>

#include "pdk/io.hpp"

using namespace pdk;

namespace {

std::string message_of(const auto& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("hash and number formatting") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(hex64(0xabcull) == "0000000000000abc");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-2.0) == "-2");
}

TEST_CASE("point CSV round trips exactly") {
  for (const char* spec : {"ball:d=3", "hyp-surface:d=2,rho=0.5,sign=-", "hyperboloid:d=2,rho=0.5,sign=+", "cone3",
                           "simplex:d=3", "sphere:d=2", "quadrant:d=3,k=2"}) {
    CAPTURE(spec);
    const DomainId dom = parse_domain(spec);
    const auto pts = sample(dom, 25, 6);
    const std::string csv = points_to_csv(dom, pts);
    CHECK(csv.rfind("# ", 0) == 0);
    const PointSet back = points_from_csv(csv);
    CHECK(back.domain == dom);
    REQUIRE(back.points.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(back.points[i].coords() == pts[i].coords());
    CHECK(points_hash(dom, back.points) == points_hash(dom, pts));
    CHECK(points_to_csv(dom, back.points) == csv);
  }
}

TEST_CASE("point CSV header forms") {
  const auto a = points_from_csv("# ball,d=2\n0.1,0.2\n\n0.3,-0.4\n");
  CHECK(a.domain == DomainId::ball(2));
  CHECK(a.points.size() == 2);
  const auto b = points_from_csv("# hyp-surface:d=2,rho=0.5,sign=+\n0,0,0.5\n");
  CHECK(b.domain == DomainId::hyperbolic_surface(2, 0.5));
  CHECK(points_to_csv(DomainId::ball(2), a.points).rfind("# ball,d=2\n", 0) == 0);
}

TEST_CASE("point CSV diagnostics name the line and field") {
  CHECK(message_of([] { points_from_csv("# ball,d=2\n0.1,0.2\n0.1,abc\n", "pts.csv"); }) ==
        "pts.csv:3: field 2: invalid number 'abc'");
  CHECK(message_of([] { points_from_csv("0.1,0.2\n", "pts.csv"); }).rfind("pts.csv:1: missing", 0) == 0);
  CHECK(message_of([] { points_from_csv("# ball,d=2\n0.9,0.9\n", "p"); }).rfind("p:2: point is not on ball:d=2", 0) ==
        0);
  CHECK(message_of([] { points_from_csv("# ball,d=2\n0.1\n", "p"); }).rfind("p:2: point on ball:d=2 needs 2", 0) ==
        0);
  CHECK(message_of([] { points_from_csv("# torus,d=2\n", "p"); }).rfind("p:1: bad domain header", 0) == 0);
  CHECK(message_of([] { points_from_csv("", "p"); }) == "p: missing '# <domain>' header line");
  CHECK_THROWS_AS(points_from_csv("# ball,d=2\n0.1,,0.2\n"), ParseError);
}

TEST_CASE("values CSV") {
  const std::vector<double> v{1.0, -0.25, 1e-300, 3.141592653589793};
  CHECK(values_from_csv(values_to_csv(v)) == v);
  CHECK(values_from_csv("# comment\n1\n\n2\n") == std::vector<double>{1.0, 2.0});
  CHECK(message_of([] { values_from_csv("1\n2,3\n", "v.csv"); }) == "v.csv:2: expected one value per row");
  CHECK(message_of([] { values_from_csv("1\nx\n", "v.csv"); }) == "v.csv:2: field 1: invalid number 'x'");
}

TEST_CASE("matrix CSV") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 0.5, 0.5, 1;
  CHECK(matrix_to_csv(m) == "1,0.5\n0.5,1\n");
}

TEST_CASE("series JSON") {
  const CoefficientSeries s(Lambda(0.5), {1.0, 0.0, 0.25}, Parity::even);
  const auto j = series_to_json(s);
  CHECK(j["lambda"] == 0.5);
  CHECK(j["parity"] == "even");
  const CoefficientSeries back = series_from_json(j);
  CHECK(back.coeffs() == s.coeffs());
  CHECK(back.parity() == Parity::even);
  CHECK(series_id(back) == series_id(s));
  CHECK(series_id(CoefficientSeries(Lambda(0.5), {1.0, 0.0, 0.5})) != series_id(s));

  using nlohmann::json;
  CHECK(message_of([] { series_from_json(json::parse(R"({"lambda":0.5,"coeffs":[1]})")); }) ==
        "series: missing field \"parity\"");
  CHECK(message_of([] { series_from_json(json::parse(R"({"lambda":0.5,"coeffs":[1,"x"],"parity":"any"})")); }) ==
        "series: coeffs[1] is not a number");
  CHECK_THROWS_AS(series_from_json(json::parse(R"({"lambda":0.5,"coeffs":[1,-1],"parity":"any"})")), ParseError);
  CHECK_THROWS_AS(series_from_json(json::parse(R"({"lambda":0.5,"coeffs":[1,1],"parity":"even"})")), ParseError);
  CHECK_THROWS_AS(series_from_json(json::parse(R"({"lambda":-1,"coeffs":[1],"parity":"any"})")), ParseError);
  CHECK_THROWS_AS(series_from_json(json::parse("[1,2]")), ParseError);
}

TEST_CASE("atomic writes") {
  const auto dir = std::filesystem::temp_directory_path() / "pdk_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  CHECK(read_file(path) == "second\n");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  CHECK_THROWS_AS(read_file(dir / "missing.txt"), std::invalid_argument);
  CHECK_THROWS(write_file_atomic(dir / "no" / "such" / "dir.txt", "x"));
  std::filesystem::remove_all(dir);
}
