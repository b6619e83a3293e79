#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "centered_bound/hypgeom.hpp"
#include "oracle.hpp"

using namespace centered_bound;

namespace {
HalfSinhLength hs(double s) { return HalfSinhLength(s); }
}  // namespace

TEST_CASE("HalfSinhLength rejects nonpositive and nonfinite values") {
  CHECK_THROWS_AS(HalfSinhLength(0.0), std::invalid_argument);
  CHECK_THROWS_AS(HalfSinhLength(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(HalfSinhLength(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(HalfSinhLength(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("HalfSinhLength round-trips with raw length") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> dist(0.01, 20.0);
  for (int i = 0; i < 200; ++i) {
    const double s = dist(rng);
    const HalfSinhLength h = hs(s);
    CHECK(HalfSinhLength::from_length(h.length()).sinh_half() ==
          Catch::Approx(s).epsilon(1e-12));
  }
  CHECK(hs(1.0).length() == Catch::Approx(2.0 * std::asinh(1.0)).epsilon(1e-15));
}

TEST_CASE("triangle area: semicyclic (1,1,sqrt2) triangle has area pi/3") {
  CHECK(triangle_area(hs(1), hs(1), hs(std::sqrt(2.0))) ==
        Catch::Approx(M_PI / 3.0).margin(1e-12));
}

TEST_CASE("triangle area matches the angle-defect route") {
  // equilateral with sinh(len/2) = 1; expected value from the angle-defect
  // computation (pi minus angle sum via the law of cosines)
  const double defect = oracle::angle_defect_area(hs(1), hs(1), hs(1));
  CHECK(defect == Catch::Approx(0.9733899101495496).margin(1e-12));
  CHECK(triangle_area(hs(1), hs(1), hs(1)) == Catch::Approx(defect).margin(1e-10));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.05, 10.0);
  oracle::OracleReport report;
  for (int i = 0; i < 2000; ++i) {
    const double a = dist(rng), b = dist(rng), c = dist(rng);
    double defect_area;
    try {
      defect_area = oracle::angle_defect_area(hs(a), hs(b), hs(c));
    } catch (const DomainError&) {
      continue;  // not a triangle; both routes must agree on that too
    }
    const double heron = triangle_area(hs(a), hs(b), hs(c));
    ++report.checked_cases;
    report.max_discrepancy = std::max(report.max_discrepancy, std::fabs(heron - defect_area));
  }
  CHECK(report.checked_cases > 500);
  CHECK(report.max_discrepancy < 1e-10);
}

TEST_CASE("triangle area is exactly symmetric in its arguments") {
  const HalfSinhLength a = hs(0.3), b = hs(1.7), c = hs(1.9);
  const double ref = triangle_area(a, b, c);
  CHECK(triangle_area(a, c, b) == ref);
  CHECK(triangle_area(b, a, c) == ref);
  CHECK(triangle_area(b, c, a) == ref);
  CHECK(triangle_area(c, a, b) == ref);
  CHECK(triangle_area(c, b, a) == ref);
}

TEST_CASE("triangle area degenerates to zero with the sides") {
  double prev = triangle_area(hs(0.5), hs(0.5), hs(0.5));
  for (double s : {0.2, 0.1, 0.05, 0.01}) {
    const double area = triangle_area(hs(s), hs(s), hs(s));
    CHECK(area < prev);
    CHECK(area == Catch::Approx(std::sqrt(3.0) * s * s).epsilon(0.05));  // Euclidean limit
    prev = area;
  }
  // below ~1e-4 the acos argument saturates; the area can only be read to
  // its resolution floor of a few 1e-8
  CHECK(triangle_area(hs(1e-6), hs(1e-6), hs(1e-6)) < 1e-7);
}

TEST_CASE("triangle area rejects impossible triples, clamps roundoff") {
  CHECK_THROWS_AS(triangle_area(hs(0.1), hs(0.1), hs(10.0)), DomainError);
  CHECK_THROWS_MATCHES(triangle_area(hs(0.1), hs(0.1), hs(10.0)), DomainError,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("0.1") &&
                           Catch::Matchers::ContainsSubstring("10")));

  // barely past degenerate: inside the 1e-9 clamp, area collapses to 0
  const auto a = HalfSinhLength::from_length(1.0);
  const auto b = HalfSinhLength::from_length(1.0);
  const auto c_in = HalfSinhLength::from_length(2.0 + 1e-12);
  CHECK(triangle_area(a, b, c_in) >= 0.0);
  CHECK(triangle_area(a, b, c_in) < 1e-5);
  // far past degenerate: a genuine domain error
  const auto c_out = HalfSinhLength::from_length(2.0 + 1e-3);
  CHECK_THROWS_AS(triangle_area(a, b, c_out), DomainError);
}

TEST_CASE("semicyclic radius: value, symmetry, dominance") {
  CHECK(semicyclic_radius(hs(1), hs(1)).sinh_half() ==
        Catch::Approx(std::sqrt(2.0)).epsilon(1e-15));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(0.05, 20.0);
  for (int i = 0; i < 500; ++i) {
    const double x = dist(rng), y = dist(rng);
    const HalfSinhLength r = semicyclic_radius(hs(x), hs(y));
    CHECK(r.sinh_half() == semicyclic_radius(hs(y), hs(x)).sinh_half());
    CHECK(r.sinh_half() > std::max(x, y));
    CHECK(r.sinh_half() == Catch::Approx(std::sqrt(x * x + y * y)).epsilon(1e-15));
  }
}

TEST_CASE("semicyclic area: closed form and Heron agree") {
  CHECK(semicyclic_area(hs(1), hs(1)) == Catch::Approx(M_PI / 3.0).margin(1e-15));
  // (1, sqrt3) completes with radius sinh-half 2
  CHECK(semicyclic_radius(hs(1), hs(std::sqrt(3.0))).sinh_half() ==
        Catch::Approx(2.0).epsilon(1e-15));
  CHECK(semicyclic_area(hs(1), hs(std::sqrt(3.0))) ==
        Catch::Approx(2.0 * std::asin(std::sqrt(3.0 / 8.0))).margin(1e-14));
  CHECK(semicyclic_area(hs(1), hs(std::sqrt(3.0))) ==
        Catch::Approx(triangle_area(hs(1), hs(std::sqrt(3.0)), hs(2))).margin(1e-12));

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> dist(0.05, 20.0);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double x = dist(rng), y = dist(rng);
    const double direct = semicyclic_area(hs(x), hs(y));
    const double via_heron = triangle_area(hs(x), hs(y), semicyclic_radius(hs(x), hs(y)));
    worst = std::max(worst, std::fabs(direct - via_heron));
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("equal-sided semicyclic area") {
  CHECK(semicyclic_area(hs(1)) == semicyclic_area(hs(1), hs(1)));
  CHECK(semicyclic_area(hs(1)) == Catch::Approx(M_PI / 3.0).margin(1e-15));
  // tanh^2 of the half-length is s^2/(1+s^2) = 4/5 at s = 2
  CHECK(semicyclic_area(hs(2)) == Catch::Approx(2.0 * std::asin(0.8)).margin(1e-14));
  CHECK(semicyclic_area(hs(1e-6)) < 1e-11);
}

TEST_CASE("semicyclic functions increase in each argument") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(0.05, 10.0);
  for (int i = 0; i < 300; ++i) {
    const double x = dist(rng), y = dist(rng);
    const double bump = 1e-3 + 0.1 * dist(rng);
    CHECK(semicyclic_area(hs(x + bump), hs(y)) > semicyclic_area(hs(x), hs(y)));
    CHECK(semicyclic_area(hs(x), hs(y + bump)) > semicyclic_area(hs(x), hs(y)));
    CHECK(semicyclic_radius(hs(x + bump), hs(y)).sinh_half() >
          semicyclic_radius(hs(x), hs(y)).sinh_half());
    CHECK(semicyclic_radius(hs(x), hs(y + bump)).sinh_half() >
          semicyclic_radius(hs(x), hs(y)).sinh_half());
  }
}

TEST_CASE("semicyclic radius derivative in raw lengths stays inside (0, 1)") {
  // central finite differences of 2*asinh(sqrt(sinh^2(l1/2)+sinh^2(l2/2)))
  auto radius_raw = [](double l1, double l2) {
    const double s1 = std::sinh(0.5 * l1), s2 = std::sinh(0.5 * l2);
    return 2.0 * std::asinh(std::sqrt(s1 * s1 + s2 * s2));
  };
  const double h = 1e-5;
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> dist(0.05, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double l1 = 2.0 * std::asinh(dist(rng));
    const double l2 = 2.0 * std::asinh(dist(rng));
    const double d1 = (radius_raw(l1 + h, l2) - radius_raw(l1 - h, l2)) / (2.0 * h);
    const double d2 = (radius_raw(l1, l2 + h) - radius_raw(l1, l2 - h)) / (2.0 * h);
    CHECK(d1 > 0.0);
    CHECK(d1 < 1.0);
    CHECK(d2 > 0.0);
    CHECK(d2 < 1.0);
  }
}

TEST_CASE("angle-defect oracle: reference values and degeneration") {
  CHECK(oracle::angle_defect_area(hs(1), hs(1), hs(std::sqrt(2.0))) ==
        Catch::Approx(M_PI / 3.0).margin(1e-12));
  // as c approaches a + b in raw lengths the area collapses
  const auto a = HalfSinhLength::from_length(1.0);
  const auto b = HalfSinhLength::from_length(0.8);
  double prev = oracle::angle_defect_area(a, b, HalfSinhLength::from_length(1.7));
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    const double area = oracle::angle_defect_area(a, b, HalfSinhLength::from_length(1.8 - eps));
    CHECK(area < prev);
    prev = area;
  }
  CHECK(prev < 1e-2);
  CHECK_THROWS_AS(oracle::angle_defect_area(a, b, HalfSinhLength::from_length(2.5)),
                  DomainError);
}
