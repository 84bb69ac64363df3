#include <doctest.h>

#include <cmath>

#include "ionchaos/scan.hpp"

using namespace ionchaos::scan;

namespace {

ScanScenario quick() {
  ScanScenario sc;
  sc.tau_lyapunov = 300.0;
  return sc;
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(chaos_scan({}, quick()), std::invalid_argument);
  CHECK_THROWS_AS(chaos_scan({2.0, 1.0}, quick()), std::invalid_argument);
  CHECK_THROWS_AS(chaos_scan({1.0}, quick(), 0), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_range(1.0, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_range(0.0, 1.0, 0.0), std::invalid_argument);
  const auto r = epsilon_range(0.0, 20.0, 0.5);
  CHECK(r.size() == 41);
  CHECK(r.back() == 20.0);
}

TEST_CASE("rows are deterministic and ordered") {
  const std::vector<double> grid{0.0, 1.0, 1.0, 5.0, 8.0};
  const auto a = chaos_scan(grid, quick(), 1);
  const auto b = chaos_scan(grid, quick(), 4);
  REQUIRE(a.size() == grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(a[k].epsilon == grid[k]);
    CHECK(same(a[k].lyapunov, b[k].lyapunov));
    CHECK(same(a[k].spectral_entropy, b[k].spectral_entropy));
    CHECK(a[k].error == b[k].error);
  }
  CHECK(a[1].lyapunov == a[2].lyapunov);
  CHECK(a[1].spectral_entropy == a[2].spectral_entropy);
}

TEST_CASE("failures stay in their row") {
  const auto rows = chaos_scan({0.0, 2.0}, quick());
  CHECK(std::isnan(rows[0].spectral_entropy));
  CHECK_FALSE(rows[0].error.empty());
  CHECK(std::isfinite(rows[0].lyapunov));
  CHECK(std::isfinite(rows[1].spectral_entropy));
  CHECK(rows[1].error.empty());
}

TEST_CASE("crossover from synthetic rows") {
  auto row = [](double e, double l) { return ScanRow{e, l, 0.5, ""}; };
  CHECK(indicator_crossover({row(1, 0.001), row(2, 0.002), row(3, 0.1)}) == 2.5);
  CHECK_FALSE(indicator_crossover({row(1, 0.001), row(2, 0.03), row(3, 0.1)}).has_value());
  CHECK_FALSE(indicator_crossover({row(1, 0.001), row(2, 0.002)}).has_value());
  CHECK_FALSE(indicator_crossover({row(1, 0.2)}).has_value());
}
