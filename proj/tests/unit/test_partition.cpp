#include <doctest.h>

#include <cmath>

#include "llt/errors.hpp"
#include "llt/partition.hpp"

namespace {

double centering(int m, int n, double sigma) {
  double s = 0.0;
  for (int j = std::max(m, 1); j <= n; ++j) s += j / (1.0 + std::exp(sigma * j));
  return s;
}

}  // namespace

TEST_SUITE("partition") {
  TEST_CASE("enumeration examples") {
    CHECK(llt::count_via_enumeration(1, 6) == 4);
    CHECK(llt::count_via_enumeration(1, 1) == 1);
    CHECK(llt::count_via_enumeration(1, 10) == 10);
    CHECK(llt::count_via_enumeration(3, 10) == 3);
    CHECK(llt::count_via_enumeration(0, 10) == 10);
    CHECK(llt::count_via_enumeration(7, 7) == 1);
    CHECK(llt::count_via_enumeration(6, 10) == 1);
    CHECK(llt::count_via_enumeration(1, 60) == 10880);
    CHECK_THROWS_AS(llt::count_via_enumeration(1, 61), llt::InputError);
  }

  TEST_CASE("sigma solves the centering equation") {
    const auto d = llt::solve_sigma(1, 1);
    CHECK(d.degenerate);
    for (int n : {3, 10, 30, 60}) {
      for (int m = 1; m < n; ++m) {
        const auto s = llt::solve_sigma(m, n);
        CHECK_FALSE(s.degenerate);
        CHECK(std::abs(centering(m, n, s.sigma) - n) <= 1e-12 * n);
        // sign of the root is fixed by the midpoint value
        const double mid = centering(m, n, 0.0);
        if (mid > n) CHECK(s.sigma > 0.0);
        if (mid < n) CHECK(s.sigma < 0.0);
      }
    }
    CHECK(llt::solve_sigma(0, 10).sigma == llt::solve_sigma(1, 10).sigma);
    CHECK_THROWS_AS(llt::solve_sigma(11, 10), llt::InputError);
  }

  TEST_CASE("model examples") {
    CHECK(llt::count_via_model(1, 6).q == 4);
    CHECK(llt::count_via_model(1, 10).q == 10);
    CHECK(llt::count_via_model(3, 10).q == 3);
    CHECK(llt::count_via_model(10, 10).q == 1);
    CHECK(llt::count_via_model(1, 60).q == 10880);
  }

  TEST_CASE("model matches enumeration on the grid") {
    for (int n = 1; n <= 30; ++n) {
      for (int m = 1; m <= n; ++m) {
        const auto c = llt::count_via_model(m, n);
        CHECK(c.q == llt::count_via_enumeration(m, n));
        CHECK(c.rounding_error <= 1e-6);
      }
    }
  }

  TEST_CASE("identity holds at perturbed tilts") {
    for (int n : {12, 20, 30}) {
      for (int m : {1, 2, 5}) {
        const auto base = llt::count_via_model(m, n);
        for (double eps : {-1e-3, 1e-3}) {
          const auto p = llt::count_via_model_at(m, n, base.sigma + eps);
          CHECK(std::abs(p.raw - base.raw) <= 1e-6);
          CHECK(p.q == base.q);
        }
      }
    }
  }
}
