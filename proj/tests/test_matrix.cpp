#include <doctest.h>

#include "mechkernel/matrix.hpp"
#include "support/generators.hpp"

using namespace mechkernel;
using testgen::mat;
using testgen::vec;

TEST_CASE("multiply agrees with hand expansion") {
  const Matrix a = mat(2, 3, {"1", "2", "3", "4", "5", "6"});
  const Matrix b = mat(3, 2, {"1", "0", "0", "1", "1", "1"});
  CHECK(a.multiply(b) == mat(2, 2, {"4", "5", "10", "11"}));
  CHECK(a.multiply(vec({"1", "1", "1"})) == vec({"6", "15"}));
}

TEST_CASE("kronecker product places blocks row-major") {
  const Matrix a = mat(2, 2, {"1", "2", "3", "4"});
  const Matrix b = mat(2, 2, {"0", "1", "1", "0"});
  const Matrix k = a.kronecker(b);
  REQUIRE(k.rows() == 4);
  REQUIRE(k.cols() == 4);
  for (std::size_t i1 = 0; i1 < 2; ++i1) {
    for (std::size_t i2 = 0; i2 < 2; ++i2) {
      for (std::size_t j1 = 0; j1 < 2; ++j1) {
        for (std::size_t j2 = 0; j2 < 2; ++j2) {
          CHECK(k.at(i1 * 2 + i2, j1 * 2 + j2) == a.at(i1, j1) * b.at(i2, j2));
        }
      }
    }
  }
}

TEST_CASE("transpose and stack_below") {
  const Matrix a = mat(2, 3, {"1", "2", "3", "4", "5", "6"});
  CHECK(a.transpose() == mat(3, 2, {"1", "4", "2", "5", "3", "6"}));
  CHECK(a.stack_below(mat(1, 3, {"7", "8", "9"})) ==
        mat(3, 3, {"1", "2", "3", "4", "5", "6", "7", "8", "9"}));
}

TEST_CASE("reduced row echelon form finds rank and pivots") {
  const Matrix a = mat(3, 4,
                       {"1", "2", "0", "1",
                        "2", "4", "1", "0",
                        "3", "6", "1", "1"});
  const Rref r = a.reduced_row_echelon();
  CHECK(r.rank == 2);
  CHECK(r.pivot_cols == std::vector<std::size_t>{0, 2});
  CHECK(r.reduced == mat(3, 4,
                         {"1", "2", "0", "1",
                          "0", "0", "1", "-2",
                          "0", "0", "0", "0"}));
  CHECK(r.reduced.reduced_row_echelon().reduced == r.reduced);
}

TEST_CASE("null space basis spans the kernel exactly") {
  const Matrix pool = mat(1, 3, {"1", "1", "1"});
  const auto basis = pool.null_space_basis();
  REQUIRE(basis.size() == 2);
  for (const RatVec& v : basis) {
    const RatVec image = pool.multiply(v);
    for (const Rational& x : image) CHECK(x == 0);
  }
  CHECK(Matrix::identity(4).null_space_basis().empty());
}

TEST_CASE("solve returns the unique solution or nothing") {
  const Matrix a = mat(2, 2, {"2", "1", "1", "3"});
  const auto x = a.solve(vec({"5", "10"}));
  REQUIRE(x.has_value());
  CHECK(*x == vec({"1", "3"}));

  // inconsistent
  const Matrix b = mat(2, 1, {"1", "1"});
  CHECK_FALSE(b.solve(vec({"1", "2"})).has_value());
  // underdetermined
  const Matrix c = mat(1, 2, {"1", "1"});
  CHECK_FALSE(c.solve(vec({"1"})).has_value());
}

TEST_CASE("inverse golden: the smoothed identity kernel") {
  const Matrix g = mat(3, 3,
                       {"0.8", "0.1", "0.1",
                        "0.1", "0.8", "0.1",
                        "0.1", "0.1", "0.8"});
  const auto inv = g.inverse();
  REQUIRE(inv.has_value());
  CHECK(*inv == mat(3, 3,
                    {"9/7", "-1/7", "-1/7",
                     "-1/7", "9/7", "-1/7",
                     "-1/7", "-1/7", "9/7"}));
  CHECK_FALSE(mat(2, 2, {"1", "2", "2", "4"}).inverse().has_value());
}

TEST_CASE("random matrices: inverse multiplies back to identity") {
  testgen::Rng rng(2026);
  std::size_t inverted = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = testgen::pick(rng, 1, 4);
    Matrix a(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        a.at(r, c) = mechkernel::ratio(static_cast<long>(testgen::pick(rng, 0, 6)) - 3, 2);
      }
    }
    const auto inv = a.inverse();
    if (!inv) {
      CHECK(a.rank() < n);
      continue;
    }
    ++inverted;
    CHECK(a.multiply(*inv) == Matrix::identity(n));
    CHECK(inv->multiply(a) == Matrix::identity(n));
  }
  CHECK(inverted > 10);
}

TEST_CASE("null space containment and equality") {
  const Matrix pool = mat(1, 3, {"1", "1", "1"});
  const Matrix scaled = mat(1, 3, {"2", "2", "2"});
  const Matrix finer = mat(2, 3, {"1", "1", "0", "0", "0", "1"});
  CHECK(same_null_space(pool, scaled));
  CHECK(null_space_contained(finer, pool));
  CHECK_FALSE(null_space_contained(pool, finer));
  CHECK_FALSE(same_null_space(pool, finer));
}
