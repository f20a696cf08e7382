#include <algorithm>
#include <set>

#include "doctest.h"

#include "ampsim/bitlattice.hpp"
#include "ampsim/errors.hpp"

using namespace ampsim;

namespace {

// Rotation by repeated single-digit moves, independent of the word tricks.
std::uint64_t shift_by_digits(int n, std::uint64_t index) {
  std::uint64_t out = 0;
  for (int k = 0; k < n; ++k) {
    if ((index >> k) & 1U) out |= std::uint64_t{1} << ((k + 1) % n);
  }
  return out;
}

}  // namespace

TEST_CASE("digit strings and indices") {
  const auto c = BitConfig::from_string("11000");
  CHECK(c.size() == 5);
  CHECK(c.index() == 3);
  CHECK(c.to_string() == "11000");
  CHECK(c.popcount() == 2);
  CHECK(BitConfig::from_index(5, 3) == c);
  const int digits[] = {0, 1, 1, 0, 0};
  CHECK(BitConfig::from_digits(digits).index() == 6);
  CHECK(c.with_digit(4, true).to_string() == "11001");
}

TEST_CASE("shift moves the last digit to the front") {
  const auto s = shift(BitConfig::from_string("11000"));
  CHECK(s.to_string() == "01100");
  CHECK(s.index() == 6);
  CHECK(shift_index(5, 3) == 6);
  CHECK(shift_index(5, 0) == 0);
  CHECK(shift_index(5, 31) == 31);
  CHECK(shift(BitConfig(5)) == BitConfig(5));
}

TEST_CASE("shift index agrees with doubling mod 2^n - 1 and with digit moves") {
  for (int n : {2, 3, 5, 7, 11}) {
    const std::uint64_t top = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t i = 1; i < top; ++i) {
      CHECK(shift_index(n, i) == (2 * i) % top);
      CHECK(shift_index(n, i) == shift_by_digits(n, i));
      CHECK(shift(BitConfig::from_index(n, i)).index() == shift_index(n, i));
    }
  }
}

TEST_CASE("shift powers") {
  const auto c = BitConfig::from_string("1101000");
  CHECK(shift(c, 7) == c);
  CHECK(shift(c, 0) == c);
  CHECK(shift(shift(c, 3), -3) == c);
  CHECK(shift(c, 10) == shift(c, 3));
  CHECK(shift_index(7, c.index(), -1) == shift(c, -1).index());
}

TEST_CASE("packed configurations beyond the index view") {
  BitConfig c(130);
  c = c.with_digit(0, true).with_digit(64, true).with_digit(129, true);
  CHECK(c.popcount() == 3);
  const auto s = shift(c);
  CHECK(s.digit(1));
  CHECK(s.digit(65));
  CHECK(s.digit(0));
  CHECK_FALSE(s.digit(129));
  CHECK(shift(c, 130) == c);
  CHECK_THROWS_AS(c.index(), Overflow);
}

TEST_CASE("primality") {
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(1));
  CHECK(is_prime(2));
  CHECK(is_prime(1009));
  CHECK_FALSE(is_prime(1001));
}

TEST_CASE("orbit decomposition for n = 3") {
  const auto d = decompose_orbits(3);
  CHECK(d.orbit_count() == 2);
  CHECK(d.orbit(1) == std::vector<std::uint64_t>{1, 2, 4});
  CHECK(d.orbit(2) == std::vector<std::uint64_t>{3, 6, 5});
  CHECK(d.fixed_points() == std::array<std::uint64_t, 2>{0, 7});
  CHECK(d.orbit_of(0) == 0);
  CHECK(d.orbit_of(7) == 0);
  CHECK(d.orbit_of(5) == 2);
  CHECK(d.phase_of(5) == 2);
}

TEST_CASE("orbit decomposition against brute force") {
  for (int n : {2, 3, 5, 7, 11, 13}) {
    const auto d = decompose_orbits(n);
    const std::uint64_t dim = std::uint64_t{1} << n;
    CHECK(d.orbit_count() == (dim - 2) / n);
    CHECK(d.orbit_count() * n + 2 == dim);

    // Brute force: collect each orbit by iterating the digit rotation.
    std::set<std::set<std::uint64_t>> expected;
    for (std::uint64_t i = 1; i + 1 < dim; ++i) {
      std::set<std::uint64_t> o;
      std::uint64_t j = i;
      do {
        o.insert(j);
        j = shift_by_digits(n, j);
      } while (j != i);
      expected.insert(o);
    }
    std::set<std::set<std::uint64_t>> got;
    for (std::uint32_t id = 1; id <= d.orbit_count(); ++id) {
      const auto members = d.orbit(id);
      CHECK(members.size() == static_cast<std::size_t>(n));
      CHECK(members.front() == d.representatives()[id - 1]);
      CHECK(members.front() == *std::min_element(members.begin(), members.end()));
      for (std::size_t m = 0; m < members.size(); ++m) {
        CHECK(d.orbit_of(members[m]) == id);
        CHECK(d.phase_of(members[m]) == static_cast<int>(m));
        CHECK(shift_index(n, members[m]) == members[(m + 1) % members.size()]);
      }
      got.insert(std::set<std::uint64_t>(members.begin(), members.end()));
    }
    CHECK(got == expected);
  }
}

TEST_CASE("orbit decomposition errors") {
  CHECK_THROWS_AS(decompose_orbits(4), NonPrimeOrder);
  CHECK_THROWS_AS(decompose_orbits(1), NonPrimeOrder);
  CHECK_THROWS_AS(decompose_orbits(17), Overflow);
  CHECK_NOTHROW(decompose_orbits(17, 17));
}
