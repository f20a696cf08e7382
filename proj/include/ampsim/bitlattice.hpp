#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ampsim {

/// Largest amplifier size for which dense 2^n-dimensional objects are built.
inline constexpr int kDenseMaxSites = 13;
/// Largest amplifier size with an integer index view (index < 2^63).
inline constexpr int kIndexMaxSites = 63;

bool is_prime(long long n);

/// n-bit amplifier basis state. Digit d_0 is the least significant bit of the
/// integer index, so index = sum_k 2^k d_k. Digits are stored packed, so
/// configurations far larger than the index view can hold are supported.
class BitConfig {
 public:
  /// All-zero configuration on n sites.
  explicit BitConfig(int n);

  static BitConfig from_index(int n, std::uint64_t index);
  static BitConfig from_digits(std::span<const int> digits);
  /// Parses a digit string written d_0 first, e.g. "11000" is index 3.
  static BitConfig from_string(std::string_view digits);

  int size() const noexcept { return n_; }
  bool digit(int k) const;
  /// Integer index view; throws Overflow for n > kIndexMaxSites.
  std::uint64_t index() const;
  int popcount() const noexcept;
  std::string to_string() const;

  BitConfig with_digit(int k, bool value) const;

  friend bool operator==(const BitConfig&, const BitConfig&) = default;

 private:
  int n_;
  std::vector<std::uint64_t> words_;
};

/// Cyclic digit shift (d_0,...,d_{n-1}) -> (d_{n-1}, d_0, ..., d_{n-2}),
/// applied t times (t may be negative).
BitConfig shift(const BitConfig& c, long long t = 1);

/// Index form of shift for n <= kIndexMaxSites: a left rotation of the n-bit
/// word. Agrees with 2^t * index mod (2^n - 1) away from the fixed points.
std::uint64_t shift_index(int n, std::uint64_t index, long long t = 1);

/// Partition of {0, ..., 2^n - 1} into shift orbits for prime n: q full
/// orbits of length n plus the fixed points 0 and 2^n - 1.
///
/// Orbit ids run 1..q for full orbits; id 0 is the fixed-point block V_0.
/// Representatives are the minimal index of each orbit, and members are
/// ordered b, shift(b), shift^2(b), ...
class OrbitDecomposition {
 public:
  int sites() const noexcept { return n_; }
  std::uint64_t dimension() const noexcept { return std::uint64_t{1} << n_; }
  std::uint64_t orbit_count() const noexcept { return representatives_.size(); }
  const std::vector<std::uint64_t>& representatives() const noexcept {
    return representatives_;
  }
  std::array<std::uint64_t, 2> fixed_points() const noexcept {
    return {0, dimension() - 1};
  }

  /// Orbit id of a basis index (0 for the fixed points).
  std::uint32_t orbit_of(std::uint64_t index) const { return orbit_id_.at(index); }
  /// Offset m with index = shift^m(representative); 0 for fixed points.
  int phase_of(std::uint64_t index) const { return phase_.at(index); }

  /// Members of orbit `id` in shift order; id 0 yields {0, 2^n - 1}.
  std::vector<std::uint64_t> orbit(std::uint32_t id) const;

 private:
  friend OrbitDecomposition decompose_orbits(int n, int dense_max_sites);

  int n_ = 0;
  std::vector<std::uint64_t> representatives_;
  std::vector<std::uint32_t> orbit_id_;
  std::vector<std::uint8_t> phase_;
};

/// Throws NonPrimeOrder for composite n and Overflow when n exceeds
/// dense_max_sites.
OrbitDecomposition decompose_orbits(int n, int dense_max_sites = kDenseMaxSites);

}  // namespace ampsim
