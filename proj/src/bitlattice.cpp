#include "ampsim/bitlattice.hpp"

#include <bit>
#include <stdexcept>

#include "ampsim/errors.hpp"

namespace ampsim {

namespace {

constexpr int kWordBits = 64;

int word_count(int n) { return (n + kWordBits - 1) / kWordBits; }

void check_sites(int n) {
  if (n < 1) throw std::invalid_argument("amplifier size must be positive");
}

std::uint64_t low_mask(int n) {
  return n >= kWordBits ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

}  // namespace

bool is_prime(long long n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (long long d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

BitConfig::BitConfig(int n) : n_(n) {
  check_sites(n);
  words_.assign(static_cast<std::size_t>(word_count(n)), 0);
}

BitConfig BitConfig::from_index(int n, std::uint64_t index) {
  if (n > kIndexMaxSites) throw Overflow("index view limited to 63 sites");
  BitConfig c(n);
  if (index > low_mask(n)) throw std::out_of_range("index exceeds 2^n - 1");
  c.words_[0] = index;
  return c;
}

BitConfig BitConfig::from_digits(std::span<const int> digits) {
  BitConfig c(static_cast<int>(digits.size()));
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (digits[k] != 0 && digits[k] != 1) throw std::invalid_argument("digits must be 0 or 1");
    if (digits[k]) c.words_[k / kWordBits] |= std::uint64_t{1} << (k % kWordBits);
  }
  return c;
}

BitConfig BitConfig::from_string(std::string_view digits) {
  std::vector<int> d;
  d.reserve(digits.size());
  for (char ch : digits) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("digit string must contain only 0 and 1");
    d.push_back(ch - '0');
  }
  return from_digits(d);
}

bool BitConfig::digit(int k) const {
  if (k < 0 || k >= n_) throw std::out_of_range("digit position out of range");
  return (words_[static_cast<std::size_t>(k / kWordBits)] >> (k % kWordBits)) & 1U;
}

std::uint64_t BitConfig::index() const {
  if (n_ > kIndexMaxSites) throw Overflow("index view limited to 63 sites");
  return words_[0];
}

int BitConfig::popcount() const noexcept {
  int total = 0;
  for (auto w : words_) total += std::popcount(w);
  return total;
}

std::string BitConfig::to_string() const {
  std::string s(static_cast<std::size_t>(n_), '0');
  for (int k = 0; k < n_; ++k) {
    if (digit(k)) s[static_cast<std::size_t>(k)] = '1';
  }
  return s;
}

BitConfig BitConfig::with_digit(int k, bool value) const {
  if (k < 0 || k >= n_) throw std::out_of_range("digit position out of range");
  BitConfig c = *this;
  const auto bit = std::uint64_t{1} << (k % kWordBits);
  auto& w = c.words_[static_cast<std::size_t>(k / kWordBits)];
  w = value ? (w | bit) : (w & ~bit);
  return c;
}

std::uint64_t shift_index(int n, std::uint64_t index, long long t) {
  check_sites(n);
  if (n > kIndexMaxSites) throw Overflow("index view limited to 63 sites");
  const auto r = static_cast<int>(((t % n) + n) % n);
  if (r == 0) return index;
  const auto mask = low_mask(n);
  return ((index << r) | (index >> (n - r))) & mask;
}

BitConfig shift(const BitConfig& c, long long t) {
  const int n = c.size();
  if (n <= kIndexMaxSites) return BitConfig::from_index(n, shift_index(n, c.index(), t));
  const auto r = static_cast<int>(((t % n) + n) % n);
  std::vector<int> digits(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    digits[static_cast<std::size_t>((k + r) % n)] = c.digit(k) ? 1 : 0;
  }
  return BitConfig::from_digits(digits);
}

std::vector<std::uint64_t> OrbitDecomposition::orbit(std::uint32_t id) const {
  if (id == 0) {
    const auto fp = fixed_points();
    return {fp[0], fp[1]};
  }
  if (id > representatives_.size()) throw std::out_of_range("orbit id out of range");
  std::vector<std::uint64_t> members(static_cast<std::size_t>(n_));
  auto k = representatives_[id - 1];
  for (auto& m : members) {
    m = k;
    k = shift_index(n_, k);
  }
  return members;
}

OrbitDecomposition decompose_orbits(int n, int dense_max_sites) {
  if (!is_prime(n)) throw NonPrimeOrder(n);
  if (n > dense_max_sites) {
    throw Overflow("orbit decomposition of 2^" + std::to_string(n) +
                   " states exceeds the dense bound of 2^" + std::to_string(dense_max_sites));
  }
  OrbitDecomposition d;
  d.n_ = n;
  const auto dim = d.dimension();
  constexpr auto kUnassigned = ~std::uint32_t{0};
  d.orbit_id_.assign(dim, kUnassigned);
  d.phase_.assign(dim, 0);
  d.orbit_id_[0] = 0;
  d.orbit_id_[dim - 1] = 0;

  // Ascending scan: the first unassigned index met is the orbit minimum.
  for (std::uint64_t k = 1; k + 1 < dim; ++k) {
    if (d.orbit_id_[k] != kUnassigned) continue;
    d.representatives_.push_back(k);
    const auto id = static_cast<std::uint32_t>(d.representatives_.size());
    auto member = k;
    for (int m = 0; m < n; ++m) {
      d.orbit_id_[member] = id;
      d.phase_[member] = static_cast<std::uint8_t>(m);
      member = shift_index(n, member);
    }
  }
  return d;
}

}  // namespace ampsim
