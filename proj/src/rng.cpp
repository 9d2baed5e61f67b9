#include "shadowbench/rng.hpp"

#include <cmath>
#include <utility>

namespace shadowbench {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
constexpr double kTwoPi = 6.283185307179586476925287;

// Stafford mix13 finalizer; bijective on 64 bits.
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::string label)
    : master_(master_seed), label_(std::move(label)) {
  key_ = mix64(fnv1a(label_, 0xcbf29ce484222325ULL ^ mix64(master_seed)));
}

RngStream RngStream::derive(std::string_view child) const {
  std::string l = label_;
  l += '/';
  l.append(child);
  return RngStream(master_, std::move(l));
}

RngStream RngStream::derive(std::uint64_t index) const {
  return derive(std::string_view(std::to_string(index)));
}

std::uint64_t RngStream::next_u64() { return mix64(key_ + (++counter_) * kGamma); }

double RngStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0,1] keeps the log finite.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = kTwoPi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

double RngStream::next_uniform_pm1() { return 2.0 * next_unit() - 1.0; }

int RngStream::next_sign() { return (next_u64() >> 63) ? 1 : -1; }

bool RngStream::next_bit() { return (next_u64() >> 63) != 0; }

}  // namespace shadowbench
