#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace shapedecomp {

// A permutation of {0,1,2}; p(i) is the image of i.  Written 1-based in text.
class Perm3 {
 public:
  constexpr Perm3() noexcept : img_{0, 1, 2} {}
  constexpr Perm3(int a, int b, int c) noexcept
      : img_{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
             static_cast<std::uint8_t>(c)} {}

  constexpr int operator()(int i) const noexcept { return img_[i]; }

  constexpr int sign() const noexcept {
    int inversions = (img_[0] > img_[1]) + (img_[0] > img_[2]) + (img_[1] > img_[2]);
    return inversions % 2 == 0 ? 1 : -1;
  }

  constexpr Perm3 inverse() const noexcept {
    std::array<int, 3> inv{};
    for (int i = 0; i < 3; ++i) inv[img_[i]] = i;
    return Perm3(inv[0], inv[1], inv[2]);
  }

  constexpr bool is_identity() const noexcept { return img_[0] == 0 && img_[1] == 1 && img_[2] == 2; }

  // Position in the conjugacy-ordered list e, (23), (12), (13), (123), (132).
  int s3_index() const noexcept;

  std::string to_string() const;  // e.g. "132"

  friend constexpr bool operator==(const Perm3&, const Perm3&) = default;

  // (a∘b)(i) = a(b(i)): b is applied first.
  friend constexpr Perm3 operator*(const Perm3& a, const Perm3& b) noexcept {
    return Perm3(a(b(0)), a(b(1)), a(b(2)));
  }

  static const std::array<Perm3, 6>& all() noexcept;

 private:
  std::array<std::uint8_t, 3> img_;
};

// An element of S3×S3 acting on the y- and z-triplets; x is never permuted.
struct PermPair {
  Perm3 y;
  Perm3 z;

  friend constexpr bool operator==(const PermPair&, const PermPair&) = default;
  friend constexpr PermPair operator*(const PermPair& a, const PermPair& b) noexcept {
    return {a.y * b.y, a.z * b.z};
  }
  constexpr PermPair inverse() const noexcept { return {y.inverse(), z.inverse()}; }
};

}  // namespace shapedecomp
