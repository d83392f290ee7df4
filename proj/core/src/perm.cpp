#include "shapedecomp/perm.hpp"

namespace shapedecomp {

const std::array<Perm3, 6>& Perm3::all() noexcept {
  static const std::array<Perm3, 6> elems{Perm3(0, 1, 2), Perm3(0, 2, 1), Perm3(1, 0, 2),
                                          Perm3(2, 1, 0), Perm3(1, 2, 0), Perm3(2, 0, 1)};
  return elems;
}

int Perm3::s3_index() const noexcept {
  const auto& elems = all();
  for (int i = 0; i < 6; ++i)
    if (elems[i] == *this) return i;
  return -1;
}

std::string Perm3::to_string() const {
  return {static_cast<char>('1' + img_[0]), static_cast<char>('1' + img_[1]), static_cast<char>('1' + img_[2])};
}

}  // namespace shapedecomp
