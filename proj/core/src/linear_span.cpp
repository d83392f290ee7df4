#include "shapedecomp/linear_span.hpp"

namespace shapedecomp {

Poly9 LinearSpan::reduce(Poly9 p, std::vector<Rational>* combo) const {
  while (!p.is_zero()) {
    const auto& lead = p.terms().front();
    auto it = pivots_.find(lead.mono.key());
    if (it == pivots_.end()) break;
    Rational f = lead.coeff;
    p -= it->second.row * f;
    if (combo) {
      const auto& c = it->second.combo;
      if (combo->size() < c.size()) combo->resize(c.size());
      for (std::size_t i = 0; i < c.size(); ++i) (*combo)[i] += f * c[i];
    }
  }
  return p;
}

bool LinearSpan::add(const Poly9& p) {
  // Track p = Σ combo·inputs + remainder, so remainder = p - Σ combo·inputs.
  std::vector<Rational> combo;
  Poly9 r = reduce(p, &combo);
  if (r.is_zero()) return false;
  combo.resize(inputs_ + 1);
  for (auto& c : combo) c = -c;
  combo[inputs_] = 1;
  Rational lc = r.terms().front().coeff;
  for (auto& c : combo) c /= lc;
  const std::uint64_t key = r.terms().front().mono.key();
  pivots_.emplace(key, Pivot{r / lc, std::move(combo)});
  ++inputs_;
  return true;
}

bool LinearSpan::contains(const Poly9& p) const { return reduce(p, nullptr).is_zero(); }

std::optional<std::vector<Rational>> LinearSpan::solve(const Poly9& p) const {
  std::vector<Rational> combo;
  if (!reduce(p, &combo).is_zero()) return std::nullopt;
  combo.resize(inputs_);
  return combo;
}

}  // namespace shapedecomp
