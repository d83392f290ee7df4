#include <json.hpp>

#include "shapedecomp/errors.hpp"
#include "shapedecomp/poly9.hpp"

namespace shapedecomp {

std::string to_json(const Poly9& p, int indent) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : p.terms()) {
    Exponents e = t.mono.exponents();
    terms.push_back({{"exp", e},
                     {"num", t.coeff.get_num().get_str()},
                     {"den", t.coeff.get_den().get_str()}});
  }
  return nlohmann::json{{"terms", std::move(terms)}}.dump(indent);
}

Poly9 poly_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("polynomial JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("terms") || !doc["terms"].is_array())
    throw InvalidInput("polynomial JSON must be an object with a \"terms\" array");

  std::vector<Poly9::Term> terms;
  for (const auto& t : doc["terms"]) {
    try {
      auto e = t.at("exp").get<std::vector<int>>();
      if (e.size() != 9) throw InvalidInput("exponent vector must have 9 entries");
      Exponents ex{};
      std::copy(e.begin(), e.end(), ex.begin());
      mpz_class num(t.at("num").get<std::string>(), 10);
      mpz_class den(t.at("den").get<std::string>(), 10);
      if (den == 0) throw InvalidInput("zero denominator");
      Rational c(num, den);
      c.canonicalize();
      terms.push_back({Monomial(ex), std::move(c)});
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput(std::string("polynomial term: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw InvalidInput(std::string("polynomial coefficient: ") + e.what());
    }
  }
  return Poly9::from_terms(std::move(terms));
}

}  // namespace shapedecomp
