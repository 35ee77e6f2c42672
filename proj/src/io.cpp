// SPDX-License-Identifier: Apache-2.0
#include "qflat/io.hpp"

#include <fstream>

namespace qflat {

namespace {

std::string superscript(int e) {
  static const char* digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
  std::string out;
  for (char c : std::to_string(e)) out += digits[c - '0'];
  return out;
}

}  // namespace

nlohmann::json form_to_json(const IntegralForm& f) {
  return {{"rank", f.n()}, {"coeffs", f.coeffs()}};
}

IntegralForm form_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("coeffs")) throw Error("form JSON: expected an object with \"coeffs\"");
  const auto coeffs = j.at("coeffs").get<std::vector<std::vector<std::int64_t>>>();
  const auto f = IntegralForm::from_coeffs(coeffs);
  if (j.contains("rank") && j.at("rank").get<int>() != f.n()) throw Error("form JSON: rank does not match coeffs");
  return f;
}

IntegralForm read_form_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": " + e.what());
  }
  return form_from_json(j);
}

nlohmann::json genus_to_json(const GenusRecord& g) {
  nlohmann::json reps = nlohmann::json::array(), auts = nlohmann::json::array();
  for (std::size_t i = 0; i < g.representatives.size(); ++i) {
    reps.push_back(form_to_json(g.representatives[i]));
    auts.push_back(g.aut_orders[i].get_str());
  }
  nlohmann::json out{{"representatives", reps},
                     {"aut_orders", auts},
                     {"mass", to_string(g.accumulated_mass)},
                     {"class_number", g.class_number()},
                     {"complete", g.complete()},
                     {"neighbor_primes_used", g.neighbor_primes_used}};
  out["target_mass"] = g.target_mass ? nlohmann::json(to_string(*g.target_mass)) : nlohmann::json(nullptr);
  return out;
}

std::string factorization_string(const Integer& n) {
  if (abs(n) == 1) return n.get_str();
  std::string out = n < 0 ? "-" : "";
  bool first = true;
  for (const auto& f : factorize(n)) {
    if (!first) out += "·";
    out += std::to_string(f.prime);
    if (f.exponent > 1) out += superscript(f.exponent);
    first = false;
  }
  return out;
}

}  // namespace qflat
