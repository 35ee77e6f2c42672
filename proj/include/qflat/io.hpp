// SPDX-License-Identifier: Apache-2.0
// JSON schemas for forms and genus records.
#pragma once

#include <string>

#include <json.hpp>

#include "qflat/genus.hpp"

namespace qflat {

// {"rank": n, "coeffs": [[c11, c12, ...], [c22, ...], ...]}
nlohmann::json form_to_json(const IntegralForm& f);
IntegralForm form_from_json(const nlohmann::json& j);
IntegralForm read_form_file(const std::string& path);

nlohmann::json genus_to_json(const GenusRecord& g);

// "2³·3"; "1" for 1.
std::string factorization_string(const Integer& n);

}  // namespace qflat
