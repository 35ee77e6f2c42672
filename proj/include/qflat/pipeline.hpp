// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qflat/genus.hpp"
#include "qflat/mass.hpp"

namespace qflat {

enum class OutputFormat { text, json, csv };
OutputFormat parse_format(const std::string& s);

struct RunConfig {
  int rank_min = 3;
  std::optional<int> rank_max;  // unset: scan until the tail certificate holds
  Rational bound_B = 1;
  OutputFormat format = OutputFormat::text;
  int jobs = 1;
  std::int64_t assemble_cap = 10'000;
  int neighbor_prime_cap = 25;
  int precision_bits = 128;
  // Traverse every genus that reaches the lattice stage and compare its
  // mass with the formula, even when the class number is already decided.
  bool certify = false;
  int auto_rank_limit = 200;
};

struct Entry {
  IntegralForm form;  // LLL-reduced
  Integer det_H;
  std::vector<Factor> det_factorization;
  std::size_t class_number = 0;
  Rational proper_mass;  // Mass+ of the genus
  Integer aut_order;
  GlobalProfile profile;
  std::string provenance;  // character and tuple that produced the space
};

// Mass bookkeeping for one genus that reached the lattice stage.
struct GenusCheck {
  GlobalProfile profile;
  IntegralForm maximal_form;
  Rational formula_mass;   // Mass = Mass+ / 2
  Rational traversal_mass; // sum of 1/|Aut| over the classes found
  std::size_t classes_found = 0;
  bool traversed = false;  // full neighbor traversal ran to completion
  std::string method;      // "aut", "traversal", "lower-bound"
};

struct EnumerationResult {
  int rank = 0;
  Rational bound_B;
  std::vector<Entry> entries;
  std::vector<GenusCheck> genera;
  std::size_t tuples = 0;
  std::size_t profiles = 0;
  std::size_t skipped_by_numerator = 0;
};

EnumerationResult enumerate_maximal(int n, const Rational& B, const RunConfig& cfg);

struct ScanResult {
  std::vector<EnumerationResult> ranks;
  int horizon = 0;          // every rank >= horizon has min mass > B
  std::string certificate;  // human-readable account of the tail argument
  std::size_t total() const;
};

// Throws CertificationError when the tail argument fails within auto_rank_limit.
ScanResult run_full_scan(const Rational& B, const RunConfig& cfg);

bool verify_ternary_divisibility(const EnumerationResult& res);

std::string render_table(const EnumerationResult& res, OutputFormat format);
std::string render_scan(const ScanResult& scan, OutputFormat format);

}  // namespace qflat
