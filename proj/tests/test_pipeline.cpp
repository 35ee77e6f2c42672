// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>
#include <sstream>

#include "qflat/io.hpp"
#include "qflat/pipeline.hpp"

using namespace qflat;

namespace {

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

const EnumerationResult& ternary() {
  static const EnumerationResult res = enumerate_maximal(3, 1, RunConfig{});
  return res;
}

}  // namespace

TEST_CASE("factorization strings") {
  CHECK(factorization_string(24) == "2³·3");
  CHECK(factorization_string(1) == "1");
  CHECK(factorization_string(Integer(2) * 3 * 5 * 7 * 7) == "2·3·5·7²");
  CHECK(factorization_string(1024) == "2¹⁰");
}

TEST_CASE("form JSON round trip") {
  const auto f = IntegralForm::from_coeffs({{1, 1, 0}, {2, 1}, {3}});
  CHECK(form_from_json(form_to_json(f)) == f);
  CHECK_THROWS_AS(form_from_json(nlohmann::json{{"rank", 2}, {"coeffs", {{1, 0, 0}, {1, 0}, {1}}}}), Error);
  CHECK_THROWS_AS(form_from_json(nlohmann::json::array()), Error);
}

TEST_CASE("ternary enumeration") {
  const auto& res = ternary();
  REQUIRE(res.entries.size() == 64);
  CHECK(verify_ternary_divisibility(res));
  std::set<GlobalProfile> profiles;
  for (const auto& e : res.entries) {
    CHECK(e.class_number == 1);
    CHECK(is_maximal(e.form));
    CHECK(content(e.form) == 1);
    CHECK(e.det_H == e.form.det_H());
    CHECK(local_profile(e.form) == e.profile);
    Rational m = e.proper_mass / 2;
    m.canonicalize();
    CHECK(m == Rational(1) / Rational(e.aut_order));
    profiles.insert(e.profile);
  }
  // One class per genus, so genera and entries match.
  CHECK(profiles.size() == 64);
  for (std::size_t i = 1; i < res.entries.size(); ++i) CHECK(res.entries[i - 1].det_H <= res.entries[i].det_H);
}

TEST_CASE("ternary divisibility on synthetic results") {
  auto with29 = ternary();
  with29.entries.front().det_H *= 29;
  CHECK_FALSE(verify_ternary_divisibility(with29));
  auto without23 = ternary();
  std::erase_if(without23.entries, [](const Entry& e) { return e.det_H % 23 == 0; });
  CHECK_FALSE(verify_ternary_divisibility(without23));
  auto rank4 = ternary();
  rank4.rank = 4;
  CHECK_FALSE(verify_ternary_divisibility(rank4));
}

TEST_CASE("rendering") {
  const auto& res = ternary();
  const auto text = render_table(res, OutputFormat::text);
  CHECK(line_count(text) == 64 + 2);
  CHECK(text.find("2³·3") != std::string::npos);
  CHECK(line_count(render_table(res, OutputFormat::csv)) == 64 + 1);

  EnumerationResult one = res;
  one.entries.resize(1);
  CHECK(line_count(render_table(one, OutputFormat::csv)) == 2);
  CHECK(line_count(render_table(one, OutputFormat::text)) == 3);

  const auto j = nlohmann::json::parse(render_table(res, OutputFormat::json));
  REQUIRE(j.at("entries").size() == 64);
  for (std::size_t i = 0; i < 64; ++i) {
    CHECK(form_from_json(j["entries"][i]["form"]) == res.entries[i].form);
    CHECK(j["entries"][i]["det_H"].get<std::string>() == res.entries[i].det_H.get_str());
  }
}

TEST_CASE("determinism across worker counts") {
  RunConfig a, b;
  a.jobs = 1;
  b.jobs = 4;
  for (int n : {3, 5}) {
    const auto ra = enumerate_maximal(n, 1, a), rb = enumerate_maximal(n, 1, b);
    CHECK(render_table(ra, OutputFormat::json) == render_table(rb, OutputFormat::json));
    CHECK(render_table(ra, OutputFormat::text) == render_table(rb, OutputFormat::text));
  }
}

TEST_CASE("rank ranges and bounds") {
  RunConfig cfg;
  cfg.rank_min = 7;
  cfg.rank_max = 7;
  const auto scan = run_full_scan(1, cfg);
  REQUIRE(scan.ranks.size() == 1);
  CHECK(scan.ranks[0].entries.size() == 5);
  CHECK(scan.total() == 5);

  // Class numbers are at least 1, so B = 1/2 leaves nothing.
  CHECK(enumerate_maximal(3, Rational(1, 2), RunConfig{}).entries.empty());
  CHECK(enumerate_maximal(4, Rational(1, 2), RunConfig{}).entries.empty());

  CHECK_THROWS_AS(enumerate_maximal(2, 1, RunConfig{}), Error);
  CHECK_THROWS_AS(enumerate_maximal(3, 0, RunConfig{}), Error);
  CHECK_THROWS_AS(parse_format("xml"), Error);
}

TEST_CASE("class number two at rank 3 contains the class number one list") {
  const auto r2 = enumerate_maximal(3, 2, RunConfig{});
  const auto& r1 = ternary();
  std::size_t h1 = 0;
  for (const auto& e : r2.entries) {
    CHECK(e.class_number <= 2);
    if (e.class_number == 1) ++h1;
  }
  CHECK(h1 == r1.entries.size());
  for (const auto& e : r1.entries) {
    bool found = false;
    for (const auto& x : r2.entries) found = found || (x.det_H == e.det_H && is_isometric(x.form, e.form));
    CHECK(found);
  }
}

TEST_CASE("automatic tail certificate") {
  RunConfig cfg;
  cfg.rank_min = 29;
  const auto scan = run_full_scan(1, cfg);
  CHECK(scan.ranks.empty());
  CHECK(scan.horizon == 29);
  CHECK(scan.total() == 0);

  RunConfig low;
  low.rank_min = 20;
  const auto s2 = run_full_scan(1, low);
  CHECK(s2.horizon == 29);
  CHECK(s2.ranks.size() == 9);
  CHECK(s2.total() == 0);

  RunConfig capped;
  capped.rank_min = 3;
  capped.auto_rank_limit = 10;
  CHECK_THROWS_AS(run_full_scan(1, capped), CertificationError);
}
