// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qflat/acceptance.hpp"
#include "qflat/io.hpp"
#include "qflat/pipeline.hpp"

using namespace qflat;

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("cannot write " + out_path);
  out << text;
}

nlohmann::json invariants_json(const IntegralForm& f) {
  const auto prof = local_profile(f);
  nlohmann::json local = nlohmann::json::object();
  for (const auto& [p, e] : prof.local)
    local[std::to_string(p)] = {{"delta", e.delta.to_string()}, {"w", e.w}, {"mass_type", to_string(prof.mass_type(p))}};
  const auto diag = rational_diagonalize(f).diagonal;
  nlohmann::json d = nlohmann::json::array();
  for (const auto& x : diag) d.push_back(to_string(x));
  return {{"form", form_to_json(f)},
          {"polynomial", to_string(f)},
          {"det_H", f.det_H().get_str()},
          {"det_factors", factorization_string(f.det_H())},
          {"content", content(f)},
          {"maximal", is_maximal(f)},
          {"diagonal", d},
          {"Delta", prof.Delta},
          {"local", local},
          {"profile", prof.to_string()}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qflat: maximal positive definite quadratic forms of small class number"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string bound = "1", format = "text", out_path;
  int rank = 3, rank_max = 0;

  auto add_run_options = [&](CLI::App* sub) {
    sub->add_option("--bound", bound, "class number bound B (rational)");
    sub->add_option("--format", format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--jobs", cfg.jobs, "worker threads");
    sub->add_option("--out", out_path, "write output to FILE");
    sub->add_option("--assemble-cap", cfg.assemble_cap, "auxiliary prime ceiling for space assembly");
    sub->add_option("--prime-cap", cfg.neighbor_prime_cap, "neighbor primes tried per genus");
    sub->add_option("--precision", cfg.precision_bits, "interval precision in bits");
    sub->add_flag("--certify", cfg.certify, "traverse every genus reaching the lattice stage");
  };

  auto* enumerate = app.add_subcommand("enumerate", "maximal forms of one rank with class number <= B");
  enumerate->add_option("--rank", rank, "number of variables")->required()->check(CLI::Range(3, 1000));
  add_run_options(enumerate);

  auto* scan = app.add_subcommand("scan", "all ranks from 3, with a certified tail");
  scan->add_option("--rank-max", rank_max, "last rank to enumerate (default: automatic)");
  scan->add_option("--rank-min", cfg.rank_min, "first rank")->check(CLI::Range(3, 1000));
  add_run_options(scan);

  std::string form_path;
  auto* mass = app.add_subcommand("mass", "mass of the genus of maximal lattices on the space of a form");
  auto* classnumber = app.add_subcommand("classnumber", "genus representatives of a form");
  auto* invariants = app.add_subcommand("invariants", "rational and local invariants of a form");
  auto* maximalize_cmd = app.add_subcommand("maximalize", "a maximal lattice containing the form's lattice");
  for (auto* sub : {mass, classnumber, invariants, maximalize_cmd})
    sub->add_option("FORM", form_path, "form JSON file")->required()->check(CLI::ExistingFile);

  auto* verify = app.add_subcommand("verify-paper", "run the acceptance battery");
  add_run_options(verify);

  CLI11_PARSE(app, argc, argv);

  if (const char* env = std::getenv("QFLAT_JOBS")) {
    try {
      cfg.jobs = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "error: QFLAT_JOBS must be an integer\n";
      return 1;
    }
  }

  try {
    cfg.format = parse_format(format);
    const Rational B = parse_rational(bound);
    cfg.bound_B = B;
    if (*enumerate) {
      emit(render_table(enumerate_maximal(rank, B, cfg), cfg.format), out_path);
    } else if (*scan) {
      if (rank_max) cfg.rank_max = rank_max;
      emit(render_scan(run_full_scan(B, cfg), cfg.format), out_path);
    } else if (*mass) {
      const auto f = read_form_file(form_path);
      const auto g = maximalize_form(f).form;
      const auto stmt = mass_from_profile(local_profile(g));
      Rational m = stmt.proper_mass / 2;
      m.canonicalize();
      nlohmann::json j{{"form", form_to_json(f)},
                       {"maximal", is_maximal(f)},
                       {"profile", stmt.profile.to_string()},
                       {"proper_mass", to_string(stmt.proper_mass)},
                       {"mass", to_string(m)}};
      if (stmt.character) j["character_discriminant"] = stmt.character->discriminant();
      std::cout << j.dump(2) << "\n";
    } else if (*classnumber) {
      const auto f = read_form_file(form_path);
      GenusOptions gopts;
      gopts.prime_cap = cfg.neighbor_prime_cap;
      auto j = genus_to_json(genus_representatives(f, gopts));
      j["form"] = form_to_json(f);
      std::cout << j.dump(2) << "\n";
    } else if (*invariants) {
      std::cout << invariants_json(read_form_file(form_path)).dump(2) << "\n";
    } else if (*maximalize_cmd) {
      const auto f = read_form_file(form_path);
      const auto m = maximalize_form(f);
      const auto red = lll_reduce(m.form).form;
      nlohmann::json j{{"form", form_to_json(red)}, {"polynomial", to_string(red)}, {"det_H", red.det_H().get_str()}};
      std::cout << j.dump(2) << "\n";
    } else if (*verify) {
      const auto results = run_acceptance(cfg, [](const CriterionResult& r) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  " << r.detail << std::endl;
      });
      for (const auto& r : results)
        if (!r.pass) return 2;
    }
  } catch (const CertificationError& e) {
    std::cerr << "certification failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
