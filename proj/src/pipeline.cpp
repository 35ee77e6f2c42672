// SPDX-License-Identifier: Apache-2.0
#include "qflat/pipeline.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "qflat/io.hpp"

namespace qflat {

namespace {

Rational canon(Rational x) {
  x.canonicalize();
  return x;
}

struct Candidate {
  GlobalProfile profile;
  std::string provenance;
};

struct Outcome {
  std::vector<Entry> entries;
  std::optional<GenusCheck> check;
  bool skipped_by_numerator = false;
};

[[noreturn]] void rethrow_with(const std::string& where) {
  try {
    throw;
  } catch (const CertificationError& e) {
    throw CertificationError(where + ": " + e.what());
  } catch (const Error& e) {
    throw Error(where + ": " + e.what());
  }
}

void assert_emitted(const Entry& e, const Rational& B) {
  if (!is_maximal(e.form)) throw CertificationError("emitted form is not maximal: " + to_string(e.form));
  if (content(e.form) != 1) throw CertificationError("emitted form is not primitive: " + to_string(e.form));
  if (Rational(static_cast<long>(e.class_number)) > B)
    throw CertificationError("emitted form has class number above the bound: " + to_string(e.form));
  if (local_profile(e.form) != e.profile) throw CertificationError("emitted form left its genus: " + to_string(e.form));
}

Outcome process(const Candidate& c, const Rational& B, const RunConfig& cfg) {
  Outcome out;
  const GlobalProfile& prof = c.profile;
  const Rational proper = mass_from_profile(prof).proper_mass;
  const Rational mass = canon(proper / 2);
  // Mass+ <= h, since every class contributes at most 1/2 to Mass.
  if (proper > B) return out;
  const bool small_bound = B < 2;
  // h = 1 forces Mass = 1/|Aut|.
  if (small_bound && mass.get_num() != 1) {
    out.skipped_by_numerator = true;
    return out;
  }

  AssembleOptions aopts;
  aopts.aux_prime_cap = cfg.assemble_cap;
  const RationalSpace V = assemble_space(prof, aopts);
  const LatticeBasis L = maximalize(zvalued_lattice_in(V));
  const IntegralForm f = lll_reduce(form_of_basis(L)).form;
  // An imprimitive maximal lattice only rescales a form that lives on another space.
  if (content(f) != 1) return out;
  if (local_profile(f) != prof) throw Error("maximal lattice has profile " + local_profile(f).to_string());

  GenusCheck chk{prof, f, mass, 0, 0, false, ""};
  const Integer aut = automorphism_order(f);
  GenusRecord rec;
  bool decided = false;
  if (!cfg.certify && mass == canon(Rational(1) / Rational(aut))) {
    rec.representatives = {f};
    rec.aut_orders = {aut};
    rec.accumulated_mass = mass;
    rec.target_mass = mass;
    chk.method = "aut";
    decided = true;
  } else if (small_bound && !cfg.certify) {
    // Mass > 1/|Aut(f)| means a second class exists.
    chk.traversal_mass = canon(Rational(1) / Rational(aut));
    chk.classes_found = 1;
    chk.method = "lower-bound";
    out.check = chk;
    return out;
  }
  if (!decided) {
    GenusOptions gopts;
    gopts.prime_cap = cfg.neighbor_prime_cap;
    if (!cfg.certify) gopts.stop_above = static_cast<std::size_t>(mpz_class(B.get_num() / B.get_den()).get_ui());
    rec = genus_representatives(f, mass, gopts);
    chk.method = "traversal";
    chk.traversed = rec.complete();
  }
  chk.traversal_mass = rec.accumulated_mass;
  chk.classes_found = rec.class_number();
  out.check = chk;
  if (rec.stopped_early || Rational(static_cast<long>(rec.class_number())) > B) return out;
  if (!rec.complete()) throw CertificationError("genus traversal incomplete");

  for (std::size_t i = 0; i < rec.representatives.size(); ++i) {
    Entry e;
    e.form = rec.representatives[i];
    e.det_H = e.form.det_H();
    e.det_factorization = factorize(e.det_H);
    e.class_number = rec.class_number();
    e.proper_mass = proper;
    e.aut_order = rec.aut_orders[i];
    e.profile = prof;
    e.provenance = c.provenance;
    assert_emitted(e, B);
    out.entries.push_back(std::move(e));
  }
  return out;
}

template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < count;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Exact lower bound 2 (2k-1)! / (44/7)^{2k} for |zeta(1 - 2k)|.
Rational zeta_floor(int k) {
  Rational fact = 1;
  for (int i = 2; i < 2 * k; ++i) fact *= i;
  return canon(2 * fact / pow(Rational(44, 7), 2 * k));
}

std::size_t display_width(const std::string& s) {
  std::size_t w = 0;
  for (unsigned char ch : s)
    if ((ch & 0xC0) != 0x80) ++w;
  return w;
}

std::string pad(const std::string& s, std::size_t width) {
  return s + std::string(width > display_width(s) ? width - display_width(s) : 0, ' ');
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

std::string coeff_string(const IntegralForm& f) {
  std::string out;
  for (const auto& row : f.coeffs()) {
    if (!out.empty()) out += ";";
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? " " : "") + std::to_string(row[j]);
  }
  return out;
}

nlohmann::json result_json(const EnumerationResult& res) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : res.entries) {
    nlohmann::json fac = nlohmann::json::array();
    for (const auto& f : e.det_factorization) fac.push_back({f.prime, f.exponent});
    entries.push_back({{"form", form_to_json(e.form)},
                       {"polynomial", to_string(e.form)},
                       {"det_H", e.det_H.get_str()},
                       {"det_factorization", fac},
                       {"class_number", e.class_number},
                       {"mass", to_string(canon(e.proper_mass / 2))},
                       {"proper_mass", to_string(e.proper_mass)},
                       {"aut_order", e.aut_order.get_str()},
                       {"profile", e.profile.to_string()},
                       {"provenance", e.provenance}});
  }
  return {{"rank", res.rank}, {"bound_B", to_string(res.bound_B)}, {"count", res.entries.size()}, {"entries", entries}};
}

}  // namespace

OutputFormat parse_format(const std::string& s) {
  if (s == "text") return OutputFormat::text;
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  throw Error("unknown output format: " + s);
}

EnumerationResult enumerate_maximal(int n, const Rational& B, const RunConfig& cfg) {
  if (n < 3) throw Error("enumerate_maximal: rank must be at least 3");
  if (B <= 0) throw Error("enumerate_maximal: bound must be positive");
  EnumerationResult res;
  res.rank = n;
  res.bound_B = B;

  std::vector<std::optional<QuadraticCharacter>> chars;
  if (n % 2) {
    chars.push_back(std::nullopt);
  } else {
    for (const auto& chi : enumerate_characters(n, B)) chars.push_back(chi);
  }
  std::map<GlobalProfile, std::string> seen;
  for (const auto& chi : chars) {
    for (const auto& t : enumerate_tuples(n, B, chi)) {
      ++res.tuples;
      std::vector<GlobalProfile> profs;
      try {
        profs = profiles_from_tuple(t);
      } catch (...) {
        rethrow_with("tuple " + t.to_string());
      }
      for (auto& p : profs) seen.emplace(std::move(p), t.to_string());
    }
  }
  std::vector<Candidate> cands;
  for (auto& [p, prov] : seen) cands.push_back({p, prov});
  res.profiles = cands.size();

  std::vector<Outcome> outcomes(cands.size());
  parallel_for(cands.size(), cfg.jobs, [&](std::size_t i) {
    try {
      outcomes[i] = process(cands[i], B, cfg);
    } catch (...) {
      rethrow_with("profile " + cands[i].profile.to_string() + " from tuple " + cands[i].provenance);
    }
  });

  for (auto& o : outcomes) {
    if (o.skipped_by_numerator) ++res.skipped_by_numerator;
    if (o.check) res.genera.push_back(std::move(*o.check));
    for (auto& e : o.entries) res.entries.push_back(std::move(e));
  }
  std::sort(res.entries.begin(), res.entries.end(), [](const Entry& a, const Entry& b) {
    if (a.det_H != b.det_H) return a.det_H < b.det_H;
    return a.form < b.form;
  });
  return res;
}

std::size_t ScanResult::total() const {
  std::size_t t = 0;
  for (const auto& r : ranks) t += r.entries.size();
  return t;
}

ScanResult run_full_scan(const Rational& B, const RunConfig& cfg) {
  if (cfg.rank_min < 3) throw Error("run_full_scan: rank_min must be at least 3");
  ScanResult scan;
  int last = 0;
  if (cfg.rank_max) {
    last = *cfg.rank_max;
    scan.horizon = last + 1;
    scan.certificate = "explicit rank range " + std::to_string(cfg.rank_min) + ".." + std::to_string(last);
  } else {
    // Find n0 with L(n0), L(n0+1) > B and L(n+2) >= L(n) for all n >= n0,
    // where L is min_mass_lower_bound. The step ratios are |zeta(-n)|/2 for
    // odd n and |zeta(1-n)| (7/88)(n/2) for even n; both are bounded below by
    // the increasing function zeta_floor once k >= 3.
    int n0 = std::max(cfg.rank_min, 3);
    for (;; ++n0) {
      if (n0 > cfg.auto_rank_limit)
        throw CertificationError("no monotone tail certificate below rank " + std::to_string(cfg.auto_rank_limit) +
                                 "; pass an explicit rank_max");
      if (min_mass_lower_bound(n0) <= B || min_mass_lower_bound(n0 + 1) <= B) continue;
      const int k1 = n0 / 2;
      if (k1 < 3) continue;
      const Rational g = zeta_floor(k1);
      if (g >= 2 && g * 7 * k1 / 88 >= 1) break;
    }
    last = n0 - 1;
    scan.horizon = n0;
    std::ostringstream os;
    os << "min Mass+ bound exceeds " << to_string(B) << " at ranks " << n0 << " and " << n0 + 1
       << "; step ratios >= 1 from rank " << n0 << " on (zeta floor at k=" << n0 / 2 << " is >= 2)";
    scan.certificate = os.str();
  }
  for (int n = cfg.rank_min; n <= last; ++n) scan.ranks.push_back(enumerate_maximal(n, B, cfg));
  return scan;
}

bool verify_ternary_divisibility(const EnumerationResult& res) {
  if (res.rank != 3) return false;
  bool has23 = false;
  for (const auto& e : res.entries)
    for (const auto& f : factorize(e.det_H)) {
      if (f.prime > 23) return false;
      if (f.prime == 23) has23 = true;
    }
  return has23;
}

std::string render_table(const EnumerationResult& res, OutputFormat format) {
  std::ostringstream os;
  if (format == OutputFormat::json) {
    os << result_json(res).dump(2) << "\n";
    return os.str();
  }
  if (format == OutputFormat::csv) {
    os << "rank,index,polynomial,coeffs,det_H,det_factors,class_number,mass,aut_order\n";
    for (std::size_t i = 0; i < res.entries.size(); ++i) {
      const auto& e = res.entries[i];
      os << res.rank << "," << i + 1 << "," << csv_quote(to_string(e.form)) << "," << csv_quote(coeff_string(e.form))
         << "," << e.det_H.get_str() << "," << csv_quote(factorization_string(e.det_H)) << "," << e.class_number
         << "," << to_string(canon(e.proper_mass / 2)) << "," << e.aut_order.get_str() << "\n";
    }
    return os.str();
  }
  std::vector<std::array<std::string, 5>> rows{{"#", "form", "det", "det factors", "|Aut|"}};
  for (std::size_t i = 0; i < res.entries.size(); ++i) {
    const auto& e = res.entries[i];
    rows.push_back({std::to_string(i + 1), to_string(e.form), e.det_H.get_str(), factorization_string(e.det_H),
                    e.aut_order.get_str()});
  }
  std::array<std::size_t, 5> width{};
  for (const auto& r : rows)
    for (std::size_t c = 0; c < 5; ++c) width[c] = std::max(width[c], display_width(r[c]));
  os << "rank " << res.rank << ", class number <= " << to_string(res.bound_B) << ": " << res.entries.size()
     << " forms\n";
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < 5; ++c) line += (c ? "  " : "") + (c == 4 ? r[c] : pad(r[c], width[c]));
    os << line << "\n";
  }
  return os.str();
}

std::string render_scan(const ScanResult& scan, OutputFormat format) {
  std::ostringstream os;
  if (format == OutputFormat::json) {
    nlohmann::json ranks = nlohmann::json::array();
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& r : scan.ranks) {
      ranks.push_back(result_json(r));
      counts[std::to_string(r.rank)] = r.entries.size();
    }
    os << nlohmann::json{{"counts", counts},
                         {"total", scan.total()},
                         {"horizon", scan.horizon},
                         {"certificate", scan.certificate},
                         {"ranks", ranks}}
              .dump(2)
       << "\n";
    return os.str();
  }
  if (format == OutputFormat::csv) {
    bool first = true;
    for (const auto& r : scan.ranks) {
      std::string t = render_table(r, format);
      if (!first) t = t.substr(t.find('\n') + 1);
      os << t;
      first = false;
    }
    return os.str();
  }
  for (const auto& r : scan.ranks)
    if (!r.entries.empty()) os << render_table(r, format) << "\n";
  os << "rank  count\n";
  for (const auto& r : scan.ranks) os << pad(std::to_string(r.rank), 6) << r.entries.size() << "\n";
  os << "total " << scan.total() << "\n";
  os << "tail: " << scan.certificate << "\n";
  return os.str();
}

}  // namespace qflat
