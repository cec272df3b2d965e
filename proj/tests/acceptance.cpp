// Acceptance battery: one line per criterion, exit status 1 when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "etale/corpus.hpp"
#include "etale/groupoid.hpp"
#include "etale/groups.hpp"
#include "etale/ppg_sheafify.hpp"
#include "etale/presheaf.hpp"
#include "etale/pseudogroup.hpp"
#include "oracles.hpp"

using namespace etale;

namespace {

// Pinned thresholds.
constexpr std::uint64_t kSeed = kDefaultSeed;
constexpr std::size_t kRandomGroupoids = 200;
constexpr double kLimitSections = 60.0;
constexpr double kLimitUnderlying = 30.0;
constexpr double kLimitGroupoids = 60.0;
constexpr double kLimitRoundTrips = 120.0;
constexpr double kLimitSheafification = 120.0;
constexpr std::size_t kMinNonT1RoundTrips = 20;
constexpr std::size_t kMinPresheaves = 100;
constexpr std::size_t kMinPresheafTriples = 50;
constexpr std::size_t kMinCertifiedTriples = 20;
constexpr std::size_t kMutants = 10;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Tally {
  std::size_t total = 0;
  std::size_t pass = 0;
  std::string first_failure;

  void record(bool ok, const std::string& what) {
    ++total;
    if (ok) ++pass;
    else if (first_failure.empty()) first_failure = what;
  }
  /// Runs a check, counting any thrown error as a failure.
  void guard(const std::string& what, const std::function<bool()>& check) {
    try {
      record(check(), what);
    } catch (const Error& e) {
      record(false, what + " [" + std::string(to_string(e.kind())) + ": " + e.what() + "]");
    }
  }
  bool all() const { return pass == total; }
};

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("criterion %d %-28s %s  %s\n", id, title.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string counts(const Tally& t) {
  std::string s = std::to_string(t.pass) + "/" + std::to_string(t.total);
  if (!t.first_failure.empty()) s += " first failure: " + t.first_failure;
  return s;
}

std::string timing(double seconds, double limit) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f s (limit %.0f s)", seconds, limit);
  return buf;
}

std::vector<CorpusGroupoid> groupoid_corpus() {
  auto all = exhaustive_etale_groupoids(3, 9, kSeed);
  for (auto& g : random_etale_groupoids(kRandomGroupoids, kSeed, 4, 12)) all.push_back(std::move(g));
  return all;
}

/// Pseudogroups for the underlying-functor criterion: every corpus family plus the
/// section categories of the groupoid corpus and Homeo^l over every space of at most 3 points.
std::vector<CorpusPseudogroup> pseudogroup_pool(const std::vector<CorpusGroupoid>& groupoids) {
  auto pool = pseudogroup_sheaf_corpus(kSeed, 3);
  for (auto& c : pre_pseudogroup_corpus(kSeed, 3)) pool.push_back(std::move(c));
  for (const auto& g : groupoids)
    pool.push_back({"sections:" + g.name, sections_category(g.groupoid).category, dialect_for(*g.groupoid.base)});
  std::size_t k = 0;
  for (const auto& space : spaces_up_to_homeomorphism(3))
    pool.push_back({"homeo:" + std::to_string(k++), build_homeo_l(share(space)), dialect_for(space)});
  return pool;
}

void criterion_sections(const std::vector<CorpusGroupoid>& groupoids) {
  const auto start = Clock::now();
  Tally t;
  for (const auto& g : groupoids)
    t.guard(g.name, [&] {
      const auto r = check_prop11(sections_category(g.groupoid).category);
      static constexpr const char* kConditions[] = {"(1)", "(2.1)", "(2.2)", "(2.3)", "(2.3-iff)", "(3)"};
      return std::all_of(std::begin(kConditions), std::end(kConditions),
                         [&](const char* name) { return r.conditions.passes(name); }) &&
             r.conditions.ok();
    });
  const double s = since(start);
  report(1, "section categories", t.all() && t.total > 0 && s < kLimitSections, counts(t) + ", " + timing(s, kLimitSections));
}

void criterion_underlying(const std::vector<CorpusPseudogroup>& pool) {
  const auto start = Clock::now();
  Tally t;
  std::size_t eligible = 0;
  for (const auto& c : pool) {
    bool pre = false;
    try {
      const auto r = check_pre_pseudogroup(c.pseudogroup, c.dialect);
      pre = r.passes("category") && r.passes("(1)") && r.passes("(2)");
    } catch (const Error&) {
      pre = false;
    }
    if (!pre) continue;
    ++eligible;
    t.guard(c.name, [&] {
      const auto functor = underlying_functor(c.pseudogroup, c.dialect);
      for (const auto& slot : functor.maps)
        for (const auto& m : slot)
          if (!check_continuous(m).ok || !is_local_homeo(m).ok) return false;
      return check_underlying_functor(c.pseudogroup, functor).ok();
    });
  }
  const double s = since(start);
  report(2, "underlying functors", t.all() && eligible > 0 && s < kLimitUnderlying,
         counts(t) + " of " + std::to_string(pool.size()) + " pooled, " + timing(s, kLimitUnderlying));
}

void criterion_groupoids(const std::vector<CorpusPseudogroup>& sheaves) {
  const auto start = Clock::now();
  Tally t;
  for (const auto& c : sheaves)
    t.guard(c.name, [&] {
      const auto h = groupoid_from_pseudogroup(c.pseudogroup, c.dialect);
      return check_groupoid(h.groupoid).ok() && is_etale(h.groupoid).ok &&
             check_basic_open_targets(c.pseudogroup, h, c.dialect).ok();
    });
  const double s = since(start);
  report(3, "germ groupoids", t.all() && t.total > 0 && s < kLimitGroupoids, counts(t) + ", " + timing(s, kLimitGroupoids));
}

void criterion_roundtrips(const std::vector<CorpusGroupoid>& groupoids, const std::vector<CorpusPseudogroup>& sheaves) {
  const auto start = Clock::now();
  Tally g2p, p2g;
  std::size_t non_t1 = 0;
  bool sierpinski = false, chain3 = false;
  auto note_base = [&](const FiniteSpace& base) {
    if (base.is_t1()) return;
    ++non_t1;
    sierpinski = sierpinski || base == FiniteSpace::sierpinski();
    chain3 = chain3 || base == FiniteSpace::chain(3);
  };
  for (const auto& g : groupoids) {
    bool ok = false;
    g2p.guard(g.name, [&] {
      roundtrip_groupoid(g.groupoid);
      return ok = true;
    });
    if (ok) note_base(*g.groupoid.base);
  }
  // Hand-built non-T1 instances alongside the generated ones.
  std::vector<CorpusPseudogroup> pool = sheaves;
  for (std::size_t n = 2; n <= 3; ++n) {
    auto chain = share(FiniteSpace::chain(n));
    pool.push_back({"homeo-chain" + std::to_string(n), build_homeo_l(chain), Dialect::NonT1});
    for (const auto& group : {cyclic_group(2), cyclic_group(3)})
      pool.push_back({"groups-chain" + std::to_string(n), from_group_sheaf(locally_constant_group_sheaf(chain, group)),
                      Dialect::NonT1});
    pool.push_back({"unit-chain" + std::to_string(n), sections_category(unit_groupoid(chain)).category, Dialect::NonT1});
  }
  for (const auto& c : pool) {
    bool ok = false;
    p2g.guard(c.name, [&] {
      roundtrip_pseudogroup(c.pseudogroup, c.dialect);
      return ok = true;
    });
    if (ok) note_base(c.pseudogroup.space());
  }
  const double s = since(start);
  const bool ok = g2p.all() && p2g.all() && non_t1 >= kMinNonT1RoundTrips && sierpinski && chain3 && s < kLimitRoundTrips;
  report(4, "round trips", ok,
         "groupoids " + counts(g2p) + ", pseudogroups " + counts(p2g) + ", non-T1 " + std::to_string(non_t1) +
             " (min " + std::to_string(kMinNonT1RoundTrips) + ", sierpinski " + (sierpinski ? "yes" : "no") +
             ", chain3 " + (chain3 ? "yes" : "no") + "), " + timing(s, kLimitRoundTrips));
}

void criterion_sheafification() {
  const auto start = Clock::now();
  Tally presheaves, triples, ppg, iso;
  std::size_t certified = 0, over_budget = 0;
  Tally universal;

  for (const auto& entry : presheaf_corpus(kSeed, 4, 3)) {
    const auto& p = entry.presheaf;
    presheaves.guard(entry.name, [&] {
      const auto hat = sheafify(p);
      return is_sheaf(hat.sheaf).ok && check_unit_stalks(p, hat).ok();
    });
  }

  for (const auto& entry : presheaf_corpus(kSeed, 3, 3)) {
    const auto& p = entry.presheaf;
    const auto hat = sheafify(p);
    const auto terminal = constant_presheaf(p.space_ptr(), {"*"});
    PresheafMorphism collapse;
    for (OpenId u = 0; u < p.open_count(); ++u) collapse.components.emplace_back(p.section_count(u), 0);
    const std::vector<std::pair<const Presheaf*, const PresheafMorphism*>> targets{{&hat.sheaf, &hat.unit},
                                                                                   {&terminal, &collapse}};
    for (const auto& [target, phi] : targets) {
      triples.guard(entry.name, [&, target = target, phi = phi] {
        const auto u = check_presheaf_universality(p, hat, *target, *phi);
        return u.exhausted && u.solutions == 1;
      });
    }
  }

  for (const auto& entry : pre_pseudogroup_corpus(kSeed, 3)) {
    const auto& c = entry.pseudogroup;
    std::optional<PpgSheafification> hat;
    ppg.guard(entry.name, [&] {
      hat = ppg_sheafify(c);
      return check_ppg_morphism(hat->unit, c, hat->sheaf).ok() && check_unit_germs(c, *hat).ok() &&
             def21_conditions(hat->sheaf).ok();
    });
    if (!hat) continue;
    iso.guard(entry.name, [&] { return check_prop45(c, *hat).ok(); });

    const auto homeo = build_homeo_l(c.space_ptr());
    const std::vector<std::pair<const PrePseudogroup*, PpgMorphism>> targets{
        {&hat->sheaf, hat->unit}, {&homeo, underlying_morphism(c, homeo, Dialect::T1)}};
    for (const auto& [d, phi] : targets) {
      try {
        const auto u = check_universality(c, *hat, *d, phi);
        const bool ok = u.report.ok() && u.solutions == 1;
        universal.record(ok, entry.name);
        if (ok) ++certified;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::EnumerationBudgetExceeded) ++over_budget;
        else universal.record(false, entry.name + " [" + std::string(to_string(e.kind())) + "]");
      }
    }
  }
  const double s = since(start);
  const bool ok = presheaves.all() && presheaves.total >= kMinPresheaves && triples.all() &&
                  triples.total >= kMinPresheafTriples && ppg.all() && ppg.total > 0 && iso.all() &&
                  universal.all() && certified >= kMinCertifiedTriples && s < kLimitSheafification;
  report(5, "sheafification", ok,
         "(a) " + counts(presheaves) + " (b) " + counts(triples) + " (c) " + counts(ppg) + " (d) " + counts(iso) +
             " (e) certified " + std::to_string(certified) + ", over budget " + std::to_string(over_budget) +
             (universal.first_failure.empty() ? "" : ", first failure: " + universal.first_failure) + ", " +
             timing(s, kLimitSheafification));
}

void criterion_oracles() {
  Tally quotient, covers, exhaustive, dialects;
  for (const auto& entry : presheaf_corpus(kSeed, 4, 3)) {
    const auto& p = entry.presheaf;
    for (std::size_t x = 0; x < p.space().size(); ++x) {
      const auto q = oracle::colimit_quotient(p, x);
      quotient.record(q.matches_minimal_open && q.classes == stalk(p, x).size(), entry.name);
    }
    const bool canonical = is_sheaf(p, SheafMode::Canonical).ok;
    try {
      exhaustive.record(is_sheaf(p, SheafMode::Exhaustive).ok == canonical, entry.name);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CoverBudgetExceeded) exhaustive.record(false, entry.name);
    }
    if (p.space().size() <= 3)
      if (const auto brute = oracle::sheaf_over_all_covers(p)) covers.record(*brute == canonical, entry.name);
  }
  auto pool = pseudogroup_sheaf_corpus(kSeed, 3);
  for (std::size_t n = 1; n <= 3; ++n)
    pool.push_back({"homeo-discrete", build_homeo_l(share(FiniteSpace::discrete(n))), Dialect::T1});
  for (const auto& entry : pool) {
    const auto& c = entry.pseudogroup;
    if (!c.space().is_t1() || !c.has_underlying()) continue;
    dialects.guard(entry.name, [&] {
      for (std::size_t x = 0; x < c.space().size(); ++x)
        for (std::size_t y = 0; y < c.space().size(); ++y) {
          auto a = germ_target_hom(c, x, y, Dialect::T1).in_total;
          auto b = germ_target_hom(c, x, y, Dialect::NonT1).in_total;
          std::sort(a.begin(), a.end());
          std::sort(b.begin(), b.end());
          if (a != b) return false;
        }
      return true;
    });
  }
  const bool ok = quotient.all() && covers.all() && exhaustive.all() && dialects.all() && quotient.total > 0 &&
                  covers.total > 0 && exhaustive.total > 0 && dialects.total > 0;
  report(6, "oracle agreement", ok,
         "stalks " + counts(quotient) + ", all covers " + counts(covers) + ", exhaustive mode " + counts(exhaustive) +
             ", dialects " + counts(dialects));
}

void criterion_examples() {
  Tally t;
  t.guard("homeo discrete 2", [] {
    const auto c = build_homeo_l(share(FiniteSpace::discrete(2)));
    const auto& s = c.space();
    const std::size_t oracle_count =
        oracle::count_local_homeos(s, oracle::mask_of(s.all(), 2), oracle::mask_of(s.all(), 2));
    return c.hom_size(s.full_id(), s.full_id()) == 4 && oracle_count == 4 && def21_conditions(c).ok();
  });
  t.guard("homeo sierpinski", [] {
    const auto c = build_homeo_l(share(FiniteSpace::sierpinski()));
    const auto r = def21_conditions(c);
    return r.passes("(1)") && !r.passes("(2)") && r.passes("(3)") && r.passes("(4)");
  });
  t.guard("constant Z/2 sheaf", [] {
    const auto c = from_group_sheaf(locally_constant_group_sheaf(share(FiniteSpace::discrete(2)), cyclic_group(2)));
    if (!is_pseudogroup_sheaf(c, Dialect::T1).ok()) return false;
    const auto g = build_germ_groupoid(c, Dialect::T1);
    const bool vertex_groups =
        std::all_of(g.arrows.begin(), g.arrows.end(), [](const GermArrow& a) { return a.source == a.target; });
    return vertex_groups && g.arrows.size() == 4 && g.end(0, 0) - g.begin(0, 0) == 2 &&
           g.end(1, 1) - g.begin(1, 1) == 2;
  });
  report(7, "worked examples", t.all(), counts(t));
}

void criterion_mutants() {
  Tally t;
  for (const auto& m : mutation_suite(kSeed)) t.guard(m.name, [&] { return !detecting_checks(m).empty(); });
  report(8, "mutation sensitivity", t.all() && t.total == kMutants,
         std::to_string(t.pass) + "/" + std::to_string(kMutants) + " detected" +
             (t.first_failure.empty() ? "" : ", missed: " + t.first_failure));
}

}  // namespace

int main() {
  const auto groupoids = groupoid_corpus();
  criterion_sections(groupoids);
  const auto pool = pseudogroup_pool(groupoids);
  criterion_underlying(pool);
  const auto sheaves = pseudogroup_sheaf_corpus(kSeed, 3);
  criterion_groupoids(sheaves);
  criterion_roundtrips(groupoids, sheaves);
  criterion_sheafification();
  criterion_oracles();
  criterion_examples();
  criterion_mutants();
  std::printf("%s: %d of 8 criteria failed\n", failures == 0 ? "PASS" : "FAIL", failures);
  return failures == 0 ? 0 : 1;
}
