#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>

#include "etale/classical.hpp"
#include "etale/groupoid.hpp"
#include "etale/io.hpp"
#include "etale/ppg_sheafify.hpp"
#include "etale/presheaf.hpp"
#include "etale/pseudogroup.hpp"

namespace etale::cli {
namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::SchemaError:
    case ErrorKind::MissingEmptyOrFull:
    case ErrorKind::NotClosedUnderUnion:
    case ErrorKind::NotClosedUnderIntersection:
    case ErrorKind::UnknownPoint:
    case ErrorKind::NotOpen:
    case ErrorKind::InvalidPreorder:
    case ErrorKind::SuiteUnavailable:
    case ErrorKind::MissingUnderlying:
    case ErrorKind::NotT1Space:
      return true;
    default:
      return false;
  }
}

bool is_budget_error(ErrorKind kind) {
  return kind == ErrorKind::BudgetExceeded || kind == ErrorKind::CoverBudgetExceeded ||
         kind == ErrorKind::EnumerationBudgetExceeded;
}

/// Ordered list of named outcomes.
class Checks {
 public:
  void add(const std::string& name, bool ok, json details = nullptr) {
    entries_.push_back({{"name", name}, {"status", ok ? "pass" : "fail"}, {"details", std::move(details)}});
  }
  void add(const std::string& name, const CheckReport& r) {
    if (r.skipped) {
      skip(name, r.note);
      return;
    }
    add(name, r.ok(), r.violations.empty() ? json(nullptr) : r.to_json());
  }
  void add(const ConditionReport& r, const std::string& prefix = "") {
    for (const auto& [name, report] : r.conditions) add(prefix + name, report);
  }
  void skip(const std::string& name, const std::string& note) {
    entries_.push_back({{"name", name}, {"status", "skipped"}, {"details", {{"note", note}}}});
  }
  /// Runs body; an etale::Error becomes a failed (or, over budget, skipped) check named name.
  void guard(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      if (is_input_error(e.kind())) throw;
      if (is_budget_error(e.kind()))
        entries_.push_back({{"name", name}, {"status", "skipped"}, {"details", e.to_json()}});
      else
        entries_.push_back({{"name", name}, {"status", "fail"}, {"details", e.to_json()}});
    }
  }

  const json& entries() const { return entries_; }
  bool all_pass() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const json& e) { return e["status"] == "pass"; });
  }
  std::vector<std::string> not_passing() const {
    std::vector<std::string> out;
    for (const auto& e : entries_)
      if (e["status"] != "pass") out.push_back(e["name"].get<std::string>() + ":" + e["status"].get<std::string>());
    return out;
  }

 private:
  json entries_ = json::array();
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Adds the content digest (computed without timings) and the timing block.
CommandResult finish(json report, int exit_code, Clock::time_point start) {
  report["digest"] = digest(report);
  report["timings"] = {{"seconds", seconds_since(start)}};
  return {std::move(report), exit_code, {}};
}

CommandResult input_failure(json report, const Error& e, Clock::time_point start) {
  report["status"] = "error";
  report["error"] = e.to_json();
  return finish(std::move(report), kExitInput, start);
}

json instance_json(const Instance& inst) {
  switch (inst.kind) {
    case InstanceKind::Space: return space_to_json(*inst.space);
    case InstanceKind::Presheaf: return presheaf_to_json(inst.presheaf);
    case InstanceKind::Pseudogroup: return pseudogroup_to_json(inst.pseudogroup, inst.dialect);
    case InstanceKind::Groupoid: return groupoid_to_json(inst.groupoid);
  }
  return nullptr;
}

json input_block(const std::string& path, const Instance& inst) {
  return {{"path", path}, {"kind", std::string(to_string(inst.kind))}, {"digest", digest(instance_json(inst))}};
}

Dialect dialect_of(const Instance& inst) {
  if (inst.dialect) return *inst.dialect;
  return dialect_for(*inst.space);
}

[[noreturn]] void unavailable(const std::string& suite, const Instance& inst) {
  throw Error(ErrorKind::SuiteUnavailable,
              "suite '" + suite + "' does not apply to a " + std::string(to_string(inst.kind)) + " instance",
              {{"suite", suite}, {"kind", std::string(to_string(inst.kind))}});
}

CommandResult run_with_instance(const std::string& command, const std::string& path,
                                const std::function<void(const Instance&, Checks&, json&)>& body) {
  const auto start = Clock::now();
  json report{{"command", command}};
  try {
    const Instance inst = load_instance(path);
    report["input"] = input_block(path, inst);
    Checks checks;
    body(inst, checks, report);
    report["checks"] = checks.entries();
    const bool ok = checks.all_pass();
    report["status"] = ok ? "pass" : "fail";
    return finish(std::move(report), ok ? kExitPass : kExitFail, start);
  } catch (const Error& e) {
    if (!is_input_error(e.kind())) {
      report["status"] = "fail";
      report["error"] = e.to_json();
      return finish(std::move(report), kExitFail, start);
    }
    return input_failure(std::move(report), e, start);
  }
}

void suite_prop11(const Instance& inst, Checks& checks, const Budgets& budgets) {
  const PrePseudogroup* c = nullptr;
  SectionCategory sections;
  if (inst.kind == InstanceKind::Groupoid) {
    bool built = false;
    checks.guard("sections", [&] {
      sections = sections_category(inst.groupoid, budgets);
      built = true;
    });
    if (!built) return;
    c = &sections.category;
  } else if (inst.kind == InstanceKind::Pseudogroup) {
    c = &inst.pseudogroup;
  } else {
    unavailable("prop11", inst);
  }
  checks.guard("prop11", [&] {
    const auto r = check_prop11(*c, budgets);
    checks.add(r.conditions);
  });
}

const PrePseudogroup& pseudogroup_of(const Instance& inst, const std::string& suite, SectionCategory& storage,
                                     const Budgets& budgets) {
  if (inst.kind == InstanceKind::Pseudogroup) return inst.pseudogroup;
  if (inst.kind == InstanceKind::Groupoid) {
    storage = sections_category(inst.groupoid, budgets);
    return storage.category;
  }
  unavailable(suite, inst);
}

void suite_def21(const Instance& inst, Checks& checks, const Budgets& budgets) {
  SectionCategory storage;
  const auto& c = pseudogroup_of(inst, "def21", storage, budgets);
  checks.add(def21_conditions(c, budgets));
}

void suite_prop24(const Instance& inst, Checks& checks, const Budgets& budgets) {
  SectionCategory storage;
  const auto& c = pseudogroup_of(inst, "prop24", storage, budgets);
  const Dialect d = inst.kind == InstanceKind::Pseudogroup ? dialect_of(inst) : dialect_for(c.space());
  const auto pre = check_pre_pseudogroup(c, d);
  for (const auto& name : {"category", "(1)", "(2)"})
    if (const auto* r = pre.find(name)) checks.add(name, *r);
  if (!checks.all_pass()) return;
  checks.guard("underlying functor", [&] { checks.add("underlying functor", check_underlying_functor(c, underlying_functor(c, d))); });
}

void suite_prop25(const Instance& inst, Checks& checks, const Budgets& budgets) {
  SectionCategory storage;
  const auto& c = pseudogroup_of(inst, "prop25", storage, budgets);
  const Dialect d = inst.kind == InstanceKind::Pseudogroup ? dialect_of(inst) : dialect_for(c.space());
  checks.guard("groupoid", [&] {
    const auto h = groupoid_from_pseudogroup(c, d, budgets);
    checks.add("groupoid", check_groupoid(h.groupoid));
    const auto etale = is_etale(h.groupoid);
    checks.add("etale", etale.ok, etale.to_json(h.groupoid));
    checks.add("basic open targets", check_basic_open_targets(c, h, d));
  });
}

void suite_prop45(const Instance& inst, Checks& checks, json& report) {
  if (inst.kind != InstanceKind::Pseudogroup) unavailable("prop45", inst);
  const auto& c = inst.pseudogroup;
  const auto hat = ppg_sheafify(c);
  report["sheafification"] = sheafification_report(c, hat);
  checks.add("unit morphism", check_ppg_morphism(hat.unit, c, hat.sheaf));
  checks.add("unit germs", check_unit_germs(c, hat));
  checks.add(def21_conditions(hat.sheaf), "sheafification ");
  checks.add(check_prop45(c, hat));
  const auto other = ppg_sheafify(c, ClosureOrder::GlueFirst);
  checks.add("closure order", other.selection == hat.selection);
}

void record_universality(Checks& checks, const std::string& name, const std::function<Universality()>& run) {
  checks.guard(name, [&] {
    const auto u = run();
    json details{{"solutions", u.solutions}};
    if (!u.report.ok()) details["violations"] = u.report.to_json();
    checks.add(name, u.report.ok() && u.solutions == 1, details);
  });
}

void suite_universality(const Instance& inst, Checks& checks, const Budgets& budgets) {
  if (inst.kind == InstanceKind::Presheaf) {
    const auto& p = inst.presheaf;
    const auto hat = sheafify(p);
    checks.guard("presheaf universality", [&] {
      const auto u = check_presheaf_universality(p, hat, hat.sheaf, hat.unit, budgets);
      checks.add("presheaf universality", u.solutions == 1 && u.exhausted, {{"solutions", u.solutions}});
    });
    return;
  }
  if (inst.kind != InstanceKind::Pseudogroup) unavailable("universality", inst);
  const auto& c = inst.pseudogroup;
  const auto hat = ppg_sheafify(c);
  record_universality(checks, "into sheafification",
                      [&] { return check_universality(c, hat, hat.sheaf, hat.unit, budgets); });
  record_universality(checks, "into local homeomorphisms", [&] {
    const auto homeo = build_homeo_l(c.space_ptr());
    return check_universality(c, hat, homeo, underlying_morphism(c, homeo, Dialect::T1), budgets);
  });
}

// Corpus battery -------------------------------------------------------------

struct Tally {
  std::size_t total = 0, pass = 0, fail = 0, skipped = 0;
};

class CorpusRun {
 public:
  void record(const std::string& family, const std::string& name, const json& instance, const Checks& checks) {
    auto& t = tally_[family];
    ++t.total;
    std::string status = "pass";
    for (const auto& e : checks.entries()) {
      if (e["status"] == "fail") status = "fail";
      else if (e["status"] == "skipped" && status == "pass") status = "skipped";
    }
    if (status == "pass") ++t.pass;
    else if (status == "fail") ++t.fail;
    else ++t.skipped;
    json entry{{"family", family}, {"name", name}, {"digest", digest(instance)}, {"status", status}};
    if (status != "pass") entry["checks"] = checks.not_passing();
    instances_.push_back(std::move(entry));
  }

  json summary() const {
    json out = json::object();
    for (const auto& [family, t] : tally_)
      out[family] = {{"total", t.total}, {"pass", t.pass}, {"fail", t.fail}, {"skipped", t.skipped}};
    return out;
  }
  json instances() const {
    auto sorted = instances_;
    std::stable_sort(sorted.begin(), sorted.end(), [](const json& a, const json& b) {
      return std::tie(a["digest"].get_ref<const std::string&>(), a["name"].get_ref<const std::string&>()) <
             std::tie(b["digest"].get_ref<const std::string&>(), b["name"].get_ref<const std::string&>());
    });
    return sorted;
  }
  bool all_pass() const {
    return std::all_of(tally_.begin(), tally_.end(), [](const auto& kv) { return kv.second.pass == kv.second.total; });
  }

 private:
  std::map<std::string, Tally> tally_;
  std::vector<json> instances_;
};

}  // namespace

std::string digest(const json& j) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CommandResult cmd_validate(const std::string& path, const RunConfig& config) {
  return run_with_instance("validate", path, [&](const Instance& inst, Checks& checks, json&) {
    switch (inst.kind) {
      case InstanceKind::Space:
        checks.add("topology", true, {{"points", inst.space->size()}, {"t1", inst.space->is_t1()}});
        break;
      case InstanceKind::Presheaf:
        checks.add("presheaf", check_presheaf(inst.presheaf));
        break;
      case InstanceKind::Pseudogroup: {
        const auto& c = inst.pseudogroup;
        const Dialect d = dialect_of(inst);
        if (d == Dialect::NonT1 && !c.has_underlying()) {
          checks.add(check_category(c));
          break;
        }
        checks.add(check_pre_pseudogroup(c, d));
        break;
      }
      case InstanceKind::Groupoid:
        checks.add("groupoid", check_groupoid(inst.groupoid));
        break;
    }
    (void)config;
  });
}

CommandResult cmd_check(const std::string& path, const std::string& suite, const RunConfig& config) {
  return run_with_instance("check", path, [&](const Instance& inst, Checks& checks, json& report) {
    report["suite"] = suite;
    if (suite == "prop11") suite_prop11(inst, checks, config.budgets);
    else if (suite == "def21") suite_def21(inst, checks, config.budgets);
    else if (suite == "prop24") suite_prop24(inst, checks, config.budgets);
    else if (suite == "prop25") suite_prop25(inst, checks, config.budgets);
    else if (suite == "prop45") suite_prop45(inst, checks, report);
    else if (suite == "universality") suite_universality(inst, checks, config.budgets);
    else throw Error(ErrorKind::SuiteUnavailable, "unknown suite '" + suite + "'", {{"suite", suite}});
  });
}

CommandResult cmd_roundtrip(const std::string& path, const std::string& direction, const RunConfig& config) {
  return run_with_instance("roundtrip", path, [&](const Instance& inst, Checks& checks, json& report) {
    report["direction"] = direction;
    if (direction == "g2p2g") {
      if (inst.kind != InstanceKind::Groupoid) unavailable("g2p2g", inst);
      checks.guard("roundtrip", [&] {
        const auto iso = roundtrip_groupoid(inst.groupoid, config.budgets);
        checks.add("roundtrip", true, iso.summary);
      });
    } else if (direction == "p2g2p") {
      if (inst.kind != InstanceKind::Pseudogroup) unavailable("p2g2p", inst);
      checks.guard("roundtrip", [&] {
        const auto iso = roundtrip_pseudogroup(inst.pseudogroup, dialect_of(inst), config.budgets);
        checks.add("roundtrip", true, iso.summary);
      });
    } else {
      throw Error(ErrorKind::SuiteUnavailable, "unknown direction '" + direction + "'", {{"direction", direction}});
    }
  });
}

CommandResult cmd_corpus(const RunConfig& config) {
  const auto start = Clock::now();
  const auto& budgets = config.budgets;
  const std::size_t small = std::min<std::size_t>(config.max_points, 3);
  json report{{"command", "corpus"},
              {"config",
               {{"seed", config.seed},
                {"max_points", config.max_points},
                {"random_groupoids", config.random_groupoids}}}};
  if (config.max_points == 0 || config.max_points > 4) {
    return input_failure(std::move(report),
                         Error(ErrorKind::SchemaError, "max-points must lie between 1 and 4",
                               {{"max_points", config.max_points}}),
                         start);
  }
  CorpusRun run;

  for (const auto& space : spaces_up_to_homeomorphism(config.max_points)) {
    Checks checks;
    const auto j = space_to_json(space);
    checks.guard("json", [&] { checks.add("json", space_from_json(j) == space); });
    run.record("spaces", "space" + std::to_string(space.size()), j, checks);
  }

  for (const auto& p : presheaf_corpus(config.seed, small, 3)) {
    Checks checks;
    checks.add("presheaf", check_presheaf(p.presheaf));
    checks.guard("sheafify", [&] {
      const auto hat = sheafify(p.presheaf);
      checks.add("sheaf", is_sheaf(hat.sheaf, SheafMode::Canonical, budgets).ok);
      checks.add("unit stalks", check_unit_stalks(p.presheaf, hat));
    });
    run.record("presheaves", p.name, presheaf_to_json(p.presheaf), checks);
  }

  auto groupoids = exhaustive_etale_groupoids(small, 9, config.seed);
  for (auto& g : random_etale_groupoids(config.random_groupoids, config.seed, config.max_points, 12))
    groupoids.push_back(std::move(g));
  for (const auto& g : groupoids) {
    Checks checks;
    checks.add("groupoid", check_groupoid(g.groupoid));
    checks.add("etale", is_etale(g.groupoid).ok);
    checks.guard("prop11", [&] { checks.add(check_prop11(sections_category(g.groupoid, budgets).category, budgets).conditions); });
    checks.guard("roundtrip", [&] {
      roundtrip_groupoid(g.groupoid, budgets);
      checks.add("roundtrip", true);
    });
    run.record("etale-groupoids", g.name, groupoid_to_json(g.groupoid), checks);
  }

  for (const auto& c : pseudogroup_sheaf_corpus(config.seed, small)) {
    Checks checks;
    checks.guard("sheaf", [&] { checks.add(is_pseudogroup_sheaf(c.pseudogroup, c.dialect, budgets)); });
    checks.guard("prop25", [&] {
      const auto h = groupoid_from_pseudogroup(c.pseudogroup, c.dialect, budgets);
      checks.add("groupoid", check_groupoid(h.groupoid));
      checks.add("etale", is_etale(h.groupoid).ok);
    });
    checks.guard("roundtrip", [&] {
      roundtrip_pseudogroup(c.pseudogroup, c.dialect, budgets);
      checks.add("roundtrip", true);
    });
    run.record("pseudogroup-sheaves", c.name, pseudogroup_to_json(c.pseudogroup, c.dialect), checks);
  }

  for (const auto& c : pre_pseudogroup_corpus(config.seed, small)) {
    Checks checks;
    checks.guard("sheafify", [&] {
      const auto hat = ppg_sheafify(c.pseudogroup);
      checks.add("unit germs", check_unit_germs(c.pseudogroup, hat));
      checks.add("sheafification def21", def21_conditions(hat.sheaf, budgets).ok());
      checks.add(check_prop45(c.pseudogroup, hat));
    });
    run.record("pre-pseudogroups", c.name, pseudogroup_to_json(c.pseudogroup, c.dialect), checks);
  }

  for (const auto& m : mutation_suite(config.seed)) {
    Checks checks;
    const auto hits = detecting_checks(m);
    checks.add("detected", !hits.empty(), hits);
    json j;
    switch (m.target) {
      case Mutant::Target::Pseudogroup: j = pseudogroup_to_json(m.pseudogroup); break;
      case Mutant::Target::Presheaf: j = presheaf_to_json(m.presheaf); break;
      case Mutant::Target::Groupoid: j = groupoid_to_json(m.groupoid); break;
    }
    run.record("mutants", m.name, j, checks);
  }

  report["summary"] = run.summary();
  report["instances"] = run.instances();
  const bool ok = run.all_pass();
  report["status"] = ok ? "pass" : "fail";
  return finish(std::move(report), ok ? kExitPass : kExitFail, start);
}

CommandResult cmd_dot(const std::string& path, const std::string& kind, const RunConfig& config) {
  std::string artifact;
  auto result = run_with_instance("dot", path, [&](const Instance& inst, Checks& checks, json& report) {
    report["kind"] = kind;
    if (kind == "space") {
      artifact = space_dot(*inst.space);
    } else if (kind == "etale") {
      if (inst.kind == InstanceKind::Presheaf) artifact = etale_dot(inst.presheaf);
      else if (inst.kind == InstanceKind::Pseudogroup)
        artifact = etale_dot(hom_presheaf(inst.pseudogroup, inst.space->full_id()));
      else unavailable("etale", inst);
    } else if (kind == "groupoid") {
      if (inst.kind == InstanceKind::Groupoid) artifact = groupoid_dot(inst.groupoid);
      else if (inst.kind == InstanceKind::Pseudogroup)
        artifact = groupoid_dot(groupoid_from_pseudogroup(inst.pseudogroup, dialect_of(inst), config.budgets).groupoid);
      else unavailable("groupoid", inst);
    } else {
      throw Error(ErrorKind::SuiteUnavailable, "unknown DOT kind '" + kind + "'", {{"kind", kind}});
    }
    checks.add("dot", true, {{"bytes", artifact.size()}});
  });
  result.artifact = std::move(artifact);
  return result;
}

std::string render_text(const json& report) {
  std::string out = report.value("command", "") + ": " + report.value("status", "") + "\n";
  if (report.contains("error")) out += "  error " + report["error"].dump() + "\n";
  if (report.contains("checks"))
    for (const auto& c : report["checks"])
      out += "  " + c["status"].get<std::string>() + "  " + c["name"].get<std::string>() + "\n";
  if (report.contains("summary")) {
    char line[128];
    std::snprintf(line, sizeof line, "  %-22s %6s %6s %6s %8s\n", "family", "total", "pass", "fail", "skipped");
    out += line;
    for (const auto& [family, t] : report["summary"].items()) {
      std::snprintf(line, sizeof line, "  %-22s %6zu %6zu %6zu %8zu\n", family.c_str(), t["total"].get<std::size_t>(),
                    t["pass"].get<std::size_t>(), t["fail"].get<std::size_t>(), t["skipped"].get<std::size_t>());
      out += line;
    }
  }
  out += "  digest " + report.value("digest", "") + "\n";
  return out;
}

}  // namespace etale::cli
