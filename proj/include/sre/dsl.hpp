#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sre/propcheck.hpp"
#include "sre/rewrite.hpp"
#include "sre/sim.hpp"
#include "sre/system.hpp"
#include "sre/term.hpp"

namespace sre {

// Declaration environment collected from prelude files: which identifiers
// denote named symbolic constants (enum members and free constants), and to
// which enum family each belongs. Everything else said about an identifier
// comes from its syntactic position.
struct DeclEnv {
  std::map<std::string, std::string> atom_family;  // name -> family ("" = free const)

  bool is_atom(const std::string &name) const { return atom_family.count(name) != 0; }
  void add_enum(const std::string &family, const std::vector<std::string> &members);
  void add_const(const std::string &name) { atom_family[name] = ""; }
  std::map<std::string, std::vector<std::string>> families() const;
};

struct EnumDecl {
  std::string family;
  std::vector<std::string> members;
};

struct RulesetDecl {
  std::string name;
  std::vector<std::pair<Term, Term>> rules;  // pattern => replacement

  RuleSet to_ruleset() const;
};

struct JobDecl {
  std::string name;
  std::string spec_system;
  std::string impl_system;
  int k_spec = 1;
  int k_imp = 1;
  std::vector<std::pair<std::string, std::string>> renames;   // impl -> spec
  std::string abstract_ruleset;                               // ruleset name, "" = none
  bool all_scenarios = false;
  std::vector<std::string> scenario_names;
  std::vector<std::pair<std::string, std::string>> compares;  // spec <- impl
};

struct SourceUnit {
  std::string path;
  std::vector<EnumDecl> enums;
  std::vector<std::string> consts;
  std::vector<Scenario> scenarios;
  std::vector<SreSystem> systems;
  std::vector<RulesetDecl> rulesets;
  std::vector<Property> properties;
  std::vector<JobDecl> jobs;

  bool empty() const {
    return enums.empty() && consts.empty() && scenarios.empty() && systems.empty() &&
           rulesets.empty() && properties.empty() && jobs.empty();
  }
};

struct ParseDiag {
  int line = 0;  // 1-based
  int col = 0;   // 1-based
  std::string message;
  std::string expected;  // expected-token summary when applicable
};

std::string to_string(const ParseDiag &d);

struct ParseResult {
  std::optional<SourceUnit> unit;  // present iff no diagnostics
  std::vector<ParseDiag> diags;
  bool ok() const { return unit.has_value(); }
};

// Scans a unit for enum/const declarations only, without a full parse; used
// as phase one so later files can classify identifiers declared in earlier
// (or the same) prelude files. Never fails: malformed regions contribute
// nothing.
DeclEnv collect_decl_env(const std::string &text);
DeclEnv collect_decl_env_files(const std::vector<std::string> &texts);

// Full parse of one unit. Total over byte strings: syntax problems come back
// as diagnostics with line/column, never as exceptions. Declarations of the
// unit itself are visible to it (its own enums/consts classify its terms).
ParseResult parse_unit(const std::string &text, const std::string &path = "",
                       const DeclEnv *env = nullptr);

// Canonical, deterministic rendering; parse(serialize(u)) is structurally
// equal to u for every valid unit.
std::string serialize_unit(const SourceUnit &unit);

// Structural equality, the round-trip test's notion of sameness.
bool unit_equal(const SourceUnit &a, const SourceUnit &b, std::string *why = nullptr);

// Term-level entry points for tests, rule files, and expected-value checks.
// In an equation context a bare identifier is an atom (if declared) or a
// symbolic input; in a property context it is a trace-variable reference at
// offset zero instead.
struct TermParseResult {
  std::optional<Term> term;
  std::vector<ParseDiag> diags;
  bool ok() const { return term.has_value(); }
};
TermParseResult parse_term(const std::string &text, const DeclEnv &env,
                           bool property_context = false);

}  // namespace sre
