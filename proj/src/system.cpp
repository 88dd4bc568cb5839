#include "sre/system.hpp"

#include <algorithm>
#include <functional>

namespace sre {

namespace {

bool contains(const std::vector<std::string> &v, const std::string &x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

void walk(const Term &t, const std::function<void(const Term &)> &fn) {
  fn(t);
  for (const Term &k : t.kids()) walk(k, fn);
}

}  // namespace

bool SreSystem::has_variable(const std::string &x) const { return contains(variables, x); }
bool SreSystem::has_input(const std::string &x) const { return contains(inputs, x); }
bool SreSystem::has_control(const std::string &x) const { return contains(controls, x); }

const Equation *SreSystem::equation_for(const std::string &x) const {
  for (const Equation &e : equations)
    if (e.target == x) return &e;
  return nullptr;
}

int SreSystem::max_delay() const {
  int d = 0;
  for (const Equation &e : equations)
    walk(e.body, [&](const Term &t) {
      if (t.kind() == Kind::VarRef && t.offset() > d) d = t.offset();
    });
  return d;
}

SortContext SreSystem::sort_context() const {
  SortContext ctx;
  auto put = [&](const std::string &name) {
    auto it = sorts.find(name);
    ctx.vars[name] = it != sorts.end() ? it->second : Sort::any();
  };
  for (const auto &v : variables) put(v);
  for (const auto &v : inputs) put(v);
  for (const auto &v : controls) put(v);
  return ctx;
}

std::string to_string(const Diagnostic &d) {
  std::string s = d.severity == Diagnostic::Severity::Error ? "error: " : "warning: ";
  s += d.message;
  if (!d.where.empty()) s += " [" + d.where + "]";
  return s;
}

std::vector<Diagnostic> validate(const SreSystem &sys) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string msg, std::string where = "") {
    out.push_back({Diagnostic::Severity::Error, std::move(msg), std::move(where)});
  };
  auto warning = [&](std::string msg, std::string where = "") {
    out.push_back({Diagnostic::Severity::Warning, std::move(msg), std::move(where)});
  };

  // duplicate declarations across the three roles
  std::map<std::string, int> decl_count;
  for (const auto &x : sys.variables) decl_count[x]++;
  for (const auto &x : sys.inputs) decl_count[x]++;
  for (const auto &x : sys.controls) decl_count[x]++;
  for (const auto &[name, n] : decl_count)
    if (n > 1) error("signal " + name + " declared more than once");

  // exactly one equation per variable; none for inputs/controls
  std::map<std::string, int> eq_count;
  for (const Equation &e : sys.equations) eq_count[e.target]++;
  for (const auto &x : sys.variables)
    if (eq_count.count(x) == 0) error("no equation for variable " + x);
  for (const auto &[target, n] : eq_count) {
    if (n > 1) error("multiple equations for " + target);
    if (sys.has_input(target) || sys.has_control(target))
      error("equation defines non-variable signal " + target, "equation " + target);
    else if (!sys.has_variable(target))
      error("equation for undeclared signal " + target, "equation " + target);
  }

  for (const auto &x : sys.outputs)
    if (!sys.has_variable(x)) error("output " + x + " is not a defined variable");

  // per-equation body checks
  SortContext ctx = sys.sort_context();
  std::set<std::pair<std::string, int>> needed_past;  // (signal, offset >= 1)
  for (const Equation &e : sys.equations) {
    const std::string where = "equation " + e.target;
    bool any_ref = false;
    bool resolved = true;
    walk(e.body, [&](const Term &t) {
      if (t.kind() != Kind::VarRef) return;
      any_ref = true;
      if (!sys.declares(t.name())) {
        error("unresolved reference " + t.name(), where);
        resolved = false;
      }
      if (t.offset() < 0) error("reference to future time " + t.name(), where);
      if (t.offset() >= 1) needed_past.insert({t.name(), t.offset()});
    });
    if (!any_ref)
      warning("delay set empty: body references no signal", where);
    if (resolved) {
      SortResult sr = sort_of(e.body, ctx);
      if (!sr.ok) error("ill-sorted body: " + sr.error + " at " + path_to_string(sr.path), where);
    }
  }

  // initial-condition coverage: a reference at delay g needs values at
  // t = 1-g .. 0 for the first simulated cycle onward
  for (const auto &[name, g] : needed_past) {
    if (sys.has_control(name)) continue;  // controls are constant over time
    for (int t = 1 - g; t <= 0; ++t)
      if (!sys.initial.count({name, t}))
        error("missing initial condition " + name + "(" + std::to_string(t) + ")",
              "referenced at delay " + std::to_string(g));
  }

  // initial values must be constants or symbolic inputs (no variable refs)
  for (const auto &[key, value] : sys.initial) {
    if (key.second > 0)
      error("initial condition at positive time " + key.first + "(" +
            std::to_string(key.second) + ")");
    if (value.null()) {
      error("null initial value for " + key.first);
      continue;
    }
    walk(value, [&](const Term &t) {
      if (t.kind() == Kind::VarRef)
        error("initial value of " + key.first + " references " + t.name(),
              "initial conditions");
    });
  }

  return out;
}

bool well_formed(const SreSystem &sys) {
  for (const Diagnostic &d : validate(sys))
    if (d.is_error()) return false;
  return true;
}

std::set<std::pair<std::string, int>> free_symbols(const Term &t) {
  std::set<std::pair<std::string, int>> out;
  walk(t, [&](const Term &x) {
    if (x.kind() == Kind::VarRef) out.insert({x.name(), x.offset()});
    if (x.kind() == Kind::SymInput) out.insert({x.name(), 0});
  });
  return out;
}

std::set<std::pair<std::string, int>> free_var_refs(const Term &t) {
  std::set<std::pair<std::string, int>> out;
  walk(t, [&](const Term &x) {
    if (x.kind() == Kind::VarRef) out.insert({x.name(), x.offset()});
  });
  return out;
}

std::set<std::string> free_sym_inputs(const Term &t) {
  std::set<std::string> out;
  walk(t, [&](const Term &x) {
    if (x.kind() == Kind::SymInput) out.insert(x.name());
  });
  return out;
}

}  // namespace sre
