#include "sre/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace sre {

// ---------------------------------------------------------------------------
// declaration environment
// ---------------------------------------------------------------------------

void DeclEnv::add_enum(const std::string &family, const std::vector<std::string> &members) {
  for (const std::string &m : members) atom_family[m] = family;
}

std::map<std::string, std::vector<std::string>> DeclEnv::families() const {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto &[name, fam] : atom_family)
    if (!fam.empty()) out[fam].push_back(name);
  return out;
}

// ---------------------------------------------------------------------------
// lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
  End, Ident, Number,
  LBrace, RBrace, LParen, RParen, LBracket, RBracket,
  Comma, Semi, Colon,
  Eq, Ne, Lt, Le, Gt, Ge,
  Arrow,    // ->
  LeftArrow,  // <-
  Implies,  // =>
  Plus, Minus, Star, Slash,
  Hole,     // ?name[:sort]
  SeqHole,  // ...name
  DotDot,   // ..
  Bad,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;       // Ident text / hole name
  std::string hole_sort;  // Hole sort annotation
  Rational num;
  int line = 1, col = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(const std::string &src) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (i < src.size() && src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto push = [&](Tok k, std::string text = "") {
    Token t;
    t.kind = k;
    t.text = std::move(text);
    t.line = line;
    t.col = col;
    out.push_back(std::move(t));
    return &out.back();
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {  // comment to end of line
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (ident_start(c)) {
      size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      // dotted continuation: '.' followed by an identifier character
      while (j + 1 < src.size() && src[j] == '.' && ident_start(src[j + 1])) {
        ++j;
        while (j < src.size() && ident_char(src[j])) ++j;
      }
      Token *t = push(Tok::Ident, src.substr(i, j - i));
      (void)t;
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      std::string numerator = src.substr(i, j - i);
      std::string denominator;
      // attached '/digits' makes an exact rational literal
      if (j + 1 < src.size() && src[j] == '/' &&
          std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        size_t k = j + 1;
        while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
        denominator = src.substr(j + 1, k - j - 1);
        j = k;
      }
      Token *t = push(Tok::Number);
      t->num = denominator.empty() ? Rational(boost::multiprecision::cpp_int(numerator))
                                   : Rational(boost::multiprecision::cpp_int(numerator),
                                              boost::multiprecision::cpp_int(denominator));
      advance(j - i);
      continue;
    }
    if (c == '?') {
      size_t j = i + 1;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string name = src.substr(i + 1, j - i - 1);
      std::string sort;
      if (j < src.size() && src[j] == ':' && j + 1 < src.size() && ident_start(src[j + 1])) {
        size_t k = j + 1;
        while (k < src.size() && ident_char(src[k])) ++k;
        sort = src.substr(j + 1, k - j - 1);
        j = k;
      }
      Token *t = push(Tok::Hole, std::move(name));
      t->hole_sort = std::move(sort);
      advance(j - i);
      continue;
    }
    if (c == '.') {
      if (i + 2 < src.size() && src[i + 1] == '.' && src[i + 2] == '.') {
        size_t j = i + 3;
        while (j < src.size() && ident_char(src[j])) ++j;
        push(Tok::SeqHole, src.substr(i + 3, j - i - 3));
        advance(j - i);
        continue;
      }
      if (i + 1 < src.size() && src[i + 1] == '.') {
        push(Tok::DotDot);
        advance(2);
        continue;
      }
      push(Tok::Bad, ".");
      advance(1);
      continue;
    }
    auto two = [&](char a, char b, Tok k) {
      if (c == a && i + 1 < src.size() && src[i + 1] == b) {
        push(k, std::string() + a + b);
        advance(2);
        return true;
      }
      return false;
    };
    if (two('=', '>', Tok::Implies) || two('!', '=', Tok::Ne) || two('<', '=', Tok::Le) ||
        two('>', '=', Tok::Ge) || two('-', '>', Tok::Arrow) || two('<', '-', Tok::LeftArrow))
      continue;
    Tok k = Tok::Bad;
    switch (c) {
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case ',': k = Tok::Comma; break;
      case ';': k = Tok::Semi; break;
      case ':': k = Tok::Colon; break;
      case '=': k = Tok::Eq; break;
      case '<': k = Tok::Lt; break;
      case '>': k = Tok::Gt; break;
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      default: break;
    }
    push(k, std::string(1, c));
    advance(1);
  }
  push(Tok::End);
  return out;
}

const std::set<std::string> &reserved_words() {
  static const std::set<std::string> words = {
      "enum", "const", "scenario", "system", "ruleset", "property", "job",
      "bind", "attr", "input", "control", "output", "eq", "init", "rule",
      "category", "horizon", "guard", "forall", "assert",
      "spec", "impl", "rename", "abstract", "scenarios", "compare", "all", "in",
      "and", "or", "xor", "not", "nor", "nand", "true", "false", "IF", "n",
  };
  return words;
}

bool is_decl_keyword(const std::string &s) {
  static const std::set<std::string> kws = {"enum", "const", "scenario", "system",
                                            "ruleset", "property", "job"};
  return kws.count(s) != 0;
}

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

struct ParseAbort {};  // unwinds to the enclosing declaration's recovery point

struct Parser {
  const std::vector<Token> &ts;
  size_t i = 0;
  DeclEnv env;
  std::vector<ParseDiag> diags;
  SourceUnit unit;
  std::string quant_index;  // active property quantifier, "" outside

  explicit Parser(const std::vector<Token> &tokens) : ts(tokens) {}

  const Token &peek(size_t ahead = 0) const {
    size_t k = i + ahead;
    return k < ts.size() ? ts[k] : ts.back();
  }
  const Token &get() {
    const Token &t = peek();
    if (i + 1 < ts.size()) ++i;
    return t;
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(const char *w) const { return at(Tok::Ident) && peek().text == w; }
  bool eat(Tok k) {
    if (!at(k)) return false;
    get();
    return true;
  }
  bool eat_word(const char *w) {
    if (!at_word(w)) return false;
    get();
    return true;
  }

  [[noreturn]] void fail(const std::string &msg, const std::string &expected = "") {
    ParseDiag d;
    d.line = peek().line;
    d.col = peek().col;
    d.message = msg;
    d.expected = expected;
    diags.push_back(std::move(d));
    throw ParseAbort{};
  }
  void expect(Tok k, const char *what) {
    if (!eat(k)) fail(std::string("expected ") + what, what);
  }
  std::string expect_ident(const char *what) {
    if (!at(Tok::Ident)) fail(std::string("expected ") + what, what);
    std::string s = peek().text;
    if (reserved_words().count(s)) fail("reserved word '" + s + "' cannot be used as " + what);
    get();
    return s;
  }

  long expect_int(const char *what) {
    bool neg = eat(Tok::Minus);
    if (!at(Tok::Number)) fail(std::string("expected ") + what, "integer");
    Rational q = get().num;
    if (boost::multiprecision::denominator(q) != 1) fail("expected an integer", "integer");
    long v = static_cast<long>(boost::multiprecision::numerator(q));
    return neg ? -v : v;
  }

  // --- terms ---------------------------------------------------------------

  bool property_ctx = false;

  Term parse_expr() { return parse_or(); }

  Term parse_or() {
    Term t = parse_and();
    while (at_word("or") || at_word("xor")) {
      std::string op = peek().text;
      TermList kids{t};
      while (at_word(op.c_str())) {
        get();
        kids.push_back(parse_and());
      }
      t = op == "or" ? Term::lor(std::move(kids)) : Term::lxor(std::move(kids));
    }
    return t;
  }

  Term parse_and() {
    Term t = parse_not();
    if (!at_word("and")) return t;
    TermList kids{t};
    while (eat_word("and")) kids.push_back(parse_not());
    return Term::land(std::move(kids));
  }

  Term parse_not() {
    if (eat_word("not")) return Term::lnot(parse_not());
    return parse_cmp();
  }

  Term parse_cmp() {
    Term a = parse_add();
    CmpOp op;
    switch (peek().kind) {
      case Tok::Eq: op = CmpOp::Eq; break;
      case Tok::Ne: op = CmpOp::Ne; break;
      case Tok::Lt: op = CmpOp::Lt; break;
      case Tok::Le: op = CmpOp::Le; break;
      case Tok::Gt: op = CmpOp::Gt; break;
      case Tok::Ge: op = CmpOp::Ge; break;
      default: return a;
    }
    get();
    Term b = parse_add();
    return Term::cmp(op, a, b);
  }

  Term parse_add() {
    Term t = parse_mul();
    for (;;) {
      if (at(Tok::Plus)) {
        TermList kids{t};
        while (eat(Tok::Plus)) kids.push_back(parse_mul());
        t = Term::add(std::move(kids));
      } else if (at(Tok::Minus)) {
        TermList kids{t};
        while (eat(Tok::Minus)) kids.push_back(parse_mul());
        t = Term::arith(ArithOp::Sub, std::move(kids));
      } else {
        return t;
      }
    }
  }

  Term parse_mul() {
    Term t = parse_postfix();
    for (;;) {
      if (at(Tok::Star)) {
        TermList kids{t};
        while (eat(Tok::Star)) kids.push_back(parse_postfix());
        t = Term::mul(std::move(kids));
      } else if (at(Tok::Slash)) {
        TermList kids{t};
        while (eat(Tok::Slash)) kids.push_back(parse_postfix());
        t = Term::arith(ArithOp::Div, std::move(kids));
      } else {
        return t;
      }
    }
  }

  Term parse_postfix() {
    Term t = parse_primary();
    while (eat(Tok::LBracket)) {
      Term idx = parse_expr();
      expect(Tok::RBracket, "]");
      t = Term::index(t, idx);
    }
    return t;
  }

  Term parse_primary() {
    if (eat(Tok::LParen)) {
      if (eat(Tok::RParen)) return Term::tuple({});
      Term first = parse_expr();
      if (eat(Tok::RParen)) return first;  // grouping
      expect(Tok::Comma, ", or )");
      TermList elems{first};
      if (eat(Tok::RParen)) return Term::tuple(std::move(elems));  // (a,)
      for (;;) {
        elems.push_back(parse_expr());
        if (eat(Tok::RParen)) return Term::tuple(std::move(elems));
        expect(Tok::Comma, ", or )");
        if (eat(Tok::RParen)) return Term::tuple(std::move(elems));  // trailing comma
      }
    }
    if (at(Tok::Minus) && peek(1).kind == Tok::Number) {
      get();
      return Term::number(-get().num);
    }
    if (at(Tok::Number)) return Term::number(get().num);
    if (at(Tok::Hole)) {
      Token t = get();
      if (!t.hole_sort.empty()) return Term::hole_sorted(t.text, t.hole_sort);
      if (t.text.empty()) return Term::wildcard();
      return Term::hole(t.text);
    }
    if (at(Tok::SeqHole)) return Term::seq_hole(get().text);
    if (!at(Tok::Ident)) fail("expected a term", "term");

    std::string name = peek().text;
    if (name == "true") {
      get();
      return Term::boolean(true);
    }
    if (name == "false") {
      get();
      return Term::boolean(false);
    }
    if (name == "IF") {
      get();
      expect(Tok::LParen, "(");
      Term c = parse_expr();
      expect(Tok::Comma, ",");
      Term a = parse_expr();
      expect(Tok::Comma, ",");
      Term b = parse_expr();
      expect(Tok::RParen, ")");
      return Term::ite(c, a, b);
    }
    if (name == "nor" || name == "nand") {
      get();
      expect(Tok::LParen, "(");
      Term a = parse_expr();
      expect(Tok::Comma, ",");
      Term b = parse_expr();
      expect(Tok::RParen, ")");
      return Term::logic(name == "nor" ? LogicOp::Nor : LogicOp::Nand, {a, b});
    }
    if (reserved_words().count(name)) fail("reserved word '" + name + "' in term position");
    get();

    if (at(Tok::LParen)) {
      // variable reference name(n) / name(n-k), else function application
      if (peek(1).kind == Tok::Ident && peek(1).text == "n") {
        get();  // (
        get();  // n
        int off = 0;
        if (eat(Tok::Minus)) off = static_cast<int>(expect_int("delay"));
        expect(Tok::RParen, ")");
        return Term::var(name, off);
      }
      get();  // (
      TermList args;
      if (!eat(Tok::RParen)) {
        for (;;) {
          args.push_back(parse_expr());
          if (eat(Tok::RParen)) break;
          expect(Tok::Comma, ", or )");
        }
      }
      return Term::func(name, std::move(args));
    }

    if (env.is_atom(name)) return Term::atom(name, env.atom_family.at(name));
    if (property_ctx && name != quant_index) return Term::var(name, 0);
    return Term::input(name);
  }

  Term parse_term_in(bool prop_ctx) {
    bool saved = property_ctx;
    property_ctx = prop_ctx;
    Term t = parse_expr();
    property_ctx = saved;
    return t;
  }

  // --- sorts ---------------------------------------------------------------

  Sort parse_sort() {
    if (eat_word("enum")) return Sort::enum_family(expect_ident("enum family"));
    if (!at(Tok::Ident)) fail("expected a sort", "sort");
    std::string s = get().text;
    if (s == "bool") return Sort::boolean();
    if (s == "num") return Sort::num(NumDomain::Rat);
    if (s == "nat") return Sort::num(NumDomain::Nat);
    if (s == "int") return Sort::num(NumDomain::Int);
    if (s == "any") return Sort::any();
    if (s == "word") {
      if (eat(Tok::LBracket)) {
        long len = expect_int("word length");
        expect(Tok::RBracket, "]");
        return Sort::word(static_cast<int>(len));
      }
      return Sort::word();
    }
    fail("unknown sort '" + s + "'", "sort");
  }

  // --- declarations --------------------------------------------------------

  void parse_enum() {
    EnumDecl d;
    d.family = expect_ident("enum family name");
    expect(Tok::LBrace, "{");
    for (;;) {
      d.members.push_back(expect_ident("enum member"));
      if (eat(Tok::RBrace)) break;
      expect(Tok::Comma, ", or }");
    }
    env.add_enum(d.family, d.members);
    unit.enums.push_back(std::move(d));
  }

  void parse_const() {
    for (;;) {
      std::string name = expect_ident("constant name");
      env.add_const(name);
      unit.consts.push_back(name);
      if (eat(Tok::Semi)) break;
      expect(Tok::Comma, ", or ;");
    }
  }

  void parse_scenario() {
    Scenario sc;
    sc.name = expect_ident("scenario name");
    expect(Tok::LBrace, "{");
    while (!eat(Tok::RBrace)) {
      if (eat_word("bind")) {
        std::string sig = expect_ident("signal name");
        expect(Tok::Eq, "=");
        sc.bindings[sig] = parse_term_in(false);
        expect(Tok::Semi, ";");
      } else if (eat_word("attr")) {
        std::string name = expect_ident("attribute name");
        expect(Tok::Eq, "=");
        sc.attrs[name] = expect_int("attribute value");
        expect(Tok::Semi, ";");
      } else {
        fail("expected bind, attr, or }", "bind/attr");
      }
    }
    unit.scenarios.push_back(std::move(sc));
  }

  void parse_system() {
    SreSystem sys;
    sys.name = expect_ident("system name");
    expect(Tok::LBrace, "{");
    while (!eat(Tok::RBrace)) {
      if (eat_word("attr")) {
        std::string name = expect_ident("attribute name");
        expect(Tok::Eq, "=");
        sys.attrs[name] = expect_int("attribute value");
        expect(Tok::Semi, ";");
      } else if (eat_word("input") || at_word("control")) {
        bool is_control = eat_word("control");
        std::string name = expect_ident("signal name");
        if (eat(Tok::Colon)) sys.sorts[name] = parse_sort();
        expect(Tok::Semi, ";");
        (is_control ? sys.controls : sys.inputs).push_back(name);
      } else if (eat_word("output")) {
        sys.outputs.push_back(expect_ident("output signal"));
        expect(Tok::Semi, ";");
      } else if (eat_word("eq")) {
        std::string target = expect_ident("variable name");
        if (eat(Tok::Colon)) sys.sorts[target] = parse_sort();
        expect(Tok::Eq, "=");
        Term body = parse_term_in(false);
        expect(Tok::Semi, ";");
        sys.variables.push_back(target);
        sys.equations.push_back({target, std::move(body)});
      } else if (eat_word("init")) {
        std::string sig = expect_ident("signal name");
        expect(Tok::LParen, "(");
        long t = expect_int("time");
        expect(Tok::RParen, ")");
        expect(Tok::Eq, "=");
        Term v = parse_term_in(false);
        expect(Tok::Semi, ";");
        sys.initial[{sig, static_cast<int>(t)}] = std::move(v);
      } else {
        fail("expected attr, input, control, output, eq, init, or }", "system item");
      }
    }
    unit.systems.push_back(std::move(sys));
  }

  void parse_ruleset() {
    RulesetDecl d;
    d.name = expect_ident("ruleset name");
    expect(Tok::LBrace, "{");
    while (!eat(Tok::RBrace)) {
      if (!eat_word("rule")) fail("expected rule or }", "rule");
      Term pat = parse_term_in(false);
      expect(Tok::Implies, "=>");
      Term repl = parse_term_in(false);
      expect(Tok::Semi, ";");
      d.rules.emplace_back(std::move(pat), std::move(repl));
    }
    unit.rulesets.push_back(std::move(d));
  }

  void parse_property() {
    Property p;
    p.name = expect_ident("property name");
    quant_index.clear();
    expect(Tok::LBrace, "{");
    while (!eat(Tok::RBrace)) {
      if (eat_word("category")) {
        if (!at(Tok::Ident)) fail("expected a category", "global/local/control");
        std::string c = get().text;
        if (c == "global") p.category = Property::Category::Global;
        else if (c == "local") p.category = Property::Category::Local;
        else if (c == "control") p.category = Property::Category::Control;
        else fail("unknown category '" + c + "'", "global/local/control");
        expect(Tok::Semi, ";");
      } else if (eat_word("horizon")) {
        p.horizon = static_cast<int>(expect_int("horizon"));
        expect(Tok::Semi, ";");
      } else if (eat_word("guard")) {
        Property::Guard g;
        g.control = expect_ident("control name");
        expect(Tok::Eq, "=");
        g.value = parse_term_in(false);
        expect(Tok::Semi, ";");
        p.guard = std::move(g);
      } else if (eat_word("forall")) {
        Property::Quantifier q;
        q.index = expect_ident("index name");
        if (!eat_word("in")) fail("expected in", "in");
        q.lo = parse_term_in(false);
        expect(Tok::DotDot, "..");
        q.hi = parse_term_in(false);
        expect(Tok::Semi, ";");
        quant_index = q.index;
        p.quant = std::move(q);
      } else if (eat_word("assert")) {
        p.body = parse_term_in(true);
        expect(Tok::Semi, ";");
      } else {
        fail("expected category, horizon, guard, forall, assert, or }", "property item");
      }
    }
    quant_index.clear();
    unit.properties.push_back(std::move(p));
  }

  void parse_job() {
    JobDecl d;
    d.name = expect_ident("job name");
    expect(Tok::LBrace, "{");
    while (!eat(Tok::RBrace)) {
      if (eat_word("spec") || at_word("impl")) {
        bool is_impl = eat_word("impl");
        std::string sys = expect_ident("system name");
        int k = 1;
        if (eat(Tok::LParen)) {
          k = static_cast<int>(expect_int("cycle count"));
          expect(Tok::RParen, ")");
        }
        expect(Tok::Semi, ";");
        if (is_impl) {
          d.impl_system = sys;
          d.k_imp = k;
        } else {
          d.spec_system = sys;
          d.k_spec = k;
        }
      } else if (eat_word("rename")) {
        std::string from = expect_ident("implementation signal");
        expect(Tok::Arrow, "->");
        std::string to = expect_ident("specification signal");
        expect(Tok::Semi, ";");
        d.renames.emplace_back(std::move(from), std::move(to));
      } else if (eat_word("abstract")) {
        d.abstract_ruleset = expect_ident("ruleset name");
        expect(Tok::Semi, ";");
      } else if (eat_word("scenarios")) {
        if (eat_word("all")) {
          d.all_scenarios = true;
        } else {
          for (;;) {
            d.scenario_names.push_back(expect_ident("scenario name"));
            if (!eat(Tok::Comma)) break;
          }
        }
        expect(Tok::Semi, ";");
      } else if (eat_word("compare")) {
        std::string spec = expect_ident("specification signal");
        expect(Tok::LeftArrow, "<-");
        std::string impl = expect_ident("implementation signal");
        expect(Tok::Semi, ";");
        d.compares.emplace_back(std::move(spec), std::move(impl));
      } else {
        fail("expected spec, impl, rename, abstract, scenarios, compare, or }", "job item");
      }
    }
    unit.jobs.push_back(std::move(d));
  }

  void skip_to_next_decl() {
    int depth = 0;
    while (!at(Tok::End)) {
      if (at(Tok::LBrace)) ++depth;
      if (at(Tok::RBrace)) {
        if (depth == 0) {
          get();
          return;
        }
        --depth;
      }
      if (depth == 0 && at(Tok::Ident) && is_decl_keyword(peek().text)) return;
      get();
    }
  }

  void parse_all() {
    while (!at(Tok::End)) {
      try {
        if (eat_word("enum")) parse_enum();
        else if (eat_word("const")) parse_const();
        else if (eat_word("scenario")) parse_scenario();
        else if (eat_word("system")) parse_system();
        else if (eat_word("ruleset")) parse_ruleset();
        else if (eat_word("property")) parse_property();
        else if (eat_word("job")) parse_job();
        else fail("expected a declaration", "enum/const/scenario/system/ruleset/property/job");
      } catch (const ParseAbort &) {
        skip_to_next_decl();
      }
    }
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// public parse entry points
// ---------------------------------------------------------------------------

DeclEnv collect_decl_env(const std::string &text) {
  DeclEnv env;
  std::vector<Token> ts = lex(text);
  for (size_t i = 0; i < ts.size(); ++i) {
    if (ts[i].kind != Tok::Ident) continue;
    if (ts[i].text == "enum" && i + 2 < ts.size() && ts[i + 1].kind == Tok::Ident &&
        ts[i + 2].kind == Tok::LBrace) {
      std::string family = ts[i + 1].text;
      std::vector<std::string> members;
      size_t j = i + 3;
      while (j < ts.size() && ts[j].kind != Tok::RBrace && ts[j].kind != Tok::End) {
        if (ts[j].kind == Tok::Ident) members.push_back(ts[j].text);
        ++j;
      }
      env.add_enum(family, members);
      i = j;
    } else if (ts[i].text == "const") {
      size_t j = i + 1;
      while (j < ts.size() && ts[j].kind != Tok::Semi && ts[j].kind != Tok::End) {
        if (ts[j].kind == Tok::Ident) env.add_const(ts[j].text);
        ++j;
      }
      i = j;
    }
  }
  return env;
}

DeclEnv collect_decl_env_files(const std::vector<std::string> &texts) {
  DeclEnv env;
  for (const std::string &t : texts) {
    DeclEnv e = collect_decl_env(t);
    for (auto &[k, v] : e.atom_family) env.atom_family[k] = v;
  }
  return env;
}

ParseResult parse_unit(const std::string &text, const std::string &path, const DeclEnv *env) {
  std::vector<Token> ts = lex(text);
  Parser p(ts);
  if (env) p.env = *env;
  {
    DeclEnv own = collect_decl_env(text);
    for (auto &[k, v] : own.atom_family) p.env.atom_family[k] = v;
  }
  p.unit.path = path;
  p.parse_all();
  ParseResult r;
  r.diags = std::move(p.diags);
  if (r.diags.empty()) r.unit = std::move(p.unit);
  return r;
}

TermParseResult parse_term(const std::string &text, const DeclEnv &env, bool property_context) {
  std::vector<Token> ts = lex(text);
  Parser p(ts);
  p.env = env;
  TermParseResult r;
  try {
    Term t = p.parse_term_in(property_context);
    if (!p.at(Tok::End)) p.fail("trailing input after term");
    r.term = std::move(t);
  } catch (const ParseAbort &) {
  }
  r.diags = std::move(p.diags);
  if (!r.diags.empty()) r.term.reset();
  return r;
}

std::string to_string(const ParseDiag &d) {
  std::ostringstream os;
  os << d.line << ":" << d.col << ": " << d.message;
  if (!d.expected.empty()) os << " (expected " << d.expected << ")";
  return os.str();
}

RuleSet RulesetDecl::to_ruleset() const {
  RuleSet rs(name);
  for (const auto &[pat, repl] : rules) rs.add(RewriteRule::syntactic(pat, repl));
  return rs;
}

// ---------------------------------------------------------------------------
// serializer
// ---------------------------------------------------------------------------

namespace {

// operator precedence for parenthesization: or/xor 1, and 2, not 3,
// compare 4, add/sub 5, mul/div 6, index 7, primary 9
int prec_of(const Term &t) {
  switch (t.kind()) {
    case Kind::Logic:
      switch (t.logic_op()) {
        case LogicOp::Or:
        case LogicOp::Xor: return 1;
        case LogicOp::And: return 2;
        case LogicOp::Not: return 3;
        default: return 9;  // nor/nand render as calls
      }
    case Kind::Compare: return 4;
    case Kind::Arith:
      switch (t.arith_op()) {
        case ArithOp::Add:
        case ArithOp::Sub: return 5;
        default: return 6;
      }
    case Kind::Index: return 7;
    default: return 9;
  }
}

std::string rational_text(const Rational &q) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(q);
  if (boost::multiprecision::denominator(q) != 1)
    os << "/" << boost::multiprecision::denominator(q);
  return os.str();
}

struct TermWriter {
  bool property_ctx = false;

  std::string render(const Term &t, int minp = 0) const {
    std::string s = bare(t);
    if (prec_of(t) < minp) return "(" + s + ")";
    return s;
  }

  std::string join(const TermList &kids, const char *sep, int minp) const {
    std::string out;
    for (size_t k = 0; k < kids.size(); ++k) {
      if (k) out += sep;
      out += render(kids[k], minp);
    }
    return out;
  }

  std::string bare(const Term &t) const {
    switch (t.kind()) {
      case Kind::Constant:
        if (t.is_bool_const()) return t.is_true() ? "true" : "false";
        return rational_text(t.cval().q);
      case Kind::Atom:
      case Kind::SymInput: return t.name();
      case Kind::VarRef: {
        if (property_ctx && t.offset() == 0) return t.name();
        if (t.offset() == 0) return t.name() + "(n)";
        return t.name() + "(n-" + std::to_string(t.offset()) + ")";
      }
      case Kind::Index:
        return render(t.kid(0), 7) + "[" + render(t.kid(1)) + "]";
      case Kind::FuncApp: {
        std::string out = t.name() + "(";
        out += join(t.kids(), ", ", 0);
        return out + ")";
      }
      case Kind::Tuple: {
        if (t.arity() == 0) return "()";
        if (t.arity() == 1) return "(" + render(t.kid(0)) + ",)";
        return "(" + join(t.kids(), ", ", 0) + ")";
      }
      case Kind::Compare: {
        const char *op = "=";
        switch (t.cmp_op()) {
          case CmpOp::Eq: op = "="; break;
          case CmpOp::Ne: op = "!="; break;
          case CmpOp::Lt: op = "<"; break;
          case CmpOp::Le: op = "<="; break;
          case CmpOp::Gt: op = ">"; break;
          case CmpOp::Ge: op = ">="; break;
        }
        return render(t.kid(0), 5) + " " + op + " " + render(t.kid(1), 5);
      }
      case Kind::Logic:
        switch (t.logic_op()) {
          case LogicOp::Not: return "not " + render(t.kid(0), 3);
          case LogicOp::And: return join(t.kids(), " and ", 3);
          case LogicOp::Or: return join(t.kids(), " or ", 2);
          case LogicOp::Xor: return join(t.kids(), " xor ", 2);
          case LogicOp::Nor: return "nor(" + join(t.kids(), ", ", 0) + ")";
          case LogicOp::Nand: return "nand(" + join(t.kids(), ", ", 0) + ")";
        }
        return "?logic";
      case Kind::Arith:
        switch (t.arith_op()) {
          case ArithOp::Add: return join(t.kids(), " + ", 6);
          case ArithOp::Mul: return join(t.kids(), " * ", 7);
          case ArithOp::Sub: {
            // a same-op head keeps parentheses: "a - b - c" reads back as
            // one flat chain, not a nested one
            const Term &head = t.kid(0);
            bool same_op = head.kind() == Kind::Arith && head.arith_op() == ArithOp::Sub;
            std::string out = render(head, same_op ? 6 : 5);
            for (size_t k = 1; k < t.arity(); ++k) out += " - " + render(t.kid(k), 6);
            return out;
          }
          case ArithOp::Div: {
            const Term &head = t.kid(0);
            bool same_op = head.kind() == Kind::Arith && head.arith_op() == ArithOp::Div;
            std::string out = render(head, same_op ? 7 : 6);
            for (size_t k = 1; k < t.arity(); ++k) out += " / " + render(t.kid(k), 7);
            return out;
          }
        }
        return "?arith";
      case Kind::If:
        return "IF(" + render(t.kid(0)) + ", " + render(t.kid(1)) + ", " +
               render(t.kid(2)) + ")";
      case Kind::Hole:
        switch (t.hole_kind()) {
          case HoleKind::Wildcard: return "?";
          case HoleKind::Named: return "?" + t.name();
          case HoleKind::Sorted: return "?" + t.name() + ":" + t.family();
          case HoleKind::Sequence: return "..." + t.name();
        }
        return "?";
    }
    return "?term";
  }
};

std::string sort_text(const Sort &s) {
  switch (s.kind) {
    case Sort::Kind::Bool: return "bool";
    case Sort::Kind::Num:
      switch (s.domain) {
        case NumDomain::Nat: return "nat";
        case NumDomain::Int: return "int";
        case NumDomain::Rat: return "num";
      }
      return "num";
    case Sort::Kind::Word:
      return s.length < 0 ? "word" : "word[" + std::to_string(s.length) + "]";
    case Sort::Kind::Enum: return "enum " + s.family;
    case Sort::Kind::Any: return "any";
  }
  return "any";
}

std::string eq_term(const Term &t) {
  TermWriter w;
  return w.render(t);
}

std::string prop_term(const Term &t) {
  TermWriter w;
  w.property_ctx = true;
  return w.render(t);
}

}  // namespace

std::string serialize_unit(const SourceUnit &unit) {
  std::ostringstream os;
  bool first = true;
  auto gap = [&] {
    if (!first) os << "\n";
    first = false;
  };

  for (const EnumDecl &e : unit.enums) {
    gap();
    os << "enum " << e.family << " { ";
    for (size_t i = 0; i < e.members.size(); ++i) {
      if (i) os << ", ";
      os << e.members[i];
    }
    os << " }\n";
  }
  if (!unit.consts.empty()) {
    gap();
    os << "const ";
    for (size_t i = 0; i < unit.consts.size(); ++i) {
      if (i) os << ", ";
      os << unit.consts[i];
    }
    os << ";\n";
  }
  for (const Scenario &sc : unit.scenarios) {
    gap();
    os << "scenario " << sc.name << " {\n";
    for (const auto &[sig, val] : sc.bindings)
      os << "  bind " << sig << " = " << eq_term(val) << ";\n";
    for (const auto &[name, val] : sc.attrs)
      os << "  attr " << name << " = " << val << ";\n";
    os << "}\n";
  }
  for (const SreSystem &sys : unit.systems) {
    gap();
    os << "system " << sys.name << " {\n";
    for (const auto &[name, val] : sys.attrs) os << "  attr " << name << " = " << val << ";\n";
    auto signal = [&](const char *kw, const std::string &name) {
      os << "  " << kw << " " << name;
      auto it = sys.sorts.find(name);
      if (it != sys.sorts.end()) os << " : " << sort_text(it->second);
      os << ";\n";
    };
    for (const std::string &name : sys.inputs) signal("input", name);
    for (const std::string &name : sys.controls) signal("control", name);
    for (const Equation &eq : sys.equations) {
      os << "  eq " << eq.target;
      auto it = sys.sorts.find(eq.target);
      if (it != sys.sorts.end()) os << " : " << sort_text(it->second);
      os << " = " << eq_term(eq.body) << ";\n";
    }
    for (const auto &[key, val] : sys.initial)
      os << "  init " << key.first << "(" << key.second << ") = " << eq_term(val) << ";\n";
    for (const std::string &name : sys.outputs) os << "  output " << name << ";\n";
    os << "}\n";
  }
  for (const RulesetDecl &rs : unit.rulesets) {
    gap();
    os << "ruleset " << rs.name << " {\n";
    for (const auto &[pat, repl] : rs.rules)
      os << "  rule " << eq_term(pat) << " => " << eq_term(repl) << ";\n";
    os << "}\n";
  }
  for (const Property &p : unit.properties) {
    gap();
    os << "property " << p.name << " {\n";
    os << "  category " << to_cstr(p.category) << ";\n";
    os << "  horizon " << p.horizon << ";\n";
    if (p.guard)
      os << "  guard " << p.guard->control << " = " << eq_term(p.guard->value) << ";\n";
    if (p.quant)
      os << "  forall " << p.quant->index << " in " << eq_term(p.quant->lo) << " .. "
         << eq_term(p.quant->hi) << ";\n";
    os << "  assert " << prop_term(p.body) << ";\n";
    os << "}\n";
  }
  for (const JobDecl &j : unit.jobs) {
    gap();
    os << "job " << j.name << " {\n";
    os << "  spec " << j.spec_system << "(" << j.k_spec << ");\n";
    os << "  impl " << j.impl_system << "(" << j.k_imp << ");\n";
    for (const auto &[from, to] : j.renames) os << "  rename " << from << " -> " << to << ";\n";
    if (!j.abstract_ruleset.empty()) os << "  abstract " << j.abstract_ruleset << ";\n";
    if (j.all_scenarios) {
      os << "  scenarios all;\n";
    } else if (!j.scenario_names.empty()) {
      os << "  scenarios ";
      for (size_t i = 0; i < j.scenario_names.size(); ++i) {
        if (i) os << ", ";
        os << j.scenario_names[i];
      }
      os << ";\n";
    }
    for (const auto &[spec, impl] : j.compares)
      os << "  compare " << spec << " <- " << impl << ";\n";
    os << "}\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// structural equality
// ---------------------------------------------------------------------------

namespace {

struct Differ {
  std::string why;
  bool same = true;

  bool mark(const std::string &msg) {
    if (same) why = msg;
    same = false;
    return false;
  }
  bool terms(const Term &a, const Term &b, const std::string &where) {
    if (a.null() != b.null()) return mark(where + ": one side missing a term");
    if (!a.null() && !term_equal(a, b)) return mark(where + ": terms differ");
    return true;
  }
  template <typename T>
  bool plain(const T &a, const T &b, const std::string &where) {
    if (!(a == b)) return mark(where + " differs");
    return true;
  }
};

}  // namespace

bool unit_equal(const SourceUnit &a, const SourceUnit &b, std::string *why) {
  Differ d;
  auto count = [&](size_t x, size_t y, const char *what) {
    if (x != y) d.mark(std::string(what) + " count differs");
    return x == y;
  };

  if (count(a.enums.size(), b.enums.size(), "enum"))
    for (size_t i = 0; i < a.enums.size(); ++i) {
      d.plain(a.enums[i].family, b.enums[i].family, "enum family");
      d.plain(a.enums[i].members, b.enums[i].members, "enum " + a.enums[i].family);
    }
  d.plain(a.consts, b.consts, "consts");

  if (count(a.scenarios.size(), b.scenarios.size(), "scenario"))
    for (size_t i = 0; i < a.scenarios.size(); ++i) {
      const Scenario &x = a.scenarios[i], &y = b.scenarios[i];
      std::string w = "scenario " + x.name;
      d.plain(x.name, y.name, "scenario name");
      d.plain(x.attrs, y.attrs, w + " attrs");
      if (x.bindings.size() != y.bindings.size()) {
        d.mark(w + " binding count differs");
      } else {
        auto it = y.bindings.begin();
        for (const auto &[sig, val] : x.bindings) {
          d.plain(sig, it->first, w + " binding name");
          d.terms(val, it->second, w + " binding " + sig);
          ++it;
        }
      }
    }

  if (count(a.systems.size(), b.systems.size(), "system"))
    for (size_t i = 0; i < a.systems.size(); ++i) {
      const SreSystem &x = a.systems[i], &y = b.systems[i];
      std::string w = "system " + x.name;
      d.plain(x.name, y.name, "system name");
      d.plain(x.variables, y.variables, w + " variables");
      d.plain(x.inputs, y.inputs, w + " inputs");
      d.plain(x.controls, y.controls, w + " controls");
      d.plain(x.outputs, y.outputs, w + " outputs");
      d.plain(x.attrs, y.attrs, w + " attrs");
      if (x.equations.size() != y.equations.size()) {
        d.mark(w + " equation count differs");
      } else {
        for (size_t k = 0; k < x.equations.size(); ++k) {
          d.plain(x.equations[k].target, y.equations[k].target, w + " equation target");
          d.terms(x.equations[k].body, y.equations[k].body,
                  w + " equation " + x.equations[k].target);
        }
      }
      if (x.initial.size() != y.initial.size()) {
        d.mark(w + " initial-condition count differs");
      } else {
        auto it = y.initial.begin();
        for (const auto &[key, val] : x.initial) {
          if (key != it->first) {
            d.mark(w + " initial-condition key differs");
            break;
          }
          d.terms(val, it->second, w + " init " + key.first);
          ++it;
        }
      }
      if (x.sorts.size() != y.sorts.size()) {
        d.mark(w + " sort count differs");
      } else {
        auto it = y.sorts.begin();
        for (const auto &[sig, s] : x.sorts) {
          d.plain(sig, it->first, w + " sort name");
          if (!(s == it->second)) d.mark(w + " sort of " + sig + " differs");
          ++it;
        }
      }
    }

  if (count(a.rulesets.size(), b.rulesets.size(), "ruleset"))
    for (size_t i = 0; i < a.rulesets.size(); ++i) {
      const RulesetDecl &x = a.rulesets[i], &y = b.rulesets[i];
      d.plain(x.name, y.name, "ruleset name");
      if (x.rules.size() != y.rules.size()) {
        d.mark("ruleset " + x.name + " rule count differs");
      } else {
        for (size_t k = 0; k < x.rules.size(); ++k) {
          d.terms(x.rules[k].first, y.rules[k].first, "ruleset " + x.name + " pattern");
          d.terms(x.rules[k].second, y.rules[k].second, "ruleset " + x.name + " replacement");
        }
      }
    }

  if (count(a.properties.size(), b.properties.size(), "property"))
    for (size_t i = 0; i < a.properties.size(); ++i) {
      const Property &x = a.properties[i], &y = b.properties[i];
      std::string w = "property " + x.name;
      d.plain(x.name, y.name, "property name");
      if (x.category != y.category) d.mark(w + " category differs");
      d.plain(x.horizon, y.horizon, w + " horizon");
      if (x.guard.has_value() != y.guard.has_value()) {
        d.mark(w + " guard presence differs");
      } else if (x.guard) {
        d.plain(x.guard->control, y.guard->control, w + " guard control");
        d.terms(x.guard->value, y.guard->value, w + " guard value");
      }
      if (x.quant.has_value() != y.quant.has_value()) {
        d.mark(w + " quantifier presence differs");
      } else if (x.quant) {
        d.plain(x.quant->index, y.quant->index, w + " index name");
        d.terms(x.quant->lo, y.quant->lo, w + " lower bound");
        d.terms(x.quant->hi, y.quant->hi, w + " upper bound");
      }
      d.terms(x.body, y.body, w + " body");
    }

  if (count(a.jobs.size(), b.jobs.size(), "job"))
    for (size_t i = 0; i < a.jobs.size(); ++i) {
      const JobDecl &x = a.jobs[i], &y = b.jobs[i];
      std::string w = "job " + x.name;
      d.plain(x.name, y.name, "job name");
      d.plain(x.spec_system, y.spec_system, w + " spec system");
      d.plain(x.impl_system, y.impl_system, w + " impl system");
      d.plain(x.k_spec, y.k_spec, w + " spec cycles");
      d.plain(x.k_imp, y.k_imp, w + " impl cycles");
      d.plain(x.renames, y.renames, w + " renames");
      d.plain(x.abstract_ruleset, y.abstract_ruleset, w + " abstraction ruleset");
      d.plain(x.all_scenarios, y.all_scenarios, w + " scenarios-all flag");
      d.plain(x.scenario_names, y.scenario_names, w + " scenario names");
      d.plain(x.compares, y.compares, w + " compare pairs");
    }

  if (why) *why = d.why;
  return d.same;
}

}  // namespace sre
