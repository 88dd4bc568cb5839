#include "sre/wimax.hpp"

#include <algorithm>
#include <stdexcept>

namespace sre {

namespace {

constexpr const char *kInvalid = "INVALID_DATA";
constexpr const char *kRateFamily = "wm_rate";
constexpr const char *kModFamily = "wm_mod";
constexpr int kFifoDepth = 4;
constexpr int kIlvColumns = 4;

Term invalid_atom() { return Term::atom(kInvalid); }
Term rate_atom(const std::string &name) { return Term::atom(name, kRateFamily); }
Term mod_atom(const std::string &name) { return Term::atom(name, kModFamily); }

// --- bit-vector plumbing ----------------------------------------------------

std::optional<std::vector<bool>> as_bits(const Value &v) {
  if (v.tag != Value::Tag::Tuple) return std::nullopt;
  std::vector<bool> out;
  out.reserve(v.elems.size());
  for (const Value &e : v.elems) {
    if (!e.is_bool()) return std::nullopt;
    out.push_back(e.b);
  }
  return out;
}

Value from_bits(const std::vector<bool> &bits) {
  std::vector<Value> es;
  es.reserve(bits.size());
  for (bool b : bits) es.push_back(Value::boolean(b));
  return Value::tuple(std::move(es));
}

bool is_invalid_value(const Value &v) { return v.tag == Value::Tag::Atom && v.atom == kInvalid; }

// --- block cores ------------------------------------------------------------

bool rand_ref_bit(int i) { return ((0xB4 >> (i % 8)) & 1) != 0; }
bool rand_ref_bug_bit(int i) { return ((0xB4 >> ((i + 1) % 8)) & 1) != 0; }

// kept coded-bit positions for a rate, partial final group included
std::vector<int> punct_positions(const RateSpec &r, int len) {
  std::vector<int> out;
  for (int g = 0; g * r.group_in < len; ++g)
    for (int k : r.keep) {
      int idx = g * r.group_in + k;
      if (idx < len) out.push_back(idx);
    }
  return out;
}

// rate-1/2 variant swapping the first two kept bits of each full group
std::vector<int> punct_positions_r12_bug(int len) {
  const RateSpec &r = rate_spec("WMRATE12");
  std::vector<int> out;
  for (int g = 0; g * r.group_in < len; ++g) {
    std::vector<int> grp;
    for (int k : r.keep) {
      int idx = g * r.group_in + k;
      if (idx < len) grp.push_back(idx);
    }
    if (grp.size() >= 2) std::swap(grp[0], grp[1]);
    out.insert(out.end(), grp.begin(), grp.end());
  }
  return out;
}

// column-read order of a 4-column row-major block, bijective for every length
std::vector<int> ilv_positions(int len) {
  std::vector<int> out;
  for (int c = 0; c < kIlvColumns; ++c)
    for (int idx = c; idx < len; idx += kIlvColumns) out.push_back(idx);
  return out;
}

std::vector<bool> cc_bits(const std::vector<bool> &in) {
  std::vector<bool> out;
  out.reserve(2 * in.size());
  bool s1 = false, s2 = false;
  for (bool x : in) {
    out.push_back(x ^ s1 ^ s2);  // generator 111
    out.push_back(x ^ s2);       // generator 101
    s2 = s1;
    s1 = x;
  }
  return out;
}

TermList cc_terms(const TermList &in) {
  TermList out;
  out.reserve(2 * in.size());
  Term s1 = Term::boolean(false), s2 = Term::boolean(false);
  for (const Term &x : in) {
    out.push_back(Term::lxor({x, s1, s2}));
    out.push_back(Term::lxor({x, s2}));
    s2 = s1;
    s1 = x;
  }
  return out;
}

int mod_bits(const std::string &mod) {
  if (mod == "WMBPSK") return 1;
  if (mod == "WMQPSK") return 2;
  if (mod == "WMQAM16") return 4;
  throw std::invalid_argument("unknown modulation " + mod);
}

Value map_values(const std::vector<bool> &bits, int s) {
  std::vector<Value> syms;
  for (size_t g = 0; g * s < bits.size(); ++g) {
    long v = 0;
    for (int u = 0; u < s; ++u) {
      size_t i = g * static_cast<size_t>(s) + static_cast<size_t>(u);
      if (i < bits.size() && bits[i]) v += 1L << u;
    }
    syms.push_back(Value::num(Rational(v)));
  }
  return Value::tuple(std::move(syms));
}

Term map_terms(const TermList &bits, int s) {
  TermList syms;
  for (size_t g = 0; g * s < bits.size(); ++g) {
    TermList parts;
    for (int u = 0; u < s; ++u) {
      size_t i = g * static_cast<size_t>(s) + static_cast<size_t>(u);
      if (i >= bits.size()) break;
      parts.push_back(Term::mul(
          {Term::number(1L << u), Term::ite(bits[i], Term::number(1), Term::number(0))}));
    }
    syms.push_back(Term::add(std::move(parts)));
  }
  return Term::tuple(std::move(syms));
}

// --- registry ---------------------------------------------------------------

// word->word function from a per-length position map
FuncDef select_fn(std::string name, std::vector<int> (*positions)(int)) {
  FuncDef d;
  d.name = name;
  d.arity = 1;
  d.numeric = [positions](const std::vector<Value> &args) -> std::optional<Value> {
    if (args.size() != 1) return std::nullopt;
    if (is_invalid_value(args[0])) return args[0];
    auto bits = as_bits(args[0]);
    if (!bits) return std::nullopt;
    std::vector<bool> out;
    for (int p : positions(static_cast<int>(bits->size())))
      out.push_back((*bits)[static_cast<size_t>(p)]);
    return from_bits(out);
  };
  d.symbolic = [positions](const TermList &args) -> std::optional<Term> {
    if (args.size() != 1 || args[0].kind() != Kind::Tuple) return std::nullopt;
    TermList out;
    for (int p : positions(static_cast<int>(args[0].arity())))
      out.push_back(args[0].kid(static_cast<size_t>(p)));
    return Term::tuple(std::move(out));
  };
  return d;
}

FuncDef rand_like_fn(std::string name, bool (*ref)(int)) {
  FuncDef d;
  d.name = name;
  d.arity = 1;
  d.numeric = [ref](const std::vector<Value> &args) -> std::optional<Value> {
    if (args.size() != 1) return std::nullopt;
    if (is_invalid_value(args[0])) return args[0];
    auto bits = as_bits(args[0]);
    if (!bits) return std::nullopt;
    std::vector<bool> out;
    out.reserve(bits->size());
    for (size_t i = 0; i < bits->size(); ++i)
      out.push_back((*bits)[i] ^ ref(static_cast<int>(i)));
    return from_bits(out);
  };
  d.symbolic = [ref](const TermList &args) -> std::optional<Term> {
    if (args.size() != 1 || args[0].kind() != Kind::Tuple) return std::nullopt;
    TermList out;
    out.reserve(args[0].arity());
    for (size_t i = 0; i < args[0].arity(); ++i) {
      const Term &b = args[0].kid(i);
      out.push_back(ref(static_cast<int>(i)) ? Term::lnot(b) : b);
    }
    return Term::tuple(std::move(out));
  };
  return d;
}

FuncDef map_fn(std::string name, int s) {
  FuncDef d;
  d.name = name;
  d.arity = 1;
  d.numeric = [s](const std::vector<Value> &args) -> std::optional<Value> {
    if (args.size() != 1) return std::nullopt;
    if (is_invalid_value(args[0])) return args[0];
    auto bits = as_bits(args[0]);
    if (!bits) return std::nullopt;
    return map_values(*bits, s);
  };
  d.symbolic = [s](const TermList &args) -> std::optional<Term> {
    if (args.size() != 1 || args[0].kind() != Kind::Tuple) return std::nullopt;
    return map_terms(args[0].kids(), s);
  };
  return d;
}

std::vector<int> punct_r12_positions(int len) { return punct_positions(rate_spec("WMRATE12"), len); }
std::vector<int> punct_r23_positions(int len) { return punct_positions(rate_spec("WMRATE23"), len); }
std::vector<int> punct_r34_positions(int len) { return punct_positions(rate_spec("WMRATE34"), len); }

FuncRegistry build_registry() {
  FuncRegistry reg;
  reg.add(rand_like_fn("rand_fn", rand_ref_bit));
  reg.add(rand_like_fn("rand_fn_bug", rand_ref_bug_bit));

  FuncDef cc;
  cc.name = "cc_fn";
  cc.arity = 1;
  cc.numeric = [](const std::vector<Value> &args) -> std::optional<Value> {
    if (args.size() != 1) return std::nullopt;
    if (is_invalid_value(args[0])) return args[0];
    auto bits = as_bits(args[0]);
    if (!bits) return std::nullopt;
    return from_bits(cc_bits(*bits));
  };
  cc.symbolic = [](const TermList &args) -> std::optional<Term> {
    if (args.size() != 1 || args[0].kind() != Kind::Tuple) return std::nullopt;
    return Term::tuple(cc_terms(args[0].kids()));
  };
  reg.add(std::move(cc));

  reg.add(select_fn("punct_r12", punct_r12_positions));
  reg.add(select_fn("punct_r23", punct_r23_positions));
  reg.add(select_fn("punct_r34", punct_r34_positions));
  reg.add(select_fn("punct_r12_bug", punct_positions_r12_bug));
  reg.add(select_fn("ilv_fn", ilv_positions));

  FuncDef rep;
  rep.name = "rep2_fn";
  rep.arity = 1;
  rep.numeric = [](const std::vector<Value> &args) -> std::optional<Value> {
    if (args.size() != 1) return std::nullopt;
    if (is_invalid_value(args[0])) return args[0];
    if (args[0].tag != Value::Tag::Tuple) return std::nullopt;
    std::vector<Value> es = args[0].elems;
    es.insert(es.end(), args[0].elems.begin(), args[0].elems.end());
    return Value::tuple(std::move(es));
  };
  rep.symbolic = [](const TermList &args) -> std::optional<Term> {
    if (args.size() != 1 || args[0].kind() != Kind::Tuple) return std::nullopt;
    TermList es = args[0].kids();
    es.insert(es.end(), args[0].kids().begin(), args[0].kids().end());
    return Term::tuple(std::move(es));
  };
  reg.add(std::move(rep));

  reg.add(map_fn("map_bpsk", 1));
  reg.add(map_fn("map_qpsk", 2));
  reg.add(map_fn("map_qam16", 4));

  FuncDef frame;
  frame.name = "to_frame";
  frame.arity = 1;
  // numeric identity marks the representation change; deliberately no
  // symbolic expansion, so the marker survives symbolic traces until an
  // abstraction eliminates it
  frame.numeric = [](const std::vector<Value> &args) -> std::optional<Value> {
    if (args.size() != 1) return std::nullopt;
    return args[0];
  };
  reg.add(std::move(frame));

  FuncDef ref;
  ref.name = "rand_ref";
  ref.arity = 1;
  ref.numeric = [](const std::vector<Value> &args) -> std::optional<Value> {
    if (args.size() != 1 || !args[0].is_num()) return std::nullopt;
    if (boost::multiprecision::denominator(args[0].q) != 1 || args[0].q < 0)
      return std::nullopt;
    long i = static_cast<long>(boost::multiprecision::numerator(args[0].q));
    return Value::boolean(rand_ref_bit(static_cast<int>(i)));
  };
  reg.add(std::move(ref));
  return reg;
}

}  // namespace

// --- public tables ----------------------------------------------------------

const char *to_cstr(WimaxLevel level) {
  switch (level) {
    case WimaxLevel::FL: return "fl";
    case WimaxLevel::PTL8: return "ptl8";
    case WimaxLevel::PTL4: return "ptl4";
  }
  return "?";
}

std::optional<WimaxLevel> wimax_level_from(const std::string &s) {
  if (s == "fl" || s == "FL" || s == "wimax_fl") return WimaxLevel::FL;
  if (s == "ptl8" || s == "PTL8" || s == "wimax_ptl8") return WimaxLevel::PTL8;
  if (s == "ptl4" || s == "PTL4" || s == "wimax_ptl4") return WimaxLevel::PTL4;
  return std::nullopt;
}

int RateSpec::punctured_len(int coded_len) const {
  return static_cast<int>(punct_positions(*this, coded_len).size());
}

const RateSpec &rate_spec(const std::string &atom) {
  static const std::vector<RateSpec> specs = {
      {"WMRATE12", 2, {0, 1}},
      {"WMRATE23", 4, {0, 1, 3}},
      {"WMRATE34", 6, {0, 1, 3, 4}},
  };
  for (const RateSpec &r : specs)
    if (r.atom == atom) return r;
  throw std::invalid_argument("unknown code rate " + atom);
}

int ModeSpec::bits_per_symbol() const { return mod_bits(modulation); }
int ModeSpec::punct_len(int width) const { return rate_spec(rate).punctured_len(coded_len(width)); }
int ModeSpec::rep_len(int width) const { return punct_len(width) * repetition; }
int ModeSpec::symbol_count(int width) const {
  int s = bits_per_symbol();
  return (rep_len(width) + s - 1) / s;
}

Scenario ModeSpec::scenario(int width) const {
  Scenario sc;
  sc.name = name;
  sc.bindings["rate_ctrl"] = rate_atom(rate);
  sc.bindings["mod_ctrl"] = mod_atom(modulation);
  sc.bindings["rep_ctrl"] = Term::number(repetition);
  sc.bindings["in.valid"] = Term::boolean(true);
  sc.attrs["width"] = width;
  sc.attrs["coded_len"] = coded_len(width);
  sc.attrs["punct_len"] = punct_len(width);
  sc.attrs["rep_len"] = rep_len(width);
  sc.attrs["symbol_count"] = symbol_count(width);
  sc.attrs["punct_groups"] = coded_len(width) / rate_spec(rate).group_in;
  sc.attrs["bits_per_symbol"] = bits_per_symbol();
  return sc;
}

const std::vector<ModeSpec> &mode_table() {
  static const std::vector<ModeSpec> modes = {
      {"mode_0", "WMRATE12", "WMBPSK", 2},
      {"mode_1", "WMRATE12", "WMBPSK", 1},
      {"mode_2", "WMRATE12", "WMQAM16", 1},
      {"mode_3", "WMRATE23", "WMQPSK", 1},
      {"mode_4", "WMRATE23", "WMQAM16", 1},
      {"mode_5", "WMRATE34", "WMQPSK", 1},
      {"mode_6", "WMRATE34", "WMQAM16", 1},
  };
  return modes;
}

const ModeSpec &mode_by_name(const std::string &name) {
  for (const ModeSpec &m : mode_table())
    if (m.name == name) return m;
  throw std::invalid_argument("unknown mode " + name);
}

std::vector<Scenario> all_scenarios(int width) {
  std::vector<Scenario> out;
  for (const ModeSpec &m : mode_table()) out.push_back(m.scenario(width));
  return out;
}

std::vector<Scenario> single_scenario(int width) {
  return {mode_table().front().scenario(width)};
}

const FuncRegistry &wimax_registry() {
  static const FuncRegistry reg = build_registry();
  return reg;
}

std::vector<bool> randomizer_ref(int width) {
  std::vector<bool> out;
  out.reserve(static_cast<size_t>(width));
  for (int i = 0; i < width; ++i) out.push_back(rand_ref_bit(i));
  return out;
}

// --- numeric oracle (independent constructions) -----------------------------

std::vector<Value> oracle_chain(const std::vector<bool> &word, const ModeSpec &mode) {
  static const int pat[8] = {0, 0, 1, 0, 1, 1, 0, 1};  // 0xB4, LSB first
  std::vector<bool> r(word.size());
  for (size_t i = 0; i < word.size(); ++i) r[i] = word[i] ^ (pat[i % 8] == 1);

  // coder taps written over the raw stream window instead of a register pair
  std::vector<bool> coded(2 * r.size());
  for (size_t i = 0; i < r.size(); ++i) {
    bool b0 = r[i];
    bool b1 = i >= 1 ? r[i - 1] : false;
    bool b2 = i >= 2 ? r[i - 2] : false;
    coded[2 * i] = b0 ^ b1 ^ b2;
    coded[2 * i + 1] = b0 ^ b2;
  }

  const RateSpec &rs = rate_spec(mode.rate);
  std::vector<bool> kept;
  for (size_t i = 0; i < coded.size(); ++i) {
    int in_group = static_cast<int>(i) % rs.group_in;
    if (std::find(rs.keep.begin(), rs.keep.end(), in_group) != rs.keep.end())
      kept.push_back(coded[i]);
  }

  // 4-column matrix, written row-wise, read column-wise
  size_t nrows = (kept.size() + kIlvColumns - 1) / kIlvColumns;
  std::vector<bool> ilv;
  for (int c = 0; c < kIlvColumns; ++c)
    for (size_t row = 0; row < nrows; ++row) {
      size_t idx = row * kIlvColumns + static_cast<size_t>(c);
      if (idx < kept.size()) ilv.push_back(kept[idx]);
    }

  std::vector<bool> rep = ilv;
  if (mode.repetition == 2) rep.insert(rep.end(), ilv.begin(), ilv.end());

  int s = mode.bits_per_symbol();
  std::vector<Value> syms;
  for (size_t g = 0; g * static_cast<size_t>(s) < rep.size(); ++g) {
    long v = 0;
    for (int u = 0; u < s; ++u) {
      size_t i = g * static_cast<size_t>(s) + static_cast<size_t>(u);
      if (i < rep.size() && rep[i]) v += 1L << u;
    }
    syms.push_back(Value::num(Rational(v)));
  }
  return syms;
}

// --- model construction -----------------------------------------------------

namespace {

Term ctrl(const std::string &name) { return Term::var(name, 0); }

Term punct_dispatch(const Term &word) {
  return Term::ite(
      Term::cmp(CmpOp::Eq, ctrl("rate_ctrl"), rate_atom("WMRATE12")),
      Term::func("punct_r12", {word}),
      Term::ite(Term::cmp(CmpOp::Eq, ctrl("rate_ctrl"), rate_atom("WMRATE23")),
                Term::func("punct_r23", {word}), Term::func("punct_r34", {word})));
}

Term mod_dispatch(const Term &word) {
  return Term::ite(
      Term::cmp(CmpOp::Eq, ctrl("mod_ctrl"), mod_atom("WMBPSK")),
      Term::func("map_bpsk", {word}),
      Term::ite(Term::cmp(CmpOp::Eq, ctrl("mod_ctrl"), mod_atom("WMQPSK")),
                Term::func("map_qpsk", {word}), Term::func("map_qam16", {word})));
}

Term rep_dispatch(const Term &word) {
  return Term::ite(Term::cmp(CmpOp::Eq, ctrl("rep_ctrl"), Term::number(2)),
                   Term::func("rep2_fn", {word}), word);
}

void add_var(SreSystem &sys, const std::string &name, Sort sort, Term body) {
  sys.variables.push_back(name);
  sys.sorts[name] = std::move(sort);
  sys.equations.push_back({name, std::move(body)});
}

void add_controls(SreSystem &sys) {
  sys.controls = {"rate_ctrl", "mod_ctrl", "rep_ctrl", "in.valid"};
  sys.sorts["rate_ctrl"] = Sort::enum_family(kRateFamily);
  sys.sorts["mod_ctrl"] = Sort::enum_family(kModFamily);
  sys.sorts["rep_ctrl"] = Sort::num(NumDomain::Nat);
  sys.sorts["in.valid"] = Sort::boolean();
}

Term not_invalid(const std::string &var) {
  return Term::cmp(CmpOp::Ne, Term::var(var, 0), invalid_atom());
}

// six equations of one bounded fall-through FIFO; enq_valid/enq_data/
// deq_ready are caller terms (deq_ready null = always ready)
void add_fifo(SreSystem &sys, const std::string &f, const Term &enq_data,
              const Term &enq_valid, const Term &deq_ready, int depth) {
  Term count1 = Term::var(f + ".count", 1);
  Term enq_fire =
      Term::land({enq_valid, Term::cmp(CmpOp::Lt, count1, Term::number(depth))});
  Term nonempty = Term::cmp(CmpOp::Lt, Term::number(0), count1);
  Term deq_base = Term::lor({nonempty, enq_fire});
  Term deq_fire = deq_ready.null() ? deq_base : Term::land({deq_ready, deq_base});
  Term one = Term::number(1);
  Term zero = Term::number(0);

  add_var(sys, f + ".out", Sort::word(),
          Term::ite(nonempty, Term::var(f + ".d0", 1),
                    Term::ite(enq_fire, enq_data, invalid_atom())));
  add_var(sys, f + ".count", Sort::num(NumDomain::Nat),
          Term::arith(ArithOp::Sub,
                      {Term::add({count1, Term::ite(enq_fire, one, zero)}),
                       Term::ite(deq_fire, one, zero)}));
  for (int i = 0; i < depth; ++i) {
    Term next_slot = i + 1 < depth ? Term::var(f + ".d" + std::to_string(i + 1), 1)
                                   : invalid_atom();
    Term shift_in = Term::ite(
        Term::land({enq_fire, Term::cmp(CmpOp::Eq, count1, Term::number(i + 1))}),
        enq_data, next_slot);
    Term write_in = Term::ite(
        Term::land({enq_fire, Term::lnot(deq_fire),
                    Term::cmp(CmpOp::Eq, count1, Term::number(i))}),
        enq_data, Term::var(f + ".d" + std::to_string(i), 1));
    add_var(sys, f + ".d" + std::to_string(i), Sort::word(),
            Term::ite(Term::land({deq_fire, nonempty}), shift_in, write_in));
  }
  sys.initial[{f + ".count", 0}] = zero;
  for (int i = 0; i < depth; ++i)
    sys.initial[{f + ".d" + std::to_string(i), 0}] = invalid_atom();
}

SreSystem build_fl(int width) {
  SreSystem sys;
  sys.name = "wimax_fl";
  sys.attrs["width"] = width;
  sys.inputs = {"in.word"};
  sys.sorts["in.word"] = Sort::word(width);
  add_controls(sys);

  Term word = Term::var("in.word", 0);
  add_var(sys, "rand.out", Sort::word(),
          Term::ite(ctrl("in.valid"), Term::func("rand_fn", {word}), invalid_atom()));
  add_var(sys, "cc.out", Sort::word(), Term::func("cc_fn", {Term::var("rand.out", 0)}));
  add_var(sys, "punct.out", Sort::word(), punct_dispatch(Term::var("cc.out", 0)));
  add_var(sys, "ilv.out", Sort::word(), Term::func("ilv_fn", {Term::var("punct.out", 0)}));
  add_var(sys, "rep.out", Sort::word(), rep_dispatch(Term::var("ilv.out", 0)));
  add_var(sys, "map.out", Sort::word(), mod_dispatch(Term::var("rep.out", 0)));
  add_var(sys, "out.frame", Sort::word(), Term::var("map.out", 0));
  sys.outputs = {"out.frame"};
  return sys;
}

SreSystem build_ptl8(int width) {
  SreSystem sys;
  sys.name = "wimax_ptl8";
  sys.attrs["width"] = width;
  sys.attrs["fifo_depth"] = kFifoDepth;
  sys.inputs = {"in.word"};
  sys.sorts["in.word"] = Sort::word(width);
  add_controls(sys);

  add_var(sys, "inp.out", Sort::word(),
          Term::ite(ctrl("in.valid"), Term::var("in.word", 0), invalid_atom()));
  add_fifo(sys, "f0", Term::var("inp.out", 0), ctrl("in.valid"), Term(), kFifoDepth);
  add_var(sys, "rand.out", Sort::word(), Term::func("rand_fn", {Term::var("f0.out", 0)}));
  add_fifo(sys, "f1", Term::var("rand.out", 0), not_invalid("rand.out"), Term(), kFifoDepth);
  add_var(sys, "cc.out", Sort::word(), Term::func("cc_fn", {Term::var("f1.out", 0)}));
  add_fifo(sys, "f2", Term::var("cc.out", 0), not_invalid("cc.out"), Term(), kFifoDepth);
  add_var(sys, "punct.out", Sort::word(), punct_dispatch(Term::var("f2.out", 0)));
  add_fifo(sys, "f3", Term::var("punct.out", 0), not_invalid("punct.out"), Term(),
           kFifoDepth);
  add_var(sys, "ilv.out", Sort::word(), Term::func("ilv_fn", {Term::var("f3.out", 0)}));
  add_fifo(sys, "f4", Term::var("ilv.out", 0), not_invalid("ilv.out"), Term(), kFifoDepth);
  add_var(sys, "rep.out", Sort::word(), rep_dispatch(Term::var("f4.out", 0)));
  add_fifo(sys, "f5", Term::var("rep.out", 0), not_invalid("rep.out"), Term(), kFifoDepth);
  add_var(sys, "map.out", Sort::word(), mod_dispatch(Term::var("f5.out", 0)));
  add_fifo(sys, "f6", Term::var("map.out", 0), not_invalid("map.out"), Term(), kFifoDepth);
  add_var(sys, "out.frame", Sort::word(), Term::func("to_frame", {Term::var("f6.out", 0)}));
  sys.outputs = {"out.frame"};
  return sys;
}

Term grant(int i) { return Term::var("sched.g" + std::to_string(i), 0); }

void add_exec_counter(SreSystem &sys, int i) {
  std::string name = "u" + std::to_string(i) + ".exec";
  add_var(sys, name, Sort::num(NumDomain::Nat),
          Term::add({Term::var(name, 1),
                     Term::ite(grant(i), Term::number(1), Term::number(0))}));
  sys.initial[{name, 0}] = Term::number(0);
}

// granted units run their function this cycle, others hold last cycle's value
Term held(const std::string &var, int unit, Term body) {
  return Term::ite(grant(unit), std::move(body), Term::var(var, 1));
}

SreSystem build_ptl4(int width) {
  SreSystem sys;
  sys.name = "wimax_ptl4";
  sys.attrs["width"] = width;
  sys.attrs["fifo_depth"] = kFifoDepth;
  sys.attrs["units"] = 4;
  sys.inputs = {"in.word"};
  sys.sorts["in.word"] = Sort::word(width);
  add_controls(sys);

  // one full grant round ripples through within the cycle
  add_var(sys, "sched.g1", Sort::boolean(), ctrl("in.valid"));
  add_var(sys, "u1.rand_out", Sort::word(),
          held("u1.rand_out", 1, Term::func("rand_fn", {Term::var("in.word", 0)})));
  sys.initial[{"u1.rand_out", 0}] = invalid_atom();
  add_fifo(sys, "pf0", Term::var("u1.rand_out", 0),
           Term::land({grant(1), not_invalid("u1.rand_out")}), Term(), kFifoDepth);

  add_var(sys, "sched.g2", Sort::boolean(), grant(1));
  add_var(sys, "u2.cc_out", Sort::word(),
          held("u2.cc_out", 2, Term::func("cc_fn", {Term::var("pf0.out", 0)})));
  sys.initial[{"u2.cc_out", 0}] = invalid_atom();
  add_var(sys, "u2.punct_out", Sort::word(),
          held("u2.punct_out", 2, punct_dispatch(Term::var("u2.cc_out", 0))));
  sys.initial[{"u2.punct_out", 0}] = invalid_atom();
  add_fifo(sys, "pf1", Term::var("u2.punct_out", 0),
           Term::land({grant(2), not_invalid("u2.punct_out")}), Term(), kFifoDepth);

  add_var(sys, "sched.g3", Sort::boolean(), grant(2));
  add_var(sys, "u3.ilv_out", Sort::word(),
          held("u3.ilv_out", 3, Term::func("ilv_fn", {Term::var("pf1.out", 0)})));
  sys.initial[{"u3.ilv_out", 0}] = invalid_atom();
  add_var(sys, "u3.rep_out", Sort::word(),
          held("u3.rep_out", 3, rep_dispatch(Term::var("u3.ilv_out", 0))));
  sys.initial[{"u3.rep_out", 0}] = invalid_atom();
  add_fifo(sys, "pf2", Term::var("u3.rep_out", 0),
           Term::land({grant(3), not_invalid("u3.rep_out")}), Term(), kFifoDepth);

  add_var(sys, "sched.g4", Sort::boolean(), grant(3));
  add_var(sys, "u4.map_out", Sort::word(),
          held("u4.map_out", 4, mod_dispatch(Term::var("pf2.out", 0))));
  sys.initial[{"u4.map_out", 0}] = invalid_atom();
  add_var(sys, "out.frame", Sort::word(),
          held("out.frame", 4, Term::func("to_frame", {Term::var("u4.map_out", 0)})));
  sys.initial[{"out.frame", 0}] = invalid_atom();

  add_var(sys, "sched.round", Sort::num(NumDomain::Nat),
          Term::add({Term::var("sched.round", 1), Term::number(1)}));
  sys.initial[{"sched.round", 0}] = Term::number(0);
  for (int i = 1; i <= 4; ++i) add_exec_counter(sys, i);

  sys.outputs = {"out.frame"};
  return sys;
}

}  // namespace

SreSystem build_model(WimaxLevel level, int width) {
  switch (level) {
    case WimaxLevel::FL: return build_fl(width);
    case WimaxLevel::PTL8: return build_ptl8(width);
    case WimaxLevel::PTL4: return build_ptl4(width);
  }
  throw std::invalid_argument("unknown model level");
}

SreSystem build_fifo_model(int depth) {
  SreSystem sys;
  sys.name = "fifo";
  sys.attrs["depth"] = depth;
  sys.inputs = {"enq.data", "enq.valid", "deq.ready"};
  sys.sorts["enq.data"] = Sort::word();
  sys.sorts["enq.valid"] = Sort::boolean();
  sys.sorts["deq.ready"] = Sort::boolean();
  add_fifo(sys, "f", Term::var("enq.data", 0), Term::var("enq.valid", 0),
           Term::var("deq.ready", 0), depth);
  sys.outputs = {"f.out"};
  return sys;
}

SreSystem build_scheduler_model() {
  SreSystem sys;
  sys.name = "scheduler";
  sys.inputs = {"in.valid"};
  sys.sorts["in.valid"] = Sort::boolean();
  add_var(sys, "sched.g1", Sort::boolean(), Term::var("in.valid", 0));
  for (int i = 2; i <= 4; ++i)
    add_var(sys, "sched.g" + std::to_string(i), Sort::boolean(), grant(i - 1));
  add_var(sys, "sched.round", Sort::num(NumDomain::Nat),
          Term::add({Term::var("sched.round", 1), Term::number(1)}));
  sys.initial[{"sched.round", 0}] = Term::number(0);
  for (int i = 1; i <= 4; ++i) add_exec_counter(sys, i);
  sys.outputs = {"sched.round"};
  return sys;
}

std::map<std::string, Term> symbolic_inputs(int width) {
  TermList bits;
  bits.reserve(static_cast<size_t>(width));
  for (int i = 0; i < width; ++i) bits.push_back(Term::input("b" + std::to_string(i)));
  return {{"in.word", Term::tuple(std::move(bits))}};
}

std::map<std::string, Term> concrete_inputs(const std::vector<bool> &word) {
  TermList bits;
  bits.reserve(word.size());
  for (bool b : word) bits.push_back(Term::boolean(b));
  return {{"in.word", Term::tuple(std::move(bits))}};
}

Assignment bit_assignment(const std::vector<bool> &word) {
  Assignment a;
  for (size_t i = 0; i < word.size(); ++i)
    a["b" + std::to_string(i)] = Value::boolean(word[i]);
  return a;
}

Abstraction wimax_abstraction(WimaxLevel level) {
  std::map<std::string, std::string> rename;
  if (level == WimaxLevel::PTL4) {
    rename = {
        {"u1.rand_out", "rand.out"}, {"u2.cc_out", "cc.out"},
        {"u2.punct_out", "punct.out"}, {"u3.ilv_out", "ilv.out"},
        {"u3.rep_out", "rep.out"}, {"u4.map_out", "map.out"},
    };
  }
  return make_abstraction(std::move(rename), conversion_elimination({"to_frame"}));
}

// --- bug harness ------------------------------------------------------------

namespace {

Term map_term(const Term &t, const std::function<std::optional<Term>(const Term &)> &f) {
  if (auto r = f(t)) return *r;
  if (t.arity() == 0) return t;
  TermList kids;
  kids.reserve(t.arity());
  bool changed = false;
  for (const Term &k : t.kids()) {
    Term nk = map_term(k, f);
    if (!nk.same_node(k)) changed = true;
    kids.push_back(std::move(nk));
  }
  return changed ? t.with_kids(std::move(kids)) : t;
}

Term rename_calls(const Term &t, const std::string &from, const std::string &to) {
  return map_term(t, [&](const Term &x) -> std::optional<Term> {
    if (x.kind() == Kind::FuncApp && x.name() == from) {
      TermList kids;
      for (const Term &k : x.kids()) kids.push_back(rename_calls(k, from, to));
      return Term::func(to, std::move(kids));
    }
    return std::nullopt;
  });
}

Term swap_atom(const Term &t, const std::string &from, const std::string &to,
               const std::string &family) {
  return map_term(t, [&](const Term &x) -> std::optional<Term> {
    if (x.kind() == Kind::Atom && x.name() == from) return Term::atom(to, family);
    return std::nullopt;
  });
}

Term cut_ref(const Term &t, const std::string &producer) {
  return map_term(t, [&](const Term &x) -> std::optional<Term> {
    if (x.kind() == Kind::VarRef && x.name() == producer && x.offset() == 0)
      return invalid_atom();
    return std::nullopt;
  });
}

std::string punct_var(WimaxLevel level) {
  return level == WimaxLevel::PTL4 ? "u2.punct_out" : "punct.out";
}
std::string rand_var(WimaxLevel level) {
  return level == WimaxLevel::PTL4 ? "u1.rand_out" : "rand.out";
}
std::string cut_consumer_prefix(WimaxLevel level) {
  switch (level) {
    case WimaxLevel::FL: return "ilv.out";
    case WimaxLevel::PTL8: return "f3.";
    case WimaxLevel::PTL4: return "pf1.";
  }
  return "";
}

}  // namespace

const std::vector<BugSpec> &bug_catalog() {
  static const std::vector<BugSpec> bugs = {
      {"B1", "rate-1/2 puncturing swaps the first two kept bits of each group",
       {WimaxLevel::FL, WimaxLevel::PTL8, WimaxLevel::PTL4}},
      {"B2", "data line from the puncturing stage to its consumer is cut",
       {WimaxLevel::FL, WimaxLevel::PTL8, WimaxLevel::PTL4}},
      {"B3", "randomizer reference sequence rotated by one position",
       {WimaxLevel::FL, WimaxLevel::PTL8, WimaxLevel::PTL4}},
      {"B4", "puncturing dispatch tests the wrong rate first",
       {WimaxLevel::FL, WimaxLevel::PTL8, WimaxLevel::PTL4}},
  };
  return bugs;
}

const BugSpec *find_bug(const std::string &id) {
  for (const BugSpec &b : bug_catalog())
    if (b.id == id) return &b;
  return nullptr;
}

InjectResult inject(const SreSystem &model, WimaxLevel level, const std::string &bug_id) {
  const BugSpec *spec = find_bug(bug_id);
  if (!spec) throw std::invalid_argument("unknown bug " + bug_id);
  if (!spec->applicable.count(level))
    throw std::invalid_argument("bug " + bug_id + " does not apply to level " +
                                to_cstr(level));
  InjectResult res{model, ""};
  auto mutate = [&](const std::string &target, const std::function<Term(const Term &)> &f) {
    bool hit = false;
    for (Equation &eq : res.model.equations)
      if (eq.target == target) {
        eq.body = f(eq.body);
        hit = true;
      }
    if (!hit) throw std::logic_error("mutation target " + target + " not found");
  };

  if (bug_id == "B1") {
    std::string v = punct_var(level);
    mutate(v, [](const Term &b) { return rename_calls(b, "punct_r12", "punct_r12_bug"); });
    res.site = v + ": punct_r12 -> punct_r12_bug";
  } else if (bug_id == "B2") {
    std::string producer = punct_var(level);
    std::string prefix = cut_consumer_prefix(level);
    int hits = 0;
    for (Equation &eq : res.model.equations) {
      if (eq.target.rfind(prefix, 0) != 0) continue;
      Term nb = cut_ref(eq.body, producer);
      if (!nb.same_node(eq.body)) ++hits;
      eq.body = nb;
    }
    if (hits == 0) throw std::logic_error("cut site not found for " + producer);
    res.site = prefix + "*: " + producer + " -> " + kInvalid;
  } else if (bug_id == "B3") {
    std::string v = rand_var(level);
    mutate(v, [](const Term &b) { return rename_calls(b, "rand_fn", "rand_fn_bug"); });
    res.site = v + ": rand_fn -> rand_fn_bug";
  } else {  // B4
    std::string v = punct_var(level);
    mutate(v, [](const Term &b) { return swap_atom(b, "WMRATE12", "WMRATE23", kRateFamily); });
    res.site = v + ": dispatch condition WMRATE12 -> WMRATE23";
  }
  return res;
}

// --- bundled properties -----------------------------------------------------

std::vector<Property> wimax_properties(int width) {
  (void)width;  // bounds reference attributes, so properties are width-generic
  std::vector<Property> props;

  {
    Property p;
    p.name = "p1_no_invalid";
    p.category = Property::Category::Global;
    p.horizon = 1;
    TermList parts;
    for (const char *sig : {"rand.out", "cc.out", "punct.out", "ilv.out", "rep.out",
                            "map.out", "out.frame"})
      parts.push_back(Term::cmp(CmpOp::Ne, Term::var(sig, 0), invalid_atom()));
    p.body = Term::land(std::move(parts));
    props.push_back(std::move(p));
  }

  {
    Property p;
    p.name = "p2_randomizer_xor";
    p.category = Property::Category::Local;
    p.horizon = 1;
    p.quant = Property::Quantifier{
        "i", Term::number(0),
        Term::arith(ArithOp::Sub, {Term::input("width"), Term::number(1)})};
    Term i = Term::input("i");
    p.body = Term::cmp(
        CmpOp::Eq, Term::index(Term::var("rand.out", 0), i),
        Term::lxor({Term::index(Term::var("in.word", 0), i), Term::func("rand_ref", {i})}));
    props.push_back(std::move(p));
  }

  for (const char *rate : {"WMRATE12", "WMRATE23", "WMRATE34"}) {
    const RateSpec &rs = rate_spec(rate);
    Property p;
    std::string low = rate;
    std::transform(low.begin(), low.end(), low.begin(), ::tolower);
    p.name = "p3_keep_" + low.substr(2);  // p3_keep_rate12 etc.
    p.category = Property::Category::Control;
    p.horizon = 1;
    p.guard = Property::Guard{"rate_ctrl", rate_atom(rate)};
    p.quant = Property::Quantifier{
        "i", Term::number(0),
        Term::arith(ArithOp::Sub, {Term::input("punct_groups"), Term::number(1)})};
    Term i = Term::input("i");
    int out_per_group = static_cast<int>(rs.keep.size());
    TermList conj;
    for (int j = 0; j < out_per_group; ++j) {
      Term out_pos = Term::add({Term::mul({Term::number(out_per_group), i}), Term::number(j)});
      Term in_pos =
          Term::add({Term::mul({Term::number(rs.group_in), i}), Term::number(rs.keep[j])});
      conj.push_back(Term::cmp(CmpOp::Eq, Term::index(Term::var("punct.out", 0), out_pos),
                               Term::index(Term::var("cc.out", 0), in_pos)));
    }
    p.body = Term::land(std::move(conj));
    props.push_back(std::move(p));
  }
  return props;
}

std::map<std::string, long> wimax_attrs(int width) {
  return {{"width", width}};
}

}  // namespace sre
