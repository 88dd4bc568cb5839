#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sre/eval.hpp"
#include "sre/propcheck.hpp"
#include "sre/rewrite.hpp"
#include "sre/sim.hpp"
#include "sre/system.hpp"

namespace sre {

// ---------------------------------------------------------------------------
// Demo transmitter chain (simplified, self-consistent constructions):
//   input -> randomizer -> convolutional coder -> puncturing -> interleaver
//         -> repetition -> modulator/mapping -> output
// The block functions are documented standard constructions, not a
// standards-conformant codec: the verification methodology (equivalence
// across abstraction levels, property checking) is what the models exercise.

enum class WimaxLevel { FL, PTL8, PTL4 };

const char *to_cstr(WimaxLevel level);
std::optional<WimaxLevel> wimax_level_from(const std::string &s);

// Code-rate keep patterns: out of each group of `group_in` coded bits, keep
// the 0-based positions listed (applied to partial final groups as well).
struct RateSpec {
  std::string atom;       // WMRATE12 / WMRATE23 / WMRATE34
  int group_in = 0;       // coded bits per puncturing group
  std::vector<int> keep;  // kept positions within the group
  int punctured_len(int coded_len) const;
};

const RateSpec &rate_spec(const std::string &atom);

struct ModeSpec {
  std::string name;        // mode_0 .. mode_6
  std::string rate;        // rate atom
  std::string modulation;  // WMBPSK / WMQPSK / WMQAM16
  int repetition = 1;      // 1 or 2
  int bits_per_symbol() const;
  // Chain lengths for a given input width, exposed to properties as
  // scenario attributes.
  int coded_len(int width) const { return 2 * width; }
  int punct_len(int width) const;
  int rep_len(int width) const;
  int symbol_count(int width) const;
  Scenario scenario(int width) const;  // control bindings + attrs
};

// The seven mandatory operation modes. Modes 0-2 run code rate 1/2.
const std::vector<ModeSpec> &mode_table();
const ModeSpec &mode_by_name(const std::string &name);
std::vector<Scenario> all_scenarios(int width);
std::vector<Scenario> single_scenario(int width);  // {mode_0}

// Names of the registered block functions, and the registry mapping each to
// its numeric definition plus symbolic expansion. The registry also carries
// the buggy variants (rand_fn_bug, punct_r12_bug) used by the bug harness.
const FuncRegistry &wimax_registry();

// Fixed randomizer reference bits for a width (period-repeated pattern).
std::vector<bool> randomizer_ref(int width);

// Direct Value-level composition of the block functions in chain order —
// the numerical oracle the SRE models are validated against. Input is the
// data word as bits (LSB first); output is the modulated symbol list.
std::vector<Value> oracle_chain(const std::vector<bool> &word, const ModeSpec &mode);

// Builds one model level. Width is the data word width in bits (8, 16, 32).
// All levels share input in.word and control names, so one stimulus feeds
// any of them.
SreSystem build_model(WimaxLevel level, int width);

// Symbolic stimulus: in.word bound to a tuple of per-bit symbolic inputs
// b0..b{width-1}, in.valid handled by the scenario controls.
std::map<std::string, Term> symbolic_inputs(int width);
// Concrete stimulus for a bit vector.
std::map<std::string, Term> concrete_inputs(const std::vector<bool> &word);
Assignment bit_assignment(const std::vector<bool> &word);

// Abstraction onto FL naming for each level (identity for FL): signal
// renames plus elimination of the output framing conversion.
Abstraction wimax_abstraction(WimaxLevel level);

// Standalone bounded FIFO (fall-through on empty write, depth slots) driven
// by enq.data/enq.valid/deq.ready inputs — the conservation-law test model.
SreSystem build_fifo_model(int depth = 4);

// Standalone round/grant scheduler skeleton — the fairness test model.
SreSystem build_scheduler_model();

// ---------------------------------------------------------------------------
// Bug-injection harness. Each entry is a pure model-to-model transform; the
// original system is never modified.

struct BugSpec {
  std::string id;           // B1..B4
  std::string description;
  std::set<WimaxLevel> applicable;
};

const std::vector<BugSpec> &bug_catalog();
const BugSpec *find_bug(const std::string &id);

struct InjectResult {
  SreSystem model;
  std::string site;  // human-readable mutation site, for test assertions
};

// B1: puncturing function for rate 1/2 swaps the first two kept bits of each
//     group (functional change visible only in rate-1/2 modes 0..2).
// B2: the data line from the puncturing block to the interleaver is cut —
//     the consumer reads INVALID_DATA instead of the producer's word.
// B3: the randomizer reference array is rotated by one position.
// B4: the puncturing dispatcher's first condition tests the wrong rate atom,
//     so a wrong puncturing function is selected in rate-1/2 and 2/3 modes.
InjectResult inject(const SreSystem &model, WimaxLevel level, const std::string &bug_id);

// The three bundled properties, written against FL signal naming:
//   P1 (global):  no stage output carries INVALID_DATA at the check cycle.
//   P2 (local):   every randomizer output bit equals the input bit xor the
//                 reference bit at its position.
//   P3 (control): per code rate, punctured positions equal the kept coded
//                 positions (full groups; guarded by the rate control).
std::vector<Property> wimax_properties(int width);

// Properties' quantifier bounds may reference these attribute names.
std::map<std::string, long> wimax_attrs(int width);

}  // namespace sre
