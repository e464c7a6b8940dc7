#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace minsky {

// K-glass Minsky machines: numbered guarded commands over non-negative
// counters ("glasses").  Command #1 starts, #0 stops; several commands may
// share a label, in which case the machine is nondeterministic.

enum class Cond : uint8_t { Zero, Pos };

struct GuardAtom {
  int glass = 0;  // 1-based
  Cond cond = Cond::Zero;

  friend bool operator==(const GuardAtom&, const GuardAtom&) = default;
};

struct EffectAtom {
  bool inc = true;  // false = dec
  int glass = 0;

  friend bool operator==(const EffectAtom&, const EffectAtom&) = default;
};

// guard empty = always enabled.  Atoms are kept sorted by glass and refer to
// distinct glasses; every Dec(k) in the effect requires a Pos(k) guard atom.
struct Command {
  int label = 1;
  std::vector<GuardAtom> guard;
  std::vector<EffectAtom> effect;
  int next = 0;

  friend bool operator==(const Command&, const Command&) = default;
};

struct Machine {
  std::string name;
  int glasses = 2;
  std::vector<Command> commands;

  int max_label() const;

  friend bool operator==(const Machine&, const Machine&) = default;
};

struct Config {
  int label = 0;
  std::vector<long long> g;

  friend bool operator==(const Config&, const Config&) = default;
  friend bool operator<(const Config& a, const Config& b) {
    if (a.label != b.label) return a.label < b.label;
    return a.g < b.g;
  }
};

std::string to_string(const Config& c);
// "1;2,0" -> Config{1,{2,0}}
Config parse_config(const std::string& text, int glasses);

struct TraceStep {
  int command_index = -1;  // index into Machine::commands
  bool forward = true;
  Config to;
};

struct Trace {
  Config start;
  std::vector<TraceStep> steps;

  size_t length() const { return steps.size(); }
  const Config& last() const { return steps.empty() ? start : steps.back().to; }
};

struct ParseError : std::runtime_error {
  int line = 0;
  int col = 0;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " (line " + std::to_string(line_) + ", col " +
                           std::to_string(col_) + ")"),
        line(line_),
        col(col_) {}
};

struct MachineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// DSL: header "machine <name> glasses=<K>", then one command per line:
//   <label>: [if g<k>(=0|>0)[, ...]] [inc g<k>|dec g<k>[, ...]] goto <label>
// '#' starts a comment.  parse(print(m)) == m.
Machine parse_machine(const std::string& text);
std::string print_machine(const Machine& m);

// Structural validation; throws MachineError.  Checks label contiguity,
// dangling next labels, glass ranges, Dec-under-Pos-guard.
void validate(const Machine& m);

bool guard_satisfied(const std::vector<GuardAtom>& guard, const Config& c);

// Symbolic disjointness: two guards overlap unless one demands Zero(k) and
// the other Pos(k) for a common k.
bool guards_disjoint(const std::vector<GuardAtom>& a,
                     const std::vector<GuardAtom>& b);

bool is_deterministic(const Machine& m);

// Command indices sorted by (label, guard, effect, next); all searches expand
// in this order so results are reproducible.
std::vector<int> canonical_command_order(const Machine& m);

// Successors of c under all enabled commands with c.label, canonical order.
// Throws MachineError for label 0.
std::vector<Config> step(const Machine& m, const Config& c);

// Predecessors of c under inverted commands (Sym(M) backward edges).
std::vector<Config> step_backward(const Machine& m, const Config& c);

// Single applications, also exposing the command used.
struct Move {
  Config to;
  int command_index;
  bool forward;
};
std::vector<Move> moves(const Machine& m, const Config& c, bool forward);

enum class RunKind { Halted, Stuck, OutOfFuel };

struct RunResult {
  RunKind kind = RunKind::Stuck;
  Config final_config;
  Trace trace;
};

// Deterministic machines only (throws MachineError otherwise).
RunResult run(const Machine& m, const Config& start, long long fuel);

enum class EquivKind { Equivalent, NotEquivalent, Unknown };

struct EquivResult {
  EquivKind kind = EquivKind::Unknown;
  Trace witness;  // for Equivalent: Sym(M)-computation from a to b
  bool orbit_exhausted = false;
  long long expansions = 0;
};

// Bounded BFS over Sym(M) from a, plus the forward-meet shortcut for
// deterministic machines; the two verdicts must agree whenever both conclude.
// NotEquivalent only when the full Sym-orbit of a was exhausted within fuel.
EquivResult equivalent_configs(const Machine& m, const Config& a,
                               const Config& b, long long fuel);

// Forward-meet procedure on its own (deterministic m): runs both forward
// orbits to completion (halt/stuck/cycle) and looks for a common config.
EquivResult forward_meet(const Machine& m, const Config& a, const Config& b,
                         long long fuel);

std::optional<Config> sole_successor(const Machine& m, const Config& c);

}  // namespace minsky
