#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "minsky/presentation.hpp"

namespace minsky {

// Canonical form: Zero, or the lexicographically least word of the commuting
// class (letters ordered by declaration).  Canonical forms are fixed points
// of normalize and contain no forbidden factor in any arrangement.
struct NormalForm {
  bool is_zero = false;
  Word word;

  friend bool operator==(const NormalForm&, const NormalForm&) = default;
  friend bool operator<(const NormalForm& a, const NormalForm& b) {
    if (a.is_zero != b.is_zero) return a.is_zero;
    return a.word < b.word;
  }
};

NormalForm normalize(const Presentation& p, const Word& w);

// Lex-least linearization of w's trace (no zero checks).
Word canonical_form(const Presentation& p, const Word& w);

// True iff some commuting-rearrangement of w contains some rearrangement of u
// as a contiguous factor.
bool is_factor_mod_commuting(const Presentation& p, const Word& u, const Word& w);

// One derivation step: apply relation `rel` (unified index; zero_words follow
// relations) at `pos` in the current word, left-to-right or right-to-left.
struct DerivStep {
  int rel = 0;
  int pos = 0;
  bool l2r = true;
};

using Derivation = std::vector<DerivStep>;

std::string print_derivation(const Derivation& d);
Derivation parse_derivation(const std::string& text);

// Plain syntactic replay; the step's side must match at pos exactly.
// Returns the final word (which may contain the zero letter).
std::optional<Word> replay(const Presentation& p, const Word& start,
                           const Derivation& d);

enum class VerdictKind { Equal, Distinct, Unknown };

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  Derivation derivation;     // for Equal: replays u into v
  std::string reason;        // for Distinct
  long long fuel_spent = 0;
};

// Strategy ladder: normalize; configuration words go through the machine
// (equivalent_configs), everything else through bounded bidirectional BFS
// over relation applications mod commuting.  Distinct only with an exhausted
// orbit certificate.
Verdict decide_equal(const Presentation& p, const Machine* m, const Word& u,
                     const Word& v, long long fuel);

std::optional<long long> derivation_length(const Presentation& p, const Machine* m,
                                           const Word& u, const Word& v,
                                           long long fuel);

// Congruence-class closure of `start` under relation applications in any
// commuting arrangement.  Nodes are canonical forms; Zero is terminal.
struct Closure {
  bool stabilized = false;
  bool reached_zero = false;
  long long expansions = 0;
  std::vector<Word> words;  // canonical forms, discovery order
};

Closure close_under_relations(const Presentation& p, const Word& start,
                              long long fuel);

// Every factor mod commuting of every word in the stabilized closure.
struct DivisorSet {
  enum class Status { Stabilized, FuelExceeded, ZeroWord } status;
  std::vector<Word> divisors;  // canonical forms, sorted
  long long closure_size = 0;
};

DivisorSet divisor_set(const Presentation& p, const Word& w, long long fuel);

// All factors mod commuting of a single word (canonical forms).
std::vector<Word> trace_factors(const Presentation& p, const Word& w);

// All single relation applications mod commuting, as canonical forms.
struct Rewrite {
  NormalForm result;
  Derivation steps;  // commuting steps + one relation step (+ zero step)
};
std::vector<Rewrite> neighbors(const Presentation& p, const Word& w);

// Oriented left-to-right rewriting for the amalgam presentations:
// leftmost position, lowest rule index, until no rule applies.
struct ConfluentResult {
  enum class Status { Normal, Zero, FuelExceeded } status;
  Word nf;
  long long steps = 0;
};

ConfluentResult rewrite_confluent(const Presentation& p, const Word& w, long long fuel);

// Same relation set, but the (rule, position) choice is made by `pick`.
ConfluentResult rewrite_with_strategy(const Presentation& p, const Word& w,
                                      long long fuel, unsigned seed);

}  // namespace minsky
