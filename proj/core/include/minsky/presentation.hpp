#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "minsky/machine.hpp"

namespace minsky {

using Gen = int;  // index into Presentation::gens

struct Word {
  std::vector<Gen> ls;

  Word() = default;
  explicit Word(std::vector<Gen> l) : ls(std::move(l)) {}
  size_t size() const { return ls.size(); }
  bool empty() const { return ls.empty(); }
  Word operator+(const Word& o) const {
    Word w = *this;
    w.ls.insert(w.ls.end(), o.ls.begin(), o.ls.end());
    return w;
  }
  friend bool operator==(const Word&, const Word&) = default;
  friend bool operator<(const Word& a, const Word& b) { return a.ls < b.ls; }
};

struct WordHash {
  size_t operator()(const Word& w) const {
    size_t h = 1469598103934665603ull;
    for (Gen g : w.ls) {
      h ^= (size_t)(g + 0x9e3779b9);
      h *= 1099511628211ull;
    }
    return h;
  }
};

enum class Variant {
  Generic,
  S1,
  S2R,
  S2L,
  S1P,   // Gurevich S1'
  S2RP,  // Gurevich right S2'
  S3R,
  S5R,
  AmalgamD,
  AmalgamE,
  AmalgamR,
};

std::string to_string(Variant v);
std::optional<Variant> variant_from_string(const std::string& s);

struct PresentationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A finitely presented semigroup with zero.  `relations` holds the non-zero
// defining relations (Minsky rows, counter rows, commuting pairs as xy = yx);
// `zero_words` the words equal to zero (special relations first, then the
// computed forbidden factors).  Derivation step indices address relations
// first, then zero_words.
struct Presentation {
  std::string name;
  Variant variant = Variant::Generic;
  std::vector<std::string> gens;  // declaration order; gens[0] == "0" if zero present
  std::optional<Gen> zero;
  std::vector<std::pair<Word, Word>> relations;
  std::vector<std::pair<Gen, Gen>> commuting;  // unordered, stored lesser-first
  std::vector<Word> zero_words;

  int labels = 0;   // N for machine-derived presentations
  int glasses = 0;  // glass count for machine-derived presentations

  // derived, built by prepare():
  std::vector<std::vector<char>> commute;  // symmetric matrix
  std::unordered_map<std::string, Gen> gen_index;
  std::unordered_set<long long> zero_pairs;  // packed 2-letter zero words
  std::vector<Word> long_zero_words;         // zero words of length != 2
  std::unordered_map<long long, int> commuting_rel_index;  // pair -> relation idx

  void prepare();

  Gen gen(const std::string& name) const;
  bool commutes(Gen a, Gen b) const { return commute[a][b]; }
  size_t relation_count() const { return relations.size() + zero_words.size(); }
  // unified relation access: index < relations.size() -> that relation,
  // otherwise zero_words[i - relations.size()] -> (word, [zero])
  std::pair<Word, Word> relation_at(size_t index) const;

  std::string word_str(const Word& w) const;
  Word parse_word(const std::string& text) const;
};

// Interchange format: name line, then sections generators / zero / commuting /
// relations / forbidden, stable order.  Round-trips byte-exactly.
std::string print_presentation(const Presentation& p);
Presentation parse_presentation(const std::string& text);

// Universal formula (/\ premises) -> conclusion over `variables`.
struct QuasiIdentity {
  std::vector<std::string> variables;
  std::vector<std::pair<Word, Word>> premises;  // rhs may be the zero word
  std::pair<Word, Word> conclusion;
  std::optional<Gen> zero;  // index of the zero symbol inside `variables`
};

struct EmitOptions {
  // keep the literal 5 rows "A1 a1 w1 = c A1 q1" / "q1 a1 A1 = q1 A1 c"
  // (w1 read as q1) instead of the pattern reading with q_i / q_j
  bool literal_counter_row = false;
  // keep the printed tautology "q_i A2 = q_i A2" for eps2=0 rows
  bool literal_zero2_row = false;
  // keep the printed u_{1,2} indices in the eps1=0 amalgam rows
  bool literal_u12 = false;
};

Presentation emit_s1(const Machine& m, const EmitOptions& opt = {});
Presentation emit_s2_right(const Machine& m, const EmitOptions& opt = {});
Presentation emit_s2_left(const Machine& m, const EmitOptions& opt = {});
Presentation emit_s1_prime(const Machine& m, const EmitOptions& opt = {});
Presentation emit_s2_prime(const Machine& m, const EmitOptions& opt = {});
Presentation emit_sk_right(const Machine& m, int k, const EmitOptions& opt = {});

struct Amalgam {
  Presentation d;
  Presentation e;
  std::vector<std::string> u;  // shared generator names (zero first)
  Presentation r;              // union presentation over X ∪ Y
};

Amalgam emit_amalgam(const Machine& m, const EmitOptions& opt = {});

// Configuration word of c in the given variant; counter = coins in the
// counter subgroup for the primed variants.
Word config_word(const Presentation& p, const Config& c, long long counter = 0);

// Inverse of config_word on canonical forms; also yields the counter value.
struct DecodedWord {
  Config config;
  long long counter = 0;
};
std::optional<DecodedWord> parse_config_word(const Presentation& p, const Word& w);

QuasiIdentity emit_quasi_identity(const Presentation& p, const Config& input);

// All 2-letter words over the variant's generators that are not factors,
// modulo the variant's commuting (and counter) relations, of any admissible
// configuration word.  Coins are enumerated up to 2 per glass.
std::vector<Word> forbidden_factors(const Presentation& p);

// Dispatch by variant name used in the CLI.
Presentation emit_variant(Variant v, const Machine& m, const EmitOptions& opt = {});

}  // namespace minsky
