#pragma once

#include "minsky/machine.hpp"

namespace minsky {

// K -> 2 glass compiler.  Glass vector (e1..eK) is held in target glass 1 as
// 2^e1 * 3^e2 * 5^e3 * ...; glass 2 is the scratch glass and is empty at every
// gadget boundary.  Gadgets come from three templates: multiply, divide with
// remainder test, and restore.
struct Compiled2 {
  Machine target;
  std::vector<long long> primes;  // primes[k-1] encodes source glass k
  std::vector<int> entry;         // entry[l] = target label simulating source label l; entry[0] == 0

  long long encode_glasses(const std::vector<long long>& g) const;
  Config map_config(const Config& src) const;
  bool is_entry(int target_label) const;
  // target label -> source label, for labels in the entry set (plus 0 -> 0)
  std::optional<int> source_label(int target_label) const;
};

// Deterministic machines with classic guards only (Always / g>0 with dec /
// g=0).  Throws MachineError otherwise.
Compiled2 compile_k_to_2(const Machine& m);

// 7.3 depth-glass transform: 3-glass machine -> 5-glass nondeterministic
// machine.  Every original command is split on g5 (g5=0 variant gains inc g4);
// every label i gains "i: inc g4, inc g5 goto i" and
// "i: if g4=0, g5=0 goto 0".
Machine attach_depth_glasses(const Machine& m);

// Widen a machine to more glasses (new glasses unused).
Machine widen(const Machine& m, int glasses);

// Max step gap between consecutive "some glass is empty" events along the run
// from `start`, with a trailing gap for runs ending away from an event.
// fitted_c = max over gaps of gap / (coins at gap start + 1).
struct GapStats {
  long long max_gap = 0;
  double fitted_c = 0.0;
  RunKind outcome = RunKind::Stuck;
  long long steps = 0;
};

GapStats measure_empty_bound(const Machine& m, const Config& start, long long fuel);

}  // namespace minsky
