#include "minsky/transform.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace minsky {

namespace {

std::vector<long long> first_primes(int count) {
  std::vector<long long> ps;
  long long n = 2;
  while ((int)ps.size() < count) {
    bool prime = true;
    for (long long d = 2; d * d <= n; ++d)
      if (n % d == 0) {
        prime = false;
        break;
      }
    if (prime) ps.push_back(n);
    ++n;
  }
  return ps;
}

// Classic command shapes (the three 2.2 forms plus a bare jump).
enum class Shape { Add, Sub, ZeroJump, Jump, Other };

Shape shape_of(const Command& c, int* glass) {
  *glass = 0;
  if (c.guard.empty() && c.effect.empty()) return Shape::Jump;
  if (c.guard.empty() && c.effect.size() == 1 && c.effect[0].inc) {
    *glass = c.effect[0].glass;
    return Shape::Add;
  }
  if (c.guard.size() == 1 && c.guard[0].cond == Cond::Pos && c.effect.size() == 1 &&
      !c.effect[0].inc && c.effect[0].glass == c.guard[0].glass) {
    *glass = c.guard[0].glass;
    return Shape::Sub;
  }
  if (c.guard.size() == 1 && c.guard[0].cond == Cond::Zero && c.effect.empty()) {
    *glass = c.guard[0].glass;
    return Shape::ZeroJump;
  }
  return Shape::Other;
}

}  // namespace

long long Compiled2::encode_glasses(const std::vector<long long>& g) const {
  long long v = 1;
  for (size_t k = 0; k < g.size(); ++k)
    for (long long i = 0; i < g[k]; ++i) v *= primes[k];
  return v;
}

Config Compiled2::map_config(const Config& src) const {
  return Config{entry[src.label], {encode_glasses(src.g), 0}};
}

bool Compiled2::is_entry(int target_label) const {
  return source_label(target_label).has_value();
}

std::optional<int> Compiled2::source_label(int target_label) const {
  for (size_t l = 0; l < entry.size(); ++l)
    if (entry[l] == target_label) return (int)l;
  return std::nullopt;
}

// Per source label the target program gets one of three gadget blocks, all
// entered and left with g2 == 0:
//   Add(k):  multiply g1 by p_k     (move 1 : p_k, then move back 1 : 1)
//   Sub/Zero on k: divisibility test (move 1 : 1 counting residue in the
//            label), then either move back p_k : 1 (divide) or 1 : 1 (restore)
//   Jump:    a single bridge command.
Compiled2 compile_k_to_2(const Machine& m) {
  validate(m);
  if (!is_deterministic(m))
    throw MachineError("compile_k_to_2 requires a deterministic machine");

  int n = m.max_label();
  Compiled2 out;
  out.primes = first_primes(m.glasses);
  out.entry.assign(n + 1, 0);

  struct Plan {
    Shape kind = Shape::Other;
    int glass = 0;
    const Command* add_or_jump = nullptr;
    const Command* sub = nullptr;
    const Command* zero = nullptr;
  };
  std::vector<Plan> plan(n + 1);
  {
    std::vector<std::vector<const Command*>> at(n + 1);
    for (const auto& c : m.commands) at[c.label].push_back(&c);
    for (int l = 1; l <= n; ++l) {
      auto& p = plan[l];
      if (at[l].size() > 2)
        throw MachineError("more than two commands share label " + std::to_string(l));
      int g1 = 0, g2 = 0;
      Shape s1 = shape_of(*at[l][0], &g1);
      if (s1 == Shape::Other)
        throw MachineError("compile_k_to_2 handles classic command forms only");
      if (at[l].size() == 1) {
        p.kind = s1;
        p.glass = g1;
        if (s1 == Shape::Sub) p.sub = at[l][0];
        else if (s1 == Shape::ZeroJump) p.zero = at[l][0];
        else p.add_or_jump = at[l][0];
      } else {
        Shape s2 = shape_of(*at[l][1], &g2);
        bool pair_ok = g1 == g2 && ((s1 == Shape::Sub && s2 == Shape::ZeroJump) ||
                                    (s1 == Shape::ZeroJump && s2 == Shape::Sub));
        if (!pair_ok)
          throw MachineError("commands sharing label " + std::to_string(l) +
                             " are not a Sub/Zero pair on one glass");
        p.kind = Shape::Sub;
        p.glass = g1;
        p.sub = s1 == Shape::Sub ? at[l][0] : at[l][1];
        p.zero = s1 == Shape::ZeroJump ? at[l][0] : at[l][1];
      }
    }
  }

  auto block_size = [&](const Plan& p) -> int {
    long long pk = p.glass > 0 ? out.primes[p.glass - 1] : 0;
    switch (p.kind) {
      case Shape::Jump:
        return 1;
      case Shape::Add:
        return (int)(1 + pk + 2);
      default:  // Sub / ZeroJump / pair: test + 1:1 restore + branch restore
        return (int)(2 * pk + 2 + (p.sub ? pk + 1 : 2));
    }
  };

  int next = 1;
  for (int l = 1; l <= n; ++l) {
    out.entry[l] = next;
    next += block_size(plan[l]);
  }
  const int stuck = next;

  Machine t;
  t.name = m.name + "-2glass";
  t.glasses = 2;
  auto target_of = [&](int src_next) { return src_next == 0 ? 0 : out.entry[src_next]; };

  for (int l = 1; l <= n; ++l) {
    const auto& p = plan[l];
    const int base = out.entry[l];
    const long long pk = p.glass > 0 ? out.primes[p.glass - 1] : 0;
    switch (p.kind) {
      case Shape::Jump:
        t.commands.push_back({base, {{2, Cond::Zero}}, {}, target_of(p.add_or_jump->next)});
        break;
      case Shape::Add: {
        const int inc0 = base + 1;
        const int r0 = base + 1 + (int)pk;
        const int r1 = r0 + 1;
        t.commands.push_back({base, {{1, Cond::Zero}}, {}, r0});
        t.commands.push_back({base, {{1, Cond::Pos}}, {{false, 1}}, inc0});
        for (long long i = 0; i < pk; ++i)
          t.commands.push_back({(int)(inc0 + i), {}, {{true, 2}},
                                i + 1 < pk ? (int)(inc0 + i + 1) : base});
        t.commands.push_back({r0, {{2, Cond::Zero}}, {}, target_of(p.add_or_jump->next)});
        t.commands.push_back({r0, {{2, Cond::Pos}}, {{false, 2}}, r1});
        t.commands.push_back({r1, {}, {{true, 1}}, r0});
        break;
      }
      default: {
        // residue labels T_r = base+r, transfer labels U_r = base+pk+r
        const int tbase = base;
        const int ubase = base + (int)pk;
        const int nd = base + 2 * (int)pk;  // 1:1 restore, then branch target
        const int nd1 = nd + 1;
        const int dv = nd + 2;  // divisible branch block
        const int nd_target = p.zero ? target_of(p.zero->next) : stuck;
        const int dv_entry = dv;
        for (long long r = 0; r < pk; ++r) {
          t.commands.push_back({(int)(tbase + r), {{1, Cond::Zero}}, {},
                                r == 0 ? dv_entry : nd});
          t.commands.push_back({(int)(tbase + r), {{1, Cond::Pos}}, {{false, 1}},
                                (int)(ubase + r)});
        }
        for (long long r = 0; r < pk; ++r)
          t.commands.push_back({(int)(ubase + r), {}, {{true, 2}},
                                (int)(tbase + (r + 1) % pk)});
        t.commands.push_back({nd, {{2, Cond::Zero}}, {}, nd_target});
        t.commands.push_back({nd, {{2, Cond::Pos}}, {{false, 2}}, nd1});
        t.commands.push_back({nd1, {}, {{true, 1}}, nd});
        if (p.sub) {
          // move back p_k : 1; g2 is divisible by p_k on this branch
          const int d0 = dv;
          const int e = d0 + (int)pk;
          t.commands.push_back({d0, {{2, Cond::Zero}}, {}, target_of(p.sub->next)});
          t.commands.push_back({d0, {{2, Cond::Pos}}, {{false, 2}},
                                pk == 1 ? e : d0 + 1});
          for (long long r = 1; r < pk; ++r)
            t.commands.push_back({(int)(d0 + r), {{2, Cond::Pos}}, {{false, 2}},
                                  (int)(r + 1 < pk ? d0 + r + 1 : e)});
          t.commands.push_back({e, {}, {{true, 1}}, d0});
        } else {
          // glass was non-empty but only a zero-test exists: restore and stall
          const int zd = dv;
          const int zd1 = dv + 1;
          t.commands.push_back({zd, {{2, Cond::Zero}}, {}, stuck});
          t.commands.push_back({zd, {{2, Cond::Pos}}, {{false, 2}}, zd1});
          t.commands.push_back({zd1, {}, {{true, 1}}, zd});
        }
        break;
      }
    }
  }

  // stuck whenever g2 == 0, which holds on arrival
  t.commands.push_back({stuck, {{2, Cond::Pos}}, {{false, 2}}, stuck});

  out.target = std::move(t);
  validate(out.target);
  if (!is_deterministic(out.target))
    throw MachineError("internal: compiled machine is not deterministic");
  return out;
}

Machine widen(const Machine& m, int glasses) {
  if (glasses < m.glasses) throw MachineError("widen cannot drop glasses");
  Machine w = m;
  w.glasses = glasses;
  return w;
}

Machine attach_depth_glasses(const Machine& m) {
  if (m.glasses != 3) throw MachineError("attach_depth_glasses expects a 3-glass machine");
  validate(m);
  Machine out;
  out.name = m.name + "-depth";
  out.glasses = 5;
  auto by_glass = [](auto& a, auto& b) { return a.glass < b.glass; };
  for (const auto& c : m.commands) {
    Command with = c;  // g5 = 0 variant also adds a coin to glass 4
    with.guard.push_back({5, Cond::Zero});
    with.effect.push_back({true, 4});
    std::sort(with.guard.begin(), with.guard.end(), by_glass);
    std::sort(with.effect.begin(), with.effect.end(), by_glass);
    Command without = c;  // g5 > 0 variant keeps the original effect
    without.guard.push_back({5, Cond::Pos});
    std::sort(without.guard.begin(), without.guard.end(), by_glass);
    out.commands.push_back(std::move(with));
    out.commands.push_back(std::move(without));
  }
  int n = m.max_label();
  for (int i = 1; i <= n; ++i) {
    out.commands.push_back({i, {}, {{true, 4}, {true, 5}}, i});
    out.commands.push_back({i, {{4, Cond::Zero}, {5, Cond::Zero}}, {}, 0});
  }
  validate(out);
  return out;
}

GapStats measure_empty_bound(const Machine& m, const Config& start, long long fuel) {
  if (!is_deterministic(m))
    throw MachineError("measure_empty_bound requires a deterministic machine");
  GapStats st;
  auto some_empty = [](const Config& c) {
    for (long long v : c.g)
      if (v == 0) return true;
    return false;
  };
  auto coins = [](const Config& c) {
    long long s = 0;
    for (long long v : c.g) s += v;
    return s;
  };
  Config cur = start;
  long long t = 0;
  long long last_event = some_empty(cur) ? 0 : -1;
  long long last_event_coins = coins(cur);
  auto note_gap = [&](long long now) {
    long long from = last_event < 0 ? 0 : last_event;
    long long gap = now - from;
    st.max_gap = std::max(st.max_gap, gap);
    st.fitted_c = std::max(st.fitted_c, (double)gap / (double)(last_event_coins + 1));
  };
  st.outcome = RunKind::OutOfFuel;
  while (t < fuel) {
    if (cur.label == 0) {
      st.outcome = RunKind::Halted;
      break;
    }
    auto s = step(m, cur);
    if (s.empty()) {
      st.outcome = RunKind::Stuck;
      break;
    }
    cur = s.front();
    ++t;
    if (some_empty(cur)) {
      note_gap(t);
      last_event = t;
      last_event_coins = coins(cur);
    }
  }
  if (last_event != t) note_gap(t);
  st.steps = t;
  return st;
}

}  // namespace minsky
