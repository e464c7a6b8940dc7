#include "minsky/machine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace minsky {

int Machine::max_label() const {
  int n = 0;
  for (const auto& c : commands) n = std::max(n, c.label);
  return n;
}

std::string to_string(const Config& c) {
  std::string s = std::to_string(c.label) + ";";
  for (size_t i = 0; i < c.g.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c.g[i]);
  }
  return s;
}

Config parse_config(const std::string& text, int glasses) {
  Config c;
  auto semi = text.find(';');
  if (semi == std::string::npos)
    throw MachineError("config must look like \"<label>;<g1>,<g2>,...\": " + text);
  c.label = std::stoi(text.substr(0, semi));
  std::string rest = text.substr(semi + 1);
  std::stringstream ss(rest);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) c.g.push_back(std::stoll(tok));
  }
  if ((int)c.g.size() != glasses)
    throw MachineError("config has " + std::to_string(c.g.size()) +
                       " glasses, machine has " + std::to_string(glasses));
  for (long long v : c.g)
    if (v < 0) throw MachineError("negative glass value in config " + text);
  if (c.label < 0) throw MachineError("negative label in config " + text);
  return c;
}

// ---------------------------------------------------------------------------
// parser

namespace {

struct Cursor {
  const std::string& s;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  bool eof() const { return pos >= s.size(); }
  char peek() const { return eof() ? '\0' : s[pos]; }
  char get() {
    char c = s[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }
};

void skip_ws_and_comments(Cursor& c, bool stop_at_newline) {
  while (!c.eof()) {
    char ch = c.peek();
    if (ch == '#') {
      while (!c.eof() && c.peek() != '\n') c.get();
    } else if (ch == '\n') {
      if (stop_at_newline) return;
      c.get();
    } else if (ch == ' ' || ch == '\t' || ch == '\r') {
      c.get();
    } else {
      return;
    }
  }
}

std::string read_token(Cursor& c) {
  std::string t;
  while (!c.eof()) {
    char ch = c.peek();
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == '#' ||
        ch == ',' || ch == ':')
      break;
    t += c.get();
  }
  return t;
}

int read_int(Cursor& c, const std::string& what) {
  std::string t = read_token(c);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("expected " + what + ", got \"" + t + "\"", c.line, c.col);
  return std::stoi(t);
}

// "g<k>" -> k
int parse_glass_ref(const std::string& tok, const Cursor& c) {
  if (tok.size() < 2 || tok[0] != 'g')
    throw ParseError("expected glass reference g<k>, got \"" + tok + "\"",
                     c.line, c.col);
  for (size_t i = 1; i < tok.size(); ++i)
    if (!isdigit((unsigned char)tok[i]))
      throw ParseError("bad glass reference \"" + tok + "\"", c.line, c.col);
  return std::stoi(tok.substr(1));
}

}  // namespace

Machine parse_machine(const std::string& text) {
  Cursor c{text};
  Machine m;

  skip_ws_and_comments(c, false);
  if (read_token(c) != "machine")
    throw ParseError("expected \"machine\" header", c.line, c.col);
  skip_ws_and_comments(c, true);
  m.name = read_token(c);
  if (m.name.empty()) throw ParseError("missing machine name", c.line, c.col);
  skip_ws_and_comments(c, true);
  std::string g = read_token(c);
  if (g.rfind("glasses=", 0) != 0)
    throw ParseError("expected glasses=<K>", c.line, c.col);
  m.glasses = std::stoi(g.substr(8));
  if (m.glasses < 2) throw ParseError("glasses must be >= 2", c.line, c.col);

  for (;;) {
    skip_ws_and_comments(c, false);
    if (c.eof()) break;

    Command cmd;
    cmd.label = read_int(c, "command label");
    if (c.peek() != ':')
      throw ParseError("expected ':' after label", c.line, c.col);
    c.get();
    if (cmd.label < 1)
      throw ParseError("command labels start at 1; there is no instruction for label 0",
                       c.line, c.col);

    skip_ws_and_comments(c, true);
    std::string tok = read_token(c);

    if (tok == "if") {
      for (;;) {
        skip_ws_and_comments(c, true);
        std::string atom = read_token(c);
        GuardAtom a;
        auto eq = atom.find("=0");
        auto gt = atom.find(">0");
        if (eq != std::string::npos && eq == atom.size() - 2) {
          a.cond = Cond::Zero;
          a.glass = parse_glass_ref(atom.substr(0, eq), c);
        } else if (gt != std::string::npos && gt == atom.size() - 2) {
          a.cond = Cond::Pos;
          a.glass = parse_glass_ref(atom.substr(0, gt), c);
        } else {
          throw ParseError("expected guard g<k>=0 or g<k>>0, got \"" + atom + "\"",
                           c.line, c.col);
        }
        cmd.guard.push_back(a);
        skip_ws_and_comments(c, true);
        if (c.peek() == ',') {
          c.get();
          continue;
        }
        break;
      }
      skip_ws_and_comments(c, true);
      tok = read_token(c);
    }

    while (tok == "inc" || tok == "dec") {
      EffectAtom e;
      e.inc = tok == "inc";
      skip_ws_and_comments(c, true);
      e.glass = parse_glass_ref(read_token(c), c);
      cmd.effect.push_back(e);
      skip_ws_and_comments(c, true);
      if (c.peek() == ',') {
        c.get();
        skip_ws_and_comments(c, true);
        tok = read_token(c);
        if (tok != "inc" && tok != "dec")
          throw ParseError("expected inc/dec after ','", c.line, c.col);
        continue;
      }
      tok = read_token(c);
      break;
    }

    if (tok != "goto")
      throw ParseError("expected \"goto\", got \"" + tok + "\"", c.line, c.col);
    skip_ws_and_comments(c, true);
    cmd.next = read_int(c, "target label");

    std::sort(cmd.guard.begin(), cmd.guard.end(),
              [](const GuardAtom& x, const GuardAtom& y) { return x.glass < y.glass; });
    std::sort(cmd.effect.begin(), cmd.effect.end(),
              [](const EffectAtom& x, const EffectAtom& y) { return x.glass < y.glass; });
    m.commands.push_back(std::move(cmd));
  }

  try {
    validate(m);
  } catch (const MachineError& e) {
    throw ParseError(e.what(), c.line, c.col);
  }
  return m;
}

std::string print_machine(const Machine& m) {
  std::string out = "machine " + m.name + " glasses=" + std::to_string(m.glasses) + "\n";
  for (const auto& cmd : m.commands) {
    out += std::to_string(cmd.label) + ":";
    if (!cmd.guard.empty()) {
      out += " if ";
      for (size_t i = 0; i < cmd.guard.size(); ++i) {
        if (i) out += ", ";
        out += "g" + std::to_string(cmd.guard[i].glass) +
               (cmd.guard[i].cond == Cond::Zero ? "=0" : ">0");
      }
    }
    for (size_t i = 0; i < cmd.effect.size(); ++i) {
      out += i ? ", " : " ";
      out += (cmd.effect[i].inc ? "inc g" : "dec g") + std::to_string(cmd.effect[i].glass);
    }
    out += " goto " + std::to_string(cmd.next) + "\n";
  }
  return out;
}

void validate(const Machine& m) {
  if (m.glasses < 2) throw MachineError("machine needs at least 2 glasses");
  std::set<int> labels;
  for (const auto& cmd : m.commands) labels.insert(cmd.label);
  if (m.commands.empty()) throw MachineError("machine has no commands");
  int n = *labels.rbegin();
  for (int i = 1; i <= n; ++i)
    if (!labels.count(i))
      throw MachineError("labels must form a contiguous set {1..N}; missing " +
                         std::to_string(i));
  for (const auto& cmd : m.commands) {
    if (cmd.label < 1) throw MachineError("command label must be >= 1");
    if (cmd.next != 0 && !labels.count(cmd.next))
      throw MachineError("dangling goto target " + std::to_string(cmd.next));
    std::set<int> seen;
    for (const auto& a : cmd.guard) {
      if (a.glass < 1 || a.glass > m.glasses)
        throw MachineError("glass g" + std::to_string(a.glass) + " out of range 1.." +
                           std::to_string(m.glasses));
      if (!seen.insert(a.glass).second)
        throw MachineError("guard mentions glass g" + std::to_string(a.glass) + " twice");
    }
    seen.clear();
    for (const auto& e : cmd.effect) {
      if (e.glass < 1 || e.glass > m.glasses)
        throw MachineError("glass g" + std::to_string(e.glass) + " out of range 1.." +
                           std::to_string(m.glasses));
      if (!seen.insert(e.glass).second)
        throw MachineError("effect mentions glass g" + std::to_string(e.glass) + " twice");
      if (!e.inc) {
        bool guarded = false;
        for (const auto& a : cmd.guard)
          guarded |= a.glass == e.glass && a.cond == Cond::Pos;
        if (!guarded)
          throw MachineError("dec g" + std::to_string(e.glass) +
                             " without a g" + std::to_string(e.glass) + ">0 guard");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// semantics

bool guard_satisfied(const std::vector<GuardAtom>& guard, const Config& c) {
  for (const auto& a : guard) {
    long long v = c.g[a.glass - 1];
    if (a.cond == Cond::Zero ? v != 0 : v <= 0) return false;
  }
  return true;
}

bool guards_disjoint(const std::vector<GuardAtom>& a,
                     const std::vector<GuardAtom>& b) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (x.glass == y.glass && x.cond != y.cond) return true;
  return false;
}

bool is_deterministic(const Machine& m) {
  for (size_t i = 0; i < m.commands.size(); ++i)
    for (size_t j = i + 1; j < m.commands.size(); ++j) {
      if (m.commands[i].label != m.commands[j].label) continue;
      if (!guards_disjoint(m.commands[i].guard, m.commands[j].guard)) return false;
    }
  return true;
}

namespace {

std::tuple<int, std::vector<std::tuple<int, int>>, std::vector<std::tuple<int, int>>, int>
command_key(const Command& c) {
  std::vector<std::tuple<int, int>> g, e;
  for (const auto& a : c.guard) g.emplace_back(a.glass, (int)a.cond);
  for (const auto& a : c.effect) e.emplace_back(a.glass, a.inc ? 1 : 0);
  return {c.label, g, e, c.next};
}

}  // namespace

std::vector<int> canonical_command_order(const Machine& m) {
  std::vector<int> idx(m.commands.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = (int)i;
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return command_key(m.commands[a]) < command_key(m.commands[b]);
  });
  return idx;
}

std::vector<Move> moves(const Machine& m, const Config& c, bool forward) {
  std::vector<Move> out;
  for (int i : canonical_command_order(m)) {
    const Command& cmd = m.commands[i];
    if (forward) {
      if (cmd.label != c.label) continue;
      if (!guard_satisfied(cmd.guard, c)) continue;
      Config nxt = c;
      nxt.label = cmd.next;
      for (const auto& e : cmd.effect) nxt.g[e.glass - 1] += e.inc ? 1 : -1;
      out.push_back({std::move(nxt), i, true});
    } else {
      // inverse of cmd: applies where cmd could have produced c.
      if (cmd.next != c.label) continue;
      Config prev = c;
      prev.label = cmd.label;
      bool ok = true;
      for (const auto& e : cmd.effect) {
        prev.g[e.glass - 1] -= e.inc ? 1 : -1;
        if (prev.g[e.glass - 1] < 0) ok = false;
      }
      if (!ok || !guard_satisfied(cmd.guard, prev)) continue;
      out.push_back({std::move(prev), i, false});
    }
  }
  return out;
}

std::vector<Config> step(const Machine& m, const Config& c) {
  if (c.label == 0)
    throw MachineError("stop configurations have no successors");
  if ((int)c.g.size() != m.glasses)
    throw MachineError("configuration glass count mismatch");
  std::vector<Config> out;
  for (auto& mv : moves(m, c, true)) out.push_back(std::move(mv.to));
  return out;
}

std::vector<Config> step_backward(const Machine& m, const Config& c) {
  std::vector<Config> out;
  for (auto& mv : moves(m, c, false)) out.push_back(std::move(mv.to));
  return out;
}

std::optional<Config> sole_successor(const Machine& m, const Config& c) {
  if (c.label == 0) return std::nullopt;
  auto s = step(m, c);
  if (s.empty()) return std::nullopt;
  return s.front();
}

RunResult run(const Machine& m, const Config& start, long long fuel) {
  if (!is_deterministic(m))
    throw MachineError("run requires a deterministic machine");
  RunResult r;
  r.trace.start = start;
  Config cur = start;
  for (long long t = 0; t < fuel; ++t) {
    if (cur.label == 0) {
      r.kind = RunKind::Halted;
      r.final_config = cur;
      return r;
    }
    auto mv = moves(m, cur, true);
    if (mv.empty()) {
      r.kind = RunKind::Stuck;
      r.final_config = cur;
      return r;
    }
    cur = mv.front().to;
    r.trace.steps.push_back({mv.front().command_index, true, cur});
  }
  if (cur.label == 0) {
    r.kind = RunKind::Halted;
    r.final_config = cur;
    return r;
  }
  r.kind = RunKind::OutOfFuel;
  r.final_config = cur;
  return r;
}

// ---------------------------------------------------------------------------
// equivalence

namespace {

// Forward orbit of a deterministic machine: the run path until halt, stuck,
// revisit, or fuel.  complete == the whole forward orbit was seen.
struct ForwardOrbit {
  std::vector<Config> path;
  bool complete = false;
};

ForwardOrbit forward_orbit(const Machine& m, const Config& start, long long fuel) {
  ForwardOrbit o;
  std::set<Config> seen;
  Config cur = start;
  o.path.push_back(cur);
  seen.insert(cur);
  for (long long t = 0; t < fuel; ++t) {
    if (cur.label == 0) {
      o.complete = true;
      return o;
    }
    auto s = step(m, cur);
    if (s.empty()) {
      o.complete = true;
      return o;
    }
    cur = s.front();
    if (!seen.insert(cur).second) {
      o.complete = true;  // cycle closed
      return o;
    }
    o.path.push_back(cur);
  }
  return o;
}

Trace path_to_trace(const Machine& m, const std::vector<Config>& path) {
  Trace t;
  if (path.empty()) return t;
  t.start = path.front();
  for (size_t i = 1; i < path.size(); ++i) {
    for (const auto& mv : moves(m, path[i - 1], true)) {
      if (mv.to == path[i]) {
        t.steps.push_back({mv.command_index, true, path[i]});
        break;
      }
    }
  }
  return t;
}

}  // namespace

EquivResult forward_meet(const Machine& m, const Config& a, const Config& b,
                         long long fuel) {
  EquivResult r;
  auto oa = forward_orbit(m, a, fuel);
  auto ob = forward_orbit(m, b, fuel);
  std::set<Config> sa(oa.path.begin(), oa.path.end());
  std::optional<Config> meet;
  for (const auto& c : ob.path)
    if (sa.count(c)) {
      meet = c;
      break;
    }
  if (meet) {
    r.kind = EquivKind::Equivalent;
    // a -> meet forwards, then meet -> b backwards along b's path.
    std::vector<Config> pa, pb;
    for (const auto& c : oa.path) {
      pa.push_back(c);
      if (c == *meet) break;
    }
    for (const auto& c : ob.path) {
      pb.push_back(c);
      if (c == *meet) break;
    }
    Trace t = path_to_trace(m, pa);
    Trace tb = path_to_trace(m, pb);
    for (size_t i = tb.steps.size(); i-- > 0;) {
      Config to = i == 0 ? tb.start : tb.steps[i - 1].to;
      t.steps.push_back({tb.steps[i].command_index, false, to});
    }
    r.witness = std::move(t);
    return r;
  }
  r.kind = oa.complete && ob.complete ? EquivKind::NotEquivalent : EquivKind::Unknown;
  return r;
}

EquivResult equivalent_configs(const Machine& m, const Config& a,
                               const Config& b, long long fuel) {
  // BFS over Sym(M) from a, canonical expansion order.
  EquivResult r;
  std::map<Config, std::pair<Config, Move>> parent;
  std::deque<Config> queue;
  std::set<Config> seen;
  queue.push_back(a);
  seen.insert(a);
  bool found = a == b;
  long long spent = 0;
  while (!queue.empty() && !found) {
    if (spent >= fuel) break;
    Config cur = queue.front();
    queue.pop_front();
    ++spent;
    for (bool fwd : {true, false}) {
      if (cur.label == 0 && fwd) continue;
      for (auto& mv : moves(m, cur, fwd)) {
        if (seen.insert(mv.to).second) {
          parent.emplace(mv.to, std::make_pair(cur, mv));
          queue.push_back(mv.to);
          if (mv.to == b) {
            found = true;
            break;
          }
        }
      }
      if (found) break;
    }
  }
  r.expansions = spent;
  r.orbit_exhausted = queue.empty() && !found;

  EquivResult bfs;
  if (found) {
    bfs.kind = EquivKind::Equivalent;
    std::vector<std::pair<Config, Move>> rev;
    Config cur = b;
    while (!(cur == a)) {
      auto it = parent.find(cur);
      rev.push_back(it->second);
      cur = it->second.first;
    }
    Trace t;
    t.start = a;
    for (size_t i = rev.size(); i-- > 0;) {
      const Move& mv = rev[i].second;
      t.steps.push_back({mv.command_index, mv.forward, mv.to});
    }
    bfs.kind = EquivKind::Equivalent;
    bfs.witness = std::move(t);
  } else if (r.orbit_exhausted) {
    bfs.kind = EquivKind::NotEquivalent;
  } else {
    bfs.kind = EquivKind::Unknown;
  }

  if (is_deterministic(m)) {
    EquivResult fm = forward_meet(m, a, b, fuel);
    if (bfs.kind != EquivKind::Unknown && fm.kind != EquivKind::Unknown &&
        bfs.kind != fm.kind)
      throw MachineError("Sym-BFS and forward-meet verdicts disagree on " +
                         to_string(a) + " vs " + to_string(b));
    if (bfs.kind == EquivKind::Unknown && fm.kind != EquivKind::Unknown) {
      fm.expansions = spent;
      fm.orbit_exhausted = r.orbit_exhausted;
      return fm;
    }
  }
  bfs.expansions = spent;
  bfs.orbit_exhausted = r.orbit_exhausted;
  return bfs;
}

}  // namespace minsky
