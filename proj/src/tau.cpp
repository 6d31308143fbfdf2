#include "mg1/tau.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "mg1/errors.hpp"
#include "mg1/text_format.hpp"

namespace mg1 {

bool is_down_skip_free(std::span<const Symbol> symbols) {
  if (symbols.empty()) throw InvalidArgument("down-skip-free check on an empty string");
  for (std::size_t i = 1; i < symbols.size(); ++i) {
    if (symbols[i - 1] > symbols[i] + 1) return false;
  }
  return true;
}

std::uint64_t zero_adjusted_increment(Symbol from, Symbol to) {
  // Down-skip-freeness guarantees to + 1 >= from.
  return from == 0 ? std::uint64_t{to} : std::uint64_t{to} + 1 - from;
}

DssString::DssString(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  if (!is_down_skip_free(symbols_)) throw InvalidArgument("string is not down-skip-free: " + to_string());
}

DssString DssString::parse(std::string_view text) {
  text = trim(text);
  std::vector<Symbol> symbols;
  if (text.find(',') != std::string_view::npos) {
    for (auto field : split(text, ',')) {
      const auto v = parse_uint(field);
      if (v > 0xFFFFFFFFULL) throw InvalidArgument("symbol out of range");
      symbols.push_back(static_cast<Symbol>(v));
    }
  } else {
    for (char c : text) {
      if (c < '0' || c > '9') throw InvalidArgument("expected digits in '" + std::string(text) + "'");
      symbols.push_back(static_cast<Symbol>(c - '0'));
    }
  }
  return DssString(std::move(symbols));
}

DssString DssString::concat(const DssString& tail) const {
  std::vector<Symbol> joined(symbols_);
  joined.insert(joined.end(), tail.symbols_.begin(), tail.symbols_.end());
  return DssString(std::move(joined));
}

std::string DssString::to_string() const {
  const bool digits = std::all_of(symbols_.begin(), symbols_.end(), [](Symbol v) { return v < 10; });
  std::string out;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!digits && i) out += ',';
    out += std::to_string(symbols_[i]);
  }
  return out;
}

std::vector<std::uint64_t> increment_sequence(std::span<const Symbol> symbols) {
  std::vector<std::uint64_t> out;
  if (symbols.size() < 2) return out;
  out.reserve(symbols.size() - 1);
  for (std::size_t j = 0; j + 1 < symbols.size(); ++j) {
    out.push_back(zero_adjusted_increment(symbols[j], symbols[j + 1]));
  }
  return out;
}

TauSummary tau(const DssString& s) {
  const auto sym = s.symbols();
  TauSummary out;
  out.length = sym.size();
  out.initial = sym.front();
  out.zero_count = static_cast<std::size_t>(std::count(sym.begin(), sym.end(), Symbol{0}));
  for (std::size_t j = 0; j + 1 < sym.size(); ++j) ++out.increments[zero_adjusted_increment(sym[j], sym[j + 1])];
  return out;
}

bool tau_equiv(const DssString& x, const DssString& y) {
  return x.size() == y.size() && tau(x) == tau(y);
}

bool tau_tilde_equiv(const DssString& x, const DssString& y) {
  if (x.size() != y.size()) return false;
  const auto tx = tau(x);
  const auto ty = tau(y);
  return tx.initial == ty.initial && tx.increments == ty.increments;
}

TransitionCounts transition_counts(const DssString& s) {
  const auto sym = s.symbols();
  TransitionCounts out;
  out.length = sym.size();
  out.initial = sym.front();
  for (std::size_t j = 0; j + 1 < sym.size(); ++j) ++out.counts[{sym[j], sym[j + 1]}];
  return out;
}

bool t_equiv(const DssString& x, const DssString& y) { return transition_counts(x) == transition_counts(y); }

bool check_terminal_lemma(const DssString& x, const DssString& y) {
  if (!tau_equiv(x, y)) throw InvalidArgument("terminal-state lemma needs a tau-equivalent pair");
  const Symbol a = x.back();
  const Symbol b = y.back();
  const bool low_a = a <= 1;
  const bool low_b = b <= 1;
  const bool clause_low = low_a == low_b;
  const bool clause_high = low_a || (a == b);
  return clause_low && clause_high;
}

bool check_s_structure(const DssString& a, const DssString& b, const DssString& x, const DssString& y) {
  if (!tau_equiv(a, b) || !tau_equiv(x, y)) {
    throw InvalidArgument("S-structure check needs a ~ b and x ~ y");
  }
  if (a.back() > x.front() + 1 || b.back() > y.front() + 1) {
    throw InvalidArgument("S-structure check needs down-skip-free concatenations");
  }
  return tau_equiv(a.concat(x), b.concat(y));
}

namespace {

bool ends_compatible(Symbol e1, Symbol e2) { return e1 == e2 || (e1 <= 1 && e2 <= 1); }

std::vector<Symbol> rebuild_from_increments(Symbol initial, std::span<const std::uint64_t> increments) {
  std::vector<Symbol> out;
  out.reserve(increments.size() + 1);
  out.push_back(initial);
  for (auto inc : increments) {
    const Symbol cur = out.back();
    const std::uint64_t next = cur == 0 ? inc : cur + inc - 1;
    if (next > 0xFFFFFFFFULL) throw InvalidArgument("rebuilt string overflows the symbol range");
    out.push_back(static_cast<Symbol>(next));
  }
  return out;
}

DssString apply_block_switch(const DssString& s, const BlockSwitch& t) {
  const auto sym = s.symbols();
  if (!(t.first_begin < t.first_end && t.first_end <= t.second_begin && t.second_begin < t.second_end &&
        t.second_end <= sym.size())) {
    throw InvalidArgument("block switch needs two disjoint, ordered, non-empty blocks inside the string");
  }
  if (sym[t.first_begin] != sym[t.second_begin]) {
    throw InvalidArgument("block switch needs blocks with the same initial state");
  }
  if (!ends_compatible(sym[t.first_end - 1], sym[t.second_end - 1])) {
    throw InvalidArgument("block switch needs equal end symbols, or ends 0 and 1");
  }
  std::vector<Symbol> out;
  out.reserve(sym.size());
  auto append = [&](std::size_t from, std::size_t to) { out.insert(out.end(), sym.begin() + from, sym.begin() + to); };
  append(0, t.first_begin);
  append(t.second_begin, t.second_end);
  append(t.first_end, t.second_begin);
  append(t.first_begin, t.first_end);
  append(t.second_end, sym.size());
  return DssString(std::move(out));
}

DssString apply_increment_permutation(const DssString& s, const IncrementPermutation& t) {
  auto inc = increment_sequence(s.symbols());
  const std::size_t k = t.order.size();
  if (k == 0 || t.start + k > inc.size()) throw InvalidArgument("increment permutation out of range");
  std::vector<std::size_t> check(t.order);
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < k; ++i) {
    if (check[i] != i) throw InvalidArgument("increment permutation is not a permutation");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (inc[t.start + i] == 0) throw InvalidArgument("increment permutation must act on positive increments");
  }
  std::vector<std::uint64_t> permuted(inc);
  for (std::size_t i = 0; i < k; ++i) permuted[t.start + i] = inc[t.start + t.order[i]];
  return DssString(rebuild_from_increments(s.front(), permuted));
}

}  // namespace

DssString apply_transformation(const DssString& s, const Transformation& t) {
  if (const auto* block = std::get_if<BlockSwitch>(&t)) return apply_block_switch(s, *block);
  return apply_increment_permutation(s, std::get<IncrementPermutation>(t));
}

std::vector<Transformation> admissible_transformations(const DssString& s) {
  const auto sym = s.symbols();
  const std::size_t n = sym.size();
  std::vector<Transformation> out;
  for (std::size_t fb = 0; fb < n; ++fb) {
    for (std::size_t fe = fb + 1; fe <= n; ++fe) {
      for (std::size_t sb = fe; sb < n; ++sb) {
        if (sym[sb] != sym[fb]) continue;
        for (std::size_t se = sb + 1; se <= n; ++se) {
          if (ends_compatible(sym[fe - 1], sym[se - 1])) out.push_back(BlockSwitch{fb, fe, sb, se});
        }
      }
    }
  }
  const auto inc = increment_sequence(sym);
  for (std::size_t j = 0; j + 1 < inc.size(); ++j) {
    if (inc[j] > 0 && inc[j + 1] > 0 && inc[j] != inc[j + 1]) {
      out.push_back(IncrementPermutation{j, {1, 0}});
    }
  }
  return out;
}

std::vector<DssString> transformation_closure(const DssString& s) {
  std::set<DssString> seen{s};
  std::deque<DssString> frontier{s};
  while (!frontier.empty()) {
    const DssString cur = frontier.front();
    frontier.pop_front();
    for (const auto& t : admissible_transformations(cur)) {
      auto next = apply_transformation(cur, t);
      if (seen.insert(next).second) frontier.push_back(std::move(next));
    }
  }
  return {seen.begin(), seen.end()};
}

std::uint64_t count_tau_class(const DssString& s, Symbol max_state, std::size_t max_length) {
  if (s.size() > max_length) {
    throw InvalidArgument("count_tau_class: length " + std::to_string(s.size()) + " exceeds bound " +
                          std::to_string(max_length));
  }
  const auto sym = s.symbols();
  if (*std::max_element(sym.begin(), sym.end()) > max_state) {
    throw InvalidArgument("count_tau_class: string uses symbols above max_state");
  }
  const auto target = tau(s);
  std::uint64_t count = 0;
  for_each_dss(s.size(), max_state, [&](std::span<const Symbol> y) {
    if (tau(DssString({y.begin(), y.end()})) == target) ++count;
  });
  return count;
}

FlowCounts flow_counts(const DssString& s) {
  const std::uint64_t departures = s.size() - 1;
  // N(T_n) = N(T_1) + arrivals - departures over the window (T_1, T_n].
  const std::uint64_t arrivals = departures + s.back() - s.front();
  return {departures, arrivals};
}

DeparturesInvariant departures_invariant_check(const DssString& x, const DssString& y) {
  if (!tau_equiv(x, y)) throw InvalidArgument("departures invariant check needs a tau-equivalent pair");
  const auto fx = flow_counts(x);
  const auto fy = flow_counts(y);
  return {fx.departures == fy.departures, fx, fy};
}

std::vector<PropertyTally> tau_exhaustive_check(std::size_t max_len, Symbol max_state) {
  PropertyTally terminal{"terminal-state lemma"};
  PropertyTally s_structure{"S-structure closure"};
  PropertyTally t_implies_tau{"t-equiv implies tau-equiv"};
  PropertyTally departures{"departures invariant"};

  // classes[len] : tau summary -> members
  std::vector<std::map<TauSummary, std::vector<DssString>>> classes(max_len + 1);
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::map<TransitionCounts, std::vector<DssString>> t_classes;
    for_each_dss(len, max_state, [&](std::span<const Symbol> sym) {
      DssString s({sym.begin(), sym.end()});
      classes[len][tau(s)].push_back(s);
      t_classes[transition_counts(s)].push_back(std::move(s));
    });

    for (const auto& [summary, members] : classes[len]) {
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
          ++terminal.checked;
          if (!check_terminal_lemma(members[i], members[j])) ++terminal.violations;
          ++departures.checked;
          const auto d = departures_invariant_check(members[i], members[j]);
          if (!d.departures_equal) ++departures.violations;
          if (d.x.arrivals != d.y.arrivals) ++departures.witnesses;
        }
      }
    }
    for (const auto& [counts, members] : t_classes) {
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
          ++t_implies_tau.checked;
          if (!tau_equiv(members[i], members[j])) ++t_implies_tau.violations;
        }
      }
    }
  }

  for (std::size_t la = 1; la < max_len; ++la) {
    for (std::size_t lx = 1; la + lx <= max_len; ++lx) {
      for (const auto& [sa, left] : classes[la]) {
        for (const auto& [sx, right] : classes[lx]) {
          for (const auto& a : left) {
            for (const auto& b : left) {
              for (const auto& x : right) {
                if (a.back() > x.front() + 1) continue;
                const auto ax = tau(a.concat(x));
                for (const auto& y : right) {
                  if (b.back() > y.front() + 1) continue;
                  ++s_structure.checked;
                  if (tau(b.concat(y)) != ax) ++s_structure.violations;
                }
              }
            }
          }
        }
      }
    }
  }
  return {terminal, s_structure, t_implies_tau, departures};
}

}  // namespace mg1
