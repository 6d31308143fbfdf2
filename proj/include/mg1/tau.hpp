#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace mg1 {

using Symbol = std::uint32_t;

/// True iff no step drops by more than one. Throws InvalidArgument on empty input.
bool is_down_skip_free(std::span<const Symbol> symbols);

/// Arrivals during the service that ends at the step `from -> to`:
/// to - from + 1, or simply `to` when leaving an empty system.
std::uint64_t zero_adjusted_increment(Symbol from, Symbol to);

/// A non-empty down-skip-free string.
class DssString {
 public:
  explicit DssString(std::vector<Symbol> symbols);

  /// Accepts a run of single digits ("100234543") or a comma-separated list.
  static DssString parse(std::string_view text);

  std::span<const Symbol> symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  Symbol front() const { return symbols_.front(); }
  Symbol back() const { return symbols_.back(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }

  /// Concatenation; throws if the junction is not down-skip-free.
  DssString concat(const DssString& tail) const;

  std::string to_string() const;

  bool operator==(const DssString&) const = default;
  auto operator<=>(const DssString&) const = default;

 private:
  std::vector<Symbol> symbols_;
};

/// Length, initial state, number of zeros, and the multiset of zero-adjusted
/// increments of a down-skip-free string.
struct TauSummary {
  std::size_t length = 0;
  Symbol initial = 0;
  std::size_t zero_count = 0;
  std::map<std::uint64_t, std::uint64_t> increments;

  bool operator==(const TauSummary&) const = default;
  auto operator<=>(const TauSummary&) const = default;
};

TauSummary tau(const DssString& s);
/// Increment sequence i_1..i_{n-1} in path order.
std::vector<std::uint64_t> increment_sequence(std::span<const Symbol> symbols);

/// Equal-length strings with identical summaries; different lengths are never equivalent.
bool tau_equiv(const DssString& x, const DssString& y);
/// As tau_equiv but without the zero count.
bool tau_tilde_equiv(const DssString& x, const DssString& y);

struct TransitionCounts {
  std::size_t length = 0;
  Symbol initial = 0;
  std::map<std::pair<Symbol, Symbol>, std::uint64_t> counts;

  bool operator==(const TransitionCounts&) const = default;
  auto operator<=>(const TransitionCounts&) const = default;
};

TransitionCounts transition_counts(const DssString& s);
bool t_equiv(const DssString& x, const DssString& y);

/// Both clauses of the terminal-state lemma for a tau-equivalent pair:
/// terminals are both in {0,1} or both equal to the same r > 1.
/// Throws InvalidArgument if the pair is not tau-equivalent.
bool check_terminal_lemma(const DssString& x, const DssString& y);

/// Checks a.x ~ b.y by direct evaluation. Throws InvalidArgument when the
/// preconditions (a ~ b, x ~ y, both concatenations down-skip-free) fail.
bool check_s_structure(const DssString& a, const DssString& b, const DssString& x, const DssString& y);

/// Swap of two disjoint blocks [first_begin, first_end) and
/// [second_begin, second_end), first_end <= second_begin. Both blocks must
/// start with the same symbol and end with the same symbol, or end with
/// 0 and 1 in some order.
struct BlockSwitch {
  std::size_t first_begin;
  std::size_t first_end;
  std::size_t second_begin;
  std::size_t second_end;
};

/// Reorders the increments i_start .. i_{start+k} (0-based increment index)
/// as `order`, a permutation of 0..k. All increments in the run must be positive.
struct IncrementPermutation {
  std::size_t start;
  std::vector<std::size_t> order;
};

using Transformation = std::variant<BlockSwitch, IncrementPermutation>;

/// Throws InvalidArgument if the transformation is not admissible for `s`.
DssString apply_transformation(const DssString& s, const Transformation& t);

/// Every admissible block switch, plus adjacent transpositions inside runs
/// of positive increments (these generate all run permutations).
std::vector<Transformation> admissible_transformations(const DssString& s);

/// All strings reachable from `s` by repeated admissible transformations.
std::vector<DssString> transformation_closure(const DssString& s);

/// Strings of the same length over {0..max_state} that are tau-equivalent to `s`.
/// Throws InvalidArgument beyond `max_length` or if `s` uses symbols above max_state.
std::uint64_t count_tau_class(const DssString& s, Symbol max_state, std::size_t max_length = 10);

/// Customers departing and arriving between the first and last observed departure.
struct FlowCounts {
  std::uint64_t departures;
  std::uint64_t arrivals;
};

FlowCounts flow_counts(const DssString& s);

struct DeparturesInvariant {
  bool departures_equal;
  FlowCounts x;
  FlowCounts y;
};

/// Requires x ~ y (throws otherwise).
DeparturesInvariant departures_invariant_check(const DssString& x, const DssString& y);

/// One row of the exhaustive combinatorics check.
struct PropertyTally {
  std::string property;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  /// Pairs exhibiting the non-invariance the property predicts (arrivals only).
  std::uint64_t witnesses = 0;
};

/// Exhaustive verification over all down-skip-free strings up to `max_len`
/// on {0..max_state}: terminal-state lemma, S-structure closure (all splits
/// with total length <= max_len), t-equivalence implying tau-equivalence,
/// and invariance of the departure count.
std::vector<PropertyTally> tau_exhaustive_check(std::size_t max_len, Symbol max_state);

namespace detail {
template <class Visit>
void extend_dss(std::vector<Symbol>& buf, std::size_t depth, Symbol max_state, Visit& visit) {
  if (depth == buf.size()) {
    visit(std::span<const Symbol>(buf));
    return;
  }
  const Symbol lowest = depth == 0 || buf[depth - 1] == 0 ? 0 : buf[depth - 1] - 1;
  for (Symbol v = lowest; v <= max_state; ++v) {
    buf[depth] = v;
    extend_dss(buf, depth + 1, max_state, visit);
  }
}
}  // namespace detail

/// Calls `visit(std::span<const Symbol>)` for every down-skip-free string of
/// the given length over {0..max_state}, in lexicographic order.
template <class Visit>
void for_each_dss(std::size_t length, Symbol max_state, Visit&& visit) {
  if (length == 0) return;
  std::vector<Symbol> buf(length, 0);
  detail::extend_dss(buf, 0, max_state, visit);
}

}  // namespace mg1
