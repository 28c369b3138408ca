// agcirc/verdict.hpp - derivation trees, witnesses and checker verdicts
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace agcirc {

/// Thrown when a checker exceeds its configured graph, guess or tree budget.
class ResourceLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A node labelled with a production index; one child per nonterminal rhs
/// position, in rhs order.  Terminals have no tree nodes.
struct DerivationTree {
  std::size_t production = 0;
  std::vector<DerivationTree> children;

  [[nodiscard]] std::size_t height() const {
    std::size_t h = 0;
    for (const auto& c : children) h = std::max(h, c.height());
    return h + 1;
  }
  [[nodiscard]] std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }

  friend bool operator==(const DerivationTree&, const DerivationTree&) = default;
};

/// Path from the root: rhs positions (1-based) of each step.  Empty = root.
using NodePath = std::vector<std::size_t>;

struct WitnessVertex {
  NodePath path;
  std::string attr;

  friend bool operator==(const WitnessVertex&, const WitnessVertex&) = default;
};

struct Witness {
  DerivationTree tree;
  std::vector<WitnessVertex> cycle;  // closed walk; last vertex connects back to the first

  friend bool operator==(const Witness&, const Witness&) = default;
};

enum class Outcome { circular, non_circular, no_cycle_within_depth };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::circular:
      return "circular";
    case Outcome::non_circular:
      return "non_circular";
    case Outcome::no_cycle_within_depth:
      return "no_cycle_within_depth";
  }
  return "?";
}

inline std::optional<Outcome> outcome_from_string(const std::string& s) {
  if (s == "circular") return Outcome::circular;
  if (s == "non_circular") return Outcome::non_circular;
  if (s == "no_cycle_within_depth") return Outcome::no_cycle_within_depth;
  return std::nullopt;
}

struct Stats {
  std::uint64_t iterations = 0;
  std::uint64_t stored_graphs = 0;
  double elapsed_ms = 0.0;
  /// Algorithm-specific counters, in a fixed order.
  std::vector<std::pair<std::string, std::uint64_t>> counters;
  /// |IO(X)| per nonterminal (fixpoint only).
  std::vector<std::pair<std::string, std::uint64_t>> io_sizes;

  [[nodiscard]] std::uint64_t counter(const std::string& name) const {
    for (const auto& [k, v] : counters)
      if (k == name) return v;
    throw std::out_of_range("no counter " + name);
  }

  friend bool operator==(const Stats&, const Stats&) = default;
};

struct Verdict {
  Outcome outcome = Outcome::non_circular;
  std::size_t depth = 0;  // search depth for no_cycle_within_depth
  std::optional<Witness> witness;
  Stats stats;
};

}  // namespace agcirc
