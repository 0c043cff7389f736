#pragma once

// Internal helper shared by reordering and lifting: builds a tracked
// derivation step by step while keeping the current frontier.

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "asnf/derivation.hpp"
#include "asnf/grammar.hpp"

namespace asnf::detail {

/// Rules X M → Y with Y = X or Y → X, used to let a neighbour X swallow M.
class NeighborRules {
 public:
  NeighborRules(const Grammar& g, const std::vector<Production>& ps) {
    for (const auto& p : ps) {
      if (p.lhs.size() == 2 && p.rhs.size() == 1 && g.is_nonterminal(p.rhs[0]))
        merge_into_[{p.lhs[0], p.lhs[1]}].push_back(p.rhs[0]);
      if (p.lhs.size() == 1 && p.rhs.size() == 1 && g.is_nonterminal(p.lhs[0]) && g.is_nonterminal(p.rhs[0]))
        renamings_.insert({p.lhs[0], p.rhs[0]});
    }
  }

  /// The intermediate symbol Y for lhs → Y → keep, or keep itself when the
  /// merge goes straight back.
  std::optional<SymbolId> via(SymbolId first, SymbolId second, SymbolId keep) const {
    auto it = merge_into_.find({first, second});
    if (it == merge_into_.end()) return std::nullopt;
    for (SymbolId y : it->second)
      if (y == keep || renamings_.count({y, keep})) return y;
    return std::nullopt;
  }

 private:
  std::map<std::pair<SymbolId, SymbolId>, std::vector<SymbolId>> merge_into_;
  std::set<std::pair<SymbolId, SymbolId>> renamings_;
};

class FrontierBuilder {
 public:
  FrontierBuilder(const TrackedDerivation& base, ErrorCode on_error) : error_(on_error) {
    out_.occurrence_symbol = base.occurrence_symbol;
    out_.start_ids = base.start_ids;
    frontier_ = base.start_ids;
  }

  void restart(std::vector<OccId> start_ids) {
    out_.start_ids = start_ids;
    frontier_ = std::move(start_ids);
  }

  TrackedDerivation& out() { return out_; }
  const std::vector<OccId>& frontier() const { return frontier_; }
  SymbolId symbol(OccId o) const { return out_.occurrence_symbol.at(o); }

  std::size_t index_of(OccId o) const {
    auto it = std::find(frontier_.begin(), frontier_.end(), o);
    if (it == frontier_.end()) throw Error(error_, "occurrence is not in the current form");
    return static_cast<std::size_t>(it - frontier_.begin());
  }

  void push(TrackedStep s) {
    std::size_t k = index_of(s.consumed.front());
    if (frontier_.size() - k < s.consumed.size() ||
        !std::equal(s.consumed.begin(), s.consumed.end(), frontier_.begin() + static_cast<std::ptrdiff_t>(k)))
      throw Error(error_, "consumed occurrences are not adjacent");
    for (std::size_t i = 0; i < s.consumed.size(); ++i)
      if (symbol(s.consumed[i]) != s.production.lhs[i]) throw Error(error_, "left-hand side does not match");
    auto at = frontier_.erase(frontier_.begin() + static_cast<std::ptrdiff_t>(k),
                              frontier_.begin() + static_cast<std::ptrdiff_t>(k + s.consumed.size()));
    frontier_.insert(at, s.created.begin(), s.created.end());
    out_.steps.push_back(std::move(s));
  }

  /// Applies `p` at frontier index `idx` with fresh occurrences for the rhs.
  std::vector<OccId> apply_at(std::size_t idx, const Production& p) {
    if (idx + p.lhs.size() > frontier_.size()) throw Error(error_, "macro step runs past the form");
    TrackedStep s{p,
                  std::vector<OccId>(frontier_.begin() + static_cast<std::ptrdiff_t>(idx),
                                     frontier_.begin() + static_cast<std::ptrdiff_t>(idx + p.lhs.size())),
                  {}};
    for (SymbolId sym : p.rhs) s.created.push_back(out_.new_occurrence(sym));
    std::vector<OccId> created = s.created;
    push(std::move(s));
    return created;
  }

  /// Lets the left neighbour of `m` swallow it, else the right one. The
  /// neighbour keeps its occurrence id. Returns false when no rule applies.
  bool absorb(OccId m, const NeighborRules& rules) {
    std::size_t k = index_of(m);
    SymbolId sm = symbol(m);
    for (int side = 0; side < 2; ++side) {
      if (side == 0 ? k == 0 : k + 1 >= frontier_.size()) continue;
      OccId x = side == 0 ? frontier_[k - 1] : frontier_[k + 1];
      SymbolId sx = symbol(x);
      Sequence lhs = side == 0 ? Sequence{sx, sm} : Sequence{sm, sx};
      std::vector<OccId> run = side == 0 ? std::vector<OccId>{x, m} : std::vector<OccId>{m, x};
      auto y = rules.via(lhs[0], lhs[1], sx);
      if (!y) continue;
      if (*y == sx) {
        push(TrackedStep{Production{lhs, {sx}}, run, {x}});
      } else {
        OccId yo = out_.new_occurrence(*y);
        push(TrackedStep{Production{lhs, {*y}}, run, {yo}});
        push(TrackedStep{Production{{*y}, {sx}}, {yo}, {x}});
      }
      return true;
    }
    return false;
  }

 private:
  ErrorCode error_;
  TrackedDerivation out_;
  std::vector<OccId> frontier_;
};

}  // namespace asnf::detail
