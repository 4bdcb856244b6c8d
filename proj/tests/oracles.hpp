#pragma once
// Independent reference implementations used to cross-check the library.
// Nothing here calls into the evaluators or the monus code under test.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "semiprov/krel.hpp"

namespace oracle {

using semiprov::Element;
using semiprov::SemiringInstance;
using semiprov::krel::Query;
using semiprov::krel::Value;

// ---------------------------------------------------------------------------
// Naive relational evaluators over explicit rows.

struct Table {
  std::vector<std::string> cols;          // sorted
  std::vector<std::vector<Value>> rows;   // duplicates allowed in bag mode
};

inline std::size_t col_index(const Table& t, const std::string& c) {
  auto it = std::find(t.cols.begin(), t.cols.end(), c);
  if (it == t.cols.end()) throw std::runtime_error("oracle: no column " + c);
  return static_cast<std::size_t>(it - t.cols.begin());
}

inline void settle(Table& t, bool set) {
  std::sort(t.rows.begin(), t.rows.end());
  if (set) t.rows.erase(std::unique(t.rows.begin(), t.rows.end()), t.rows.end());
}

inline Table naive_eval(const Query& q, const std::map<std::string, Table>& db, bool set) {
  using K = Query::Kind;
  Table out;
  switch (q.kind) {
    case K::Base:
      out = db.at(q.name);
      break;
    case K::Union: {
      Table l = naive_eval(q.kids[0], db, set), r = naive_eval(q.kids[1], db, set);
      out.cols = l.cols;
      out.rows = l.rows;
      out.rows.insert(out.rows.end(), r.rows.begin(), r.rows.end());
      break;
    }
    case K::Diff: {
      Table l = naive_eval(q.kids[0], db, set), r = naive_eval(q.kids[1], db, set);
      out.cols = l.cols;
      // remove one matching occurrence per row of r (truncated multiset difference)
      std::vector<std::vector<Value>> rest = l.rows;
      for (const auto& row : r.rows) {
        auto it = std::find(rest.begin(), rest.end(), row);
        if (it != rest.end()) rest.erase(it);
      }
      if (set) {
        rest.clear();
        for (const auto& row : l.rows)
          if (std::find(r.rows.begin(), r.rows.end(), row) == r.rows.end()) rest.push_back(row);
      }
      out.rows = rest;
      break;
    }
    case K::Join: {
      Table l = naive_eval(q.kids[0], db, set), r = naive_eval(q.kids[1], db, set);
      std::set<std::string> all(l.cols.begin(), l.cols.end());
      all.insert(r.cols.begin(), r.cols.end());
      out.cols.assign(all.begin(), all.end());
      for (const auto& a : l.rows)
        for (const auto& b : r.rows) {
          std::vector<Value> row;
          bool ok = true;
          for (const auto& c : out.cols) {
            auto li = std::find(l.cols.begin(), l.cols.end(), c);
            auto ri = std::find(r.cols.begin(), r.cols.end(), c);
            if (li != l.cols.end() && ri != r.cols.end()) {
              const Value& x = a[static_cast<std::size_t>(li - l.cols.begin())];
              const Value& y = b[static_cast<std::size_t>(ri - r.cols.begin())];
              if (!(x == y)) ok = false;
              row.push_back(x);
            } else if (li != l.cols.end()) {
              row.push_back(a[static_cast<std::size_t>(li - l.cols.begin())]);
            } else {
              row.push_back(b[static_cast<std::size_t>(ri - r.cols.begin())]);
            }
          }
          if (ok) out.rows.push_back(row);
        }
      break;
    }
    case K::Project: {
      Table c = naive_eval(q.kids[0], db, set);
      std::vector<std::string> keep = q.attrs;
      std::sort(keep.begin(), keep.end());
      keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
      out.cols = keep;
      for (const auto& row : c.rows) {
        std::vector<Value> r;
        for (const auto& k : keep) r.push_back(row[col_index(c, k)]);
        out.rows.push_back(r);
      }
      break;
    }
    case K::Select: {
      Table c = naive_eval(q.kids[0], db, set);
      out.cols = c.cols;
      for (const auto& row : c.rows) {
        bool ok = true;
        for (const auto& at : q.pred.atoms) {
          const Value& lhs = row[col_index(c, at.attr)];
          const Value rhs = at.rhs_is_attr ? row[col_index(c, at.rhs_attr)] : at.constant;
          if (!(lhs == rhs)) ok = false;
        }
        if (ok) out.rows.push_back(row);
      }
      break;
    }
    case K::Rename: {
      Table c = naive_eval(q.kids[0], db, set);
      std::vector<std::string> names = c.cols;
      for (auto& n : names)
        for (const auto& [from, to] : q.renames)
          if (n == from) {
            n = to;
            break;
          }
      std::vector<std::size_t> order(names.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return names[a] < names[b]; });
      for (auto i : order) out.cols.push_back(names[i]);
      for (const auto& row : c.rows) {
        std::vector<Value> r;
        for (auto i : order) r.push_back(row[i]);
        out.rows.push_back(r);
      }
      break;
    }
  }
  settle(out, set);
  return out;
}

/// Expands a relation with natural-number (or boolean) annotations into rows.
inline Table to_table(const semiprov::krel::KRelation& r) {
  Table t;
  t.cols = r.schema();
  for (const auto& [tuple, ann] : r.rows()) {
    std::uint64_t n = 1;
    if (const auto* i = std::get_if<semiprov::Integer>(&ann)) n = static_cast<std::uint64_t>(*i);
    std::vector<Value> row;
    for (const auto& [k, v] : tuple) row.push_back(v);
    for (std::uint64_t j = 0; j < n; ++j) t.rows.push_back(row);
  }
  std::sort(t.rows.begin(), t.rows.end());
  return t;
}

// ---------------------------------------------------------------------------
// Least-solution monus over a finite carrier, straight from the definition:
// a <= b iff a + d = b for some d; a - b is the least c with a <= b + c.

inline bool brute_leq(const SemiringInstance& inst, const Element& a, const Element& b) {
  for (const auto& d : inst.elements)
    if (inst.add(a, d) == b) return true;
  return false;
}

inline std::optional<Element> least_solution(const SemiringInstance& inst, const Element& a, const Element& b) {
  std::vector<Element> sols;
  for (const auto& c : inst.elements)
    if (brute_leq(inst, a, inst.add(b, c))) sols.push_back(c);
  for (const auto& c : sols) {
    bool least = true;
    for (const auto& d : sols) least = least && brute_leq(inst, c, d);
    if (least) return c;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Finite commutative semiring census from full operation tables (no fixed
// cells, no pruning), deduplicated by brute-force isomorphism.

struct CensusCounts {
  std::uint64_t semirings = 0;
  std::uint64_t naturally_ordered = 0;
  std::uint64_t with_monus = 0;
  std::uint64_t satisfying_a13 = 0;
};

using Op = std::vector<int>;

inline int at(const Op& t, int n, int a, int b) { return t[static_cast<std::size_t>(a * n + b)]; }

inline std::vector<Op> all_tables(int n) {
  std::vector<Op> out;
  const int cells = n * n;
  std::uint64_t total = 1;
  for (int i = 0; i < cells; ++i) total *= static_cast<std::uint64_t>(n);
  for (std::uint64_t code = 0; code < total; ++code) {
    Op t(static_cast<std::size_t>(cells));
    std::uint64_t c = code;
    for (int i = 0; i < cells; ++i) {
      t[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<std::uint64_t>(n));
      c /= static_cast<std::uint64_t>(n);
    }
    out.push_back(std::move(t));
  }
  return out;
}

inline bool comm_monoid(const Op& t, int n, int unit) {
  for (int a = 0; a < n; ++a) {
    if (at(t, n, unit, a) != a) return false;
    for (int b = 0; b < n; ++b) {
      if (at(t, n, a, b) != at(t, n, b, a)) return false;
      for (int c = 0; c < n; ++c)
        if (at(t, n, at(t, n, a, b), c) != at(t, n, a, at(t, n, b, c))) return false;
    }
  }
  return true;
}

inline CensusCounts brute_census(int n) {
  CensusCounts out;
  const int one = n > 1 ? 1 : 0;
  std::vector<Op> adds, muls;
  for (auto& t : all_tables(n)) {
    if (comm_monoid(t, n, 0)) adds.push_back(t);
    bool annihilates = true;
    for (int a = 0; a < n; ++a) annihilates = annihilates && at(t, n, 0, a) == 0;
    if (annihilates && comm_monoid(t, n, one)) muls.push_back(t);
  }
  std::vector<std::pair<Op, Op>> reps;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (const auto& add : adds)
    for (const auto& mul : muls) {
      bool ok = true;
      for (int a = 0; a < n && ok; ++a)
        for (int b = 0; b < n && ok; ++b)
          for (int c = 0; c < n && ok; ++c)
            ok = at(mul, n, a, at(add, n, b, c)) == at(add, n, at(mul, n, a, b), at(mul, n, a, c));
      if (!ok) continue;
      bool fresh = true;
      for (const auto& [ra, rm] : reps) {
        std::iota(perm.begin(), perm.end(), 0);
        do {
          bool iso = perm[0] == 0 && perm[static_cast<std::size_t>(one)] == one;
          for (int a = 0; a < n && iso; ++a)
            for (int b = 0; b < n && iso; ++b) {
              const auto pa = static_cast<std::size_t>(a), pb = static_cast<std::size_t>(b);
              iso = perm[static_cast<std::size_t>(at(add, n, a, b))] == at(ra, n, perm[pa], perm[pb]) &&
                    perm[static_cast<std::size_t>(at(mul, n, a, b))] == at(rm, n, perm[pa], perm[pb]);
            }
          if (iso) fresh = false;
        } while (fresh && std::next_permutation(perm.begin(), perm.end()));
        if (!fresh) break;
      }
      if (!fresh) continue;
      reps.emplace_back(add, mul);
      ++out.semirings;

      auto leq = [&](int a, int b) {
        for (int d = 0; d < n; ++d)
          if (at(add, n, a, d) == b) return true;
        return false;
      };
      bool antisym = true;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (a != b && leq(a, b) && leq(b, a)) antisym = false;
      if (!antisym) continue;
      ++out.naturally_ordered;
      std::vector<int> monus(static_cast<std::size_t>(n * n), -1);
      bool exists = true;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          for (int c = 0; c < n; ++c) {
            if (!leq(a, at(add, n, b, c))) continue;
            bool least = true;
            for (int d = 0; d < n; ++d)
              if (leq(a, at(add, n, b, d)) && !leq(c, d)) least = false;
            if (least) monus[static_cast<std::size_t>(a * n + b)] = c;
          }
          if (monus[static_cast<std::size_t>(a * n + b)] < 0) exists = false;
        }
      if (!exists) continue;
      ++out.with_monus;
      bool a13 = true;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            if (at(mul, n, a, at(monus, n, b, c)) != at(monus, n, at(mul, n, a, b), at(mul, n, a, c))) a13 = false;
      if (a13) ++out.satisfying_a13;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Monotone boolean functions on n variables, counted by brute force over
// truth tables. For n = 3 this includes the constants false and true.

inline std::uint64_t monotone_function_count(unsigned n) {
  const unsigned rows = 1U << n;
  std::uint64_t count = 0;
  for (std::uint64_t f = 0; f < (1ULL << rows); ++f) {
    bool mono = true;
    for (unsigned v = 0; v < rows && mono; ++v)
      for (unsigned w = 0; w < rows && mono; ++w)
        if ((v & w) == v && ((f >> v) & 1U) && !((f >> w) & 1U)) mono = false;
    if (mono) ++count;
  }
  return count;
}

}  // namespace oracle
