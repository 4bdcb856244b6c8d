#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "semiprov/semiring.hpp"

namespace semiprov::algebra {

enum class DiffSemantics {
  Monus,         // a - b is the instance monus
  RingSubtract,  // a + (-b), requires negate
  Conditioned,   // a if b is zero, else zero
};

std::string to_string(DiffSemantics sem);
/// Accepts "monus", "ring", "cond".
std::optional<DiffSemantics> parse_diff_semantics(std::string_view text);
/// The per-annotation difference for `sem`, or nullopt when the instance lacks
/// the operation it needs.
std::optional<BinaryOp> difference_operator(const SemiringInstance& inst, DiffSemantics sem);

// ---------------------------------------------------------------------------
// Equation schemas. A1..A13 are stored once here; the relational identities
// I1..I13 are obtained from the same terms by reading + as union, * as join,
// - as difference, 0 as the empty relation and 1 as the join unit.

struct Term {
  enum class Op { Var, Zero, One, Add, Mul, Sub };

  Op op = Op::Zero;
  int var = -1;
  std::vector<Term> args;

  static Term variable(int index);
  static Term zero();
  static Term one();
  static Term add(Term l, Term r);
  static Term mul(Term l, Term r);
  static Term sub(Term l, Term r);

  bool uses_difference() const;
  friend bool operator==(const Term&, const Term&) = default;
};

struct EquationSchema {
  int number = 0;  // n of An / In
  Term lhs;
  Term rhs;
  int arity = 0;  // number of distinct variables, drawn from a, b, c
  std::string text;
};

enum class AxiomId : int { A1 = 1, A2, A3, A4, A5, A6, A7, A8, A9, A10, A11, A12, A13 };

inline constexpr int kAxiomCount = 13;

const std::vector<EquationSchema>& equation_schemas();
const EquationSchema& schema(AxiomId ax);
std::string to_string(AxiomId ax);
std::optional<AxiomId> parse_axiom(std::string_view text);
std::vector<AxiomId> all_axioms();

std::string variable_name(int index);
std::string format_term(const Term& t);

Element evaluate(const Term& t, const SemiringInstance& inst, const BinaryOp* diff,
                 std::span<const Element> env);

// ---------------------------------------------------------------------------
// Check strategies and reports.

struct Exhaustive {};

struct Sampled {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0x5EED0F5E3121ULL;
  unsigned size = 6;
  /// Worker threads; results do not depend on it.
  unsigned threads = 1;
};

using CheckStrategy = std::variant<Exhaustive, Sampled>;

std::string describe(const CheckStrategy& strat);

enum class Verdict { HoldsExhaustive, HoldsSampled, Fails, Inapplicable };

std::string to_string(Verdict v);

struct Witness {
  std::vector<std::pair<std::string, std::string>> bindings;  // printed
  std::vector<Element> values;                                // element witnesses only
  std::string lhs;
  std::string rhs;
};

struct CheckReport {
  std::string subject;   // "A13", "I11", "galois", ...
  std::string instance;  // instance name
  std::string semantics;
  std::string strategy;
  Verdict verdict = Verdict::Inapplicable;
  std::uint64_t trials = 0;
  std::optional<Witness> witness;
  std::string reason;

  bool holds() const { return verdict == Verdict::HoldsExhaustive || verdict == Verdict::HoldsSampled; }
  bool fails() const { return verdict == Verdict::Fails; }
  bool inapplicable() const { return verdict == Verdict::Inapplicable; }
};

// ---------------------------------------------------------------------------
// Natural order and monus.

/// a <= b iff a + c = b for some c. Exhaustive search on Finite carriers,
/// the registered closed form otherwise. Throws Inapplicable when undecidable.
bool natural_leq(const SemiringInstance& inst, const Element& a, const Element& b);

/// Antisymmetry of natural_leq over the whole carrier. Finite only.
bool is_naturally_ordered(const SemiringInstance& inst);

/// Monus table indexed by carrier positions: entry(a, b) = index of a - b.
struct MonusTable {
  std::size_t order = 0;
  std::vector<std::size_t> entries;

  std::size_t at(std::size_t a, std::size_t b) const { return entries[a * order + b]; }
};

/// Some pair (a, b) whose solution set {c | a <= b + c} has no least element.
struct NoMonus {
  Element a;
  Element b;
  std::vector<Element> minimal;
};

using MonusDerivation = std::variant<MonusTable, NoMonus>;

/// Least-solution monus. Requires a Finite, naturally ordered carrier.
MonusDerivation derive_monus(const SemiringInstance& inst);

/// a - b using the registered monus. Throws Inapplicable without one.
Element monus(const SemiringInstance& inst, const Element& a, const Element& b);

/// Checks An with the difference given by `sem` (only relevant for A9-A13).
CheckReport check_axiom(const SemiringInstance& inst, AxiomId ax, const CheckStrategy& strat,
                        DiffSemantics sem = DiffSemantics::Monus);

/// a - b <= c  iff  a <= b + c, over all or sampled triples.
CheckReport check_galois(const SemiringInstance& inst, const CheckStrategy& strat);

struct UniquenessResult {
  CheckReport report;
  std::uint64_t candidate_space = 0;  // n^(n*n)
  std::uint64_t visited = 0;          // tables actually evaluated
  std::vector<std::vector<std::size_t>> passing;  // tables satisfying A9-A12
  bool equals_derived = false;
};

/// Enumerates every binary operation table on the carrier and keeps those
/// satisfying A9-A12. Order <= 3 by default; order 4 needs `allow_order4`
/// and skips tables that already violate A9 or A10 on their forced cells.
UniquenessResult check_monus_uniqueness(const SemiringInstance& inst, bool allow_order4 = false);

/// Greedy shrinking of a failing element assignment, using the instance's
/// simplify/complexity pair. `still_fails` must hold for `values`.
std::vector<Element> shrink_assignment(
    const SemiringInstance& inst, std::vector<Element> values,
    const std::function<bool(std::span<const Element>)>& still_fails);

}  // namespace semiprov::algebra
