#pragma once

// Annotation values for every built-in carrier. Each alternative is kept in
// canonical form by the instance that produces it, so structural equality
// coincides with semantic equality.

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace semiprov {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using VarSet = std::set<std::string>;
/// variable -> positive exponent; the empty monomial is the constant term.
using Monomial = std::map<std::string, std::uint32_t>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation or check that does not apply to the given instance.
class Inapplicable : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// natural numbers or the distinguished infinity; infinite values carry value 0
struct TropicalValue {
  bool infinite = true;
  Integer value = 0;

  static TropicalValue inf() { return {}; }
  static TropicalValue of(Integer v) { return {false, std::move(v)}; }

  friend bool operator==(const TropicalValue&, const TropicalValue&) = default;
  friend bool operator<(const TropicalValue& a, const TropicalValue& b) {
    if (a.infinite != b.infinite) return b.infinite;
    return a.value < b.value;
  }
};

/// Clearance chain 1s < C < S < T < 0s. The numeric value is the chain rank.
enum class SecurityLevel : std::uint8_t {
  Public = 0,        // 1s
  Confidential = 1,  // C
  Secret = 2,        // S
  TopSecret = 3,     // T
  Never = 4,         // 0s
};

// subset of {1s, C, S, T}; bit i is the level of rank i
struct CredentialSet {
  std::uint8_t bits = 0;

  static constexpr std::uint8_t kAll = 0x0F;

  bool contains(SecurityLevel s) const {
    return s != SecurityLevel::Never && (bits >> static_cast<unsigned>(s)) & 1U;
  }
  friend bool operator==(const CredentialSet&, const CredentialSet&) = default;
  friend auto operator<=>(const CredentialSet&, const CredentialSet&) = default;
};

/// N[X]: monomial -> positive coefficient.
struct PolynomialN {
  std::map<Monomial, Integer> terms;

  friend bool operator==(const PolynomialN&, const PolynomialN&) = default;
  friend bool operator<(const PolynomialN& a, const PolynomialN& b) { return a.terms < b.terms; }
};

/// B[X]: a set of monomials.
struct BoolMonomialSet {
  std::set<Monomial> monomials;

  friend bool operator==(const BoolMonomialSet&, const BoolMonomialSet&) = default;
  friend bool operator<(const BoolMonomialSet& a, const BoolMonomialSet& b) {
    return a.monomials < b.monomials;
  }
};

/// PosBool[X]: antichain of clauses. {} is false, {{}} is true.
struct MonotoneDNF {
  std::set<VarSet> clauses;

  friend bool operator==(const MonotoneDNF&, const MonotoneDNF&) = default;
  friend bool operator<(const MonotoneDNF& a, const MonotoneDNF& b) { return a.clauses < b.clauses; }
};

/// Bool[X]: bit r is set iff assignment r satisfies the formula. Bit j of r is
/// the value of the j-th instance variable.
struct TruthTable {
  boost::dynamic_bitset<> rows;

  friend bool operator==(const TruthTable&, const TruthTable&) = default;
  friend bool operator<(const TruthTable& a, const TruthTable& b) { return a.rows < b.rows; }
};

/// Why(X): set of witness sets, no absorption.
struct WitnessFamily {
  std::set<VarSet> witnesses;

  friend bool operator==(const WitnessFamily&, const WitnessFamily&) = default;
  friend bool operator<(const WitnessFamily& a, const WitnessFamily& b) {
    return a.witnesses < b.witnesses;
  }
};

/// Trio[X]: witness set -> positive multiplicity.
struct TrioBag {
  std::map<VarSet, Integer> bag;

  friend bool operator==(const TrioBag&, const TrioBag&) = default;
  friend bool operator<(const TrioBag& a, const TrioBag& b) { return a.bag < b.bag; }
};

/// Element of a structure given by explicit operation tables on {0..n-1}.
struct TableElement {
  std::uint8_t index = 0;

  friend bool operator==(const TableElement&, const TableElement&) = default;
  friend auto operator<=>(const TableElement&, const TableElement&) = default;
};

using Element = std::variant<bool, Integer, Rational, TropicalValue, SecurityLevel, CredentialSet,
                             PolynomialN, BoolMonomialSet, MonotoneDNF, TruthTable, WitnessFamily,
                             TrioBag, TableElement>;

template <class T>
const T& as(const Element& e) {
  if (const T* p = std::get_if<T>(&e)) return *p;
  throw Error("annotation has the wrong representation for this instance");
}

// Monomial helpers shared by N[X] and B[X].
Monomial monomial_product(const Monomial& a, const Monomial& b);
std::uint32_t degree(const Monomial& m);
/// Graded lexicographic "greater" with alphabetical variable priority.
bool grlex_greater(const Monomial& a, const Monomial& b);
std::string format_monomial(const Monomial& m);

std::string format_varset(const VarSet& s);

}  // namespace semiprov
