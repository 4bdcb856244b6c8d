#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "semiprov/element.hpp"

namespace semiprov {

using Rng = std::mt19937_64;
using BinaryOp = std::function<Element(const Element&, const Element&)>;
using UnaryOp = std::function<Element(const Element&)>;
using Relation2 = std::function<bool(const Element&, const Element&)>;
/// Draws one element; `size` bounds magnitudes (coefficients, exponents, term counts).
using Sampler = std::function<Element(Rng&, unsigned size)>;

/// Deterministic sub-stream seed for trial `index` of a run seeded with `seed`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

enum class CarrierKind {
  Finite,   // explicit element list, exhaustive checks available
  Sampled,  // infinite (or too large to enumerate); seeded sampling only
};

enum class MonusSource { None, ClosedForm, DerivedTable };

/// A named annotation structure (K, +, *, 0, 1) with optional difference
/// operations. Immutable once registered.
struct SemiringInstance {
  std::string name;   // registry key, e.g. "security", "nat_sat7"
  std::string label;  // display name, e.g. "S", "N<=7"
  std::string family; // builder that produced it, e.g. "nat_sat"; equals name for unbounded built-ins
  CarrierKind carrier = CarrierKind::Sampled;
  std::vector<Element> elements;  // carrier order, Finite only
  Sampler sample;

  BinaryOp add;
  BinaryOp mul;
  Element zero;
  Element one;

  std::optional<BinaryOp> monus;
  MonusSource monus_source = MonusSource::None;
  std::optional<UnaryOp> negate;
  std::function<bool(const Element&)> is_zero;
  /// Closed-form natural order a <= b, where one is known.
  std::optional<Relation2> natural_order;

  std::function<std::string(const Element&)> print;
  std::function<Element(std::string_view)> parse;

  /// Shrinking support: strictly simpler candidates, and the measure they decrease.
  std::function<std::vector<Element>(const Element&)> simplify;
  std::function<std::uint64_t(const Element&)> complexity;

  /// Variables for X-parameterized instances.
  std::vector<std::string> variables;

  bool finite() const { return carrier == CarrierKind::Finite; }
  /// Position of `e` in the carrier list; throws if absent or not Finite.
  std::size_t index_of(const Element& e) const;
  Element draw(Rng& rng, unsigned size) const;
};

using InstancePtr = std::shared_ptr<const SemiringInstance>;

class RegistrationError : public Error {
 public:
  using Error::Error;
};

struct RegistrationOptions {
  std::uint64_t seed = 0x5EED0F5E3121ULL;
  std::uint64_t samples = 1000;
  unsigned size = 6;
};

/// Runs the registration gate (A1-A8, monus consistency and Galois property)
/// and freezes the instance. Finite carriers without a closed-form monus get
/// the derived monus table attached when one exists.
InstancePtr register_instance(SemiringInstance inst, const RegistrationOptions& opts = {});

}  // namespace semiprov
