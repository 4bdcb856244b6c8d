#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semiprov/semiring.hpp"

namespace semiprov::instances {

struct InstanceParams {
  std::vector<std::string> variables;  // X for the X-parameterized instances
  std::optional<unsigned> bound;       // k for nat_sat, tropical_trunc, fuzz_grid
};

/// Built-in instances:
///   bool nat realplus int tropical fuzz tvl security sprime
///   posbool boolexpr natpoly boolpoly why trio
/// and bounded finite proxies:
///   nat_sat (N saturating at k), tropical_trunc ({0..k} u {inf}), fuzz_grid ({0, 1/k, .., 1}).
/// Instances are registered (and gate-checked) once per parameterization and cached.
InstancePtr make_instance(std::string_view name, const InstanceParams& params = {});

const std::vector<std::string>& builtin_names();
const std::vector<std::string>& bounded_names();
bool needs_variables(std::string_view name);

/// A structure on {0..n-1} given by row-major tables; 0 and 1 are elements 0 and 1.
InstancePtr make_table_instance(std::string name, std::size_t order, std::vector<std::uint8_t> add,
                                std::vector<std::uint8_t> mul);

/// Lattice-family monus: inf{c | a <= b + c}. Chains give a when b is strictly
/// below a in the natural order and zero otherwise; PosBool[X] takes the
/// monotone closure of a AND NOT b.
Element lattice_monus(const SemiringInstance& inst, const Element& a, const Element& b);

/// Closed-form monus for the pointwise family: truncated subtraction
/// (N, R+, N[X], Trio[X]), set difference (B[X], Why(X), S'), a AND NOT b
/// (B, Bool[X]) and the tropical rule.
Element pointwise_monus(const SemiringInstance& inst, const Element& a, const Element& b);

/// Up-set of s in the chain 1s < C < S < T; 0s maps to the empty set.
CredentialSet embed_security(SecurityLevel s);

/// Brings a structurally well-formed raw value into the instance's canonical
/// form. Throws Error for values outside the carrier.
Element canonicalize(const SemiringInstance& inst, Element raw);

std::string to_string(SecurityLevel s);
std::optional<SecurityLevel> parse_security_level(std::string_view text);
std::vector<SecurityLevel> security_chain();

/// Antichain reduction by absorption.
MonotoneDNF minimize(MonotoneDNF dnf);

}  // namespace semiprov::instances
