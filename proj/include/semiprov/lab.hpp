#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semiprov/algebra.hpp"
#include "semiprov/krel.hpp"

namespace semiprov::lab {

using algebra::AxiomId;
using algebra::CheckReport;
using algebra::CheckStrategy;
using algebra::DiffSemantics;
using algebra::Verdict;

// ---------------------------------------------------------------------------
// Relational identities

enum class IdentityId : int { I1 = 1, I2, I3, I4, I5, I6, I7, I8, I9, I10, I11, I12, I13, EXT1, EXT2 };

std::string to_string(IdentityId id);
std::optional<IdentityId> parse_identity(std::string_view text);
std::vector<IdentityId> all_identities();
/// In pairs with An for n <= 13.
std::optional<AxiomId> paired_axiom(IdentityId id);
IdentityId paired_identity(AxiomId ax);

/// Both sides as queries over R, S, T and the constants EMPTY (over the shared
/// schema) and UNIT (the join unit).
struct IdentityQueries {
  krel::Query lhs;
  krel::Query rhs;
  int arity = 0;
  bool uses_difference = false;
  /// Pure-join identities accept arbitrary, unrelated schemas per relation.
  bool schema_free = false;
};

const IdentityQueries& identity_queries(IdentityId id);
std::string identity_text(IdentityId id);

struct RelationGenerator {
  std::uint64_t seed = 0x5EED0F5E3121ULL;
  unsigned max_tuples = 4;
  unsigned domain = 3;
  unsigned width = 2;
  unsigned annotation_size = 4;
};

/// Random normalized relation over `schema`, values in [0, domain).
krel::KRelation generate_relation(InstancePtr inst, const krel::Schema& schema, Rng& rng,
                                  const RelationGenerator& gen);

/// Database for one trial of identity `id`: R, S, T, EMPTY, UNIT. Deterministic in `rng`.
krel::Database generate_database(InstancePtr inst, IdentityId id, Rng& rng, const RelationGenerator& gen);

/// The axiom values as a database of single-tuple relations over the schema
/// (a0), all sharing the tuple (a0=0).
krel::Database lift_assignment(InstancePtr inst, const std::vector<Element>& values);

struct Sides {
  krel::KRelation lhs;
  krel::KRelation rhs;
  bool equal() const { return lhs == rhs; }
};

/// Throws Inapplicable when `sem` is unsupported and the identity needs it.
Sides evaluate_identity(const krel::Database& db, IdentityId id, DiffSemantics sem);

std::string format_database(const krel::Database& db, int arity);

/// Greedy reduction (fewer tuples, smaller values, simpler annotations)
/// keeping `still_fails` true. Deterministic.
krel::Database shrink_database(const SemiringInstance& inst, krel::Database db,
                               const std::function<bool(const krel::Database&)>& still_fails);

struct IdentityOptions {
  std::uint64_t trials = 1000;
  RelationGenerator gen;
  unsigned threads = 1;
};

/// Samples `trials` databases. On failure the shrunk witness database is
/// written to `witness_db` when given.
CheckReport check_identity(InstancePtr inst, IdentityId id, DiffSemantics sem, const IdentityOptions& opts = {},
                           krel::Database* witness_db = nullptr);

/// Evaluates the identity on one given database.
CheckReport check_identity_on(InstancePtr inst, IdentityId id, DiffSemantics sem, const krel::Database& db);

// ---------------------------------------------------------------------------
// Axiom suites and expectations

std::vector<CheckReport> run_axiom_suite(const SemiringInstance& inst, DiffSemantics sem,
                                         const CheckStrategy& strat);

/// Exhaustive for finite carriers, Sampled(trials, seed) otherwise.
CheckStrategy default_strategy(const SemiringInstance& inst, std::uint64_t trials, std::uint64_t seed,
                               unsigned threads = 1);

struct Expectation {
  bool holds = true;
  /// The stored claim is contradicted by a registered counterexample; a
  /// mismatch is reported but is not an unexpected verdict.
  bool adjudicated = false;
  std::string note;
};

/// Stored expectation for `subject` (e.g. "A13", "I11") on an instance
/// family under `sem`; nullopt when nothing is claimed.
std::optional<Expectation> expectation(const SemiringInstance& inst, std::string_view subject, DiffSemantics sem);

/// True when the report contradicts a non-adjudicated expectation.
bool unexpected(const SemiringInstance& inst, const CheckReport& report, DiffSemantics sem);

// ---------------------------------------------------------------------------
// Classification table

struct CandidateTriple {
  std::string a, b, c;  // literals in the instance grammar
};

struct CandidateResult {
  CandidateTriple triple;
  std::string lhs;
  std::string rhs;
  bool violates = false;
};

struct Table3Row {
  std::string instance;
  std::string label;
  std::string claim;  // "holds" or "fails"
  CheckReport report;
  std::optional<CheckReport> proxy;  // exhaustive check on a finite stand-in
  std::optional<CandidateResult> candidate;
  std::string verdict;  // "holds" or "fails"
  bool agrees = false;
};

struct Table3Report {
  std::vector<Table3Row> rows;
  std::vector<std::string> disagreements;
  std::string summary;
};

struct ClassifyOptions {
  std::vector<std::string> variables = {"x", "y", "z"};
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0x5EED0F5E3121ULL;
  unsigned threads = 1;
};

/// The m-semiring built-ins in classification-table order.
const std::vector<std::string>& table3_instances();
/// Stored claim ("holds"/"fails") for A13.
std::string table3_claim(std::string_view instance);
/// Registered candidate counterexample for A13, if any.
std::optional<CandidateTriple> table3_candidate(std::string_view instance);

CandidateResult evaluate_candidate(const SemiringInstance& inst, const CandidateTriple& t);

Table3Report classify_builtins(const ClassifyOptions& opts = {});
/// Verdict lines followed by the two-column table.
std::string render_table3(const Table3Report& rep);

// ---------------------------------------------------------------------------
// Distributive-lattice witnesses for A13

struct LatticeWitness {
  Element a;
  Element b;
  Element residue;  // (a - b) * b
  /// A13 instantiated at (a := b, b := a, c := b): b*(a-b) vs a*b - b*b.
  CheckReport a13;
};

bool is_lattice_family(const SemiringInstance& inst);

/// Checks a > b and (a - b) * b != 0, and evaluates the A13 instantiation.
std::optional<LatticeWitness> verify_lattice_witness(const SemiringInstance& inst, const Element& a,
                                                     const Element& b);

/// PosBool[X] first tries the join of all generators against the join of all
/// but the last. Otherwise an exhaustive search over a finite lattice (64
/// seeded draws for sampled carriers); b is scanned in increasing natural
/// order, then a. Throws Inapplicable outside the lattice family.
std::optional<LatticeWitness> find_prop34_witness(const SemiringInstance& inst);
std::vector<LatticeWitness> find_prop34_witnesses(const SemiringInstance& inst);

// ---------------------------------------------------------------------------
// Finite semiring census

struct EnumeratedStructure {
  std::size_t order = 0;
  std::vector<std::uint8_t> add;  // row-major
  std::vector<std::uint8_t> mul;
  bool naturally_ordered = false;
  std::optional<std::vector<std::uint8_t>> monus;
  bool a9_a12 = false;   // meaningful when monus is set
  bool a13 = false;      // meaningful when monus is set
  std::string name;      // "Z2", "B", ... when recognised
};

struct EnumerationReport {
  std::size_t order = 0;
  std::uint64_t tables_scanned = 0;
  std::uint64_t semirings = 0;
  std::uint64_t naturally_ordered = 0;
  std::uint64_t with_monus = 0;
  std::uint64_t satisfying_a13 = 0;
  std::vector<EnumeratedStructure> structures;
};

struct EnumerationOptions {
  bool allow_order4 = false;
  /// Relabels carrier elements 2..n-1 before canonicalising; the counts must not change.
  std::vector<std::uint8_t> relabel;
};

/// Throws Error for n outside 1..3, or n = 4 without allow_order4.
EnumerationReport enumerate_finite_semirings(std::size_t n, const EnumerationOptions& opts = {});

std::string render_enumeration(const EnumerationReport& rep, bool dump);

// ---------------------------------------------------------------------------
// Reports

/// One JSON object per line, fields in a fixed order.
std::string to_record(const CheckReport& r);
std::string to_text(const CheckReport& r);

}  // namespace semiprov::lab
