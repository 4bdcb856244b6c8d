#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "semiprov/algebra.hpp"
#include "semiprov/semiring.hpp"

namespace semiprov::krel {

using algebra::DiffSemantics;

/// Domain values; ordered by type first (integers before strings), then value.
using Value = std::variant<std::int64_t, std::string>;

std::string format_value(const Value& v);
bool same_type(const Value& a, const Value& b);

/// Attribute names, kept sorted so that schemas compare as sets.
using Schema = std::vector<std::string>;

/// Attribute name to value; keys are exactly the schema's attributes.
using Tuple = std::map<std::string, Value>;

class SchemaError : public Error {
 public:
  using Error::Error;
};

bool is_attribute_name(const std::string& name);

/// Validates names and returns the canonical (sorted) schema. An empty schema
/// is accepted only when `allow_empty` is set; it carries the join unit.
Schema make_schema(std::vector<std::string> attrs, bool allow_empty = false);

std::string format_schema(const Schema& s);
std::string format_tuple(const Tuple& t);

class KRelation {
 public:
  KRelation(InstancePtr inst, Schema schema);

  /// The empty relation over `schema`.
  static KRelation empty(InstancePtr inst, Schema schema);
  /// The empty-schema relation holding the empty tuple annotated 1 (join unit).
  static KRelation unit(InstancePtr inst);

  /// Adds `annotation` to the tuple's current annotation. The value is
  /// canonicalized and zero results are dropped.
  void add(Tuple t, Element annotation);
  /// Overwrites the annotation (removing the row when it is zero).
  void set(Tuple t, Element annotation);

  /// Annotation of `t`, zero when absent.
  Element annotation(const Tuple& t) const;

  const Schema& schema() const { return schema_; }
  const SemiringInstance& instance() const { return *inst_; }
  const InstancePtr& instance_ptr() const { return inst_; }
  const std::map<Tuple, Element>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  friend bool operator==(const KRelation& a, const KRelation& b);

 private:
  void check_tuple(const Tuple& t) const;

  InstancePtr inst_;
  Schema schema_;
  std::map<Tuple, Element> rows_;
};

bool same_instance(const SemiringInstance& a, const SemiringInstance& b);

// ---------------------------------------------------------------------------

struct Atom {
  std::string attr;
  bool rhs_is_attr = false;
  std::string rhs_attr;
  Value constant;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Conjunction of equalities.
struct Predicate {
  std::vector<Atom> atoms;

  bool operator()(const Tuple& t) const;
  friend bool operator==(const Predicate&, const Predicate&) = default;
};

KRelation op_union(const KRelation& r1, const KRelation& r2);
KRelation op_join(const KRelation& r1, const KRelation& r2);
KRelation op_project(const std::vector<std::string>& attrs, const KRelation& r);
KRelation op_select(const Predicate& pred, const KRelation& r);
KRelation op_rename(const std::vector<std::pair<std::string, std::string>>& renames, const KRelation& r);
KRelation op_diff(DiffSemantics sem, const KRelation& r1, const KRelation& r2);

// ---------------------------------------------------------------------------

struct Query {
  enum class Kind { Base, Union, Join, Project, Select, Rename, Diff };

  Kind kind = Kind::Base;
  std::string name;                                        // Base
  std::vector<std::string> attrs;                          // Project
  Predicate pred;                                          // Select
  std::vector<std::pair<std::string, std::string>> renames;  // Rename, old -> new
  std::vector<Query> kids;

  static Query base(std::string name);
  static Query union_of(Query l, Query r);
  static Query join(Query l, Query r);
  static Query diff(Query l, Query r);
  static Query project(std::vector<std::string> attrs, Query child);
  static Query select(Predicate pred, Query child);
  static Query rename(std::vector<std::pair<std::string, std::string>> renames, Query child);

  friend bool operator==(const Query&, const Query&) = default;
};

using Database = std::map<std::string, KRelation>;
using SchemaMap = std::map<std::string, Schema>;

SchemaMap schemas_of(const Database& db);

/// Output schema of `q`; throws SchemaError naming the offending subexpression.
Schema schema_of(const Query& q, const SchemaMap& schemas);

/// Bottom-up evaluation; `-` is read under `sem` throughout.
KRelation eval_query(const Database& db, const Query& q, DiffSemantics sem);

// Query text. Grammar:
//   expr   := term (('UNION' | '-') term)*
//   term   := factor ('JOIN' factor)*
//   factor := NAME | '(' expr ')' | 'PROJECT' '[' names ']' factor
//           | 'SELECT' '[' atom (',' atom)* ']' factor
//           | 'RENAME' '[' NAME '->' NAME (',' NAME '->' NAME)* ']' factor
//   atom   := NAME '=' (NAME | INT | STRING)
// STRING is single- or double-quoted, with the quote doubled to escape it.

/// Throws ParseError with line and column.
Query parse_query(std::string_view src);
/// Minimal-parenthesis rendering; parse_query(format_query(q)) == q.
std::string format_query(const Query& q);

}  // namespace semiprov::krel
