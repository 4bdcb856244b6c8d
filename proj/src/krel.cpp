#include "semiprov/krel.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "semiprov/instances.hpp"

namespace semiprov::krel {

std::string format_value(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return std::get<std::string>(v);
}

bool same_type(const Value& a, const Value& b) { return a.index() == b.index(); }

bool is_attribute_name(const std::string& name) {
  if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  return std::all_of(name.begin(), name.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

Schema make_schema(std::vector<std::string> attrs, bool allow_empty) {
  if (attrs.empty() && !allow_empty) throw SchemaError("schema must have at least one attribute");
  for (const auto& a : attrs)
    if (!is_attribute_name(a)) throw SchemaError("invalid attribute name '" + a + "'");
  std::sort(attrs.begin(), attrs.end());
  if (std::adjacent_find(attrs.begin(), attrs.end()) != attrs.end())
    throw SchemaError("duplicate attribute '" + *std::adjacent_find(attrs.begin(), attrs.end()) + "'");
  return attrs;
}

std::string format_schema(const Schema& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + s[i];
  return out + ")";
}

std::string format_tuple(const Tuple& t) {
  std::string out = "(";
  bool first = true;
  for (const auto& [k, v] : t) {
    if (!first) out += ", ";
    out += k + "=" + format_value(v);
    first = false;
  }
  return out + ")";
}

bool same_instance(const SemiringInstance& a, const SemiringInstance& b) {
  return &a == &b || (a.name == b.name && a.variables == b.variables);
}

// ---------------------------------------------------------------------------

KRelation::KRelation(InstancePtr inst, Schema schema) : inst_(std::move(inst)), schema_(std::move(schema)) {
  if (!inst_) throw Error("relation needs an instance");
  schema_ = make_schema(std::move(schema_), true);
}

KRelation KRelation::empty(InstancePtr inst, Schema schema) { return KRelation(std::move(inst), std::move(schema)); }

KRelation KRelation::unit(InstancePtr inst) {
  KRelation r(inst, {});
  r.set({}, inst->one);
  return r;
}

void KRelation::check_tuple(const Tuple& t) const {
  bool ok = t.size() == schema_.size();
  if (ok) {
    auto it = schema_.begin();
    for (const auto& [k, v] : t) ok = ok && k == *it++;
  }
  if (!ok) throw SchemaError("tuple " + format_tuple(t) + " does not match schema " + format_schema(schema_));
}

void KRelation::add(Tuple t, Element annotation) {
  check_tuple(t);
  Element a = instances::canonicalize(*inst_, std::move(annotation));
  auto it = rows_.find(t);
  if (it != rows_.end()) a = inst_->add(it->second, a);
  if (inst_->is_zero(a)) {
    if (it != rows_.end()) rows_.erase(it);
    return;
  }
  if (it != rows_.end()) {
    it->second = std::move(a);
  } else {
    rows_.emplace(std::move(t), std::move(a));
  }
}

void KRelation::set(Tuple t, Element annotation) {
  check_tuple(t);
  Element a = instances::canonicalize(*inst_, std::move(annotation));
  if (inst_->is_zero(a)) {
    rows_.erase(t);
    return;
  }
  rows_.insert_or_assign(std::move(t), std::move(a));
}

Element KRelation::annotation(const Tuple& t) const {
  auto it = rows_.find(t);
  return it == rows_.end() ? inst_->zero : it->second;
}

bool operator==(const KRelation& a, const KRelation& b) {
  return same_instance(*a.inst_, *b.inst_) && a.schema_ == b.schema_ && a.rows_ == b.rows_;
}

// ---------------------------------------------------------------------------

bool Predicate::operator()(const Tuple& t) const {
  for (const auto& atom : atoms) {
    const Value& left = t.at(atom.attr);
    const Value& right = atom.rhs_is_attr ? t.at(atom.rhs_attr) : atom.constant;
    if (left != right) return false;
  }
  return true;
}

namespace {

void require_compatible(const KRelation& r1, const KRelation& r2, const char* op, bool same_schema) {
  if (!same_instance(r1.instance(), r2.instance()))
    throw Error(std::string(op) + ": operands use different instances (" + r1.instance().name + ", " +
                r2.instance().name + ")");
  if (same_schema && r1.schema() != r2.schema())
    throw SchemaError(std::string(op) + ": schema mismatch " + format_schema(r1.schema()) + " vs " +
                      format_schema(r2.schema()));
}

bool has(const Schema& s, const std::string& a) { return std::binary_search(s.begin(), s.end(), a); }

Tuple restrict(const Tuple& t, const Schema& attrs) {
  Tuple out;
  for (const auto& a : attrs) out.emplace(a, t.at(a));
  return out;
}

}  // namespace

KRelation op_union(const KRelation& r1, const KRelation& r2) {
  require_compatible(r1, r2, "union", true);
  KRelation out = r1;
  for (const auto& [t, a] : r2.rows()) out.add(t, a);
  return out;
}

KRelation op_join(const KRelation& r1, const KRelation& r2) {
  require_compatible(r1, r2, "join", false);
  Schema shared;
  std::set_intersection(r1.schema().begin(), r1.schema().end(), r2.schema().begin(), r2.schema().end(),
                        std::back_inserter(shared));
  Schema combined;
  std::set_union(r1.schema().begin(), r1.schema().end(), r2.schema().begin(), r2.schema().end(),
                 std::back_inserter(combined));
  const auto& inst = r1.instance();
  std::map<Tuple, std::vector<const std::pair<const Tuple, Element>*>> groups;
  for (const auto& row : r2.rows()) groups[restrict(row.first, shared)].push_back(&row);
  KRelation out(r1.instance_ptr(), combined);
  for (const auto& [t1, a1] : r1.rows()) {
    auto g = groups.find(restrict(t1, shared));
    if (g == groups.end()) continue;
    for (const auto* row : g->second) {
      Tuple t = t1;
      t.insert(row->first.begin(), row->first.end());
      out.add(std::move(t), inst.mul(a1, row->second));
    }
  }
  return out;
}

KRelation op_project(const std::vector<std::string>& attrs, const KRelation& r) {
  for (const auto& a : attrs)
    if (!has(r.schema(), a)) throw SchemaError("project: unknown attribute '" + a + "'");
  Schema target = make_schema(attrs, true);
  KRelation out(r.instance_ptr(), target);
  for (const auto& [t, a] : r.rows()) out.add(restrict(t, target), a);
  return out;
}

KRelation op_select(const Predicate& pred, const KRelation& r) {
  for (const auto& atom : pred.atoms) {
    if (!has(r.schema(), atom.attr)) throw SchemaError("select: unknown attribute '" + atom.attr + "'");
    if (atom.rhs_is_attr && !has(r.schema(), atom.rhs_attr))
      throw SchemaError("select: unknown attribute '" + atom.rhs_attr + "'");
  }
  // type errors are raised before any row is filtered
  for (const auto& [t, a] : r.rows()) {
    for (const auto& atom : pred.atoms) {
      const Value& left = t.at(atom.attr);
      const Value& right = atom.rhs_is_attr ? t.at(atom.rhs_attr) : atom.constant;
      if (!same_type(left, right))
        throw SchemaError("select: comparing a string with an integer in " + atom.attr + "=" +
                          (atom.rhs_is_attr ? atom.rhs_attr : format_value(atom.constant)));
    }
  }
  KRelation out(r.instance_ptr(), r.schema());
  for (const auto& [t, a] : r.rows())
    if (pred(t)) out.set(t, a);
  return out;
}

KRelation op_rename(const std::vector<std::pair<std::string, std::string>>& renames, const KRelation& r) {
  std::map<std::string, std::string> mapping;
  for (const auto& [from, to] : renames) {
    if (!has(r.schema(), from)) throw SchemaError("rename: unknown attribute '" + from + "'");
    if (!is_attribute_name(to)) throw SchemaError("rename: invalid attribute name '" + to + "'");
    if (!mapping.emplace(from, to).second) throw SchemaError("rename: '" + from + "' renamed twice");
  }
  std::vector<std::string> names;
  for (const auto& a : r.schema()) names.push_back(mapping.count(a) ? mapping[a] : a);
  std::set<std::string> distinct(names.begin(), names.end());
  if (distinct.size() != names.size()) throw SchemaError("rename: resulting attributes collide");
  KRelation out(r.instance_ptr(), make_schema(names, true));
  for (const auto& [t, a] : r.rows()) {
    Tuple renamed;
    for (const auto& [k, v] : t) renamed.emplace(mapping.count(k) ? mapping[k] : k, v);
    out.set(std::move(renamed), a);
  }
  return out;
}

KRelation op_diff(DiffSemantics sem, const KRelation& r1, const KRelation& r2) {
  require_compatible(r1, r2, "difference", true);
  auto diff = algebra::difference_operator(r1.instance(), sem);
  if (!diff)
    throw Inapplicable("difference: instance " + r1.instance().name + " does not support " +
                       algebra::to_string(sem) + " semantics");
  KRelation out(r1.instance_ptr(), r1.schema());
  std::set<Tuple> keys;
  for (const auto& [t, a] : r1.rows()) keys.insert(t);
  for (const auto& [t, a] : r2.rows()) keys.insert(t);
  for (const auto& t : keys) out.set(t, (*diff)(r1.annotation(t), r2.annotation(t)));
  return out;
}

// ---------------------------------------------------------------------------

Query Query::base(std::string name) {
  Query q;
  q.kind = Kind::Base;
  q.name = std::move(name);
  return q;
}

namespace {

Query binary(Query::Kind kind, Query l, Query r) {
  Query q;
  q.kind = kind;
  q.kids.push_back(std::move(l));
  q.kids.push_back(std::move(r));
  return q;
}

}  // namespace

Query Query::union_of(Query l, Query r) { return binary(Kind::Union, std::move(l), std::move(r)); }
Query Query::join(Query l, Query r) { return binary(Kind::Join, std::move(l), std::move(r)); }
Query Query::diff(Query l, Query r) { return binary(Kind::Diff, std::move(l), std::move(r)); }

Query Query::project(std::vector<std::string> attrs, Query child) {
  Query q;
  q.kind = Kind::Project;
  q.attrs = std::move(attrs);
  q.kids.push_back(std::move(child));
  return q;
}

Query Query::select(Predicate pred, Query child) {
  Query q;
  q.kind = Kind::Select;
  q.pred = std::move(pred);
  q.kids.push_back(std::move(child));
  return q;
}

Query Query::rename(std::vector<std::pair<std::string, std::string>> renames, Query child) {
  Query q;
  q.kind = Kind::Rename;
  q.renames = std::move(renames);
  q.kids.push_back(std::move(child));
  return q;
}

SchemaMap schemas_of(const Database& db) {
  SchemaMap out;
  for (const auto& [name, rel] : db) out.emplace(name, rel.schema());
  return out;
}

Schema schema_of(const Query& q, const SchemaMap& schemas) {
  auto fail = [&](const std::string& msg) -> Schema { throw SchemaError(msg + " in '" + format_query(q) + "'"); };
  switch (q.kind) {
    case Query::Kind::Base: {
      auto it = schemas.find(q.name);
      if (it == schemas.end()) return fail("unbound relation '" + q.name + "'");
      return it->second;
    }
    case Query::Kind::Union:
    case Query::Kind::Diff: {
      Schema l = schema_of(q.kids[0], schemas);
      Schema r = schema_of(q.kids[1], schemas);
      if (l != r) return fail("operand schemas differ: " + format_schema(l) + " vs " + format_schema(r));
      return l;
    }
    case Query::Kind::Join: {
      Schema l = schema_of(q.kids[0], schemas);
      Schema r = schema_of(q.kids[1], schemas);
      Schema out;
      std::set_union(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(out));
      return out;
    }
    case Query::Kind::Project: {
      Schema c = schema_of(q.kids[0], schemas);
      for (const auto& a : q.attrs)
        if (!has(c, a)) return fail("unknown attribute '" + a + "'");
      try {
        return make_schema(q.attrs, true);
      } catch (const SchemaError& e) {
        return fail(e.what());
      }
    }
    case Query::Kind::Select: {
      Schema c = schema_of(q.kids[0], schemas);
      for (const auto& atom : q.pred.atoms) {
        if (!has(c, atom.attr)) return fail("unknown attribute '" + atom.attr + "'");
        if (atom.rhs_is_attr && !has(c, atom.rhs_attr)) return fail("unknown attribute '" + atom.rhs_attr + "'");
      }
      return c;
    }
    case Query::Kind::Rename: {
      Schema c = schema_of(q.kids[0], schemas);
      std::map<std::string, std::string> mapping;
      for (const auto& [from, to] : q.renames) {
        if (!has(c, from)) return fail("unknown attribute '" + from + "'");
        if (!mapping.emplace(from, to).second) return fail("attribute '" + from + "' renamed twice");
      }
      std::vector<std::string> names;
      for (const auto& a : c) names.push_back(mapping.count(a) ? mapping[a] : a);
      std::set<std::string> distinct(names.begin(), names.end());
      if (distinct.size() != names.size()) return fail("rename is not injective");
      return make_schema(names, true);
    }
  }
  return fail("unknown node");
}

namespace {

KRelation eval_node(const Database& db, const Query& q, DiffSemantics sem) {
  switch (q.kind) {
    case Query::Kind::Base: return db.at(q.name);
    case Query::Kind::Union: return op_union(eval_node(db, q.kids[0], sem), eval_node(db, q.kids[1], sem));
    case Query::Kind::Join: return op_join(eval_node(db, q.kids[0], sem), eval_node(db, q.kids[1], sem));
    case Query::Kind::Diff: return op_diff(sem, eval_node(db, q.kids[0], sem), eval_node(db, q.kids[1], sem));
    case Query::Kind::Project: return op_project(q.attrs, eval_node(db, q.kids[0], sem));
    case Query::Kind::Select: return op_select(q.pred, eval_node(db, q.kids[0], sem));
    case Query::Kind::Rename: return op_rename(q.renames, eval_node(db, q.kids[0], sem));
  }
  throw Error("unknown query node");
}

}  // namespace

KRelation eval_query(const Database& db, const Query& q, DiffSemantics sem) {
  schema_of(q, schemas_of(db));
  return eval_node(db, q, sem);
}

}  // namespace semiprov::krel
