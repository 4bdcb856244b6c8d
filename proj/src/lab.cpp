#include "semiprov/lab.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "semiprov/instances.hpp"
#include "semiprov/parallel.hpp"

namespace semiprov::lab {

using krel::Database;
using krel::KRelation;
using krel::Query;

namespace {

const char* const kRelationNames[] = {"R", "S", "T"};

Query term_to_query(const algebra::Term& t) {
  using Op = algebra::Term::Op;
  switch (t.op) {
    case Op::Var: return Query::base(kRelationNames[t.var]);
    case Op::Zero: return Query::base("EMPTY");
    case Op::One: return Query::base("UNIT");
    case Op::Add: return Query::union_of(term_to_query(t.args[0]), term_to_query(t.args[1]));
    case Op::Mul: return Query::join(term_to_query(t.args[0]), term_to_query(t.args[1]));
    case Op::Sub: return Query::diff(term_to_query(t.args[0]), term_to_query(t.args[1]));
  }
  throw Error("unknown term");
}

bool only_joins(const algebra::Term& t) {
  using Op = algebra::Term::Op;
  if (t.op == Op::Add || t.op == Op::Sub || t.op == Op::Zero) return false;
  return std::all_of(t.args.begin(), t.args.end(), only_joins);
}

std::vector<IdentityQueries> build_identities() {
  std::vector<IdentityQueries> out;
  for (const auto& eq : algebra::equation_schemas()) {
    IdentityQueries q;
    q.lhs = term_to_query(eq.lhs);
    q.rhs = term_to_query(eq.rhs);
    q.arity = eq.arity;
    q.uses_difference = eq.lhs.uses_difference() || eq.rhs.uses_difference();
    q.schema_free = only_joins(eq.lhs) && only_joins(eq.rhs);
    out.push_back(std::move(q));
  }
  krel::Predicate p;
  p.atoms.push_back(krel::Atom{"a0", false, "", std::int64_t{0}});
  const Query r = Query::base("R"), s = Query::base("S");
  IdentityQueries ext1;
  ext1.lhs = Query::select(p, Query::diff(r, s));
  ext1.rhs = Query::diff(Query::select(p, r), Query::select(p, s));
  ext1.arity = 2;
  ext1.uses_difference = true;
  out.push_back(std::move(ext1));
  IdentityQueries ext2;
  ext2.lhs = Query::project({"a0"}, Query::union_of(r, s));
  ext2.rhs = Query::union_of(Query::project({"a0"}, r), Query::project({"a0"}, s));
  ext2.arity = 2;
  out.push_back(std::move(ext2));
  return out;
}

std::string compact(const KRelation& r) {
  std::string out = "{";
  bool first = true;
  for (const auto& [t, a] : r.rows()) {
    if (!first) out += "; ";
    out += krel::format_tuple(t) + " : " + r.instance().print(a);
    first = false;
  }
  return out + "}";
}

krel::Schema shared_schema(unsigned width) {
  std::vector<std::string> attrs;
  for (unsigned i = 0; i < std::max(1U, width); ++i) attrs.push_back("a" + std::to_string(i));
  return krel::make_schema(attrs);
}

CheckReport identity_report(const SemiringInstance& inst, IdentityId id, DiffSemantics sem, std::string strategy) {
  CheckReport r;
  r.subject = to_string(id);
  r.instance = inst.name;
  r.semantics = identity_queries(id).uses_difference ? algebra::to_string(sem) : "none";
  r.strategy = std::move(strategy);
  return r;
}

algebra::Witness identity_witness(const Database& db, const IdentityQueries& q, const Sides& sides) {
  algebra::Witness w;
  for (int i = 0; i < q.arity; ++i) w.bindings.emplace_back(kRelationNames[i], compact(db.at(kRelationNames[i])));
  w.lhs = compact(sides.lhs);
  w.rhs = compact(sides.rhs);
  return w;
}

}  // namespace

std::string to_string(IdentityId id) {
  if (id == IdentityId::EXT1) return "EXT1";
  if (id == IdentityId::EXT2) return "EXT2";
  return "I" + std::to_string(static_cast<int>(id));
}

std::optional<IdentityId> parse_identity(std::string_view text) {
  for (auto id : all_identities())
    if (to_string(id) == text) return id;
  return std::nullopt;
}

std::vector<IdentityId> all_identities() {
  std::vector<IdentityId> out;
  for (int i = 1; i <= static_cast<int>(IdentityId::EXT2); ++i) out.push_back(static_cast<IdentityId>(i));
  return out;
}

std::optional<AxiomId> paired_axiom(IdentityId id) {
  const int n = static_cast<int>(id);
  if (n > algebra::kAxiomCount) return std::nullopt;
  return static_cast<AxiomId>(n);
}

IdentityId paired_identity(AxiomId ax) { return static_cast<IdentityId>(static_cast<int>(ax)); }

const IdentityQueries& identity_queries(IdentityId id) {
  static const std::vector<IdentityQueries> all = build_identities();
  return all.at(static_cast<std::size_t>(id) - 1);
}

std::string identity_text(IdentityId id) {
  const auto& q = identity_queries(id);
  return krel::format_query(q.lhs) + " = " + krel::format_query(q.rhs);
}

KRelation generate_relation(InstancePtr inst, const krel::Schema& schema, Rng& rng, const RelationGenerator& gen) {
  KRelation r(inst, schema);
  const unsigned n = std::uniform_int_distribution<unsigned>(0, gen.max_tuples)(rng);
  std::uniform_int_distribution<std::int64_t> value(0, std::max(1U, gen.domain) - 1);
  for (unsigned i = 0; i < n; ++i) {
    krel::Tuple t;
    for (const auto& a : schema) t.emplace(a, value(rng));
    r.add(std::move(t), inst->draw(rng, gen.annotation_size));
  }
  return r;
}

Database generate_database(InstancePtr inst, IdentityId id, Rng& rng, const RelationGenerator& gen) {
  const auto& q = identity_queries(id);
  const krel::Schema shared = shared_schema(gen.width);
  Database db;
  for (int i = 0; i < 3; ++i) {
    krel::Schema schema = shared;
    if (q.schema_free) {
      // nonempty subset of a0..a{width}, at most `width` attributes
      const unsigned pool = std::max(1U, gen.width) + 1;
      std::vector<std::string> attrs;
      do {
        attrs.clear();
        for (unsigned j = 0; j < pool; ++j)
          if (std::bernoulli_distribution(0.5)(rng)) attrs.push_back("a" + std::to_string(j));
      } while (attrs.empty() || attrs.size() > std::max(1U, gen.width));
      schema = krel::make_schema(attrs);
    }
    db.emplace(kRelationNames[i], generate_relation(inst, schema, rng, gen));
  }
  db.emplace("EMPTY", KRelation::empty(inst, shared));
  db.emplace("UNIT", KRelation::unit(inst));
  return db;
}

Database lift_assignment(InstancePtr inst, const std::vector<Element>& values) {
  if (values.size() > 3) throw Error("at most three values can be lifted");
  const krel::Schema schema = krel::make_schema({"a0"});
  Database db;
  for (std::size_t i = 0; i < 3; ++i) {
    KRelation r(inst, schema);
    if (i < values.size()) r.set(krel::Tuple{{"a0", std::int64_t{0}}}, values[i]);
    db.emplace(kRelationNames[i], std::move(r));
  }
  db.emplace("EMPTY", KRelation::empty(inst, schema));
  db.emplace("UNIT", KRelation::unit(inst));
  return db;
}

Sides evaluate_identity(const Database& db, IdentityId id, DiffSemantics sem) {
  const auto& q = identity_queries(id);
  return Sides{krel::eval_query(db, q.lhs, sem), krel::eval_query(db, q.rhs, sem)};
}

std::string format_database(const Database& db, int arity) {
  std::string out;
  for (int i = 0; i < arity; ++i) {
    if (!out.empty()) out += ", ";
    out += std::string(kRelationNames[i]) + "=" + compact(db.at(kRelationNames[i]));
  }
  return out;
}

Database shrink_database(const SemiringInstance& inst, Database db,
                         const std::function<bool(const Database&)>& still_fails) {
  using Measure = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>;
  auto measure = [&](const Database& d) {
    Measure m{0, 0, 0};
    for (const char* name : kRelationNames) {
      auto it = d.find(name);
      if (it == d.end()) continue;
      for (const auto& [t, a] : it->second.rows()) {
        ++std::get<0>(m);
        for (const auto& [k, v] : t)
          if (const auto* i = std::get_if<std::int64_t>(&v)) std::get<1>(m) += static_cast<std::uint64_t>(std::abs(*i));
        if (inst.complexity) std::get<2>(m) += inst.complexity(a);
      }
    }
    return m;
  };
  auto candidates = [&](const Database& d) {
    std::vector<Database> out;
    for (const char* name : kRelationNames) {
      auto it = d.find(name);
      if (it == d.end()) continue;
      const KRelation& rel = it->second;
      for (const auto& [t, a] : rel.rows()) {
        KRelation without = rel;
        without.set(t, inst.zero);
        Database c = d;
        c.insert_or_assign(name, without);
        out.push_back(c);
        for (const auto& [k, v] : t) {
          const auto* i = std::get_if<std::int64_t>(&v);
          if (!i || *i == 0) continue;
          for (std::int64_t lower : {std::int64_t{0}, *i - 1}) {
            krel::Tuple moved = t;
            moved[k] = lower;
            KRelation r2 = without;
            r2.add(moved, a);
            Database c2 = d;
            c2.insert_or_assign(name, std::move(r2));
            out.push_back(std::move(c2));
          }
        }
        if (inst.simplify) {
          for (const auto& simpler : inst.simplify(a)) {
            try {
              KRelation r3 = rel;
              r3.set(t, simpler);
              Database c3 = d;
              c3.insert_or_assign(name, std::move(r3));
              out.push_back(std::move(c3));
            } catch (const Error&) {
              // candidate outside the carrier
            }
          }
        }
      }
    }
    return out;
  };
  bool progress = true;
  while (progress) {
    progress = false;
    const Measure current = measure(db);
    for (auto& c : candidates(db)) {
      if (!(measure(c) < current)) continue;
      bool fails = false;
      try {
        fails = still_fails(c);
      } catch (const Error&) {
        fails = false;
      }
      if (fails) {
        db = std::move(c);
        progress = true;
        break;
      }
    }
  }
  return db;
}

CheckReport check_identity(InstancePtr inst, IdentityId id, DiffSemantics sem, const IdentityOptions& opts,
                           Database* witness_db) {
  std::ostringstream strategy;
  strategy << "relations(trials=" << opts.trials << ",seed=" << opts.gen.seed << ",tuples<=" << opts.gen.max_tuples
           << ",domain=" << opts.gen.domain << ",width=" << opts.gen.width << ")";
  CheckReport report = identity_report(*inst, id, sem, strategy.str());
  const auto& q = identity_queries(id);
  if (q.uses_difference && !algebra::difference_operator(*inst, sem)) {
    report.verdict = Verdict::Inapplicable;
    report.reason = inst->name + " does not support " + algebra::to_string(sem) + " difference";
    return report;
  }
  auto db_for = [&](std::uint64_t i) {
    Rng rng(stream_seed(opts.gen.seed, i));
    return generate_database(inst, id, rng, opts.gen);
  };
  auto fails = [&](const Database& db) { return !evaluate_identity(db, id, sem).equal(); };
  const auto first = first_failing(opts.trials, opts.threads, [&](std::uint64_t i) { return fails(db_for(i)); });
  if (!first) {
    report.verdict = Verdict::HoldsSampled;
    report.trials = opts.trials;
    return report;
  }
  Database db = shrink_database(*inst, db_for(*first), fails);
  report.verdict = Verdict::Fails;
  report.trials = *first + 1;
  report.witness = identity_witness(db, q, evaluate_identity(db, id, sem));
  if (witness_db) *witness_db = std::move(db);
  return report;
}

CheckReport check_identity_on(InstancePtr inst, IdentityId id, DiffSemantics sem, const Database& db) {
  CheckReport report = identity_report(*inst, id, sem, "given");
  const auto& q = identity_queries(id);
  if (q.uses_difference && !algebra::difference_operator(*inst, sem)) {
    report.verdict = Verdict::Inapplicable;
    report.reason = inst->name + " does not support " + algebra::to_string(sem) + " difference";
    return report;
  }
  report.trials = 1;
  Sides sides = evaluate_identity(db, id, sem);
  if (sides.equal()) {
    report.verdict = Verdict::HoldsSampled;
  } else {
    report.verdict = Verdict::Fails;
    report.witness = identity_witness(db, q, sides);
  }
  return report;
}

// ---------------------------------------------------------------------------

std::vector<CheckReport> run_axiom_suite(const SemiringInstance& inst, DiffSemantics sem,
                                         const CheckStrategy& strat) {
  std::vector<CheckReport> out;
  for (auto ax : algebra::all_axioms()) out.push_back(algebra::check_axiom(inst, ax, strat, sem));
  return out;
}

CheckStrategy default_strategy(const SemiringInstance& inst, std::uint64_t trials, std::uint64_t seed,
                               unsigned threads) {
  if (inst.finite()) return algebra::Exhaustive{};
  algebra::Sampled s;
  s.trials = trials;
  s.seed = seed;
  s.threads = threads;
  return s;
}

namespace {

bool is_m_semiring_family(const std::string& f) {
  static const std::set<std::string> m = {"bool",     "nat",     "realplus", "tropical", "fuzz",
                                          "tvl",      "security", "sprime",  "posbool",  "boolexpr",
                                          "natpoly",  "boolpoly", "why",     "trio",     "nat_sat",
                                          "tropical_trunc", "fuzz_grid"};
  return m.count(f) > 0;
}

// A13 adjudications: registered counterexamples to the stored classification claim.
bool a13_adjudicated(const std::string& f) {
  return f == "natpoly" || f == "boolpoly" || f == "why" || f == "trio";
}

std::optional<Expectation> axiom_expectation(const SemiringInstance& inst, int n, DiffSemantics sem) {
  const std::string& f = inst.family;
  if (n <= 8) return Expectation{true, false, "commutative semiring axiom"};
  switch (sem) {
    case DiffSemantics::Monus: {
      if (!is_m_semiring_family(f)) return std::nullopt;
      if (n <= 12) return Expectation{true, false, "m-semiring axiom"};
      if (f == "tropical_trunc") return Expectation{true, false, "truncated tropical proxy"};
      if (f == "nat_sat" || f == "fuzz_grid") return std::nullopt;
      const bool claim = table3_claim(f) == "holds";
      if (a13_adjudicated(f)) return Expectation{claim, true, "classification claim, adjudicated by candidate triple"};
      return Expectation{claim, false, "classification claim"};
    }
    case DiffSemantics::RingSubtract: {
      if (f != "int") return std::nullopt;
      if (n == 10 || n == 11) return Expectation{false, false, "ring subtraction fails A10 and A11"};
      return Expectation{true, false, "ring subtraction"};
    }
    case DiffSemantics::Conditioned: {
      if (n == 9 || n == 10) return Expectation{true, false, "conditioned difference"};
      // only one nonzero element: a + (b - a) = b + (a - b) holds
      if (n == 11) return Expectation{false, f == "bool", "conditioned difference fails A11"};
      if (n == 12 && (f == "nat" || f == "bool")) return Expectation{true, false, "conditioned difference"};
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Expectation> expectation(const SemiringInstance& inst, std::string_view subject, DiffSemantics sem) {
  if (subject.size() >= 2 && subject[0] == 'A') {
    const auto ax = algebra::parse_axiom(subject);
    if (!ax) return std::nullopt;
    return axiom_expectation(inst, static_cast<int>(*ax), sem);
  }
  const auto id = parse_identity(subject);
  if (!id) return std::nullopt;
  if (*id == IdentityId::EXT2) return Expectation{true, false, "projection distributes over union"};
  if (*id == IdentityId::EXT1) {
    if (sem != DiffSemantics::Monus) return std::nullopt;
    auto a13 = axiom_expectation(inst, 13, sem);
    if (!a13 || !a13->holds || a13->adjudicated) return std::nullopt;
    return Expectation{true, false, "selection distributes over difference where A13 holds"};
  }
  return axiom_expectation(inst, static_cast<int>(*id), sem);
}

bool unexpected(const SemiringInstance& inst, const CheckReport& report, DiffSemantics sem) {
  if (report.inapplicable()) return false;
  const auto e = expectation(inst, report.subject, sem);
  if (!e || e->adjudicated) return false;
  return e->holds != report.holds();
}

// ---------------------------------------------------------------------------
// Classification table

const std::vector<std::string>& table3_instances() {
  static const std::vector<std::string> names = {"bool",     "sprime",  "tropical", "nat",      "realplus",
                                                 "trio",     "why",     "boolexpr", "natpoly",  "boolpoly",
                                                 "tvl",      "security", "fuzz",    "posbool"};
  return names;
}

std::string table3_claim(std::string_view instance) {
  static const std::map<std::string, std::string, std::less<>> claims = {
      {"bool", "holds"},    {"sprime", "holds"},   {"tropical", "holds"}, {"nat", "holds"},
      {"realplus", "holds"}, {"trio", "holds"},    {"why", "holds"},      {"boolexpr", "holds"},
      {"natpoly", "holds"}, {"boolpoly", "holds"}, {"tvl", "fails"},      {"security", "fails"},
      {"fuzz", "fails"},    {"posbool", "fails"}};
  auto it = claims.find(instance);
  return it == claims.end() ? std::string() : it->second;
}

std::optional<CandidateTriple> table3_candidate(std::string_view instance) {
  if (instance == "natpoly" || instance == "boolpoly") return CandidateTriple{"x + 1", "x", "1"};
  if (instance == "why") return CandidateTriple{"{{x},{}}", "{{x}}", "{{}}"};
  if (instance == "trio") return CandidateTriple{"{x} + {}", "{x}", "{}"};
  return std::nullopt;
}

CandidateResult evaluate_candidate(const SemiringInstance& inst, const CandidateTriple& t) {
  const Element a = inst.parse(t.a), b = inst.parse(t.b), c = inst.parse(t.c);
  const std::vector<Element> env = {a, b, c};
  const auto diff = algebra::difference_operator(inst, DiffSemantics::Monus);
  if (!diff) throw Inapplicable(inst.name + ": no monus");
  const auto& eq = algebra::schema(AxiomId::A13);
  CandidateResult r;
  r.triple = t;
  const Element lhs = algebra::evaluate(eq.lhs, inst, &*diff, env);
  const Element rhs = algebra::evaluate(eq.rhs, inst, &*diff, env);
  r.lhs = inst.print(lhs);
  r.rhs = inst.print(rhs);
  r.violates = lhs != rhs;
  return r;
}

namespace {

std::optional<CheckReport> proxy_check(const std::string& name, const ClassifyOptions& opts) {
  // finite stand-ins for the sampled numeric carriers
  if (name == "tropical") {
    auto inst = instances::make_instance("tropical_trunc", {{}, 7U});
    return algebra::check_axiom(*inst, AxiomId::A13, algebra::Exhaustive{});
  }
  if (name == "fuzz") {
    auto inst = instances::make_instance("fuzz_grid", {{}, 4U});
    return algebra::check_axiom(*inst, AxiomId::A13, algebra::Exhaustive{});
  }
  (void)opts;
  return std::nullopt;
}

}  // namespace

Table3Report classify_builtins(const ClassifyOptions& opts) {
  Table3Report rep;
  for (const auto& name : table3_instances()) {
    instances::InstanceParams params;
    if (instances::needs_variables(name)) params.variables = opts.variables;
    auto inst = instances::make_instance(name, params);
    Table3Row row;
    row.instance = name;
    row.label = inst->label;
    row.claim = table3_claim(name);
    row.report = algebra::check_axiom(*inst, AxiomId::A13, default_strategy(*inst, opts.trials, opts.seed, opts.threads));
    bool fails = row.report.fails();
    if (auto proxy = proxy_check(name, opts)) {
      fails = fails || proxy->fails();
      row.proxy = std::move(proxy);
    }
    if (auto triple = table3_candidate(name)) {
      row.candidate = evaluate_candidate(*inst, *triple);
      fails = fails || row.candidate->violates;
    }
    row.verdict = fails ? "fails" : "holds";
    row.agrees = row.verdict == row.claim;
    if (!row.agrees) rep.disagreements.push_back(name);
    rep.rows.push_back(std::move(row));
  }
  std::ostringstream os;
  os << "classification: " << (rep.rows.size() - rep.disagreements.size()) << " agree, " << rep.disagreements.size()
     << " disagree";
  if (!rep.disagreements.empty()) {
    os << " (";
    for (std::size_t i = 0; i < rep.disagreements.size(); ++i) os << (i ? ", " : "") << rep.disagreements[i];
    os << ")";
  }
  rep.summary = os.str();
  return rep;
}

std::string render_table3(const Table3Report& rep) {
  std::ostringstream os;
  for (const auto& row : rep.rows) {
    os << "A13 " << row.instance << " (" << row.label << "): " << row.verdict << " [" << algebra::to_string(row.report.verdict);
    if (row.report.witness) {
      os << " at";
      for (const auto& [k, v] : row.report.witness->bindings) os << " " << k << "=" << v;
    }
    os << "]";
    if (row.proxy) os << " [" << row.proxy->instance << ": " << algebra::to_string(row.proxy->verdict) << "]";
    if (row.candidate) {
      os << " [candidate a=" << row.candidate->triple.a << ", b=" << row.candidate->triple.b
         << ", c=" << row.candidate->triple.c << ": " << row.candidate->lhs << " vs " << row.candidate->rhs
         << (row.candidate->violates ? ", violated" : ", satisfied") << "]";
    }
    os << "; claimed: " << row.claim << "; " << (row.agrees ? "agree" : "DISAGREE") << "\n";
  }
  std::vector<std::string> left, right;
  for (const auto& row : rep.rows) (row.verdict == "holds" ? left : right).push_back(row.label + (row.agrees ? "" : " *"));
  std::size_t width = std::string("|= A13").size();
  for (const auto& l : left) width = std::max(width, l.size());
  auto pad = [&](const std::string& s) { return s + std::string(width - s.size() + 2, ' '); };
  os << "\n" << pad("|= A13") << "| not |= A13\n" << std::string(width + 2, '-') << "+" << std::string(14, '-') << "\n";
  for (std::size_t i = 0; i < std::max(left.size(), right.size()); ++i) {
    os << pad(i < left.size() ? left[i] : "") << "| " << (i < right.size() ? right[i] : "") << "\n";
  }
  if (!rep.disagreements.empty()) os << "(* observed verdict differs from the claimed column)\n";
  os << rep.summary << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Lattice witnesses

bool is_lattice_family(const SemiringInstance& inst) {
  static const std::set<std::string> f = {"bool", "sprime", "boolexpr", "security", "tvl",
                                          "fuzz", "fuzz_grid", "posbool"};
  return f.count(inst.family) > 0;
}

std::optional<LatticeWitness> verify_lattice_witness(const SemiringInstance& inst, const Element& a,
                                                     const Element& b) {
  if (a == b || !algebra::natural_leq(inst, b, a)) return std::nullopt;
  const Element d = algebra::monus(inst, a, b);
  const Element residue = inst.mul(d, b);
  if (inst.is_zero(residue)) return std::nullopt;
  LatticeWitness w{a, b, residue, {}};
  CheckReport& r = w.a13;
  r.subject = "A13";
  r.instance = inst.name;
  r.semantics = "monus";
  r.strategy = "lattice-witness";
  r.trials = 1;
  const Element lhs = inst.mul(b, d);
  const Element rhs = algebra::monus(inst, inst.mul(a, b), inst.mul(b, b));
  r.verdict = lhs == rhs ? Verdict::HoldsSampled : Verdict::Fails;
  if (r.fails()) {
    algebra::Witness wit;
    wit.bindings = {{"a", inst.print(b)}, {"b", inst.print(a)}, {"c", inst.print(b)}};
    wit.values = {b, a, b};
    wit.lhs = inst.print(lhs);
    wit.rhs = inst.print(rhs);
    r.witness = std::move(wit);
  }
  return w;
}

namespace {

std::vector<Element> lattice_candidates(const SemiringInstance& inst) {
  std::vector<Element> elems;
  if (inst.finite()) {
    elems = inst.elements;
  } else {
    Rng rng(stream_seed(0x5EED0F5E3121ULL, 0x34));
    std::set<std::string> seen;
    for (int i = 0; i < 64; ++i) {
      Element e = inst.draw(rng, 4);
      if (seen.insert(inst.print(e)).second) elems.push_back(std::move(e));
    }
  }
  // increasing natural order: by the number of elements below, then carrier order
  std::vector<std::pair<std::size_t, std::size_t>> key;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    std::size_t below = 0;
    for (const auto& x : elems) below += algebra::natural_leq(inst, x, elems[i]) ? 1 : 0;
    key.emplace_back(below, i);
  }
  std::sort(key.begin(), key.end());
  std::vector<Element> out;
  for (const auto& [below, i] : key) out.push_back(elems[i]);
  return out;
}

}  // namespace

std::vector<LatticeWitness> find_prop34_witnesses(const SemiringInstance& inst) {
  if (!is_lattice_family(inst)) throw Inapplicable(inst.name + " is not a distributive lattice");
  if (!inst.monus) throw Inapplicable(inst.name + ": no monus");
  std::vector<LatticeWitness> out;
  const auto elems = lattice_candidates(inst);
  for (const auto& b : elems)
    for (const auto& a : elems)
      if (auto w = verify_lattice_witness(inst, a, b)) out.push_back(std::move(*w));
  return out;
}

std::optional<LatticeWitness> find_prop34_witness(const SemiringInstance& inst) {
  if (!is_lattice_family(inst)) throw Inapplicable(inst.name + " is not a distributive lattice");
  if (!inst.monus) throw Inapplicable(inst.name + ": no monus");
  // free lattices: the join of all generators over the join of all but the last
  if (inst.family == "posbool" && inst.variables.size() >= 2) {
    std::string all, rest;
    for (std::size_t i = 0; i < inst.variables.size(); ++i) {
      all += (i ? " | " : "") + inst.variables[i];
      if (i + 1 < inst.variables.size()) rest += (i ? " | " : "") + inst.variables[i];
    }
    if (auto w = verify_lattice_witness(inst, inst.parse(all), inst.parse(rest))) return w;
  }
  const auto elems = lattice_candidates(inst);
  for (const auto& b : elems)
    for (const auto& a : elems)
      if (auto w = verify_lattice_witness(inst, a, b)) return w;
  return std::nullopt;
}

}  // namespace semiprov::lab
