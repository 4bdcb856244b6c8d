#include "doctest.h"
#include "json.hpp"
#include "semiprov/instances.hpp"
#include "semiprov/lab.hpp"

using namespace semiprov;
using namespace semiprov::lab;
using krel::Database;
using krel::KRelation;
using krel::Tuple;
using krel::Value;

namespace {

InstancePtr inst(std::string_view name) {
  if (instances::needs_variables(name)) return instances::make_instance(name, {{"x", "y", "z"}, std::nullopt});
  return instances::make_instance(name);
}

Tuple t0(std::int64_t v = 0) { return {{"a0", Value(v)}}; }

KRelation single(const InstancePtr& i, const std::string& ann) {
  KRelation r(i, {"a0"});
  r.add(t0(), i->parse(ann));
  return r;
}

Database with_constants(const InstancePtr& i, Database db) {
  db.emplace("EMPTY", KRelation::empty(i, {"a0"}));
  db.emplace("UNIT", KRelation::unit(i));
  return db;
}

std::size_t tuples(const Database& db) {
  std::size_t n = 0;
  for (const auto& [k, r] : db)
    if (k != "UNIT") n += r.size();
  return n;
}

}  // namespace

TEST_CASE("identities pair with axioms") {
  CHECK(all_identities().size() == 15);
  for (int n = 1; n <= 13; ++n) {
    const auto ax = static_cast<AxiomId>(n);
    const auto id = paired_identity(ax);
    CHECK(paired_axiom(id) == ax);
    CHECK(to_string(id) == "I" + std::to_string(n));
    CHECK(identity_queries(id).arity == algebra::schema(ax).arity);
    CHECK(identity_queries(id).uses_difference == (n >= 9));
  }
  CHECK_FALSE(paired_axiom(IdentityId::EXT1).has_value());
  CHECK(parse_identity("EXT2") == IdentityId::EXT2);
  CHECK(krel::format_query(identity_queries(IdentityId::I13).rhs) == "R JOIN S - R JOIN T");
  CHECK(krel::format_query(identity_queries(IdentityId::I11).lhs) == "R UNION (S - R)");
}

TEST_CASE("identity checks on the documented instances") {
  auto nat = inst("nat");
  auto r = check_identity(nat, IdentityId::I11, DiffSemantics::Monus);
  CHECK(r.verdict == Verdict::HoldsSampled);
  CHECK(r.trials == 1000);
  // R(t) = 2, S(t) = 5
  auto given = with_constants(nat, {{"R", single(nat, "2")}, {"S", single(nat, "5")}});
  auto sides = evaluate_identity(given, IdentityId::I11, DiffSemantics::Monus);
  CHECK(sides.lhs.annotation(t0()) == nat->parse("5"));
  CHECK(sides.equal());

  auto z = inst("int");
  Database wz;
  auto rz = check_identity(z, IdentityId::I11, DiffSemantics::RingSubtract, {}, &wz);
  CHECK(rz.fails());
  REQUIRE(rz.witness.has_value());
  CHECK_FALSE(evaluate_identity(wz, IdentityId::I11, DiffSemantics::RingSubtract).equal());
  auto gz = with_constants(z, {{"R", single(z, "1")}, {"S", single(z, "2")}});
  CHECK_FALSE(evaluate_identity(gz, IdentityId::I11, DiffSemantics::RingSubtract).equal());

  Database wn;
  auto rc = check_identity(nat, IdentityId::I11, DiffSemantics::Conditioned, {}, &wn);
  CHECK(rc.fails());
  CHECK_FALSE(evaluate_identity(wn, IdentityId::I11, DiffSemantics::Conditioned).equal());
  auto gn = with_constants(nat, {{"R", single(nat, "1")}, {"S", single(nat, "2")}});
  auto sn = evaluate_identity(gn, IdentityId::I11, DiffSemantics::Conditioned);
  CHECK(sn.lhs.annotation(t0()) == nat->parse("1"));
  CHECK(sn.rhs.annotation(t0()) == nat->parse("2"));

  auto sec = inst("security");
  CHECK_THROWS_AS(evaluate_identity(with_constants(sec, {{"R", single(sec, "C")}, {"S", single(sec, "C")}}),
                                    IdentityId::I11, DiffSemantics::RingSubtract),
                  Inapplicable);
  CHECK(check_identity(sec, IdentityId::I9, DiffSemantics::RingSubtract).inapplicable());
}

TEST_CASE("identity checks do not depend on the thread count") {
  auto np = inst("natpoly");
  IdentityOptions one, three;
  three.threads = 3;
  auto a = check_identity(np, IdentityId::I13, DiffSemantics::Monus, one);
  auto b = check_identity(np, IdentityId::I13, DiffSemantics::Monus, three);
  CHECK(to_record(a) == to_record(b));
}

TEST_CASE("generated relations are normalized and deterministic") {
  auto np = inst("natpoly");
  RelationGenerator gen;
  Rng r1(stream_seed(gen.seed, 3)), r2(stream_seed(gen.seed, 3));
  auto d1 = generate_database(np, IdentityId::I13, r1, gen);
  auto d2 = generate_database(np, IdentityId::I13, r2, gen);
  CHECK(d1 == d2);
  for (const auto& [k, r] : d1) {
    CHECK(r.size() <= gen.max_tuples + 1);
    for (const auto& [t, a] : r.rows()) {
      CHECK_FALSE(np->is_zero(a));
      for (const auto& [attr, v] : t) {
        auto iv = std::get<std::int64_t>(v);
        CHECK((iv >= 0 && iv < gen.domain));
      }
    }
  }
  CHECK(d1.count("R"));
  CHECK(d1.count("EMPTY"));
  CHECK(d1.at("UNIT") == KRelation::unit(np));
}

TEST_CASE("lifting an assignment gives single-tuple relations") {
  auto sec = inst("security");
  auto db = lift_assignment(sec, {sec->parse("S"), sec->parse("T"), sec->parse("S")});
  CHECK(db.at("R").annotation(t0()) == sec->parse("S"));
  CHECK(db.at("S").annotation(t0()) == sec->parse("T"));
  CHECK(db.at("T").annotation(t0()) == sec->parse("S"));
  CHECK(db.at("R").size() == 1);
  CHECK(db.count("EMPTY") == 1);
  CHECK(db.count("UNIT") == 1);
}

TEST_CASE("shrinking a multi-tuple I13 failure on security") {
  auto sec = inst("security");
  Database db;
  auto make = [&](std::vector<std::string> anns) {
    KRelation r(sec, {"a0"});
    for (std::size_t i = 0; i < anns.size(); ++i) r.add(t0(static_cast<std::int64_t>(i)), sec->parse(anns[i]));
    return r;
  };
  db.emplace("R", make({"S", "T", "C"}));
  db.emplace("S", make({"T", "C", "S"}));
  db.emplace("T", make({"S", "S", "T"}));
  db = with_constants(sec, db);
  auto fails = [](const Database& d) { return !evaluate_identity(d, IdentityId::I13, DiffSemantics::Monus).equal(); };
  REQUIRE(fails(db));
  auto small = shrink_database(*sec, db, fails);
  CHECK(fails(small));
  for (const char* k : {"R", "S", "T"}) CHECK(small.at(k).size() <= 1);
  CHECK(tuples(small) < tuples(db));
  // a fixpoint: shrinking again changes nothing
  CHECK(shrink_database(*sec, small, fails) == small);
}

TEST_CASE("shrinking an int I11 failure") {
  auto z = inst("int");
  auto db = with_constants(z, {{"R", single(z, "17")}, {"S", single(z, "4")}});
  auto fails = [](const Database& d) {
    return !evaluate_identity(d, IdentityId::I11, DiffSemantics::RingSubtract).equal();
  };
  REQUIRE(fails(db));
  auto small = shrink_database(*z, db, fails);
  CHECK(fails(small));
  const auto r = as<Integer>(small.at("R").annotation(t0()));
  const auto s = as<Integer>(small.at("S").annotation(t0()));
  CHECK(abs(r) + abs(s) <= 2);
  CHECK(small.at("R").annotation(t0()) != small.at("S").annotation(t0()));
}

TEST_CASE("axiom suites") {
  auto sp = inst("sprime");
  for (const auto& r : run_axiom_suite(*sp, DiffSemantics::Monus, algebra::Exhaustive{}))
    CHECK(r.verdict == Verdict::HoldsExhaustive);

  auto sec = inst("security");
  auto rs = run_axiom_suite(*sec, DiffSemantics::Monus, algebra::Exhaustive{});
  REQUIRE(rs.size() == 13);
  for (int n = 0; n < 12; ++n) CHECK(rs[static_cast<std::size_t>(n)].verdict == Verdict::HoldsExhaustive);
  CHECK(rs[12].fails());
  for (const auto& r : rs) CHECK_FALSE(unexpected(*sec, r, DiffSemantics::Monus));

  auto z = inst("int");
  auto rz = run_axiom_suite(*z, DiffSemantics::RingSubtract, default_strategy(*z, 2000, 1));
  CHECK(rz[8].holds());
  CHECK(rz[9].fails());
  CHECK(rz[10].fails());
  CHECK(rz[11].holds());
  CHECK(rz[12].holds());
  for (const auto& r : rz) CHECK_FALSE(unexpected(*z, r, DiffSemantics::RingSubtract));
  // A10 witness: 0 - a = -a
  REQUIRE(rz[9].witness.has_value());
  CHECK(rz[9].witness->lhs == "-" + rz[9].witness->bindings[0].second);
}

TEST_CASE("expectations") {
  auto sec = inst("security");
  auto e = expectation(*sec, "A13", DiffSemantics::Monus);
  REQUIRE(e.has_value());
  CHECK_FALSE(e->holds);
  CHECK(expectation(*sec, "I13", DiffSemantics::Monus)->holds == false);
  CHECK(expectation(*inst("bool"), "A13", DiffSemantics::Monus)->holds);
  auto np = expectation(*inst("natpoly"), "A13", DiffSemantics::Monus);
  REQUIRE(np.has_value());
  CHECK(np->adjudicated);
  CHECK(expectation(*inst("nat"), "A11", DiffSemantics::Conditioned)->holds == false);
  CHECK(expectation(*inst("int"), "A10", DiffSemantics::RingSubtract)->holds == false);
  CHECK_FALSE(expectation(*instances::make_instance("nat_sat", {{}, 3U}), "A13", DiffSemantics::Monus).has_value());

  // a holding A13 on security would be unexpected
  CheckReport fake;
  fake.subject = "A13";
  fake.verdict = Verdict::HoldsExhaustive;
  CHECK(unexpected(*sec, fake, DiffSemantics::Monus));
}

TEST_CASE("classification candidates") {
  CHECK(table3_instances().size() == 14);
  CHECK(table3_claim("security") == "fails");
  CHECK(table3_claim("tropical") == "holds");
  CHECK(table3_claim("natpoly") == "holds");
  auto np = inst("natpoly");
  auto c = table3_candidate("natpoly");
  REQUIRE(c.has_value());
  CHECK(c->a == "x + 1");
  auto res = evaluate_candidate(*np, *c);
  // a*(b - c) = (x+1)*x; a*b - a*c = (x^2 + x) - (x + 1) = x^2
  CHECK(np->parse(res.lhs) == np->parse("x^2 + x"));
  CHECK(np->parse(res.rhs) == np->parse("x^2"));
  CHECK(res.violates);
  for (const char* name : {"boolpoly", "why", "trio"}) {
    auto i = inst(name);
    auto cand = table3_candidate(name);
    REQUIRE(cand.has_value());
    auto r = evaluate_candidate(*i, *cand);
    const Element a = i->parse(cand->a), b = i->parse(cand->b), cc = i->parse(cand->c);
    const Element lhs = i->mul(a, algebra::monus(*i, b, cc));
    const Element rhs = algebra::monus(*i, i->mul(a, b), i->mul(a, cc));
    CHECK(r.violates == (lhs != rhs));
    CHECK(i->parse(r.lhs) == lhs);
  }
  CHECK_FALSE(table3_candidate("bool").has_value());
}

TEST_CASE("classify_builtins flags agreements and disagreements") {
  ClassifyOptions opts;
  opts.trials = 2000;
  auto rep = classify_builtins(opts);
  REQUIRE(rep.rows.size() == 14);
  std::set<std::string> seen;
  for (const auto& row : rep.rows) {
    seen.insert(row.instance);
    CHECK(row.claim == table3_claim(row.instance));
    CHECK(row.agrees == (row.verdict == row.claim));
    const bool listed =
        std::find(rep.disagreements.begin(), rep.disagreements.end(), row.instance) != rep.disagreements.end();
    CHECK(listed == !row.agrees);
    if (!row.agrees) CHECK(rep.summary.find(row.instance) != std::string::npos);
  }
  CHECK(seen.size() == 14);
  auto find = [&](const char* n) {
    return *std::find_if(rep.rows.begin(), rep.rows.end(), [&](const Table3Row& r) { return r.instance == n; });
  };
  CHECK(find("security").verdict == "fails");
  CHECK(find("security").agrees);
  CHECK(find("tropical").verdict == "holds");
  CHECK(find("tropical").agrees);
  REQUIRE(find("tropical").proxy.has_value());
  CHECK(find("tropical").proxy->verdict == Verdict::HoldsExhaustive);
  CHECK(find("natpoly").candidate.has_value());
  const std::string text = render_table3(rep);
  for (const auto& row : rep.rows) CHECK(text.find(row.instance) != std::string::npos);
  CHECK(text.find(rep.summary) != std::string::npos);
}

TEST_CASE("lattice witnesses") {
  auto sec = inst("security");
  auto w = find_prop34_witness(*sec);
  REQUIRE(w.has_value());
  CHECK(sec->print(w->a) == "S");
  CHECK(sec->print(w->b) == "T");
  CHECK(sec->print(w->residue) == "T");
  CHECK(w->a13.fails());

  auto pb = inst("posbool");
  auto v = verify_lattice_witness(*pb, pb->parse("x | y | z"), pb->parse("x | y"));
  REQUIRE(v.has_value());
  CHECK(v->residue == pb->parse("z&x | z&y"));
  CHECK(v->a13.fails());
  auto all = find_prop34_witnesses(*pb);
  CHECK(std::any_of(all.begin(), all.end(),
                    [&](const LatticeWitness& x) { return x.a == v->a && x.b == v->b; }));

  CHECK_FALSE(find_prop34_witness(*inst("bool")).has_value());
  CHECK_FALSE(verify_lattice_witness(*sec, sec->parse("T"), sec->parse("S")).has_value());
  CHECK_THROWS_AS(find_prop34_witness(*inst("nat")), Inapplicable);
  CHECK(find_prop34_witness(*inst("tvl")).has_value());
  CHECK(find_prop34_witnesses(*inst("sprime")).empty());
}

TEST_CASE("report records have a fixed field order") {
  auto sec = inst("security");
  auto r = algebra::check_axiom(*sec, AxiomId::A13, algebra::Exhaustive{});
  const std::string rec = to_record(r);
  auto j = nlohmann::ordered_json::parse(rec);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"subject", "instance", "semantics", "strategy", "verdict", "trials", "witness"});
  CHECK(j["verdict"] == "fails");
  CHECK(j["witness"]["bindings"].size() == 3);
  CHECK(rec.find('\n') == std::string::npos);
  CHECK(to_text(r).rfind("A13 security [monus] exhaustive: fails at a=", 0) == 0);
  auto ok = algebra::check_axiom(*inst("bool"), AxiomId::A1, algebra::Exhaustive{});
  CHECK(nlohmann::ordered_json::parse(to_record(ok))["witness"].is_null());
}
