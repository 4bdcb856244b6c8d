#include "semiprov/cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "semiprov/csv.hpp"
#include "semiprov/instances.hpp"
#include "semiprov/lab.hpp"

namespace semiprov::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 0x5EED0F5E3121ULL;

struct InstanceOptions {
  std::string name;
  std::string vars = "x,y,z";
  std::optional<unsigned> bound;
  std::string diff = "monus";
};

void add_instance_options(CLI::App* cmd, InstanceOptions& o, bool required) {
  auto* opt = cmd->add_option("--instance", o.name, "Annotation structure, e.g. nat, security, natpoly, nat_sat");
  if (required) opt->required();
  cmd->add_option("--vars", o.vars, "Comma-separated variables for X-parameterized instances")->capture_default_str();
  cmd->add_option("--bound", o.bound, "Bound k for nat_sat, tropical_trunc and fuzz_grid");
  cmd->add_option("--diff", o.diff, "Difference semantics: monus, ring or cond")
      ->check(CLI::IsMember({"monus", "ring", "cond"}))
      ->capture_default_str();
}

std::vector<std::string> split_vars(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

InstancePtr resolve_instance(const InstanceOptions& o) {
  instances::InstanceParams p;
  if (instances::needs_variables(o.name)) p.variables = split_vars(o.vars);
  p.bound = o.bound;
  return instances::make_instance(o.name, p);
}

algebra::DiffSemantics resolve_diff(const InstanceOptions& o) { return *algebra::parse_diff_semantics(o.diff); }

// ---------------------------------------------------------------------------

struct EvalOptions {
  InstanceOptions inst;
  std::string query;
  std::vector<std::string> rels;
  std::string format = "text";
};

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  std::vector<std::pair<std::string, std::filesystem::path>> files;
  for (const auto& spec : o.rels) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw Error("--rel expects NAME=path, got '" + spec + "'");
    files.emplace_back(spec.substr(0, eq), spec.substr(eq + 1));
  }
  for (const auto& [name, path] : files)
    if (!std::filesystem::exists(path)) throw Error("relation file not found: " + path.string());
  const krel::Query q = krel::parse_query(o.query);
  InstancePtr inst = resolve_instance(o.inst);
  krel::Database db;
  for (const auto& [name, path] : files) {
    if (db.count(name)) throw Error("relation '" + name + "' given twice");
    db.emplace(name, krel::load_csv(path, inst));
  }
  const krel::KRelation result = krel::eval_query(db, q, resolve_diff(o.inst));
  if (o.format == "csv") {
    out << krel::write_csv(result);
  } else if (o.format == "records") {
    for (const auto& [t, a] : result.rows()) {
      nlohmann::ordered_json j;
      nlohmann::ordered_json tuple = nlohmann::ordered_json::object();
      for (const auto& [k, v] : t) {
        if (const auto* i = std::get_if<std::int64_t>(&v)) {
          tuple[k] = *i;
        } else {
          tuple[k] = std::get<std::string>(v);
        }
      }
      j["tuple"] = std::move(tuple);
      j["annotation"] = inst->print(a);
      out << j.dump() << "\n";
    }
  } else {
    out << krel::render_text(result);
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct CheckOptions {
  InstanceOptions inst;
  std::vector<std::string> axioms;
  std::vector<std::string> identities;
  bool all_axioms = false;
  bool all_identities = false;
  bool galois = false;
  bool table3 = false;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::uint64_t> trials;
  unsigned threads = 1;
  std::string format = "text";
};

std::string expectation_note(const SemiringInstance& inst, const algebra::CheckReport& r, algebra::DiffSemantics sem) {
  if (r.inapplicable()) return "";
  const auto e = lab::expectation(inst, r.subject, sem);
  if (!e) return " [no stored expectation]";
  const std::string claim = e->holds ? "holds" : "fails";
  if (e->holds == r.holds()) return " [expected: " + claim + "]";
  if (e->adjudicated) return " [adjudicated: stored claim " + claim + ", " + e->note + "]";
  return " [UNEXPECTED: stored claim " + claim + "]";
}

void emit(const SemiringInstance& inst, const algebra::CheckReport& r, algebra::DiffSemantics sem,
          const std::string& format, std::ostream& out) {
  if (format == "records") {
    out << lab::to_record(r) << "\n";
  } else {
    out << lab::to_text(r) << expectation_note(inst, r, sem) << "\n";
  }
}

int cmd_table3(const CheckOptions& o, std::ostream& out) {
  lab::ClassifyOptions c;
  c.variables = split_vars(o.inst.vars);
  c.seed = o.seed;
  if (o.trials) c.trials = *o.trials;
  c.threads = o.threads;
  const auto rep = lab::classify_builtins(c);
  if (o.format == "records") {
    for (const auto& row : rep.rows) {
      out << lab::to_record(row.report) << "\n";
      if (row.proxy) out << lab::to_record(*row.proxy) << "\n";
    }
  }
  out << lab::render_table3(rep);
  int code = kOk;
  for (const auto& row : rep.rows) {
    if (row.agrees) continue;
    const bool adjudicated = lab::table3_candidate(row.instance).has_value();
    if (!adjudicated) code = kUnexpected;
  }
  return code;
}

int cmd_check(const CheckOptions& o, std::ostream& out) {
  if (o.table3) return cmd_table3(o, out);
  if (o.inst.name.empty()) throw Error("check needs --instance (or --table3)");
  InstancePtr inst = resolve_instance(o.inst);
  const auto sem = resolve_diff(o.inst);
  std::vector<algebra::AxiomId> axioms;
  if (o.all_axioms) axioms = algebra::all_axioms();
  for (const auto& a : o.axioms) {
    auto ax = algebra::parse_axiom(a);
    if (!ax) throw Error("unknown axiom '" + a + "' (expected A1..A13)");
    axioms.push_back(*ax);
  }
  std::vector<lab::IdentityId> ids;
  if (o.all_identities) ids = lab::all_identities();
  for (const auto& s : o.identities) {
    auto id = lab::parse_identity(s);
    if (!id) throw Error("unknown identity '" + s + "' (expected I1..I13, EXT1, EXT2)");
    ids.push_back(*id);
  }
  if (axioms.empty() && ids.empty() && !o.galois)
    throw Error("nothing to check: give --axiom, --identity, --all-axioms, --all-identities, --galois or --table3");

  int code = kOk;
  const auto strat = lab::default_strategy(*inst, o.trials.value_or(10000), o.seed, o.threads);
  for (auto ax : axioms) {
    const auto r = algebra::check_axiom(*inst, ax, strat, sem);
    emit(*inst, r, sem, o.format, out);
    if (lab::unexpected(*inst, r, sem)) code = kUnexpected;
    if (ax == algebra::AxiomId::A13 && r.fails() && sem == algebra::DiffSemantics::Monus &&
        lab::is_lattice_family(*inst)) {
      if (auto w = lab::find_prop34_witness(*inst)) {
        if (o.format == "records") {
          out << lab::to_record(w->a13) << "\n";
        } else {
          out << "  lattice witness a=" << inst->print(w->a) << " b=" << inst->print(w->b)
              << ": (a-b)*b = " << inst->print(w->residue) << "; " << lab::to_text(w->a13) << "\n";
        }
      }
    }
  }
  if (o.galois) {
    const auto r = algebra::check_galois(*inst, strat);
    emit(*inst, r, sem, o.format, out);
  }
  lab::IdentityOptions io;
  io.trials = o.trials.value_or(1000);
  io.gen.seed = o.seed;
  io.threads = o.threads;
  for (auto id : ids) {
    const auto r = lab::check_identity(inst, id, sem, io);
    emit(*inst, r, sem, o.format, out);
    if (lab::unexpected(*inst, r, sem)) code = kUnexpected;
  }
  return code;
}

// ---------------------------------------------------------------------------

int cmd_embed(std::ostream& out) {
  auto s = instances::make_instance("security");
  auto sp = instances::make_instance("sprime");
  for (auto level : instances::security_chain())
    out << instances::to_string(level) << " -> " << sp->print(instances::embed_security(level)) << "\n";
  std::size_t add_ok = 0, mul_ok = 0, monus_ok = 0, pairs = 0;
  for (const auto& a : s->elements)
    for (const auto& b : s->elements) {
      ++pairs;
      auto e = [&](const Element& x) { return Element(instances::embed_security(as<SecurityLevel>(x))); };
      add_ok += e(s->add(a, b)) == sp->add(e(a), e(b));
      mul_ok += e(s->mul(a, b)) == sp->mul(e(a), e(b));
      monus_ok += e(algebra::monus(*s, a, b)) == algebra::monus(*sp, e(a), e(b));
    }
  out << "addition preserved on " << add_ok << "/" << pairs << " pairs\n"
      << "multiplication preserved on " << mul_ok << "/" << pairs << " pairs\n"
      << "monus preserved on " << monus_ok << "/" << pairs << " pairs\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Annotated relations over semirings: evaluation and algebraic law checking", "semiprov"};
  app.require_subcommand(1);

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a query over annotated CSV relations");
  add_instance_options(eval_cmd, eval.inst, true);
  eval_cmd->add_option("query", eval.query, "Query expression")->required();
  eval_cmd->add_option("--rel", eval.rels, "Relation binding NAME=path.csv (repeatable)");
  eval_cmd->add_option("--format", eval.format, "Output format")
      ->check(CLI::IsMember({"csv", "text", "records"}))
      ->capture_default_str();

  CheckOptions check;
  auto setup_check = [&](CLI::App* cmd, bool table3_only) {
    if (!table3_only) {
      add_instance_options(cmd, check.inst, false);
      cmd->add_option("--axiom", check.axioms, "Axiom to check, A1..A13 (repeatable)");
      cmd->add_option("--identity", check.identities, "Identity to check, I1..I13, EXT1, EXT2 (repeatable)");
      cmd->add_flag("--all-axioms", check.all_axioms, "Check A1..A13");
      cmd->add_flag("--all-identities", check.all_identities, "Check every relational identity");
      cmd->add_flag("--galois", check.galois, "Check a - b <= c iff a <= b + c");
      cmd->add_flag("--table3", check.table3, "Classify every built-in by A13");
    } else {
      cmd->add_option("--vars", check.inst.vars, "Variables for X-parameterized instances")->capture_default_str();
    }
    cmd->add_option("--seed", check.seed, "Sampling seed")->capture_default_str();
    cmd->add_option("--trials", check.trials, "Sampled trials (default 10000 per axiom, 1000 per identity)");
    cmd->add_option("--threads", check.threads, "Worker threads; results do not depend on it")->capture_default_str();
    cmd->add_option("--format", check.format, "Output format")
        ->check(CLI::IsMember({"text", "records"}))
        ->capture_default_str();
  };
  auto* check_cmd = app.add_subcommand("check", "Check axioms or identities on an instance");
  setup_check(check_cmd, false);
  auto* table3_cmd = app.add_subcommand("table3", "Alias for check --table3");
  setup_check(table3_cmd, true);

  std::size_t order = 0;
  bool dump = false, allow4 = false;
  auto* enum_cmd = app.add_subcommand("enumerate", "Census of finite commutative semirings of a given order");
  enum_cmd->add_option("n", order, "Carrier order")->required();
  enum_cmd->add_flag("--dump", dump, "Print the operation tables");
  enum_cmd->add_flag("--allow-order4", allow4, "Permit order 4");

  auto* embed_cmd = app.add_subcommand("embed-security", "Print the map from S into S'");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  try {
    if (eval_cmd->parsed()) return cmd_eval(eval, out);
    if (check_cmd->parsed()) return cmd_check(check, out);
    if (table3_cmd->parsed()) {
      check.table3 = true;
      return cmd_check(check, out);
    }
    if (enum_cmd->parsed()) {
      lab::EnumerationOptions eo;
      eo.allow_order4 = allow4;
      out << lab::render_enumeration(lab::enumerate_finite_semirings(order, eo), dump);
      return kOk;
    }
    if (embed_cmd->parsed()) return cmd_embed(out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace semiprov::cli
