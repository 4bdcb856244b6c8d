#include "semiprov/algebra.hpp"

#include <array>
#include <sstream>

#include "semiprov/parallel.hpp"

namespace semiprov {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over the (seed, index) pair
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t SemiringInstance::index_of(const Element& e) const {
  if (!finite()) throw Inapplicable(name + ": carrier is not finite");
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == e) return i;
  throw Error(name + ": value " + print(e) + " is not in the carrier");
}

Element SemiringInstance::draw(Rng& rng, unsigned size) const {
  if (sample) return sample(rng, size);
  std::uniform_int_distribution<std::size_t> pick(0, elements.size() - 1);
  return elements[pick(rng)];
}

namespace algebra {

std::string to_string(DiffSemantics sem) {
  switch (sem) {
    case DiffSemantics::Monus: return "monus";
    case DiffSemantics::RingSubtract: return "ring";
    case DiffSemantics::Conditioned: return "cond";
  }
  return "?";
}

std::optional<DiffSemantics> parse_diff_semantics(std::string_view text) {
  if (text == "monus") return DiffSemantics::Monus;
  if (text == "ring") return DiffSemantics::RingSubtract;
  if (text == "cond") return DiffSemantics::Conditioned;
  return std::nullopt;
}

std::optional<BinaryOp> difference_operator(const SemiringInstance& inst, DiffSemantics sem) {
  switch (sem) {
    case DiffSemantics::Monus:
      return inst.monus;
    case DiffSemantics::RingSubtract:
      if (!inst.negate) return std::nullopt;
      return BinaryOp([add = inst.add, neg = *inst.negate](const Element& a, const Element& b) {
        return add(a, neg(b));
      });
    case DiffSemantics::Conditioned:
      return BinaryOp([is_zero = inst.is_zero, zero = inst.zero](const Element& a, const Element& b) {
        return is_zero(b) ? a : zero;
      });
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Term Term::variable(int index) { return Term{Op::Var, index, {}}; }
Term Term::zero() { return Term{Op::Zero, -1, {}}; }
Term Term::one() { return Term{Op::One, -1, {}}; }
Term Term::add(Term l, Term r) { return Term{Op::Add, -1, {std::move(l), std::move(r)}}; }
Term Term::mul(Term l, Term r) { return Term{Op::Mul, -1, {std::move(l), std::move(r)}}; }
Term Term::sub(Term l, Term r) { return Term{Op::Sub, -1, {std::move(l), std::move(r)}}; }

bool Term::uses_difference() const {
  if (op == Op::Sub) return true;
  for (const auto& a : args)
    if (a.uses_difference()) return true;
  return false;
}

std::string variable_name(int index) { return std::string(1, static_cast<char>('a' + index)); }

namespace {

int precedence(Term::Op op) {
  switch (op) {
    case Term::Op::Add:
    case Term::Op::Sub: return 1;
    case Term::Op::Mul: return 2;
    default: return 3;
  }
}

void format_into(const Term& t, std::string& out) {
  switch (t.op) {
    case Term::Op::Var: out += variable_name(t.var); return;
    case Term::Op::Zero: out += '0'; return;
    case Term::Op::One: out += '1'; return;
    default: break;
  }
  const int p = precedence(t.op);
  const auto& l = t.args[0];
  const auto& r = t.args[1];
  const bool paren_l = precedence(l.op) < p;
  const bool paren_r = precedence(r.op) <= p && r.args.size() == 2;
  if (paren_l) out += '(';
  format_into(l, out);
  if (paren_l) out += ')';
  out += t.op == Term::Op::Add ? " + " : t.op == Term::Op::Mul ? " * " : " - ";
  if (paren_r) out += '(';
  format_into(r, out);
  if (paren_r) out += ')';
}

int max_var(const Term& t) {
  int m = t.op == Term::Op::Var ? t.var : -1;
  for (const auto& a : t.args) m = std::max(m, max_var(a));
  return m;
}

std::vector<EquationSchema> build_schemas() {
  const Term a = Term::variable(0);
  const Term b = Term::variable(1);
  const Term c = Term::variable(2);
  using T = Term;
  std::vector<std::pair<Term, Term>> eqs = {
      {T::add(a, T::add(b, c)), T::add(T::add(a, b), c)},       // A1
      {T::add(a, T::zero()), a},                                 // A2
      {T::add(a, b), T::add(b, a)},                              // A3
      {T::mul(a, T::mul(b, c)), T::mul(T::mul(a, b), c)},       // A4
      {T::mul(a, T::one()), a},                                  // A5
      {T::mul(a, b), T::mul(b, a)},                              // A6
      {T::mul(a, T::add(b, c)), T::add(T::mul(a, b), T::mul(a, c))},  // A7
      {T::mul(a, T::zero()), T::zero()},                         // A8
      {T::sub(a, a), T::zero()},                                 // A9
      {T::sub(T::zero(), a), T::zero()},                         // A10
      {T::add(a, T::sub(b, a)), T::add(b, T::sub(a, b))},       // A11
      {T::sub(a, T::add(b, c)), T::sub(T::sub(a, b), c)},       // A12
      {T::mul(a, T::sub(b, c)), T::sub(T::mul(a, b), T::mul(a, c))},  // A13
  };
  std::vector<EquationSchema> out;
  int n = 1;
  for (auto& [l, r] : eqs) {
    EquationSchema s;
    s.number = n++;
    s.arity = std::max(max_var(l), max_var(r)) + 1;
    s.text = format_term(l) + " = " + format_term(r);
    s.lhs = std::move(l);
    s.rhs = std::move(r);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::string format_term(const Term& t) {
  std::string out;
  format_into(t, out);
  return out;
}

const std::vector<EquationSchema>& equation_schemas() {
  static const std::vector<EquationSchema> schemas = build_schemas();
  return schemas;
}

const EquationSchema& schema(AxiomId ax) {
  return equation_schemas().at(static_cast<std::size_t>(ax) - 1);
}

std::string to_string(AxiomId ax) { return "A" + std::to_string(static_cast<int>(ax)); }

std::optional<AxiomId> parse_axiom(std::string_view text) {
  if (text.size() < 2 || (text[0] != 'A' && text[0] != 'a')) return std::nullopt;
  int n = 0;
  for (char ch : text.substr(1)) {
    if (ch < '0' || ch > '9') return std::nullopt;
    n = n * 10 + (ch - '0');
    if (n > kAxiomCount) return std::nullopt;
  }
  if (n < 1) return std::nullopt;
  return static_cast<AxiomId>(n);
}

std::vector<AxiomId> all_axioms() {
  std::vector<AxiomId> out;
  for (int i = 1; i <= kAxiomCount; ++i) out.push_back(static_cast<AxiomId>(i));
  return out;
}

Element evaluate(const Term& t, const SemiringInstance& inst, const BinaryOp* diff,
                 std::span<const Element> env) {
  switch (t.op) {
    case Term::Op::Var: return env[static_cast<std::size_t>(t.var)];
    case Term::Op::Zero: return inst.zero;
    case Term::Op::One: return inst.one;
    case Term::Op::Add:
      return inst.add(evaluate(t.args[0], inst, diff, env), evaluate(t.args[1], inst, diff, env));
    case Term::Op::Mul:
      return inst.mul(evaluate(t.args[0], inst, diff, env), evaluate(t.args[1], inst, diff, env));
    case Term::Op::Sub:
      if (diff == nullptr) throw Inapplicable("equation uses difference but none is available");
      return (*diff)(evaluate(t.args[0], inst, diff, env), evaluate(t.args[1], inst, diff, env));
  }
  throw Error("malformed term");
}

std::string describe(const CheckStrategy& strat) {
  if (std::holds_alternative<Exhaustive>(strat)) return "exhaustive";
  const auto& s = std::get<Sampled>(strat);
  std::ostringstream os;
  os << "sampled(trials=" << s.trials << ",seed=" << s.seed << ",size=" << s.size << ")";
  return os.str();
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::HoldsExhaustive: return "holds-exhaustive";
    case Verdict::HoldsSampled: return "holds-sampled";
    case Verdict::Fails: return "fails";
    case Verdict::Inapplicable: return "inapplicable";
  }
  return "?";
}

// ---------------------------------------------------------------------------

namespace {

// Natural order as a relation usable by checkers: an index matrix for Finite
// carriers, the closed form otherwise.
class OrderOracle {
 public:
  explicit OrderOracle(const SemiringInstance& inst) : inst_(inst) {
    if (inst.finite()) {
      const std::size_t n = inst.elements.size();
      matrix_.assign(n * n, false);
      for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t a = 0; a < n; ++a) {
          const std::size_t b = inst.index_of(inst.add(inst.elements[a], inst.elements[c]));
          matrix_[a * n + b] = true;
        }
      }
    } else if (!inst.natural_order) {
      throw Inapplicable(inst.name + ": natural order is not decidable (no closed form registered)");
    }
  }

  bool leq(const Element& a, const Element& b) const {
    if (!inst_.finite()) return (*inst_.natural_order)(a, b);
    return matrix_[inst_.index_of(a) * inst_.elements.size() + inst_.index_of(b)];
  }
  bool leq_index(std::size_t a, std::size_t b) const { return matrix_[a * inst_.elements.size() + b]; }

 private:
  const SemiringInstance& inst_;
  std::vector<bool> matrix_;
};

std::vector<std::pair<std::string, std::string>> bind(const SemiringInstance& inst,
                                                      std::span<const Element> values) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < values.size(); ++i)
    out.emplace_back(variable_name(static_cast<int>(i)), inst.print(values[i]));
  return out;
}

CheckReport base_report(const SemiringInstance& inst, std::string subject, std::string semantics,
                        const CheckStrategy& strat) {
  CheckReport r;
  r.subject = std::move(subject);
  r.instance = inst.name;
  r.semantics = std::move(semantics);
  r.strategy = describe(strat);
  return r;
}

/// Runs `fails` over all assignments (lexicographic carrier order) or over
/// seeded samples, shrinking a sampled failure.
template <class Fails, class Describe>
void run_assignments(const SemiringInstance& inst, int arity, const CheckStrategy& strat,
                     CheckReport& report, Fails&& fails, Describe&& describe_failure) {
  if (std::holds_alternative<Exhaustive>(strat)) {
    if (!inst.finite()) {
      report.verdict = Verdict::Inapplicable;
      report.reason = "exhaustive strategy requires a finite carrier";
      return;
    }
    const std::size_t n = inst.elements.size();
    std::uint64_t total = 1;
    for (int i = 0; i < arity; ++i) total *= n;
    std::vector<Element> env(static_cast<std::size_t>(arity));
    for (std::uint64_t k = 0; k < total; ++k) {
      std::uint64_t rest = k;
      for (int i = arity - 1; i >= 0; --i) {
        env[static_cast<std::size_t>(i)] = inst.elements[rest % n];
        rest /= n;
      }
      if (fails(std::span<const Element>(env))) {
        report.verdict = Verdict::Fails;
        report.trials = k + 1;
        report.witness = describe_failure(std::span<const Element>(env));
        return;
      }
    }
    report.verdict = Verdict::HoldsExhaustive;
    report.trials = total;
    return;
  }

  const auto& s = std::get<Sampled>(strat);
  auto assignment = [&](std::uint64_t i) {
    Rng rng(stream_seed(s.seed, i));
    std::vector<Element> env;
    env.reserve(static_cast<std::size_t>(arity));
    for (int v = 0; v < arity; ++v) env.push_back(inst.draw(rng, s.size));
    return env;
  };
  const auto hit = first_failing(s.trials, s.threads, [&](std::uint64_t i) {
    const auto env = assignment(i);
    return fails(std::span<const Element>(env));
  });
  if (!hit) {
    report.verdict = Verdict::HoldsSampled;
    report.trials = s.trials;
    return;
  }
  auto env = shrink_assignment(inst, assignment(*hit), fails);
  report.verdict = Verdict::Fails;
  report.trials = *hit + 1;
  report.witness = describe_failure(std::span<const Element>(env));
}

}  // namespace

bool natural_leq(const SemiringInstance& inst, const Element& a, const Element& b) {
  if (inst.finite()) {
    for (const auto& c : inst.elements)
      if (inst.add(a, c) == b) return true;
    return false;
  }
  if (!inst.natural_order)
    throw Inapplicable(inst.name + ": natural order is not decidable (no closed form registered)");
  return (*inst.natural_order)(a, b);
}

bool is_naturally_ordered(const SemiringInstance& inst) {
  if (!inst.finite()) throw Inapplicable(inst.name + ": antisymmetry check requires a finite carrier");
  const OrderOracle order(inst);
  const std::size_t n = inst.elements.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (order.leq_index(a, b) && order.leq_index(b, a)) return false;
  return true;
}

MonusDerivation derive_monus(const SemiringInstance& inst) {
  if (!is_naturally_ordered(inst))
    throw Inapplicable(inst.name + ": monus derivation requires a naturally ordered carrier");
  const OrderOracle order(inst);
  const std::size_t n = inst.elements.size();
  MonusTable table;
  table.order = n;
  table.entries.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<std::size_t> solutions;
      for (std::size_t c = 0; c < n; ++c) {
        const std::size_t bc = inst.index_of(inst.add(inst.elements[b], inst.elements[c]));
        if (order.leq_index(a, bc)) solutions.push_back(c);
      }
      std::optional<std::size_t> least;
      for (std::size_t m : solutions) {
        bool below_all = true;
        for (std::size_t c : solutions) below_all = below_all && order.leq_index(m, c);
        if (below_all) least = m;
      }
      if (!least) {
        NoMonus none{inst.elements[a], inst.elements[b], {}};
        for (std::size_t m : solutions) {
          bool minimal = true;
          for (std::size_t c : solutions)
            if (c != m && order.leq_index(c, m)) minimal = false;
          if (minimal) none.minimal.push_back(inst.elements[m]);
        }
        return none;
      }
      table.entries[a * n + b] = *least;
    }
  }
  return table;
}

Element monus(const SemiringInstance& inst, const Element& a, const Element& b) {
  if (!inst.monus) throw Inapplicable(inst.name + ": no monus registered");
  return (*inst.monus)(a, b);
}

CheckReport check_axiom(const SemiringInstance& inst, AxiomId ax, const CheckStrategy& strat,
                        DiffSemantics sem) {
  const EquationSchema& eq = schema(ax);
  const bool needs_diff = eq.lhs.uses_difference() || eq.rhs.uses_difference();
  CheckReport report = base_report(inst, to_string(ax), needs_diff ? to_string(sem) : "none", strat);
  std::optional<BinaryOp> diff;
  if (needs_diff) {
    diff = difference_operator(inst, sem);
    if (!diff) {
      report.verdict = Verdict::Inapplicable;
      report.reason = inst.name + " does not support " + to_string(sem) + " difference";
      return report;
    }
  }
  const BinaryOp* dp = diff ? &*diff : nullptr;
  auto fails = [&](std::span<const Element> env) {
    return evaluate(eq.lhs, inst, dp, env) != evaluate(eq.rhs, inst, dp, env);
  };
  auto describe_failure = [&](std::span<const Element> env) {
    Witness w;
    w.bindings = bind(inst, env);
    w.values.assign(env.begin(), env.end());
    w.lhs = inst.print(evaluate(eq.lhs, inst, dp, env));
    w.rhs = inst.print(evaluate(eq.rhs, inst, dp, env));
    return w;
  };
  run_assignments(inst, eq.arity, strat, report, fails, describe_failure);
  return report;
}

CheckReport check_galois(const SemiringInstance& inst, const CheckStrategy& strat) {
  CheckReport report = base_report(inst, "galois", "monus", strat);
  if (!inst.monus) {
    report.verdict = Verdict::Inapplicable;
    report.reason = inst.name + ": no monus registered";
    return report;
  }
  std::optional<OrderOracle> order;
  try {
    order.emplace(inst);
  } catch (const Inapplicable& e) {
    report.verdict = Verdict::Inapplicable;
    report.reason = e.what();
    return report;
  }
  const BinaryOp& m = *inst.monus;
  auto sides = [&](std::span<const Element> v) {
    return std::pair<bool, bool>{order->leq(m(v[0], v[1]), v[2]), order->leq(v[0], inst.add(v[1], v[2]))};
  };
  auto fails = [&](std::span<const Element> v) {
    const auto [l, r] = sides(v);
    return l != r;
  };
  auto describe_failure = [&](std::span<const Element> v) {
    const auto [l, r] = sides(v);
    Witness w;
    w.bindings = bind(inst, v);
    w.values.assign(v.begin(), v.end());
    w.lhs = std::string("a - b <= c is ") + (l ? "true" : "false");
    w.rhs = std::string("a <= b + c is ") + (r ? "true" : "false");
    return w;
  };
  run_assignments(inst, 3, strat, report, fails, describe_failure);
  return report;
}

UniquenessResult check_monus_uniqueness(const SemiringInstance& inst, bool allow_order4) {
  UniquenessResult result;
  result.report = base_report(inst, "monus-uniqueness", "monus", Exhaustive{});
  if (!inst.finite()) {
    result.report.verdict = Verdict::Inapplicable;
    result.report.reason = "requires a finite carrier";
    return result;
  }
  const std::size_t n = inst.elements.size();
  if (n > 4 || (n == 4 && !allow_order4)) {
    result.report.verdict = Verdict::Inapplicable;
    result.report.reason = "carrier order " + std::to_string(n) + " exceeds the enumeration bound";
    return result;
  }
  const auto derived = derive_monus(inst);
  if (!std::holds_alternative<MonusTable>(derived)) {
    result.report.verdict = Verdict::Inapplicable;
    result.report.reason = "no derivable monus";
    return result;
  }
  const auto& table = std::get<MonusTable>(derived);

  std::vector<std::size_t> add(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      add[a * n + b] = inst.index_of(inst.add(inst.elements[a], inst.elements[b]));
  const std::size_t z = inst.index_of(inst.zero);

  const std::size_t cells = n * n;
  result.candidate_space = 1;
  for (std::size_t i = 0; i < cells; ++i) result.candidate_space *= n;

  // Order 4 fixes the cells A9 (a - a = 0) and A10 (0 - a = 0) determine.
  std::vector<bool> forced(cells, false);
  if (n == 4) {
    for (std::size_t a = 0; a < n; ++a) {
      forced[a * n + a] = true;
      forced[z * n + a] = true;
    }
  }
  std::vector<std::size_t> t(cells, 0);
  for (std::size_t i = 0; i < cells; ++i)
    if (forced[i]) t[i] = z;

  auto passes = [&] {
    for (std::size_t a = 0; a < n; ++a) {
      if (t[a * n + a] != z || t[z * n + a] != z) return false;
      for (std::size_t b = 0; b < n; ++b) {
        if (add[a * n + t[b * n + a]] != add[b * n + t[a * n + b]]) return false;
        for (std::size_t c = 0; c < n; ++c)
          if (t[a * n + add[b * n + c]] != t[t[a * n + b] * n + c]) return false;
      }
    }
    return true;
  };

  while (true) {
    ++result.visited;
    if (passes()) result.passing.push_back(t);
    std::size_t i = 0;
    for (; i < cells; ++i) {
      if (forced[i]) continue;
      if (++t[i] < n) break;
      t[i] = 0;
    }
    if (i == cells) break;
  }

  result.equals_derived = result.passing.size() == 1 && result.passing.front() == table.entries;
  result.report.trials = result.visited;
  if (result.equals_derived) {
    result.report.verdict = Verdict::HoldsExhaustive;
  } else {
    result.report.verdict = Verdict::Fails;
    result.report.reason = std::to_string(result.passing.size()) +
                           " tables satisfy A9-A12 (expected exactly one, equal to the derived monus)";
  }
  return result;
}

std::vector<Element> shrink_assignment(
    const SemiringInstance& inst, std::vector<Element> values,
    const std::function<bool(std::span<const Element>)>& still_fails) {
  if (!inst.simplify || !inst.complexity) return values;
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i < values.size() && !progress; ++i) {
      const std::uint64_t current = inst.complexity(values[i]);
      for (auto& candidate : inst.simplify(values[i])) {
        if (inst.complexity(candidate) >= current) continue;
        auto trial = values;
        trial[i] = std::move(candidate);
        if (still_fails(std::span<const Element>(trial))) {
          values = std::move(trial);
          progress = true;
          break;
        }
      }
    }
  }
  return values;
}

}  // namespace algebra

// ---------------------------------------------------------------------------

InstancePtr register_instance(SemiringInstance inst, const RegistrationOptions& opts) {
  using namespace algebra;
  if (!inst.add || !inst.mul || !inst.print || !inst.parse)
    throw RegistrationError(inst.name + ": incomplete instance definition");
  if (!inst.is_zero) inst.is_zero = [zero = inst.zero](const Element& e) { return e == zero; };
  if (inst.finite() && inst.elements.empty())
    throw RegistrationError(inst.name + ": finite carrier is empty");

  const CheckStrategy strat = inst.finite() ? CheckStrategy{Exhaustive{}}
                                            : CheckStrategy{Sampled{opts.samples, opts.seed, opts.size, 1}};
  auto fail = [&](const CheckReport& r) {
    std::string msg = inst.name + ": registration gate failed at " + r.subject;
    if (r.witness) {
      msg += " with";
      for (const auto& [k, v] : r.witness->bindings) msg += " " + k + "=" + v;
      msg += " (" + r.witness->lhs + " vs " + r.witness->rhs + ")";
    }
    if (!r.reason.empty()) msg += ": " + r.reason;
    throw RegistrationError(msg);
  };

  if (inst.finite()) {
    for (const auto& e : inst.elements)
      for (const auto& f : inst.elements) {
        (void)inst.index_of(inst.add(e, f));
        (void)inst.index_of(inst.mul(e, f));
      }
  }
  for (int n = 1; n <= 8; ++n) {
    const auto r = check_axiom(inst, static_cast<AxiomId>(n), strat);
    if (!r.holds()) fail(r);
  }

  // print/parse round trip on the carrier or on samples
  auto round_trip = [&](const Element& e) {
    const std::string text = inst.print(e);
    const Element back = inst.parse(text);
    if (back != e || inst.print(back) != text)
      throw RegistrationError(inst.name + ": print/parse round trip failed for " + text);
  };
  if (inst.finite()) {
    for (const auto& e : inst.elements) round_trip(e);
  } else {
    for (std::uint64_t i = 0; i < opts.samples; ++i) {
      Rng rng(stream_seed(opts.seed ^ 0xA5A5ULL, i));
      round_trip(inst.draw(rng, opts.size));
    }
  }

  if (inst.finite() && is_naturally_ordered(inst)) {
    const auto derived = derive_monus(inst);
    if (const auto* table = std::get_if<MonusTable>(&derived)) {
      if (inst.monus) {
        const std::size_t n = inst.elements.size();
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            if ((*inst.monus)(inst.elements[a], inst.elements[b]) != inst.elements[table->at(a, b)])
              throw RegistrationError(inst.name + ": closed-form monus disagrees with the derived table at (" +
                                      inst.print(inst.elements[a]) + ", " + inst.print(inst.elements[b]) + ")");
      } else {
        inst.monus = [elements = inst.elements, t = *table](const Element& a, const Element& b) {
          auto find = [&](const Element& e) {
            for (std::size_t i = 0; i < elements.size(); ++i)
              if (elements[i] == e) return i;
            throw Error("value outside the carrier");
          };
          return elements[t.at(find(a), find(b))];
        };
        inst.monus_source = MonusSource::DerivedTable;
      }
    } else if (inst.monus) {
      throw RegistrationError(inst.name + ": closed-form monus registered but no least-solution monus exists");
    }
  }
  if (inst.monus && inst.monus_source == MonusSource::None) inst.monus_source = MonusSource::ClosedForm;

  if (inst.monus && (inst.finite() || inst.natural_order)) {
    const auto r = check_galois(inst, strat);
    if (!r.holds()) fail(r);
  }
  return std::make_shared<const SemiringInstance>(std::move(inst));
}

}  // namespace semiprov
