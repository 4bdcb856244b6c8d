#include "semiprov/instances.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <numeric>

#include "semiprov/algebra.hpp"

namespace semiprov::instances {

namespace {

// ---------------------------------------------------------------------------
// Literal scanning

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  bool peek_digit() {
    skip_ws();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }
  bool peek_word() {
    skip_ws();
    return pos_ < text_.size() && is_word(text_[pos_]);
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string word() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_word(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected a name or number");
    return std::string(text_.substr(start, pos_ - start));
  }
  std::string digits() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(text_.substr(start, pos_ - start));
  }
  void finish() {
    if (!at_end()) fail("unexpected trailing input");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " in annotation '" + std::string(text_) + "'", 1, pos_ + 1);
  }

 private:
  static bool is_word(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool is_identifier(const std::string& w) {
  return !w.empty() && (std::isalpha(static_cast<unsigned char>(w[0])) || w[0] == '_');
}

Integer parse_integer(std::string_view text, bool allow_negative) {
  Cursor cur(text);
  const bool negative = allow_negative && cur.accept('-');
  Integer v(cur.digits());
  cur.finish();
  return negative ? Integer(-v) : v;
}

Rational parse_rational(std::string_view text) {
  Cursor cur(text);
  const bool negative = cur.accept('-');
  const std::string whole = cur.digits();
  Rational v;
  if (cur.accept('/')) {
    const Integer den(cur.digits());
    if (den == 0) cur.fail("zero denominator");
    v = Rational(Integer(whole), den);
  } else if (cur.accept('.')) {
    const std::string frac = cur.digits();
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    v = Rational(Integer(whole) * scale + Integer(frac), scale);
  } else {
    v = Rational(Integer(whole));
  }
  cur.finish();
  return negative ? Rational(-v) : v;
}

std::string print_rational(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

std::uint64_t clamp64(const Integer& v) {
  const Integer a = v < 0 ? Integer(-v) : v;
  if (a > Integer(std::numeric_limits<std::uint32_t>::max())) return std::numeric_limits<std::uint32_t>::max();
  return a.convert_to<std::uint64_t>();
}

Integer uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return Integer(std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng));
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string require_variable(Cursor& cur, const std::set<std::string>& allowed) {
  const std::string w = cur.word();
  if (!is_identifier(w)) cur.fail("expected a variable, got '" + w + "'");
  if (!allowed.count(w)) cur.fail("unknown variable '" + w + "'");
  return w;
}

// ---------------------------------------------------------------------------
// Numeric families

Element int_add(const Element& a, const Element& b) { return Integer(as<Integer>(a) + as<Integer>(b)); }
Element int_mul(const Element& a, const Element& b) { return Integer(as<Integer>(a) * as<Integer>(b)); }

std::vector<Element> shrink_natural(const Element& e) {
  const Integer& n = as<Integer>(e);
  if (n == 0) return {};
  return {Integer(0), Integer(1), Integer(n / 2), Integer(n - 1)};
}

SemiringInstance build_nat() {
  SemiringInstance s;
  s.name = s.family = "nat";
  s.label = "N";
  s.carrier = CarrierKind::Sampled;
  s.add = int_add;
  s.mul = int_mul;
  s.zero = Integer(0);
  s.one = Integer(1);
  s.monus = [](const Element& a, const Element& b) {
    const Integer d = as<Integer>(a) - as<Integer>(b);
    return Element(d > 0 ? d : Integer(0));
  };
  s.natural_order = [](const Element& a, const Element& b) { return as<Integer>(a) <= as<Integer>(b); };
  s.sample = [](Rng& rng, unsigned size) -> Element {
    if (coin(rng, 0.15)) return Integer(0);
    return uniform(rng, 0, size);
  };
  s.print = [](const Element& e) { return as<Integer>(e).str(); };
  s.parse = [](std::string_view t) -> Element { return parse_integer(t, false); };
  s.simplify = shrink_natural;
  s.complexity = [](const Element& e) { return clamp64(as<Integer>(e)); };
  return s;
}

SemiringInstance build_int() {
  SemiringInstance s;
  s.name = s.family = "int";
  s.label = "Z";
  s.carrier = CarrierKind::Sampled;
  s.add = int_add;
  s.mul = int_mul;
  s.zero = Integer(0);
  s.one = Integer(1);
  s.negate = [](const Element& a) { return Element(Integer(-as<Integer>(a))); };
  // every pair is related (c = b - a), so the order is decidable but not antisymmetric
  s.natural_order = [](const Element&, const Element&) { return true; };
  s.sample = [](Rng& rng, unsigned size) -> Element {
    if (coin(rng, 0.15)) return Integer(0);
    const Integer v = uniform(rng, 0, size);
    return coin(rng, 0.5) ? Integer(-v) : v;
  };
  s.print = [](const Element& e) { return as<Integer>(e).str(); };
  s.parse = [](std::string_view t) -> Element { return parse_integer(t, true); };
  s.simplify = [](const Element& e) {
    const Integer& n = as<Integer>(e);
    std::vector<Element> out{Integer(0), Integer(1), Integer(n / 2)};
    if (n < 0) out.emplace_back(Integer(-n));
    out.emplace_back(n > 0 ? Integer(n - 1) : Integer(n + 1));
    return out;
  };
  s.complexity = [](const Element& e) {
    const Integer& n = as<Integer>(e);
    return 2 * clamp64(n) + (n < 0 ? 1 : 0);
  };
  return s;
}

void attach_index_shrinking(SemiringInstance& s) {
  s.simplify = [elements = s.elements](const Element& e) {
    std::vector<Element> out;
    for (const auto& x : elements) {
      if (x == e) break;
      out.push_back(x);
    }
    return out;
  };
  s.complexity = [elements = s.elements](const Element& e) {
    for (std::size_t i = 0; i < elements.size(); ++i)
      if (elements[i] == e) return static_cast<std::uint64_t>(i);
    return static_cast<std::uint64_t>(elements.size());
  };
}

SemiringInstance build_nat_sat(unsigned k) {
  SemiringInstance s;
  s.family = "nat_sat";
  s.name = "nat_sat" + std::to_string(k);
  s.label = "N<=" + std::to_string(k);
  s.carrier = CarrierKind::Finite;
  for (unsigned i = 0; i <= k; ++i) s.elements.emplace_back(Integer(i));
  const Integer cap(k);
  s.add = [cap](const Element& a, const Element& b) {
    return Element(Integer(std::min<Integer>(as<Integer>(a) + as<Integer>(b), cap)));
  };
  s.mul = [cap](const Element& a, const Element& b) {
    return Element(Integer(std::min<Integer>(as<Integer>(a) * as<Integer>(b), cap)));
  };
  s.zero = Integer(0);
  s.one = Integer(k == 0 ? 0 : 1);
  s.monus = [](const Element& a, const Element& b) {
    const Integer d = as<Integer>(a) - as<Integer>(b);
    return Element(d > 0 ? d : Integer(0));
  };
  s.natural_order = [](const Element& a, const Element& b) { return as<Integer>(a) <= as<Integer>(b); };
  s.print = [](const Element& e) { return as<Integer>(e).str(); };
  s.parse = [cap](std::string_view t) -> Element {
    Integer v = parse_integer(t, false);
    if (v > cap) throw ParseError("value " + v.str() + " exceeds the saturation bound " + cap.str());
    return v;
  };
  attach_index_shrinking(s);
  return s;
}

std::vector<Element> shrink_rational(const Element& e, bool unit_interval) {
  const Rational& r = as<Rational>(e);
  std::vector<Element> out{Rational(0), Rational(1), Rational(1, 2)};
  const Integer floor_value = numerator(r) / denominator(r);
  out.emplace_back(Rational(floor_value));
  if (numerator(r) > 0) out.emplace_back(Rational(numerator(r) - 1, denominator(r)));
  if (unit_interval) {
    std::erase_if(out, [](const Element& x) { return as<Rational>(x) > 1; });
  }
  return out;
}

std::uint64_t rational_complexity(const Element& e) {
  const Rational& r = as<Rational>(e);
  return clamp64(numerator(r)) + clamp64(denominator(r)) - (numerator(r) == 0 ? 1 : 0);
}

Rational sample_fraction(Rng& rng, unsigned size, bool unit_interval) {
  if (coin(rng, 0.1)) return Rational(0);
  if (unit_interval && coin(rng, 0.1)) return Rational(1);
  const std::uint64_t den = std::uniform_int_distribution<std::uint64_t>(1, std::max(1U, size))(rng);
  const std::uint64_t top = unit_interval ? den : den * std::max(1U, size);
  return Rational(uniform(rng, 0, top), Integer(den));
}

SemiringInstance build_realplus() {
  SemiringInstance s;
  s.name = s.family = "realplus";
  s.label = "R+";
  s.carrier = CarrierKind::Sampled;
  s.add = [](const Element& a, const Element& b) { return Element(Rational(as<Rational>(a) + as<Rational>(b))); };
  s.mul = [](const Element& a, const Element& b) { return Element(Rational(as<Rational>(a) * as<Rational>(b))); };
  s.zero = Rational(0);
  s.one = Rational(1);
  s.monus = [](const Element& a, const Element& b) {
    const Rational d = as<Rational>(a) - as<Rational>(b);
    return Element(d > 0 ? d : Rational(0));
  };
  s.natural_order = [](const Element& a, const Element& b) { return as<Rational>(a) <= as<Rational>(b); };
  s.sample = [](Rng& rng, unsigned size) -> Element { return sample_fraction(rng, size, false); };
  s.print = [](const Element& e) { return print_rational(as<Rational>(e)); };
  s.parse = [](std::string_view t) -> Element {
    Rational v = parse_rational(t);
    if (v < 0) throw ParseError("negative value outside R+: " + std::string(t));
    return v;
  };
  s.simplify = [](const Element& e) { return shrink_rational(e, false); };
  s.complexity = rational_complexity;
  return s;
}

// max/min on [0, 1]; shared by fuzz, its grid proxy and TVL
SemiringInstance unit_interval_lattice() {
  SemiringInstance s;
  s.add = [](const Element& a, const Element& b) { return Element(std::max(as<Rational>(a), as<Rational>(b))); };
  s.mul = [](const Element& a, const Element& b) { return Element(std::min(as<Rational>(a), as<Rational>(b))); };
  s.zero = Rational(0);
  s.one = Rational(1);
  s.natural_order = [](const Element& a, const Element& b) { return as<Rational>(a) <= as<Rational>(b); };
  s.print = [](const Element& e) { return print_rational(as<Rational>(e)); };
  return s;
}

SemiringInstance build_fuzz() {
  SemiringInstance s = unit_interval_lattice();
  s.name = s.family = "fuzz";
  s.label = "fuzz";
  s.carrier = CarrierKind::Sampled;
  s.sample = [](Rng& rng, unsigned size) -> Element { return sample_fraction(rng, size, true); };
  s.parse = [](std::string_view t) -> Element {
    Rational v = parse_rational(t);
    if (v < 0 || v > 1) throw ParseError("value outside [0,1]: " + std::string(t));
    return v;
  };
  s.simplify = [](const Element& e) { return shrink_rational(e, true); };
  s.complexity = rational_complexity;
  return s;
}

SemiringInstance finite_fractions(SemiringInstance s, std::vector<Rational> values) {
  s.carrier = CarrierKind::Finite;
  for (auto& v : values) s.elements.emplace_back(std::move(v));
  s.parse = [elements = s.elements](std::string_view t) -> Element {
    Element v = parse_rational(t);
    if (std::find(elements.begin(), elements.end(), v) == elements.end())
      throw ParseError("value outside the carrier: " + std::string(t));
    return v;
  };
  attach_index_shrinking(s);
  return s;
}

SemiringInstance build_tvl() {
  SemiringInstance s = unit_interval_lattice();
  s.name = s.family = "tvl";
  s.label = "TVL";
  return finite_fractions(std::move(s), {Rational(0), Rational(1, 2), Rational(1)});
}

SemiringInstance build_fuzz_grid(unsigned k) {
  if (k == 0) throw Error("fuzz_grid needs a bound of at least 1");
  SemiringInstance s = unit_interval_lattice();
  s.family = "fuzz_grid";
  s.name = "fuzz_grid" + std::to_string(k);
  s.label = "fuzz/" + std::to_string(k);
  std::vector<Rational> values;
  for (unsigned i = 0; i <= k; ++i) values.emplace_back(Integer(i), Integer(k));
  return finite_fractions(std::move(s), std::move(values));
}

// ---------------------------------------------------------------------------
// Tropical

Element trop_add(const Element& a, const Element& b) {
  const auto& x = as<TropicalValue>(a);
  const auto& y = as<TropicalValue>(b);
  return x < y ? x : y;
}

Element trop_mul(const Element& a, const Element& b) {
  const auto& x = as<TropicalValue>(a);
  const auto& y = as<TropicalValue>(b);
  if (x.infinite || y.infinite) return TropicalValue::inf();
  return TropicalValue::of(x.value + y.value);
}

std::string trop_print(const Element& e) {
  const auto& t = as<TropicalValue>(e);
  return t.infinite ? std::string("inf") : t.value.str();
}

TropicalValue trop_parse(std::string_view text) {
  Cursor cur(text);
  if (cur.peek_digit()) {
    Integer v(cur.digits());
    cur.finish();
    return TropicalValue::of(std::move(v));
  }
  if (cur.word() != "inf") cur.fail("expected a natural number or 'inf'");
  cur.finish();
  return TropicalValue::inf();
}

// a <=nat b iff b <= a numerically; infinity is the bottom
bool trop_leq(const Element& a, const Element& b) {
  const auto& x = as<TropicalValue>(a);
  const auto& y = as<TropicalValue>(b);
  return !(x < y);
}

std::uint64_t trop_complexity(const Element& e) {
  const auto& t = as<TropicalValue>(e);
  return t.infinite ? 0 : clamp64(t.value) + 1;
}

SemiringInstance tropical_base() {
  SemiringInstance s;
  s.add = trop_add;
  s.zero = TropicalValue::inf();
  s.one = TropicalValue::of(0);
  s.natural_order = trop_leq;
  s.print = trop_print;
  s.complexity = trop_complexity;
  return s;
}

SemiringInstance build_tropical() {
  SemiringInstance s = tropical_base();
  s.name = s.family = "tropical";
  s.label = "T";
  s.carrier = CarrierKind::Sampled;
  s.mul = trop_mul;
  s.sample = [](Rng& rng, unsigned size) -> Element {
    if (coin(rng, 0.15)) return TropicalValue::inf();
    return TropicalValue::of(uniform(rng, 0, size));
  };
  s.parse = [](std::string_view t) -> Element { return trop_parse(t); };
  s.simplify = [](const Element& e) {
    const auto& t = as<TropicalValue>(e);
    std::vector<Element> out{TropicalValue::inf(), TropicalValue::of(0)};
    if (!t.infinite && t.value > 0) {
      out.emplace_back(TropicalValue::of(t.value / 2));
      out.emplace_back(TropicalValue::of(t.value - 1));
    }
    return out;
  };
  return s;
}

SemiringInstance build_tropical_trunc(unsigned k) {
  SemiringInstance s = tropical_base();
  s.family = "tropical_trunc";
  s.name = "tropical_trunc" + std::to_string(k);
  s.label = "T<=" + std::to_string(k);
  s.carrier = CarrierKind::Finite;
  for (unsigned i = 0; i <= k; ++i) s.elements.emplace_back(TropicalValue::of(i));
  s.elements.emplace_back(TropicalValue::inf());
  const Integer cap(k);
  s.mul = [cap](const Element& a, const Element& b) {
    Element r = trop_mul(a, b);
    if (!as<TropicalValue>(r).infinite && as<TropicalValue>(r).value > cap) return Element(TropicalValue::inf());
    return r;
  };
  s.parse = [cap](std::string_view t) -> Element {
    TropicalValue v = trop_parse(t);
    if (!v.infinite && v.value > cap) throw ParseError("value exceeds the truncation bound: " + std::string(t));
    return v;
  };
  attach_index_shrinking(s);
  return s;
}

// ---------------------------------------------------------------------------
// Boolean and security

SemiringInstance build_bool() {
  SemiringInstance s;
  s.name = s.family = "bool";
  s.label = "B";
  s.carrier = CarrierKind::Finite;
  s.elements = {false, true};
  s.add = [](const Element& a, const Element& b) { return Element(as<bool>(a) || as<bool>(b)); };
  s.mul = [](const Element& a, const Element& b) { return Element(as<bool>(a) && as<bool>(b)); };
  s.zero = false;
  s.one = true;
  s.natural_order = [](const Element& a, const Element& b) { return !as<bool>(a) || as<bool>(b); };
  s.print = [](const Element& e) { return std::string(as<bool>(e) ? "true" : "false"); };
  s.parse = [](std::string_view t) -> Element {
    Cursor cur(t);
    const std::string w = cur.word();
    cur.finish();
    if (w == "true" || w == "1") return true;
    if (w == "false" || w == "0") return false;
    throw ParseError("expected true/false: " + std::string(t));
  };
  attach_index_shrinking(s);
  return s;
}

std::uint8_t rank(SecurityLevel s) { return static_cast<std::uint8_t>(s); }

SemiringInstance build_security() {
  SemiringInstance s;
  s.name = s.family = "security";
  s.label = "S";
  s.carrier = CarrierKind::Finite;
  for (auto level : security_chain()) s.elements.emplace_back(level);
  s.add = [](const Element& a, const Element& b) {
    return Element(std::min(as<SecurityLevel>(a), as<SecurityLevel>(b)));
  };
  s.mul = [](const Element& a, const Element& b) {
    return Element(std::max(as<SecurityLevel>(a), as<SecurityLevel>(b)));
  };
  s.zero = SecurityLevel::Never;
  s.one = SecurityLevel::Public;
  s.natural_order = [](const Element& a, const Element& b) { return as<SecurityLevel>(b) <= as<SecurityLevel>(a); };
  s.print = [](const Element& e) { return to_string(as<SecurityLevel>(e)); };
  s.parse = [](std::string_view t) -> Element {
    Cursor cur(t);
    const std::string w = cur.word();
    cur.finish();
    if (auto level = parse_security_level(w)) return *level;
    throw ParseError("expected one of 1s, C, S, T, 0s: " + std::string(t));
  };
  attach_index_shrinking(s);
  return s;
}

std::string print_credentials(const CredentialSet& c) {
  std::string out = "{";
  bool first = true;
  for (auto level : security_chain()) {
    if (!c.contains(level)) continue;
    if (!first) out += ',';
    out += to_string(level);
    first = false;
  }
  return out + "}";
}

SemiringInstance build_sprime() {
  SemiringInstance s;
  s.name = s.family = "sprime";
  s.label = "S'";
  s.carrier = CarrierKind::Finite;
  std::vector<std::uint8_t> masks(16);
  std::iota(masks.begin(), masks.end(), 0);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint8_t a, std::uint8_t b) { return std::popcount(a) < std::popcount(b); });
  for (auto m : masks) s.elements.emplace_back(CredentialSet{m});
  s.add = [](const Element& a, const Element& b) {
    return Element(CredentialSet{static_cast<std::uint8_t>(as<CredentialSet>(a).bits | as<CredentialSet>(b).bits)});
  };
  s.mul = [](const Element& a, const Element& b) {
    return Element(CredentialSet{static_cast<std::uint8_t>(as<CredentialSet>(a).bits & as<CredentialSet>(b).bits)});
  };
  s.zero = CredentialSet{0};
  s.one = CredentialSet{CredentialSet::kAll};
  s.natural_order = [](const Element& a, const Element& b) {
    return (as<CredentialSet>(a).bits & ~as<CredentialSet>(b).bits) == 0;
  };
  s.print = [](const Element& e) { return print_credentials(as<CredentialSet>(e)); };
  s.parse = [](std::string_view t) -> Element {
    Cursor cur(t);
    cur.expect('{');
    CredentialSet c;
    if (!cur.accept('}')) {
      do {
        const std::string w = cur.word();
        auto level = parse_security_level(w);
        if (!level || *level == SecurityLevel::Never) cur.fail("expected one of 1s, C, S, T");
        c.bits |= static_cast<std::uint8_t>(1U << rank(*level));
      } while (cur.accept(','));
      cur.expect('}');
    }
    cur.finish();
    return c;
  };
  attach_index_shrinking(s);
  return s;
}

// ---------------------------------------------------------------------------
// Boolean formula literals (PosBool[X], Bool[X])

struct Formula {
  enum class Kind { Var, True, False, Not, And, Or };
  Kind kind = Kind::False;
  std::string name;
  std::vector<Formula> kids;
};

Formula parse_formula_or(Cursor& cur, const std::set<std::string>& vars, bool allow_not);

Formula parse_formula_unary(Cursor& cur, const std::set<std::string>& vars, bool allow_not) {
  if (cur.accept('!')) {
    if (!allow_not) cur.fail("negation is not allowed in positive boolean expressions");
    return Formula{Formula::Kind::Not, {}, {parse_formula_unary(cur, vars, allow_not)}};
  }
  if (cur.accept('(')) {
    Formula f = parse_formula_or(cur, vars, allow_not);
    cur.expect(')');
    return f;
  }
  const std::string w = cur.word();
  if (w == "true") return Formula{Formula::Kind::True, {}, {}};
  if (w == "false") return Formula{Formula::Kind::False, {}, {}};
  if (!is_identifier(w)) cur.fail("expected a variable, got '" + w + "'");
  if (!vars.count(w)) cur.fail("unknown variable '" + w + "'");
  return Formula{Formula::Kind::Var, w, {}};
}

Formula parse_formula_and(Cursor& cur, const std::set<std::string>& vars, bool allow_not) {
  Formula f = parse_formula_unary(cur, vars, allow_not);
  while (cur.accept('&')) f = Formula{Formula::Kind::And, {}, {std::move(f), parse_formula_unary(cur, vars, allow_not)}};
  return f;
}

Formula parse_formula_or(Cursor& cur, const std::set<std::string>& vars, bool allow_not) {
  Formula f = parse_formula_and(cur, vars, allow_not);
  while (cur.accept('|')) f = Formula{Formula::Kind::Or, {}, {std::move(f), parse_formula_and(cur, vars, allow_not)}};
  return f;
}

Formula parse_formula(std::string_view text, const std::set<std::string>& vars, bool allow_not) {
  Cursor cur(text);
  Formula f = parse_formula_or(cur, vars, allow_not);
  cur.finish();
  return f;
}

// PosBool[X]

Element dnf_add(const Element& a, const Element& b) {
  MonotoneDNF out = as<MonotoneDNF>(a);
  for (const auto& c : as<MonotoneDNF>(b).clauses) out.clauses.insert(c);
  return minimize(std::move(out));
}

Element dnf_mul(const Element& a, const Element& b) {
  MonotoneDNF out;
  for (const auto& x : as<MonotoneDNF>(a).clauses)
    for (const auto& y : as<MonotoneDNF>(b).clauses) {
      VarSet u = x;
      u.insert(y.begin(), y.end());
      out.clauses.insert(std::move(u));
    }
  return minimize(std::move(out));
}

MonotoneDNF dnf_from(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Var: return MonotoneDNF{{VarSet{f.name}}};
    case Formula::Kind::True: return MonotoneDNF{{VarSet{}}};
    case Formula::Kind::False: return MonotoneDNF{};
    case Formula::Kind::And: return as<MonotoneDNF>(dnf_mul(dnf_from(f.kids[0]), dnf_from(f.kids[1])));
    case Formula::Kind::Or: return as<MonotoneDNF>(dnf_add(dnf_from(f.kids[0]), dnf_from(f.kids[1])));
    case Formula::Kind::Not: break;
  }
  throw Error("negation in a positive boolean expression");
}

std::string print_dnf(const MonotoneDNF& d) {
  if (d.clauses.empty()) return "false";
  if (d.clauses.size() == 1 && d.clauses.begin()->empty()) return "true";
  std::string out;
  for (const auto& c : d.clauses) {
    if (!out.empty()) out += " | ";
    bool first = true;
    for (const auto& v : c) {
      if (!first) out += '&';
      out += v;
      first = false;
    }
  }
  return out;
}

VarSet subset_of(const std::vector<std::string>& vars, std::uint64_t mask) {
  VarSet out;
  for (std::size_t j = 0; j < vars.size(); ++j)
    if ((mask >> j) & 1U) out.insert(vars[j]);
  return out;
}

std::uint64_t mask_of(const std::vector<std::string>& vars, const VarSet& s) {
  std::uint64_t m = 0;
  for (std::size_t j = 0; j < vars.size(); ++j)
    if (s.count(vars[j])) m |= 1ULL << j;
  return m;
}

bool dnf_true_at(const std::vector<std::uint64_t>& clause_masks, std::uint64_t valuation) {
  for (auto c : clause_masks)
    if ((c & ~valuation) == 0) return true;
  return false;
}

std::uint64_t family_complexity(const std::set<VarSet>& f) {
  std::uint64_t n = f.size();
  for (const auto& s : f) n += s.size();
  return n;
}

std::vector<Element> drop_one_member(const std::set<VarSet>& f, const std::function<Element(std::set<VarSet>)>& wrap) {
  std::vector<Element> out{wrap({})};
  for (const auto& s : f) {
    auto smaller = f;
    smaller.erase(s);
    out.push_back(wrap(std::move(smaller)));
    if (!s.empty()) {
      auto shorter_set = f;
      shorter_set.erase(s);
      VarSet t = s;
      t.erase(std::prev(t.end()));
      shorter_set.insert(std::move(t));
      out.push_back(wrap(std::move(shorter_set)));
    }
  }
  return out;
}

VarSet random_subset(Rng& rng, const std::vector<std::string>& vars, double p) {
  VarSet out;
  for (const auto& v : vars)
    if (coin(rng, p)) out.insert(v);
  return out;
}

SemiringInstance build_posbool(const std::vector<std::string>& vars) {
  SemiringInstance s;
  s.family = "posbool";
  s.name = "posbool";
  s.label = "PosBool[X]";
  s.variables = vars;
  const std::set<std::string> allowed(vars.begin(), vars.end());
  s.add = dnf_add;
  s.mul = dnf_mul;
  s.zero = MonotoneDNF{};
  s.one = MonotoneDNF{{VarSet{}}};
  s.natural_order = [](const Element& a, const Element& b) { return dnf_add(a, b) == b; };
  s.print = [](const Element& e) { return print_dnf(as<MonotoneDNF>(e)); };
  s.parse = [allowed](std::string_view t) -> Element { return dnf_from(parse_formula(t, allowed, false)); };
  // monotone closure of a AND NOT b: minimal satisfying valuations
  s.monus = [vars](const Element& a, const Element& b) {
    const std::size_t n = vars.size();
    std::vector<std::uint64_t> ca, cb;
    for (const auto& c : as<MonotoneDNF>(a).clauses) ca.push_back(mask_of(vars, c));
    for (const auto& c : as<MonotoneDNF>(b).clauses) cb.push_back(mask_of(vars, c));
    std::vector<std::uint64_t> hits;
    for (std::uint64_t w = 0; w < (1ULL << n); ++w)
      if (dnf_true_at(ca, w) && !dnf_true_at(cb, w)) hits.push_back(w);
    MonotoneDNF out;
    for (auto w : hits) out.clauses.insert(subset_of(vars, w));
    return Element(minimize(std::move(out)));
  };
  if (vars.size() <= 3) {
    s.carrier = CarrierKind::Finite;
    const std::uint64_t subsets = 1ULL << vars.size();
    std::vector<MonotoneDNF> all;
    for (std::uint64_t fam = 0; fam < (1ULL << subsets); ++fam) {
      std::vector<std::uint64_t> members;
      for (std::uint64_t m = 0; m < subsets; ++m)
        if ((fam >> m) & 1U) members.push_back(m);
      bool antichain = true;
      for (auto x : members)
        for (auto y : members)
          if (x != y && (x & ~y) == 0) antichain = false;
      if (!antichain) continue;
      MonotoneDNF d;
      for (auto m : members) d.clauses.insert(subset_of(vars, m));
      all.push_back(std::move(d));
    }
    std::stable_sort(all.begin(), all.end(), [](const MonotoneDNF& x, const MonotoneDNF& y) {
      const auto cx = family_complexity(x.clauses);
      const auto cy = family_complexity(y.clauses);
      return cx != cy ? cx < cy : x < y;
    });
    for (auto& d : all) s.elements.emplace_back(std::move(d));
    attach_index_shrinking(s);
  } else {
    s.carrier = CarrierKind::Sampled;
    s.sample = [vars](Rng& rng, unsigned size) -> Element {
      MonotoneDNF d;
      const auto clauses = std::uniform_int_distribution<unsigned>(0, std::min(3U, std::max(1U, size)))(rng);
      for (unsigned i = 0; i < clauses; ++i) d.clauses.insert(random_subset(rng, vars, 0.4));
      return minimize(std::move(d));
    };
    s.simplify = [](const Element& e) {
      return drop_one_member(as<MonotoneDNF>(e).clauses,
                             [](std::set<VarSet> f) { return Element(minimize(MonotoneDNF{std::move(f)})); });
    };
    s.complexity = [](const Element& e) { return family_complexity(as<MonotoneDNF>(e).clauses); };
  }
  return s;
}

// Bool[X]

TruthTable table_from(const Formula& f, const std::vector<std::string>& vars) {
  const std::size_t rows = 1ULL << vars.size();
  TruthTable t{boost::dynamic_bitset<>(rows)};
  std::function<bool(const Formula&, std::uint64_t)> eval = [&](const Formula& g, std::uint64_t r) -> bool {
    switch (g.kind) {
      case Formula::Kind::Var: {
        const auto j = static_cast<std::size_t>(std::find(vars.begin(), vars.end(), g.name) - vars.begin());
        return (r >> j) & 1U;
      }
      case Formula::Kind::True: return true;
      case Formula::Kind::False: return false;
      case Formula::Kind::Not: return !eval(g.kids[0], r);
      case Formula::Kind::And: return eval(g.kids[0], r) && eval(g.kids[1], r);
      case Formula::Kind::Or: return eval(g.kids[0], r) || eval(g.kids[1], r);
    }
    return false;
  };
  for (std::size_t r = 0; r < rows; ++r) t.rows[r] = eval(f, r);
  return t;
}

std::string print_table(const TruthTable& t, const std::vector<std::string>& vars) {
  if (t.rows.none()) return "false";
  if (t.rows.all()) return "true";
  std::string out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (!t.rows[r]) continue;
    if (!out.empty()) out += " | ";
    for (std::size_t j = 0; j < vars.size(); ++j) {
      if (j > 0) out += '&';
      if (!((r >> j) & 1U)) out += '!';
      out += vars[j];
    }
  }
  return out;
}

SemiringInstance build_boolexpr(const std::vector<std::string>& vars) {
  if (vars.size() > 10) throw Error("boolexpr supports at most 10 variables");
  SemiringInstance s;
  s.family = s.name = "boolexpr";
  s.label = "Bool[X]";
  s.variables = vars;
  s.carrier = CarrierKind::Sampled;
  const std::size_t rows = 1ULL << vars.size();
  s.add = [](const Element& a, const Element& b) { return Element(TruthTable{as<TruthTable>(a).rows | as<TruthTable>(b).rows}); };
  s.mul = [](const Element& a, const Element& b) { return Element(TruthTable{as<TruthTable>(a).rows & as<TruthTable>(b).rows}); };
  s.zero = TruthTable{boost::dynamic_bitset<>(rows)};
  s.one = TruthTable{~boost::dynamic_bitset<>(rows)};
  s.monus = [](const Element& a, const Element& b) {
    return Element(TruthTable{as<TruthTable>(a).rows - as<TruthTable>(b).rows});
  };
  s.natural_order = [](const Element& a, const Element& b) {
    return as<TruthTable>(a).rows.is_subset_of(as<TruthTable>(b).rows);
  };
  const std::set<std::string> allowed(vars.begin(), vars.end());
  s.print = [vars](const Element& e) { return print_table(as<TruthTable>(e), vars); };
  s.parse = [vars, allowed](std::string_view t) -> Element { return table_from(parse_formula(t, allowed, true), vars); };
  s.sample = [rows](Rng& rng, unsigned) -> Element {
    TruthTable t{boost::dynamic_bitset<>(rows)};
    const double p = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (std::size_t r = 0; r < rows; ++r) t.rows[r] = coin(rng, p);
    return t;
  };
  s.simplify = [](const Element& e) {
    std::vector<Element> out;
    const auto& bits = as<TruthTable>(e).rows;
    out.emplace_back(TruthTable{boost::dynamic_bitset<>(bits.size())});
    for (auto r = bits.find_first(); r != boost::dynamic_bitset<>::npos; r = bits.find_next(r)) {
      TruthTable t{bits};
      t.rows[r] = false;
      out.emplace_back(std::move(t));
    }
    return out;
  };
  s.complexity = [](const Element& e) { return static_cast<std::uint64_t>(as<TruthTable>(e).rows.count()); };
  return s;
}

// N[X] and B[X]

Monomial random_monomial(Rng& rng, const std::vector<std::string>& vars) {
  Monomial m;
  for (const auto& v : vars) {
    if (!coin(rng, 0.35)) continue;
    m[v] = coin(rng, 0.7) ? 1 : 2;
  }
  return m;
}

Element poly_add(const Element& a, const Element& b) {
  PolynomialN out = as<PolynomialN>(a);
  for (const auto& [m, c] : as<PolynomialN>(b).terms) out.terms[m] += c;
  return out;
}

Element poly_mul(const Element& a, const Element& b) {
  PolynomialN out;
  for (const auto& [ma, ca] : as<PolynomialN>(a).terms)
    for (const auto& [mb, cb] : as<PolynomialN>(b).terms) out.terms[monomial_product(ma, mb)] += ca * cb;
  return out;
}

std::vector<Monomial> grlex_sorted(std::vector<Monomial> ms) {
  std::sort(ms.begin(), ms.end(), grlex_greater);
  return ms;
}

std::string print_poly(const PolynomialN& p) {
  if (p.terms.empty()) return "0";
  std::vector<Monomial> ms;
  for (const auto& [m, c] : p.terms) ms.push_back(m);
  std::string out;
  for (const auto& m : grlex_sorted(std::move(ms))) {
    if (!out.empty()) out += " + ";
    const Integer& c = p.terms.at(m);
    if (m.empty()) {
      out += c.str();
    } else if (c == 1) {
      out += format_monomial(m);
    } else {
      out += c.str() + "*" + format_monomial(m);
    }
  }
  return out;
}

PolynomialN parse_poly(std::string_view text, const std::set<std::string>& vars) {
  Cursor cur(text);
  PolynomialN sum;
  do {
    Integer coeff = 1;
    Monomial mono;
    do {
      if (cur.peek_digit()) {
        coeff *= Integer(cur.digits());
      } else {
        const std::string v = require_variable(cur, vars);
        std::uint32_t e = 1;
        if (cur.accept('^')) e = static_cast<std::uint32_t>(std::stoul(cur.digits()));
        mono[v] += e;
      }
    } while (cur.accept('*'));
    std::erase_if(mono, [](const auto& kv) { return kv.second == 0; });
    if (coeff != 0) sum.terms[mono] += coeff;
  } while (cur.accept('+'));
  cur.finish();
  return sum;
}

SemiringInstance build_natpoly(const std::vector<std::string>& vars) {
  SemiringInstance s;
  s.family = s.name = "natpoly";
  s.label = "N[X]";
  s.variables = vars;
  s.carrier = CarrierKind::Sampled;
  s.add = poly_add;
  s.mul = poly_mul;
  s.zero = PolynomialN{};
  s.one = PolynomialN{{{Monomial{}, Integer(1)}}};
  s.monus = [](const Element& a, const Element& b) {
    PolynomialN out;
    const auto& bt = as<PolynomialN>(b).terms;
    for (const auto& [m, c] : as<PolynomialN>(a).terms) {
      auto it = bt.find(m);
      const Integer d = it == bt.end() ? c : Integer(c - it->second);
      if (d > 0) out.terms[m] = d;
    }
    return Element(out);
  };
  s.natural_order = [](const Element& a, const Element& b) {
    const auto& bt = as<PolynomialN>(b).terms;
    for (const auto& [m, c] : as<PolynomialN>(a).terms) {
      auto it = bt.find(m);
      if (it == bt.end() || it->second < c) return false;
    }
    return true;
  };
  const std::set<std::string> allowed(vars.begin(), vars.end());
  s.print = [](const Element& e) { return print_poly(as<PolynomialN>(e)); };
  s.parse = [allowed](std::string_view t) -> Element { return parse_poly(t, allowed); };
  s.sample = [vars](Rng& rng, unsigned size) -> Element {
    PolynomialN p;
    const auto terms = std::uniform_int_distribution<unsigned>(0, std::min(3U, std::max(1U, size)))(rng);
    for (unsigned i = 0; i < terms; ++i)
      p.terms[random_monomial(rng, vars)] += uniform(rng, 1, std::max(1U, std::min(3U, size)));
    return p;
  };
  s.simplify = [](const Element& e) {
    const auto& p = as<PolynomialN>(e);
    std::vector<Element> out{PolynomialN{}};
    for (const auto& [m, c] : p.terms) {
      PolynomialN fewer = p;
      fewer.terms.erase(m);
      out.emplace_back(fewer);
      if (c > 1) {
        PolynomialN lower = p;
        lower.terms[m] = c - 1;
        out.emplace_back(std::move(lower));
      }
    }
    return out;
  };
  s.complexity = [](const Element& e) {
    std::uint64_t n = 0;
    for (const auto& [m, c] : as<PolynomialN>(e).terms) n += clamp64(c) * (degree(m) + 1);
    return n;
  };
  return s;
}

std::string print_monomial_set(const BoolMonomialSet& s) {
  if (s.monomials.empty()) return "0";
  std::string out;
  for (const auto& m : grlex_sorted({s.monomials.begin(), s.monomials.end()})) {
    if (!out.empty()) out += " + ";
    out += m.empty() ? std::string("1") : format_monomial(m);
  }
  return out;
}

SemiringInstance build_boolpoly(const std::vector<std::string>& vars) {
  SemiringInstance s;
  s.family = s.name = "boolpoly";
  s.label = "B[X]";
  s.variables = vars;
  s.carrier = CarrierKind::Sampled;
  s.add = [](const Element& a, const Element& b) {
    BoolMonomialSet out = as<BoolMonomialSet>(a);
    out.monomials.insert(as<BoolMonomialSet>(b).monomials.begin(), as<BoolMonomialSet>(b).monomials.end());
    return Element(out);
  };
  s.mul = [](const Element& a, const Element& b) {
    BoolMonomialSet out;
    for (const auto& x : as<BoolMonomialSet>(a).monomials)
      for (const auto& y : as<BoolMonomialSet>(b).monomials) out.monomials.insert(monomial_product(x, y));
    return Element(out);
  };
  s.zero = BoolMonomialSet{};
  s.one = BoolMonomialSet{{Monomial{}}};
  s.monus = [](const Element& a, const Element& b) {
    BoolMonomialSet out;
    const auto& bm = as<BoolMonomialSet>(b).monomials;
    for (const auto& m : as<BoolMonomialSet>(a).monomials)
      if (!bm.count(m)) out.monomials.insert(m);
    return Element(out);
  };
  s.natural_order = [](const Element& a, const Element& b) {
    const auto& bm = as<BoolMonomialSet>(b).monomials;
    const auto& am = as<BoolMonomialSet>(a).monomials;
    return std::includes(bm.begin(), bm.end(), am.begin(), am.end());
  };
  const std::set<std::string> allowed(vars.begin(), vars.end());
  s.print = [](const Element& e) { return print_monomial_set(as<BoolMonomialSet>(e)); };
  s.parse = [allowed](std::string_view t) -> Element {
    BoolMonomialSet out;
    for (const auto& [m, c] : parse_poly(t, allowed).terms) out.monomials.insert(m);
    return out;
  };
  s.sample = [vars](Rng& rng, unsigned size) -> Element {
    BoolMonomialSet out;
    const auto terms = std::uniform_int_distribution<unsigned>(0, std::min(3U, std::max(1U, size)))(rng);
    for (unsigned i = 0; i < terms; ++i) out.monomials.insert(random_monomial(rng, vars));
    return out;
  };
  s.simplify = [](const Element& e) {
    const auto& ms = as<BoolMonomialSet>(e).monomials;
    std::vector<Element> out{BoolMonomialSet{}};
    for (const auto& m : ms) {
      BoolMonomialSet fewer{ms};
      fewer.monomials.erase(m);
      out.emplace_back(std::move(fewer));
    }
    return out;
  };
  s.complexity = [](const Element& e) {
    std::uint64_t n = 0;
    for (const auto& m : as<BoolMonomialSet>(e).monomials) n += degree(m) + 1;
    return n;
  };
  return s;
}

// Why(X)

std::string print_family(const std::set<VarSet>& f) {
  std::string out = "{";
  bool first = true;
  for (const auto& s : f) {
    if (!first) out += ',';
    out += format_varset(s);
    first = false;
  }
  return out + "}";
}

VarSet parse_varset(Cursor& cur, const std::set<std::string>& vars) {
  VarSet out;
  cur.expect('{');
  if (cur.accept('}')) return out;
  do {
    out.insert(require_variable(cur, vars));
  } while (cur.accept(','));
  cur.expect('}');
  return out;
}

std::set<VarSet> pairwise_unions(const std::set<VarSet>& a, const std::set<VarSet>& b) {
  std::set<VarSet> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      VarSet u = x;
      u.insert(y.begin(), y.end());
      out.insert(std::move(u));
    }
  return out;
}

SemiringInstance build_why(const std::vector<std::string>& vars) {
  SemiringInstance s;
  s.family = s.name = "why";
  s.label = "Why(X)";
  s.variables = vars;
  s.carrier = CarrierKind::Sampled;
  s.add = [](const Element& a, const Element& b) {
    WitnessFamily out = as<WitnessFamily>(a);
    out.witnesses.insert(as<WitnessFamily>(b).witnesses.begin(), as<WitnessFamily>(b).witnesses.end());
    return Element(out);
  };
  s.mul = [](const Element& a, const Element& b) {
    return Element(WitnessFamily{pairwise_unions(as<WitnessFamily>(a).witnesses, as<WitnessFamily>(b).witnesses)});
  };
  s.zero = WitnessFamily{};
  s.one = WitnessFamily{{VarSet{}}};
  s.monus = [](const Element& a, const Element& b) {
    WitnessFamily out;
    const auto& bw = as<WitnessFamily>(b).witnesses;
    for (const auto& w : as<WitnessFamily>(a).witnesses)
      if (!bw.count(w)) out.witnesses.insert(w);
    return Element(out);
  };
  s.natural_order = [](const Element& a, const Element& b) {
    const auto& aw = as<WitnessFamily>(a).witnesses;
    const auto& bw = as<WitnessFamily>(b).witnesses;
    return std::includes(bw.begin(), bw.end(), aw.begin(), aw.end());
  };
  const std::set<std::string> allowed(vars.begin(), vars.end());
  s.print = [](const Element& e) { return print_family(as<WitnessFamily>(e).witnesses); };
  s.parse = [allowed](std::string_view t) -> Element {
    Cursor cur(t);
    WitnessFamily out;
    cur.expect('{');
    if (!cur.accept('}')) {
      do {
        out.witnesses.insert(parse_varset(cur, allowed));
      } while (cur.accept(','));
      cur.expect('}');
    }
    cur.finish();
    return out;
  };
  s.sample = [vars](Rng& rng, unsigned size) -> Element {
    WitnessFamily out;
    const auto n = std::uniform_int_distribution<unsigned>(0, std::min(3U, std::max(1U, size)))(rng);
    for (unsigned i = 0; i < n; ++i) out.witnesses.insert(random_subset(rng, vars, 0.4));
    return out;
  };
  s.simplify = [](const Element& e) {
    return drop_one_member(as<WitnessFamily>(e).witnesses,
                           [](std::set<VarSet> f) { return Element(WitnessFamily{std::move(f)}); });
  };
  s.complexity = [](const Element& e) { return family_complexity(as<WitnessFamily>(e).witnesses); };
  return s;
}

// Trio[X]

SemiringInstance build_trio(const std::vector<std::string>& vars) {
  SemiringInstance s;
  s.family = s.name = "trio";
  s.label = "Trio[X]";
  s.variables = vars;
  s.carrier = CarrierKind::Sampled;
  s.add = [](const Element& a, const Element& b) {
    TrioBag out = as<TrioBag>(a);
    for (const auto& [w, c] : as<TrioBag>(b).bag) out.bag[w] += c;
    return Element(out);
  };
  s.mul = [](const Element& a, const Element& b) {
    TrioBag out;
    for (const auto& [x, cx] : as<TrioBag>(a).bag)
      for (const auto& [y, cy] : as<TrioBag>(b).bag) {
        VarSet u = x;
        u.insert(y.begin(), y.end());
        out.bag[u] += cx * cy;
      }
    return Element(out);
  };
  s.zero = TrioBag{};
  s.one = TrioBag{{{VarSet{}, Integer(1)}}};
  s.monus = [](const Element& a, const Element& b) {
    TrioBag out;
    const auto& bb = as<TrioBag>(b).bag;
    for (const auto& [w, c] : as<TrioBag>(a).bag) {
      auto it = bb.find(w);
      const Integer d = it == bb.end() ? c : Integer(c - it->second);
      if (d > 0) out.bag[w] = d;
    }
    return Element(out);
  };
  s.natural_order = [](const Element& a, const Element& b) {
    const auto& bb = as<TrioBag>(b).bag;
    for (const auto& [w, c] : as<TrioBag>(a).bag) {
      auto it = bb.find(w);
      if (it == bb.end() || it->second < c) return false;
    }
    return true;
  };
  const std::set<std::string> allowed(vars.begin(), vars.end());
  s.print = [](const Element& e) {
    const auto& b = as<TrioBag>(e).bag;
    if (b.empty()) return std::string("0");
    std::string out;
    for (const auto& [w, c] : b) {
      if (!out.empty()) out += " + ";
      if (c != 1) out += c.str() + "*";
      out += format_varset(w);
    }
    return out;
  };
  s.parse = [allowed](std::string_view t) -> Element {
    Cursor cur(t);
    TrioBag out;
    do {
      Integer c = 1;
      VarSet w;
      if (cur.peek_digit()) {
        c = Integer(cur.digits());
        if (cur.accept('*')) w = parse_varset(cur, allowed);
      } else {
        w = parse_varset(cur, allowed);
      }
      if (c != 0) out.bag[w] += c;
    } while (cur.accept('+'));
    cur.finish();
    return out;
  };
  s.sample = [vars](Rng& rng, unsigned size) -> Element {
    TrioBag out;
    const auto n = std::uniform_int_distribution<unsigned>(0, std::min(3U, std::max(1U, size)))(rng);
    for (unsigned i = 0; i < n; ++i)
      out.bag[random_subset(rng, vars, 0.4)] += uniform(rng, 1, std::max(1U, std::min(3U, size)));
    return out;
  };
  s.simplify = [](const Element& e) {
    const auto& b = as<TrioBag>(e).bag;
    std::vector<Element> out{TrioBag{}};
    for (const auto& [w, c] : b) {
      TrioBag fewer{b};
      fewer.bag.erase(w);
      out.emplace_back(fewer);
      if (c > 1) {
        TrioBag lower{b};
        lower.bag[w] = c - 1;
        out.emplace_back(std::move(lower));
      }
    }
    return out;
  };
  s.complexity = [](const Element& e) {
    std::uint64_t n = 0;
    for (const auto& [w, c] : as<TrioBag>(e).bag) n += clamp64(c) * (w.size() + 1);
    return n;
  };
  return s;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& x_parameterized() {
  static const std::vector<std::string> names = {"posbool", "boolexpr", "natpoly", "boolpoly", "why", "trio"};
  return names;
}

SemiringInstance build(std::string_view name, const InstanceParams& params) {
  if (needs_variables(name)) {
    if (params.variables.empty()) throw Error(std::string(name) + " requires a nonempty variable list");
    std::set<std::string> seen;
    for (const auto& v : params.variables) {
      if (!is_identifier(v) || v == "true" || v == "false" || v == "inf")
        throw Error("invalid variable name '" + v + "'");
      if (!seen.insert(v).second) throw Error("duplicate variable '" + v + "'");
    }
    if (params.variables.size() > 16) throw Error("at most 16 variables are supported");
    if (name == "posbool") return build_posbool(params.variables);
    if (name == "boolexpr") return build_boolexpr(params.variables);
    if (name == "natpoly") return build_natpoly(params.variables);
    if (name == "boolpoly") return build_boolpoly(params.variables);
    if (name == "why") return build_why(params.variables);
    return build_trio(params.variables);
  }
  const bool bounded = std::find(bounded_names().begin(), bounded_names().end(), name) != bounded_names().end();
  if (bounded) {
    if (!params.bound) throw Error(std::string(name) + " requires a bound");
    const unsigned k = *params.bound;
    if (k > 64) throw Error("bound too large for a finite proxy (max 64)");
    if (name == "nat_sat") return build_nat_sat(k);
    if (name == "tropical_trunc") return build_tropical_trunc(k);
    return build_fuzz_grid(k);
  }
  if (name == "bool") return build_bool();
  if (name == "nat") return build_nat();
  if (name == "realplus") return build_realplus();
  if (name == "int") return build_int();
  if (name == "tropical") return build_tropical();
  if (name == "fuzz") return build_fuzz();
  if (name == "tvl") return build_tvl();
  if (name == "security") return build_security();
  if (name == "sprime") return build_sprime();
  throw Error("unknown instance '" + std::string(name) + "'");
}

void attach_closed_form_monus(SemiringInstance& s) {
  if (s.monus || s.family == "int") return;
  static const std::set<std::string> lattice = {"security", "tvl", "fuzz", "fuzz_grid"};
  if (lattice.count(s.family)) {
    auto self = std::make_shared<SemiringInstance>(s);
    s.monus = [self](const Element& a, const Element& b) { return lattice_monus(*self, a, b); };
  } else {
    auto self = std::make_shared<SemiringInstance>(s);
    s.monus = [self](const Element& a, const Element& b) { return pointwise_monus(*self, a, b); };
  }
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(SecurityLevel s) {
  switch (s) {
    case SecurityLevel::Public: return "1s";
    case SecurityLevel::Confidential: return "C";
    case SecurityLevel::Secret: return "S";
    case SecurityLevel::TopSecret: return "T";
    case SecurityLevel::Never: return "0s";
  }
  return "?";
}

std::optional<SecurityLevel> parse_security_level(std::string_view text) {
  if (text == "1s") return SecurityLevel::Public;
  if (text == "C") return SecurityLevel::Confidential;
  if (text == "S") return SecurityLevel::Secret;
  if (text == "T") return SecurityLevel::TopSecret;
  if (text == "0s") return SecurityLevel::Never;
  return std::nullopt;
}

std::vector<SecurityLevel> security_chain() {
  return {SecurityLevel::Public, SecurityLevel::Confidential, SecurityLevel::Secret, SecurityLevel::TopSecret,
          SecurityLevel::Never};
}

MonotoneDNF minimize(MonotoneDNF dnf) {
  MonotoneDNF out;
  for (const auto& c : dnf.clauses) {
    bool absorbed = false;
    for (const auto& d : dnf.clauses) {
      if (d != c && d.size() < c.size() && std::includes(c.begin(), c.end(), d.begin(), d.end())) {
        absorbed = true;
        break;
      }
    }
    if (!absorbed) out.clauses.insert(c);
  }
  return out;
}

CredentialSet embed_security(SecurityLevel s) {
  CredentialSet out;
  for (auto level : security_chain())
    if (level != SecurityLevel::Never && level >= s) out.bits |= static_cast<std::uint8_t>(1U << rank(level));
  return out;
}

Element lattice_monus(const SemiringInstance& inst, const Element& a, const Element& b) {
  const std::string& f = inst.family;
  if (f == "posbool") return (*inst.monus)(a, b);
  if (f != "security" && f != "tvl" && f != "fuzz" && f != "fuzz_grid")
    throw Inapplicable(inst.name + " is not in the lattice family");
  // chain: b strictly below a in the natural order
  const bool below = (*inst.natural_order)(b, a) && !(a == b);
  return below ? a : inst.zero;
}

Element pointwise_monus(const SemiringInstance& inst, const Element& a, const Element& b) {
  const std::string& f = inst.family;
  if (f == "nat" || f == "nat_sat") {
    const Integer d = as<Integer>(a) - as<Integer>(b);
    return d > 0 ? d : Integer(0);
  }
  if (f == "realplus") {
    const Rational d = as<Rational>(a) - as<Rational>(b);
    return d > 0 ? d : Rational(0);
  }
  if (f == "bool") return as<bool>(a) && !as<bool>(b);
  if (f == "sprime")
    return CredentialSet{static_cast<std::uint8_t>(as<CredentialSet>(a).bits & ~as<CredentialSet>(b).bits)};
  if (f == "tropical" || f == "tropical_trunc") {
    return as<TropicalValue>(a) < as<TropicalValue>(b) ? a : Element(TropicalValue::inf());
  }
  if (f == "natpoly" || f == "boolpoly" || f == "why" || f == "trio" || f == "boolexpr") {
    if (!inst.monus) throw Inapplicable(inst.name + ": no monus registered");
    return (*inst.monus)(a, b);
  }
  throw Inapplicable(inst.name + " has no pointwise monus");
}

Element canonicalize(const SemiringInstance& inst, Element raw) {
  const std::string& f = inst.family;
  auto reject = [&](const std::string& why) -> Element { throw Error(inst.name + ": " + why); };
  auto check_vars = [&](const VarSet& s) {
    for (const auto& v : s)
      if (std::find(inst.variables.begin(), inst.variables.end(), v) == inst.variables.end())
        reject("unknown variable '" + v + "'");
  };
  if (inst.finite() && f != "posbool") {
    if (std::find(inst.elements.begin(), inst.elements.end(), raw) == inst.elements.end())
      return reject("value outside the carrier");
    return raw;
  }
  if (f == "nat") {
    if (as<Integer>(raw) < 0) return reject("negative natural number");
    return raw;
  }
  if (f == "int") return Element(as<Integer>(raw));
  if (f == "realplus" || f == "fuzz") {
    const Rational& r = as<Rational>(raw);  // boost keeps rationals reduced
    if (r < 0 || (f == "fuzz" && r > 1)) return reject("fraction " + print_rational(r) + " outside the carrier");
    return raw;
  }
  if (f == "tropical") {
    auto t = as<TropicalValue>(raw);
    if (t.infinite) return TropicalValue::inf();
    if (t.value < 0) return reject("negative tropical value");
    return t;
  }
  if (f == "posbool") {
    auto d = as<MonotoneDNF>(raw);
    for (const auto& c : d.clauses) check_vars(c);
    return minimize(std::move(d));
  }
  if (f == "boolexpr") {
    const auto& t = as<TruthTable>(raw);
    if (t.rows.size() != (1ULL << inst.variables.size())) return reject("truth table has the wrong number of rows");
    return raw;
  }
  if (f == "natpoly") {
    PolynomialN out;
    for (const auto& [key, c] : as<PolynomialN>(raw).terms) {
      if (c < 0) return reject("negative coefficient");
      Monomial m = key;
      std::erase_if(m, [](const auto& kv) { return kv.second == 0; });
      VarSet vs;
      for (const auto& [v, e] : m) vs.insert(v);
      check_vars(vs);
      if (c != 0) out.terms[m] += c;
    }
    return out;
  }
  if (f == "boolpoly") {
    BoolMonomialSet out;
    for (auto m : as<BoolMonomialSet>(raw).monomials) {
      std::erase_if(m, [](const auto& kv) { return kv.second == 0; });
      VarSet vs;
      for (const auto& [v, e] : m) vs.insert(v);
      check_vars(vs);
      out.monomials.insert(m);
    }
    return out;
  }
  if (f == "why") {
    for (const auto& w : as<WitnessFamily>(raw).witnesses) check_vars(w);
    return raw;
  }
  if (f == "trio") {
    TrioBag out;
    for (const auto& [w, c] : as<TrioBag>(raw).bag) {
      if (c < 0) return reject("negative coefficient");
      check_vars(w);
      if (c != 0) out.bag[w] = c;
    }
    return out;
  }
  return reject("no canonical form defined");
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"bool",     "nat",     "realplus", "int",      "tropical",
                                                 "fuzz",     "tvl",     "security", "sprime",   "posbool",
                                                 "boolexpr", "natpoly", "boolpoly", "why",      "trio"};
  return names;
}

const std::vector<std::string>& bounded_names() {
  static const std::vector<std::string> names = {"nat_sat", "tropical_trunc", "fuzz_grid"};
  return names;
}

bool needs_variables(std::string_view name) {
  const auto& xs = x_parameterized();
  return std::find(xs.begin(), xs.end(), name) != xs.end();
}

namespace {

// Drops simplification candidates that do not lower the complexity measure.
void keep_strictly_simpler(SemiringInstance& s) {
  if (!s.simplify || !s.complexity) return;
  s.simplify = [raw = s.simplify, measure = s.complexity](const Element& e) {
    const std::uint64_t limit = measure(e);
    std::vector<Element> out;
    for (auto& c : raw(e))
      if (measure(c) < limit && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
    return out;
  };
}

}  // namespace

InstancePtr make_instance(std::string_view name, const InstanceParams& params) {
  static std::mutex mutex;
  static std::map<std::string, InstancePtr> cache;
  std::string key(name);
  if (needs_variables(name)) {
    for (const auto& v : params.variables) key += "|" + v;
  } else if (params.bound) {
    key += "#" + std::to_string(*params.bound);
  }
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  SemiringInstance s = build(name, params);
  attach_closed_form_monus(s);
  keep_strictly_simpler(s);
  InstancePtr inst = register_instance(std::move(s));
  std::lock_guard lock(mutex);
  return cache.emplace(key, inst).first->second;
}

InstancePtr make_table_instance(std::string name, std::size_t order, std::vector<std::uint8_t> add,
                                std::vector<std::uint8_t> mul) {
  if (order < 1 || order > 9) throw Error("table instances support orders 1..9");
  if (add.size() != order * order || mul.size() != order * order) throw Error("operation table has the wrong size");
  for (auto v : add)
    if (v >= order) throw Error("operation table entry outside the carrier");
  for (auto v : mul)
    if (v >= order) throw Error("operation table entry outside the carrier");
  SemiringInstance s;
  s.family = "table";
  s.label = name;
  s.name = std::move(name);
  s.carrier = CarrierKind::Finite;
  for (std::size_t i = 0; i < order; ++i) s.elements.emplace_back(TableElement{static_cast<std::uint8_t>(i)});
  s.add = [order, add = std::move(add)](const Element& a, const Element& b) {
    return Element(TableElement{add[as<TableElement>(a).index * order + as<TableElement>(b).index]});
  };
  s.mul = [order, mul = std::move(mul)](const Element& a, const Element& b) {
    return Element(TableElement{mul[as<TableElement>(a).index * order + as<TableElement>(b).index]});
  };
  s.zero = TableElement{0};
  s.one = TableElement{static_cast<std::uint8_t>(order > 1 ? 1 : 0)};
  s.print = [](const Element& e) { return std::to_string(as<TableElement>(e).index); };
  s.parse = [order](std::string_view t) -> Element {
    const Integer v = parse_integer(t, false);
    if (v >= order) throw ParseError("element outside the carrier: " + std::string(t));
    return TableElement{v.convert_to<std::uint8_t>()};
  };
  attach_index_shrinking(s);
  return register_instance(std::move(s));
}

}  // namespace semiprov::instances
