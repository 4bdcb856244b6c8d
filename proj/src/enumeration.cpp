#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "semiprov/instances.hpp"
#include "semiprov/lab.hpp"

namespace semiprov::lab {

namespace {

using Table = std::vector<std::uint8_t>;

struct Structure {
  std::size_t n;
  Table add;
  Table mul;
};

bool associative(const Table& t, std::size_t n) {
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (t[t[a * n + b] * n + c] != t[a * n + t[b * n + c]]) return false;
  return true;
}

bool distributive(const Structure& s) {
  const std::size_t n = s.n;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (s.mul[a * n + s.add[b * n + c]] != s.add[s.mul[a * n + b] * n + s.mul[a * n + c]]) return false;
  return true;
}

Structure permuted(const Structure& s, const std::vector<std::uint8_t>& p) {
  Structure out{s.n, Table(s.n * s.n), Table(s.n * s.n)};
  for (std::size_t a = 0; a < s.n; ++a)
    for (std::size_t b = 0; b < s.n; ++b) {
      out.add[p[a] * s.n + p[b]] = p[s.add[a * s.n + b]];
      out.mul[p[a] * s.n + p[b]] = p[s.mul[a * s.n + b]];
    }
  return out;
}

// lexicographically least relabelling among permutations fixing 0 and 1
Structure canonical(const Structure& s) {
  std::vector<std::uint8_t> p(s.n);
  std::iota(p.begin(), p.end(), 0);
  const std::size_t fixed = std::min<std::size_t>(2, s.n);
  Structure best = s;
  do {
    Structure c = permuted(s, p);
    if (std::tie(c.add, c.mul) < std::tie(best.add, best.mul)) best = std::move(c);
  } while (std::next_permutation(p.begin() + static_cast<std::ptrdiff_t>(fixed), p.end()));
  return best;
}

// distinct free cells of a commutative table, i <= j, both >= lo
std::vector<std::pair<std::size_t, std::size_t>> free_cells(std::size_t n, std::size_t lo) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = lo; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) out.emplace_back(i, j);
  return out;
}

// Fills the free cells with every assignment; calls f(table).
template <class F>
void each_filling(std::size_t n, Table base, const std::vector<std::pair<std::size_t, std::size_t>>& cells, F&& f) {
  std::vector<std::uint8_t> digits(cells.size(), 0);
  for (;;) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      base[cells[k].first * n + cells[k].second] = digits[k];
      base[cells[k].second * n + cells[k].first] = digits[k];
    }
    f(base);
    std::size_t k = 0;
    while (k < digits.size() && ++digits[k] == n) digits[k++] = 0;
    if (k == digits.size()) return;
  }
}

Structure table_form(const SemiringInstance& inst) {
  const std::size_t n = inst.elements.size();
  std::vector<std::size_t> order;  // new label -> carrier index
  order.push_back(inst.index_of(inst.zero));
  if (n > 1) order.push_back(inst.index_of(inst.one));
  for (std::size_t i = 0; i < n; ++i)
    if (std::find(order.begin(), order.end(), i) == order.end()) order.push_back(i);
  std::vector<std::uint8_t> label(n);
  for (std::size_t k = 0; k < n; ++k) label[order[k]] = static_cast<std::uint8_t>(k);
  Structure s{n, Table(n * n), Table(n * n)};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const auto& x = inst.elements[order[a]];
      const auto& y = inst.elements[order[b]];
      s.add[a * n + b] = label[inst.index_of(inst.add(x, y))];
      s.mul[a * n + b] = label[inst.index_of(inst.mul(x, y))];
    }
  return canonical(s);
}

Structure cyclic(std::size_t n) {
  Structure s{n, Table(n * n), Table(n * n)};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      s.add[a * n + b] = static_cast<std::uint8_t>((a + b) % n);
      s.mul[a * n + b] = static_cast<std::uint8_t>((a * b) % n);
    }
  return canonical(s);
}

const std::map<std::pair<Table, Table>, std::string>& known_structures() {
  static const auto known = [] {
    std::map<std::pair<Table, Table>, std::string> m;
    auto put = [&](const Structure& s, const std::string& name) { m.emplace(std::make_pair(s.add, s.mul), name); };
    put(table_form(*instances::make_instance("bool")), "B");
    put(table_form(*instances::make_instance("tvl")), "TVL");
    for (unsigned k : {2U, 3U}) put(table_form(*instances::make_instance("nat_sat", {{}, k})), "N<=" + std::to_string(k));
    for (unsigned k : {1U, 2U})
      put(table_form(*instances::make_instance("tropical_trunc", {{}, k})), "T<=" + std::to_string(k));
    put(table_form(*instances::make_instance("fuzz_grid", {{}, 3U})), "fuzz/3");
    for (std::size_t n : {2, 3, 4}) put(cyclic(n), "Z" + std::to_string(n));
    return m;
  }();
  return known;
}

std::string cell(std::uint8_t v) { return std::to_string(v); }

void print_table(std::ostringstream& os, const char* op, const Table& t, std::size_t n) {
  os << "  " << op << " |";
  for (std::size_t b = 0; b < n; ++b) os << " " << b;
  os << "\n";
  for (std::size_t a = 0; a < n; ++a) {
    os << "  " << a << " |";
    for (std::size_t b = 0; b < n; ++b) os << " " << cell(t[a * n + b]);
    os << "\n";
  }
}

}  // namespace

EnumerationReport enumerate_finite_semirings(std::size_t n, const EnumerationOptions& opts) {
  if (n < 1 || n > 4) throw Error("enumeration supports carrier orders 1 to 4 (got " + std::to_string(n) + ")");
  if (n == 4 && !opts.allow_order4) throw Error("order 4 enumeration needs --allow-order4");
  if (!opts.relabel.empty()) {
    bool ok = opts.relabel.size() == n && opts.relabel[0] == 0 && (n < 2 || opts.relabel[1] == 1);
    std::vector<std::uint8_t> sorted = opts.relabel;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) ok = ok && sorted[i] == i;
    if (!ok) throw Error("relabel must be a permutation fixing 0 and 1");
  }
  EnumerationReport rep;
  rep.order = n;
  std::set<std::pair<Table, Table>> seen;
  std::vector<Structure> found;

  Table add0(n * n, 0), mul0(n * n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    add0[x] = add0[x * n] = static_cast<std::uint8_t>(x);  // 0 + x = x
    if (n > 1) mul0[1 * n + x] = mul0[x * n + 1] = static_cast<std::uint8_t>(x);  // 1 * x = x
  }
  for (std::size_t x = 0; x < n; ++x) mul0[x] = mul0[x * n] = 0;
  const auto add_cells = free_cells(n, 1);
  const auto mul_cells = free_cells(n, 2);
  each_filling(n, add0, add_cells, [&](const Table& add) {
    if (!associative(add, n)) {
      std::uint64_t skipped = 1;
      for (std::size_t k = 0; k < mul_cells.size(); ++k) skipped *= n;
      rep.tables_scanned += skipped;
      return;
    }
    each_filling(n, mul0, mul_cells, [&](const Table& mul) {
      ++rep.tables_scanned;
      Structure s{n, add, mul};
      if (!associative(mul, n) || !distributive(s)) return;
      if (!opts.relabel.empty()) s = permuted(s, opts.relabel);
      Structure c = canonical(s);
      if (seen.insert({c.add, c.mul}).second) found.push_back(std::move(c));
    });
  });
  std::sort(found.begin(), found.end(),
            [](const Structure& a, const Structure& b) { return std::tie(a.add, a.mul) < std::tie(b.add, b.mul); });

  const auto& known = known_structures();
  std::size_t index = 0;
  for (const auto& s : found) {
    EnumeratedStructure e;
    e.order = n;
    e.add = s.add;
    e.mul = s.mul;
    auto it = known.find({s.add, s.mul});
    if (it != known.end()) e.name = it->second;
    auto inst = instances::make_table_instance("census" + std::to_string(n) + "_" + std::to_string(++index), n,
                                               s.add, s.mul);
    ++rep.semirings;
    e.naturally_ordered = algebra::is_naturally_ordered(*inst);
    if (e.naturally_ordered) ++rep.naturally_ordered;
    if (inst->monus) {
      ++rep.with_monus;
      Table m(n * n);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          m[a * n + b] = as<TableElement>((*inst->monus)(inst->elements[a], inst->elements[b])).index;
      e.monus = std::move(m);
      e.a9_a12 = true;
      for (auto ax : {AxiomId::A9, AxiomId::A10, AxiomId::A11, AxiomId::A12})
        e.a9_a12 = e.a9_a12 && algebra::check_axiom(*inst, ax, algebra::Exhaustive{}).holds();
      e.a13 = algebra::check_axiom(*inst, AxiomId::A13, algebra::Exhaustive{}).holds();
      if (e.a13) ++rep.satisfying_a13;
    }
    rep.structures.push_back(std::move(e));
  }
  return rep;
}

std::string render_enumeration(const EnumerationReport& rep, bool dump) {
  std::ostringstream os;
  os << "order " << rep.order << ": " << rep.tables_scanned << " table pairs scanned\n"
     << "commutative semirings (up to isomorphism): " << rep.semirings << "\n"
     << "naturally ordered: " << rep.naturally_ordered << "\n"
     << "with monus: " << rep.with_monus << "\n"
     << "satisfying A13: " << rep.satisfying_a13 << "\n";
  bool all_ok = true;
  for (const auto& s : rep.structures)
    if (s.monus && !s.a9_a12) all_ok = false;
  os << "A9-A12 on every derived monus: " << (all_ok ? "pass" : "FAIL") << "\n";
  if (!dump) return os.str();
  for (std::size_t i = 0; i < rep.structures.size(); ++i) {
    const auto& s = rep.structures[i];
    os << "\nstructure " << (i + 1);
    if (!s.name.empty()) os << " (" << s.name << ")";
    os << ": " << (s.naturally_ordered ? "naturally ordered" : "not naturally ordered");
    if (s.monus) os << ", monus, A9-A12 " << (s.a9_a12 ? "pass" : "FAIL") << ", A13 " << (s.a13 ? "holds" : "fails");
    os << "\n";
    print_table(os, "+", s.add, s.order);
    print_table(os, "*", s.mul, s.order);
    if (s.monus) print_table(os, "-", *s.monus, s.order);
  }
  return os.str();
}

}  // namespace semiprov::lab
