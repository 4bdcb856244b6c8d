#include "semiprov/element.hpp"

#include <sstream>

namespace semiprov {

namespace {
std::string position_message(const std::string& what, std::size_t line, std::size_t column) {
  if (line == 0) return what;
  std::ostringstream os;
  os << line;
  if (column != 0) os << ":" << column;
  os << ": " << what;
  return os.str();
}
}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : Error(position_message(what, line, column)), line_(line), column_(column) {}

Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial out = a;
  for (const auto& [v, e] : b) out[v] += e;
  return out;
}

std::uint32_t degree(const Monomial& m) {
  std::uint32_t d = 0;
  for (const auto& [v, e] : m) d += e;
  return d;
}

bool grlex_greater(const Monomial& a, const Monomial& b) {
  const auto da = degree(a);
  const auto db = degree(b);
  if (da != db) return da > db;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) return true;
    if (ia == a.end() || ib->first < ia->first) return false;
    if (ia->second != ib->second) return ia->second > ib->second;
    ++ia;
    ++ib;
  }
  return false;
}

std::string format_monomial(const Monomial& m) {
  std::string out;
  for (const auto& [v, e] : m) {
    if (!out.empty()) out += '*';
    out += v;
    if (e > 1) out += '^' + std::to_string(e);
  }
  return out;
}

std::string format_varset(const VarSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& v : s) {
    if (!first) out += ',';
    out += v;
    first = false;
  }
  return out + "}";
}

}  // namespace semiprov
