#include <cctype>

#include "semiprov/krel.hpp"

namespace semiprov::krel {

namespace {

struct Token {
  enum class Kind { Name, Keyword, Int, String, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

bool is_keyword(const std::string& w) {
  return w == "UNION" || w == "JOIN" || w == "PROJECT" || w == "SELECT" || w == "RENAME";
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.text = std::string(src.substr(i, j - i));
      t.kind = is_keyword(t.text) ? Token::Kind::Keyword : Token::Kind::Name;
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Token::Kind::Int;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == '\'' || c == '"') {
      t.kind = Token::Kind::String;
      advance();
      for (;;) {
        if (i >= src.size()) throw ParseError("unterminated string literal", t.line, t.column);
        if (src[i] == c) {
          if (i + 1 < src.size() && src[i + 1] == c) {
            t.text += c;
            advance(2);
            continue;
          }
          advance();
          break;
        }
        t.text += src[i];
        advance();
      }
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      t.kind = Token::Kind::Symbol;
      t.text = "->";
      advance(2);
    } else if (std::string_view("()[],=-").find(c) != std::string_view::npos) {
      t.kind = Token::Kind::Symbol;
      t.text = std::string(1, c);
      advance();
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Query parse() {
    Query q = expr();
    if (cur().kind != Token::Kind::End) fail("unexpected '" + cur().text + "' after the expression");
    return q;
  }

 private:
  const Token& cur() const { return tokens_[pos_]; }
  bool at_symbol(const char* s) const { return cur().kind == Token::Kind::Symbol && cur().text == s; }
  bool at_keyword(const char* s) const { return cur().kind == Token::Kind::Keyword && cur().text == s; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, cur().line, cur().column); }

  static std::string describe(const Token& t) {
    if (t.kind == Token::Kind::End) return "end of input";
    return "'" + t.text + "'";
  }

  void expect_symbol(const char* s) {
    if (!at_symbol(s)) fail(std::string("expected '") + s + "', found " + describe(cur()));
    ++pos_;
  }

  std::string name() {
    if (cur().kind != Token::Kind::Name) fail("expected a name, found " + describe(cur()));
    return tokens_[pos_++].text;
  }

  Query expr() {
    Query q = term();
    for (;;) {
      if (at_keyword("UNION")) {
        ++pos_;
        q = Query::union_of(std::move(q), term());
      } else if (at_symbol("-")) {
        ++pos_;
        q = Query::diff(std::move(q), term());
      } else {
        return q;
      }
    }
  }

  Query term() {
    Query q = factor();
    while (at_keyword("JOIN")) {
      ++pos_;
      q = Query::join(std::move(q), factor());
    }
    return q;
  }

  Query factor() {
    if (at_symbol("(")) {
      ++pos_;
      Query q = expr();
      expect_symbol(")");
      return q;
    }
    if (at_keyword("PROJECT")) {
      ++pos_;
      expect_symbol("[");
      std::vector<std::string> attrs;
      if (!at_symbol("]")) {
        attrs.push_back(name());
        while (at_symbol(",")) {
          ++pos_;
          attrs.push_back(name());
        }
      }
      expect_symbol("]");
      return Query::project(std::move(attrs), factor());
    }
    if (at_keyword("SELECT")) {
      ++pos_;
      expect_symbol("[");
      Predicate pred;
      pred.atoms.push_back(atom());
      while (at_symbol(",")) {
        ++pos_;
        pred.atoms.push_back(atom());
      }
      expect_symbol("]");
      return Query::select(std::move(pred), factor());
    }
    if (at_keyword("RENAME")) {
      ++pos_;
      expect_symbol("[");
      std::vector<std::pair<std::string, std::string>> renames;
      do {
        if (!renames.empty()) ++pos_;
        std::string from = name();
        expect_symbol("->");
        renames.emplace_back(std::move(from), name());
      } while (at_symbol(","));
      expect_symbol("]");
      return Query::rename(std::move(renames), factor());
    }
    if (cur().kind == Token::Kind::Name) return Query::base(tokens_[pos_++].text);
    fail("expected a relation, '(' or an operator, found " + describe(cur()));
  }

  Atom atom() {
    Atom a;
    a.attr = name();
    expect_symbol("=");
    bool negative = false;
    if (at_symbol("-")) {
      negative = true;
      ++pos_;
      if (cur().kind != Token::Kind::Int) fail("expected digits after '-'");
    }
    switch (cur().kind) {
      case Token::Kind::Name:
        a.rhs_is_attr = true;
        a.rhs_attr = tokens_[pos_++].text;
        return a;
      case Token::Kind::Int: {
        try {
          const std::string digits = (negative ? "-" : "") + cur().text;
          a.constant = static_cast<std::int64_t>(std::stoll(digits));
        } catch (const std::out_of_range&) {
          fail("integer constant out of range");
        }
        ++pos_;
        return a;
      }
      case Token::Kind::String:
        a.constant = tokens_[pos_++].text;
        return a;
      default: fail("expected an attribute or a constant, found " + describe(cur()));
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

std::string format_atom(const Atom& a) {
  std::string rhs;
  if (a.rhs_is_attr) {
    rhs = a.rhs_attr;
  } else if (const auto* i = std::get_if<std::int64_t>(&a.constant)) {
    rhs = std::to_string(*i);
  } else {
    rhs = quote(std::get<std::string>(a.constant));
  }
  return a.attr + "=" + rhs;
}

bool is_additive(const Query& q) { return q.kind == Query::Kind::Union || q.kind == Query::Kind::Diff; }

std::string format_factor(const Query& q);

std::string format_term_level(const Query& q) {
  if (q.kind != Query::Kind::Join) return format_factor(q);
  const Query& r = q.kids[1];
  return format_term_level(q.kids[0]) + " JOIN " + format_factor(r);
}

std::string format_expr(const Query& q) {
  if (!is_additive(q)) return format_term_level(q);
  const Query& r = q.kids[1];
  std::string right = is_additive(r) ? "(" + format_expr(r) + ")" : format_term_level(r);
  return format_expr(q.kids[0]) + (q.kind == Query::Kind::Union ? " UNION " : " - ") + right;
}

std::string format_factor(const Query& q) {
  switch (q.kind) {
    case Query::Kind::Base: return q.name;
    case Query::Kind::Project: {
      std::string out = "PROJECT[";
      for (std::size_t i = 0; i < q.attrs.size(); ++i) out += (i ? "," : "") + q.attrs[i];
      return out + "] " + format_factor(q.kids[0]);
    }
    case Query::Kind::Select: {
      std::string out = "SELECT[";
      for (std::size_t i = 0; i < q.pred.atoms.size(); ++i) out += (i ? "," : "") + format_atom(q.pred.atoms[i]);
      return out + "] " + format_factor(q.kids[0]);
    }
    case Query::Kind::Rename: {
      std::string out = "RENAME[";
      for (std::size_t i = 0; i < q.renames.size(); ++i)
        out += (i ? "," : "") + q.renames[i].first + "->" + q.renames[i].second;
      return out + "] " + format_factor(q.kids[0]);
    }
    default: return "(" + format_expr(q) + ")";
  }
}

}  // namespace

Query parse_query(std::string_view src) { return Parser(lex(src)).parse(); }

std::string format_query(const Query& q) { return format_expr(q); }

}  // namespace semiprov::krel
