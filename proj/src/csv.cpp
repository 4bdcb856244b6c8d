#include "semiprov/csv.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace semiprov::krel {

namespace {

struct Cell {
  std::string text;
  bool quoted = false;
};

struct Record {
  std::vector<Cell> cells;
  std::size_t line = 0;
};

// RFC 4180 with CRLF or LF line endings; quoted cells may span lines.
std::vector<Record> split_records(std::string_view text) {
  std::vector<Record> out;
  std::size_t i = 0, line = 1;
  while (i < text.size()) {
    Record rec;
    rec.line = line;
    Cell cell;
    bool in_quotes = false;
    bool cell_started = false;
    for (;;) {
      if (i >= text.size()) {
        if (in_quotes) throw ParseError("unterminated quoted cell", rec.line, 0);
        rec.cells.push_back(std::move(cell));
        break;
      }
      const char c = text[i];
      if (in_quotes) {
        if (c == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            cell.text += '"';
            i += 2;
          } else {
            in_quotes = false;
            ++i;
          }
        } else {
          if (c == '\n') ++line;
          cell.text += c;
          ++i;
        }
        continue;
      }
      if (c == '"' && !cell_started) {
        in_quotes = true;
        cell.quoted = true;
        cell_started = true;
        ++i;
      } else if (c == ',') {
        rec.cells.push_back(std::move(cell));
        cell = Cell{};
        cell_started = false;
        ++i;
      } else if (c == '\r' || c == '\n') {
        if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
        ++i;
        ++line;
        rec.cells.push_back(std::move(cell));
        break;
      } else {
        if (cell.quoted) throw ParseError("text after a closing quote", line, 0);
        cell.text += c;
        cell_started = true;
        ++i;
      }
    }
    // skip blank lines
    if (rec.cells.size() == 1 && rec.cells[0].text.empty() && !rec.cells[0].quoted) continue;
    out.push_back(std::move(rec));
  }
  return out;
}

bool looks_integral(const std::string& s) {
  std::size_t i = s.size() > 1 && s[0] == '-' ? 1 : 0;
  if (i >= s.size()) return false;
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  return true;
}

Value cell_value(const Cell& c, std::size_t line) {
  if (c.quoted || !looks_integral(c.text)) return c.text;
  try {
    return static_cast<std::int64_t>(std::stoll(c.text));
  } catch (const std::out_of_range&) {
    throw ParseError("integer out of range: " + c.text, line, 0);
  }
}

std::string escape(const std::string& s, bool force) {
  const bool needs = force || s.empty() || s.find_first_of(",\"\r\n") != std::string::npos || s.front() == ' ' ||
                     s.back() == ' ';
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string value_cell(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  const auto& s = std::get<std::string>(v);
  return escape(s, looks_integral(s));
}

}  // namespace

KRelation read_csv(std::string_view text, InstancePtr inst) {
  auto records = split_records(text);
  if (records.empty()) throw ParseError("missing header row", 1, 0);
  const auto& header = records.front().cells;
  std::vector<std::string> attrs;
  bool annotated = false;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string& h = header[i].text;
    if (h == "@k") {
      if (i + 1 != header.size()) throw ParseError("the @k column must come last", 1, 0);
      annotated = true;
      continue;
    }
    if (!is_attribute_name(h)) throw ParseError("invalid attribute name '" + h + "' in header", 1, 0);
    attrs.push_back(h);
  }
  std::vector<std::string> header_order = attrs;
  KRelation rel(inst, make_schema(attrs, true));
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.cells.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) + " cells, found " +
                           std::to_string(rec.cells.size()),
                       rec.line, 0);
    Tuple t;
    for (std::size_t i = 0; i < header_order.size(); ++i) t.emplace(header_order[i], cell_value(rec.cells[i], rec.line));
    Element annotation = inst->one;
    if (annotated) {
      try {
        annotation = inst->parse(rec.cells.back().text);
      } catch (const ParseError& e) {
        throw ParseError(std::string("bad annotation: ") + e.what(), rec.line, 0);
      } catch (const Error& e) {
        throw ParseError(std::string("bad annotation: ") + e.what(), rec.line, 0);
      }
    }
    rel.add(std::move(t), std::move(annotation));
  }
  return rel;
}

KRelation load_csv(const std::filesystem::path& path, InstancePtr inst) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return read_csv(buf.str(), std::move(inst));
  } catch (const ParseError& e) {
    throw Error(path.string() + ":" + e.what());
  }
}

std::string write_csv(const KRelation& r) {
  std::string out;
  for (const auto& a : r.schema()) out += a + ",";
  out += "@k\n";
  for (const auto& [t, a] : r.rows()) {
    for (const auto& [k, v] : t) out += value_cell(v) + ",";
    out += escape(r.instance().print(a), false) + "\n";
  }
  return out;
}

std::string render_text(const KRelation& r) {
  std::string out;
  for (const auto& [t, a] : r.rows()) out += format_tuple(t) + " : " + r.instance().print(a) + "\n";
  return out;
}

}  // namespace semiprov::krel
