#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "semiprov/krel.hpp"

namespace semiprov::krel {

/// Annotated CSV: header of attribute names with an optional final `@k`
/// column holding annotation literals; without it every row is annotated 1.
/// Unquoted cells that look like integers are integers, every other cell is a
/// string. Repeated tuples have their annotations summed.
KRelation read_csv(std::string_view text, InstancePtr inst);
KRelation load_csv(const std::filesystem::path& path, InstancePtr inst);

/// Rows in tuple order, attributes in schema order, `@k` last.
std::string write_csv(const KRelation& r);

/// One `(a=1, b=x) : annotation` line per row, sorted by tuple.
std::string render_text(const KRelation& r);

}  // namespace semiprov::krel
