#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sfs/system.hpp"

namespace sfs {

inline constexpr int kSystemSchemaVersion = 1;

/// Malformed system description. `where()` is a JSON pointer to the offending
/// field, or "line L, column C" for syntax errors.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Parses a system description:
///
///   {
///     "schema_version": 1,
///     "n": 2,
///     "parameters": ["p1", "p2"],
///     "channels": [{"m": 1, "l": 1}],
///     "A": [{"row": 0, "col": 0, "terms": [{"coeff": "1/1", "monomial": {"p1": 1}}]}],
///     "B": [[ ...entries of B_1... ]],
///     "C": [[ ...entries of C_1... ]]
///   }
///
/// Rows and columns are 0-based within each block. Unknown fields, duplicate
/// entries, unknown parameter names and out-of-range indices are rejected.
MultiChannelSystem system_from_json(const nlohmann::json& j);

/// Canonical serialization: entries by (row, col), terms by monomial, every
/// coefficient as "num/den".
nlohmann::json system_to_json(const MultiChannelSystem& sys);

/// Reads and parses a file; syntax errors report line and column.
MultiChannelSystem load_system(const std::string& path);
MultiChannelSystem parse_system(const std::string& text);

}  // namespace sfs
