#pragma once

// Parser for catalog entry strings of the form NAME?key=val&key=val,
// e.g. "T1?p1=1&p2=2&b=1" or "KINK?mshape=gauss&c1=1&A=5".

#include <optional>
#include <string>
#include <vector>

#include "trafficsym/catalog.hpp"

namespace trafficsym {

/// Required parameter keys of a catalog name; throws UsageError for unknown names.
std::vector<std::string> required_keys(const std::string& name);

/// Catalog names accepted by parse_entry_spec.
std::vector<std::string> entry_names();

/// A and D come from the spec string if present, else from the given
/// defaults, else from the entry's own defaults. Unknown names or keys and
/// missing keys raise UsageError listing every offender; malformed numbers
/// raise ParseError. Constraint violations raise DomainError.
CatalogEntry parse_entry_spec(const std::string& spec,
                              std::optional<double> default_A = std::nullopt,
                              std::optional<double> default_D = std::nullopt);

}  // namespace trafficsym
