#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "belldim/correlation.hpp"

namespace belldim {

/// Malformed document, missing field, or a values array whose length does not
/// match the declared shape.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads a correlation document. Shape is enforced here; normalization is
/// not, so callers can run validate() on whatever the file contained.
Correlation read_correlation(std::istream& in);
Correlation read_correlation(const std::filesystem::path& path);

/// Writes the canonical correlation document. Values are serialized with 17
/// significant digits, so write/read round-trips bit-exactly.
void write_correlation(const Correlation& c, std::ostream& out);
void write_correlation(const Correlation& c, const std::filesystem::path& path);

}  // namespace belldim
