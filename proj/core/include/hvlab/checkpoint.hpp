#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace hvl {

/// 17-significant-digit decimal form ("%.17g"); round-trips to the same bits.
std::string fmt17(double x);

/// One output table with a frozen column order.  Cells are preformatted
/// strings so numeric and flag columns mix freely.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
  std::string render() const;
  void write(const std::string& path) const;
};

/// Writes a summary object with schema_version stamped in, 2-space indent,
/// keys in map order (deterministic byte-for-byte).
void write_summary(const std::string& path, nlohmann::json j);

/// One-line machine-parsable error for the error stream:
/// "hvlab-error code=<n> kind=<kind> reason=<reason>" (reason quoted, no
/// newlines).
std::string error_line(int code, const std::string& kind, const std::string& reason);

}  // namespace hvl
