#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dilute/model.hpp"
#include "dilute/run_config.hpp"

namespace dilute {

using Cell = std::variant<std::monostate, double, std::int64_t, std::uint64_t>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Index of a column; throws std::out_of_range for unknown names.
  std::size_t column(std::string_view name) const;
};

/// Row schema shared by lyapunov, dos, anomaly and both sweeps.
const std::vector<std::string>& point_columns();

/// Executes any command except verify.
Table run_table(const RunConfig& config);

/// CSV or JSON text per config.format. The timestamp line is omitted when
/// `timestamp` is empty.
std::string render(const Table& table, const RunConfig& config, std::string_view timestamp);

/// run_table + render, stamping the current UTC time unless config.timestamp
/// is false.
std::string run_to_string(const RunConfig& config);

std::string utc_timestamp();

} // namespace dilute
