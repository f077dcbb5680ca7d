#ifndef STRIKEBENCH_STRIKINGNESS_TABLE_H_
#define STRIKEBENCH_STRIKINGNESS_TABLE_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "strikebench/rsmf.h"
#include "strikebench/types.h"

namespace strikebench {

/// One row of a strikingness table. Element columns are NaN for measures
/// that do not decompose by element.
struct StrikingnessRow {
  std::size_t query_index = 0;
  Direction direction = Direction::kTail;
  double sk_subject = 0.0;
  double sk_object = 0.0;
  double sk_relation = 0.0;
  double sk = 0.0;
};

StrikingnessRow to_row(const StrikingnessRecord& record);

/// TSV table preceded by a `# {json}` header line that records the measure
/// and the configuration used to produce it.
struct StrikingnessTable {
  /// Serialized JSON object; must contain a "measure" key.
  std::string header_json;
  std::vector<StrikingnessRow> rows;

  std::string measure() const;
  /// Row lookup by query key; throws ValidationError on duplicate keys.
  std::unordered_map<QueryKey, double, QueryKeyHash> sk_by_query() const;
};

/// Header for an RSMF table. `tau` and `history_scope` are recorded verbatim.
std::string rsmf_header(const RsmfConfig& config, double tau,
                        const std::string& history_scope,
                        const std::string& split);
/// Header for a baseline measure ("freq_inv" or "temp_inv").
std::string baseline_header(const std::string& measure, double lambda_t,
                            const std::string& history_scope,
                            const std::string& split);

void write_strikingness_table(const StrikingnessTable& table, std::ostream& out);
void save_strikingness_table(const StrikingnessTable& table,
                             const std::filesystem::path& path);
StrikingnessTable read_strikingness_table(std::istream& in,
                                          const std::string& source = "<stream>");
StrikingnessTable load_strikingness_table(const std::filesystem::path& path);

}  // namespace strikebench

#endif  // STRIKEBENCH_STRIKINGNESS_TABLE_H_
