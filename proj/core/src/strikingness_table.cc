#include "strikebench/strikingness_table.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "format_util.h"
#include <nlohmann/json.hpp>
#include "strikebench/error.h"

namespace strikebench {

using internal::format_double;

StrikingnessRow to_row(const StrikingnessRecord& r) {
  return {r.query_index, r.direction, r.subject.strikingness, r.object.strikingness,
          r.relation.strikingness, r.sk};
}

std::string StrikingnessTable::measure() const {
  if (header_json.empty()) return "rsmf";
  const auto j = nlohmann::json::parse(header_json, nullptr, false);
  if (j.is_discarded() || !j.contains("measure")) return "rsmf";
  return j["measure"].get<std::string>();
}

std::unordered_map<QueryKey, double, QueryKeyHash> StrikingnessTable::sk_by_query() const {
  std::unordered_map<QueryKey, double, QueryKeyHash> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    if (!out.emplace(QueryKey{row.query_index, row.direction}, row.sk).second) {
      throw ValidationError("duplicate strikingness row for query " +
                            std::to_string(row.query_index) + " " +
                            std::string(to_string(row.direction)));
    }
  }
  return out;
}

std::string rsmf_header(const RsmfConfig& config, double tau,
                        const std::string& history_scope, const std::string& split) {
  nlohmann::ordered_json j;
  j["measure"] = "rsmf";
  j["window"] = config.window ? nlohmann::ordered_json(*config.window)
                              : nlohmann::ordered_json("full");
  j["lambda"] = config.lambda_decay;
  j["alpha"] = {config.alpha_subject, config.alpha_object, config.alpha_relation};
  j["tau"] = tau;
  j["history_scope"] = history_scope;
  j["split"] = split;
  return j.dump();
}

std::string baseline_header(const std::string& measure, double lambda_t,
                            const std::string& history_scope, const std::string& split) {
  nlohmann::ordered_json j;
  j["measure"] = measure;
  if (measure == "temp_inv") j["lambda"] = lambda_t;
  j["history_scope"] = history_scope;
  j["split"] = split;
  return j.dump();
}

void write_strikingness_table(const StrikingnessTable& table, std::ostream& out) {
  out << "# " << (table.header_json.empty() ? "{}" : table.header_json) << '\n';
  out << "query_index\tdirection\tsk_s\tsk_o\tsk_r\tsk\n";
  for (const auto& row : table.rows) {
    out << row.query_index << '\t' << to_string(row.direction) << '\t'
        << format_double(row.sk_subject) << '\t' << format_double(row.sk_object) << '\t'
        << format_double(row.sk_relation) << '\t' << format_double(row.sk) << '\n';
  }
}

void save_strikingness_table(const StrikingnessTable& table,
                             const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write strikingness table " + path.string());
  write_strikingness_table(table, out);
  if (!out) throw IoError("write failed: " + path.string());
}

StrikingnessTable read_strikingness_table(std::istream& in, const std::string& source) {
  StrikingnessTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = internal::strip_cr(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      if (table.header_json.empty()) {
        auto body = view.substr(1);
        while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
        if (nlohmann::json::accept(body)) table.header_json = std::string(body);
      }
      continue;
    }
    if (view.starts_with("query_index")) continue;
    const auto cols = internal::split_tabs(view);
    if (cols.size() != 6) {
      throw ParseError(source, line_no, "expected 6 columns, found " +
                                            std::to_string(cols.size()));
    }
    StrikingnessRow row;
    const auto [ptr, ec] =
        std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), row.query_index);
    if (ec != std::errc() || ptr != cols[0].data() + cols[0].size()) {
      throw ParseError(source, line_no, "bad query index");
    }
    try {
      row.direction = parse_direction(cols[1]);
    } catch (const ValidationError& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (!internal::parse_double(cols[2], row.sk_subject) ||
        !internal::parse_double(cols[3], row.sk_object) ||
        !internal::parse_double(cols[4], row.sk_relation) ||
        !internal::parse_double(cols[5], row.sk)) {
      throw ParseError(source, line_no, "bad strikingness value");
    }
    if (!(row.sk >= 0.0 && row.sk <= 1.0)) {
      throw ParseError(source, line_no, "strikingness outside [0, 1]");
    }
    table.rows.push_back(row);
  }
  return table;
}

StrikingnessTable load_strikingness_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open strikingness table " + path.string());
  return read_strikingness_table(in, path.string());
}

}  // namespace strikebench
