#include "strikebench/dataset.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <set>
#include <string>
#include <string_view>

#include "strikebench/error.h"

namespace strikebench {
namespace {

namespace fs = std::filesystem;

struct RawFact {
  std::uint64_t subject;
  std::uint64_t relation;
  std::uint64_t object;
  std::int64_t timestamp;
};

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos
                                         ? std::string_view::npos
                                         : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

template <typename Int>
bool parse_int(std::string_view text, Int& out) {
  text = trim(text);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::vector<RawFact> read_quadruples(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open quadruple file " + path.string());
  std::vector<RawFact> facts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto cols = split_tabs(view);
    if (cols.size() < 4) {
      throw ParseError(path.string(), line_no,
                       "expected 4 tab-separated columns, found " +
                           std::to_string(cols.size()));
    }
    RawFact f{};
    if (!parse_int(cols[0], f.subject) || !parse_int(cols[1], f.relation) ||
        !parse_int(cols[2], f.object) || !parse_int(cols[3], f.timestamp)) {
      throw ParseError(path.string(), line_no, "non-integer id or timestamp");
    }
    if (f.timestamp < 0) {
      throw ParseError(path.string(), line_no, "negative timestamp");
    }
    facts.push_back(f);
  }
  return facts;
}

Vocabulary read_vocabulary(const fs::path& path) {
  Vocabulary vocab;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocabulary file " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    while (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty() || view.front() == '#') continue;
    const std::size_t tab = view.rfind('\t');
    std::uint32_t id = 0;
    if (tab == std::string_view::npos || !parse_int(view.substr(tab + 1), id)) {
      throw ParseError(path.string(), line_no, "expected 'label<TAB>id'");
    }
    vocab.add(std::string(view.substr(0, tab)), id);
  }
  return vocab;
}

std::size_t dedup_in_order(std::vector<Quadruple>& facts) {
  std::set<Quadruple> seen;
  std::vector<Quadruple> kept;
  kept.reserve(facts.size());
  for (const auto& f : facts) {
    if (seen.insert(f).second) kept.push_back(f);
  }
  const std::size_t dropped = facts.size() - kept.size();
  facts = std::move(kept);
  return dropped;
}

}  // namespace

std::string_view to_string(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kValid:
      return "valid";
    case Split::kTest:
      return "test";
  }
  return "?";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "valid") return Split::kValid;
  if (name == "test") return Split::kTest;
  throw ConfigError("unknown split '" + std::string(name) +
                    "' (expected train, valid or test)");
}

void Vocabulary::add(std::string label, std::uint32_t id) {
  if (ids_.contains(label)) {
    throw ValidationError("duplicate vocabulary label '" + label + "'");
  }
  if (id >= labels_.size()) labels_.resize(std::size_t{id} + 1);
  if (labels_[id]) {
    throw ValidationError("duplicate vocabulary id " + std::to_string(id));
  }
  labels_[id] = label;
  ids_.emplace(std::move(label), id);
}

std::optional<std::uint32_t> Vocabulary::id_of(const std::string& label) const {
  const auto it = ids_.find(label);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::label_of(std::uint32_t id) const {
  if (id < labels_.size() && labels_[id]) return *labels_[id];
  return std::to_string(id);
}

const std::vector<Quadruple>& Dataset::split(Split s) const {
  switch (s) {
    case Split::kTrain:
      return train;
    case Split::kValid:
      return valid;
    case Split::kTest:
      return test;
  }
  return test;
}

std::vector<Quadruple>& Dataset::split(Split s) {
  return const_cast<std::vector<Quadruple>&>(std::as_const(*this).split(s));
}

Dataset load_dataset(const fs::path& dir, const FormatSpec& format) {
  if (!fs::is_directory(dir)) {
    throw IoError("dataset directory not found: " + dir.string());
  }
  if (format.time_divisor < 0) {
    throw ConfigError("time divisor must be positive (or 0 for auto)");
  }
  const fs::path files[3] = {dir / format.train_file, dir / format.valid_file,
                             dir / format.test_file};
  std::vector<RawFact> raw[3];
  for (int i = 0; i < 3; ++i) {
    raw[i] = read_quadruples(files[i]);
    if (raw[i].empty()) {
      throw ValidationError("empty split: " + files[i].string());
    }
  }

  Dataset ds;
  const fs::path entity_vocab = dir / format.entity_vocab_file;
  const fs::path relation_vocab = dir / format.relation_vocab_file;
  if (fs::exists(entity_vocab)) ds.entity_vocab = read_vocabulary(entity_vocab);
  if (fs::exists(relation_vocab)) ds.relation_vocab = read_vocabulary(relation_vocab);

  std::int64_t divisor = format.time_divisor;
  if (divisor == 0) {
    std::int64_t g = 0;
    for (const auto& split : raw) {
      for (const auto& f : split) g = std::gcd(g, f.timestamp);
    }
    divisor = g == 0 ? 1 : g;
  }
  ds.time_divisor = divisor;
  ds.granularity = "raw/" + std::to_string(divisor);

  std::uint64_t max_entity = 0;
  std::uint64_t max_relation = 0;
  for (int i = 0; i < 3; ++i) {
    auto& out = ds.split(static_cast<Split>(i));
    out.reserve(raw[i].size());
    for (const auto& f : raw[i]) {
      if (f.timestamp % divisor != 0) {
        throw ValidationError("timestamp " + std::to_string(f.timestamp) +
                              " in " + files[i].string() +
                              " is not a multiple of the time divisor " +
                              std::to_string(divisor));
      }
      if (f.subject > UINT32_MAX || f.object > UINT32_MAX || f.relation > UINT32_MAX / 2) {
        throw ValidationError("id out of supported range in " + files[i].string());
      }
      max_entity = std::max({max_entity, f.subject, f.object});
      max_relation = std::max(max_relation, f.relation);
      out.push_back({static_cast<EntityId>(f.subject),
                     static_cast<RelationId>(f.relation),
                     static_cast<EntityId>(f.object), f.timestamp / divisor});
    }
    ds.duplicates_dropped[i] = dedup_in_order(out);
  }

  ds.entity_count = ds.entity_vocab.empty() ? max_entity + 1 : ds.entity_vocab.size();
  ds.raw_relation_count =
      ds.relation_vocab.empty() ? max_relation + 1 : ds.relation_vocab.size();
  validate_dataset(ds);
  return ds;
}

void validate_dataset(const Dataset& ds) {
  const std::size_t relations = ds.relation_count();
  for (int i = 0; i < 3; ++i) {
    const auto split = static_cast<Split>(i);
    const auto& facts = ds.split(split);
    if (facts.empty()) {
      throw ValidationError("empty split: " + std::string(to_string(split)));
    }
    for (const auto& f : facts) {
      if (f.subject >= ds.entity_count || f.object >= ds.entity_count) {
        throw ValidationError("entity id out of range in " +
                              std::string(to_string(split)) + " split");
      }
      if (f.relation >= relations) {
        throw ValidationError("relation id out of range in " +
                              std::string(to_string(split)) + " split");
      }
    }
  }
  auto bounds = [](const std::vector<Quadruple>& facts) {
    auto [lo, hi] = std::minmax_element(
        facts.begin(), facts.end(),
        [](const Quadruple& a, const Quadruple& b) { return a.timestamp < b.timestamp; });
    return std::pair{lo->timestamp, hi->timestamp};
  };
  const auto train = bounds(ds.train);
  const auto valid = bounds(ds.valid);
  const auto test = bounds(ds.test);
  if (train.second > valid.first) {
    throw ValidationError("chronology violated: train ends at " +
                          std::to_string(train.second) + " after valid starts at " +
                          std::to_string(valid.first));
  }
  if (valid.second > test.first) {
    throw ValidationError("chronology violated: valid ends at " +
                          std::to_string(valid.second) + " after test starts at " +
                          std::to_string(test.first));
  }
}

void save_dataset(const Dataset& ds, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const char* names[3] = {"train.txt", "valid.txt", "test.txt"};
  for (int i = 0; i < 3; ++i) {
    const auto split = static_cast<Split>(i);
    std::ofstream out(dir / names[i]);
    if (!out) throw IoError("cannot write " + (dir / names[i]).string());
    const auto& facts = ds.split(split);
    const std::size_t n = ds.raw_size(split);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& f = facts[k];
      out << f.subject << '\t' << f.relation << '\t' << f.object << '\t'
          << f.timestamp << '\n';
    }
    if (!out) throw IoError("write failed: " + (dir / names[i]).string());
  }
  auto write_vocab = [&](const Vocabulary& vocab, std::size_t count,
                         const std::string& name) {
    if (vocab.empty()) return;
    std::ofstream out(dir / name);
    if (!out) throw IoError("cannot write " + (dir / name).string());
    for (std::size_t id = 0; id < count; ++id) {
      if (auto label = vocab.label_of(static_cast<std::uint32_t>(id)); !label.empty()) {
        out << label << '\t' << id << '\n';
      }
    }
  };
  write_vocab(ds.entity_vocab, ds.entity_vocab.size(), "entity2id.txt");
  write_vocab(ds.relation_vocab, ds.relation_vocab.size(), "relation2id.txt");
}

RelationId inverse_relation(RelationId r, std::size_t raw_relation_count) {
  const auto raw = static_cast<RelationId>(raw_relation_count);
  return r < raw ? r + raw : r - raw;
}

Quadruple inverse_fact(const Quadruple& q, std::size_t raw_relation_count) {
  return {q.object, inverse_relation(q.relation, raw_relation_count), q.subject,
          q.timestamp};
}

Dataset augment_inverse(Dataset ds) {
  if (ds.augmented) throw ValidationError("dataset is already inverse-augmented");
  for (int i = 0; i < 3; ++i) {
    auto& facts = ds.split(static_cast<Split>(i));
    const std::size_t n = facts.size();
    facts.reserve(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
      facts.push_back(inverse_fact(facts[k], ds.raw_relation_count));
    }
  }
  ds.augmented = true;
  return ds;
}

Quadruple query_fact(const Dataset& ds, Split split, std::size_t query_index,
                     Direction direction) {
  const auto& facts = ds.split(split);
  const std::size_t n = ds.raw_size(split);
  if (query_index >= n) {
    throw ValidationError("query index " + std::to_string(query_index) +
                          " out of range for split " + std::string(to_string(split)));
  }
  if (direction == Direction::kTail) return facts[query_index];
  return ds.augmented ? facts[query_index + n]
                      : inverse_fact(facts[query_index], ds.raw_relation_count);
}

}  // namespace strikebench
