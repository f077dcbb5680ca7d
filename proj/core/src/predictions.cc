#include "strikebench/predictions.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>
#include "strikebench/error.h"

namespace strikebench {
namespace {

constexpr double kUnlisted = -std::numeric_limits<double>::infinity();

nlohmann::json score_map(const Prediction& p) {
  nlohmann::json scores = nlohmann::json::object();
  if (p.kind == Prediction::Kind::kDense) {
    for (std::size_t e = 0; e < p.dense.size(); ++e) {
      if (std::isfinite(p.dense[e])) scores[std::to_string(e)] = p.dense[e];
    }
  } else {
    for (const auto& [e, s] : p.entries) {
      if (std::isfinite(s)) scores[std::to_string(e)] = s;
    }
  }
  return scores;
}

}  // namespace

Prediction Prediction::make_dense(std::vector<double> scores) {
  Prediction p;
  p.kind = Kind::kDense;
  p.dense = std::move(scores);
  return p;
}

Prediction Prediction::make_sparse(std::vector<std::pair<EntityId, double>> entries,
                                   Kind kind) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].first == entries[i - 1].first) {
      throw ValidationError("prediction lists entity " + std::to_string(entries[i].first) +
                            " twice");
    }
  }
  Prediction p;
  p.kind = kind == Kind::kDense ? Kind::kScores : kind;
  p.entries = std::move(entries);
  return p;
}

double Prediction::score(EntityId e) const {
  if (kind == Kind::kDense) return e < dense.size() ? dense[e] : kUnlisted;
  const auto it = std::lower_bound(entries.begin(), entries.end(), e,
                                   [](const auto& entry, EntityId id) { return entry.first < id; });
  return it != entries.end() && it->first == e ? it->second : kUnlisted;
}

std::vector<double> Prediction::densify(std::size_t entity_count) const {
  if (kind == Kind::kDense) {
    std::vector<double> out(entity_count, kUnlisted);
    std::copy_n(dense.begin(), std::min(entity_count, dense.size()), out.begin());
    return out;
  }
  std::vector<double> out(entity_count, kUnlisted);
  for (const auto& [e, s] : entries) {
    if (e < entity_count) out[e] = s;
  }
  return out;
}

void PredictionSet::add(QueryKey key, Prediction prediction) {
  if (!by_query_.emplace(key, std::move(prediction)).second) {
    throw ValidationError("duplicate prediction for query " + std::to_string(key.query_index) +
                          " " + std::string(to_string(key.direction)));
  }
}

const Prediction* PredictionSet::find(const QueryKey& key) const {
  const auto it = by_query_.find(key);
  return it == by_query_.end() ? nullptr : &it->second;
}

bool PredictionSet::has_topk() const {
  return std::any_of(by_query_.begin(), by_query_.end(), [](const auto& kv) {
    return kv.second.kind == Prediction::Kind::kTopK;
  });
}

void write_predictions(const PredictionSet& predictions, std::ostream& out) {
  for (const auto& [key, p] : predictions.entries()) {
    nlohmann::ordered_json line;
    line["query_index"] = key.query_index;
    line["direction"] = std::string(to_string(key.direction));
    if (p.kind == Prediction::Kind::kTopK) {
      auto list = nlohmann::json::array();
      for (const auto& [e, s] : p.entries) list.push_back({e, s});
      line["topk"] = std::move(list);
    } else {
      line["scores"] = score_map(p);
    }
    out << line.dump() << '\n';
  }
}

void save_predictions(const PredictionSet& predictions, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write predictions " + path.string());
  write_predictions(predictions, out);
  if (!out) throw IoError("write failed: " + path.string());
}

PredictionSet read_predictions(std::istream& in, const std::string& source) {
  PredictionSet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      QueryKey key;
      key.query_index = j.at("query_index").get<std::size_t>();
      key.direction = parse_direction(j.at("direction").get<std::string>());
      std::vector<std::pair<EntityId, double>> entries;
      Prediction::Kind kind;
      if (j.contains("scores")) {
        kind = Prediction::Kind::kScores;
        for (const auto& [id, score] : j["scores"].items()) {
          std::size_t pos = 0;
          const unsigned long value = std::stoul(id, &pos);
          if (pos != id.size() || value > UINT32_MAX) {
            throw ParseError(source, line_no, "bad entity id '" + id + "'");
          }
          entries.emplace_back(static_cast<EntityId>(value), score.get<double>());
        }
      } else if (j.contains("topk")) {
        kind = Prediction::Kind::kTopK;
        for (const auto& pair : j["topk"]) {
          entries.emplace_back(pair.at(0).get<EntityId>(), pair.at(1).get<double>());
        }
      } else {
        throw ParseError(source, line_no, "expected a \"scores\" or \"topk\" field");
      }
      set.add(key, Prediction::make_sparse(std::move(entries), kind));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source, line_no, e.what());
    } catch (const std::invalid_argument&) {
      throw ParseError(source, line_no, "bad entity id");
    } catch (const ValidationError& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return set;
}

PredictionSet load_dense_predictions(const std::filesystem::path& bin_path) {
  const auto sidecar_path = std::filesystem::path(bin_path.string() + ".json");
  std::ifstream sidecar(sidecar_path);
  if (!sidecar) throw IoError("missing shape sidecar " + sidecar_path.string());
  nlohmann::json shape;
  try {
    shape = nlohmann::json::parse(sidecar);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(sidecar_path.string(), 1, e.what());
  }
  const auto rows = shape.at("rows").get<std::size_t>();
  const auto cols = shape.at("cols").get<std::size_t>();
  std::vector<QueryKey> keys;
  if (shape.contains("row_keys")) {
    for (const auto& k : shape["row_keys"]) {
      keys.push_back({k.at(0).get<std::size_t>(), parse_direction(k.at(1).get<std::string>())});
    }
    if (keys.size() != rows) {
      throw ValidationError("row_keys length does not match rows in " + sidecar_path.string());
    }
  } else {
    for (std::size_t r = 0; r < rows; ++r) {
      keys.push_back({r / 2, r % 2 == 0 ? Direction::kTail : Direction::kHead});
    }
  }

  std::ifstream in(bin_path, std::ios::binary);
  if (!in) throw IoError("cannot open " + bin_path.string());
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != rows * cols * sizeof(float)) {
    throw ValidationError(bin_path.string() + " holds " + std::to_string(bytes) +
                          " bytes, expected rows*cols*4 = " +
                          std::to_string(rows * cols * sizeof(float)));
  }
  in.seekg(0);
  PredictionSet set(shape.value("model_name", bin_path.stem().string()));
  std::vector<unsigned char> buffer(cols * sizeof(float));
  for (std::size_t r = 0; r < rows; ++r) {
    in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(buffer.size()));
    std::vector<double> scores(cols);
    for (std::size_t c = 0; c < cols; ++c) {
      std::uint32_t bits = 0;
      for (int b = 3; b >= 0; --b) bits = (bits << 8) | buffer[c * 4 + static_cast<std::size_t>(b)];
      scores[c] = static_cast<double>(std::bit_cast<float>(bits));
    }
    set.add(keys[r], Prediction::make_dense(std::move(scores)));
  }
  return set;
}

void save_dense_predictions(const PredictionSet& predictions, std::size_t entity_count,
                            const std::filesystem::path& bin_path) {
  std::ofstream out(bin_path, std::ios::binary);
  if (!out) throw IoError("cannot write " + bin_path.string());
  nlohmann::ordered_json shape;
  shape["rows"] = predictions.size();
  shape["cols"] = entity_count;
  shape["model_name"] = predictions.model_name();
  auto keys = nlohmann::json::array();
  for (const auto& [key, p] : predictions.entries()) {
    keys.push_back({key.query_index, std::string(to_string(key.direction))});
    for (const double s : p.densify(entity_count)) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(s));
      const char le[4] = {static_cast<char>(bits & 0xff), static_cast<char>((bits >> 8) & 0xff),
                          static_cast<char>((bits >> 16) & 0xff),
                          static_cast<char>((bits >> 24) & 0xff)};
      out.write(le, 4);
    }
  }
  shape["row_keys"] = std::move(keys);
  if (!out) throw IoError("write failed: " + bin_path.string());
  std::ofstream sidecar(bin_path.string() + ".json", std::ios::binary);
  sidecar << shape.dump() << '\n';
  if (!sidecar) throw IoError("cannot write shape sidecar for " + bin_path.string());
}

PredictionSet load_predictions(const std::filesystem::path& path) {
  if (path.extension() == ".bin") return load_dense_predictions(path);
  std::ifstream in(path);
  if (!in) throw IoError("cannot open predictions " + path.string());
  auto set = read_predictions(in, path.string());
  set.set_model_name(path.stem().string());
  return set;
}

}  // namespace strikebench
