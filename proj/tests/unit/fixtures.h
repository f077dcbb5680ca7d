#ifndef STRIKEBENCH_TESTS_FIXTURES_H_
#define STRIKEBENCH_TESTS_FIXTURES_H_

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "strikebench/dataset.h"
#include "strikebench/temporal_index.h"

namespace testing_util {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("strikebench-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Augmented index over raw facts.
inline strikebench::TemporalIndex index_of(const std::vector<strikebench::Quadruple>& raw,
                                           std::size_t entities, std::size_t relations) {
  std::vector<strikebench::Quadruple> all = raw;
  for (const auto& q : raw) all.push_back(strikebench::inverse_fact(q, relations));
  return strikebench::TemporalIndex::from_facts(std::move(all), entities, relations);
}

inline std::vector<strikebench::Quadruple> augmented(const std::vector<strikebench::Quadruple>& raw,
                                                     std::size_t relations) {
  std::vector<strikebench::Quadruple> all = raw;
  for (const auto& q : raw) all.push_back(strikebench::inverse_fact(q, relations));
  return all;
}

}  // namespace testing_util

#endif  // STRIKEBENCH_TESTS_FIXTURES_H_
