#include "manifest.h"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <vector>

#include "strikebench/error.h"
#include "strikebench/version.h"

namespace strikebench::cli {
namespace fs = std::filesystem;

namespace {

using Ctx = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

void feed(EVP_MD_CTX* ctx, const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string() + " for hashing");
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
}

}  // namespace

std::string sha256_file(const fs::path& path) {
  Ctx ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 unavailable");
  }
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const auto name = f.filename().string();
      EVP_DigestUpdate(ctx.get(), name.data(), name.size() + 1);
      feed(ctx.get(), f);
    }
  } else {
    feed(ctx.get(), path);
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    char byte[3];
    std::snprintf(byte, sizeof byte, "%02x", md[i]);
    hex += byte;
  }
  return hex;
}

void write_manifest(const std::string& command, const std::map<std::string, std::string>& flags,
                    const Outcome& outcome, double seconds) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = STRIKEBENCH_VERSION;
  j["flags"] = flags;
  auto inputs = nlohmann::ordered_json::object();
  for (const auto& p : outcome.inputs) inputs[p.string()] = sha256_file(p);
  j["inputs"] = std::move(inputs);
  auto outputs = nlohmann::ordered_json::array();
  for (const auto& p : outcome.outputs) outputs.push_back(p.string());
  j["outputs"] = std::move(outputs);
  j["results"] = outcome.results;
  j["duration_seconds"] = seconds;

  std::ofstream out(outcome.manifest_path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest " + outcome.manifest_path.string());
  out << j.dump(2) << '\n';
}

}  // namespace strikebench::cli
