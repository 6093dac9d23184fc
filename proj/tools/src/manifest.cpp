#include "manifest.hpp"

#include "sbl/io.hpp"

#include <openssl/evp.h>

#include <filesystem>
#include <memory>
#include <stdexcept>

namespace sbl::cli {

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw std::runtime_error("SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[digest[k] >> 4];
    out += hex[digest[k] & 0xF];
  }
  return out;
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_text_file(path)); }

Manifest::Manifest(std::string command, std::vector<std::string> argv)
    : command_(std::move(command)), argv_(std::move(argv)), start_(std::chrono::steady_clock::now()) {}

void Manifest::add_input(const std::string& role, const std::string& path) {
  inputs_.push_back({{"role", role}, {"path", path}, {"sha256", sha256_file(path)}});
}

void Manifest::add_warnings(const std::vector<std::string>& ws) {
  warnings_.insert(warnings_.end(), ws.begin(), ws.end());
}

void Manifest::write(const std::string& out_dir, const std::string& status) {
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  nlohmann::json j{{"command", command_}, {"argv", argv_},           {"status", status},
                   {"seed", seed_},       {"config", config_},       {"inputs", inputs_},
                   {"outputs", outputs_}, {"warnings", warnings_},   {"timings", {{"wall_seconds", seconds}}}};
  for (auto it = extra_.begin(); it != extra_.end(); ++it) j[it.key()] = it.value();
  write_text_file((std::filesystem::path(out_dir) / "manifest.json").string(), j.dump(2) + "\n");
}

}  // namespace sbl::cli
