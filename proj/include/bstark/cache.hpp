#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace bstark {

inline constexpr const char* kEngineVersion = "bstark-engine-1";

/// Content-addressed file cache: one file per key, named by a hash of the key
/// preimage, whose first line is the preimage itself. Writes go through a
/// temporary file and a rename, so concurrent writers of identical content are safe.
class Cache {
 public:
  Cache() = default;
  explicit Cache(std::filesystem::path dir);

  bool enabled() const { return !dir_.empty(); }
  const std::filesystem::path& directory() const { return dir_; }

  /// Payload stored under the preimage, if present and the stored preimage matches.
  std::optional<std::string> get(const std::string& preimage) const;
  void put(const std::string& preimage, const std::string& payload) const;
  void erase(const std::string& preimage) const;

  /// 16 hex digits of FNV-1a over the preimage.
  static std::string key(const std::string& preimage);
  std::filesystem::path path_for(const std::string& preimage) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace bstark
