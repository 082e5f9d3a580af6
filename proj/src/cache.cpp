#include "bstark/cache.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace bstark {

Cache::Cache(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::string Cache::key(const std::string& preimage) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : preimage) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::filesystem::path Cache::path_for(const std::string& preimage) const { return dir_ / (key(preimage) + ".cache"); }

std::optional<std::string> Cache::get(const std::string& preimage) const {
  if (!enabled()) return std::nullopt;
  std::ifstream in(path_for(preimage), std::ios::binary);
  if (!in) return std::nullopt;
  std::string first;
  if (!std::getline(in, first) || first != preimage) return std::nullopt;
  std::ostringstream rest;
  rest << in.rdbuf();
  return rest.str();
}

void Cache::put(const std::string& preimage, const std::string& payload) const {
  if (!enabled()) return;
  if (preimage.find('\n') != std::string::npos) throw std::invalid_argument("Cache: preimage must be one line");
  std::filesystem::path target = path_for(preimage);
  std::random_device rd;
  std::filesystem::path tmp = target;
  tmp += ".tmp" + std::to_string(::getpid()) + "_" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("Cache: cannot write " + tmp.string());
    out << preimage << '\n';
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw std::runtime_error("Cache: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

void Cache::erase(const std::string& preimage) const {
  if (!enabled()) return;
  std::error_code ec;
  std::filesystem::remove(path_for(preimage), ec);
}

}  // namespace bstark
