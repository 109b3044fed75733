#include "cxdim/io/manifest.hpp"

#include "cxdim/errors.hpp"
#include "cxdim/io/format.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <memory>

namespace cxdim::io {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw Error(Errc::io_error, "SHA-256 unavailable");
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::filesystem::path write_manifest(const std::filesystem::path& dir, const std::vector<std::string>& files,
                                     const std::string& command) {
  auto sorted = files;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  nlohmann::json doc;
  doc["command"] = command;
  doc["files"] = nlohmann::json::array();
  for (const auto& f : sorted) {
    const auto p = dir / f;
    doc["files"].push_back({{"path", f}, {"sha256", sha256_file(p)}, {"bytes", std::filesystem::file_size(p)}});
  }
  const auto out = dir / "manifest.json";
  write_text(out, doc.dump(2) + "\n");
  return out;
}

}  // namespace cxdim::io
