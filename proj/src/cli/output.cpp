#include "dshock/cli.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace dshock::cli {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != header_.size()) throw Error(Errc::internal, "CSV row width differs from header");
  rows_.push_back(values);
}

std::string CsvWriter::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + header_[i];
  out += '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_number(r[i]);
    out += '\n';
  }
  return out;
}

void CsvWriter::write(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::invalid_input, "cannot write " + path.string());
  f << str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(Errc::internal, "SHA-256 digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::invalid_input, "cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return sha256_hex(ss.str());
}

void write_manifest(const std::filesystem::path& dir, const std::vector<std::string>& files,
                    const nlohmann::json& meta) {
  nlohmann::json m = meta;
  m["files"] = nlohmann::json::array();
  for (const auto& name : files) {
    const auto p = dir / name;
    m["files"].push_back({{"path", name},
                          {"bytes", static_cast<std::uint64_t>(std::filesystem::file_size(p))},
                          {"sha256", sha256_file(p)}});
  }
  std::ofstream f(dir / "manifest.json", std::ios::binary);
  if (!f) throw Error(Errc::invalid_input, "cannot write manifest");
  f << m.dump(2) << '\n';
}

}  // namespace dshock::cli
