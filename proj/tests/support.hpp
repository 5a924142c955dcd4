#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hgacluster/clustering.hpp"
#include "oracles.hpp"

namespace testing {

inline std::filesystem::path data_dir() { return HGACLUSTER_DATA_DIR; }
inline std::filesystem::path uci_csv() { return data_dir() / "heart_cleveland.csv"; }

inline std::vector<hgacluster::Point> to_points(const std::vector<oracle::Pt>& pts) {
  std::vector<hgacluster::Point> out;
  for (const auto& p : pts) out.push_back({p.x, p.y});
  return out;
}

inline std::uint64_t mask_of(const hgacluster::Chromosome& c) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] != 0) mask |= std::uint64_t{1} << i;
  }
  return mask;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Scratch file under the build tree, removed on destruction.
class TempFile {
 public:
  explicit TempFile(const std::string& name, const std::string& content = {})
      : path_(std::filesystem::temp_directory_path() / ("hgacluster_test_" + name)) {
    if (!content.empty()) {
      std::ofstream out(path_, std::ios::binary);
      out << content;
    }
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
