#pragma once

#include <atomic>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "vtinv/contours.hpp"
#include "vtinv/rng.hpp"

namespace vtinv::testing {

inline FrameContours random_frame(Rng& rng, double lo = 0.0, double hi = 136.0) {
  FrameContours f;
  for (auto& contour : f.contours) {
    for (auto& p : contour) p = {rng.uniform(lo, hi), rng.uniform(lo, hi)};
  }
  return f;
}

inline ContourSequence random_sequence(Rng& rng, std::size_t n_frames) {
  ContourSequence seq;
  for (std::size_t t = 0; t < n_frames; ++t) seq.frames.push_back(random_frame(rng));
  return seq;
}

inline FrameContours constant_frame(double x, double y) {
  FrameContours f;
  for (auto& contour : f.contours) contour.fill({x, y});
  return f;
}

/// Unique scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("vtinv_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace vtinv::testing
