#pragma once

#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include <doctest.h>

#include "afp/error.hpp"

namespace testutil {

/// Runs fn, which must throw afp::Error, and returns its code.
inline afp::Errc thrown_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const afp::Error& e) {
    return e.code();
  } catch (...) {
    FAIL("expected afp::Error, got another exception");
  }
  FAIL("expected afp::Error, got none");
  return afp::Errc::out_of_range;  // unreachable
}

/// Unique scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
