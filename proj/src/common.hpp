#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace graphpd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Coarse error classes. The CLI maps these onto its exit codes.
enum class ErrorCategory { usage, data, training, io, internal };

// Every failure carries a short machine-parsable code ("size-mismatch",
// "k-too-large", ...) next to the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string code, const std::string& message)
      : std::runtime_error(message), category_(category), code_(std::move(code)) {}

  ErrorCategory category() const noexcept { return category_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorCategory category_;
  std::string code_;
};

[[noreturn]] inline void throw_usage(std::string code, const std::string& msg) {
  throw Error(ErrorCategory::usage, std::move(code), msg);
}
[[noreturn]] inline void throw_data(std::string code, const std::string& msg) {
  throw Error(ErrorCategory::data, std::move(code), msg);
}
[[noreturn]] inline void throw_training(std::string code, const std::string& msg) {
  throw Error(ErrorCategory::training, std::move(code), msg);
}
[[noreturn]] inline void throw_io(std::string code, const std::string& msg) {
  throw Error(ErrorCategory::io, std::move(code), msg);
}

// splitmix64 finalizer; used to derive independent stream seeds from one root seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <typename... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t root, Rest... rest) noexcept {
  std::uint64_t s = mix_seed(root);
  ((s = mix_seed(s ^ static_cast<std::uint64_t>(rest))), ...);
  return s;
}

}  // namespace graphpd
