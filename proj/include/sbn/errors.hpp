#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sbn {

/* Every failure carries a short stable class name; the CLI maps these to exit
   codes and prints them in machine-readable form. */
class Error : public std::runtime_error {
public:
  Error(std::string cls, const std::string& msg)
      : std::runtime_error(msg), cls_(std::move(cls)) {}

  const std::string& error_class() const noexcept { return cls_; }

private:
  std::string cls_;
};

class ShapeError : public Error {
public:
  explicit ShapeError(const std::string& msg) : Error("shape", msg) {}
};

class CapacityError : public Error {
public:
  explicit CapacityError(const std::string& msg) : Error("capacity", msg) {}
};

class BudgetError : public Error {
public:
  explicit BudgetError(const std::string& msg) : Error("budget", msg) {}
};

class GenerationError : public Error {
public:
  GenerationError(const std::string& msg, int target_arch_id)
      : Error("generation", msg), target_arch_id_(target_arch_id) {}

  int target_arch_id() const noexcept { return target_arch_id_; }

private:
  int target_arch_id_;
};

class CompletenessError : public Error {
public:
  CompletenessError(const std::string& msg, std::vector<int> missing)
      : Error("completeness", msg), missing_(std::move(missing)) {}

  const std::vector<int>& missing_ids() const noexcept { return missing_; }

private:
  std::vector<int> missing_;
};

class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error("io", msg) {}
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error("config", msg) {}
};

} // namespace sbn
