#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace frlogic::quantum {

class QuantumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two registers that were to be combined share a system label.
class LabelClash : public QuantumError {
 public:
  using QuantumError::QuantumError;
};

/// Operands are defined over different registers, or a label is missing.
class RegisterMismatch : public QuantumError {
 public:
  using QuantumError::QuantumError;
};

/// Projective update on an outcome with (numerically) zero probability.
class UndefinedUpdate : public QuantumError {
 public:
  using QuantumError::QuantumError;
};

class NotUnitary : public QuantumError {
 public:
  using QuantumError::QuantumError;
};

class NotHermitian : public QuantumError {
 public:
  using QuantumError::QuantumError;
};

class NotNormalized : public QuantumError {
 public:
  using QuantumError::QuantumError;
};

/// Identifier of a two-level system (qbit or agent memory), e.g. "r", "a", "l", "g".
class SystemLabel {
 public:
  SystemLabel() = default;
  SystemLabel(std::string name) : name_(std::move(name)) {}  // NOLINT(google-explicit-constructor)
  SystemLabel(const char* name) : name_(name) {}             // NOLINT(google-explicit-constructor)

  const std::string& name() const { return name_; }

  friend bool operator==(const SystemLabel&, const SystemLabel&) = default;
  friend auto operator<=>(const SystemLabel&, const SystemLabel&) = default;

 private:
  std::string name_;
};

inline std::ostream& operator<<(std::ostream& os, const SystemLabel& label) { return os << label.name(); }

/// Ordered list of systems. Slot 0 is the most significant tensor factor.
using Register = std::vector<SystemLabel>;

inline std::string to_string(const Register& reg) {
  std::string out;
  for (const auto& label : reg) out += label.name();
  return out;
}

inline std::optional<std::size_t> slot_of(const Register& reg, const SystemLabel& label) {
  auto it = std::find(reg.begin(), reg.end(), label);
  if (it == reg.end()) return std::nullopt;
  return static_cast<std::size_t>(it - reg.begin());
}

inline void require_distinct(const Register& reg) {
  for (std::size_t i = 0; i < reg.size(); ++i)
    for (std::size_t j = i + 1; j < reg.size(); ++j)
      if (reg[i] == reg[j]) throw LabelClash("duplicate system label '" + reg[i].name() + "' in register " + to_string(reg));
}

inline Register concat(const Register& a, const Register& b) {
  for (const auto& label : b)
    if (slot_of(a, label)) throw LabelClash("system '" + label.name() + "' appears in both registers " + to_string(a) + " and " + to_string(b));
  Register out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline std::size_t dimension_of(const Register& reg) { return std::size_t{1} << reg.size(); }

}  // namespace frlogic::quantum
