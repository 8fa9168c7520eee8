#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qrec/types.hpp"

namespace qrec {

struct Register {
  std::string name;
  int width = 0;
  int offset = 0;  // position of the register's least significant qubit
};

// Ordered list of named registers. The first register occupies the least
// significant qubits of a basis index.
class RegisterLayout {
 public:
  RegisterLayout() = default;
  RegisterLayout(std::initializer_list<std::pair<std::string, int>> regs);

  RegisterLayout& add(std::string name, int width);

  const Register& reg(std::string_view name) const;
  bool contains(std::string_view name) const;
  const std::vector<Register>& registers() const { return regs_; }

  int width() const { return width_; }
  std::uint64_t dim() const { return std::uint64_t{1} << width_; }

  std::uint64_t value(std::uint64_t basis, std::string_view name) const;
  std::uint64_t with_value(std::uint64_t basis, std::string_view name, std::uint64_t v) const;
  std::uint64_t compose(const std::map<std::string, std::uint64_t>& values) const;

  /// Global qubit positions of a register, least significant first.
  std::vector<int> qubits(std::string_view name) const;

  bool operator==(const RegisterLayout& other) const;

 private:
  std::vector<Register> regs_;
  int width_ = 0;
};

}  // namespace qrec
