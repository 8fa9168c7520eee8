#include "qrec/register_layout.hpp"

namespace qrec {

RegisterLayout::RegisterLayout(std::initializer_list<std::pair<std::string, int>> regs) {
  for (const auto& [name, width] : regs) add(name, width);
}

RegisterLayout& RegisterLayout::add(std::string name, int width) {
  if (width < 1) throw DimensionError("register '" + name + "' must have width >= 1");
  if (contains(name)) throw std::invalid_argument("duplicate register name '" + name + "'");
  if (width_ + width > kMaxWidth) {
    throw DimensionError("layout width " + std::to_string(width_ + width) + " exceeds the cap of " +
                         std::to_string(kMaxWidth) + " qubits");
  }
  regs_.push_back({std::move(name), width, width_});
  width_ += width;
  return *this;
}

const Register& RegisterLayout::reg(std::string_view name) const {
  for (const auto& r : regs_)
    if (r.name == name) return r;
  throw std::invalid_argument("unknown register '" + std::string(name) + "'");
}

bool RegisterLayout::contains(std::string_view name) const {
  for (const auto& r : regs_)
    if (r.name == name) return true;
  return false;
}

std::uint64_t RegisterLayout::value(std::uint64_t basis, std::string_view name) const {
  const Register& r = reg(name);
  return (basis >> r.offset) & ((std::uint64_t{1} << r.width) - 1);
}

std::uint64_t RegisterLayout::with_value(std::uint64_t basis, std::string_view name,
                                         std::uint64_t v) const {
  const Register& r = reg(name);
  const std::uint64_t mask = ((std::uint64_t{1} << r.width) - 1) << r.offset;
  if (v >> r.width) throw DimensionError("value does not fit register '" + r.name + "'");
  return (basis & ~mask) | (v << r.offset);
}

std::uint64_t RegisterLayout::compose(const std::map<std::string, std::uint64_t>& values) const {
  std::uint64_t basis = 0;
  for (const auto& [name, v] : values) basis = with_value(basis, name, v);
  return basis;
}

std::vector<int> RegisterLayout::qubits(std::string_view name) const {
  const Register& r = reg(name);
  std::vector<int> out(r.width);
  for (int i = 0; i < r.width; ++i) out[i] = r.offset + i;
  return out;
}

bool RegisterLayout::operator==(const RegisterLayout& other) const {
  if (regs_.size() != other.regs_.size()) return false;
  for (std::size_t i = 0; i < regs_.size(); ++i) {
    if (regs_[i].name != other.regs_[i].name || regs_[i].width != other.regs_[i].width) return false;
  }
  return true;
}

}  // namespace qrec
