#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace qrec {

// Named tallies of oracle and black-box applications.
class QueryCounter {
 public:
  void add(const std::string& name, std::uint64_t n = 1) { counts_[name] += n; }
  std::uint64_t get(const std::string& name) const {
    auto it = counts_.find(name);
    return it == counts_.end() ? 0 : it->second;
  }
  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& [_, n] : counts_) t += n;
    return t;
  }
  void merge(const QueryCounter& other) {
    for (const auto& [k, n] : other.counts_) counts_[k] += n;
  }
  void clear() { counts_.clear(); }
  const std::map<std::string, std::uint64_t>& counts() const { return counts_; }

 private:
  std::map<std::string, std::uint64_t> counts_;
};

}  // namespace qrec
