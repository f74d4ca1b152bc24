#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "regen/errors.hpp"

namespace regen {

using Symbol = int32_t;

// Ordered finite symbol set. The vector order is the fixed total order used
// for partition layout, so it must be stable across runs.
class Alphabet {
 public:
  explicit Alphabet(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw InvalidSpecification("alphabet is empty");
    for (size_t i = 0; i < symbols_.size(); ++i)
      for (size_t j = i + 1; j < symbols_.size(); ++j)
        if (symbols_[i] == symbols_[j])
          throw InvalidSpecification("alphabet has duplicate symbols");
  }

  size_t size() const { return symbols_.size(); }
  Symbol at(size_t i) const { return symbols_[i]; }
  const std::vector<Symbol>& symbols() const { return symbols_; }

  size_t index_of(Symbol g) const {
    const auto it = std::find(symbols_.begin(), symbols_.end(), g);
    if (it == symbols_.end()) throw InvalidSpecification("symbol not in alphabet");
    return size_t(it - symbols_.begin());
  }

  bool contains(Symbol g) const {
    return std::find(symbols_.begin(), symbols_.end(), g) != symbols_.end();
  }

  bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }

 private:
  std::vector<Symbol> symbols_;
};

}  // namespace regen
