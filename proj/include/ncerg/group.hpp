#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ncerg {

/// Z_{m_1} x ... x Z_{m_d}. Elements are indexed in lexicographic order of
/// their multi-indices (last coordinate fastest); index 0 is the identity.
class FiniteAbelianGroup {
 public:
  explicit FiniteAbelianGroup(std::vector<std::size_t> cyclic_orders = {});

  const std::vector<std::size_t>& cyclic_orders() const noexcept { return orders_; }
  std::size_t size() const noexcept { return size_; }

  std::vector<std::size_t> element(std::size_t index) const;
  std::size_t index_of(const std::vector<std::size_t>& multi_index) const;

  std::size_t add(std::size_t a, std::size_t b) const;
  std::size_t inverse(std::size_t a) const;
  /// Order of the element as a group element.
  std::size_t order_of(std::size_t a) const;

  /// Comma-joined multi-index, e.g. "1,0". The trivial group's only key is "".
  std::string key(std::size_t index) const;
  /// Inverse of key(); throws Parse on malformed or out-of-range keys.
  std::size_t parse_key(const std::string& key) const;

  /// Indices of the standard generators (unit multi-indices), skipping Z_1 factors.
  std::vector<std::size_t> generators() const;

 private:
  std::vector<std::size_t> orders_;
  std::size_t size_ = 1;
};

}  // namespace ncerg
