#include "ncerg/group.hpp"

#include <numeric>
#include <sstream>

#include "ncerg/error.hpp"

namespace ncerg {

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::size_t> cyclic_orders) : orders_(std::move(cyclic_orders)) {
  for (std::size_t m : orders_) {
    if (m == 0) throw Error(ErrorCode::InvalidArgument, "cyclic order must be positive");
    size_ *= m;
  }
}

std::vector<std::size_t> FiniteAbelianGroup::element(std::size_t index) const {
  if (index >= size_) throw Error(ErrorCode::InvalidArgument, "group element index out of range");
  std::vector<std::size_t> out(orders_.size());
  for (std::size_t i = orders_.size(); i-- > 0;) {
    out[i] = index % orders_[i];
    index /= orders_[i];
  }
  return out;
}

std::size_t FiniteAbelianGroup::index_of(const std::vector<std::size_t>& multi_index) const {
  if (multi_index.size() != orders_.size()) throw Error(ErrorCode::InvalidArgument, "multi-index has wrong length");
  std::size_t index = 0;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    if (multi_index[i] >= orders_[i]) throw Error(ErrorCode::InvalidArgument, "multi-index out of range");
    index = index * orders_[i] + multi_index[i];
  }
  return index;
}

std::size_t FiniteAbelianGroup::add(std::size_t a, std::size_t b) const {
  auto x = element(a);
  const auto y = element(b);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (x[i] + y[i]) % orders_[i];
  return index_of(x);
}

std::size_t FiniteAbelianGroup::inverse(std::size_t a) const {
  auto x = element(a);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (orders_[i] - x[i]) % orders_[i];
  return index_of(x);
}

std::size_t FiniteAbelianGroup::order_of(std::size_t a) const {
  const auto x = element(a);
  std::size_t ord = 1;
  for (std::size_t i = 0; i < x.size(); ++i) ord = std::lcm(ord, orders_[i] / std::gcd(orders_[i], x[i]));
  return ord;
}

std::string FiniteAbelianGroup::key(std::size_t index) const {
  const auto x = element(index);
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(x[i]);
  }
  return out;
}

std::size_t FiniteAbelianGroup::parse_key(const std::string& key) const {
  std::vector<std::size_t> x;
  if (!key.empty()) {
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
        throw Error(ErrorCode::Parse, "malformed group element key '" + key + "'");
      x.push_back(std::stoul(part));
    }
    if (key.back() == ',') throw Error(ErrorCode::Parse, "malformed group element key '" + key + "'");
  }
  if (x.size() != orders_.size()) throw Error(ErrorCode::Parse, "group element key '" + key + "' has wrong length");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] >= orders_[i]) throw Error(ErrorCode::Parse, "group element key '" + key + "' out of range");
  return index_of(x);
}

std::vector<std::size_t> FiniteAbelianGroup::generators() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    if (orders_[i] == 1) continue;
    std::vector<std::size_t> x(orders_.size(), 0);
    x[i] = 1;
    out.push_back(index_of(x));
  }
  return out;
}

}  // namespace ncerg
