#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace hybrid_jacobi {

/// Finite integer combination of places; zero coefficients are never stored
/// and the degree is kept in step with the terms.
template <typename Place>
class Divisor {
 public:
  using Terms = std::map<Place, std::int64_t>;

  Divisor() = default;

  void add(const Place& p, std::int64_t coeff) {
    if (coeff == 0) return;
    degree_ += coeff;
    auto [it, inserted] = terms_.emplace(p, coeff);
    if (inserted) return;
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }

  std::int64_t operator[](const Place& p) const {
    const auto it = terms_.find(p);
    return it == terms_.end() ? 0 : it->second;
  }

  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::int64_t degree() const { return degree_; }

  std::vector<Place> support() const {
    std::vector<Place> out;
    out.reserve(terms_.size());
    for (const auto& [p, c] : terms_) out.push_back(p);
    return out;
  }

  Divisor& operator+=(const Divisor& other) {
    for (const auto& [p, c] : other.terms_) add(p, c);
    return *this;
  }
  Divisor& operator-=(const Divisor& other) {
    for (const auto& [p, c] : other.terms_) add(p, -c);
    return *this;
  }
  friend Divisor operator+(Divisor a, const Divisor& b) { return a += b; }
  friend Divisor operator-(Divisor a, const Divisor& b) { return a -= b; }
  friend Divisor operator*(std::int64_t k, const Divisor& d) {
    Divisor out;
    for (const auto& [p, c] : d.terms_) out.add(p, k * c);
    return out;
  }
  friend bool operator==(const Divisor& a, const Divisor& b) { return a.terms_ == b.terms_; }

 private:
  Terms terms_;
  std::int64_t degree_ = 0;
};

}  // namespace hybrid_jacobi
