#include "qes/sympoly.hpp"

#include <functional>
#include <numeric>

namespace qes {

Partition::Partition(std::vector<int> parts) {
  for (int p : parts) {
    if (p < 0) fail(ErrorKind::AssumptionViolated, "partition parts must be non-negative");
  }
  std::sort(parts.begin(), parts.end(), std::greater<>());
  while (!parts.empty() && parts.back() == 0) parts.pop_back();
  parts_ = std::move(parts);
}

int Partition::size() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

Exponents Partition::padded(int n) const {
  if (length() > n || n > kMaxVars) fail(ErrorKind::LengthExceeded, "partition " + str() + " does not fit");
  Exponents e{};
  for (int i = 0; i < length(); ++i) e[static_cast<std::size_t>(i)] = parts_[static_cast<std::size_t>(i)];
  return e;
}

Partition Partition::raised() const {
  std::vector<int> p = parts_;
  if (p.empty()) {
    p.push_back(1);
  } else {
    p.front() += 1;
  }
  return Partition(std::move(p));
}

std::string Partition::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(parts_[i]);
  }
  return s + ")";
}

bool operator<(const Partition& a, const Partition& b) {
  const std::size_t n = std::max(a.parts_.size(), b.parts_.size());
  for (std::size_t i = n; i-- > 0;) {
    const int x = i < a.parts_.size() ? a.parts_[i] : 0;
    const int y = i < b.parts_.size() ? b.parts_[i] : 0;
    if (x != y) return x < y;
  }
  return false;
}

std::vector<Exponents> msym_expand(const Partition& lambda, int n_vars) {
  if (n_vars < 1 || n_vars > kMaxVars) fail(ErrorKind::LengthExceeded, "n_vars must be 1..4");
  if (lambda.length() > n_vars) {
    fail(ErrorKind::LengthExceeded, "partition " + lambda.str() + " longer than " + std::to_string(n_vars));
  }
  std::vector<int> v(static_cast<std::size_t>(n_vars), 0);
  for (int i = 0; i < lambda.length(); ++i) v[static_cast<std::size_t>(i)] = lambda.parts()[static_cast<std::size_t>(i)];
  std::sort(v.begin(), v.end());
  std::vector<Exponents> out;
  do {
    Exponents e{};
    std::copy(v.begin(), v.end(), e.begin());
    out.push_back(e);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

std::vector<Partition> partitions_in_box(int n_vars, int max_part) {
  if (n_vars < 1 || n_vars > kMaxVars) fail(ErrorKind::LengthExceeded, "n_vars must be 1..4");
  std::vector<Partition> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int pos, int cap) {
    if (pos == n_vars) {
      out.emplace_back(cur);
      return;
    }
    for (int v = 0; v <= cap; ++v) {
      cur.push_back(v);
      rec(pos + 1, v);
      cur.pop_back();
    }
  };
  if (max_part >= 0) rec(0, max_part);
  std::sort(out.begin(), out.end());
  return out;
}

unsigned long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  unsigned long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned long long>(n - k + i) / static_cast<unsigned long long>(i);
  return r;
}

SymPoly<Rational> substitute(const SymPoly<EPoly>& f, const Rational& e1, const Rational& e2) {
  SymPoly<Rational> out(f.n_vars());
  for (const auto& [k, c] : f.terms()) out.add(k, c.evaluate(e1, e2));
  return out;
}

}  // namespace qes
