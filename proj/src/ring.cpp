#include "qes/ring.hpp"

#include <cstdio>
#include <sstream>

#include "qes/errors.hpp"

namespace qes {

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (c != ' ' && c != '\t') text += c;
  }
  if (text.empty()) fail(ErrorKind::ConfigError, "empty rational");
  try {
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
      Rational q(text, 10);
      if (q.get_den() == 0) fail(ErrorKind::ConfigError, "zero denominator in '" + raw + "'");
      q.canonicalize();
      return q;
    }
    // Decimal literal: exact conversion of the written digits.
    if (text.find('/') != std::string::npos) fail(ErrorKind::ConfigError, "malformed rational '" + raw + "'");
    bool negative = false;
    std::string body = text;
    if (body[0] == '-' || body[0] == '+') {
      negative = body[0] == '-';
      body = body.substr(1);
    }
    const auto d = body.find('.');
    const std::string whole = body.substr(0, d);
    const std::string frac = body.substr(d + 1);
    mpz_class num(whole.empty() ? "0" : whole + frac, 10);
    if (whole.empty()) num = mpz_class(frac.empty() ? "0" : frac, 10);
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    return negative ? Rational(-q) : q;
  } catch (const std::invalid_argument&) {
    fail(ErrorKind::ConfigError, "malformed rational '" + raw + "'");
  }
}

std::string to_string(const Rational& q) { return q.get_str(10); }

EPoly::EPoly(const Rational& c) {
  if (sgn(c) != 0) terms_[{0, 0}] = c;
}

EPoly EPoly::e(int i) {
  EPoly p;
  switch (i) {
    case 1: p.terms_[{1, 0}] = 1; break;
    case 2: p.terms_[{0, 1}] = 1; break;
    case 3:
      p.terms_[{1, 0}] = -1;
      p.terms_[{0, 1}] = -1;
      break;
    default: fail(ErrorKind::AssumptionViolated, "symbol index must be 1..3");
  }
  return p;
}

int EPoly::degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, k.first + k.second);
  return d;
}

void EPoly::add_term(const Key& k, const Rational& c) {
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    if (sgn(c) != 0) terms_.emplace(k, c);
    return;
  }
  it->second += c;
  if (sgn(it->second) == 0) terms_.erase(it);
}

EPoly& EPoly::operator+=(const EPoly& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

EPoly& EPoly::operator-=(const EPoly& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

EPoly& EPoly::operator*=(const EPoly& o) {
  EPoly out;
  for (const auto& [ka, ca] : terms_) {
    for (const auto& [kb, cb] : o.terms_) out.add_term({ka.first + kb.first, ka.second + kb.second}, ca * cb);
  }
  *this = std::move(out);
  return *this;
}

EPoly EPoly::operator-() const {
  EPoly out;
  for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
  return out;
}

Rational EPoly::evaluate(const Rational& e1, const Rational& e2) const {
  Rational sum = 0;
  for (const auto& [k, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < k.first; ++i) t *= e1;
    for (int i = 0; i < k.second; ++i) t *= e2;
    sum += t;
  }
  return sum;
}

cplx EPoly::evaluate(cplx e1, cplx e2) const {
  cplx sum = 0.0;
  for (const auto& [k, c] : terms_) sum += c.get_d() * std::pow(e1, k.first) * std::pow(e2, k.second);
  return sum;
}

std::string EPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.get_str() << ")";
    if (k.first > 0) os << "*e1^" << k.first;
    if (k.second > 0) os << "*e2^" << k.second;
  }
  return os.str();
}

double RingTraits<EPoly>::magnitude(const EPoly& x) {
  double m = 0.0;
  for (const auto& [k, c] : x.terms()) m += std::abs(c.get_d());
  return m;
}

std::string RingTraits<cplx>::str(const cplx& x) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", x.real(), x.imag());
  return buf;
}

}  // namespace qes
