#include <doctest.h>

#include <random>

#include "qes/errors.hpp"
#include "qes/ring.hpp"
#include "qes/sympoly.hpp"

using namespace qes;

namespace {

Rational eval_poly(const Poly<Rational>& p, const std::vector<Rational>& z) {
  Rational s = 0;
  for (const auto& [e, c] : p) {
    Rational t = c;
    for (std::size_t j = 0; j < z.size(); ++j) {
      for (int q = 0; q < e[j]; ++q) t *= z[j];
    }
    s += t;
  }
  return s;
}

Rational eval_sym(const SymPoly<Rational>& f, const std::vector<Rational>& z) { return eval_poly(expand(f), z); }

Rational eval_uni(const UniPoly<Rational>& c, const Rational& z) {
  Rational s = 0;
  for (std::size_t i = c.size(); i-- > 0;) s = s * z + c[i];
  return s;
}

/// d f / d z_j at z, by exact differentiation of the plain monomials.
Rational partial(const SymPoly<Rational>& f, int j, const std::vector<Rational>& z) {
  Rational s = 0;
  for (const auto& [e, c] : expand(f)) {
    const int m = e[static_cast<std::size_t>(j)];
    if (m == 0) continue;
    Rational t = c * m;
    for (std::size_t v = 0; v < z.size(); ++v) {
      const int power = static_cast<int>(v) == j ? m - 1 : e[v];
      for (int q = 0; q < power; ++q) t *= z[v];
    }
    s += t;
  }
  return s;
}

struct RandomSym {
  std::mt19937_64 rng;
  explicit RandomSym(std::uint64_t seed) : rng(seed) {}
  Rational rational() {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 7);
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
  }
  SymPoly<Rational> sympoly(int n, int max_part, int terms) {
    const auto labels = partitions_in_box(n, max_part);
    std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
    SymPoly<Rational> f(n);
    for (int t = 0; t < terms; ++t) f.add(labels[pick(rng)], rational());
    return f;
  }
};

}  // namespace

TEST_CASE("partitions are canonical") {
  const Partition p({1, 0, 3, 2, 0});
  CHECK(p.parts() == std::vector<int>{3, 2, 1});
  CHECK(p.size() == 6);
  CHECK(p.largest() == 3);
  CHECK(p.raised().parts() == std::vector<int>{4, 2, 1});
  CHECK(Partition().largest() == 0);
  const auto box = partitions_in_box(2, 2);
  const std::vector<std::vector<int>> expected{{}, {1}, {2}, {1, 1}, {2, 1}, {2, 2}};
  REQUIRE(box.size() == expected.size());
  for (std::size_t i = 0; i < box.size(); ++i) CHECK(box[i].parts() == expected[i]);
}

TEST_CASE("orbit expansion") {
  const auto one = msym_expand(Partition({1}), 2);
  CHECK(one.size() == 2);
  CHECK(std::count(one.begin(), one.end(), Exponents{1, 0, 0, 0}) == 1);
  CHECK(std::count(one.begin(), one.end(), Exponents{0, 1, 0, 0}) == 1);
  const auto pair = msym_expand(Partition({1, 1}), 2);
  REQUIRE(pair.size() == 1);
  CHECK(pair.front() == Exponents{1, 1, 0, 0});
  CHECK(msym_expand(Partition({2, 1}), 3).size() == 6);
  CHECK(msym_expand(Partition({2, 2, 1}), 4).size() == 12);
  CHECK_THROWS_AS(msym_expand(Partition({1, 1, 1}), 2), qes::Error);
}

TEST_CASE("box sizes match binomials") {
  for (int n = 1; n <= 4; ++n) {
    for (int d = 0; d <= 4; ++d) {
      // Independent count: non-increasing sequences of length n in 0..d.
      long count = 0;
      std::vector<int> v(static_cast<std::size_t>(n), 0);
      while (true) {
        bool ok = true;
        for (std::size_t i = 1; i < v.size(); ++i) ok = ok && v[i - 1] >= v[i];
        count += ok ? 1 : 0;
        std::size_t i = 0;
        while (i < v.size() && v[i] == d) v[i++] = 0;
        if (i == v.size()) break;
        ++v[i];
      }
      CHECK(static_cast<long>(partitions_in_box(n, d).size()) == count);
      CHECK(static_cast<unsigned long long>(count) == binomial(n + d, n));
    }
  }
  CHECK(partitions_in_box(2, 2).size() == 6);
}

TEST_CASE("expand and collect round trip") {
  RandomSym gen(17);
  std::uniform_int_distribution<int> nd(1, 4);
  std::uniform_int_distribution<int> dd(0, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = nd(gen.rng);
    const auto f = gen.sympoly(n, std::min(dd(gen.rng), n == 4 ? 4 : 6), 5);
    CHECK(collect(expand(f), n) == f);
    for (const auto& [lambda, c] : f.terms()) CHECK(sgn(c) != 0);
  }
}

TEST_CASE("collect rejects asymmetric input") {
  Poly<Rational> p;
  poly_add(p, Exponents{2, 0, 0, 0}, Rational(1));
  poly_add(p, Exponents{0, 2, 0, 0}, Rational(2));
  CHECK_THROWS_AS(collect(p, 2), qes::Error);
  Poly<Rational> q;
  poly_add(q, Exponents{1, 0, 0, 0}, Rational(1));
  try {
    (void)collect(q, 2);
    FAIL("expected NotSymmetric");
  } catch (const qes::Error& e) {
    CHECK(e.kind() == ErrorKind::NotSymmetric);
  }
}

TEST_CASE("gauged term examples") {
  const auto m1 = SymPoly<Rational>::monomial(2, Partition({1}));
  const auto out = apply_gauged_term(UniPoly<Rational>{1}, 1, m1);
  CHECK(out == SymPoly<Rational>::monomial(2, Partition(), 2));

  const auto sq = apply_gauged_term(UniPoly<Rational>{0, 0, 1}, 1, m1);
  CHECK(sq == SymPoly<Rational>::monomial(2, Partition({2})));

  for (int L = 2; L <= 5; ++L) {
    const auto mL = SymPoly<Rational>::monomial(2, Partition({L}));
    const auto r = apply_gauged_term(UniPoly<Rational>{0, 0, 0, 4}, 2, mL);
    CHECK(r.coefficient(Partition({L + 1})) == 4 * L * (L - 1));
    CHECK(r.degree() <= L + 1);
  }
}

TEST_CASE("gauged term against pointwise evaluation") {
  RandomSym gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3;
    const auto f = gen.sympoly(n, 3, 4);
    const UniPoly<Rational> c{gen.rational(), gen.rational(), gen.rational(), gen.rational()};
    const auto g = apply_gauged_term(c, 1, f);
    std::vector<Rational> z;
    for (int j = 0; j < n; ++j) z.push_back(gen.rational());
    Rational expected = 0;
    for (int j = 0; j < n; ++j) expected += eval_uni(c, z[static_cast<std::size_t>(j)]) * partial(f, j, z);
    CHECK(eval_sym(g, z) == expected);
    CHECK(g.degree() <= std::max(-1, f.degree() + 3 - 1));
  }
}

TEST_CASE("cross term examples") {
  const UniPoly<Rational> cubic{0, 0, 0, 4};
  CHECK(apply_cross_term(cubic, SymPoly<Rational>::monomial(2, Partition())).terms().empty());
  for (int L = 1; L <= 4; ++L) {
    const auto r = apply_cross_term(cubic, SymPoly<Rational>::monomial(2, Partition({L})));
    CHECK(r.coefficient(Partition({L + 1})) == 4 * L);
  }
  CHECK_NOTHROW(apply_cross_term(weierstrass_cubic<Rational>({Rational(1, 3), Rational(-1, 2), Rational(1, 6)}),
                                 SymPoly<Rational>::monomial(3, Partition({2, 1}))));
}

TEST_CASE("cross term against the rational-function form") {
  RandomSym gen(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3;
    const auto f = gen.sympoly(n, n == 4 ? 2 : 3, 4);
    const UniPoly<Rational> c{gen.rational(), gen.rational(), gen.rational(), gen.rational()};
    SymPoly<Rational> g;
    REQUIRE_NOTHROW(g = apply_cross_term(c, f));
    std::vector<Rational> z;
    for (int j = 0; j < n; ++j) z.push_back(Rational(Rational(j * 7 + 2) / (3 + j)) + gen.rational() / 50);
    Rational expected = 0;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (j == k) continue;
        const auto zj = z[static_cast<std::size_t>(j)];
        expected += eval_uni(c, zj) / (zj - z[static_cast<std::size_t>(k)]) * partial(f, j, z);
      }
    }
    CHECK(eval_sym(g, z) == expected);
  }
}

TEST_CASE("operators are linear") {
  RandomSym gen(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 4;
    const auto f = gen.sympoly(n, 3, 3);
    const auto g = gen.sympoly(n, 3, 3);
    const Rational s = gen.rational();
    const UniPoly<Rational> c{gen.rational(), gen.rational(), gen.rational(), gen.rational()};
    const auto combo = f + g.scaled(s);
    CHECK(apply_gauged_term(c, 2, combo) == apply_gauged_term(c, 2, f) + apply_gauged_term(c, 2, g).scaled(s));
    CHECK(apply_cross_term(c, combo) == apply_cross_term(c, f) + apply_cross_term(c, g).scaled(s));
  }
}

TEST_CASE("symbolic ring agrees with substituted rationals") {
  RandomSym gen(41);
  const auto e = std::array<EPoly, 3>{EPoly::e(1), EPoly::e(2), EPoly::e(3)};
  const auto cubic_sym = weierstrass_cubic<EPoly>(e);
  const auto f_rat = gen.sympoly(3, 2, 4);
  SymPoly<EPoly> f_sym(3);
  for (const auto& [lambda, c] : f_rat.terms()) f_sym.add(lambda, EPoly(c));
  const auto cross_sym = apply_cross_term(cubic_sym, f_sym);
  const auto second_sym = apply_gauged_term(cubic_sym, 2, f_sym);
  for (int trial = 0; trial < 50; ++trial) {
    const Rational e1 = gen.rational();
    const Rational e2 = gen.rational();
    const Rational e3 = -e1 - e2;
    const auto cubic_rat = weierstrass_cubic<Rational>({e1, e2, e3});
    CHECK(substitute(cross_sym, e1, e2) == apply_cross_term(cubic_rat, f_rat));
    CHECK(substitute(second_sym, e1, e2) == apply_gauged_term(cubic_rat, 2, f_rat));
  }
}

TEST_CASE("ring axioms") {
  RandomSym gen(3);
  auto random_epoly = [&] {
    return EPoly(gen.rational()) + EPoly(gen.rational()) * EPoly::e(1) + EPoly(gen.rational()) * EPoly::e(3) * EPoly::e(2);
  };
  for (int trial = 0; trial < 30; ++trial) {
    const EPoly a = random_epoly(), b = random_epoly(), c = random_epoly();
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK((a - a).is_zero());
    const Rational x = gen.rational(), y = gen.rational(), z = gen.rational();
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
  }
  CHECK((EPoly::e(1) + EPoly::e(2) + EPoly::e(3)).is_zero());
  CHECK(EPoly::e(3) == -EPoly::e(1) - EPoly::e(2));
  CHECK((EPoly::e(1) * EPoly::e(2)).evaluate(Rational(2), Rational(3)) == 6);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-6/8") == Rational(-3, 4));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("7") == 7);
  CHECK(to_string(Rational(-3, 4)) == "-3/4");
  CHECK_THROWS_AS(parse_rational("x/2"), qes::Error);
  CHECK_THROWS_AS(parse_rational("1/0"), qes::Error);
}
