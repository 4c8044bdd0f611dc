#include <doctest.h>

#include <random>
#include <set>

#include "awbm/modp_flag.hpp"

using namespace awbm;

namespace {

WeylElement t(Vec nu) { return WeylElement::translation(std::move(nu)); }

LaurentPoly lp(Int p, std::map<Int, Int> terms) {
  LaurentPoly out(p);
  for (const auto& [e, c] : terms) out += LaurentPoly::monomial(p, c, e);
  return out;
}

Vec random_generic(std::mt19937& rng, int n, Int m, Int p) {
  while (true) {
    Vec a(static_cast<size_t>(n));
    for (auto& x : a) x = static_cast<Int>(rng() % static_cast<unsigned>(p));
    a.back() = 0;
    if (modp_generic(a, m, p)) return a;
  }
}

std::map<Root, Int> random_free(std::mt19937& rng, const CellGeometry& g, Int p) {
  std::map<Root, Int> out;
  for (const Root& r : g.support) out[r] = static_cast<Int>(rng() % static_cast<unsigned>(p));
  return out;
}

Int max_degree(const CellGeometry& g) {
  Int h = 0;
  for (const auto& [r, d] : g.degrees) h = std::max(h, d);
  return h;
}

// Independent count: <x, alpha> < m < <w~(x), alpha> at the rational point x = eta / n.
std::map<Root, Int> brute_degrees(const WeylElement& w) {
  const int n = w.rank();
  RatVec x;
  for (Int e : eta_vec(n)) x.emplace_back(e, n);
  const RatVec y = evaluate(w, x);
  std::map<Root, Int> out;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (i == k) continue;
      const Rational lo = x[static_cast<size_t>(i)] - x[static_cast<size_t>(k)];
      const Rational hi = y[static_cast<size_t>(i)] - y[static_cast<size_t>(k)];
      Int count = 0;
      for (Int m = -10 * n; m <= 10 * n; ++m)
        if (lo < m && Rational(m) < hi) ++count;
      if (count > 0) out[Root{k, i}] = count - 1;
    }
  return out;
}

}  // namespace

TEST_CASE("Laurent polynomial arithmetic") {
  const Int p = 7;
  const auto a = lp(p, {{-1, 3}, {2, 1}});
  const auto b = lp(p, {{1, 5}});
  CHECK(a * b == lp(p, {{0, 1}, {3, 5}}));
  CHECK((a + a).coeff(-1) == 6);
  CHECK((a - a).is_zero());
  CHECK(a.derivative() == lp(p, {{-2, 4}, {1, 2}}));
  CHECK(lp(p, {{7, 1}}).derivative().is_zero());
  CHECK(mod_inverse(3, 7) == 5);
  CHECK_THROWS_AS(mod_inverse(14, 7), ArgumentError);
}

TEST_CASE("Laurent matrix inverse and determinant") {
  const Int p = 11;
  LaurentMatrix m(2, p);
  m.at(0, 0) = lp(p, {{-1, 1}});
  m.at(1, 0) = lp(p, {{1, 3}});
  m.at(1, 1) = lp(p, {{0, 2}});
  CHECK(m.determinant() == lp(p, {{-1, 2}}));
  CHECK(m * m.inverse() == LaurentMatrix::identity(2, p));
  LaurentMatrix singular(2, p);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) singular.at(i, j) = LaurentPoly::constant(p, 1);
  CHECK_THROWS_AS(singular.inverse(), ArgumentError);
  const Perm w({2, 0, 1});
  CHECK(LaurentMatrix::permutation(w, p).determinant() == LaurentPoly::constant(p, w.sign()));
}

TEST_CASE("chart template reproduces the rank three example") {
  const auto z = WeylElement::from_w_then_t(Perm({0, 2, 1}), {2, 1, 1});
  const auto ct = chart_template(z, 0);
  CHECK_FALSE(ct.empty);
  CHECK(ct.det_sign == -1);
  CHECK(ct.det_degree == 4);
  // (row, col) -> (v prefactor, high, monic)
  struct Want {
    int i, j;
    bool v;
    Int high;
    bool monic;
  };
  for (const Want& e : std::vector<Want>{{0, 0, false, 2, true},  {0, 1, false, 0, false}, {0, 2, false, 0, false},
                                         {1, 0, true, 1, false},  {1, 1, false, 0, false}, {1, 2, false, 1, true},
                                         {2, 0, true, 1, false},  {2, 1, true, 0, true},   {2, 2, false, 1, false}}) {
    CAPTURE(e.i);
    CAPTURE(e.j);
    CHECK(ct.at(e.i, e.j).v_prefactor == e.v);
    CHECK(ct.at(e.i, e.j).low == 0);
    CHECK(ct.at(e.i, e.j).high == e.high);
    CHECK(ct.at(e.i, e.j).monic == e.monic);
  }
  CHECK(ct.free_coefficients() == 12);
  const auto a = ct.instantiate(std::vector<Int>(12, 0), 13);
  CHECK(a.determinant() == LaurentPoly::monomial(13, -1, 4));
  CHECK(a(2, 1) == LaurentPoly::monomial(13, 1, 1));
}

TEST_CASE("chart template for translations and empty windows") {
  const auto ct = chart_template(t({2, 1, 0}), 1);
  CHECK(chart_template(t({2, 1, 0}), 0).empty);
  CHECK_FALSE(ct.empty);
  for (int j = 0; j < 3; ++j) {
    CHECK(ct.at(j, j).monic);
    CHECK(ct.at(j, j).high == std::vector<Int>{2, 1, 0}[static_cast<size_t>(j)]);
    for (int i = j + 1; i < 3; ++i) {
      CHECK(ct.at(i, j).v_prefactor);
      CHECK(ct.at(i, j).high == ct.at(j, j).high - 1);
      CHECK(ct.at(j, i).high == ct.at(i, i).high - 1);
    }
  }
  CHECK(chart_template(t({0, -1}), 0).empty);
  CHECK_FALSE(chart_template(t({0, -1}), 2).empty);
  CHECK_THROWS_AS(chart_template(t({0, 0}), -1), ArgumentError);
}

TEST_CASE("cell geometry examples") {
  auto g = cell_geometry(t({1, 0}));
  CHECK(g.support == std::vector<Root>{{1, 0}});
  CHECK(g.degrees.at(Root{1, 0}) == 0);
  CHECK(g.dim == 1);
  g = cell_geometry(WeylElement(Perm({1, 0}), {1, 0}));
  CHECK(g.support.empty());
  CHECK(g.dim == 0);
  CHECK(g.critical_strips == 1);
  g = cell_geometry(t(eta_vec(3)));
  CHECK(g.dim == 3);
  CHECK(g.critical_strips == 0);
}

TEST_CASE("cell geometry against the root-group criterion") {
  for (int n : {2, 3, 4}) {
    const Int positive = n * (n - 1) / 2;
    std::vector<WeylElement> pool = adm(eta_vec(n), AdmVariant::all);
    if (n < 4) {
      const auto more = adm(Vec{2, 1, 0}.size() == static_cast<size_t>(n) ? Vec{2, 1, 0} : Vec{2, 0}, AdmVariant::all);
      pool.insert(pool.end(), more.begin(), more.end());
    }
    for (const auto& w : pool) {
      const auto g = cell_geometry(w);
      CHECK(g.degrees == brute_degrees(w));
      CHECK(g.dim == positive - g.critical_strips);
      const Perm winv = g.witness.inverse();
      CHECK(is_dominant(WeylElement::finite(winv) * w));
      for (const Root& beta : g.support) {
        const Root alpha = beta.negated();
        CHECK(winv(alpha.i) < winv(alpha.j));  // alpha in w(Phi+)
      }
      // Solving order is by height in the chamber's simple system.
      for (size_t k = 1; k < g.support.size(); ++k)
        CHECK(winv(g.support[k - 1].i) - winv(g.support[k - 1].j) <= winv(g.support[k].i) - winv(g.support[k].j));
    }
  }
}

TEST_CASE("torus point conjugates root groups as expected") {
  // U_{-alpha, m} lies in z^{-1} Iw z iff <w~(x), alpha> < m.
  const Int p = 101;
  for (int n : {2, 3})
    for (const auto& w : adm(n == 2 ? Vec{2, 0} : Vec{2, 1, 0}, AdmVariant::all)) {
      const auto z = LaurentMatrix::torus_point(w, p);
      const auto zinv = z.inverse();
      RatVec x;
      for (Int e : eta_vec(n)) x.emplace_back(e, n);
      const RatVec y = evaluate(w, x);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          if (i == k) continue;
          for (Int m = -4; m <= 4; ++m) {
            LaurentMatrix u = LaurentMatrix::identity(n, p);
            u.at(k, i) = LaurentPoly::monomial(p, 1, m);
            const auto conj = z * u * zinv;
            const bool in_iw = conj.in_lie_iwahori();
            CHECK(in_iw == (y[static_cast<size_t>(i)] - y[static_cast<size_t>(k)] < Rational(m)));
          }
        }
    }
}

TEST_CASE("monodromy solve examples") {
  const Int p = 13;
  const auto cell = monodromy_solve(t({1, 0}), {5, 0}, {{Root{1, 0}, 1}}, p);
  CHECK(cell.coefficients.at(Root{1, 0}) == std::vector<Int>{1});
  CHECK(verify_nabla(cell.a, {5, 0}));
  CHECK(cell.a(1, 0) == LaurentPoly::monomial(p, 1, 1));

  std::mt19937 rng(1);
  const Int q = 11;
  const auto g = cell_geometry(t(eta_vec(3)));
  const Vec a = random_generic(rng, 3, max_degree(g) + 1, q);
  const auto c3 = monodromy_solve(t(eta_vec(3)), a, random_free(rng, g, q), q);
  CHECK(c3.coefficients.size() == 3);
  CHECK(verify_nabla(c3.a, a));
}

TEST_CASE("monodromy solve rejects non-generic data") {
  const WeylElement w = t({2, 0});
  REQUIRE(max_degree(cell_geometry(w)) == 1);
  try {
    monodromy_solve(w, {1, 0}, {{Root{1, 0}, 1}}, 13);
    FAIL("expected a zero divisor");
  } catch (const ZeroDivisorError& e) {
    CHECK(e.root_i() == 0);
    CHECK(e.root_j() == 1);
    CHECK(e.index() == 0);
  }
  CHECK_THROWS_AS(monodromy_solve(w, {5, 0}, {}, 13), ArgumentError);
  CHECK_THROWS_AS(monodromy_solve(w, {5, 0}, {{Root{1, 0}, 1}, {Root{0, 1}, 1}}, 13), ArgumentError);
}

TEST_CASE("dimension formula on admissible cells") {
  std::mt19937 rng(2);
  for (int n : {2, 3})
    for (Int p : {11, 13})
      for (const auto& w : adm(eta_vec(n), AdmVariant::all)) {
        const auto g = cell_geometry(w);
        for (int trial = 0; trial < 3; ++trial) {
          const Vec a = random_generic(rng, n, max_degree(g) + 1, p);
          const auto cell = monodromy_solve(w, a, random_free(rng, g, p), p);
          CHECK(static_cast<int>(cell.coefficients.size()) == g.dim);
          CHECK(verify_nabla(cell.a, a));
          CHECK(cell.a.determinant().is_monomial());
        }
      }
}

TEST_CASE("solved coefficients are forced") {
  // Perturbing any solved lower coefficient breaks the condition.
  std::mt19937 rng(3);
  const Int p = 31;
  int perturbed = 0;
  for (const auto& w : adm(Vec{2, 1, 0}, AdmVariant::all)) {
    const auto g = cell_geometry(w);
    if (max_degree(g) == 0) continue;
    const Vec a = random_generic(rng, 3, max_degree(g) + 1, p);
    const auto cell = monodromy_solve(w, a, random_free(rng, g, p), p);
    for (const auto& [beta, cs] : cell.coefficients)
      for (size_t i = 0; i + 1 < cs.size(); ++i) {
        auto coeffs = cell.coefficients;
        coeffs[beta][i] = mod_pos(coeffs[beta][i] + 1, p);
        LaurentMatrix nm = LaurentMatrix::identity(3, p);
        for (const auto& [r, c] : coeffs) {
          LaurentPoly f(p);
          for (size_t k = 0; k < c.size(); ++k) f += LaurentPoly::monomial(p, c[k], static_cast<Int>(k));
          nm.at(r.i, r.j) = r.i > r.j ? f.shifted(1) : f;
        }
        CHECK_FALSE(verify_nabla(LaurentMatrix::torus_point(w, p) * nm, a));
        ++perturbed;
      }
  }
  CHECK(perturbed > 0);
}

TEST_CASE("solutions are equivariant under the torus") {
  // Conjugating by diag(d) scales the root beta = (i, j) by d_i / d_j.
  std::mt19937 rng(4);
  const Int p = 29;
  for (int n : {2, 3})
    for (const auto& w : adm(n == 2 ? Vec{3, 0} : Vec{2, 1, 0}, AdmVariant::all)) {
      const auto g = cell_geometry(w);
      const Vec a = random_generic(rng, n, max_degree(g) + 1, p);
      const auto free = random_free(rng, g, p);
      const auto base = monodromy_solve(w, a, free, p);
      Vec d(static_cast<size_t>(n));
      for (auto& x : d) x = 1 + static_cast<Int>(rng() % static_cast<unsigned>(p - 1));
      auto factor = [&](const Root& r) {
        return mod_pos(d[static_cast<size_t>(r.i)] * mod_inverse(d[static_cast<size_t>(r.j)], p), p);
      };
      std::map<Root, Int> scaled_free;
      for (const auto& [r, c] : free) scaled_free[r] = mod_pos(c * factor(r), p);
      const auto scaled = monodromy_solve(w, a, scaled_free, p);
      for (const auto& [r, cs] : base.coefficients)
        for (size_t i = 0; i < cs.size(); ++i)
          CHECK(scaled.coefficients.at(r)[i] == mod_pos(cs[i] * factor(r), p));
      // In rank two the recursion is linear in the free values.
      if (n == 2) {
        std::map<Root, Int> doubled;
        for (const auto& [r, c] : free) doubled[r] = mod_pos(2 * c, p);
        const auto twice = monodromy_solve(w, a, doubled, p);
        for (const auto& [r, cs] : base.coefficients)
          for (size_t i = 0; i < cs.size(); ++i) CHECK(twice.coefficients.at(r)[i] == mod_pos(2 * cs[i], p));
      }
    }
}

TEST_CASE("verify_nabla basics") {
  const Int p = 17;
  for (const auto& w : adm(Vec{2, 1, 0}, AdmVariant::all))
    CHECK(verify_nabla(LaurentMatrix::torus_point(w, p), {3, 9, 0}));
  LaurentMatrix bad = LaurentMatrix::identity(2, p);
  bad.at(1, 0) = LaurentPoly::monomial(p, 1, -1);
  CHECK_FALSE(verify_nabla(bad, {0, 0}));
  LaurentMatrix singular(2, p);
  singular.at(0, 0) = LaurentPoly::constant(p, 1);
  CHECK_THROWS_AS(verify_nabla(singular, {0, 0}), ArgumentError);
}

TEST_CASE("translating by s^{-1} t_mu trades nabla_a for nabla_0") {
  std::mt19937 rng(5);
  const Int p = 23;
  for (int n : {2, 3})
    for (int trial = 0; trial < 20; ++trial) {
      const auto pool = adm(eta_vec(n), AdmVariant::all);
      const WeylElement w = pool[rng() % pool.size()];
      const auto perms = Perm::all(n);
      const Perm s = perms[rng() % perms.size()];
      Vec mu(static_cast<size_t>(n));
      for (auto& x : mu) x = static_cast<Int>(rng() % 40) - 20;
      const Vec a = s.inverse().act(mu);
      Vec a_modp = a;
      for (auto& x : a_modp) x = mod_pos(x, p);
      const auto g = cell_geometry(w);
      const LaurentMatrix z = LaurentMatrix::permutation(s.inverse(), p) * LaurentMatrix::torus(mu, p);
      const Vec zero(static_cast<size_t>(n), 0);
      if (modp_generic(a_modp, max_degree(g) + 1, p)) {
        const auto cell = monodromy_solve(w, a_modp, random_free(rng, g, p), p);
        CHECK(verify_nabla(cell.a * z, zero));
      }
      // A matrix failing nabla_a also fails nabla_0 after translation.
      LaurentMatrix bad = LaurentMatrix::torus_point(w, p);
      LaurentMatrix u = LaurentMatrix::identity(n, p);
      u.at(n - 1, 0) = LaurentPoly::monomial(p, 1, -3);
      bad = bad * u;
      CHECK(verify_nabla(bad, a_modp) == verify_nabla(bad * z, zero));
    }
}

TEST_CASE("component data in rank two") {
  const Int p = 37;
  const auto e = component_data({WeylElement::identity(2)}, {{7, 0}}, p);
  CHECK(e.bound_fixed_points[0].size() == 2);
  CHECK(e.obvious_fixed_points[0] == e.bound_fixed_points[0]);
  const auto h = component_data({w_h(2)}, {{7, 1}}, p);
  REQUIRE(h.bound_fixed_points[0].size() == 2);
  std::set<WeylElement> expect;
  for (const auto& x : bruhat_interval(t({-1, 0}))) expect.insert(star(x) * t({7, 1}));
  CHECK(std::set<WeylElement>(h.bound_fixed_points[0].begin(), h.bound_fixed_points[0].end()) == expect);
  CHECK(bruhat_interval(t({-1, 0})) ==
        std::vector<WeylElement>{WeylElement(Perm({1, 0}), {0, -1}), t({-1, 0})});
  CHECK(h.exactness_conditional);
  CHECK_THROWS_AS(component_data({WeylElement::identity(2)}, {{1, 0}}, p), GenericityError);
  CHECK_THROWS_AS(component_data({t({1, 0})}, {{7, 0}}, p), ArgumentError);
}

TEST_CASE("obvious fixed points lie in the bound set") {
  const Int p = 101;
  for (int n : {2, 3})
    for (const auto& w1 : restricted_elements(n)) {
      Vec omega = eta_vec(n);
      for (auto& x : omega) x *= 10;
      const auto cd = component_data({w1}, {omega}, p);
      for (const auto& z : cd.obvious_fixed_points[0])
        CHECK(std::find(cd.bound_fixed_points[0].begin(), cd.bound_fixed_points[0].end(), z) !=
              cd.bound_fixed_points[0].end());
      CHECK(cd.bound_fixed_points[0].size() == bruhat_interval(longest_element(n) * w1).size());
    }
}

TEST_CASE("fixed points are consistent with predicted weights") {
  std::mt19937 rng(6);
  for (int n : {2, 3}) {
    const Int p = 71;
    const auto perms = Perm::all(n);
    const auto adm_eta = adm(eta_vec(n), AdmVariant::all);
    for (int trial = 0; trial < (n == 2 ? 12 : 5); ++trial) {
      TameType rb;
      rb.kind = TypeKind::over_F;
      rb.s = {perms[rng() % perms.size()]};
      Vec mu{static_cast<Int>(rng() % 10)};
      for (int i = 1; i < n; ++i) mu.push_back(mu.back() - 10 - static_cast<Int>(rng() % 8));
      rb.mu = {mu};
      const WeylTuple target{star(rb.w_tilde()[0])};
      std::set<SerreWeight> predicted, obvious;
      for (const auto& w : w_question(rb, p)) {
        predicted.insert(w.sigma);
        if (w.obvious) obvious.insert(w.sigma);
      }
      std::set<SerreWeight> pool;
      for (const auto& a : adm_eta) {
        const TameType tau = type_from_element({rb.w_tilde()[0] * inverse(a)});
        for (const auto& jw : jh_set(tau, {}, p, true)) pool.insert(jw.sigma);
      }
      int hits = 0;
      for (const auto& sigma : pool) {
        const auto cd = component_data(sigma.w1, sigma.omega, p, true);
        const bool fixed = cd.bound_contains(target);
        if (fixed) {
          CHECK(predicted.contains(sigma));
          ++hits;
        }
        if (obvious.contains(sigma)) CHECK(fixed);
      }
      CHECK(hits >= static_cast<int>(obvious.size()));
    }
  }
}

TEST_CASE("special fiber components") {
  const Int p = 41;
  auto tau = make_type({WeylElement::identity(2)}, {{10, 0}});
  const WeightTuple eta2{eta_vec(2)};
  const auto two = special_fiber_components(eta2, tau, compatibility_character(tau, {{0, 0}}), p);
  CHECK(two.size() == 2);
  std::set<SerreWeight> labels, expect;
  for (const auto& c : two) labels.insert(c.label);
  for (const auto& jw : jh_set(tau, {}, p)) expect.insert(jw.sigma);
  CHECK(labels == expect);

  auto tau3 = make_type({WeylElement::finite(Perm({1, 2, 0}))}, {{20, 10, 0}});
  const auto nine = special_fiber_components({eta_vec(3)}, tau3, compatibility_character(tau3, {{0, 0, 0}}), p);
  CHECK(nine.size() == 9);
  CHECK_THROWS_AS(special_fiber_components({{1, 1}}, tau, {10}, p), ArgumentError);
  CHECK_THROWS_AS(special_fiber_components(eta2, tau, {99}, p), CompatibilityError);
  CHECK_THROWS_AS(special_fiber_components(eta2, make_type({WeylElement::identity(2)}, {{3, 0}}), {4}, p),
                  GenericityError);
}
