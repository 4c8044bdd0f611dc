#include "awbm/modp_flag.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace awbm {

// ---- Laurent polynomials ----------------------------------------------------

Int mod_inverse(Int a, Int p) {
  a = mod_pos(a, p);
  if (a == 0) throw ArgumentError("zero has no inverse mod p");
  Int result = 1, base = a, e = p - 2;
  while (e > 0) {
    if (e & 1) result = static_cast<Int>((static_cast<__int128>(result) * base) % p);
    base = static_cast<Int>((static_cast<__int128>(base) * base) % p);
    e >>= 1;
  }
  return result;
}

LaurentPoly::LaurentPoly(Int p) : p_(p) {
  if (p < 2) throw ArgumentError("Laurent polynomials need a prime");
}

LaurentPoly LaurentPoly::constant(Int p, Int c) { return monomial(p, c, 0); }

LaurentPoly LaurentPoly::monomial(Int p, Int c, Int exp) {
  LaurentPoly out(p);
  out.set(exp, mod_pos(c, p));
  return out;
}

void LaurentPoly::set(Int exp, Int c) {
  if (c == 0)
    terms_.erase(exp);
  else
    terms_[exp] = c;
}

Int LaurentPoly::coeff(Int exp) const {
  auto it = terms_.find(exp);
  return it == terms_.end() ? 0 : it->second;
}

Int LaurentPoly::low() const {
  if (terms_.empty()) throw InvariantError("zero polynomial has no lowest term");
  return terms_.begin()->first;
}

Int LaurentPoly::high() const {
  if (terms_.empty()) throw InvariantError("zero polynomial has no highest term");
  return terms_.rbegin()->first;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (p_ == 0) p_ = o.p_;
  for (const auto& [e, c] : o.terms_) set(e, (coeff(e) + c) % p_);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  if (p_ == 0) p_ = o.p_;
  for (const auto& [e, c] : o.terms_) set(e, mod_pos(coeff(e) - c, p_));
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly out(a.p_ ? a.p_ : b.p_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) out.set(ea + eb, (out.coeff(ea + eb) + ca * cb) % out.p_);
  return out;
}

LaurentPoly LaurentPoly::scaled(Int c) const {
  LaurentPoly out(p_);
  c = mod_pos(c, p_);
  for (const auto& [e, x] : terms_) out.set(e, (x * c) % p_);
  return out;
}

LaurentPoly LaurentPoly::shifted(Int k) const {
  LaurentPoly out(p_);
  for (const auto& [e, x] : terms_) out.terms_[e + k] = x;
  return out;
}

LaurentPoly LaurentPoly::derivative() const {
  LaurentPoly out(p_);
  for (const auto& [e, x] : terms_) out.set(e - 1, mod_pos(mod_pos(e, p_) * x, p_));
  return out;
}

// ---- matrices ---------------------------------------------------------------

LaurentMatrix::LaurentMatrix(int n, Int p) : n_(n), p_(p), e_(static_cast<size_t>(n * n), LaurentPoly(p)) {}

LaurentMatrix LaurentMatrix::identity(int n, Int p) { return diagonal(Vec(static_cast<size_t>(n), 1), p); }

LaurentMatrix LaurentMatrix::diagonal(const Vec& d, Int p) {
  const int n = static_cast<int>(d.size());
  LaurentMatrix out(n, p);
  for (int i = 0; i < n; ++i) out.at(i, i) = LaurentPoly::constant(p, d[static_cast<size_t>(i)]);
  return out;
}

LaurentMatrix LaurentMatrix::permutation(const Perm& w, Int p) {
  LaurentMatrix out(w.size(), p);
  for (int j = 0; j < w.size(); ++j) out.at(w(j), j) = LaurentPoly::constant(p, 1);
  return out;
}

LaurentMatrix LaurentMatrix::torus(const Vec& mu, Int p) {
  const int n = static_cast<int>(mu.size());
  LaurentMatrix out(n, p);
  for (int i = 0; i < n; ++i) out.at(i, i) = LaurentPoly::monomial(p, 1, mu[static_cast<size_t>(i)]);
  return out;
}

LaurentMatrix LaurentMatrix::torus_point(const WeylElement& w_tilde, Int p) {
  return permutation(w_tilde.w.inverse(), p) * torus(w_tilde.nu, p);
}

LaurentMatrix operator+(const LaurentMatrix& a, const LaurentMatrix& b) {
  if (a.n_ != b.n_) throw ContextError("matrix sizes differ");
  LaurentMatrix out = a;
  for (size_t k = 0; k < out.e_.size(); ++k) out.e_[k] += b.e_[k];
  return out;
}

LaurentMatrix operator-(const LaurentMatrix& a, const LaurentMatrix& b) {
  if (a.n_ != b.n_) throw ContextError("matrix sizes differ");
  LaurentMatrix out = a;
  for (size_t k = 0; k < out.e_.size(); ++k) out.e_[k] -= b.e_[k];
  return out;
}

LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b) {
  if (a.n_ != b.n_) throw ContextError("matrix sizes differ");
  LaurentMatrix out(a.n_, a.p_);
  for (int i = 0; i < a.n_; ++i)
    for (int k = 0; k < a.n_; ++k) {
      if (a(i, k).is_zero()) continue;
      for (int j = 0; j < a.n_; ++j)
        if (!b(k, j).is_zero()) out.at(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

LaurentMatrix LaurentMatrix::derivative() const {
  LaurentMatrix out = *this;
  for (auto& x : out.e_) x = x.derivative();
  return out;
}

LaurentMatrix LaurentMatrix::shifted(Int k) const {
  LaurentMatrix out = *this;
  for (auto& x : out.e_) x = x.shifted(k);
  return out;
}

namespace {

// Laplace expansion along the first listed row; fine for the ranks used here.
LaurentPoly minor_det(const LaurentMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  const Int p = m.prime();
  if (rows.empty()) return LaurentPoly::constant(p, 1);
  LaurentPoly out(p);
  std::vector<int> rest(rows.begin() + 1, rows.end());
  for (size_t c = 0; c < cols.size(); ++c) {
    const LaurentPoly& x = m(rows[0], cols[c]);
    if (x.is_zero()) continue;
    std::vector<int> sub = cols;
    sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(c));
    LaurentPoly term = x * minor_det(m, rest, sub);
    if (c % 2) out -= term;
    else out += term;
  }
  return out;
}

}  // namespace

LaurentPoly LaurentMatrix::determinant() const {
  std::vector<int> all(static_cast<size_t>(n_));
  std::iota(all.begin(), all.end(), 0);
  return minor_det(*this, all, all);
}

LaurentMatrix LaurentMatrix::inverse() const {
  const LaurentPoly det = determinant();
  if (!det.is_monomial()) throw ArgumentError("matrix is not invertible over Laurent polynomials");
  const Int k = det.low();
  const Int unit_inv = mod_inverse(det.coeff(k), p_);
  LaurentMatrix out(n_, p_);
  std::vector<int> all(static_cast<size_t>(n_));
  std::iota(all.begin(), all.end(), 0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      // inverse(i, j) = (-1)^{i+j} M_{ji} / det.
      std::vector<int> rows = all, cols = all;
      rows.erase(rows.begin() + j);
      cols.erase(cols.begin() + i);
      LaurentPoly c = minor_det(*this, rows, cols).scaled((i + j) % 2 ? -unit_inv : unit_inv).shifted(-k);
      out.at(i, j) = std::move(c);
    }
  return out;
}

bool LaurentMatrix::is_polynomial() const {
  return std::all_of(e_.begin(), e_.end(), [](const LaurentPoly& x) { return x.is_zero() || x.low() >= 0; });
}

bool LaurentMatrix::in_lie_iwahori() const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      const auto& x = (*this)(i, j);
      if (x.is_zero()) continue;
      if (x.low() < (i > j ? 1 : 0)) return false;
    }
  return true;
}

// ---- charts -----------------------------------------------------------------

int ChartTemplate::free_coefficients() const {
  int count = 0;
  for (const auto& e : entries)
    if (e.high >= e.low) count += static_cast<int>(e.high - e.low + 1) - (e.monic ? 1 : 0);
  return count;
}

LaurentMatrix ChartTemplate::instantiate(const std::vector<Int>& coeffs, Int p) const {
  if (empty) throw ArgumentError("chart is empty");
  if (static_cast<int>(coeffs.size()) != free_coefficients())
    throw InputError("chart needs " + std::to_string(free_coefficients()) + " coefficients");
  LaurentMatrix out(n, p);
  size_t next = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const ChartEntry& e = at(i, j);
      LaurentPoly x(p);
      for (Int k = e.low; k <= e.high; ++k) {
        const Int c = (e.monic && k == e.high) ? 1 : coeffs[next++];
        x += LaurentPoly::monomial(p, c, k);
      }
      out.at(i, j) = e.v_prefactor ? x.shifted(1) : x;
    }
  return out;
}

ChartTemplate chart_template(const WeylElement& z_tilde, Int h) {
  if (h < 0) throw ArgumentError("h must be nonnegative");
  ChartTemplate t;
  t.n = z_tilde.rank();
  t.w = z_tilde.w;
  t.nu = z_tilde.nu_right();
  t.h = h;
  t.det_sign = t.w.sign();
  t.det_degree = std::accumulate(t.nu.begin(), t.nu.end(), Int{0});
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j) {
      ChartEntry e;
      e.v_prefactor = i > j;
      e.low = -h;
      e.high = t.nu[static_cast<size_t>(j)] - (i > j ? 1 : 0) - (i < t.w(j) ? 1 : 0);
      e.monic = i == t.w(j);
      if (e.high < e.low) t.empty = true;
      t.entries.push_back(e);
    }
  return t;
}

// ---- open cells and monodromy ------------------------------------------------

CellGeometry cell_geometry(const WeylElement& w_tilde) {
  const int n = w_tilde.rank();
  const Vec y = scaled_image(w_tilde);  // n * w~(x) at x = eta / n
  CellGeometry g;
  for (const Perm& w : Perm::all(n))
    if (is_dominant(WeylElement::finite(w.inverse()) * w_tilde)) {
      g.witness = w;
      break;
    }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (i == k) continue;
      // alpha = e_i - e_k; its negative is the support candidate.
      const Int fl = floor_div(y[static_cast<size_t>(i)] - y[static_cast<size_t>(k)], n);
      const Int ceil_x = i < k ? 1 : 0;
      if (fl >= ceil_x) g.degrees[Root{k, i}] = fl - ceil_x;
      if (i < k) {
        const Int d = y[static_cast<size_t>(i)] - y[static_cast<size_t>(k)];
        if (d > 0 && d < n) ++g.critical_strips;
      }
    }
  // Solving order: height of -beta in the simple system w(Delta), ties lexicographic.
  const Perm winv = g.witness.inverse();
  for (const auto& [root, d] : g.degrees) g.support.push_back(root);
  auto height = [&](const Root& beta) { return winv(beta.i) - winv(beta.j); };
  std::stable_sort(g.support.begin(), g.support.end(),
                   [&](const Root& a, const Root& b) { return height(a) < height(b); });
  g.dim = static_cast<int>(g.support.size());
  return g;
}

bool modp_generic(const Vec& a_bar, Int m, Int p) {
  for (size_t i = 0; i < a_bar.size(); ++i)
    for (size_t j = 0; j < a_bar.size(); ++j) {
      if (i == j) continue;
      const Int d = mod_pos(a_bar[i] - a_bar[j], p);
      if (d <= m || d >= p - m) return false;
    }
  return true;
}

namespace {

// v dA/dv A^{-1} + A diag(a) A^{-1}.
LaurentMatrix nabla_expression(const LaurentMatrix& a, const LaurentMatrix& a_inv, const Vec& a_bar) {
  const Int p = a.prime();
  return a.derivative().shifted(1) * a_inv + a * LaurentMatrix::diagonal(a_bar, p) * a_inv;
}

// (1 + X)^{-1} for nilpotent X.
LaurentMatrix unipotent_inverse(const LaurentMatrix& m) {
  const int n = m.size();
  const Int p = m.prime();
  const LaurentMatrix one = LaurentMatrix::identity(n, p);
  const LaurentMatrix x = m - one;
  LaurentMatrix term = one, sum = one;
  for (int k = 1; k < n; ++k) {
    term = term * x;
    sum = (k % 2) ? sum - term : sum + term;
  }
  if (!(term * x == LaurentMatrix(n, p))) throw InvariantError("cell matrix is not unipotent");
  return sum;
}

LaurentMatrix cell_matrix(int n, Int p, const std::map<Root, std::vector<Int>>& coeffs) {
  LaurentMatrix out = LaurentMatrix::identity(n, p);
  for (const auto& [beta, cs] : coeffs) {
    LaurentPoly f(p);
    for (size_t i = 0; i < cs.size(); ++i) f += LaurentPoly::monomial(p, cs[i], static_cast<Int>(i));
    // beta = -alpha; alpha > 0 exactly when beta sits below the diagonal.
    out.at(beta.i, beta.j) = beta.i > beta.j ? f.shifted(1) : f;
  }
  return out;
}

}  // namespace

MonodromyCell monodromy_solve(const WeylElement& w_tilde, const Vec& a_bar, const std::map<Root, Int>& free_values,
                              Int p) {
  const int n = w_tilde.rank();
  if (static_cast<int>(a_bar.size()) != n) throw ContextError("a_bar has the wrong rank");
  const CellGeometry g = cell_geometry(w_tilde);
  for (const auto& [beta, c] : free_values)
    if (!g.degrees.contains(beta))
      throw ArgumentError("free value given for a root outside the support");
  for (const Root& beta : g.support)
    if (!free_values.contains(beta)) throw ArgumentError("missing free value for a support root");

  Vec a(a_bar);
  for (auto& x : a) x = mod_pos(x, p);
  if (!g.support.empty()) {
    Int hmax = 0;
    for (const auto& [beta, d] : g.degrees) hmax = std::max(hmax, d);
    const Int need = hmax + 1;
    if (!modp_generic(a, need, p)) {
      for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k) {
          const Int d = mod_pos(a[static_cast<size_t>(i)] - a[static_cast<size_t>(k)], p);
          if (d <= need || d >= p - need)
            throw ZeroDivisorError(i, k, 0,
                                   "a_bar is not " + std::to_string(need) + "-generic at root e" + std::to_string(i) +
                                       " - e" + std::to_string(k));
        }
    }
  }

  std::map<Root, std::vector<Int>> coeffs;
  for (const Root& beta : g.support) {
    std::vector<Int> cs(static_cast<size_t>(g.degrees.at(beta) + 1), 0);
    cs.back() = mod_pos(free_values.at(beta), p);
    coeffs[beta] = std::move(cs);
  }
  for (const Root& beta : g.support) {
    const Root alpha = beta.negated();
    const Int d = g.degrees.at(beta);
    if (d == 0) continue;
    const Int delta = alpha.positive() ? 1 : 0;
    const LaurentMatrix nm = cell_matrix(n, p, coeffs);
    const LaurentMatrix expr = nabla_expression(nm, unipotent_inverse(nm), a);
    const LaurentPoly& entry = expr(beta.i, beta.j);
    const Int pairing = a[static_cast<size_t>(alpha.i)] - a[static_cast<size_t>(alpha.j)];
    auto& cs = coeffs[beta];
    for (Int i = 0; i < d; ++i) {
      const Int pivot = mod_pos(i + delta + pairing, p);
      if (pivot == 0)
        throw ZeroDivisorError(alpha.i, alpha.j, static_cast<int>(i), "vanishing pivot while solving the cell");
      cs[static_cast<size_t>(i)] = mod_pos(-entry.coeff(i + delta) * mod_inverse(pivot, p), p);
    }
  }
  MonodromyCell out;
  out.n = cell_matrix(n, p, coeffs);
  out.a = LaurentMatrix::torus_point(w_tilde, p) * out.n;
  out.coefficients = std::move(coeffs);
  if (!verify_nabla(out.a, a)) throw InvariantError("solved cell fails the monodromy condition");
  return out;
}

bool verify_nabla(const LaurentMatrix& a, const Vec& a_bar) {
  if (static_cast<int>(a_bar.size()) != a.size()) throw ContextError("a_bar has the wrong rank");
  const LaurentMatrix inv = a.inverse();
  return nabla_expression(a, inv, a_bar).shifted(1).in_lie_iwahori();
}

// ---- components ---------------------------------------------------------------

bool ComponentData::bound_contains(const WeylTuple& z) const {
  if (z.size() != bound_fixed_points.size()) return false;
  for (size_t j = 0; j < z.size(); ++j)
    if (std::find(bound_fixed_points[j].begin(), bound_fixed_points[j].end(), z[j]) == bound_fixed_points[j].end())
      return false;
  return true;
}

ComponentData component_data(const WeylTuple& w1, const WeightTuple& omega, Int p, bool force) {
  if (w1.empty() || w1.size() != omega.size()) throw ContextError("w1 and omega need one entry per embedding");
  const int n = w1.front().rank();
  for (size_t j = 0; j < w1.size(); ++j) {
    if (!is_restricted(w1[j])) throw ArgumentError("w1 must be restricted: " + to_string(w1[j]));
    if (!force && !classify(WeylElement::translation(omega[j]), n - 1, p).m_generic)
      throw GenericityError("t_omega is not " + std::to_string(n - 1) + "-generic");
  }
  ComponentData out;
  out.label = canonicalize(SerreWeight{w1, omega});
  const WeylElement w0 = longest_element(n);
  for (size_t j = 0; j < w1.size(); ++j) {
    const WeylElement t_om = WeylElement::translation(omega[j]);
    std::vector<WeylElement> bound;
    for (const auto& x : bruhat_interval(w0 * w1[j])) bound.push_back(star(x) * t_om);
    sort_canonical(bound);
    std::vector<WeylElement> obvious;
    for (const Perm& w : Perm::all(n)) obvious.push_back(star(t_om * WeylElement::finite(w) * w1[j]));
    sort_canonical(obvious);
    for (const auto& z : obvious)
      if (std::find(bound.begin(), bound.end(), z) == bound.end())
        throw InvariantError("obvious fixed point outside the bound set");
    out.bound_fixed_points.push_back(std::move(bound));
    out.obvious_fixed_points.push_back(std::move(obvious));
  }
  return out;
}

std::vector<ComponentData> special_fiber_components(const WeightTuple& lambda, const TameType& tau, const Vec& zeta,
                                                    Int p, bool force) {
  if (lambda.size() != tau.s.size()) throw ContextError("lambda needs one weight per embedding");
  const int n = tau.rank();
  WeightTuple shifted;
  Int h_lambda = 0;
  const Vec eta = eta_vec(n);
  for (const auto& l : lambda) {
    if (static_cast<int>(l.size()) != n) throw ContextError("lambda has the wrong rank");
    for (size_t i = 0; i + 1 < l.size(); ++i)
      if (l[i] <= l[i + 1]) throw ArgumentError("lambda must be regular dominant");
    h_lambda = std::max(h_lambda, height_spread(l));
    Vec s(l);
    for (size_t i = 0; i < s.size(); ++i) s[i] -= eta[i];
    shifted.push_back(std::move(s));
  }
  const Int need = std::max<Int>(2 * n, h_lambda);
  if (!force && !is_generic(tau, need, p))
    throw GenericityError("type presentation is not " + std::to_string(need) + "-generic");
  if (compatibility_character(tau, shifted) != zeta)
    throw CompatibilityError("type presentation is not (lambda - eta)-compatible with zeta");
  std::vector<ComponentData> out;
  for (const auto& jh : jh_set(tau, shifted, p, true)) out.push_back(component_data(jh.sigma.w1, jh.sigma.omega, p, force));
  return out;
}

}  // namespace awbm
