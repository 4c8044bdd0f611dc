#include "awbm/weights.hpp"

#include <algorithm>
#include <numeric>

namespace awbm {

Vec dot_action(const WeylElement& a, const Vec& lambda, Int p) {
  const Vec eta = eta_vec(a.rank());
  if (lambda.size() != eta.size()) throw ContextError("weight length differs from rank");
  Vec shifted(lambda.size());
  for (size_t i = 0; i < lambda.size(); ++i) shifted[i] = lambda[i] + eta[i];
  Vec out = a.w.act(shifted);
  for (size_t i = 0; i < out.size(); ++i) out[i] += p * a.nu[i] - eta[i];
  return out;
}

static void check_shape(const SerreWeight& lap) {
  if (lap.w1.empty()) throw InputError("presentation has no embeddings");
  if (lap.w1.size() != lap.omega.size()) throw ContextError("w1 and omega have different embedding counts");
  const auto n = static_cast<size_t>(lap.rank());
  for (size_t j = 0; j < lap.w1.size(); ++j)
    if (static_cast<size_t>(lap.w1[j].rank()) != n || lap.omega[j].size() != n)
      throw ContextError("presentation components have mismatched rank");
}

WeightTuple serre_weight(const SerreWeight& lap, Int p) {
  check_shape(lap);
  const size_t f = lap.w1.size();
  const Vec eta = eta_vec(lap.rank());
  WeightTuple kappa(f);
  for (size_t j = 0; j < f; ++j) {
    const WeylElement& w = lap.w1[(j + f - 1) % f];
    if (!is_restricted(w)) throw ArgumentError("presentation component is not restricted: " + to_string(w));
    Vec lam = lap.omega[j];
    for (size_t i = 0; i < lam.size(); ++i) lam[i] -= eta[i];
    kappa[j] = dot_action(w, lam, p);
  }
  return kappa;
}

Vec central_character(const SerreWeight& lap) {
  check_shape(lap);
  const Vec eta = eta_vec(lap.rank());
  const Int eta_sum = std::accumulate(eta.begin(), eta.end(), Int{0});
  Vec zeta;
  for (size_t j = 0; j < lap.w1.size(); ++j)
    zeta.push_back(std::accumulate(lap.omega[j].begin(), lap.omega[j].end(), Int{0}) - eta_sum + lap.w1[j].degree());
  return zeta;
}

SerreWeight canonicalize(SerreWeight lap) {
  check_shape(lap);
  const int n = lap.rank();
  for (size_t j = 0; j < lap.w1.size(); ++j) {
    const Int c = floor_div(-lap.w1[j].degree(), n);
    if (c == 0) continue;
    lap.w1[j] = WeylElement::translation(Vec(static_cast<size_t>(n), c)) * lap.w1[j];
    for (auto& x : lap.omega[j]) x -= c;
  }
  return lap;
}

std::optional<Vec> solve_p_minus_pi(const Vec& e, Int p) {
  const size_t f = e.size();
  BigInt pf = 1;
  for (size_t k = 0; k < f; ++k) pf *= p;
  BigInt num = 0;
  for (size_t k = 0; k < f; ++k) {
    BigInt pw = 1;
    for (size_t i = 0; i + 1 + k < f; ++i) pw *= p;
    num += pw * e[k];
  }
  if (num % (pf - 1) != 0) return std::nullopt;
  Vec d(f);
  d[0] = static_cast<Int>(num / (pf - 1));
  for (size_t j = 0; j + 1 < f; ++j) d[j + 1] = p * d[j] - e[j];
  return d;
}

SerreWeight lap_of(const WeightTuple& kappa, const Vec& zeta, Int p) {
  if (kappa.empty()) throw InputError("no embeddings given");
  if (kappa.size() != zeta.size()) throw ContextError("kappa and zeta have different embedding counts");
  if (p < 2) throw ArgumentError("prime required");
  const size_t f = kappa.size();
  const int n = static_cast<int>(kappa.front().size());
  const Vec eta = eta_vec(n);
  SerreWeight lap{WeylTuple(f), WeightTuple(f)};
  for (size_t j = 0; j < f; ++j) {
    const Vec& k = kappa[j];
    if (static_cast<int>(k.size()) != n) throw ContextError("kappa components have different lengths");
    for (size_t i = 0; i + 1 < k.size(); ++i)
      if (k[i] - k[i + 1] < 0 || k[i] - k[i + 1] > p - 1) throw ArgumentError("weight is not p-restricted");
    Vec y(k.size());
    for (size_t i = 0; i < k.size(); ++i) y[i] = k[i] + eta[i];
    if (!is_deep(y, 0, p)) throw DepthError("weight is not 0-deep");
    // y = u(omega) + p nu with omega/p in the base alcove: nu is the floor,
    // u orders the fractional parts decreasingly.
    Vec nu(y.size()), rem(y.size());
    for (size_t i = 0; i < y.size(); ++i) {
      nu[i] = floor_div(y[i], p);
      rem[i] = y[i] - p * nu[i];
    }
    std::vector<int> order(y.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return rem[static_cast<size_t>(a)] > rem[static_cast<size_t>(b)]; });
    // u maps sorted slot r to the coordinate order[r].
    Perm u(order);
    lap.w1[(j + f - 1) % f] = WeylElement(u, nu);
    lap.omega[j] = u.inverse().act(rem);
  }
  const Vec zeta0 = central_character(lap);
  Vec e(f);
  for (size_t j = 0; j < f; ++j) e[j] = zeta[j] - zeta0[j];
  const auto d = solve_p_minus_pi(e, p);
  if (!d) throw CompatibilityError("central character is not congruent to that of the weight mod (p - pi)");
  for (size_t j = 0; j < f; ++j) {
    const WeylElement delta = omega_element(n, (*d)[j]);
    WeylElement& w = lap.w1[(j + f - 1) % f];
    w = w * inverse(delta);
    Vec lam = lap.omega[j];
    for (size_t i = 0; i < lam.size(); ++i) lam[i] -= eta[i];
    Vec moved = dot_action(delta, lam, p);
    for (size_t i = 0; i < moved.size(); ++i) moved[i] += eta[i];
    lap.omega[j] = std::move(moved);
  }
  lap = canonicalize(std::move(lap));
  if (central_character(lap) != zeta) throw InvariantError("lap_of failed to reach the requested central character");
  return lap;
}

Int depth(const SerreWeight& lap, Int p) {
  Int best = -1;
  for (Int m = 0; m < p; ++m) {
    bool ok = true;
    for (const auto& om : lap.omega) ok = ok && is_deep(om, m, p);
    if (!ok) break;
    best = m;
  }
  return best;
}

// ---- polynomials ---------------------------------------------------------

Polynomial Polynomial::constant(int vars, const BigInt& c) {
  Polynomial out(vars);
  out.add_term(Monomial(static_cast<size_t>(vars), 0), c);
  return out;
}

Polynomial Polynomial::variable(int vars, int i) {
  Polynomial out(vars);
  Monomial m(static_cast<size_t>(vars), 0);
  m[static_cast<size_t>(i)] = 1;
  out.add_term(m, 1);
  return out;
}

void Polynomial::add_term(const Monomial& m, const BigInt& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial out = a;
  out.vars_ = std::max(a.vars_, b.vars_);
  for (const auto& [m, c] : b.terms_) out.add_term(m, c);
  return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  Polynomial out = a;
  out.vars_ = std::max(a.vars_, b.vars_);
  for (const auto& [m, c] : b.terms_) out.add_term(m, -c);
  return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.vars_ != b.vars_) throw ContextError("polynomials in different variable counts");
  Polynomial out(a.vars_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Polynomial::Monomial m(ma.size());
      for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  return out;
}

Polynomial Polynomial::shifted(const Vec& shift) const {
  if (shift.size() != static_cast<size_t>(vars_)) throw ContextError("shift length differs from variable count");
  std::vector<Polynomial> linear;
  for (int i = 0; i < vars_; ++i)
    linear.push_back(variable(vars_, i) - constant(vars_, shift[static_cast<size_t>(i)]));
  Polynomial out(vars_);
  for (const auto& [m, c] : terms_) {
    Polynomial term = constant(vars_, c);
    for (int i = 0; i < vars_; ++i)
      for (int e = 0; e < m[static_cast<size_t>(i)]; ++e) term = term * linear[static_cast<size_t>(i)];
    out = out + term;
  }
  return out;
}

BigInt Polynomial::evaluate(const Vec& point) const {
  if (point.size() != static_cast<size_t>(vars_)) throw ContextError("point length differs from variable count");
  BigInt total = 0;
  for (const auto& [m, c] : terms_) {
    BigInt term = c;
    for (size_t i = 0; i < m.size(); ++i)
      for (int e = 0; e < m[i]; ++e) term *= point[i];
    total += term;
  }
  return total;
}

Int Polynomial::evaluate_mod(const Vec& point, Int p) const {
  BigInt v = evaluate(point) % p;
  if (v < 0) v += p;
  return static_cast<Int>(v);
}

int Polynomial::total_degree() const {
  int best = 0;
  for (const auto& [m, c] : terms_) best = std::max(best, std::accumulate(m.begin(), m.end(), 0));
  return best;
}

Polynomial build_pm(int n, int m) {
  if (n < 1 || m < 0) throw ArgumentError("build_pm needs n >= 1 and m >= 0");
  Polynomial out = Polynomial::constant(n, 1);
  for (int i = 0; i < n; ++i) {
    const Polynomial diff = Polynomial::variable(n, i) - Polynomial::variable(n, (i + 1) % n);
    for (int j = 1; j <= m; ++j) out = out * (diff - Polynomial::constant(n, j));
  }
  return out;
}

bool in_conv(const Vec& nu, const Vec& omega) {
  if (nu.size() != omega.size()) return false;
  Vec a = nu, b = omega;
  std::sort(a.rbegin(), a.rend());
  std::sort(b.rbegin(), b.rend());
  Int sa = 0, sb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
    if (sa > sb) return false;
  }
  return sa == sb;
}

std::vector<Vec> conv_points(const Vec& omega) {
  if (!is_dominant_weight(omega)) throw ArgumentError("weight is not dominant");
  std::vector<Vec> out;
  if (omega.empty()) return {Vec{}};
  const Int lo = omega.back(), hi = omega.front();
  Vec cur(omega.size(), lo);
  // Odometer over the box [lo, hi]^n, keeping majorized points.
  while (true) {
    if (in_conv(cur, omega)) out.push_back(cur);
    size_t i = cur.size();
    while (i > 0 && cur[i - 1] == hi) cur[--i] = lo;
    if (i == 0) break;
    ++cur[i - 1];
  }
  return out;
}

Polynomial superscript(const Polynomial& f, const Vec& omega) {
  if (omega.size() != static_cast<size_t>(f.vars())) throw ContextError("weight length differs from variable count");
  Polynomial out = Polynomial::constant(f.vars(), 1);
  for (const auto& nu : conv_points(omega)) out = out * f.shifted(nu);
  return out;
}

bool generic_m(const WeightTuple& mu, Int m, Int p) {
  for (const auto& v : mu) {
    const Vec eta = eta_vec(static_cast<int>(v.size()));
    Vec y(v.size());
    for (size_t i = 0; i < v.size(); ++i) y[i] = v[i] + eta[i];
    if (!is_deep(y, m, p)) return false;
  }
  return true;
}

bool generic_poly(const WeightTuple& mu, const Polynomial& poly, Int p) {
  for (const auto& v : mu)
    if (poly.evaluate_mod(v, p) == 0) return false;
  return true;
}

}  // namespace awbm
