#include "awbm/inertial_types.hpp"

#include <numeric>

namespace awbm {

namespace {

BigInt power(Int p, int k) {
  BigInt out = 1;
  for (int i = 0; i < k; ++i) out *= p;
  return out;
}

Vec plus_eta(const Vec& mu) {
  const Vec eta = eta_vec(static_cast<int>(mu.size()));
  Vec out(mu.size());
  for (size_t i = 0; i < mu.size(); ++i) out[i] = mu[i] + eta[i];
  return out;
}

Perm perm_power(const Perm& a, int k) {
  Perm out = Perm::identity(a.size());
  const Perm base = k >= 0 ? a : a.inverse();
  for (int i = 0; i < std::abs(k); ++i) out = out * base;
  return out;
}

bool non_increasing(const BigVec& v) {
  for (size_t i = 0; i + 1 < v.size(); ++i)
    if (v[i] < v[i + 1]) return false;
  return true;
}

}  // namespace

WeylTuple TameType::w_tilde() const {
  WeylTuple out;
  for (size_t j = 0; j < s.size(); ++j) out.push_back(WeylElement(s[j], plus_eta(mu[j])));
  return out;
}

WeylTuple TameType::w_tilde_star() const {
  WeylTuple out;
  for (const auto& x : w_tilde()) out.push_back(star(x));
  return out;
}

TameType make_type(const WeylTuple& s, const WeightTuple& mu, TypeKind kind) {
  if (s.empty()) throw InputError("type has no embeddings");
  if (s.size() != mu.size()) throw ContextError("s and mu have different embedding counts");
  const int n = s.front().rank();
  TameType tau;
  tau.kind = kind;
  for (size_t j = 0; j < s.size(); ++j) {
    if (s[j].rank() != n || static_cast<int>(mu[j].size()) != n)
      throw ContextError("type components have mismatched rank");
    for (Int x : s[j].nu)
      if (x != 0) throw ArgumentError("s must have zero translation part: " + to_string(s[j]));
    tau.s.push_back(s[j].w);
  }
  tau.mu = mu;
  return tau;
}

bool is_generic(const TameType& tau, Int m, Int p) {
  for (const auto& mu : tau.mu) {
    const Vec y = plus_eta(mu);
    for (size_t i = 0; i < y.size(); ++i)
      for (size_t k = i + 1; k < y.size(); ++k) {
        const Int d = y[i] - y[k];
        if (d <= m || d >= p - m) return false;
      }
  }
  return true;
}

DescentData descent_data(const TameType& tau, Int p) {
  if (tau.s.empty()) throw InputError("type has no embeddings");
  if (p < 2) throw ArgumentError("prime required");
  if (!is_generic(tau, 0, p)) throw GenericityError("mu is not 0-generic in the base alcove");
  const int f = tau.embeddings();
  const int n = tau.rank();
  const auto fs = static_cast<size_t>(f);
  DescentData dd;
  dd.s_tau = Perm::identity(n);
  for (const auto& x : tau.s) dd.s_tau = dd.s_tau * x;
  dd.r = dd.s_tau.order();
  dd.f_prime = f * dd.r;
  const auto fp = static_cast<size_t>(dd.f_prime);

  // alpha_j = s_{f-1}^{-1} ... s_{f-j}^{-1} (mu_{f-j} + eta).
  for (int j = 0; j < f; ++j) {
    Vec v = plus_eta(tau.mu[static_cast<size_t>((f - j) % f)]);
    for (int i = f - j; i <= f - 1; ++i) v = tau.s[static_cast<size_t>(i)].inverse().act(v);
    dd.alpha.push_back(std::move(v));
  }
  dd.alpha_prime.resize(fp);
  for (int k = 0; k < dd.r; ++k) {
    const Perm back = perm_power(dd.s_tau, -k);
    for (int j = 0; j < f; ++j) dd.alpha_prime[static_cast<size_t>(j + k * f)] = back.act(dd.alpha[static_cast<size_t>(j)]);
  }
  for (size_t jp = 0; jp < fp; ++jp) {
    BigVec a(static_cast<size_t>(n), 0);
    BigInt pw = 1;
    for (size_t i = 0; i < fp; ++i) {
      const Vec& al = dd.alpha_prime[(i + fp - jp) % fp];
      for (size_t c = 0; c < a.size(); ++c) a[c] += pw * al[c];
      pw *= p;
    }
    dd.a_prime.push_back(std::move(a));
  }
  // s'_or,{j+kf} = s_tau^{k+1} s_{f-1}^{-1} ... s_{j+1}^{-1}.
  dd.s_or.resize(fp);
  for (int k = 0; k < dd.r; ++k)
    for (int j = 0; j < f; ++j) {
      Perm x = perm_power(dd.s_tau, k + 1);
      for (int i = f - 1; i >= j + 1; --i) x = x * tau.s[static_cast<size_t>(i)].inverse();
      dd.s_or[static_cast<size_t>(j + k * f)] = x;
    }

  const BigInt pfp = power(p, dd.f_prime);
  const BigRational denom = BigRational(1) - BigRational(pfp);
  for (size_t jp = 0; jp < fp; ++jp) {
    const BigVec oriented = dd.s_or[jp].inverse().act(dd.a_prime[jp]);
    if (!non_increasing(oriented)) throw GenericityError("orientation does not make a'(" + std::to_string(jp) + ") dominant");
    std::vector<BigRational> exact;
    for (const auto& x : oriented) exact.push_back(BigRational(x) / denom);
    dd.a_tau_exact.push_back(std::move(exact));
    if (jp < fs) {
      Vec modp;
      for (const auto& x : oriented) {
        BigInt rem = x % p;
        if (rem < 0) rem += p;
        modp.push_back(static_cast<Int>(rem));
      }
      dd.a_tau_modp.push_back(std::move(modp));
    }
  }

  // chi_i = sum_k a(0)_{s_tau^k(i)} p^{fk}, a(0) = sum_j p^j alpha_j.
  BigVec a0(static_cast<size_t>(n), 0);
  for (int j = 0; j < f; ++j)
    for (size_t c = 0; c < a0.size(); ++c) a0[c] += power(p, j) * dd.alpha[static_cast<size_t>(j)][c];
  const BigInt modulus = pfp - 1;
  for (int i = 0; i < n; ++i) {
    BigInt e = 0;
    for (int k = 0; k < dd.r; ++k) e += a0[static_cast<size_t>(perm_power(dd.s_tau, k)(i))] * power(p, f * k);
    e %= modulus;
    if (e < 0) e += modulus;
    dd.chi_exponents.push_back(e);
  }
  return dd;
}

Vec compatibility_character(const TameType& tau, const WeightTuple& lambda) {
  if (!lambda.empty() && lambda.size() != tau.mu.size()) throw ContextError("lambda has the wrong embedding count");
  Vec zeta;
  for (size_t j = 0; j < tau.mu.size(); ++j) {
    const Vec base = tau.kind == TypeKind::over_E ? plus_eta(tau.mu[j]) : tau.mu[j];
    Int d = std::accumulate(base.begin(), base.end(), Int{0});
    if (!lambda.empty()) {
      if (lambda[j].size() != base.size()) throw ContextError("lambda has the wrong rank");
      d += std::accumulate(lambda[j].begin(), lambda[j].end(), Int{0});
    }
    zeta.push_back(d);
  }
  return zeta;
}

bool compatible_presentation(const TameType& tau, const Vec& zeta, const WeightTuple& lambda) {
  return compatibility_character(tau, lambda) == zeta;
}

TameType omega_twist(const TameType& tau, const Vec& degrees, Int p) {
  const auto f = tau.s.size();
  if (degrees.size() != f) throw ContextError("one degree per embedding required");
  const int n = tau.rank();
  // Paper-form factors w_j t_{nu_j} of the length-zero elements.
  std::vector<Perm> w;
  std::vector<Vec> nu;
  for (size_t j = 0; j < f; ++j) {
    const WeylElement o = omega_element(n, degrees[j]);
    w.push_back(o.w);
    nu.push_back(o.nu_right());
  }
  // (s, mu) -> (w s pi(w)^{-1}, w(mu + eta + p nu - s pi(nu)) - eta).
  TameType out = tau;
  const Vec eta = eta_vec(n);
  for (size_t j = 0; j < f; ++j) {
    const size_t next = (j + 1) % f;
    out.s[j] = w[j] * tau.s[j] * w[next].inverse();
    const Vec moved = tau.s[j].act(nu[next]);
    Vec y = plus_eta(tau.mu[j]);
    for (size_t i = 0; i < y.size(); ++i) y[i] += p * nu[j][i] - moved[i];
    y = w[j].act(y);
    for (size_t i = 0; i < y.size(); ++i) y[i] -= eta[i];
    out.mu[j] = std::move(y);
  }
  return out;
}

TameType present_compatibly(const TameType& tau, const Vec& zeta, const WeightTuple& lambda, Int p) {
  if (zeta.size() != tau.s.size()) throw ContextError("zeta has the wrong embedding count");
  if (!is_generic(tau, 1, p)) throw GenericityError("type presentation is not 1-generic");
  const Vec current = compatibility_character(tau, lambda);
  Vec e(zeta.size());
  for (size_t j = 0; j < e.size(); ++j) e[j] = zeta[j] - current[j];
  const auto d = solve_p_minus_pi(e, p);
  if (!d) throw CompatibilityError("zeta is not congruent to the type's central character mod (p - pi)");
  TameType out = omega_twist(tau, *d, p);
  if (!is_generic(out, 0, p)) throw InvariantError("twisted presentation left the base alcove");
  if (compatibility_character(out, lambda) != zeta) throw InvariantError("twisted presentation missed the requested character");
  return out;
}

}  // namespace awbm
