#pragma once

#include <map>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "awbm/affine_weyl.hpp"

namespace awbm {

using BigInt = boost::multiprecision::cpp_int;
using WeightTuple = std::vector<Vec>;  // one weight of length n per embedding

// Lowest alcove presentation (w1, omega) of a Serre weight.
struct SerreWeight {
  WeylTuple w1;
  WeightTuple omega;

  int rank() const { return w1.empty() ? 0 : w1.front().rank(); }
  int embeddings() const { return static_cast<int>(w1.size()); }
  auto operator<=>(const SerreWeight&) const = default;
};

// p-dot action of t_mu o w: lambda -> w(lambda + eta) + p mu - eta.
Vec dot_action(const WeylElement& a, const Vec& lambda, Int p);

// kappa_j = w1_{j-1} . (omega_j - eta).
WeightTuple serre_weight(const SerreWeight& lap, Int p);
// zeta_j = deg(t_{omega_j - eta} w1_j).
Vec central_character(const SerreWeight& lap);
// Representative with deg(w1_j) in [1-n, 0]; kappa moves by (p - pi) X0 only.
SerreWeight canonicalize(SerreWeight lap);
// The presentation with central character zeta of the weight F(kappa).
SerreWeight lap_of(const WeightTuple& kappa, const Vec& zeta, Int p);
// Largest m with omega - eta m-deep, or -1 when not 0-deep.
Int depth(const SerreWeight& lap, Int p);

// Solves p d_j - d_{j+1} = e_j over the integers; nullopt if no integral solution.
std::optional<Vec> solve_p_minus_pi(const Vec& e, Int p);

// Integer polynomial in n variables.
class Polynomial {
 public:
  using Monomial = std::vector<int>;

  Polynomial() = default;
  explicit Polynomial(int vars) : vars_(vars) {}
  static Polynomial constant(int vars, const BigInt& c);
  static Polynomial variable(int vars, int i);

  int vars() const { return vars_; }
  const std::map<Monomial, BigInt>& terms() const { return terms_; }
  void add_term(const Monomial& m, const BigInt& c);

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  // f(t - shift).
  Polynomial shifted(const Vec& shift) const;
  BigInt evaluate(const Vec& point) const;
  Int evaluate_mod(const Vec& point, Int p) const;
  int total_degree() const;

  bool operator==(const Polynomial&) const = default;

 private:
  int vars_ = 0;
  std::map<Monomial, BigInt> terms_;
};

// prod_i prod_{j=1..m} (X_i - X_{i+1} - j), with X_{n+1} = X_1.
Polynomial build_pm(int n, int m);
// Lattice points of the convex hull of the Weyl orbit of a dominant weight.
std::vector<Vec> conv_points(const Vec& omega);
bool in_conv(const Vec& nu, const Vec& omega);
// prod over nu in conv(omega) of f(t - nu).
Polynomial superscript(const Polynomial& f, const Vec& omega);

// m < |<mu + eta, alpha> + p k| for all positive alpha and all k, per embedding.
bool generic_m(const WeightTuple& mu, Int m, Int p);
// P(mu_j) is nonzero mod p for every embedding.
bool generic_poly(const WeightTuple& mu, const Polynomial& poly, Int p);

}  // namespace awbm
