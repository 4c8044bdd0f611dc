#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "awbm/weights.hpp"

namespace awbm {

using BigRational = boost::multiprecision::cpp_rational;
using BigVec = std::vector<BigInt>;

enum class TypeKind { over_E, over_F };

// Lowest alcove presentation (s, mu) of a tame inertial type, one entry per embedding.
struct TameType {
  std::vector<Perm> s;
  WeightTuple mu;
  TypeKind kind = TypeKind::over_E;

  int rank() const { return s.empty() ? 0 : s.front().size(); }
  int embeddings() const { return static_cast<int>(s.size()); }
  // t_{mu_j + eta} s_j per embedding, and its star.
  WeylTuple w_tilde() const;
  WeylTuple w_tilde_star() const;

  auto operator<=>(const TameType&) const = default;
};

// Rejects translation parts in s and rank mismatches.
TameType make_type(const WeylTuple& s, const WeightTuple& mu, TypeKind kind = TypeKind::over_E);

// m < <mu + eta, alpha> < p - m for every positive root, in every embedding.
bool is_generic(const TameType& tau, Int m, Int p);

struct DescentData {
  Perm s_tau;                           // s_0 s_1 ... s_{f-1}
  int r = 1;                            // order of s_tau
  int f_prime = 1;                      // f r
  std::vector<Vec> alpha;               // f entries
  std::vector<Vec> alpha_prime;         // f' entries
  std::vector<BigVec> a_prime;          // f' entries
  std::vector<Perm> s_or;               // f' entries
  BigVec chi_exponents;                 // n entries, in [0, p^{f'} - 1)
  std::vector<std::vector<BigRational>> a_tau_exact;  // f' entries
  std::vector<Vec> a_tau_modp;          // f entries, reduced into [0, p)
};

DescentData descent_data(const TameType& tau, Int p);

// Degree of t_lambda t_{mu+eta} s (over E) or t_lambda t_mu s (over F) per embedding.
Vec compatibility_character(const TameType& tau, const WeightTuple& lambda);
bool compatible_presentation(const TameType& tau, const Vec& zeta, const WeightTuple& lambda);
// The presentation of the same type that is lambda-compatible with zeta.
TameType present_compatibly(const TameType& tau, const Vec& zeta, const WeightTuple& lambda, Int p);
// Re-presents tau through the length-zero element of the given degree in each embedding.
TameType omega_twist(const TameType& tau, const Vec& degrees, Int p);

}  // namespace awbm
