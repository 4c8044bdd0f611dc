#pragma once

#include <map>
#include <optional>
#include <vector>

#include "awbm/weight_sets.hpp"

namespace awbm {

// Element of F_p[v, 1/v]; coefficients kept in [0, p), zero terms dropped.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(Int p);
  static LaurentPoly constant(Int p, Int c);
  static LaurentPoly monomial(Int p, Int c, Int exp);

  Int prime() const { return p_; }
  Int coeff(Int exp) const;
  const std::map<Int, Int>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  // Lowest / highest exponent; requires a nonzero polynomial.
  Int low() const;
  Int high() const;

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly scaled(Int c) const;
  LaurentPoly shifted(Int k) const;  // times v^k
  LaurentPoly derivative() const;    // d/dv
  bool operator==(const LaurentPoly& o) const = default;

 private:
  void set(Int exp, Int c);
  Int p_ = 0;
  std::map<Int, Int> terms_;
};

Int mod_inverse(Int a, Int p);

class LaurentMatrix {
 public:
  LaurentMatrix() = default;
  LaurentMatrix(int n, Int p);  // zero matrix
  static LaurentMatrix identity(int n, Int p);
  static LaurentMatrix diagonal(const Vec& d, Int p);
  // P_w with P_w e_j = e_{w(j)}.
  static LaurentMatrix permutation(const Perm& w, Int p);
  // v^mu as a diagonal matrix.
  static LaurentMatrix torus(const Vec& mu, Int p);
  // The matrix representing the dual element w~* for w~ = (w, nu): P_{w^{-1}} v^nu, the image of star(w~).
  static LaurentMatrix torus_point(const WeylElement& w_tilde, Int p);

  int size() const { return n_; }
  Int prime() const { return p_; }
  const LaurentPoly& operator()(int i, int j) const { return e_[index(i, j)]; }
  LaurentPoly& at(int i, int j) { return e_[index(i, j)]; }

  friend LaurentMatrix operator+(const LaurentMatrix& a, const LaurentMatrix& b);
  friend LaurentMatrix operator-(const LaurentMatrix& a, const LaurentMatrix& b);
  friend LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b);
  LaurentMatrix derivative() const;
  LaurentMatrix shifted(Int k) const;
  bool operator==(const LaurentMatrix& o) const = default;

  LaurentPoly determinant() const;
  // Adjugate over det; throws ArgumentError unless det = unit * v^k.
  LaurentMatrix inverse() const;

  bool is_polynomial() const;
  // Polynomial entries with the strictly lower part divisible by v.
  bool in_lie_iwahori() const;

 private:
  size_t index(int i, int j) const { return static_cast<size_t>(i * n_ + j); }
  int n_ = 0;
  Int p_ = 0;
  std::vector<LaurentPoly> e_;
};

// The root e_i - e_j (0-based); the root group sits at matrix position (i, j).
struct Root {
  int i = 0;
  int j = 0;
  bool positive() const { return i < j; }
  Root negated() const { return {j, i}; }
  auto operator<=>(const Root&) const = default;
};

struct CellGeometry {
  std::vector<Root> support;     // roots of N_{w~*}, in solving order
  std::map<Root, Int> degrees;   // support root -> degree of its polynomial
  int dim = 0;
  Perm witness;                  // least w with w^{-1} w~ dominant
  int critical_strips = 0;       // positive roots whose strip contains w~(A0)
};

CellGeometry cell_geometry(const WeylElement& w_tilde);

struct ChartEntry {
  bool v_prefactor = false;  // i > j
  Int low = 0;
  Int high = 0;              // empty window when high < low
  bool monic = false;        // top coefficient fixed to 1
};

struct ChartTemplate {
  int n = 0;
  Perm w;
  Vec nu;
  Int h = 0;
  std::vector<ChartEntry> entries;  // row-major
  int det_sign = 1;
  Int det_degree = 0;
  bool empty = false;

  const ChartEntry& at(int i, int j) const { return entries[static_cast<size_t>(i * n + j)]; }
  // Number of coefficients not fixed by the monic constraint.
  int free_coefficients() const;
  // Specialize at t = 0: coefficients listed entry by entry, low to high degree, monic ones skipped.
  LaurentMatrix instantiate(const std::vector<Int>& coeffs, Int p) const;
};

// z_tilde read as w t_nu.
ChartTemplate chart_template(const WeylElement& z_tilde, Int h);

struct MonodromyCell {
  LaurentMatrix a;  // w~* N
  LaurentMatrix n;
  std::map<Root, std::vector<Int>> coefficients;  // low to high degree
};

// Solves the nabla condition on the open cell of w~*; free_values gives each support root's top coefficient.
MonodromyCell monodromy_solve(const WeylElement& w_tilde, const Vec& a_bar, const std::map<Root, Int>& free_values,
                              Int p);

bool verify_nabla(const LaurentMatrix& a, const Vec& a_bar);

// m-genericity of a mod p tuple: a_i - a_j avoids -m..m.
bool modp_generic(const Vec& a_bar, Int m, Int p);

struct ComponentData {
  SerreWeight label;
  std::vector<std::vector<WeylElement>> bound_fixed_points;    // per embedding
  std::vector<std::vector<WeylElement>> obvious_fixed_points;  // per embedding
  bool exactness_conditional = true;

  bool bound_contains(const WeylTuple& z) const;
};

ComponentData component_data(const WeylTuple& w1, const WeightTuple& omega, Int p, bool force = false);

std::vector<ComponentData> special_fiber_components(const WeightTuple& lambda, const TameType& tau, const Vec& zeta,
                                                    Int p, bool force = false);

}  // namespace awbm
