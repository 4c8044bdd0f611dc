#pragma once

#include <vector>

#include "awbm/modp_flag.hpp"

namespace awbm {

// F_p or F_{p^2} = F_p[sqrt r] for the least non-residue r.
class FiniteField {
 public:
  struct Elem {
    Int a = 0;  // rational part
    Int b = 0;  // coefficient of sqrt(r)
    bool operator==(const Elem&) const = default;
  };

  FiniteField() = default;
  FiniteField(Int p, int degree);

  Int prime() const { return p_; }
  int degree() const { return degree_; }
  Int nonresidue() const { return r_; }

  Elem zero() const { return {}; }
  Elem one() const { return {1, 0}; }
  Elem from_int(Int x) const { return {mod_pos(x, p_), 0}; }
  Elem make(Int a, Int b) const;
  bool is_zero(const Elem& x) const { return x.a == 0 && x.b == 0; }

  Elem add(const Elem& x, const Elem& y) const;
  Elem sub(const Elem& x, const Elem& y) const;
  Elem neg(const Elem& x) const;
  Elem mul(const Elem& x, const Elem& y) const;
  Elem inv(const Elem& x) const;
  Elem frobenius(const Elem& x) const;  // x -> x^p

  bool operator==(const FiniteField&) const = default;

 private:
  Int p_ = 0;
  int degree_ = 1;
  Int r_ = 0;
};

using Fq = FiniteField::Elem;

// A power series sum_{e >= low} c_e v^e known modulo v^prec.
class Series {
 public:
  Series() = default;
  Series(FiniteField field, Int low, Int prec);  // zero with the given window
  static Series constant(FiniteField field, const Fq& c, Int prec);
  static Series monomial(FiniteField field, const Fq& c, Int exp, Int prec);

  const FiniteField& field() const { return field_; }
  Int low() const { return low_; }
  Int precision() const { return prec_; }
  Fq coeff(Int e) const;  // zero below low; e must be < precision
  void set(Int e, const Fq& c);
  // Lowest exponent with a nonzero coefficient, or precision when none is known.
  Int valuation() const;
  bool known_zero() const { return valuation() >= prec_; }

  Series truncated(Int prec) const;
  Series with_low(Int low) const;  // drops known-zero coefficients below the new low
  Series shifted(Int k) const;     // times v^k
  Series phi() const;              // v -> v^p and x -> x^p
  Series inverse() const;          // needs the valuation to be known
  Series neg() const;

  friend Series operator+(const Series& a, const Series& b);
  friend Series operator-(const Series& a, const Series& b);
  friend Series operator*(const Series& a, const Series& b);
  // Equal on the common window of known coefficients.
  bool agrees(const Series& o) const;

 private:
  FiniteField field_;
  Int low_ = 0;
  Int prec_ = 0;
  std::vector<Fq> c_;  // exponents low .. prec - 1
};

class SeriesMatrix {
 public:
  SeriesMatrix() = default;
  SeriesMatrix(int n, FiniteField field, Int prec);  // zero
  static SeriesMatrix identity(int n, FiniteField field, Int prec);
  static SeriesMatrix from_laurent(const LaurentMatrix& m, Int prec);
  // P_w v^y, known exactly to the given precision.
  static SeriesMatrix monomial_matrix(const Perm& w, const Vec& y, FiniteField field, Int prec);

  int size() const { return n_; }
  const FiniteField& field() const { return field_; }
  const Series& operator()(int i, int j) const { return e_[index(i, j)]; }
  Series& at(int i, int j) { return e_[index(i, j)]; }
  Int precision() const;
  Int valuation() const;

  SeriesMatrix truncated(Int prec) const;
  SeriesMatrix integral() const;  // throws IntegralityError if a known negative-exponent term survives
  SeriesMatrix phi() const;
  SeriesMatrix inverse() const;
  Series determinant() const;

  friend SeriesMatrix operator+(const SeriesMatrix& a, const SeriesMatrix& b);
  friend SeriesMatrix operator-(const SeriesMatrix& a, const SeriesMatrix& b);
  friend SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b);
  bool agrees(const SeriesMatrix& o) const;

  bool is_integral() const;
  bool divisible_by(Int k) const;       // every entry in v^k F[[v]]
  bool congruent_one_mod(Int k) const;  // minus identity divisible by v^k
  bool in_iwahori() const;              // integral, upper triangular mod v, unit diagonal mod v
  bool in_iwahori_one() const;          // integral, upper unipotent mod v
  bool upper_mod_v() const;             // integral and upper triangular mod v

 private:
  size_t index(int i, int j) const { return static_cast<size_t>(i * n_ + j); }
  int n_ = 0;
  FiniteField field_;
  std::vector<Series> e_;
};

// Ad(P_w v^y)(Y) = P_w v^y Y v^{-y} P_w^{-1}.
SeriesMatrix conjugate_monomial(const SeriesMatrix& y_mat, const Perm& w, const Vec& y);

// Per-embedding twist elements s_j^{-1} v^{mu_j + eta}.
struct TwistData {
  std::vector<Perm> s;
  WeightTuple mu;

  int embeddings() const { return static_cast<int>(s.size()); }
  // Largest m with m < <mu_j + eta, alpha> < p - m for every positive root and j, or -1.
  Int deepness(Int p) const;
};

// Ad(s_j^{-1} v^{mu_j + eta})(phi(Y)), at the precision it is determined to.
SeriesMatrix frobenius_twist(const SeriesMatrix& y_mat, int j, const TwistData& twist);

// A'_j = I_j A_j Ad(s_j^{-1} v^{mu_j + eta})(phi(I_{j-1})^{-1}).
std::vector<SeriesMatrix> change_of_basis(const std::vector<SeriesMatrix>& a, const std::vector<SeriesMatrix>& i_mats,
                                          const TwistData& twist);

struct StraightenResult {
  std::vector<SeriesMatrix> gauge;  // I_j in Iw_1, known mod v^M
  int iterations = 0;
};

// Solves X_j A_j z_j = I_j A_j z_j phi(I_{j-1})^{-1} mod v^M for I in Iw_1.
StraightenResult straighten(const std::vector<SeriesMatrix>& a, const std::vector<SeriesMatrix>& x, const WeylTuple& z,
                            Int h, Int precision = 40);
// The inverse direction: X_j = I_j A_j Ad(z_j)(phi(I_{j-1})^{-1}) A_j^{-1}, truncated to v^M.
std::vector<SeriesMatrix> gauge_to_left(const std::vector<SeriesMatrix>& a, const std::vector<SeriesMatrix>& i_mats,
                                        const WeylTuple& z, Int precision);

struct ShapeData {
  WeylTuple shape;         // star(w(rho_bar)) star(w(tau))^{-1}
  WeylTuple w_rhobar_tau;  // w(tau)^{-1} w(rho_bar)

  // shape in Adm^vee(lambda) for every embedding.
  bool admissible_for(const WeightTuple& lambda) const;
  // w(rho_bar, tau) in Adm(lambda + eta) for every embedding.
  bool relative_admissible(const WeightTuple& lambda) const;
};

ShapeData shape_semisimple(const TameType& rho_bar, const TameType& tau);

}  // namespace awbm
