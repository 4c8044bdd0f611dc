#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "awbm/errors.hpp"

namespace awbm {

using Int = std::int64_t;
using Vec = std::vector<Int>;
using Rational = boost::rational<Int>;
using RatVec = std::vector<Rational>;

// Floor division for a positive divisor.
constexpr Int floor_div(Int a, Int b) {
  Int q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}
constexpr Int mod_pos(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

// Permutation of {0..n-1} stored as its one-line image.
class Perm {
 public:
  Perm() = default;
  explicit Perm(std::vector<int> image);

  static Perm identity(int n);
  static Perm transposition(int n, int i, int j);
  static Perm longest(int n);
  // Every permutation of size n in lexicographic order of one-line images.
  static std::vector<Perm> all(int n);

  int size() const { return static_cast<int>(image_.size()); }
  int operator()(int i) const { return image_[static_cast<size_t>(i)]; }
  const std::vector<int>& image() const { return image_; }

  Perm inverse() const;
  // (a * b)(i) = a(b(i)).
  friend Perm operator*(const Perm& a, const Perm& b);

  // Coordinate action on vectors: (w.x)_{w(i)} = x_i.
  template <class T>
  std::vector<T> act(std::span<const T> x) const {
    std::vector<T> out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[static_cast<size_t>(image_[i])] = x[i];
    return out;
  }
  template <class T>
  std::vector<T> act(const std::vector<T>& x) const {
    return act(std::span<const T>(x));
  }

  int sign() const;
  int order() const;
  bool is_identity() const;

  auto operator<=>(const Perm&) const = default;

 private:
  std::vector<int> image_;
};

// Problem-wide parameters: rank, number of embeddings, prime.
struct GroupContext {
  int n = 2;
  int f = 1;
  Int p = 0;

  GroupContext() = default;
  GroupContext(int n_, int f_, Int p_);

  Vec eta() const;                // (n-1, ..., 0)
  RatVec base_point() const;      // eta / n
  int positive_roots() const { return n * (n - 1) / 2; }
  Int h_eta() const { return n - 1; }
};

Vec eta_vec(int n);

// The element t_nu o w of the extended affine Weyl group of GL_n: x -> w(x) + nu.
struct WeylElement {
  Perm w;
  Vec nu;

  WeylElement() = default;
  WeylElement(Perm w_, Vec nu_);

  static WeylElement identity(int n);
  static WeylElement translation(Vec nu);
  static WeylElement finite(Perm w);
  // The element written w t_nu, i.e. x -> w(x + nu).
  static WeylElement from_w_then_t(const Perm& w, const Vec& nu);

  int rank() const { return w.size(); }
  Int degree() const;
  // Translation part in the w t_nu form.
  Vec nu_right() const;

  auto operator<=>(const WeylElement&) const = default;
};

using WeylTuple = std::vector<WeylElement>;

WeylElement multiply(const WeylElement& a, const WeylElement& b);
WeylElement inverse(const WeylElement& a);
inline WeylElement operator*(const WeylElement& a, const WeylElement& b) { return multiply(a, b); }

RatVec evaluate(const WeylElement& a, const RatVec& x);
// Integer affine action, used for w(0) style evaluations.
Vec apply(const WeylElement& a, const Vec& x);
// n * a(eta/n) = w(eta) + n nu; pairings with roots are differences divided by n.
Vec scaled_image(const WeylElement& a);

int length(const WeylElement& a);
WeylElement star(const WeylElement& a);
// Length and Bruhat order measured from the antidominant base alcove; star
// carries the dominant-base order onto this one.
int dual_length(const WeylElement& a);
bool dual_bruhat_leq(const WeylElement& a, const WeylElement& b);

WeylElement simple_reflection(int n, int k);  // k = 0 is the affine reflection
WeylElement longest_element(int n);
WeylElement w_h(int n);                        // w0 t_{-eta}
WeylElement omega_element(int n, Int degree);  // the length-zero element of that degree
// Affine reflection across H_{e_i - e_j, k}.
WeylElement affine_reflection(int n, int i, int j, Int k);

// Simple reflection indices s with l(s a) < l(a); reduced word a = s_{i1}...s_{il} * omega.
std::vector<int> left_descents(const WeylElement& a);
std::vector<int> reduced_word(const WeylElement& a);

bool bruhat_leq(const WeylElement& a, const WeylElement& b);
bool up_leq(const WeylElement& a, const WeylElement& b);

struct Classification {
  bool dominant = false;
  bool restricted = false;
  bool regular = false;
  bool m_small = false;
  bool m_generic = false;
};
// p == 0 leaves m_generic false.
Classification classify(const WeylElement& a, Int m, Int p = 0);
bool is_dominant(const WeylElement& a);
bool is_restricted(const WeylElement& a);
bool is_regular(const WeylElement& a);

// m < |<v, alpha> + p k| for every positive root and integer k.
bool is_deep(const Vec& v, Int m, Int p);
Int height_spread(const Vec& v);  // max - min

std::vector<WeylElement> bruhat_interval(const WeylElement& a);

enum class AdmVariant { all, regular, dual };
std::vector<WeylElement> adm(const Vec& lambda, AdmVariant variant, int jobs = 1);
bool in_adm(const WeylElement& a, const Vec& lambda);

struct AdmissiblePair {
  WeylElement w1;  // restricted
  WeylElement w2;  // dominant
  auto operator<=>(const AdmissiblePair&) const = default;
};

// Shifts both components by t_c so that deg(first) lies in [1-n, 0].
AdmissiblePair canonicalize_pair(AdmissiblePair pair);
AdmissiblePair regular_factorization(const WeylElement& a);
std::vector<AdmissiblePair> ap_enumerate(const Vec& lambda_plus_eta, int jobs = 1);
bool ap_member(const WeylElement& w1, const WeylElement& w2, const Vec& lambda);

// Representatives of the restricted elements with degree in [1-n, 0].
std::vector<WeylElement> restricted_elements(int n);
// The unique w x with w in W whose alcove is dominant.
WeylElement dominant_in_coset(const WeylElement& x);

bool is_dominant_weight(const Vec& lambda);
// Distinct permutations of a weight, in lexicographic order.
std::vector<Vec> weyl_orbit(const Vec& lambda);

// Ordering used for every emitted set: length, then one-line image, then translation.
bool canonical_less(const WeylElement& a, const WeylElement& b);
void sort_canonical(std::vector<WeylElement>& v);
bool canonical_less(const WeylTuple& a, const WeylTuple& b);

// Tuples act componentwise; pi_shift(x)_j = x_{j+1}.
WeylTuple tuple_multiply(const WeylTuple& a, const WeylTuple& b);
WeylTuple tuple_inverse(const WeylTuple& a);
int tuple_length(const WeylTuple& a);
template <class T>
std::vector<T> pi_shift(const std::vector<T>& x) {
  std::vector<T> out(x.size());
  for (size_t j = 0; j < x.size(); ++j) out[j] = x[(j + 1) % x.size()];
  return out;
}
template <class T>
std::vector<T> pi_unshift(const std::vector<T>& x) {
  std::vector<T> out(x.size());
  for (size_t j = 0; j < x.size(); ++j) out[(j + 1) % x.size()] = x[j];
  return out;
}

std::string to_string(const Perm& w);
std::string to_string(const WeylElement& a);

}  // namespace awbm
