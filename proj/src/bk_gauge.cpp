#include "awbm/bk_gauge.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "awbm/errors.hpp"

namespace awbm {

// ---- FiniteField ---------------------------------------------------------

namespace {

Int mul_mod(Int a, Int b, Int p) { return static_cast<Int>((static_cast<__int128>(a) * b) % p); }

Int pow_mod(Int a, Int e, Int p) {
  Int r = 1 % p;
  a = mod_pos(a, p);
  while (e > 0) {
    if (e & 1) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

bool is_prime(Int p) {
  if (p < 2) return false;
  for (Int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

FiniteField::FiniteField(Int p, int degree) : p_(p), degree_(degree) {
  if (!is_prime(p)) throw ArgumentError("field characteristic " + std::to_string(p) + " is not prime");
  if (degree != 1 && degree != 2) throw ArgumentError("only F_p and F_{p^2} are supported");
  if (degree == 2) {
    if (p == 2) throw ArgumentError("F_4 is not supported");
    for (Int r = 2; r < p; ++r)
      if (pow_mod(r, (p - 1) / 2, p) == p - 1) {
        r_ = r;
        break;
      }
  }
}

Fq FiniteField::make(Int a, Int b) const {
  if (degree_ == 1 && mod_pos(b, p_) != 0) throw ArgumentError("F_p element with an irrational part");
  return {mod_pos(a, p_), mod_pos(b, p_)};
}

Fq FiniteField::add(const Fq& x, const Fq& y) const { return {(x.a + y.a) % p_, (x.b + y.b) % p_}; }

Fq FiniteField::sub(const Fq& x, const Fq& y) const { return {mod_pos(x.a - y.a, p_), mod_pos(x.b - y.b, p_)}; }

Fq FiniteField::neg(const Fq& x) const { return {mod_pos(-x.a, p_), mod_pos(-x.b, p_)}; }

Fq FiniteField::mul(const Fq& x, const Fq& y) const {
  if (degree_ == 1) return {mul_mod(x.a, y.a, p_), 0};
  const Int a = (mul_mod(x.a, y.a, p_) + mul_mod(r_, mul_mod(x.b, y.b, p_), p_)) % p_;
  const Int b = (mul_mod(x.a, y.b, p_) + mul_mod(x.b, y.a, p_)) % p_;
  return {a, b};
}

Fq FiniteField::inv(const Fq& x) const {
  if (is_zero(x)) throw ArgumentError("inverse of zero in the coefficient field");
  if (degree_ == 1) return {mod_inverse(x.a, p_), 0};
  // (a + b s)^{-1} = (a - b s) / (a^2 - r b^2)
  const Int norm = mod_pos(mul_mod(x.a, x.a, p_) - mul_mod(r_, mul_mod(x.b, x.b, p_), p_), p_);
  const Int ni = mod_inverse(norm, p_);
  return {mul_mod(x.a, ni, p_), mul_mod(mod_pos(-x.b, p_), ni, p_)};
}

Fq FiniteField::frobenius(const Fq& x) const { return {x.a, mod_pos(-x.b, p_)}; }

// ---- Series --------------------------------------------------------------

Series::Series(FiniteField field, Int low, Int prec) : field_(field), low_(std::min(low, prec)), prec_(prec) {
  c_.assign(static_cast<size_t>(prec_ - low_), field_.zero());
}

Series Series::constant(FiniteField field, const Fq& c, Int prec) { return monomial(field, c, 0, prec); }

Series Series::monomial(FiniteField field, const Fq& c, Int exp, Int prec) {
  Series s(field, std::min<Int>(exp, 0), prec);
  if (exp < prec) s.set(exp, c);
  return s;
}

Fq Series::coeff(Int e) const {
  if (e >= prec_) throw ArgumentError("coefficient of v^" + std::to_string(e) + " is beyond the known precision");
  if (e < low_) return field_.zero();
  return c_[static_cast<size_t>(e - low_)];
}

void Series::set(Int e, const Fq& c) {
  if (e >= prec_) throw ArgumentError("cannot set a coefficient beyond the known precision");
  if (e < low_) {
    c_.insert(c_.begin(), static_cast<size_t>(low_ - e), field_.zero());
    low_ = e;
  }
  c_[static_cast<size_t>(e - low_)] = c;
}

Int Series::valuation() const {
  for (size_t k = 0; k < c_.size(); ++k)
    if (!field_.is_zero(c_[k])) return low_ + static_cast<Int>(k);
  return prec_;
}

Series Series::truncated(Int prec) const {
  if (prec >= prec_) return *this;
  Series out(field_, std::min(low_, prec), prec);
  for (Int e = out.low_; e < prec; ++e) out.c_[static_cast<size_t>(e - out.low_)] = coeff(e);
  return out;
}

Series Series::with_low(Int low) const {
  if (low <= low_) return *this;
  if (valuation() < low) throw IntegralityError("series has a nonzero term below v^" + std::to_string(low));
  Series out(field_, low, prec_);
  for (Int e = out.low_; e < prec_; ++e) out.c_[static_cast<size_t>(e - out.low_)] = coeff(e);
  return out;
}

Series Series::shifted(Int k) const {
  Series out = *this;
  out.low_ += k;
  out.prec_ += k;
  return out;
}

Series Series::phi() const {
  const Int p = field_.prime();
  Series out(field_, low_ * p, prec_ * p);
  for (Int e = low_; e < prec_; ++e) out.c_[static_cast<size_t>(e * p - out.low_)] = field_.frobenius(coeff(e));
  return out;
}

Series Series::neg() const {
  Series out = *this;
  for (auto& c : out.c_) c = field_.neg(c);
  return out;
}

Series Series::inverse() const {
  const Int v = valuation();
  if (v >= prec_) throw ArgumentError("cannot invert a series whose valuation is not determined");
  const Int n = prec_ - v;  // known unit coefficients
  std::vector<Fq> u(static_cast<size_t>(n)), b(static_cast<size_t>(n), field_.zero());
  for (Int k = 0; k < n; ++k) u[static_cast<size_t>(k)] = coeff(v + k);
  const Fq u0i = field_.inv(u[0]);
  b[0] = u0i;
  for (Int k = 1; k < n; ++k) {
    Fq acc = field_.zero();
    for (Int i = 1; i <= k; ++i) acc = field_.add(acc, field_.mul(u[static_cast<size_t>(i)], b[static_cast<size_t>(k - i)]));
    b[static_cast<size_t>(k)] = field_.neg(field_.mul(u0i, acc));
  }
  Series out(field_, -v, n - v);
  for (Int k = 0; k < n; ++k) out.c_[static_cast<size_t>(k)] = b[static_cast<size_t>(k)];
  return out;
}

Series operator+(const Series& a, const Series& b) {
  Series out(a.field_, std::min(a.low_, b.low_), std::min(a.prec_, b.prec_));
  for (Int e = out.low_; e < out.prec_; ++e)
    out.c_[static_cast<size_t>(e - out.low_)] = a.field_.add(a.coeff(e), b.coeff(e));
  return out;
}

Series operator-(const Series& a, const Series& b) { return a + b.neg(); }

Series operator*(const Series& a, const Series& b) {
  const Int va = a.valuation(), vb = b.valuation();
  const Int prec = std::min(a.prec_ + vb, b.prec_ + va);
  Series out(a.field_, va + vb, prec);
  const FiniteField& F = a.field_;
  for (Int ea = va; ea < a.prec_; ++ea) {
    const Fq ca = a.coeff(ea);
    if (F.is_zero(ca)) continue;
    for (Int eb = vb; eb < b.prec_ && ea + eb < prec; ++eb) {
      const Fq cb = b.coeff(eb);
      if (F.is_zero(cb)) continue;
      auto& slot = out.c_[static_cast<size_t>(ea + eb - out.low_)];
      slot = F.add(slot, F.mul(ca, cb));
    }
  }
  return out;
}

bool Series::agrees(const Series& o) const {
  const Int top = std::min(prec_, o.prec_);
  for (Int e = std::min(low_, o.low_); e < top; ++e)
    if (!(coeff(e) == o.coeff(e))) return false;
  return true;
}

// ---- SeriesMatrix --------------------------------------------------------

SeriesMatrix::SeriesMatrix(int n, FiniteField field, Int prec)
    : n_(n), field_(field), e_(static_cast<size_t>(n * n), Series(field, 0, prec)) {}

SeriesMatrix SeriesMatrix::identity(int n, FiniteField field, Int prec) {
  SeriesMatrix m(n, field, prec);
  for (int i = 0; i < n; ++i) m.at(i, i) = Series::constant(field, field.one(), prec);
  return m;
}

SeriesMatrix SeriesMatrix::from_laurent(const LaurentMatrix& lm, Int prec) {
  const FiniteField field(lm.prime(), 1);
  SeriesMatrix m(lm.size(), field, prec);
  for (int i = 0; i < lm.size(); ++i)
    for (int j = 0; j < lm.size(); ++j)
      for (const auto& [e, c] : lm(i, j).terms())
        if (e < prec) m.at(i, j).set(e, field.from_int(c));
  return m;
}

SeriesMatrix SeriesMatrix::monomial_matrix(const Perm& w, const Vec& y, FiniteField field, Int prec) {
  const int n = w.size();
  SeriesMatrix m(n, field, prec);
  for (int j = 0; j < n; ++j) m.at(w(j), j) = Series::monomial(field, field.one(), y[static_cast<size_t>(j)], prec);
  return m;
}

Int SeriesMatrix::precision() const {
  Int out = std::numeric_limits<Int>::max();
  for (const auto& s : e_) out = std::min(out, s.precision());
  return out;
}

Int SeriesMatrix::valuation() const {
  Int out = std::numeric_limits<Int>::max();
  for (const auto& s : e_) out = std::min(out, s.valuation());
  return out;
}

SeriesMatrix SeriesMatrix::truncated(Int prec) const {
  SeriesMatrix out = *this;
  for (auto& s : out.e_) s = s.truncated(prec);
  return out;
}

SeriesMatrix SeriesMatrix::integral() const {
  SeriesMatrix out = *this;
  for (auto& s : out.e_) s = s.with_low(0);
  return out;
}

SeriesMatrix SeriesMatrix::phi() const {
  SeriesMatrix out = *this;
  for (auto& s : out.e_) s = s.phi();
  return out;
}

namespace {

Series det_rec(const SeriesMatrix& m, std::vector<int>& rows, std::vector<int>& cols) {
  if (rows.size() == 1) return m(rows[0], cols[0]);
  const int r = rows.front();
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  Series acc;
  bool first = true;
  for (size_t k = 0; k < cols.size(); ++k) {
    const Series& entry = m(r, cols[k]);
    std::vector<int> sub_cols = cols;
    sub_cols.erase(sub_cols.begin() + static_cast<std::ptrdiff_t>(k));
    Series term = entry * det_rec(m, sub_rows, sub_cols);
    if (k % 2 == 1) term = term.neg();
    acc = first ? term : acc + term;
    first = false;
  }
  return acc;
}

}  // namespace

Series SeriesMatrix::determinant() const {
  if (n_ == 0) throw ArgumentError("determinant of an empty matrix");
  std::vector<int> rows(static_cast<size_t>(n_)), cols(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i) rows[static_cast<size_t>(i)] = cols[static_cast<size_t>(i)] = i;
  return det_rec(*this, rows, cols);
}

SeriesMatrix SeriesMatrix::inverse() const {
  const Series dinv = determinant().inverse();
  SeriesMatrix out(n_, field_, 0);
  if (n_ == 1) {
    out.at(0, 0) = dinv;
    return out;
  }
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      // adj(i, j) = (-1)^{i+j} minor(j, i)
      std::vector<int> rows, cols;
      for (int k = 0; k < n_; ++k) {
        if (k != j) rows.push_back(k);
        if (k != i) cols.push_back(k);
      }
      Series minor = det_rec(*this, rows, cols);
      if ((i + j) % 2 == 1) minor = minor.neg();
      out.at(i, j) = minor * dinv;
    }
  return out;
}

SeriesMatrix operator+(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.n_ != b.n_) throw ContextError("matrix size mismatch");
  SeriesMatrix out = a;
  for (size_t k = 0; k < out.e_.size(); ++k) out.e_[k] = a.e_[k] + b.e_[k];
  return out;
}

SeriesMatrix operator-(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.n_ != b.n_) throw ContextError("matrix size mismatch");
  SeriesMatrix out = a;
  for (size_t k = 0; k < out.e_.size(); ++k) out.e_[k] = a.e_[k] - b.e_[k];
  return out;
}

SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.n_ != b.n_) throw ContextError("matrix size mismatch");
  if (!(a.field_ == b.field_)) throw ContextError("coefficient field mismatch");
  SeriesMatrix out = a;
  for (int i = 0; i < a.n_; ++i)
    for (int j = 0; j < a.n_; ++j) {
      Series acc = a(i, 0) * b(0, j);
      for (int k = 1; k < a.n_; ++k) acc = acc + a(i, k) * b(k, j);
      out.at(i, j) = acc;
    }
  return out;
}

bool SeriesMatrix::agrees(const SeriesMatrix& o) const {
  if (n_ != o.n_) return false;
  for (size_t k = 0; k < e_.size(); ++k)
    if (!e_[k].agrees(o.e_[k])) return false;
  return true;
}

bool SeriesMatrix::is_integral() const { return valuation() >= 0; }

bool SeriesMatrix::divisible_by(Int k) const { return valuation() >= k; }

bool SeriesMatrix::congruent_one_mod(Int k) const {
  return (*this - identity(n_, field_, precision())).divisible_by(k);
}

bool SeriesMatrix::upper_mod_v() const {
  if (!is_integral() || precision() < 1) return false;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < i; ++j)
      if ((*this)(i, j).valuation() < 1) return false;
  return true;
}

bool SeriesMatrix::in_iwahori() const {
  if (!upper_mod_v()) return false;
  for (int i = 0; i < n_; ++i)
    if (field_.is_zero((*this)(i, i).coeff(0))) return false;
  return true;
}

bool SeriesMatrix::in_iwahori_one() const {
  if (!upper_mod_v()) return false;
  for (int i = 0; i < n_; ++i)
    if (!((*this)(i, i).coeff(0) == field_.one())) return false;
  return true;
}

SeriesMatrix conjugate_monomial(const SeriesMatrix& y_mat, const Perm& w, const Vec& y) {
  const int n = y_mat.size();
  if (w.size() != n || static_cast<int>(y.size()) != n) throw ContextError("conjugating element has the wrong rank");
  SeriesMatrix out(n, y_mat.field(), 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      out.at(w(a), w(b)) = y_mat(a, b).shifted(y[static_cast<size_t>(a)] - y[static_cast<size_t>(b)]);
  return out;
}

// ---- twists and gauge ----------------------------------------------------

Int TwistData::deepness(Int p) const {
  Int m = std::numeric_limits<Int>::max();
  for (const auto& mu_j : mu) {
    const Vec y = [&] {
      Vec out = mu_j;
      const Vec e = eta_vec(static_cast<int>(mu_j.size()));
      for (size_t i = 0; i < out.size(); ++i) out[i] += e[i];
      return out;
    }();
    for (size_t a = 0; a < y.size(); ++a)
      for (size_t b = a + 1; b < y.size(); ++b) {
        const Int d = y[a] - y[b];
        m = std::min({m, d - 1, p - d - 1});
      }
  }
  return std::max<Int>(m, -1);
}

SeriesMatrix frobenius_twist(const SeriesMatrix& y_mat, int j, const TwistData& twist) {
  if (j < 0 || j >= twist.embeddings() || twist.mu.size() != twist.s.size())
    throw ContextError("embedding index out of range for the twist data");
  const Vec& mu = twist.mu[static_cast<size_t>(j)];
  Vec y = mu;
  const Vec e = eta_vec(static_cast<int>(mu.size()));
  for (size_t i = 0; i < y.size(); ++i) y[i] += e[i];
  return conjugate_monomial(y_mat.phi(), twist.s[static_cast<size_t>(j)].inverse(), y).integral();
}

std::vector<SeriesMatrix> change_of_basis(const std::vector<SeriesMatrix>& a, const std::vector<SeriesMatrix>& i_mats,
                                          const TwistData& twist) {
  const size_t f = a.size();
  if (f == 0 || i_mats.size() != f || static_cast<size_t>(twist.embeddings()) != f)
    throw ContextError("embedding counts disagree");
  for (const auto& m : i_mats)
    if (!m.in_iwahori()) throw ArgumentError("change of basis matrix is not in the Iwahori subgroup");
  std::vector<SeriesMatrix> out;
  for (size_t j = 0; j < f; ++j) {
    const size_t prev = (j + f - 1) % f;
    out.push_back(i_mats[j] * a[j] * frobenius_twist(i_mats[prev].inverse(), static_cast<int>(j), twist));
  }
  return out;
}

namespace {

struct GaugeSetup {
  size_t f = 0;
  std::vector<SeriesMatrix> a_inv;
  std::vector<Perm> w;
  std::vector<Vec> y;
};

GaugeSetup prepare(const std::vector<SeriesMatrix>& a, const WeylTuple& z) {
  GaugeSetup g;
  g.f = a.size();
  if (g.f == 0 || z.size() != g.f) throw ContextError("embedding counts disagree");
  for (size_t j = 0; j < g.f; ++j) {
    if (z[j].rank() != a[j].size()) throw ContextError("rank mismatch between A and the twist");
    g.a_inv.push_back(a[j].inverse());
    g.w.push_back(z[j].w);
    g.y.push_back(z[j].nu_right());
  }
  return g;
}

// X_j A_j Ad(z_j)(phi(J_{j-1})) A_j^{-1}
SeriesMatrix step(const SeriesMatrix& x, const SeriesMatrix& a, const SeriesMatrix& a_inv, const SeriesMatrix& prev,
                  const Perm& w, const Vec& y) {
  return x * a * conjugate_monomial(prev.phi(), w, y).integral() * a_inv;
}

}  // namespace

StraightenResult straighten(const std::vector<SeriesMatrix>& a, const std::vector<SeriesMatrix>& x, const WeylTuple& z,
                            Int h, Int precision) {
  if (x.size() != a.size()) throw ContextError("embedding counts disagree");
  if (h < 0) throw ArgumentError("height must be non-negative");
  if (precision < 1) throw ArgumentError("precision must be positive");
  GaugeSetup g = prepare(a, z);
  const FiniteField field = a.front().field();
  const Int p = field.prime();
  const int n = a.front().size();

  for (size_t j = 0; j < g.f; ++j) {
    const Vec& y = g.y[j];
    for (size_t s = 0; s < y.size(); ++s)
      for (size_t t = s + 1; t < y.size(); ++t) {
        const Int d = y[s] - y[t];
        if (!(h + 1 < d && d < p - h - 1))
          throw ConvergenceError("twist is not " + std::to_string(h + 1) + "-deep; the gauge iteration need not contract");
      }
    if (!a[j].is_integral()) throw ArgumentError("A is not integral");
    if (g.a_inv[j].valuation() < -h) throw ArgumentError("A has height exceeding " + std::to_string(h));
    if (!x[j].in_iwahori_one()) throw ArgumentError("X is not in the pro-unipotent Iwahori subgroup");
  }

  std::vector<SeriesMatrix> cur(g.f, SeriesMatrix::identity(n, field, precision));
  const Int cap = (precision + p - 1) / p + 4;
  for (int iter = 1; iter <= cap; ++iter) {
    std::vector<SeriesMatrix> next;
    bool stable = true;
    for (size_t j = 0; j < g.f; ++j) {
      const SeriesMatrix& prev = cur[(j + g.f - 1) % g.f];
      SeriesMatrix nj = step(x[j], a[j], g.a_inv[j], prev, g.w[j], g.y[j]);
      if (nj.precision() < precision)
        throw ArgumentError("inputs are not known to enough precision for v^" + std::to_string(precision));
      nj = nj.truncated(precision).integral();
      if (!nj.agrees(cur[j])) stable = false;
      next.push_back(std::move(nj));
    }
    cur = std::move(next);
    if (stable) return {cur, iter};
  }
  throw ConvergenceError("gauge iteration did not stabilize within " + std::to_string(cap) + " steps");
}

std::vector<SeriesMatrix> gauge_to_left(const std::vector<SeriesMatrix>& a, const std::vector<SeriesMatrix>& i_mats,
                                        const WeylTuple& z, Int precision) {
  if (i_mats.size() != a.size()) throw ContextError("embedding counts disagree");
  GaugeSetup g = prepare(a, z);
  std::vector<SeriesMatrix> out;
  for (size_t j = 0; j < g.f; ++j) {
    const SeriesMatrix& prev = i_mats[(j + g.f - 1) % g.f];
    SeriesMatrix xj = i_mats[j] * a[j] * conjugate_monomial(prev.inverse().phi(), g.w[j], g.y[j]) * g.a_inv[j];
    if (xj.precision() < precision)
      throw ArgumentError("inputs are not known to enough precision for v^" + std::to_string(precision));
    out.push_back(xj.truncated(precision));
  }
  return out;
}

// ---- shapes --------------------------------------------------------------

bool ShapeData::admissible_for(const WeightTuple& lambda) const {
  if (lambda.size() != shape.size()) throw ContextError("weight tuple has the wrong number of embeddings");
  // Adm^vee(lambda) is the star image of Adm(lambda), and star is an involution.
  for (size_t j = 0; j < shape.size(); ++j)
    if (!in_adm(star(shape[j]), lambda[j])) return false;
  return true;
}

bool ShapeData::relative_admissible(const WeightTuple& lambda) const {
  if (lambda.size() != w_rhobar_tau.size()) throw ContextError("weight tuple has the wrong number of embeddings");
  for (size_t j = 0; j < w_rhobar_tau.size(); ++j) {
    Vec le = lambda[j];
    const Vec e = eta_vec(static_cast<int>(le.size()));
    for (size_t i = 0; i < le.size(); ++i) le[i] += e[i];
    if (!in_adm(w_rhobar_tau[j], le)) return false;
  }
  return true;
}

ShapeData shape_semisimple(const TameType& rho_bar, const TameType& tau) {
  ShapeData out;
  out.w_rhobar_tau = awbm::w_rhobar_tau(rho_bar, tau);
  const WeylTuple wr = rho_bar.w_tilde_star(), wt = tau.w_tilde_star();
  for (size_t j = 0; j < wr.size(); ++j) out.shape.push_back(wr[j] * inverse(wt[j]));
  return out;
}

}  // namespace awbm
