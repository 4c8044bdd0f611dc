#include "awbm/affine_weyl.hpp"

#include <algorithm>
#include <bit>
#include <future>
#include <numeric>
#include <set>
#include <sstream>

namespace awbm {

// ---- Perm ----------------------------------------------------------------

Perm::Perm(std::vector<int> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (int v : image_) {
    if (v < 0 || v >= size() || seen[static_cast<size_t>(v)])
      throw InputError("not a permutation one-line image");
    seen[static_cast<size_t>(v)] = true;
  }
}

Perm Perm::identity(int n) {
  std::vector<int> img(static_cast<size_t>(n));
  std::iota(img.begin(), img.end(), 0);
  return Perm(std::move(img));
}

Perm Perm::transposition(int n, int i, int j) {
  auto img = identity(n).image_;
  std::swap(img[static_cast<size_t>(i)], img[static_cast<size_t>(j)]);
  return Perm(std::move(img));
}

Perm Perm::longest(int n) {
  std::vector<int> img(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) img[static_cast<size_t>(i)] = n - 1 - i;
  return Perm(std::move(img));
}

std::vector<Perm> Perm::all(int n) {
  std::vector<Perm> out;
  auto img = identity(n).image_;
  do {
    out.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

Perm Perm::inverse() const {
  std::vector<int> inv(image_.size());
  for (size_t i = 0; i < image_.size(); ++i) inv[static_cast<size_t>(image_[i])] = static_cast<int>(i);
  return Perm(std::move(inv));
}

Perm operator*(const Perm& a, const Perm& b) {
  if (a.size() != b.size()) throw ContextError("permutation sizes differ");
  std::vector<int> img(static_cast<size_t>(a.size()));
  for (int i = 0; i < a.size(); ++i) img[static_cast<size_t>(i)] = a(b(i));
  return Perm(std::move(img));
}

int Perm::sign() const {
  int inversions = 0;
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      if ((*this)(i) > (*this)(j)) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

int Perm::order() const {
  int ord = 1;
  std::vector<bool> seen(image_.size(), false);
  for (int i = 0; i < size(); ++i) {
    if (seen[static_cast<size_t>(i)]) continue;
    int len = 0;
    for (int j = i; !seen[static_cast<size_t>(j)]; j = (*this)(j)) {
      seen[static_cast<size_t>(j)] = true;
      ++len;
    }
    ord = std::lcm(ord, len);
  }
  return ord;
}

bool Perm::is_identity() const {
  for (int i = 0; i < size(); ++i)
    if ((*this)(i) != i) return false;
  return true;
}

// ---- context -------------------------------------------------------------

Vec eta_vec(int n) {
  Vec e(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) e[static_cast<size_t>(i)] = n - 1 - i;
  return e;
}

GroupContext::GroupContext(int n_, int f_, Int p_) : n(n_), f(f_), p(p_) {
  if (n < 1) throw InputError("rank must be positive");
  if (f < 1) throw InputError("number of embeddings must be positive");
  if (p < 0) throw InputError("prime must be nonnegative");
}

Vec GroupContext::eta() const { return eta_vec(n); }

RatVec GroupContext::base_point() const {
  RatVec x;
  for (Int e : eta()) x.emplace_back(e, n);
  return x;
}

// ---- elements ------------------------------------------------------------

WeylElement::WeylElement(Perm w_, Vec nu_) : w(std::move(w_)), nu(std::move(nu_)) {
  if (static_cast<size_t>(w.size()) != nu.size())
    throw ContextError("permutation and translation ranks differ");
}

WeylElement WeylElement::identity(int n) { return {Perm::identity(n), Vec(static_cast<size_t>(n), 0)}; }

WeylElement WeylElement::translation(Vec nu) {
  int n = static_cast<int>(nu.size());
  return {Perm::identity(n), std::move(nu)};
}

WeylElement WeylElement::finite(Perm w) {
  int n = w.size();
  return {std::move(w), Vec(static_cast<size_t>(n), 0)};
}

WeylElement WeylElement::from_w_then_t(const Perm& w, const Vec& nu) { return {w, w.act(nu)}; }

Int WeylElement::degree() const { return std::accumulate(nu.begin(), nu.end(), Int{0}); }

Vec WeylElement::nu_right() const { return w.inverse().act(nu); }

static void same_rank(const WeylElement& a, const WeylElement& b) {
  if (a.rank() != b.rank()) throw ContextError("elements have different rank");
}

WeylElement multiply(const WeylElement& a, const WeylElement& b) {
  same_rank(a, b);
  Vec nu = a.w.act(b.nu);
  for (size_t i = 0; i < nu.size(); ++i) nu[i] += a.nu[i];
  return {a.w * b.w, std::move(nu)};
}

WeylElement inverse(const WeylElement& a) {
  Perm winv = a.w.inverse();
  Vec nu = winv.act(a.nu);
  for (auto& x : nu) x = -x;
  return {std::move(winv), std::move(nu)};
}

RatVec evaluate(const WeylElement& a, const RatVec& x) {
  if (x.size() != a.nu.size()) throw ContextError("vector length differs from rank");
  RatVec y = a.w.act(x);
  for (size_t i = 0; i < y.size(); ++i) y[i] += a.nu[i];
  return y;
}

Vec apply(const WeylElement& a, const Vec& x) {
  if (x.size() != a.nu.size()) throw ContextError("vector length differs from rank");
  Vec y = a.w.act(x);
  for (size_t i = 0; i < y.size(); ++i) y[i] += a.nu[i];
  return y;
}

Vec scaled_image(const WeylElement& a) {
  const int n = a.rank();
  Vec y = a.w.act(eta_vec(n));
  for (size_t i = 0; i < y.size(); ++i) y[i] += n * a.nu[i];
  return y;
}

int length(const WeylElement& a) {
  const Int n = a.rank();
  Vec y = scaled_image(a);
  Int total = 0;
  for (size_t i = 0; i < y.size(); ++i)
    for (size_t j = i + 1; j < y.size(); ++j) total += std::abs(floor_div(y[i] - y[j], n));
  return static_cast<int>(total);
}

WeylElement star(const WeylElement& a) {
  Perm winv = a.w.inverse();
  return {winv, winv.act(a.nu)};
}

WeylElement simple_reflection(int n, int k) {
  if (n < 2 || k < 0 || k >= n) throw ArgumentError("simple reflection index out of range");
  if (k > 0) return WeylElement::finite(Perm::transposition(n, k - 1, k));
  Vec nu(static_cast<size_t>(n), 0);
  nu.front() = 1;
  nu.back() = -1;
  return {Perm::transposition(n, 0, n - 1), std::move(nu)};
}

WeylElement longest_element(int n) { return WeylElement::finite(Perm::longest(n)); }

WeylElement w_h(int n) {
  Perm w0 = Perm::longest(n);
  Vec nu = w0.act(eta_vec(n));
  for (auto& x : nu) x = -x;
  return {w0, nu};
}

WeylElement affine_reflection(int n, int i, int j, Int k) {
  Vec nu(static_cast<size_t>(n), 0);
  nu[static_cast<size_t>(i)] = k;
  nu[static_cast<size_t>(j)] = -k;
  return {Perm::transposition(n, i, j), std::move(nu)};
}

WeylElement omega_element(int n, Int degree) {
  const Int r = mod_pos(degree, n);
  const Int q = (degree - r) / n;
  // Search the length-zero element of degree r among 0/1 translations.
  for (const Perm& w : Perm::all(n)) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != r) continue;
      Vec nu(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) nu[static_cast<size_t>(i)] = ((mask >> i) & 1u) + q;
      WeylElement cand(w, nu);
      if (length(cand) == 0) return cand;
    }
  }
  throw InvariantError("no length-zero element found");
}

// ---- descents and Bruhat order -------------------------------------------

static bool is_left_descent(const Vec& y, int n, int k) {
  if (k > 0) return y[static_cast<size_t>(k - 1)] < y[static_cast<size_t>(k)];
  return y.front() - y.back() > n;
}

std::vector<int> left_descents(const WeylElement& a) {
  const int n = a.rank();
  std::vector<int> out;
  if (n < 2) return out;
  Vec y = scaled_image(a);
  for (int k = 0; k < n; ++k)
    if (is_left_descent(y, n, k)) out.push_back(k);
  return out;
}

static int first_left_descent(const WeylElement& a) {
  const int n = a.rank();
  Vec y = scaled_image(a);
  for (int k = 0; k < n; ++k)
    if (is_left_descent(y, n, k)) return k;
  return -1;
}

std::vector<int> reduced_word(const WeylElement& a) {
  const int n = a.rank();
  std::vector<int> word;
  WeylElement b = a;
  for (int k = (n < 2 ? -1 : first_left_descent(b)); k >= 0; k = first_left_descent(b)) {
    word.push_back(k);
    b = simple_reflection(n, k) * b;
  }
  return word;
}

bool bruhat_leq(const WeylElement& a_in, const WeylElement& b_in) {
  same_rank(a_in, b_in);
  if (a_in.degree() != b_in.degree()) return false;
  const int n = a_in.rank();
  WeylElement a = a_in, b = b_in;
  int la = length(a), lb = length(b);
  while (true) {
    if (la > lb) return false;
    if (lb == 0) return a == b;
    const int k = first_left_descent(b);
    const WeylElement s = simple_reflection(n, k);
    b = s * b;
    --lb;
    WeylElement sa = s * a;
    const int lsa = length(sa);
    if (lsa < la) {
      a = std::move(sa);
      la = lsa;
    }
  }
}

static Int max_abs_pairing_ceil(const WeylElement& a) {
  const Int n = a.rank();
  Vec y = scaled_image(a);
  Int best = 0;
  for (size_t i = 0; i < y.size(); ++i)
    for (size_t j = i + 1; j < y.size(); ++j) best = std::max(best, -floor_div(-std::abs(y[i] - y[j]), n));
  return best;
}

bool up_leq(const WeylElement& a, const WeylElement& b) {
  same_rank(a, b);
  if (a.degree() != b.degree()) return false;
  const Int bound = 1 + std::max(max_abs_pairing_ceil(a), max_abs_pairing_ceil(b));
  Vec shift = eta_vec(a.rank());
  for (auto& x : shift) x *= bound;
  const WeylElement t = WeylElement::translation(shift);
  return bruhat_leq(t * a, t * b);
}

static WeylElement conjugate_by_w0(const WeylElement& a) {
  const WeylElement w0 = longest_element(a.rank());
  return w0 * a * w0;
}

int dual_length(const WeylElement& a) { return length(conjugate_by_w0(a)); }

bool dual_bruhat_leq(const WeylElement& a, const WeylElement& b) {
  return bruhat_leq(conjugate_by_w0(a), conjugate_by_w0(b));
}

// ---- classification ------------------------------------------------------

bool is_deep(const Vec& v, Int m, Int p) {
  if (p <= 0) throw ArgumentError("depth needs a positive prime");
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j) {
      const Int r = mod_pos(v[i] - v[j], p);
      if (!(m < r && m < p - r)) return false;
    }
  return true;
}

Int height_spread(const Vec& v) {
  if (v.empty()) return 0;
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

bool is_dominant(const WeylElement& a) {
  Vec y = scaled_image(a);
  for (size_t i = 0; i + 1 < y.size(); ++i)
    if (y[i] - y[i + 1] <= 0) return false;
  return true;
}

bool is_restricted(const WeylElement& a) {
  const Int n = a.rank();
  Vec y = scaled_image(a);
  for (size_t i = 0; i + 1 < y.size(); ++i)
    if (y[i] - y[i + 1] <= 0 || y[i] - y[i + 1] >= n) return false;
  return true;
}

bool is_regular(const WeylElement& a) {
  const Int n = a.rank();
  Vec y = scaled_image(a);
  for (size_t i = 0; i < y.size(); ++i)
    for (size_t j = i + 1; j < y.size(); ++j) {
      const Int d = y[i] - y[j];
      if (d > 0 && d < n) return false;
    }
  return true;
}

Classification classify(const WeylElement& a, Int m, Int p) {
  if (m < 0) throw ArgumentError("m must be nonnegative");
  Classification c;
  c.dominant = is_dominant(a);
  c.restricted = is_restricted(a);
  c.regular = is_regular(a);
  c.m_small = height_spread(a.nu) <= m;
  c.m_generic = p > 0 && is_deep(a.nu, m, p);
  return c;
}

// ---- intervals and admissible sets ---------------------------------------

std::vector<WeylElement> bruhat_interval(const WeylElement& a) {
  const int n = a.rank();
  const std::vector<int> word = reduced_word(a);
  std::set<WeylElement> acc{omega_element(n, a.degree())};
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const WeylElement s = simple_reflection(n, *it);
    std::vector<WeylElement> add;
    add.reserve(acc.size());
    for (const auto& x : acc) add.push_back(s * x);
    acc.insert(add.begin(), add.end());
  }
  std::vector<WeylElement> out(acc.begin(), acc.end());
  sort_canonical(out);
  return out;
}

bool is_dominant_weight(const Vec& lambda) {
  for (size_t i = 0; i + 1 < lambda.size(); ++i)
    if (lambda[i] < lambda[i + 1]) return false;
  return true;
}

std::vector<Vec> weyl_orbit(const Vec& lambda) {
  Vec v = lambda;
  std::sort(v.begin(), v.end());
  std::vector<Vec> out;
  do {
    out.push_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

std::vector<WeylElement> adm(const Vec& lambda, AdmVariant variant, int jobs) {
  if (lambda.empty()) throw InputError("empty weight");
  if (!is_dominant_weight(lambda)) throw ArgumentError("weight is not dominant");
  const auto orbit = weyl_orbit(lambda);
  std::set<WeylElement> acc;
  if (jobs > 1) {
    std::vector<std::future<std::vector<WeylElement>>> parts;
    for (const auto& v : orbit)
      parts.push_back(std::async(std::launch::async, [v] { return bruhat_interval(WeylElement::translation(v)); }));
    for (auto& f : parts) {
      auto part = f.get();
      acc.insert(part.begin(), part.end());
    }
  } else {
    for (const auto& v : orbit) {
      auto part = bruhat_interval(WeylElement::translation(v));
      acc.insert(part.begin(), part.end());
    }
  }
  std::vector<WeylElement> out;
  for (const auto& x : acc) {
    if (variant == AdmVariant::regular && !is_regular(x)) continue;
    out.push_back(variant == AdmVariant::dual ? star(x) : x);
  }
  sort_canonical(out);
  return out;
}

bool in_adm(const WeylElement& a, const Vec& lambda) {
  if (!is_dominant_weight(lambda)) throw ArgumentError("weight is not dominant");
  if (static_cast<size_t>(a.rank()) != lambda.size()) throw ContextError("rank mismatch");
  for (const auto& v : weyl_orbit(lambda))
    if (bruhat_leq(a, WeylElement::translation(v))) return true;
  return false;
}

// ---- admissible pairs ----------------------------------------------------

AdmissiblePair canonicalize_pair(AdmissiblePair pair) {
  const int n = pair.w1.rank();
  const Int c = floor_div(-pair.w1.degree(), n);
  if (c != 0) {
    const WeylElement t = WeylElement::translation(Vec(static_cast<size_t>(n), c));
    pair.w1 = t * pair.w1;
    pair.w2 = t * pair.w2;
  }
  return pair;
}

AdmissiblePair regular_factorization(const WeylElement& a) {
  if (!is_regular(a)) throw RegularityError("element is not regular: " + to_string(a));
  const int n = a.rank();
  const Vec y = scaled_image(a);
  const WeylElement w0 = longest_element(n);
  for (const Perm& u : Perm::all(n)) {
    const Vec uy = u.act(y);
    Vec beta(static_cast<size_t>(n), 0);
    for (int i = n - 2; i >= 0; --i) {
      const auto ui = static_cast<size_t>(i);
      beta[ui] = beta[ui + 1] - floor_div(uy[ui] - uy[ui + 1], n) - 1;
    }
    WeylElement w2(u, beta);
    if (!is_dominant(w2)) continue;
    WeylElement w1 = w0 * w2 * a;
    if (!is_restricted(w1)) throw InvariantError("factorization produced a non-restricted element");
    return canonicalize_pair({std::move(w1), std::move(w2)});
  }
  throw InvariantError("no dominant factor found for a regular element");
}

std::vector<AdmissiblePair> ap_enumerate(const Vec& lambda_plus_eta, int jobs) {
  std::vector<AdmissiblePair> out;
  for (const auto& a : adm(lambda_plus_eta, AdmVariant::regular, jobs)) out.push_back(regular_factorization(a));
  std::sort(out.begin(), out.end(), [](const AdmissiblePair& x, const AdmissiblePair& y) {
    if (x.w1 != y.w1) return canonical_less(x.w1, y.w1);
    return canonical_less(x.w2, y.w2);
  });
  return out;
}

bool ap_member(const WeylElement& w1, const WeylElement& w2, const Vec& lambda) {
  same_rank(w1, w2);
  if (lambda.size() != static_cast<size_t>(w1.rank())) throw ContextError("rank mismatch");
  if (!is_dominant_weight(lambda)) throw ArgumentError("weight is not dominant");
  if (!is_restricted(w1) || !is_dominant(w2)) return false;
  Vec lpe = lambda;
  const Vec eta = eta_vec(w1.rank());
  for (size_t i = 0; i < lpe.size(); ++i) lpe[i] += eta[i];
  return in_adm(inverse(w2) * longest_element(w1.rank()) * w1, lpe);
}

std::vector<WeylElement> restricted_elements(int n) {
  const int d = n * (n - 1) / 2;
  std::set<WeylElement> found;
  for (Int deg = 1 - n; deg <= 0; ++deg) {
    std::set<WeylElement> layer{omega_element(n, deg)};
    std::set<WeylElement> seen = layer;
    for (int len = 0; len <= d; ++len) {
      std::set<WeylElement> next;
      for (const auto& x : layer) {
        if (is_restricted(x)) found.insert(x);
        for (int k = 0; k < n && n >= 2; ++k) {
          WeylElement y = simple_reflection(n, k) * x;
          if (length(y) == len + 1 && seen.insert(y).second) next.insert(y);
        }
      }
      layer = std::move(next);
    }
  }
  std::vector<WeylElement> out(found.begin(), found.end());
  sort_canonical(out);
  return out;
}

WeylElement dominant_in_coset(const WeylElement& x) {
  const int n = x.rank();
  const Vec y = scaled_image(x);
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return y[static_cast<size_t>(i)] > y[static_cast<size_t>(j)]; });
  std::vector<int> img(static_cast<size_t>(n));
  for (int r = 0; r < n; ++r) img[static_cast<size_t>(order[static_cast<size_t>(r)])] = r;
  return WeylElement::finite(Perm(std::move(img))) * x;
}

// ---- ordering and tuples -------------------------------------------------

bool canonical_less(const WeylElement& a, const WeylElement& b) {
  const int la = length(a), lb = length(b);
  if (la != lb) return la < lb;
  if (a.w != b.w) return a.w < b.w;
  return a.nu < b.nu;
}

void sort_canonical(std::vector<WeylElement>& v) {
  std::vector<std::pair<int, WeylElement>> keyed;
  keyed.reserve(v.size());
  for (auto& x : v) keyed.emplace_back(length(x), std::move(x));
  std::sort(keyed.begin(), keyed.end());
  for (size_t i = 0; i < v.size(); ++i) v[i] = std::move(keyed[i].second);
}

bool canonical_less(const WeylTuple& a, const WeylTuple& b) {
  const int la = tuple_length(a), lb = tuple_length(b);
  if (la != lb) return la < lb;
  return a < b;
}

WeylTuple tuple_multiply(const WeylTuple& a, const WeylTuple& b) {
  if (a.size() != b.size()) throw ContextError("tuple sizes differ");
  WeylTuple out;
  for (size_t j = 0; j < a.size(); ++j) out.push_back(a[j] * b[j]);
  return out;
}

WeylTuple tuple_inverse(const WeylTuple& a) {
  WeylTuple out;
  for (const auto& x : a) out.push_back(inverse(x));
  return out;
}

int tuple_length(const WeylTuple& a) {
  int total = 0;
  for (const auto& x : a) total += length(x);
  return total;
}

std::string to_string(const Perm& w) {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < w.size(); ++i) os << (i ? "," : "") << w(i) + 1;
  os << ']';
  return os.str();
}

std::string to_string(const WeylElement& a) {
  std::ostringstream os;
  os << "(w=" << to_string(a.w) << ", nu=(";
  for (size_t i = 0; i < a.nu.size(); ++i) os << (i ? "," : "") << a.nu[i];
  os << "))";
  return os.str();
}

}  // namespace awbm
