#include "awbm/weight_sets.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace awbm {

namespace {

// Every choice of one entry per embedding.
template <class T>
std::vector<std::vector<T>> cartesian(const std::vector<std::vector<T>>& options) {
  std::vector<std::vector<T>> out{{}};
  for (const auto& opts : options) {
    std::vector<std::vector<T>> next;
    for (const auto& prefix : out)
      for (const auto& o : opts) {
        auto v = prefix;
        v.push_back(o);
        next.push_back(std::move(v));
      }
    out = std::move(next);
  }
  return out;
}

Vec zeros(int n) { return Vec(static_cast<size_t>(n), 0); }

WeightTuple zero_lambda(const TameType& t, const WeightTuple& lambda) {
  if (!lambda.empty()) {
    if (lambda.size() != t.mu.size()) throw ContextError("lambda has the wrong embedding count");
    for (const auto& l : lambda) {
      if (static_cast<int>(l.size()) != t.rank()) throw ContextError("lambda has the wrong rank");
      if (!is_dominant_weight(l)) throw ArgumentError("lambda must be dominant");
    }
    return lambda;
  }
  return WeightTuple(t.mu.size(), zeros(t.rank()));
}

Vec add(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

WeylElement t(const Vec& nu) { return WeylElement::translation(nu); }

void require_generic(const TameType& x, Int m, Int p, bool force, const char* what) {
  if (force) return;
  if (!is_generic(x, m, p))
    throw GenericityError(std::string(what) + " presentation is not " + std::to_string(m) + "-generic");
}

Int h_eta(int n) { return n - 1; }

}  // namespace

bool presentation_less(const SerreWeight& a, const SerreWeight& b) {
  const int la = tuple_length(a.w1), lb = tuple_length(b.w1);
  if (la != lb) return la < lb;
  if (a.w1 != b.w1) return canonical_less(a.w1, b.w1);
  return a.omega < b.omega;
}

Int jh_genericity(int n, const WeightTuple& lambda) {
  Int h = 0;
  const Vec eta = eta_vec(n);
  for (const auto& l : lambda) h = std::max(h, height_spread(add(l, eta)));
  if (lambda.empty()) h = h_eta(n);
  return std::max(2 * h_eta(n), h);
}

std::vector<JHWeight> jh_set(const TameType& tau, const WeightTuple& lambda_in, Int p, bool force) {
  if (tau.s.empty()) throw InputError("type has no embeddings");
  const WeightTuple lambda = zero_lambda(tau, lambda_in);
  const int n = tau.rank();
  require_generic(tau, jh_genericity(n, lambda), p, force, "type");
  const WeylTuple wt = tau.w_tilde();
  const Vec eta = eta_vec(n);
  std::vector<std::vector<AdmissiblePair>> per;
  for (const auto& l : lambda) per.push_back(ap_enumerate(add(l, eta)));
  std::vector<JHWeight> out;
  for (const auto& choice : cartesian(per)) {
    JHWeight jw;
    for (size_t j = 0; j < choice.size(); ++j) {
      jw.w1.push_back(choice[j].w1);
      jw.w2.push_back(choice[j].w2);
      jw.sigma.w1.push_back(choice[j].w1);
      jw.sigma.omega.push_back(awbm::apply(wt[j], awbm::apply(inverse(choice[j].w2), zeros(n))));
    }
    jw.sigma = canonicalize(jw.sigma);
    out.push_back(std::move(jw));
  }
  std::sort(out.begin(), out.end(), [](const JHWeight& a, const JHWeight& b) { return presentation_less(a.sigma, b.sigma); });
  return out;
}

bool jh_contains(const TameType& tau, const WeightTuple& lambda_in, const SerreWeight& sigma) {
  const WeightTuple lambda = zero_lambda(tau, lambda_in);
  const int n = tau.rank();
  if (sigma.rank() != n || sigma.embeddings() != tau.embeddings()) throw ContextError("weight and type do not match");
  const WeylTuple wt = tau.w_tilde();
  const WeylElement w0 = longest_element(n);
  const Vec eta = eta_vec(n);
  for (size_t j = 0; j < wt.size(); ++j) {
    const WeylElement shift = inverse(wt[j]) * t(sigma.omega[j]);
    for (const auto& x : bruhat_interval(w0 * sigma.w1[j]))
      if (!in_adm(shift * x, add(lambda[j], eta))) return false;
  }
  return true;
}

std::vector<PredictedWeight> w_question(const TameType& rho_bar, Int p, bool force) {
  if (rho_bar.s.empty()) throw InputError("type has no embeddings");
  const int n = rho_bar.rank();
  require_generic(rho_bar, 2 * h_eta(n), p, force, "rho_bar");
  const WeylTuple wr = rho_bar.w_tilde();
  std::vector<AdmissiblePair> local;  // (restricted w, dominant w2 <= w)
  for (const auto& w : restricted_elements(n))
    for (const auto& w2 : bruhat_interval(w))
      if (is_dominant(w2)) local.push_back({w, w2});
  std::vector<std::vector<AdmissiblePair>> per(rho_bar.s.size(), local);
  std::vector<PredictedWeight> out;
  for (const auto& choice : cartesian(per)) {
    PredictedWeight pw;
    pw.obvious = true;
    for (size_t j = 0; j < choice.size(); ++j) {
      pw.w.push_back(choice[j].w1);
      pw.w2.push_back(choice[j].w2);
      pw.obvious = pw.obvious && choice[j].w1 == choice[j].w2;
      pw.sigma.w1.push_back(choice[j].w1);
      pw.sigma.omega.push_back(awbm::apply(wr[j], awbm::apply(inverse(choice[j].w2), zeros(n))));
    }
    pw.sigma = canonicalize(pw.sigma);
    out.push_back(std::move(pw));
  }
  std::sort(out.begin(), out.end(),
            [](const PredictedWeight& a, const PredictedWeight& b) { return presentation_less(a.sigma, b.sigma); });
  return out;
}

static void check_pair(const SerreWeight& a, const SerreWeight& b) {
  if (a.rank() != b.rank() || a.embeddings() != b.embeddings()) throw ContextError("weights have different shapes");
  if (central_character(a) != central_character(b))
    throw CompatibilityError("presentations are not compatible (central characters differ)");
}

bool covers(const SerreWeight& sigma0_in, const SerreWeight& sigma_in, Int p, bool force) {
  check_pair(sigma0_in, sigma_in);
  const SerreWeight s0 = canonicalize(sigma0_in), s1 = canonicalize(sigma_in);
  const int n = s0.rank();
  if (!force && depth(s0, p) < 3 * h_eta(n))
    throw DepthError("covering weight is not " + std::to_string(3 * h_eta(n)) + "-deep");
  const WeylElement w0 = longest_element(n);
  for (size_t j = 0; j < s0.w1.size(); ++j) {
    std::set<WeylElement> big;
    for (const auto& x : bruhat_interval(w0 * s0.w1[j])) big.insert(t(s0.omega[j]) * x);
    for (const auto& x : bruhat_interval(w0 * s1.w1[j]))
      if (!big.contains(t(s1.omega[j]) * x)) return false;
  }
  return true;
}

bool covers_by_up(const SerreWeight& sigma0_in, const SerreWeight& sigma_in) {
  check_pair(sigma0_in, sigma_in);
  const SerreWeight s0 = canonicalize(sigma0_in), s1 = canonicalize(sigma_in);
  const int n = s0.rank();
  const auto perms = Perm::all(n);
  for (size_t j = 0; j < s0.w1.size(); ++j) {
    const Vec diff = sub(s0.omega[j], s1.omega[j]);
    for (const auto& s : perms)
      if (!up_leq(s1.w1[j], t(s.act(diff)) * s0.w1[j])) return false;
  }
  return true;
}

WeylTuple w_rhobar_tau(const TameType& rho_bar, const TameType& tau) {
  if (rho_bar.embeddings() != tau.embeddings() || rho_bar.rank() != tau.rank())
    throw ContextError("rho_bar and tau have different shapes");
  const WeylTuple wr = rho_bar.w_tilde(), wt = tau.w_tilde();
  WeylTuple out;
  for (size_t j = 0; j < wr.size(); ++j) out.push_back(inverse(wt[j]) * wr[j]);
  return out;
}

void check_compatible(const TameType& rho_bar, const TameType& tau, const WeightTuple& lambda) {
  TameType rb = rho_bar, ty = tau;
  rb.kind = TypeKind::over_F;
  ty.kind = TypeKind::over_E;
  if (compatibility_character(rb, {}) != compatibility_character(ty, lambda))
    throw CompatibilityError("rho_bar and tau presentations are not lambda-compatible");
}

std::vector<SerreWeight> intersection(const TameType& rho_bar, const TameType& tau, const WeightTuple& lambda_in,
                                      Int p, bool force) {
  const WeightTuple lambda = zero_lambda(tau, lambda_in);
  check_compatible(rho_bar, tau, lambda);
  const int n = tau.rank();
  require_generic(tau, jh_genericity(n, lambda), p, force, "type");
  const WeylTuple x = w_rhobar_tau(rho_bar, tau);
  const WeylElement wh_inv = inverse(w_h(n));
  std::vector<SerreWeight> out;
  for (const auto& pw : w_question(rho_bar, p, force)) {
    bool ok = true;
    for (size_t j = 0; ok && j < x.size(); ++j) {
      const WeylElement w2 = dominant_in_coset(pw.w2[j] * inverse(x[j]));
      ok = up_leq(pw.w[j], t(lambda[j]) * wh_inv * w2);
    }
    if (ok) out.push_back(pw.sigma);
  }
  return out;
}

int defect_of_pair(const WeylTuple& w, const WeylTuple& w2) {
  int total = 0;
  for (size_t j = 0; j < w.size(); ++j) {
    const int n = w[j].rank();
    const WeylElement a = inverse(w_h(n) * w[j]) * longest_element(n) * w2[j];
    total += length(WeylElement::translation(eta_vec(n))) - length(a);
  }
  return total;
}

int defect(const TameType& rho_bar, const SerreWeight& sigma, Int p, bool force) {
  const SerreWeight target = canonicalize(sigma);
  for (const auto& pw : w_question(rho_bar, p, force))
    if (pw.sigma == target) return defect_of_pair(pw.w, pw.w2);
  throw MembershipError("weight is not in W?(rho_bar)");
}

SerreWeight max_defect_weight(const TameType& rho_bar, const TameType& tau, Int p, bool force) {
  check_compatible(rho_bar, tau, {});
  const int n = tau.rank();
  require_generic(rho_bar, 2 * h_eta(n), p, force, "rho_bar");
  require_generic(tau, 2 * h_eta(n), p, force, "type");
  const WeylTuple x = w_rhobar_tau(rho_bar, tau);
  const WeylTuple wr = rho_bar.w_tilde();
  const WeylElement wh_inv = inverse(w_h(n));
  SerreWeight kappa;
  for (size_t j = 0; j < x.size(); ++j) {
    if (!in_adm(x[j], eta_vec(n))) throw MembershipError("w(rho_bar, tau) is not in Adm(eta)");
    if (!is_regular(x[j])) throw RegularityError("w(rho_bar, tau) is not regular");
    // x = w2^{-1} w0 w1 with w1 dominant, w2 restricted.
    const AdmissiblePair f = regular_factorization(inverse(x[j]));
    const WeylElement& w2 = f.w1;
    const WeylElement& w1 = f.w2;
    kappa.w1.push_back(wh_inv * w2);
    kappa.omega.push_back(awbm::apply(wr[j], awbm::apply(inverse(w1), zeros(n))));
  }
  return canonicalize(kappa);
}

TameType type_from_element(const WeylTuple& w_tau) {
  TameType tau;
  for (const auto& x : w_tau) {
    tau.s.push_back(x.w);
    tau.mu.push_back(sub(x.nu, eta_vec(x.rank())));
  }
  return tau;
}

// ---- cycles ----------------------------------------------------------------

CycleExpr CycleExpr::of_type(const TameType& tau) {
  CycleExpr e;
  e.add({CycleSymbol::Kind::type, {}, tau}, 1);
  return e;
}

CycleExpr CycleExpr::of_weight(const SerreWeight& sigma) {
  CycleExpr e;
  e.add({CycleSymbol::Kind::weight, sigma, {}}, 1);
  return e;
}

void CycleExpr::add(const CycleSymbol& sym, const BigRational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(sym, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

CycleExpr& CycleExpr::operator+=(const CycleExpr& o) {
  for (const auto& [s, c] : o.terms_) add(s, c);
  return *this;
}

CycleExpr& CycleExpr::operator-=(const CycleExpr& o) {
  for (const auto& [s, c] : o.terms_) add(s, -c);
  return *this;
}

CycleExpr& CycleExpr::operator*=(const BigRational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [s, v] : terms_) v *= c;
  return *this;
}

MultiplicityOracle unit_multiplicity() {
  return [](const TameType&, const SerreWeight&) { return Int{1}; };
}

static Int checked_mult(const MultiplicityOracle& mult, const TameType& tau, const SerreWeight& sigma) {
  const Int m = mult(tau, sigma);
  if (m <= 0) throw OracleError("multiplicity oracle returned a non-positive value");
  return m;
}

std::vector<BMEntry> bm_cycles(const TameType& rho_bar, Int p, const MultiplicityOracle& mult, bool force) {
  if (rho_bar.s.empty()) throw InputError("type has no embeddings");
  const int n = rho_bar.rank();
  require_generic(rho_bar, 2 * n, p, force, "rho_bar");
  auto predicted = w_question(rho_bar, p, true);
  std::vector<BMEntry> entries;
  std::map<SerreWeight, size_t> index;
  for (const auto& pw : predicted) {
    index[pw.sigma] = entries.size();
    entries.push_back({pw.sigma, defect_of_pair(pw.w, pw.w2), {}, {}});
  }
  std::vector<size_t> order(entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return entries[a].defect < entries[b].defect; });

  const WeylTuple wr = rho_bar.w_tilde();
  const WeylElement w0 = longest_element(n);
  for (size_t idx : order) {
    BMEntry& e = entries[idx];
    const PredictedWeight& pw = predicted[idx];
    WeylTuple w_tau;
    for (size_t j = 0; j < wr.size(); ++j) {
      if (e.defect == 0) {
        const Vec shift = pw.w[j].w.inverse().act(eta_vec(n));
        w_tau.push_back(wr[j] * t(sub(zeros(n), shift)));
      } else {
        // w(rho_bar, tau) = (w_h w)^{-1} w0 w1, so sigma maximizes the defect on the intersection.
        w_tau.push_back(wr[j] * inverse(inverse(w_h(n) * pw.w[j]) * w0 * pw.w2[j]));
      }
    }
    e.tau = type_from_element(w_tau);
    CycleExpr expr = CycleExpr::of_type(e.tau);
    bool found_self = false;
    for (const auto& kappa : intersection(rho_bar, e.tau, {}, p, force)) {
      if (kappa == e.sigma) {
        found_self = true;
        continue;
      }
      const BMEntry& other = entries.at(index.at(kappa));
      if (other.defect >= e.defect)
        throw InvariantError("auxiliary type is not strictly defect lowering");
      CycleExpr part = other.expr;
      part *= BigRational(checked_mult(mult, e.tau, kappa));
      expr -= part;
    }
    if (!found_self) throw InvariantError("weight missing from its auxiliary intersection");
    expr *= BigRational(1) / BigRational(checked_mult(mult, e.tau, e.sigma));
    e.expr = std::move(expr);
  }
  return entries;
}

}  // namespace awbm
