#pragma once

#include <functional>
#include <map>
#include <vector>

#include "awbm/inertial_types.hpp"

namespace awbm {

// A weight in W?(rho_bar) together with the pair (w, w2) that produces it.
struct PredictedWeight {
  SerreWeight sigma;
  WeylTuple w;   // restricted
  WeylTuple w2;  // dominant, w2 <= w
  bool obvious = false;
};

// A JH constituent and the admissible pair (w1, w2) it comes from.
struct JHWeight {
  SerreWeight sigma;
  WeylTuple w1;
  WeylTuple w2;
};

// Ordering for emitted weight sets: total length of w1, then w1, then omega.
bool presentation_less(const SerreWeight& a, const SerreWeight& b);

// max{2 h_eta, h_{lambda+eta}}; lambda empty means 0.
Int jh_genericity(int n, const WeightTuple& lambda);

std::vector<JHWeight> jh_set(const TameType& tau, const WeightTuple& lambda, Int p, bool force = false);
// Interval-containment test t_omega W_{<= w0 w1} inside w(tau) Adm(lambda + eta).
bool jh_contains(const TameType& tau, const WeightTuple& lambda, const SerreWeight& sigma);

std::vector<PredictedWeight> w_question(const TameType& rho_bar, Int p, bool force = false);

// sigma0 covers sigma, decided by t_{omega'} W_{<= w0 w'} inside t_omega W_{<= w0 w}.
bool covers(const SerreWeight& sigma0, const SerreWeight& sigma, Int p, bool force = false);
// The translated up-order reading: w' up t_{s(omega - omega')} w for every s in W.
bool covers_by_up(const SerreWeight& sigma0, const SerreWeight& sigma);

// w(tau)^{-1} w(rho_bar), componentwise.
WeylTuple w_rhobar_tau(const TameType& rho_bar, const TameType& tau);
// Throws CompatibilityError unless the presentations are lambda-compatible.
void check_compatible(const TameType& rho_bar, const TameType& tau, const WeightTuple& lambda);

std::vector<SerreWeight> intersection(const TameType& rho_bar, const TameType& tau, const WeightTuple& lambda,
                                      Int p, bool force = false);

int defect(const TameType& rho_bar, const SerreWeight& sigma, Int p, bool force = false);
int defect_of_pair(const WeylTuple& w, const WeylTuple& w2);

SerreWeight max_defect_weight(const TameType& rho_bar, const TameType& tau, Int p, bool force = false);

// The type with w(tau) = t_{mu + eta} s equal to the given tuple.
TameType type_from_element(const WeylTuple& w_tau);

// Formal Z_sigma / Z_tau symbols.
struct CycleSymbol {
  enum class Kind { weight, type } kind = Kind::type;
  SerreWeight sigma;
  TameType tau;
  auto operator<=>(const CycleSymbol&) const = default;
};

class CycleExpr {
 public:
  CycleExpr() = default;
  static CycleExpr of_type(const TameType& tau);
  static CycleExpr of_weight(const SerreWeight& sigma);

  const std::map<CycleSymbol, BigRational>& terms() const { return terms_; }
  void add(const CycleSymbol& sym, const BigRational& c);
  CycleExpr& operator+=(const CycleExpr& o);
  CycleExpr& operator-=(const CycleExpr& o);
  CycleExpr& operator*=(const BigRational& c);
  bool operator==(const CycleExpr&) const = default;

 private:
  std::map<CycleSymbol, BigRational> terms_;
};

// [sigma_bar(tau) : sigma]; must be positive.
using MultiplicityOracle = std::function<Int(const TameType&, const SerreWeight&)>;
MultiplicityOracle unit_multiplicity();

struct BMEntry {
  SerreWeight sigma;
  int defect = 0;
  TameType tau;  // the auxiliary type used for this weight
  CycleExpr expr;
};

std::vector<BMEntry> bm_cycles(const TameType& rho_bar, Int p, const MultiplicityOracle& mult = unit_multiplicity(),
                               bool force = false);

}  // namespace awbm
