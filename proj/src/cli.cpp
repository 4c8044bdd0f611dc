#include "awbm/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "awbm/errors.hpp"
#include "awbm/io.hpp"
#include "awbm/oracles.hpp"

namespace awbm::cli {

namespace {

using io::Json;

// Option values of one invocation, from flags first and then the --stdin payload.
class Args {
 public:
  Args(std::map<std::string, std::string> flags, std::map<std::string, bool> switches, Json payload)
      : flags_(std::move(flags)), switches_(std::move(switches)), payload_(std::move(payload)) {}

  bool has(const std::string& name) const { return flags_.contains(name) || payload_.contains(key(name)); }

  Json json(const std::string& name) const {
    if (auto it = flags_.find(name); it != flags_.end()) {
      const std::string& text = it->second;
      if (!text.empty() && (text.front() == '{' || text.front() == '[')) return Json::parse(text);
      return Json(text);
    }
    if (payload_.contains(key(name))) return payload_.at(key(name));
    throw InputError("missing --" + name);
  }

  bool flag(const std::string& name) const {
    if (auto it = switches_.find(name); it != switches_.end() && it->second) return true;
    const std::string k = key(name);
    if (payload_.contains(k)) {
      if (!payload_.at(k).is_boolean()) throw InputError(k + " must be a boolean");
      return payload_.at(k).get<bool>();
    }
    return false;
  }

  Int integer(const std::string& name) const {
    const Json j = json(name);
    if (j.is_number_integer()) return j.get<Int>();
    if (j.is_string()) {
      const Vec v = io::parse_vec(j.get<std::string>());
      if (v.size() == 1) return v[0];
    }
    throw InputError("--" + name + " must be an integer");
  }
  Int integer(const std::string& name, Int fallback) const { return has(name) ? integer(name) : fallback; }

  std::string text(const std::string& name) const {
    const Json j = json(name);
    if (!j.is_string()) throw InputError("--" + name + " must be a string");
    return j.get<std::string>();
  }

  std::optional<int> n() const {
    if (!has("n")) return std::nullopt;
    const Int v = integer("n");
    if (v < 1 || v > 16) throw InputError("--n must lie in 1..16");
    return static_cast<int>(v);
  }
  Int p() const {
    const Int v = integer("p");
    if (v < 2) throw InputError("--p must be a prime");
    return v;
  }
  int jobs() const {
    const Int v = integer("jobs", 1);
    if (v < 1 || v > 256) throw InputError("--jobs must lie in 1..256");
    return static_cast<int>(v);
  }

  WeylElement element(const std::string& name) const { return io::decode_element(json(name), n()); }
  WeylTuple tuple(const std::string& name) const { return checked_f(io::decode_tuple(json(name), n())); }
  Vec vec(const std::string& name) const { return io::decode_vec(json(name)); }
  WeightTuple weights(const std::string& name) const { return checked_f(io::decode_weight_tuple(json(name))); }

  SerreWeight serre(const std::string& name) const {
    if (has(name)) return checked_f(io::decode_serre_weight(json(name), n()));
    SerreWeight s;
    s.w1 = tuple("w1");
    s.omega = weights("omega");
    if (s.w1.size() != s.omega.size()) throw ContextError("w1 and omega have different embedding counts");
    return s;
  }

  // A type from --<prefix>s/--<prefix>mu (or a JSON object under --<object>).
  TameType type(const std::string& prefix, const std::string& object, TypeKind kind) const {
    if (has(object)) {
      const Json j = json(object);
      if (!j.is_object()) throw InputError("--" + object + " must be a JSON object");
      TypeKind k = kind;
      if (j.contains("kind")) k = parse_kind(j.at("kind"));
      return build_type(io::decode_perm_tuple(j.at("s"), n()), io::decode_weight_tuple(j.at("mu")), k);
    }
    const std::string kind_key = prefix + "kind";
    const TypeKind k = has(kind_key) ? parse_kind(json(kind_key)) : kind;
    return build_type(io::decode_perm_tuple(json(prefix + "s"), n()), io::decode_weight_tuple(json(prefix + "mu")), k);
  }

  // Weight tuple defaulting to zero of the given shape.
  WeightTuple weights_or_zero(const std::string& name, int f, int rank) const {
    if (has(name)) return weights(name);
    return WeightTuple(static_cast<size_t>(f), Vec(static_cast<size_t>(rank), 0));
  }

 private:
  static std::string key(std::string name) {
    for (auto& c : name)
      if (c == '-') c = '_';
    return name;
  }

  static TypeKind parse_kind(const Json& j) {
    if (j == "E") return TypeKind::over_E;
    if (j == "F") return TypeKind::over_F;
    throw InputError("type kind must be \"E\" or \"F\"");
  }

  TameType build_type(const std::vector<Perm>& s, const WeightTuple& mu, TypeKind kind) const {
    WeylTuple se;
    for (const auto& w : s) se.push_back(WeylElement::finite(w));
    checked_f(se);
    return make_type(se, mu, kind);
  }

  template <class T>
  T checked_f(T value) const {
    size_t size = 0;
    if constexpr (std::is_same_v<T, SerreWeight>)
      size = value.w1.size();
    else
      size = value.size();
    if (has("f") && static_cast<Int>(size) != integer("f")) throw ContextError("embedding count differs from --f");
    return value;
  }

  std::map<std::string, std::string> flags_;
  std::map<std::string, bool> switches_;
  Json payload_;
};

int max_len() {
  const char* env = std::getenv("AWBM_MAX_LEN");
  if (env == nullptr || *env == '\0') return 12;
  const Vec v = io::parse_vec(env);
  if (v.size() != 1 || v[0] < 0 || v[0] > 1000) throw InputError("AWBM_MAX_LEN must be a non-negative integer");
  return static_cast<int>(v[0]);
}

void check_len(int len, const std::string& what) {
  const int cap = max_len();
  if (len > cap)
    throw CapacityError(what + " has length " + std::to_string(len) + " beyond AWBM_MAX_LEN = " + std::to_string(cap));
}

Json encode_elements(const std::vector<WeylElement>& v) {
  Json out = Json::array();
  for (const auto& a : v) out.push_back(io::encode(a));
  return out;
}

Json encode_weights(const std::vector<SerreWeight>& v) {
  Json out = Json::array();
  for (const auto& s : v) out.push_back(io::encode(s));
  return out;
}

Json encode_bool(const char* key, bool value) { return Json{{key, value}}; }

Json encode_components(const ComponentData& c) {
  auto per_embedding = [](const std::vector<std::vector<WeylElement>>& v) {
    Json out = Json::array();
    for (const auto& e : v) out.push_back(encode_elements(e));
    return out;
  };
  return Json{{"bound_fixed_points", per_embedding(c.bound_fixed_points)},
              {"exactness_conditional", c.exactness_conditional},
              {"label", io::encode(c.label)},
              {"obvious_fixed_points", per_embedding(c.obvious_fixed_points)}};
}

Json encode_cycle(const CycleExpr& e) {
  Json out = Json::array();
  for (const auto& [sym, c] : e.terms()) {
    Json s = sym.kind == CycleSymbol::Kind::weight ? Json{{"weight", io::encode(sym.sigma)}}
                                                   : Json{{"type", io::encode(sym.tau)}};
    out.push_back(Json{{"coefficient", io::encode(c)}, {"symbol", s}});
  }
  return out;
}

Json big_vec(const BigVec& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(io::encode(x));
  return out;
}

using Handler = std::function<Json(const Args&)>;

struct Command {
  std::string name;
  std::string help;
  std::vector<std::string> options;
  std::vector<std::string> switches;
  Handler run;
};

std::vector<Command> commands() {
  std::vector<Command> c;

  // ---- affine Weyl group ----
  c.push_back({"mul", "product a*b, or the inverse of a with --invert", {"a", "b"}, {"invert"}, [](const Args& a) {
                 if (a.flag("invert")) return io::encode(inverse(a.element("a")));
                 const WeylElement x = a.element("a"), y = a.element("b");
                 if (x.rank() != y.rank()) throw ContextError("rank mismatch");
                 return io::encode(x * y);
               }});
  c.push_back({"len", "Coxeter length", {"a"}, {}, [](const Args& a) {
                 return Json{{"length", length(a.element("a"))}};
               }});
  c.push_back({"star", "the anti-involution (w, nu) -> (w^-1, w^-1 nu)", {"a"}, {}, [](const Args& a) {
                 return io::encode(star(a.element("a")));
               }});
  c.push_back({"bruhat", "Bruhat order test a <= b", {"a", "b"}, {}, [](const Args& a) {
                 return encode_bool("leq", bruhat_leq(a.element("a"), a.element("b")));
               }});
  c.push_back({"up", "upper-arrow order test a up b", {"a", "b"}, {}, [](const Args& a) {
                 return encode_bool("leq", up_leq(a.element("a"), a.element("b")));
               }});
  c.push_back({"classify", "dominance, restriction, regularity, smallness, genericity", {"a", "m"}, {},
               [](const Args& a) {
                 const Classification k = classify(a.element("a"), a.integer("m", 0), a.has("p") ? a.p() : 0);
                 return Json{{"dominant", k.dominant}, {"m_generic", k.m_generic}, {"m_small", k.m_small},
                             {"regular", k.regular}, {"restricted", k.restricted}};
               }});
  c.push_back({"interval", "Bruhat lower interval of a", {"a"}, {}, [](const Args& a) {
                 const WeylElement x = a.element("a");
                 check_len(length(x), "interval top");
                 return encode_elements(bruhat_interval(x));
               }});
  c.push_back({"adm", "admissible set", {"lambda", "variant"}, {}, [](const Args& a) {
                 const Vec lambda = a.vec("lambda");
                 if (auto n = a.n(); n && static_cast<int>(lambda.size()) != *n) throw ContextError("lambda has the wrong length");
                 const std::string v = a.has("variant") ? a.text("variant") : "all";
                 AdmVariant variant;
                 if (v == "all") variant = AdmVariant::all;
                 else if (v == "regular") variant = AdmVariant::regular;
                 else if (v == "dual") variant = AdmVariant::dual;
                 else throw InputError("--variant must be all, regular or dual");
                 if (!is_dominant_weight(lambda)) throw ArgumentError("lambda is not dominant");
                 check_len(length(WeylElement::translation(lambda)), "t_lambda");
                 return encode_elements(adm(lambda, variant, a.jobs()));
               }});
  c.push_back({"ap", "admissible pairs for lambda + eta", {"lambda"}, {}, [](const Args& a) {
                 const Vec lambda = a.vec("lambda");
                 if (auto n = a.n(); n && static_cast<int>(lambda.size()) != *n) throw ContextError("lambda has the wrong length");
                 if (!is_dominant_weight(lambda)) throw ArgumentError("lambda is not dominant");
                 check_len(length(WeylElement::translation(lambda)), "t_lambda");
                 Json out = Json::array();
                 for (const auto& pr : ap_enumerate(lambda, a.jobs()))
                   out.push_back(Json{{"w1", io::encode(pr.w1)}, {"w2", io::encode(pr.w2)}});
                 return out;
               }});

  // ---- weights ----
  c.push_back({"weight", "highest weight, central character and depth of a presentation", {"sigma", "w1", "omega"}, {},
               [](const Args& a) {
                 const SerreWeight s = a.serre("sigma");
                 const Int p = a.p();
                 return Json{{"depth", depth(s, p)}, {"kappa", serre_weight(s, p)}, {"zeta", central_character(s)}};
               }});
  c.push_back({"lap", "lowest alcove presentation of F(kappa) with central character zeta", {"kappa", "zeta"}, {},
               [](const Args& a) { return io::encode(lap_of(a.weights("kappa"), a.vec("zeta"), a.p())); }});
  c.push_back({"zchar", "central character of a presentation", {"sigma", "w1", "omega"}, {}, [](const Args& a) {
                 return Json{{"zeta", central_character(a.serre("sigma"))}};
               }});
  c.push_back({"generic", "genericity of mu: --m depth, or --pm polynomial (optionally superscripted by --omega)",
               {"mu", "m", "pm", "omega"}, {}, [](const Args& a) {
                 const WeightTuple mu = a.weights("mu");
                 const Int p = a.p();
                 if (a.has("m")) return encode_bool("generic", generic_m(mu, a.integer("m"), p));
                 if (!a.has("pm")) throw InputError("pass --m or --pm");
                 Polynomial poly = build_pm(static_cast<int>(mu.front().size()), static_cast<int>(a.integer("pm")));
                 if (a.has("omega")) poly = superscript(poly, a.vec("omega"));
                 return encode_bool("generic", generic_poly(mu, poly, p));
               }});

  // ---- inertial types ----
  c.push_back({"type", "normalized type data; --zeta/--lambda add compatibility", {"s", "mu", "kind", "tau", "zeta", "lambda"},
               {}, [](const Args& a) {
                 const TameType tau = a.type("", "tau", TypeKind::over_E);
                 Json out{{"type", io::encode(tau)},
                          {"w_tilde", io::encode(tau.w_tilde())},
                          {"w_tilde_star", io::encode(tau.w_tilde_star())}};
                 if (a.has("lambda")) {
                   const WeightTuple lambda = a.weights("lambda");
                   out["compatibility_character"] = compatibility_character(tau, lambda);
                   if (a.has("zeta")) {
                     const Vec zeta = a.vec("zeta");
                     out["compatible"] = compatible_presentation(tau, zeta, lambda);
                     if (a.has("p")) out["compatible_presentation"] = io::encode(present_compatibly(tau, zeta, lambda, a.p()));
                   }
                 }
                 return out;
               }});
  c.push_back({"descent", "descent data of a type", {"s", "mu", "kind", "tau"}, {}, [](const Args& a) {
                 const DescentData d = descent_data(a.type("", "tau", TypeKind::over_E), a.p());
                 Json a_prime = Json::array(), s_or = Json::array();
                 for (const auto& v : d.a_prime) a_prime.push_back(big_vec(v));
                 for (const auto& w : d.s_or) s_or.push_back(io::encode(w));
                 return Json{{"a_prime", a_prime},   {"alpha", d.alpha},
                             {"alpha_prime", d.alpha_prime}, {"chi_exponents", big_vec(d.chi_exponents)},
                             {"f_prime", d.f_prime}, {"r", d.r},
                             {"s_or", s_or},         {"s_tau", io::encode(d.s_tau)}};
               }});
  c.push_back({"atau", "the exponent vectors a_tau, exact and mod p", {"s", "mu", "kind", "tau"}, {}, [](const Args& a) {
                 const DescentData d = descent_data(a.type("", "tau", TypeKind::over_E), a.p());
                 Json exact = Json::array();
                 for (const auto& row : d.a_tau_exact) {
                   Json r = Json::array();
                   for (const auto& x : row) r.push_back(io::encode(x));
                   exact.push_back(r);
                 }
                 return Json{{"exact", exact}, {"modp", d.a_tau_modp}};
               }});

  // ---- weight sets ----
  c.push_back({"jh", "Jordan-Holder factors of the reduction of sigma(tau) tensor W(lambda)", {"s", "mu", "kind", "tau", "lambda"},
               {}, [](const Args& a) {
                 const TameType tau = a.type("", "tau", TypeKind::over_E);
                 const WeightTuple lambda = a.weights_or_zero("lambda", tau.embeddings(), tau.rank());
                 Json out = Json::array();
                 for (const auto& w : jh_set(tau, lambda, a.p(), a.flag("force")))
                   out.push_back(Json{{"sigma", io::encode(w.sigma)}, {"w1", io::encode(w.w1)}, {"w2", io::encode(w.w2)}});
                 return out;
               }});
  c.push_back({"wq", "predicted weights of a tame F-type", {"s", "mu", "kind", "rho"}, {}, [](const Args& a) {
                 Json out = Json::array();
                 for (const auto& w : w_question(a.type("", "rho", TypeKind::over_F), a.p(), a.flag("force")))
                   out.push_back(Json{{"obvious", w.obvious}, {"sigma", io::encode(w.sigma)}, {"w", io::encode(w.w)},
                                      {"w2", io::encode(w.w2)}});
                 return out;
               }});
  c.push_back({"covers", "covering relation sigma0 covers sigma", {"sigma0", "sigma"}, {}, [](const Args& a) {
                 const SerreWeight s0 = io::decode_serre_weight(a.json("sigma0"), a.n());
                 const SerreWeight s = io::decode_serre_weight(a.json("sigma"), a.n());
                 return Json{{"covers", covers(s0, s, a.p(), a.flag("force"))}, {"covers_by_up", covers_by_up(s0, s)}};
               }});
  c.push_back({"intersect", "weights in both W?(rho) and JH(tau, lambda)",
               {"rho-s", "rho-mu", "rho", "s", "mu", "kind", "tau", "lambda"}, {}, [](const Args& a) {
                 const TameType rho = a.type("rho-", "rho", TypeKind::over_F), tau = a.type("", "tau", TypeKind::over_E);
                 const WeightTuple lambda = a.weights_or_zero("lambda", tau.embeddings(), tau.rank());
                 return encode_weights(intersection(rho, tau, lambda, a.p(), a.flag("force")));
               }});
  c.push_back({"defect", "rho-defect of a weight", {"s", "mu", "kind", "rho", "sigma", "w1", "omega"}, {}, [](const Args& a) {
                 return Json{{"defect", defect(a.type("", "rho", TypeKind::over_F), a.serre("sigma"), a.p(), a.flag("force"))}};
               }});
  c.push_back({"maxdefect", "the defect-maximizing weight of W?(rho) in JH(tau)",
               {"rho-s", "rho-mu", "rho", "s", "mu", "kind", "tau"}, {}, [](const Args& a) {
                 return io::encode(max_defect_weight(a.type("rho-", "rho", TypeKind::over_F), a.type("", "tau", TypeKind::over_E),
                                                     a.p(), a.flag("force")));
               }});
  c.push_back({"bm", "recursive cycle expressions Z_sigma with unit multiplicities", {"s", "mu", "kind", "rho"}, {},
               [](const Args& a) {
                 Json out = Json::array();
                 for (const auto& e : bm_cycles(a.type("", "rho", TypeKind::over_F), a.p(), unit_multiplicity(), a.flag("force")))
                   out.push_back(Json{{"defect", e.defect}, {"expr", encode_cycle(e.expr)}, {"sigma", io::encode(e.sigma)},
                                      {"tau", io::encode(e.tau)}});
                 return out;
               }});

  // ---- mod p flag geometry ----
  c.push_back({"chart", "degree template of the chart at z with height h", {"z", "h"}, {}, [](const Args& a) {
                 const ChartTemplate t = chart_template(a.element("z"), a.integer("h"));
                 Json rows = Json::array();
                 for (int i = 0; i < t.n; ++i) {
                   Json row = Json::array();
                   for (int j = 0; j < t.n; ++j) {
                     const ChartEntry& e = t.at(i, j);
                     row.push_back(Json{{"high", e.high}, {"low", e.low}, {"monic", e.monic}, {"v_prefactor", e.v_prefactor}});
                   }
                   rows.push_back(row);
                 }
                 return Json{{"det_degree", t.det_degree}, {"det_sign", t.det_sign}, {"empty", t.empty}, {"entries", rows},
                             {"free_coefficients", t.free_coefficients()}, {"h", t.h}, {"nu", t.nu}, {"w", io::encode(t.w)}};
               }});
  c.push_back({"cell", "support and dimension data of the cell of w", {"w"}, {}, [](const Args& a) {
                 const CellGeometry g = cell_geometry(a.element("w"));
                 Json support = Json::array();
                 for (const Root& r : g.support) support.push_back(Json{{"degree", g.degrees.at(r)}, {"root", io::encode(r)}});
                 return Json{{"critical_strips", g.critical_strips}, {"dim", g.dim}, {"support", support},
                             {"witness", io::encode(g.witness)}};
               }});
  c.push_back({"monodromy", "solve the monodromy condition on the cell of w; --free lists top coefficients",
               {"w", "abar", "free"}, {}, [](const Args& a) {
                 const WeylElement w = a.element("w");
                 const CellGeometry g = cell_geometry(w);
                 std::map<Root, Int> free;
                 if (a.has("free")) {
                   const Json j = a.json("free");
                   if (j.is_array()) {
                     if (j.size() != g.support.size()) throw InputError("--free needs one value per support root");
                     for (size_t k = 0; k < j.size(); ++k) {
                       if (!j[k].is_number_integer()) throw InputError("--free values must be integers");
                       free[g.support[k]] = j[k].get<Int>();
                     }
                   } else if (j.is_object()) {
                     for (const auto& [key, v] : j.items()) {
                       const Vec ij = io::parse_vec(key);
                       if (ij.size() != 2 || !v.is_number_integer()) throw InputError("--free keys are \"i,j\" (1-based)");
                       free[Root{static_cast<int>(ij[0] - 1), static_cast<int>(ij[1] - 1)}] = v.get<Int>();
                     }
                   } else {
                     throw InputError("--free must be a JSON array or object");
                   }
                 } else {
                   for (const Root& r : g.support) free[r] = 0;
                 }
                 const MonodromyCell m = monodromy_solve(w, a.vec("abar"), free, a.p());
                 Json coeffs = Json::array();
                 for (const auto& [r, v] : m.coefficients) coeffs.push_back(Json{{"coefficients", v}, {"root", io::encode(r)}});
                 return Json{{"a", io::encode(m.a)}, {"coefficients", coeffs}, {"n", io::encode(m.n)}};
               }});
  c.push_back({"nabla", "check the monodromy condition for a Laurent matrix", {"matrix", "abar"}, {}, [](const Args& a) {
                 return encode_bool("ok", verify_nabla(io::decode_laurent(a.json("matrix")), a.vec("abar")));
               }});
  c.push_back({"component", "fixed-point data of the component labelled (w1, omega)", {"w1", "omega"}, {},
               [](const Args& a) {
                 return encode_components(component_data(a.tuple("w1"), a.weights("omega"), a.p(), a.flag("force")));
               }});
  c.push_back({"fiber", "components of the special fiber for (lambda, tau, zeta)", {"lambda", "s", "mu", "kind", "tau", "zeta"}, {},
               [](const Args& a) {
                 Json out = Json::array();
                 for (const auto& comp : special_fiber_components(a.weights("lambda"), a.type("", "tau", TypeKind::over_E),
                                                                  a.vec("zeta"), a.p(), a.flag("force")))
                   out.push_back(encode_components(comp));
                 return out;
               }});

  // ---- Breuil-Kisin gauge ----
  auto twist_of = [](const Args& a) {
    TwistData t;
    t.s = io::decode_perm_tuple(a.json("s"), a.n());
    t.mu = a.weights("mu");
    if (t.s.size() != t.mu.size()) throw ContextError("s and mu have different embedding counts");
    return t;
  };
  c.push_back({"twist", "Ad(s_j^-1 v^(mu_j+eta)) of phi(matrix)", {"matrix", "j", "s", "mu"}, {}, [twist_of](const Args& a) {
                 return io::encode(frobenius_twist(io::decode_series(a.json("matrix")), static_cast<int>(a.integer("j", 0)),
                                                   twist_of(a)));
               }});
  c.push_back({"cob", "change of basis of Frobenius matrices by an Iwahori tuple", {"a", "i", "s", "mu"}, {},
               [twist_of](const Args& a) {
                 Json out = Json::array();
                 for (const auto& m : change_of_basis(io::decode_series_tuple(a.json("a")), io::decode_series_tuple(a.json("i")),
                                                      twist_of(a)))
                   out.push_back(io::encode(m));
                 return out;
               }});
  c.push_back({"straighten", "solve X A z = I A z phi(I)^-1 for I in Iw_1", {"a", "x", "z", "h", "precision"}, {},
               [](const Args& a) {
                 const StraightenResult r = straighten(io::decode_series_tuple(a.json("a")), io::decode_series_tuple(a.json("x")),
                                                       a.tuple("z"), a.integer("h"), a.integer("precision", 40));
                 Json gauge = Json::array();
                 for (const auto& m : r.gauge) gauge.push_back(io::encode(m));
                 return Json{{"gauge", gauge}, {"iterations", r.iterations}};
               }});
  c.push_back({"shape", "shape of the semisimple module; --lambda adds admissibility",
               {"rho-s", "rho-mu", "rho", "s", "mu", "kind", "tau", "lambda"}, {}, [](const Args& a) {
                 const ShapeData sd = shape_semisimple(a.type("rho-", "rho", TypeKind::over_F), a.type("", "tau", TypeKind::over_E));
                 Json out{{"shape", io::encode(sd.shape)}, {"w_rhobar_tau", io::encode(sd.w_rhobar_tau)}};
                 if (a.has("lambda")) {
                   const WeightTuple lambda = a.weights("lambda");
                   out["admissible"] = sd.admissible_for(lambda);
                   WeightTuple shifted = lambda;
                   for (auto& l : shifted) {
                     const Vec e = eta_vec(static_cast<int>(l.size()));
                     for (size_t i = 0; i < l.size(); ++i) l[i] -= e[i];
                   }
                   out["relative_admissible"] = sd.relative_admissible(shifted);
                 }
                 return out;
               }});

  // ---- brute-force references ----
  c.push_back({"oracle", "reference implementations: --kind length|bruhat|up|enumerate",
               {"kind", "a", "b", "degree", "budget"}, {}, [](const Args& a) {
                 const std::string kind = a.text("kind");
                 if (kind == "length") return Json{{"length", oracle::length(a.element("a"))}};
                 if (kind == "bruhat") return encode_bool("leq", oracle::bruhat(a.element("a"), a.element("b")));
                 const int budget = static_cast<int>(a.integer("budget"));
                 check_len(budget, "oracle budget");
                 if (kind == "up") return encode_bool("leq", oracle::up(a.element("a"), a.element("b"), budget));
                 if (kind == "enumerate") {
                   const auto n = a.n();
                   if (!n) throw InputError("missing --n");
                   return encode_elements(oracle::enumerate(*n, a.integer("degree", 0), budget));
                 }
                 throw InputError("--kind must be length, bruhat, up or enumerate");
               }});
  return c;
}

std::string precondition_kind(const PreconditionError& e) {
  if (dynamic_cast<const RegularityError*>(&e)) return "regularity";
  if (dynamic_cast<const GenericityError*>(&e)) return "genericity";
  if (dynamic_cast<const CompatibilityError*>(&e)) return "compatibility";
  if (dynamic_cast<const DepthError*>(&e)) return "depth";
  if (dynamic_cast<const MembershipError*>(&e)) return "membership";
  if (dynamic_cast<const IntegralityError*>(&e)) return "integrality";
  if (dynamic_cast<const ConvergenceError*>(&e)) return "convergence";
  if (dynamic_cast<const CapacityError*>(&e)) return "capacity";
  if (dynamic_cast<const OracleError*>(&e)) return "oracle";
  if (dynamic_cast<const ZeroDivisorError*>(&e)) return "zero divisor";
  return "argument";
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Affine Weyl group, Serre weight and Breuil-Kisin gauge calculator", "awbm"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_help_all_flag("--help-all");

  const std::vector<Command> table = commands();
  struct Bound {
    CLI::App* app;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> switches;
  };
  std::vector<std::unique_ptr<Bound>> bound;
  const std::vector<std::string> common = {"n", "f", "p", "jobs"};
  const std::vector<std::string> common_switches = {"stdin", "force"};
  for (const Command& cmd : table) {
    auto b = std::make_unique<Bound>();
    b->app = app.add_subcommand(cmd.name, cmd.help);
    std::vector<std::string> names = common;
    for (const auto& o : cmd.options)
      if (std::find(names.begin(), names.end(), o) == names.end()) names.push_back(o);
    for (const auto& o : names) {
      b->values[o];
      b->app->add_option("--" + o, b->values[o]);
    }
    std::vector<std::string> sw = common_switches;
    sw.insert(sw.end(), cmd.switches.begin(), cmd.switches.end());
    for (const auto& s : sw) {
      b->switches[s] = false;
      b->app->add_flag("--" + s, b->switches[s]);
    }
    bound.push_back(std::move(b));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return malformed_input;
  }

  for (size_t k = 0; k < table.size(); ++k) {
    Bound& b = *bound[k];
    if (!b.app->parsed()) continue;
    try {
      std::map<std::string, std::string> given;
      for (const auto& [name, value] : b.values)
        if (b.app->count("--" + name) > 0) given[name] = value;
      Json payload = Json::object();
      if (b.switches["stdin"]) {
        payload = Json::parse(in);
        if (!payload.is_object()) throw InputError("stdin payload must be a JSON object");
      }
      const Args a(given, b.switches, payload);
      const Json result = table[k].run(a);
      out << result.dump(2) << '\n';
      return ok;
    } catch (const Json::exception& e) {
      err << "malformed input: " << e.what() << '\n';
      return malformed_input;
    } catch (const InputError& e) {
      err << "malformed input: " << e.what() << '\n';
      return malformed_input;
    } catch (const PreconditionError& e) {
      err << "precondition failed (" << precondition_kind(e) << "): " << e.what() << '\n';
      return precondition_failed;
    } catch (const InvariantError& e) {
      err << "internal invariant violated: " << e.what() << '\n';
      return internal_error;
    } catch (const std::exception& e) {
      err << "internal error: " << e.what() << '\n';
      return internal_error;
    }
  }
  err << "error: no subcommand given\n";
  return malformed_input;
}

}  // namespace awbm::cli
