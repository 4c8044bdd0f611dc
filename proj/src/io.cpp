#include "awbm/io.hpp"

#include <charconv>
#include <set>

#include "awbm/errors.hpp"

namespace awbm::io {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\n");
  if (a == std::string::npos) return {};
  const size_t b = s.find_last_not_of(" \t\n");
  return s.substr(a, b - a + 1);
}

Int parse_int(const std::string& raw) {
  const std::string s = trim(raw);
  Int v = 0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) throw InputError("not an integer: '" + raw + "'");
  return v;
}

Int get_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
  return j.get<Int>();
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

// 1-based images -> Perm, validating bijectivity.
Perm from_one_based(const std::vector<Int>& img) {
  std::vector<int> out;
  std::set<Int> seen;
  const auto n = static_cast<Int>(img.size());
  for (Int x : img) {
    if (x < 1 || x > n || !seen.insert(x).second) throw InputError("not a permutation in one-line notation");
    out.push_back(static_cast<int>(x - 1));
  }
  return Perm(std::move(out));
}

std::vector<Int> digits_or_commas(const std::string& s) {
  std::vector<Int> out;
  if (s.find(',') != std::string::npos) {
    for (const auto& part : split(s, ',')) out.push_back(parse_int(part));
  } else {
    for (char c : s) {
      if (c < '0' || c > '9') throw InputError("bad permutation digit '" + std::string(1, c) + "'");
      out.push_back(c - '0');
    }
  }
  return out;
}

int require_n(std::optional<int> n, const std::string& text) {
  if (!n) throw InputError("rank is needed to read '" + text + "'; pass --n");
  if (*n < 1) throw InputError("rank must be positive");
  return *n;
}

}  // namespace

Perm parse_perm(const std::string& raw, std::optional<int> n) {
  const std::string text = trim(raw);
  if (text.empty()) throw InputError("empty permutation");
  if (text == "e") return Perm::identity(require_n(n, text));
  if (text.front() == '(') {
    const int size = require_n(n, text);
    std::vector<int> img(static_cast<size_t>(size));
    for (int i = 0; i < size; ++i) img[static_cast<size_t>(i)] = i;
    Perm acc(img);
    size_t pos = 0;
    while (pos < text.size()) {
      if (text[pos] != '(') throw InputError("bad cycle notation '" + text + "'");
      const size_t close = text.find(')', pos);
      if (close == std::string::npos) throw InputError("unbalanced cycle notation '" + text + "'");
      const auto cyc = digits_or_commas(text.substr(pos + 1, close - pos - 1));
      std::set<Int> seen;
      for (Int x : cyc)
        if (x < 1 || x > size || !seen.insert(x).second) throw InputError("bad cycle entry in '" + text + "'");
      std::vector<int> c(img);
      for (size_t k = 0; k < cyc.size(); ++k)
        c[static_cast<size_t>(cyc[k] - 1)] = static_cast<int>(cyc[(k + 1) % cyc.size()] - 1);
      acc = acc * Perm(c);
      pos = close + 1;
    }
    return acc;
  }
  Perm w = from_one_based(digits_or_commas(text));
  if (n && w.size() != *n) throw ContextError("permutation '" + text + "' has the wrong size");
  return w;
}

Vec parse_vec(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw InputError("empty weight");
  Vec out;
  for (const auto& part : split(text, ',')) out.push_back(parse_int(part));
  return out;
}

// ---- encoders ------------------------------------------------------------

Json encode(const Perm& w) {
  Json out = Json::array();
  for (int x : w.image()) out.push_back(x + 1);
  return out;
}

Json encode(const WeylElement& a) { return Json{{"convention", "t_nu_then_w"}, {"nu", a.nu}, {"w", encode(a.w)}}; }

Json encode(const WeylTuple& t) {
  Json out = Json::array();
  for (const auto& a : t) out.push_back(encode(a));
  return out;
}

Json encode(const SerreWeight& sigma) {
  return Json{{"omega", sigma.omega}, {"w1", encode(sigma.w1)}, {"zeta", central_character(sigma)}};
}

Json encode(const TameType& tau) {
  Json s = Json::array();
  for (const auto& w : tau.s) s.push_back(encode(w));
  return Json{{"kind", tau.kind == TypeKind::over_E ? "E" : "F"}, {"mu", tau.mu}, {"s", s}};
}

Json encode(const BigInt& x) {
  if (x >= std::numeric_limits<Int>::min() && x <= std::numeric_limits<Int>::max()) return static_cast<Int>(x);
  return x.str();
}

Json encode(const BigRational& x) {
  if (boost::multiprecision::denominator(x) == 1) return encode(BigInt(boost::multiprecision::numerator(x)));
  return boost::multiprecision::numerator(x).str() + "/" + boost::multiprecision::denominator(x).str();
}

Json encode(const LaurentMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.size(); ++j) {
      Json entry = Json::object();
      for (const auto& [e, c] : m(i, j).terms()) entry[std::to_string(e)] = c;
      row.push_back(entry);
    }
    rows.push_back(row);
  }
  return Json{{"entries", rows}, {"p", m.prime()}};
}

Json encode(const SeriesMatrix& m) {
  const Int prec = m.precision();
  const FiniteField& F = m.field();
  Json rows = Json::array();
  for (int i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.size(); ++j) {
      Json entry = Json::object();
      const Series& s = m(i, j);
      for (Int e = s.low(); e < prec; ++e) {
        const Fq c = s.coeff(e);
        if (F.is_zero(c)) continue;
        entry[std::to_string(e)] = F.degree() == 1 ? Json(c.a) : Json::array({c.a, c.b});
      }
      row.push_back(entry);
    }
    rows.push_back(row);
  }
  return Json{{"degree", F.degree()}, {"entries", rows}, {"p", F.prime()}, {"precision", prec}};
}

Json encode(const Root& r) { return Json::array({r.i + 1, r.j + 1}); }

// ---- decoders ------------------------------------------------------------

Perm decode_perm(const Json& j, std::optional<int> n) {
  if (j.is_string()) return parse_perm(j.get<std::string>(), n);
  if (j.is_object() && j.contains("w")) {
    const WeylElement a = decode_element(j, n);
    for (Int x : a.nu)
      if (x != 0) throw InputError("expected a finite Weyl group element");
    return a.w;
  }
  if (!j.is_array()) throw InputError("permutation must be an array or a string");
  std::vector<Int> img;
  for (const auto& x : j) img.push_back(get_int(x, "permutation entry"));
  Perm w = from_one_based(img);
  if (n && w.size() != *n) throw ContextError("permutation has the wrong size");
  return w;
}

WeylElement decode_element(const Json& j, std::optional<int> n) {
  if (j.is_string()) {
    const std::string text = trim(j.get<std::string>());
    const size_t colon = text.find(':');
    if (colon == std::string::npos) {
      const Perm w = parse_perm(text, n);
      return WeylElement::finite(w);
    }
    const Vec nu = parse_vec(text.substr(colon + 1));
    if (n && static_cast<int>(nu.size()) != *n) throw ContextError("translation part has the wrong length");
    return WeylElement(parse_perm(text.substr(0, colon), static_cast<int>(nu.size())), nu);
  }
  if (!j.is_object()) throw InputError("element must be an object or a string");
  if (j.contains("convention") && j.at("convention") != "t_nu_then_w")
    throw InputError("unsupported element convention");
  const Vec nu = decode_vec(field(j, "nu"));
  const Perm w = decode_perm(field(j, "w"), static_cast<int>(nu.size()));
  if (w.size() != static_cast<int>(nu.size())) throw ContextError("permutation and translation sizes differ");
  if (n && w.size() != *n) throw ContextError("element has the wrong rank");
  return WeylElement(w, nu);
}

WeylTuple decode_tuple(const Json& j, std::optional<int> n) {
  WeylTuple out;
  if (j.is_string()) {
    for (const auto& part : split(j.get<std::string>(), ';')) out.push_back(decode_element(Json(part), n));
  } else if (j.is_object()) {
    out.push_back(decode_element(j, n));
  } else if (j.is_array()) {
    for (const auto& x : j) out.push_back(decode_element(x, n));
  } else {
    throw InputError("element tuple must be an array or a string");
  }
  if (out.empty()) throw InputError("empty element tuple");
  for (const auto& a : out)
    if (a.rank() != out.front().rank()) throw ContextError("tuple entries have different ranks");
  return out;
}

std::vector<Perm> decode_perm_tuple(const Json& j, std::optional<int> n) {
  std::vector<Perm> out;
  if (j.is_string()) {
    for (const auto& part : split(j.get<std::string>(), ';')) out.push_back(parse_perm(part, n));
  } else if (j.is_array() && !j.empty() && j.front().is_number_integer()) {
    out.push_back(decode_perm(j, n));
  } else if (j.is_array()) {
    for (const auto& x : j) out.push_back(decode_perm(x, n));
  } else {
    throw InputError("permutation tuple must be an array or a string");
  }
  if (out.empty()) throw InputError("empty permutation tuple");
  return out;
}

Vec decode_vec(const Json& j) {
  if (j.is_string()) return parse_vec(j.get<std::string>());
  if (!j.is_array()) throw InputError("weight must be an array or a string");
  Vec out;
  for (const auto& x : j) out.push_back(get_int(x, "weight entry"));
  return out;
}

WeightTuple decode_weight_tuple(const Json& j) {
  WeightTuple out;
  if (j.is_string()) {
    for (const auto& part : split(j.get<std::string>(), ';')) out.push_back(parse_vec(part));
  } else if (j.is_array() && !j.empty() && j.front().is_number_integer()) {
    out.push_back(decode_vec(j));
  } else if (j.is_array()) {
    for (const auto& x : j) out.push_back(decode_vec(x));
  } else {
    throw InputError("weight tuple must be an array or a string");
  }
  if (out.empty()) throw InputError("empty weight tuple");
  return out;
}

SerreWeight decode_serre_weight(const Json& j, std::optional<int> n) {
  SerreWeight sigma;
  if (j.is_string()) {
    const auto parts = split(j.get<std::string>(), '/');
    if (parts.size() != 2) throw InputError("Serre weight text form is <w1 tuple>/<omega tuple>");
    sigma.w1 = decode_tuple(Json(parts[0]), n);
    sigma.omega = decode_weight_tuple(Json(parts[1]));
  } else {
    sigma.w1 = decode_tuple(field(j, "w1"), n);
    sigma.omega = decode_weight_tuple(field(j, "omega"));
  }
  if (sigma.w1.size() != sigma.omega.size()) throw ContextError("w1 and omega have different embedding counts");
  for (const auto& o : sigma.omega)
    if (static_cast<int>(o.size()) != sigma.rank()) throw ContextError("omega has the wrong rank");
  if (j.is_object() && j.contains("zeta") && decode_vec(j.at("zeta")) != central_character(sigma))
    throw InputError("zeta does not match the presentation");
  return sigma;
}

LaurentMatrix decode_laurent(const Json& j) {
  const Int p = get_int(field(j, "p"), "p");
  if (p < 2) throw InputError("p must be at least 2");
  const Json& rows = field(j, "entries");
  if (!rows.is_array() || rows.empty()) throw InputError("entries must be a non-empty array of rows");
  const int n = static_cast<int>(rows.size());
  LaurentMatrix m(n, p);
  for (int i = 0; i < n; ++i) {
    const Json& row = rows.at(static_cast<size_t>(i));
    if (!row.is_array() || static_cast<int>(row.size()) != n) throw InputError("matrix is not square");
    for (int k = 0; k < n; ++k) {
      const Json& entry = row.at(static_cast<size_t>(k));
      if (!entry.is_object()) throw InputError("matrix entry must map exponents to coefficients");
      for (const auto& [e, c] : entry.items()) m.at(i, k) += LaurentPoly::monomial(p, get_int(c, "coefficient"), parse_int(e));
    }
  }
  return m;
}

SeriesMatrix decode_series(const Json& j) {
  const Int p = get_int(field(j, "p"), "p");
  const int degree = j.contains("degree") ? static_cast<int>(get_int(j.at("degree"), "degree")) : 1;
  const Int prec = get_int(field(j, "precision"), "precision");
  const FiniteField F = [&] {
    try {
      return FiniteField(p, degree);
    } catch (const ArgumentError& e) {
      throw InputError(e.what());
    }
  }();
  const Json& rows = field(j, "entries");
  if (!rows.is_array() || rows.empty()) throw InputError("entries must be a non-empty array of rows");
  const int n = static_cast<int>(rows.size());
  SeriesMatrix m(n, F, prec);
  for (int i = 0; i < n; ++i) {
    const Json& row = rows.at(static_cast<size_t>(i));
    if (!row.is_array() || static_cast<int>(row.size()) != n) throw InputError("matrix is not square");
    for (int k = 0; k < n; ++k) {
      const Json& entry = row.at(static_cast<size_t>(k));
      if (!entry.is_object()) throw InputError("matrix entry must map exponents to coefficients");
      for (const auto& [es, c] : entry.items()) {
        const Int e = parse_int(es);
        if (e >= prec) throw InputError("coefficient of v^" + es + " lies beyond the stated precision");
        Fq x;
        if (c.is_array()) {
          if (c.size() != 2) throw InputError("F_{p^2} coefficient must be a pair");
          x = F.from_int(get_int(c[0], "coefficient"));
          const Int b = mod_pos(get_int(c[1], "coefficient"), p);
          if (b != 0 && degree == 1) throw InputError("F_p coefficient with an irrational part");
          x.b = b;
        } else {
          x = F.from_int(get_int(c, "coefficient"));
        }
        m.at(i, k).set(e, x);
      }
    }
  }
  return m;
}

std::vector<SeriesMatrix> decode_series_tuple(const Json& j) {
  std::vector<SeriesMatrix> out;
  if (j.is_object()) {
    out.push_back(decode_series(j));
  } else if (j.is_array()) {
    for (const auto& x : j) out.push_back(decode_series(x));
  } else {
    throw InputError("series tuple must be an object or an array");
  }
  if (out.empty()) throw InputError("empty series tuple");
  return out;
}

}  // namespace awbm::io
