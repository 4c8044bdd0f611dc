#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "awbm/bk_gauge.hpp"

// JSON encodings shared by the command-line tool and the acceptance driver.
// Decoders accept either the structured JSON form or a string holding the
// compact text form; malformed data raises InputError.
namespace awbm::io {

using Json = nlohmann::json;

// Text forms:
//   permutation  e | (12)(34) | 213 | 2,1,3          (1-based; e and cycles need n)
//   element      <perm>:<nu>  e.g. (12):1,0  or  e:2,0  (the element t_nu o w)
//   tuples       items joined by ';'
//   weights      1,0   and   1,0;2,0 for per-embedding tuples
//   Serre weight <w1 tuple>/<omega tuple>
Perm parse_perm(const std::string& text, std::optional<int> n);
Vec parse_vec(const std::string& text);

Json encode(const Perm& w);
Json encode(const WeylElement& a);
Json encode(const WeylTuple& t);
Json encode(const SerreWeight& sigma);
Json encode(const TameType& tau);
Json encode(const BigInt& x);
Json encode(const BigRational& x);
Json encode(const LaurentMatrix& m);
Json encode(const SeriesMatrix& m);
Json encode(const Root& r);

Perm decode_perm(const Json& j, std::optional<int> n);
WeylElement decode_element(const Json& j, std::optional<int> n);
WeylTuple decode_tuple(const Json& j, std::optional<int> n);
std::vector<Perm> decode_perm_tuple(const Json& j, std::optional<int> n);
Vec decode_vec(const Json& j);
WeightTuple decode_weight_tuple(const Json& j);
SerreWeight decode_serre_weight(const Json& j, std::optional<int> n);
LaurentMatrix decode_laurent(const Json& j);
SeriesMatrix decode_series(const Json& j);
std::vector<SeriesMatrix> decode_series_tuple(const Json& j);

}  // namespace awbm::io
