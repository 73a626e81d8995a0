#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "cliffcalc/algebra.hpp"
#include "cliffcalc/operator_calculus.hpp"

namespace cliff::io {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Multivector <-> flat array of 2^n doubles in canonical (grade, lex)
/// blade order.
nlohmann::json mv_to_json(const Multivector& m);
Multivector mv_from_json(const Algebra& alg, const nlohmann::json& j);

/// Binary dump: uint32 n, then 2^n little-endian doubles in canonical order.
void mv_write_binary(const Multivector& m, std::ostream& os);
Multivector mv_read_binary(std::istream& is);

/// Operator file: {"n": .., "d": .., "components": [(n+1) x [d*d row-major]]}
CommutingParavectorOp operator_from_json(const nlohmann::json& j);
nlohmann::json operator_to_json(const CommutingParavectorOp& T);

/// Contour file: {"center": .., "radius": .., "slice_unit": [n], "nodes": ..}
ContourSpec contour_from_json(const nlohmann::json& j, int n);
nlohmann::json contour_to_json(const ContourSpec& c);

/// Polynomial file: {"side": "left"|"right", "coefficients": [[2^n] ...]}
SlicePolynomial polynomial_from_json(const Algebra& alg, const nlohmann::json& j);
nlohmann::json polynomial_to_json(const SlicePolynomial& p);

/// Matrix dump: {"n", "d", "entries": d x d x 2^n (canonical order)}.
nlohmann::json matrix_to_json(const CliffordMatrix& m);
CliffordMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const nlohmann::json& j, const std::string& path);

}  // namespace cliff::io
