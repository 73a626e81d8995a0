#include "cliffcalc/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace cliff::io {

using nlohmann::json;

json mv_to_json(const Multivector& m) { return json(m.to_canonical()); }

Multivector mv_from_json(const Algebra& alg, const json& j) {
  if (!j.is_array() || j.size() != alg.dim())
    throw ParseError("multivector: expected an array of 2^n doubles");
  std::vector<double> c = j.get<std::vector<double>>();
  return Multivector::from_canonical(alg, c);
}

namespace {

// std::byteswap is C++23; this toolchain targets C++20
std::uint64_t bswap64(std::uint64_t v) { return __builtin_bswap64(v); }
std::uint32_t bswap32(std::uint32_t v) { return __builtin_bswap32(v); }

void put_le(double v, std::ostream& os) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  if constexpr (std::endian::native == std::endian::big) bits = bswap64(bits);
  os.write(reinterpret_cast<const char*>(&bits), 8);
}

double get_le(std::istream& is) {
  std::uint64_t bits = 0;
  is.read(reinterpret_cast<char*>(&bits), 8);
  if constexpr (std::endian::native == std::endian::big) bits = bswap64(bits);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void mv_write_binary(const Multivector& m, std::ostream& os) {
  std::uint32_t n = static_cast<std::uint32_t>(m.algebra().n());
  if constexpr (std::endian::native == std::endian::big) n = bswap32(n);
  os.write(reinterpret_cast<const char*>(&n), 4);
  for (double v : m.to_canonical()) put_le(v, os);
}

Multivector mv_read_binary(std::istream& is) {
  std::uint32_t n = 0;
  is.read(reinterpret_cast<char*>(&n), 4);
  if constexpr (std::endian::native == std::endian::big) n = bswap32(n);
  const Algebra& alg = Algebra::get(static_cast<int>(n));
  std::vector<double> c(alg.dim());
  for (double& v : c) v = get_le(is);
  if (!is) throw ParseError("multivector binary: truncated stream");
  return Multivector::from_canonical(alg, c);
}

CommutingParavectorOp operator_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    const int d = j.at("d").get<int>();
    const auto& comps = j.at("components");
    if (!comps.is_array() || static_cast<int>(comps.size()) != n + 1)
      throw ParseError("operator: 'components' must hold n+1 matrices");
    const Algebra& alg = Algebra::get(n);
    std::vector<Eigen::MatrixXd> mats;
    for (const auto& cj : comps) {
      if (!cj.is_array() || static_cast<int>(cj.size()) != d * d)
        throw ParseError("operator: each component must hold d*d row-major doubles");
      Eigen::MatrixXd m(d, d);
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) m(i, k) = cj[i * d + k].get<double>();
      mats.push_back(std::move(m));
    }
    return CommutingParavectorOp(alg, std::move(mats));
  } catch (const json::exception& e) {
    throw ParseError(std::string("operator file: ") + e.what());
  }
}

json operator_to_json(const CommutingParavectorOp& T) {
  json comps = json::array();
  for (const auto& m : T.components()) {
    std::vector<double> flat;
    for (int i = 0; i < T.d(); ++i)
      for (int k = 0; k < T.d(); ++k) flat.push_back(m(i, k));
    comps.push_back(flat);
  }
  return json{{"n", T.n()}, {"d", T.d()}, {"components", comps}};
}

ContourSpec contour_from_json(const json& j, int n) {
  try {
    ContourSpec c;
    c.center = j.at("center").get<double>();
    c.radius = j.at("radius").get<double>();
    c.slice_unit = j.at("slice_unit").get<std::vector<double>>();
    c.nodes = j.value("nodes", 256);
    if (static_cast<int>(c.slice_unit.size()) != n)
      throw ParseError("contour: slice_unit must have n entries");
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("contour file: ") + e.what());
  }
}

json contour_to_json(const ContourSpec& c) {
  return json{{"center", c.center}, {"radius", c.radius}, {"slice_unit", c.slice_unit},
              {"nodes", c.nodes}};
}

SlicePolynomial polynomial_from_json(const Algebra& alg, const json& j) {
  try {
    const std::string side = j.at("side").get<std::string>();
    if (side != "left" && side != "right")
      throw ParseError("polynomial: side must be 'left' or 'right'");
    std::vector<Multivector> coeffs;
    for (const auto& cj : j.at("coefficients")) coeffs.push_back(mv_from_json(alg, cj));
    if (coeffs.empty()) throw ParseError("polynomial: needs at least one coefficient");
    return SlicePolynomial(side == "left" ? Side::left : Side::right, std::move(coeffs));
  } catch (const json::exception& e) {
    throw ParseError(std::string("polynomial file: ") + e.what());
  }
}

json polynomial_to_json(const SlicePolynomial& p) {
  json coeffs = json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(mv_to_json(c));
  return json{{"side", p.side() == Side::left ? "left" : "right"}, {"coefficients", coeffs}};
}

json matrix_to_json(const CliffordMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.d(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.d(); ++k) row.push_back(mv_to_json(m.at(i, k)));
    rows.push_back(row);
  }
  return json{{"n", m.algebra().n()}, {"d", m.d()}, {"entries", rows}};
}

CliffordMatrix matrix_from_json(const json& j) {
  try {
    const Algebra& alg = Algebra::get(j.at("n").get<int>());
    const int d = j.at("d").get<int>();
    CliffordMatrix m(alg, d);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) m.at(i, k) = mv_from_json(alg, j.at("entries")[i][k]);
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("matrix file: ") + e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_json_file(const json& j, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write " + path);
  f << j.dump(2) << "\n";
}

}  // namespace cliff::io
