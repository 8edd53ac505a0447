#pragma once

// JSON encodings:
//   complex      [re, im]
//   Poly1        [[re, im], ...] ascending by degree
//   HomogPoly3   {"degree": d, "terms": [[i, j, k, [re, im]], ...]}
//   Conic        [m00, m01, m02, m11, m12, m22], each [re, im]

#include <qpencil/conic_pencil.hpp>
#include <qpencil/cubic_pencil.hpp>
#include <qpencil/error.hpp>
#include <qpencil/poly_core.hpp>

#include <json.hpp>

#include <array>
#include <vector>

namespace qpencil::json_io {

using json = nlohmann::json;

inline json encode(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex decode_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw DomainError("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json encode(const Poly1& p) {
  json a = json::array();
  for (Complex c : p.coeffs()) a.push_back(encode(c));
  return a;
}

inline Poly1 decode_poly1(const json& j) {
  if (!j.is_array()) throw DomainError("polynomial must be an array of coefficients");
  std::vector<Complex> c;
  for (const auto& e : j) c.push_back(decode_complex(e));
  return Poly1(std::move(c));
}

inline json encode(const HomogPoly3& f) {
  json terms = json::array();
  for (const auto& [e, c] : f.terms()) terms.push_back(json::array({e[0], e[1], e[2], encode(c)}));
  return {{"degree", f.degree()}, {"terms", terms}};
}

inline HomogPoly3 decode_homog(const json& j) {
  if (!j.is_object() || !j.contains("degree") || !j.contains("terms"))
    throw DomainError("homogeneous polynomial needs degree and terms");
  HomogPoly3 f(j.at("degree").get<int>());
  for (const auto& t : j.at("terms")) {
    if (!t.is_array() || t.size() != 4) throw DomainError("term must be [i, j, k, [re, im]]");
    f.add_term({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()}, decode_complex(t[3]));
  }
  return f;
}

inline json encode(const Conic& c) {
  json a = json::array();
  for (Complex z : c.upper()) a.push_back(encode(z));
  return a;
}

inline Conic decode_conic(const json& j) {
  if (!j.is_array() || j.size() != 6) throw DomainError("conic must list 6 upper-triangle entries");
  std::array<Complex, 6> u{};
  for (int i = 0; i < 6; ++i) u[i] = decode_complex(j[i]);
  return Conic(u);
}

template <std::size_t N>
json encode(const ProjPoint<N>& p) {
  json a = json::array();
  for (Complex z : p.coords()) a.push_back(encode(z));
  return a;
}

inline json encode(const Line& l) { return encode(l.as_point()); }

inline json encode(const RootSet& rs) {
  json a = json::array();
  for (const auto& r : rs)
    a.push_back({{"value", encode(r.value)}, {"multiplicity", r.multiplicity}, {"residual", r.residual}});
  return a;
}

inline json encode(const CriticalPointRecord& r) {
  json j{{"x", encode(r.x)}, {"y", encode(r.y)}};
  if (r.stratum == Stratum::LineAtInfinity) j["z"] = encode(r.z);
  j["lambda"] = r.lambda ? encode(*r.lambda) : json("inf");
  j["residual"] = r.residual;
  if (r.stratum != Stratum::Affine) j["stratum"] = to_string(r.stratum);
  return j;
}

} // namespace qpencil::json_io
