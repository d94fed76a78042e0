#include "io.hpp"

#include <fstream>

#include "bloch/errors.hpp"

namespace bloch::io {

namespace {

[[noreturn]] void bad(const std::string& what) { input_error("InvalidInput", what); }

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

std::vector<mpq_class> rationals(const Json& j) {
  if (!j.is_array()) bad("expected a coefficient array");
  std::vector<mpq_class> out;
  for (const auto& x : j) out.push_back(rational(x));
  return out;
}

std::array<int, 4> perm_of(const Json& j) {
  std::array<int, 4> p{};
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.size() != 4) bad("permutation string must have four characters");
    for (std::size_t i = 0; i < 4; ++i) {
      if (s[i] < '0' || s[i] > '3') bad("permutation string must use 0-3");
      p[i] = s[i] - '0';
    }
    return p;
  }
  if (!j.is_array() || j.size() != 4) bad("permutation must be four vertices");
  for (std::size_t i = 0; i < 4; ++i) p[i] = j[i].get<int>();
  return p;
}

}  // namespace

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) input_error("InvalidInput", "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    input_error("InvalidInput", path + ": " + e.what());
  }
}

mpz_class integer(const Json& j) {
  try {
    if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
    if (j.is_string()) return mpz_class(j.get<std::string>());
  } catch (const std::invalid_argument&) {
  }
  bad("expected an integer, got " + j.dump());
}

mpq_class rational(const Json& j) {
  try {
    if (j.is_number_integer()) return mpq_class(mpz_class(std::to_string(j.get<long long>())));
    if (j.is_string()) {
      mpq_class q(j.get<std::string>());
      if (q.get_den() == 0) bad("zero denominator");
      q.canonicalize();
      return q;
    }
  } catch (const std::invalid_argument&) {
  }
  bad("expected a rational, got " + j.dump());
}

NumberField field(const Json& j) {
  try {
    const Json& poly = j.is_array() ? j : need(j, "polynomial");
    if (!poly.is_array() || poly.size() < 2) bad("polynomial needs degree >= 1");
    std::vector<mpz_class> c;
    for (const auto& x : poly) c.push_back(integer(x));
    std::optional<TorsionHint> hint;
    if (j.is_object() && j.contains("torsion")) {
      const Json& t = j.at("torsion");
      hint = TorsionHint{need(t, "order").get<unsigned long>(), rationals(need(t, "generator"))};
    }
    return NumberField::create(c, hint);
  } catch (const Json::exception& e) {
    bad(std::string("field: ") + e.what());
  }
}

FieldElement element(const NumberField& nf, const Json& j) {
  if (j.is_number_integer() || j.is_string()) return nf.from_rational(rational(j));
  std::vector<mpq_class> c = rationals(j);
  if (static_cast<int>(c.size()) > nf.degree()) bad("element has more coefficients than the field degree");
  return nf.element(std::move(c));
}

MultBasis basis(const NumberField& nf, const Json& j) {
  try {
    std::vector<FieldElement> gens;
    if (j.contains("free"))
      for (const auto& g : j.at("free")) gens.push_back(element(nf, g));
    std::optional<FieldElement> w;
    if (j.contains("torsion_generator")) w = element(nf, j.at("torsion_generator"));
    if (j.value("symbolic", false)) return MultBasis::symbolic(nf, gens, w);
    return MultBasis::create(nf, gens, j.value("saturated", false), w);
  } catch (const Json::exception& e) {
    bad(std::string("basis: ") + e.what());
  }
}

ExtElement ext(const Json& j) {
  if (!j.is_array() || j.empty()) bad("E coordinates are [k, r1, ..]");
  try {
    std::vector<std::int64_t> r;
    for (std::size_t i = 1; i < j.size(); ++i) r.push_back(j[i].get<std::int64_t>());
    return ExtElement(j[0].get<std::int64_t>(), r);
  } catch (const Json::exception& e) {
    bad(std::string("E coordinates: ") + e.what());
  }
}

ExtBlochSum ext_sum(const Json& j) {
  try {
    const NumberField nf = field(need(j, "field"));
    const MultBasis B = basis(nf, j.contains("basis") ? j.at("basis") : Json::object());
    ExtBlochSum s(B);
    if (j.contains("terms"))
      for (const auto& t : j.at("terms")) {
        const std::int64_t n = t.value("n", std::int64_t{1});
        if (t.contains("z")) {
          const FieldElement z = element(nf, t.at("z"));
          if (z.is_zero() || z.is_one()) math_error("NotAFlattening", "z in {0, 1}");
          s.add(n, make_flattening(log_lift(z, B), log_lift(nf.one() - z, B), B));
        } else {
          s.add(n, make_flattening(ext(need(t, "e")), ext(need(t, "f")), B));
        }
      }
    if (j.contains("chi")) s.add_chi(ext(j.at("chi")));
    return s;
  } catch (const Json::exception& e) {
    bad(std::string("element: ") + e.what());
  }
}

ManifoldData manifold(const Json& j) {
  try {
    const NumberField nf = field(need(j, "field"));
    const int tets = need(j, "tets").get<int>();
    std::vector<Gluing> gluings;
    for (const auto& g : need(j, "gluings")) {
      if (!g.is_array() || g.size() != 5) bad("gluing is [tet, face, tet', face', perm]");
      gluings.push_back(Gluing{g[0].get<int>(), g[1].get<int>(), g[2].get<int>(), g[3].get<int>(), perm_of(g[4])});
    }
    std::vector<int> orientations;
    if (j.contains("orientations")) orientations = j.at("orientations").get<std::vector<int>>();
    ManifoldData M{nf, Triangulated3Cycle::create(tets, gluings, orientations), {}, std::nullopt, std::nullopt};
    for (const auto& z : need(j, "shapes")) M.shapes.push_back(element(nf, z));
    if (j.contains("flattenings")) {
      std::vector<std::array<std::int64_t, 2>> pq;
      for (const auto& x : j.at("flattenings")) {
        if (!x.is_array() || x.size() != 2) bad("flattening translates are [p, q]");
        pq.push_back({x[0].get<std::int64_t>(), x[1].get<std::int64_t>()});
      }
      M.flattenings = pq;
    }
    if (j.contains("obstruction")) M.obstruction = element(nf, j.at("obstruction"));
    return M;
  } catch (const Json::exception& e) {
    bad(std::string("triangulation: ") + e.what());
  }
}

}  // namespace bloch::io
