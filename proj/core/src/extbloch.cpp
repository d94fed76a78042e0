#include "bloch/extbloch.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "bloch/errors.hpp"

namespace bloch {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t mod(std::int64_t a, std::int64_t b) { return a - b * floor_div(a, b); }

// k reduced into [0, modulus), r untouched
ExtElement reduce_k(ExtElement e, std::int64_t modulus) {
  e.k = mod(e.k, modulus);
  // drop trailing zeros so equal elements have equal keys
  while (!e.r.empty() && e.r.back() == 0) e.r.pop_back();
  return e;
}

}  // namespace

Flattening make_flattening(const ExtElement& e, const ExtElement& f, const MultBasis& basis) {
  FieldElement x = pi(e, basis), y = pi(f, basis);
  if (x.is_one()) math_error("NotAFlattening", "pi(e) = 1");
  if (!(x + y).is_one())
    math_error("NotAFlattening", "pi(e) + pi(f) = " + (x + y).to_string() + " for " + e.to_string() + ", " +
                                     f.to_string());
  return Flattening{e, f};
}

FieldElement cross_ratio(const Flattening& fl, const MultBasis& basis) { return pi(fl.e, basis); }

std::array<FieldElement, 5> five_term(const FieldElement& x, const FieldElement& y) {
  const NumberField& nf = x.field();
  auto bad = [](const FieldElement& z) { return z.is_zero() || z.is_one(); };
  if (bad(x) || bad(y) || x == y) math_error("DegenerateTuple", "need x != y outside {0, 1}");
  FieldElement one = nf.one();
  std::array<FieldElement, 5> t{x, y, y / x, (one - x.inverse()) / (one - y.inverse()), (one - x) / (one - y)};
  for (const auto& z : t)
    if (bad(z)) math_error("DegenerateTuple", "derived entry " + z.to_string() + " in {0, 1}");
  return t;
}

std::array<Flattening, 5> lift_five_term(const Flattening& fl0, const Flattening& fl1, const MultBasis& basis,
                                         const std::optional<ExtElement>& f2_in) {
  const FieldElement x0 = pi(fl0.e, basis), x1 = pi(fl1.e, basis);
  auto tuple = five_term(x0, x1);
  const auto& [e0, f0] = fl0;
  const auto& [e1, f1] = fl1;
  ExtElement e2 = e1 - e0;
  ExtElement f2 = f2_in ? *f2_in : log_lift(basis.field().one() - tuple[2], basis);
  ExtElement e3 = e1 - e0 - f1 + f0;
  ExtElement f3 = f2 - f1;
  ExtElement e4 = f0 - f1;
  ExtElement f4 = f2 - f1 + e0;
  std::array<Flattening, 5> out{make_flattening(e0, f0, basis), make_flattening(e1, f1, basis),
                                make_flattening(e2, f2, basis), make_flattening(e3, f3, basis),
                                make_flattening(e4, f4, basis)};
  for (int i = 0; i < 5; ++i)
    if (pi(out[i].e, basis) != tuple[i]) math_error("NotAFlattening", "lifted tuple does not project correctly");
  return out;
}

// ---------------------------------------------------------------- ExtBlochSum

ExtBlochSum& ExtBlochSum::add(std::int64_t n, const Flattening& fl) {
  if (n != 0) terms.push_back({n, fl});
  return *this;
}

ExtBlochSum& ExtBlochSum::add_chi(const ExtElement& e, std::int64_t n) {
  chi_part += n * e;
  return *this;
}

ExtBlochSum& ExtBlochSum::operator+=(const ExtBlochSum& o) {
  if (!basis.same_as(o.basis)) input_error("BasisMismatch", "sums over different bases");
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  chi_part += o.chi_part;
  return *this;
}

ExtBlochSum& ExtBlochSum::operator-=(const ExtBlochSum& o) {
  if (!basis.same_as(o.basis)) input_error("BasisMismatch", "sums over different bases");
  for (const auto& t : o.terms) terms.push_back({-t.coeff, t.fl});
  chi_part -= o.chi_part;
  return *this;
}

ExtBlochSum& ExtBlochSum::operator*=(std::int64_t n) {
  for (auto& t : terms) t.coeff *= n;
  terms.erase(std::remove_if(terms.begin(), terms.end(), [](const FlatTerm& t) { return t.coeff == 0; }),
              terms.end());
  chi_part *= n;
  return *this;
}

ExtBlochSum operator+(ExtBlochSum a, const ExtBlochSum& b) { return a += b; }
ExtBlochSum operator-(ExtBlochSum a, const ExtBlochSum& b) { return a -= b; }
ExtBlochSum operator*(std::int64_t n, ExtBlochSum a) { return a *= n; }

std::string ExtBlochSum::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms) {
    os << (first ? "" : " + ") << t.coeff << "*[" << t.fl.e.to_string() << ", " << t.fl.f.to_string() << "]";
    first = false;
  }
  if (!chi_part.is_zero() || first) os << (first ? "" : " + ") << "chi" << chi_part.to_string();
  return os.str();
}

ExtBlochSum chi(const ExtElement& e, const MultBasis& basis) {
  ExtBlochSum s(basis);
  s.chi_part = reduce_k(e, 2 * basis.m());
  return s;
}

ExtBlochSum rebase(const ExtBlochSum& s, const MultBasis& target) {
  if (s.basis.same_as(target)) return s;
  const MultBasis& b = s.basis;
  if (!b.field().same_as(target.field()) || b.m() != target.m() || !(b.w() == target.w()) ||
      b.rank() > target.rank())
    input_error("BasisMismatch", "target basis does not extend the source");
  for (std::size_t j = 0; j < b.rank(); ++j)
    if (!(b.free_gen(j) == target.free_gen(j))) input_error("BasisMismatch", "target basis does not extend the source");
  ExtBlochSum out = s;
  out.basis = target;
  return out;
}

ExtBlochSum normalize(const ExtBlochSum& s) {
  const std::int64_t m = s.basis.m();
  std::map<Flattening, std::int64_t> merged;
  ExtElement c = s.chi_part;
  for (const auto& t : s.terms) {
    Flattening base{reduce_k(t.fl.e, m), reduce_k(t.fl.f, m)};
    const std::int64_t p = (t.fl.e.k - base.e.k) / m;
    const std::int64_t q = (t.fl.f.k - base.f.k) / m;
    // (e + p, f + q) - (e, f) = chi(q e - p f + p q)
    c += t.coeff * (q * base.e - p * base.f + s.basis.iota(p * q));
    merged[base] += t.coeff;
  }
  ExtBlochSum out(s.basis);
  for (const auto& [fl, n] : merged)
    if (n != 0) out.terms.push_back({n, fl});
  out.chi_part = reduce_k(c, 2 * m);
  return out;
}

bool same_element(const ExtBlochSum& a, const ExtBlochSum& b) {
  ExtBlochSum na = normalize(a), nb = normalize(b);
  if (!(na.chi_part == nb.chi_part) || na.terms.size() != nb.terms.size()) return false;
  for (std::size_t i = 0; i < na.terms.size(); ++i)
    if (na.terms[i].coeff != nb.terms[i].coeff || !(na.terms[i].fl == nb.terms[i].fl)) return false;
  return true;
}

// chi(e) = (e, f + 1) - (e, f) contributes e ^ iota(1)
WedgeElement nu_hat(const ExtBlochSum& s) {
  WedgeElement w;
  for (const auto& t : s.terms) w.push_back({t.coeff, t.fl.e, t.fl.f});
  if (!s.chi_part.is_zero()) w.push_back({1, s.chi_part, s.basis.iota(1)});
  return w;
}

WedgeVerdict is_in_Bhat(const ExtBlochSum& s) { return wedge_is_zero(nu_hat(s), s.basis); }

// ---------------------------------------------------------------- BlochSum

BlochSum& BlochSum::add(std::int64_t n, const FieldElement& z) {
  if (z.is_zero() || z.is_one()) math_error("DegenerateTuple", "Bloch symbol of 0 or 1");
  if (n != 0) terms.push_back({n, z});
  return *this;
}

std::string BlochSum::to_string() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::int64_t n = terms[i].coeff;
    if (i > 0) {
      os << (n < 0 ? " - " : " + ");
      n = n < 0 ? -n : n;
    } else if (n == -1) {
      os << "-";
    }
    if (n != 1 && n != -1) os << n;
    os << "[" << terms[i].z.to_string() << "]";
  }
  return os.str();
}

BlochSum normalize(const BlochSum& s) {
  std::map<FieldElement, std::int64_t> merged;
  for (const auto& t : s.terms) merged[t.z] += t.coeff;
  BlochSum out(s.field);
  for (const auto& [z, n] : merged)
    if (n != 0) out.terms.push_back({n, z});
  return out;
}

bool operator==(const BlochSum& a, const BlochSum& b) {
  BlochSum na = normalize(a), nb = normalize(b);
  if (na.terms.size() != nb.terms.size()) return false;
  for (std::size_t i = 0; i < na.terms.size(); ++i)
    if (na.terms[i].coeff != nb.terms[i].coeff || na.terms[i].z != nb.terms[i].z) return false;
  return true;
}

BlochSum project(const ExtBlochSum& s) {
  BlochSum out(s.basis.field());
  for (const auto& t : s.terms) out.add(t.coeff, pi(t.fl.e, s.basis));
  return normalize(out);
}

WedgeElement nu(const BlochSum& s, const MultBasis& basis) {
  WedgeElement w;
  for (const auto& t : s.terms)
    w.push_back({t.coeff, log_lift(t.z, basis), log_lift(basis.field().one() - t.z, basis)});
  return w;
}

WedgeVerdict is_in_B(const BlochSum& s, const MultBasis& basis) {
  return wedge_is_zero_mod_torsion(nu(s, basis), basis);
}

// ---------------------------------------------------------------- PSL

PSLFlattening make_psl_flattening(const ExtElement& e, const ExtElement& f, const MultBasis& basis) {
  FieldElement x = pi(e, basis), y = pi(f, basis);
  for (int se : {1, -1})
    for (int sf : {1, -1}) {
      FieldElement sx = se > 0 ? x : -x;
      if (sx.is_one() || sx.is_zero()) continue;
      if ((sx + (sf > 0 ? y : -y)).is_one()) return PSLFlattening{e, f, se, sf};
    }
  math_error("NotAFlattening", "no signs with +-pi(e) +- pi(f) = 1");
}

std::string PSLSum::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms) {
    os << (first ? "" : " + ") << t.coeff << "*[" << t.fl.e.to_string() << ", " << t.fl.f.to_string() << "]"
       << (t.fl.se > 0 ? "+" : "-") << (t.fl.sf > 0 ? "+" : "-");
    first = false;
  }
  if (!chi_bar.is_zero() || first) os << (first ? "" : " + ") << "chibar" << chi_bar.to_string();
  return os.str();
}

PSLSum normalize(const PSLSum& s) {
  const std::int64_t m = s.basis.m(), h = m / 2;
  std::map<Flattening, std::pair<std::int64_t, std::pair<int, int>>> merged;
  ExtElement c = s.chi_bar;
  for (const auto& t : s.terms) {
    Flattening base{reduce_k(t.fl.e, h), reduce_k(t.fl.f, h)};
    const std::int64_t a = (t.fl.e.k - base.e.k) / h;
    const std::int64_t b = (t.fl.f.k - base.f.k) / h;
    // (e + a/2, f + b/2) - (e, f) = chibar(b e - a f + a b/2)
    c += t.coeff * (b * base.e - a * base.f + ExtElement(a * b * h, {}));
    const int se = (a % 2 == 0) ? t.fl.se : -t.fl.se;
    const int sf = (b % 2 == 0) ? t.fl.sf : -t.fl.sf;
    auto& slot = merged[base];
    slot.first += t.coeff;
    slot.second = {se, sf};
  }
  PSLSum out{s.basis, {}, reduce_k(c, m)};
  for (const auto& [fl, v] : merged)
    if (v.first != 0) out.terms.push_back({v.first, PSLFlattening{fl.e, fl.f, v.second.first, v.second.second}});
  return out;
}

PSLSum psl_project(const ExtBlochSum& s) {
  PSLSum out{s.basis, {}, 2 * s.chi_part};
  for (const auto& t : s.terms) out.terms.push_back({t.coeff, PSLFlattening{t.fl.e, t.fl.f, 1, 1}});
  return normalize(out);
}

bool psl_liftable(const FieldElement& x, const MultBasis& basis) {
  ExtElement e = log_lift(x, basis);
  if (e.k % 2 != 0) return false;
  return std::all_of(e.r.begin(), e.r.end(), [](std::int64_t v) { return v % 2 == 0; });
}

// ---------------------------------------------------------------- Galois

ExtBlochSum apply_covering(const ExtBlochSum& s, const MultBasis& target, const FieldElement& tau_gen) {
  const MultBasis& src = s.basis;
  if (target.m() != src.m()) input_error("BasisMismatch", "torsion orders differ");
  const FieldElement tw = apply_automorphism(tau_gen, src.w());
  std::int64_t a = -1;
  FieldElement acc = target.field().one();
  for (std::int64_t j = 0; j < target.m(); ++j) {
    if (acc == tw) {
      a = j;
      break;
    }
    acc *= target.w();
  }
  if (a < 0) math_error("NotInSubgroup", "image of w is not a power of the target generator");
  std::vector<ExtElement> images;
  for (std::size_t j = 0; j < src.rank(); ++j)
    images.push_back(log_lift(apply_automorphism(tau_gen, src.free_gen(j)), target));
  auto psi = [&](const ExtElement& e) {
    ExtElement out(e.k * a, {});
    for (std::size_t j = 0; j < e.r.size(); ++j)
      if (e.r[j] != 0) out += e.r[j] * images.at(j);
    return out;
  };
  ExtBlochSum out(target);
  for (const auto& t : s.terms) out.add(t.coeff, make_flattening(psi(t.fl.e), psi(t.fl.f), target));
  out.chi_part = a * psi(s.chi_part);
  return normalize(out);
}

ExtBlochSum galois_apply(const FieldElement& tau_gen, const ExtBlochSum& s) {
  return apply_covering(s, s.basis, tau_gen);
}

BlochSum galois_apply(const FieldElement& tau_gen, const BlochSum& s) {
  BlochSum out(s.field);
  for (const auto& t : s.terms) out.add(t.coeff, apply_automorphism(tau_gen, t.z));
  return normalize(out);
}

}  // namespace bloch
