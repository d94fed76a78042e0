#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "bloch/cochain.hpp"
#include "bloch/errors.hpp"
#include "bloch/regulator.hpp"
#include "bloch/torsion.hpp"
#include "io.hpp"

using namespace bloch;
using io::Json;

namespace {

struct RunConfig {
  unsigned precision = 50;
  int tolerance = 25;  // |x| < 10^-tolerance counts as zero
  bool symmetric = false;
  bool json = false;
  std::string input;
  std::string output;
  // fiveterm check without an input file
  int random_pairs = 0;
  unsigned seed = 1;
};

unsigned print_digits(const RunConfig& c) { return c.precision > 20 ? c.precision - 10 : 10; }

std::string range_note(const RunConfig& c) {
  return c.symmetric ? "mod 4pi^2, real part in (-2pi^2, 2pi^2]" : "mod 4pi^2, real part in [0, 4pi^2)";
}

Json annotation(const RunConfig& c) {
  Json a;
  a["precision"] = c.precision;
  a["range"] = c.symmetric ? "symmetric" : "canonical";
  return a;
}

std::string verdict_text(const WedgeVerdict& v) {
  if (v.zero) return "yes";
  return v.basis_relative ? "no (relative to the given basis, which is not asserted saturated)" : "no";
}

Json verdict_json(const WedgeVerdict& v) {
  Json j;
  j["zero"] = v.zero;
  j["basis_relative"] = v.basis_relative;
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

std::string slot_label(const NumberField& nf, int slot, const RunConfig& c) {
  const EmbeddingContext ctx = nf.embedding(slot, c.precision);
  std::ostringstream s;
  s << "slot " << slot << " (" << (nf.slot_is_real(slot) ? "real" : "complex") << ", x = "
    << decimal(ctx.root(), 12) << ")";
  return s.str();
}

Json regulators(const ExtBlochSum& s, const RunConfig& c, std::ostream& out) {
  Json arr = Json::array();
  const NumberField& nf = s.basis.field();
  for (const SlotRegulator& sv : reg_vector(s, c.precision)) {
    const std::string v = sv.value.to_string(print_digits(c), c.symmetric);
    if (!c.json) out << "  " << slot_label(nf, sv.slot, c) << ": R = " << v << "\n";
    Json e;
    e["slot"] = sv.slot;
    e["real"] = sv.real;
    e["root"] = decimal(nf.embedding(sv.slot, c.precision).root(), 12);
    e["value"] = v;
    arr.push_back(e);
  }
  if (!c.json) out << "  [" << range_note(c) << ", " << c.precision << " digits]\n";
  return arr;
}

// -------------------------------------------------------------- commands

Json field_info(const RunConfig& c, std::ostream& out) {
  const NumberField nf = io::field(io::read_json(c.input));
  const FieldElement w = nf.torsion_generator();
  const auto autos = automorphisms(nf);
  Json j;
  j["degree"] = nf.degree();
  j["signature"] = {nf.r1(), nf.r2()};
  j["m"] = nf.torsion_order();
  j["w"] = w.to_string();
  j["automorphisms"] = autos.size();
  Json emb = Json::array();
  for (int s = 0; s < nf.slots(); ++s) {
    Json e;
    e["slot"] = s;
    e["real"] = nf.slot_is_real(s);
    e["root"] = decimal(nf.embedding(s, c.precision).root(), print_digits(c));
    emb.push_back(e);
  }
  j["embeddings"] = emb;
  if (!c.json) {
    out << "degree " << nf.degree() << ", signature (" << nf.r1() << ", " << nf.r2() << ")\n";
    out << "m = " << nf.torsion_order() << ", w = " << w.to_string() << "\n";
    out << "automorphisms: " << autos.size() << "\n";
    for (const auto& e : emb)
      out << "  slot " << e["slot"].get<int>() << (e["real"].get<bool>() ? " real    " : " complex ")
          << e["root"].get<std::string>() << "\n";
  }
  return j;
}

Json bloch_verify(const RunConfig& c, std::ostream& out) {
  const ExtBlochSum s = io::ext_sum(io::read_json(c.input));
  const WedgeVerdict hat = is_in_Bhat(s);
  const BlochSum b = normalize(project(s));
  const WedgeVerdict plain = is_in_B(b, s.basis);
  Json j;
  j["normal_form"] = normalize(s).to_string();
  j["in_Bhat"] = verdict_json(hat);
  j["projection"] = b.to_string();
  j["in_B"] = verdict_json(plain);
  if (!c.json) {
    out << "normal form: " << j["normal_form"].get<std::string>() << "\n";
    out << "in B^: " << verdict_text(hat) << "\n";
    out << "projection: " << j["projection"].get<std::string>() << "\n";
    out << "in B: " << verdict_text(plain) << "\n";
  }
  return j;
}

Json bloch_regulator(const RunConfig& c, std::ostream& out) {
  const ExtBlochSum s = io::ext_sum(io::read_json(c.input));
  const WedgeVerdict hat = is_in_Bhat(s);
  Json j;
  j["in_Bhat"] = verdict_json(hat);
  if (!c.json) out << "in B^: " << verdict_text(hat) << "\n";
  j["regulator"] = regulators(s, c, out);
  j["annotation"] = annotation(c);
  return j;
}

Json fiveterm_check(const RunConfig& c, std::ostream& out) {
  std::vector<std::pair<FieldElement, FieldElement>> pairs;
  NumberField nf;
  std::optional<MultBasis> given;
  if (!c.input.empty()) {
    const Json in = io::read_json(c.input);
    try {
      nf = io::field(in.at("field"));
      if (in.contains("basis")) given = io::basis(nf, in.at("basis"));
      for (const auto& p : in.at("pairs")) pairs.emplace_back(io::element(nf, p.at(0)), io::element(nf, p.at(1)));
    } catch (const Json::exception& e) {
      input_error("InvalidInput", e.what());
    }
  } else {
    if (c.random_pairs <= 0) input_error("InvalidInput", "give an input file or --random N");
    nf = NumberField::create({0, 1});
    std::mt19937 rng(c.seed);
    std::uniform_int_distribution<int> num(-50, 50), den(1, 30);
    while (static_cast<int>(pairs.size()) < c.random_pairs) {
      const FieldElement x = nf.from_rational(mpq_class(num(rng), den(rng)));
      const FieldElement y = nf.from_rational(mpq_class(num(rng), den(rng)));
      try {
        five_term(x, y);
      } catch (const Error&) {
        continue;
      }
      pairs.emplace_back(x, y);
    }
  }

  Json rows = Json::array();
  bool all_ok = true;
  const Real tol = pow10(-c.tolerance);
  for (const auto& [x, y] : pairs) {
    const auto z = five_term(x, y);
    Logarithm log = given ? Logarithm::verified(*given)
                          : (nf.degree() == 1 ? Logarithm::rational(nf) : Logarithm::symbolic(nf));
    for (const auto& t : z) {
      log(t);
      log(nf.one() - t);
    }
    const MultBasis B = log.basis();
    const Flattening f0 = make_flattening(log(x), log(nf.one() - x), B);
    const Flattening f1 = make_flattening(log(y), log(nf.one() - y), B);
    const auto rel = lift_five_term(f0, f1, B);
    ExtBlochSum rho(B);
    for (std::size_t i = 0; i < 5; ++i) rho.add(i % 2 == 0 ? 1 : -1, rel[i]);
    const WedgeVerdict v = is_in_Bhat(rho);
    Real worst = 0;
    for (const auto& sv : reg_vector(rho, c.precision)) {
      const Real d = distance_mod_4pi2(sv.value.value, Complex(0));
      if (d > worst) worst = d;
    }
    const bool ok = v.zero && worst < tol;
    all_ok = all_ok && ok;
    Json r;
    r["x"] = x.to_string();
    r["y"] = y.to_string();
    r["nu_hat_zero"] = v.zero;
    r["max_abs_R"] = worst.str(3, std::ios_base::scientific);
    r["ok"] = ok;
    rows.push_back(r);
    if (!c.json)
      out << (ok ? "ok   " : "FAIL ") << "x = " << r["x"].get<std::string>() << ", y = " << r["y"].get<std::string>()
          << ", nu^ = 0: " << (v.zero ? "yes" : "no") << ", |R| = " << r["max_abs_R"].get<std::string>() << "\n";
  }
  if (!c.json)
    out << pairs.size() << " relations, tolerance 1e-" << c.tolerance << ", " << c.precision << " digits: "
        << (all_ok ? "all hold" : "FAILURES") << "\n";
  Json j;
  j["relations"] = rows;
  j["all_ok"] = all_ok;
  j["annotation"] = annotation(c);
  if (!all_ok) {
    if (c.json) out << j.dump(2) << "\n";
    math_error("FiveTermFailed", "some relations do not hold");
  }
  return j;
}

Json torsion_table(const RunConfig& c, std::ostream& out) {
  const NumberField nf = io::field(io::read_json(c.input));
  const TorsionProfile tp = torsion_profile(nf);
  Json rows = Json::array();
  if (!c.json) out << "p  nu_p  nu'_p\n";
  for (const NuP& r : tp.primes) {
    Json e;
    e["p"] = r.p;
    e["nu"] = r.nu;
    e["nu_prime"] = r.nu_prime;
    if (r.lower_bound_only) e["lower_bound_only"] = true;
    rows.push_back(e);
    if (!c.json)
      out << r.p << "  " << r.nu << "     " << r.nu_prime << (r.lower_bound_only ? "  (lower bound)" : "") << "\n";
  }
  Json j;
  j["primes"] = rows;
  j["w"] = tp.w.get_str();
  j["m"] = nf.torsion_order();
  j["certified"] = tp.certified;
  if (!c.json) {
    out << "w_F = " << tp.w.get_str() << (tp.certified ? "" : " (not certified)") << "\n";
    out << "|mu_F| = " << nf.torsion_order() << "\n";
  }
  return j;
}

Json torsion_generators(const RunConfig& c, std::ostream& out) {
  const NumberField nf = io::field(io::read_json(c.input));
  const TorsionProfile tp = torsion_profile(nf);
  Json rows = Json::array();
  for (const NuP& r : tp.primes) {
    if (r.nu == 0) continue;
    Json e;
    e["p"] = r.p;
    e["beta"] = beta_p(nf, r.p).to_string();
    const FlattenedTorsion ft = flattened_torsion(nf, r.p);
    e["n"] = ft.n;
    e["c"] = ft.c.to_string();
    e["in_Bhat"] = ft.element_verdict.zero;
    e["order"] = certify_order(ft.element, c.precision);
    if (!c.json) {
      out << "p = " << r.p << ": beta = " << e["beta"].get<std::string>() << "\n";
      out << "  lambda^([g]), n = " << ft.n << ", c = " << e["c"].get<std::string>()
          << ", in B^: " << verdict_text(ft.element_verdict) << ", order " << e["order"].get<long>() << "\n";
    }
    if (ft.half) {
      e["half_in_Bhat"] = ft.half_verdict->zero;
      e["half_order"] = certify_order(*ft.half, c.precision);
      if (!c.json)
        out << "  half Q: in B^: " << verdict_text(*ft.half_verdict) << ", order " << e["half_order"].get<long>()
            << "\n";
    }
    rows.push_back(e);
  }
  Json j;
  j["generators"] = rows;
  j["annotation"] = annotation(c);
  return j;
}

Json torsion_order_cmd(const RunConfig& c, std::ostream& out) {
  const ExtBlochSum s = io::ext_sum(io::read_json(c.input));
  const long n = certify_order(s, c.precision);
  Json j;
  j["order"] = n;
  j["annotation"] = annotation(c);
  if (!c.json) out << "order " << n << " (" << c.precision << " digits)\n";
  return j;
}

Json cycle_invariant(const RunConfig& c, std::ostream& out) {
  const ManifoldData M = io::manifold(io::read_json(c.input));
  const ManifoldInvariant inv = manifold_invariant(M, c.precision);
  Json j;
  j["simplices"] = M.cycle.size();
  j["edge_classes"] = M.cycle.edge_class_count();
  j["translates"] = inv.translates;
  j["translates_searched"] = inv.searched;
  j["edge_conditions"] = inv.edges.ok();
  j["in_Bhat"] = verdict_json(inv.bhat);
  Json slots = Json::array();
  for (const ManifoldSlot& s : inv.slots) {
    Json e;
    e["slot"] = s.reg.slot;
    e["value"] = s.reg.value.to_string(print_digits(c), c.symmetric);
    e["im"] = decimal(s.reg.value.value.im, print_digits(c));
    e["bloch_wigner"] = decimal(s.bloch_wigner, print_digits(c));
    slots.push_back(e);
  }
  j["regulator"] = slots;
  if (inv.psl_liftable) j["psl_liftable"] = *inv.psl_liftable;
  j["annotation"] = annotation(c);
  if (!c.json) {
    out << M.cycle.size() << " simplices, " << M.cycle.edge_class_count() << " edge classes\n";
    out << "translates" << (inv.searched ? " (searched)" : "") << ":";
    for (const auto& pq : inv.translates) out << " (" << pq[0] << ", " << pq[1] << ")";
    out << "\nedge conditions: " << (inv.edges.ok() ? "hold" : "fail") << "\n";
    out << "in B^: " << verdict_text(inv.bhat) << "\n";
    for (const auto& e : slots) {
      out << "  " << slot_label(M.field, e["slot"].get<int>(), c) << ": R = " << e["value"].get<std::string>() << "\n";
      out << "    Im R = " << e["im"].get<std::string>() << ", sum eps D(z) = " << e["bloch_wigner"].get<std::string>()
          << "\n";
    }
    out << "  [" << range_note(c) << ", " << c.precision << " digits]\n";
    if (inv.psl_liftable) out << "PSL class lifts: " << (*inv.psl_liftable ? "yes" : "no") << "\n";
  }
  return j;
}

int exit_code(ErrorClass cls) {
  switch (cls) {
    case ErrorClass::Input:
      return 2;
    case ErrorClass::Math:
      return 3;
    case ErrorClass::Precision:
      return 4;
  }
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bloch: extended Bloch group computations over number fields"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--precision", cfg.precision, "decimal digits (>= 20)")->check(CLI::Range(20u, 100000u));
  app.add_option("--tolerance", cfg.tolerance, "zero tolerance exponent E, i.e. 10^-E")->check(CLI::Range(1, 100000));
  app.add_flag("--symmetric-range", cfg.symmetric, "print real parts in (-2pi^2, 2pi^2]");
  app.add_flag("--json", cfg.json, "JSON output");
  app.add_option("-o,--output", cfg.output, "write to a file instead of stdout");

  std::function<Json(const RunConfig&, std::ostream&)> handler;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, auto fn, bool input_required) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->fallthrough();
    auto* opt = sub->add_option("input", cfg.input, "JSON fixture");
    if (input_required) opt->required();
    sub->callback([&handler, fn] { handler = fn; });
    return sub;
  };

  CLI::App* field = app.add_subcommand("field", "number field data")->require_subcommand(1);
  field->fallthrough();
  leaf(field, "info", "degree, signature, roots of unity, embeddings", field_info, true);

  CLI::App* bloch = app.add_subcommand("bloch", "elements of the extended Bloch group")->require_subcommand(1);
  bloch->fallthrough();
  leaf(bloch, "verify", "membership in B^ and B", bloch_verify, true);
  leaf(bloch, "regulator", "regulator at every embedding", bloch_regulator, true);

  CLI::App* five = app.add_subcommand("fiveterm", "lifted five-term relations")->require_subcommand(1);
  five->fallthrough();
  CLI::App* check = leaf(five, "check", "check relations from a file or random rational pairs", fiveterm_check, false);
  check->add_option("--random", cfg.random_pairs, "number of random rational pairs");
  check->add_option("--seed", cfg.seed, "random seed");

  CLI::App* tor = app.add_subcommand("torsion", "torsion of the extended Bloch group")->require_subcommand(1);
  tor->fallthrough();
  leaf(tor, "table", "nu_p table and w_F", torsion_table, true);
  leaf(tor, "generators", "beta_p and the flattened generators", torsion_generators, true);
  leaf(tor, "order", "certified order of an element", torsion_order_cmd, true);

  CLI::App* cyc = app.add_subcommand("cycle", "flattened 3-cycles")->require_subcommand(1);
  cyc->fallthrough();
  leaf(cyc, "invariant", "invariant of a flattened triangulation", cycle_invariant, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::ofstream file;
  if (!cfg.output.empty()) {
    file.open(cfg.output);
    if (!file) {
      std::cerr << "error: cannot write " << cfg.output << "\n";
      return 2;
    }
  }
  std::ostream& out = cfg.output.empty() ? std::cout : file;
  try {
    PrecisionScope scope(work_digits(cfg.precision));
    const Json result = handler(cfg, out);
    if (cfg.json) out << result.dump(2) << "\n";
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.error_class());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
