#include <qpencil/json_io.hpp>
#include <qpencil/qpencil.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

using namespace qpencil;
using json = nlohmann::json;
namespace jio = qpencil::json_io;

namespace {

struct Globals {
  bool json = false;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

// Imaginary parts below the printed precision are shown as real.
std::string fmt(Complex z) {
  if (std::abs(z.imag()) <= 1e-13 * std::max(1.0, std::abs(z.real()))) return fmt(z.real());
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real() == 0.0 ? 0.0 : z.real(), z.imag());
  return buf;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

Poly1 real_poly(const std::vector<double>& coeffs) {
  std::vector<Complex> c(coeffs.begin(), coeffs.end());
  return Poly1(std::move(c));
}

// {"coeffs": [...]} or a bare coefficient array.
Poly1 read_poly_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
  return jio::decode_poly1(j.is_object() ? j.at("coeffs") : j);
}

RootSet shift_roots(const RootSet& rs, Complex shift, const Poly1& p) {
  std::vector<Root> out;
  for (const auto& r : rs) out.push_back({r.value + shift, r.multiplicity, std::abs(p(r.value + shift))});
  return RootSet(std::move(out));
}

RootSet solve_by_pencil(const Poly1& p) {
  if (p.is_zero() || p.degree() != 4) throw DomainError("the pencil method needs a quartic");
  const Complex lead = p.leading();
  const DepressedQuartic dq = depress_quartic({p[3] / lead, p[2] / lead, p[1] / lead, p[0] / lead});
  return shift_roots(solve_quartic_via_pencil(dq), dq.shift, p);
}

RootSet solve_with(const Poly1& p, const std::string& method) {
  if (method == "pencil") return solve_by_pencil(p);
  if (method == "oracle") {
    if (!p.is_zero() && (p.degree() < 1 || p.degree() > 4))
      throw DomainError("degree unsupported: " + std::to_string(p.degree()) + " (solve covers 1 to 4)");
    return find_roots_iterative(p);
  }
  return solve_any(p);
}

void print_roots(const RootSet& rs) {
  for (const auto& r : rs)
    std::cout << fmt(r.value) << "  multiplicity " << r.multiplicity << "  residual " << fmt(r.residual) << '\n';
}

std::string fmt_point(const PlanePoint& p) {
  if (!p.at_infinity()) {
    const auto a = p.affine();
    return "(" + fmt(a[0]) + ", " + fmt(a[1]) + ")";
  }
  return "[" + fmt(p[0]) + " : " + fmt(p[1]) + " : " + fmt(p[2]) + "]";
}

std::string fmt_line(const Line& l) {
  return fmt(l[0]) + " u + " + fmt(l[1]) + " v + " + fmt(l[2]) + " w = 0";
}

std::string fmt_poly(const Poly1& p, const char* var) {
  std::string s;
  for (int i = p.degree(); i >= 0; --i) {
    if (p[i] == Complex(0) && p.degree() > 0) continue;
    if (!s.empty()) s += " + ";
    s += "(" + fmt(p[i]) + ")";
    if (i > 0) s += std::string(" ") + var + (i > 1 ? "^" + std::to_string(i) : "");
  }
  return s;
}

// ---- subcommands ----

int cmd_solve(const Globals& g, const std::vector<double>& coeffs, const std::string& input, const std::string& method) {
  if (coeffs.empty() == input.empty()) throw DomainError("give coefficients or --input, not both");
  const Poly1 p = input.empty() ? real_poly(coeffs) : read_poly_file(input);
  const RootSet rs = solve_with(p, method);
  if (g.json)
    emit({{"method", method}, {"roots", jio::encode(rs)}});
  else
    print_roots(rs);
  return 0;
}

int cmd_resolvent(const Globals& g, double p, double q, double r) {
  const DepressedQuartic dq{Complex(p), Complex(q), Complex(r), Complex(0)};
  const Poly1 res = resolvent_cubic(dq);
  const RootSet roots = solve_cubic(res[2], res[1], res[0]);
  std::string note;
  if (p == -7 && q == 6 && r == 0)
    note = "the cubic l^3 - 15 l^2 + 49 l - 36 sometimes printed for this quartic is a misprint: "
           "it does not vanish at l = 1; the l^2 coefficient is 2p = -14";
  if (g.json) {
    json j{{"cubic", jio::encode(res)}, {"roots", jio::encode(roots)}};
    if (!note.empty()) j["note"] = note;
    emit(j);
  } else {
    std::cout << "cubic: " << fmt_poly(res, "l") << '\n';
    print_roots(roots);
    if (!note.empty()) std::cout << "note: " << note << '\n';
  }
  return 0;
}

json encode_points(const std::vector<PlanePointWithMultiplicity>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back({{"point", jio::encode(p.point)}, {"multiplicity", p.multiplicity}});
  return a;
}

int report_pencil(const Globals& g, const PencilOfConics& pc) {
  const SingularMembers sm = singular_members(pc);
  bool degenerate = false;
  json members = json::array();
  for (const auto& m : sm.members) {
    if (m.multiplicity > 1) degenerate = true;
    json jm{{"param", jio::encode(m.param)},
            {"lambda", m.lambda ? jio::encode(*m.lambda) : json("inf")},
            {"multiplicity", m.multiplicity},
            {"conic", jio::encode(m.conic)}};
    std::vector<Line> lines;
    if (m.conic.rank() > 0) {
      const auto [a, b] = split_degenerate_conic(m.conic);
      lines = {a, b};
      jm["lines"] = json::array({jio::encode(a), jio::encode(b)});
    }
    if (!g.json) {
      std::cout << "lambda " << (m.lambda ? fmt(*m.lambda) : std::string("inf")) << " (multiplicity " << m.multiplicity
                << ")\n";
      for (const auto& l : lines) std::cout << "  line " << fmt_line(l) << '\n';
    }
    members.push_back(jm);
  }
  const auto pts = base_points(pc);
  if (degenerate) warn("repeated singular member: base points collide");
  if (g.json) {
    emit({{"members", members}, {"base_points", encode_points(pts)}});
  } else {
    std::cout << "base points:\n";
    for (const auto& p : pts) std::cout << "  " << fmt_point(p.point) << "  multiplicity " << p.multiplicity << '\n';
  }
  return 0;
}

int cmd_pencil_singular(const Globals& g, double p, double q, double r) {
  return report_pencil(g, quartic_to_pencil({Complex(p), Complex(q), Complex(r), Complex(0)}));
}

int cmd_conics_intersect(const Globals& g, const std::vector<double>& entries, const std::string& input) {
  if (entries.empty() == input.empty()) throw DomainError("give 12 conic entries or --input, not both");
  Conic c1, c2;
  if (input.empty()) {
    if (entries.size() != 12) throw DomainError("expected 12 numbers: two conics as upper-triangle entries");
    std::array<Complex, 6> a{}, b{};
    for (int i = 0; i < 6; ++i) {
      a[i] = entries[i];
      b[i] = entries[i + 6];
    }
    c1 = Conic(a);
    c2 = Conic(b);
  } else {
    std::ifstream in(input);
    if (!in) throw DomainError("cannot open " + input);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw DomainError(input + ": " + e.what());
    }
    if (!j.is_array() || j.size() != 2) throw DomainError("conics-intersect input must be [conic, conic]");
    c1 = jio::decode_conic(j[0]);
    c2 = jio::decode_conic(j[1]);
  }
  return report_pencil(g, PencilOfConics{c1, c2});
}

int cmd_critical_points(const Globals& g, int seeds, int threads, bool check) {
  SearchConfig cfg;
  if (seeds > 0) cfg.seed_count = seeds;
  if (threads > 0) cfg.threads = threads;
  if (g.seed_given) cfg.rng_seed = g.seed;
  const CriticalPointReport rep = find_critical_points(default_cubic_pencil(), cfg);
  if (rep.incomplete_coverage_likely) warn("incomplete coverage likely (seed count below the coverage floor)");

  json points = json::array();
  for (const auto& r : rep.all()) points.push_back(jio::encode(r));
  int status = 0;
  json rows = json::array();
  if (check) {
    const auto checks = check_reference_table(rep);
    const auto& ref = reference_critical_points();
    int matched = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
      matched += checks[i].matched;
      rows.push_back({{"row", checks[i].row}, {"matched", checks[i].matched}});
      if (!g.json) {
        const auto& rr = ref[i];
        std::cout << "row " << checks[i].row << ": " << (checks[i].matched ? "PASS" : "FAIL") << "  reference x "
                  << fmt(rr.x) << ", y " << fmt(rr.y) << ", lambda " << (rr.lambda ? fmt(*rr.lambda) : "inf") << '\n';
      }
    }
    if (!g.json) std::cout << matched << "/" << checks.size() << " rows matched\n";
    if (matched != static_cast<int>(checks.size())) status = 2;
  }
  if (g.json) {
    if (check)
      emit({{"critical_points", points}, {"table_check", rows}});
    else
      emit(points);
  } else if (!check) {
    for (const auto& r : rep.all())
      std::cout << "x " << fmt(r.x) << "  y " << fmt(r.y) << "  lambda " << (r.lambda ? fmt(*r.lambda) : "inf")
                << "  residual " << fmt(r.residual) << (r.stratum == Stratum::Affine ? std::string() : "  " + std::string(to_string(r.stratum)))
                << '\n';
  }
  return status;
}

int cmd_base_points(const Globals& g) {
  const CubicBasePoints bp = base_points_cubic(default_cubic_pencil());
  if (g.json) {
    json a = json::array();
    for (const auto& b : bp.points)
      a.push_back({{"point", jio::encode(b.point)},
                   {"multiplicity", b.multiplicity},
                   {"residual_f1", b.residual_f1},
                   {"residual_f2", b.residual_f2}});
    emit(a);
  } else {
    for (const auto& b : bp.points)
      std::cout << fmt_point(b.point) << "  multiplicity " << b.multiplicity << "  residuals " << fmt(b.residual_f1)
                << ", " << fmt(b.residual_f2) << '\n';
    std::cout << bp.total_multiplicity() << " base points\n";
  }
  return 0;
}

int cmd_sample_curve(const Globals& g, const std::vector<double>& quartic, const std::vector<double>& member,
                     const std::vector<double>& window, int grid, const std::string& output) {
  const PencilParam t(std::array<Complex, 2>{Complex(member[0]), Complex(member[1])});
  HomogPoly3 F;
  if (quartic.empty()) {
    F = pencil_member_cubic(default_cubic_pencil(), t);
  } else {
    const auto pc = quartic_to_pencil({Complex(quartic[0]), Complex(quartic[1]), Complex(quartic[2]), Complex(0)});
    F = pencil_member(pc, t).to_poly();
  }
  const auto pts = sample_curve(F, Window{window[0], window[1], window[2], window[3]}, grid);

  std::string csv = "x,y\n";
  for (const auto& p : pts) csv += fmt(p.x) + "," + fmt(p.y) + "\n";
  if (!output.empty()) {
    std::ofstream out(output);
    if (!out) throw DomainError("cannot write " + output);
    out << csv;
  }
  if (g.json) {
    json j{{"rows", pts.size()}};
    if (output.empty()) {
      json a = json::array();
      for (const auto& p : pts) a.push_back({p.x, p.y});
      j["points"] = a;
    } else {
      j["output"] = output;
    }
    emit(j);
  } else if (output.empty()) {
    std::cout << csv;
  }
  return 0;
}

struct VerifyStats {
  int trials = 0;
  int failures = 0;
  double worst = 0.0;
};

void verify_one(const Poly1& p, double tol, VerifyStats& st) {
  const RootSet oracle = find_roots_iterative(p);
  std::vector<RootSet> closed{solve_any(p)};
  if (p.degree() == 4) closed.push_back(solve_by_pencil(p));
  bool ok = true;
  for (const auto& rs : closed) {
    st.worst = std::max(st.worst, max_root_deviation(rs, oracle));
    ok = ok && roots_match(rs, oracle, tol);
  }
  ++st.trials;
  if (!ok) ++st.failures;
}

int cmd_verify(const Globals& g, const std::vector<double>& coeffs, int random, int degree) {
  VerifyStats st;
  if (random > 0) {
    if (!coeffs.empty()) throw DomainError("give coefficients or --random, not both");
    if (degree < 1 || degree > 4) throw DomainError("--degree must be 1 to 4");
    std::mt19937_64 gen(g.seed_given ? g.seed : 0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < random; ++t) {
      std::vector<Complex> c(degree + 1, Complex(1));
      for (int i = 0; i < degree; ++i) {
        Complex z;
        do z = Complex(u(gen), u(gen));
        while (std::abs(z) > 1.0);
        c[i] = z;
      }
      verify_one(Poly1(std::move(c)), g.tol, st);
    }
  } else {
    if (coeffs.empty()) throw DomainError("give coefficients or --random N");
    const Poly1 p = real_poly(coeffs);
    if (p.is_zero() || p.degree() < 1 || p.degree() > 4)
      throw DomainError("verify covers degrees 1 to 4");
    verify_one(p, g.tol, st);
  }
  const bool pass = st.failures == 0;
  if (g.json)
    emit({{"pass", pass}, {"trials", st.trials}, {"failures", st.failures}, {"max_deviation", st.worst},
          {"tolerance", g.tol}});
  else
    std::cout << (pass ? "PASS" : "FAIL") << "  trials " << st.trials << "  failures " << st.failures
              << "  max deviation " << fmt(st.worst) << '\n';
  return pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form polynomial roots, pencils of conics and a pencil of cubics"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "Emit one JSON document on stdout");
  app.add_option("--tol", g.tol, "Comparison tolerance for verify")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed for verify and the critical-point search");

  std::vector<double> coeffs;
  std::string input, method = "formula";
  auto* solve = app.add_subcommand("solve", "Roots of a polynomial of degree 1 to 4 (ascending real coefficients)");
  solve->add_option("coeffs", coeffs, "Coefficients, constant term first");
  solve->add_option("--input", input, "JSON file with {\"coeffs\": [[re, im], ...]}");
  solve->add_option("--method", method, "Pipeline")->check(CLI::IsMember({"formula", "pencil", "oracle"}));

  double p = 0, q = 0, r = 0;
  auto* resolvent = app.add_subcommand("resolvent", "Resolvent cubic of u^4 + p u^2 + q u + r");
  auto* singular = app.add_subcommand("pencil-singular", "Singular members, line pairs and base points");
  for (auto* sc : {resolvent, singular}) {
    sc->add_option("p", p)->required();
    sc->add_option("q", q)->required();
    sc->add_option("r", r)->required();
  }

  std::vector<double> entries;
  std::string conic_input;
  auto* intersect = app.add_subcommand("conics-intersect", "Intersection points of two conics");
  intersect->add_option("entries", entries, "m00 m01 m02 m11 m12 m22 for each conic");
  intersect->add_option("--input", conic_input, "JSON file with [conic, conic]");

  auto* e1 = app.add_subcommand("e1", "The default pencil of plane cubics");
  e1->require_subcommand(1);
  int seeds = 0, threads = 0;
  bool check = false;
  auto* crit = e1->add_subcommand("critical-points", "Critical points of the pencil map");
  crit->add_option("--seeds", seeds, "Newton starts per round")->check(CLI::PositiveNumber);
  crit->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  crit->add_flag("--check-table1", check, "Compare against the embedded reference table");
  auto* bpts = e1->add_subcommand("base-points", "Common zeros of the spanning cubics");

  std::vector<double> quartic, member{1.0, 0.0}, window{-5, 5, -5, 5};
  int grid = 400;
  std::string output;
  auto* sample = app.add_subcommand("sample-curve", "Real points of one pencil member as CSV");
  sample->add_option("--quartic", quartic, "p q r: use the conic pencil of u^4 + p u^2 + q u + r")->expected(3);
  sample->add_option("--member", member, "mu lambda")->expected(2);
  sample->add_option("--window", window, "xmin xmax ymin ymax")->expected(4);
  sample->add_option("--grid", grid, "Grid lines per axis");
  sample->add_option("-o,--output", output, "CSV path (default stdout)");

  std::vector<double> vcoeffs;
  int random = 0, degree = 4;
  auto* verify = app.add_subcommand("verify", "Closed form vs pencil vs oracle");
  verify->add_option("coeffs", vcoeffs, "Coefficients, constant term first");
  verify->add_option("--random", random, "Random trials")->check(CLI::PositiveNumber);
  verify->add_option("--degree", degree, "Degree of random polynomials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  g.seed_given = seed_opt->count() > 0;

  try {
    if (*solve) return cmd_solve(g, coeffs, input, method);
    if (*resolvent) return cmd_resolvent(g, p, q, r);
    if (*singular) return cmd_pencil_singular(g, p, q, r);
    if (*intersect) return cmd_conics_intersect(g, entries, conic_input);
    if (*crit) return cmd_critical_points(g, seeds, threads, check);
    if (*bpts) return cmd_base_points(g);
    if (*sample) return cmd_sample_curve(g, quartic, member, window, grid, output);
    if (*verify) return cmd_verify(g, vcoeffs, random, degree);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
