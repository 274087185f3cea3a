// Acceptance suite: one PASS/FAIL line per criterion, with its time budget.
#include <boost/math/special_functions/jacobi_elliptic.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "diffalg/cli.hpp"
#include "test_support.hpp"

using namespace diffalg;
using diffalg::testing::Rng;
using diffalg::testing::rand_int;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::filesystem::path scratch() {
  static const std::filesystem::path dir = [] {
    auto p = std::filesystem::temp_directory_path() / ("diffalg_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(p);
    return p;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

int cli(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "diffalg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str() + e.str();
  return code;
}

void fail(Outcome& o, const std::string& why) {
  o.ok = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += why;
}

// 1. check-lie on towers with all four kinds carrying X.
Outcome lie_closedness() {
  Outcome o;
  const std::vector<std::pair<std::string, std::string>> towers{
      {"primitive", "var x = d/dx 1\ngen f = int(1/(x^2 + 1))\n"},
      {"log", "var x = d/dx 1\ngen f = log(x^3 + x + 1)\n"},
      {"exponential", "var x = d/dx 1\ngen e = exp(1/x^2)\n"},
      {"elliptic", "const a, b\nvar x = d/dx 1\ngen p = ellfun(x^2, a, b)\n"},
      {"lambertw", "var x = d/dx 1\ngen w = lambertw(x^2 + 1)\n"},
      {"all", "var x = d/dx 1\ngen f = int(1/x)\ngen e = exp(x*f)\ngen p = ellfun(x + e, 2, -1)\ngen w = lambertw(x*p)\n"},
  };
  int residues = 0;
  for (const auto& [name, text] : towers) {
    std::string out;
    const int code = cli({"--json", "check-lie", write_file("lie_" + name + ".tower", text)}, &out);
    if (code != 0) fail(o, name + " exit " + std::to_string(code));
    const auto j = nlohmann::json::parse(out.substr(0, out.rfind('}') + 1));
    for (const auto& r : j["residues"]) {
      ++residues;
      if (r["value"] != "0") fail(o, name + " residue " + r["label"].get<std::string>());
    }
  }
  o.detail = o.ok ? std::to_string(residues) + " residues, all zero" : o.detail;
  return o;
}

// 2. D(x exp(1/x^2)) and verify.
Outcome worked_integral() {
  Outcome o;
  const std::string tower = write_file("worked.tower", "var x = d/dx 1\ngen t = exp(1/x^2)\n");
  const TowerDoc doc = parse_tower(detail::read_text(tower));
  const Element d = doc.tower.derive(parse_expr("x*t", doc));
  if (d != parse_expr("((x^2-2)*t)/x^2", doc)) fail(o, "derivative " + to_string(d, doc.tower));
  const int code = cli({"verify", tower, "--integrand", "((x^2-2)*t)/x^2", "--form", write_file("worked.form", "v0 = x*t\n")});
  if (code != 0) fail(o, "verify exit " + std::to_string(code));
  if (o.ok) o.detail = "D(x*t) = " + to_string(d, doc.tower) + ", verify exit 0";
  return o;
}

// 3. Abel identity for one kind through the CLI.
Outcome abel(const std::string& kind) {
  Outcome o;
  std::string out;
  const int code = cli({"--json", "abel", "--kind", kind}, &out);
  if (code != 0) fail(o, "exit " + std::to_string(code));
  const auto j = nlohmann::json::parse(out.substr(0, out.rfind('}') + 1));
  for (const auto& r : j["residues"])
    if (r["value"] != "0") fail(o, r["label"].get<std::string>() + " residue nonzero");
  if (j["residues"].size() != 2) fail(o, "expected residues under d/dx1 and d/dx2");
  if (o.ok) o.detail = "residues under d/dx1, d/dx2 are 0";
  return o;
}

// 4. Group laws over generic symbolic points.
Outcome group_laws() {
  Outcome o;
  const Tower lt = abel_tower(AbelKind::F);
  const LegendreCurve lc{lt.gen("m")};
  const CurvePoint l1{lt.gen("x1"), lt.gen("y1"), false}, l2{lt.gen("x2"), lt.gen("y2"), false};
  const CurvePoint id{lt.number(0), lt.number(1), false};
  const CurvePoint ls = legendre_add(lc, l1, l2);
  if (!curve_residue(lc, ls).is_zero()) fail(o, "Legendre sum off curve");
  if (!curve_residue(lc, legendre_add(lc, l1, l1)).is_zero()) fail(o, "Legendre double off curve");
  if (!(ls == legendre_add(lc, l2, l1))) fail(o, "Legendre not commutative");
  if (!(legendre_add(lc, l1, id) == l1)) fail(o, "Legendre identity");
  if (!(legendre_add(lc, l1, legendre_neg(l1)) == id)) fail(o, "Legendre inverse");

  const Tower wt = abel_tower(AbelKind::W1);
  const WeierstrassCurve wc{wt.gen("a"), wt.gen("b")};
  const CurvePoint w1{wt.gen("x1"), wt.gen("y1"), false}, w2{wt.gen("x2"), wt.gen("y2"), false};
  const CurvePoint ws = weierstrass_add(wc, w1, w2);
  if (!curve_residue(wc, ws).is_zero()) fail(o, "Weierstrass sum off curve");
  if (!curve_residue(wc, weierstrass_add(wc, w1, w1)).is_zero()) fail(o, "Weierstrass double off curve");
  if (!(ws == weierstrass_add(wc, w2, w1))) fail(o, "Weierstrass not commutative");
  const CurvePoint inf = CurvePoint::infinity();
  if (!(weierstrass_add(wc, w1, inf) == w1) || !(weierstrass_add(wc, inf, w1) == w1)) fail(o, "Weierstrass identity");
  if (!weierstrass_add(wc, w1, weierstrass_neg(w1)).at_infinity) fail(o, "Weierstrass inverse");
  if (o.ok) o.detail = "on-curve residues 0; identity, inverse and commutativity exact";
  return o;
}

// 5. Commutation lemma over a 3-extension tower.
Outcome der_comm_grid() {
  Outcome o;
  Tower t = diffalg::testing::base_x();
  const Element x = t.gen("x");
  t = t.extend("e", Exponential{x});
  t = t.extend("l", Primitive{t.number(0), LogTag{t.adopt(x) + Element(1)}, {}});
  t = t.extend("p", EllipticFunction{t.adopt(x), t.number(2), t.number(-1)});
  const std::vector<Var> xs{t.id("e"), t.id("l"), t.id("p")};
  const std::vector<std::pair<std::string, PsiSpec>> psis{
      {"u^2", PsiSpec::rational({BigRat(0), BigRat(0), BigRat(1)})},
      {"1/u", PsiSpec::rational({BigRat(1)}, {BigRat(0), BigRat(1)})},
      {"1/sqrt(u^3-2u+1)", PsiSpec::inv_sqrt({BigRat(1), BigRat(-2), BigRat(0), BigRat(1)})},
  };
  Rng rng(20240607);
  int n = 0;
  for (const auto& [name, psi] : psis) {
    for (Var a : xs) {
      for (Var b : xs) {
        // The square-root psi is realized at p = theta through the companion q.
        const Element p = psi.kind == PsiSpec::Kind::InvSqrtCubic
                              ? t.gen("p")
                              : diffalg::testing::rand_elem(t, rng, diffalg::testing::all_vars(t), 3, 2);
        ++n;
        const auto r = der_comm(t, CommutingX{a}, CommutingX{b}, p, psi);
        if (!r.holds) fail(o, name + " X_" + t.name(a) + " X_" + t.name(b));
      }
    }
  }
  if (n < 20) fail(o, "only " + std::to_string(n) + " instances");
  if (o.ok) o.detail = std::to_string(n) + " seeded instances, all exact";
  return o;
}

// 6. D N(e)/N(e) = Tr(De/e).
Outcome lognorm() {
  Outcome o;
  int n = 0;
  for (const char* r : {"x^2-1", "(x-1)/(x+1)", "x^3-x"}) {
    const TowerDoc doc = parse_tower(std::string("var x = d/dx 1\ngen s = sqrt(") + r + ")\n");
    for (const char* e : {"s", "x+s", "x*s + 1"}) {
      ++n;
      if (!check_lognorm(doc.tower, doc.tower.id("s"), parse_expr(e, doc))) fail(o, std::string(r) + ", " + e);
    }
  }
  if (o.ok) o.detail = std::to_string(n) + " cases exact";
  return o;
}

// 7. Reduction regressions.
Outcome reduction(char which) {
  Outcome o;
  TowerDoc doc;
  std::string f, form;
  switch (which) {
    case 'a': doc = parse_tower("var x = d/dx 1\ngen th = log(x)\n"), f = "1/x", form = "v0 = th"; break;
    case 'b': doc = parse_tower("var x = d/dx 1\ngen th = exp(x)\n"), f = "x + 1", form = "v0 = x^2/2; term 1 * log(th)"; break;
    case 'c': doc = parse_tower("var x = d/dx 1\ngen s = sqrt((x-1)/(x+1))\n"), f = "1/(x^2-1)", form = "v0 = 0; term 1 * log(s)"; break;
    default:
      doc = parse_tower("var x = d/dx 1\ngen s = sqrt(x^3 - x - 1)\ngen P = ellint(3, x, s, 2)\n");
      f = "1/((x-2)*s)", form = "v0 = P";
      break;
  }
  const Element fe = parse_expr(f, doc);
  const LiouvilleForm fm = parse_form(form, doc);
  if (!verify_liouville(doc.tower, fe, fm)) fail(o, "input form does not verify");
  const ReduceResult r = reduce_step(doc.tower, fe, fm);
  if (!verify_liouville(r.tower, r.f, r.form)) fail(o, "output does not verify");
  const Tower& t = r.tower;
  const Element x = t.gen("x");
  const auto single = [&](std::size_t k) { return r.form.terms.size() == k; };
  switch (which) {
    case 'a':
      if (!r.form.v0.is_zero() || !single(1) || !(r.form.terms[0].coeff == Element(1)) ||
          !(std::get<LogPhi>(r.form.terms[0].phi).v == x))
        fail(o, "expected term (1, log(x))");
      break;
    case 'b':
      if (!(r.form.v0 == x * x / Element(2) + x) || !single(0)) fail(o, "expected v0 = x^2/2 + x");
      break;
    case 'c': {
      const Element q = (x - Element(1)) / (x + Element(1));
      if (!single(1) || !(r.form.terms[0].coeff == Element(BigRat(1, 2))) || !std::holds_alternative<LogPhi>(r.form.terms[0].phi)) {
        fail(o, "expected term (1/2, log(..))");
      } else {
        const Element v = std::get<LogPhi>(r.form.terms[0].phi).v;
        if (!(v == q)) fail(o, "log argument " + to_string(v, t));
      }
      break;
    }
    default:
      if (!single(1) || !std::holds_alternative<W3Phi>(r.form.terms[0].phi)) fail(o, "expected one W3 term");
      break;
  }
  if (o.ok) o.detail = Printer(t).form(r.form);
  while (!o.detail.empty() && o.detail.back() == '\n') o.detail.pop_back();
  for (auto& ch : o.detail)
    if (ch == '\n') ch = ';';
  return o;
}

// 8. Random liftable forms over random 2-level towers.
struct Problem {
  Tower t;
  Element f;
  LiouvilleForm form;
  bool may_stop = false;  // contains an elliptic integral over a square root
};

Problem random_problem(Rng& rng) {
  Problem pb;
  Tower t = diffalg::testing::base_x();
  const Element x = t.gen("x");
  const auto rx = [&](int terms, int deg) { return diffalg::testing::rand_elem(t, rng, {0}, terms, deg); };
  const auto coeff = [&] { return t.number(BigRat(rand_int(rng, 1, 4) * (rand_int(rng, 0, 1) ? 1 : -1), rand_int(rng, 1, 3))); };
  LiouvilleForm form{rx(2, 2), {{coeff(), LogPhi{x + t.number(rand_int(rng, 1, 5))}}}};
  for (int level = 0; level < 2; ++level) {
    const std::string name = "g" + std::to_string(level);
    const bool cubic_sqrt = level == 1 && std::holds_alternative<AlgebraicSqrt>(t.kind(1)) &&
                            t.radicand(1).num().degree_in(0) == 3 && t.radicand(1).den().is_one();
    int kind = rand_int(rng, 0, cubic_sqrt ? 6 : 5);
    if (level == 0 && kind == 5 && rand_int(rng, 0, 1)) kind = 7;  // cubic radicand, for elliptic integrals above
    const Var g = static_cast<Var>(t.size());
    const Element c = coeff();
    switch (kind) {
      case 0: {
        t = t.extend(name, Exponential{rx(2, 2)});
        form.terms.push_back({c, LogPhi{t.gen(g) * t.adopt(rx(2, 1))}});
        break;
      }
      case 1: {
        t = t.extend(name, Primitive{t.number(0), LogTag{t.adopt(x) * t.adopt(x) + t.number(rand_int(rng, 1, 4))}, {}});
        form.v0 += c * t.gen(g);
        break;
      }
      case 2: {
        const Element w = rx(2, 2);
        t = t.extend(name, Primitive{t.derive(w), {}, w});
        form.v0 += c * t.gen(g);
        break;
      }
      case 3: {
        t = t.extend(name, LambertW{t.adopt(x) + t.number(rand_int(rng, 1, 3))});
        form.v0 += c * t.gen(g);
        form.terms.push_back({c, LogPhi{t.gen(g)}});
        break;
      }
      case 4: {
        const Element a = t.number(rand_int(rng, -3, 3)), b = t.number(rand_int(rng, 1, 3));
        t = t.extend(name, EllipticFunction{rx(2, 2), a, b});
        form.terms.push_back({c, W1Phi{t.gen(g), t.gen(g + 1), a, b}});
        break;
      }
      case 5:
      case 7: {
        const Element r = kind == 7 ? x.pow(3) - t.number(rand_int(rng, 1, 3)) * x - t.number(rand_int(rng, 1, 3))
                                    : x * x + t.number(rand_int(rng, 1, 4)) * x + t.number(rand_int(rng, -3, -1));
        t = t.extend(name, AlgebraicSqrt{r});
        const Element s = t.gen(g), a = t.adopt(rx(2, 1)), b = t.adopt(rx(1, 1));
        form.terms.push_back({c, LogPhi{a + b * s}});
        form.terms.push_back({c, LogPhi{a - b * s}});
        break;
      }
      default: {
        const int k = rand_int(rng, 1, 3);
        const Element cc = t.number(rand_int(rng, 4, 9));
        t = t.extend(name, Primitive{t.number(0), EllIntegralTag{k, t.adopt(x), t.gen(1), {}, {}, k == 3 ? cc : t.number(0)}, {}});
        form.v0 += c * t.gen(g);
        pb.may_stop = true;
        break;
      }
    }
    form = map_form(form, [&](const Element& e) { return t.adopt(e); });
  }
  pb.t = t;
  pb.form = form;
  pb.f = form_derivative(t, form);
  return pb;
}

Outcome round_trip() {
  Outcome o;
  Rng rng(777);
  int steps = 0, complete = 0, stopped = 0;
  for (int i = 0; i < 50; ++i) {
    Problem pb = random_problem(rng);
    Tower t = pb.t;
    Element f = pb.f;
    LiouvilleForm form = pb.form;
    int done = 0;
    try {
      while (t.size() > 1) {
        const ReduceResult r = reduce_step(t, f, form);
        if (!verify_liouville(r.tower, r.f, r.form)) fail(o, "form " + std::to_string(i) + " step lost the derivative");
        t = r.tower, f = r.f, form = r.form;
        ++done;
      }
      ++complete;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::FNotBelow && pb.may_stop && done > 0) {
        ++stopped;
      } else {
        fail(o, "form " + std::to_string(i) + ": " + e.what());
      }
    }
    if (done == 0) fail(o, "form " + std::to_string(i) + " made no step");
    steps += done;
  }
  if (o.ok)
    o.detail = std::to_string(steps) + " steps verified; " + std::to_string(complete) + " forms reduced to Q(x), " +
               std::to_string(stopped) + " stopped at an elliptic integrand";
  return o;
}

// 9. legendre_add against sn, cn dn.
Outcome jacobi() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> arg(-3.0, 3.0), mod(0.01, 0.99);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const double u = arg(rng), v = arg(rng), m = mod(rng), k = std::sqrt(m);
    double cu, du, cv, dv, cs, ds;
    const double su = boost::math::jacobi_elliptic(k, u, &cu, &du);
    const double sv = boost::math::jacobi_elliptic(k, v, &cv, &dv);
    const double ss = boost::math::jacobi_elliptic(k, u + v, &cs, &ds);
    const auto r = legendre_add_formula<double>(m, su, cu * du, sv, cv * dv);
    if (!r) {
      fail(o, "degenerate denominator");
      continue;
    }
    worst = std::max({worst, std::abs(r->first - ss), std::abs(r->second - cs * ds)});
  }
  if (worst >= 1e-9) fail(o, "residual " + std::to_string(worst));
  char buf[64];
  std::snprintf(buf, sizeof buf, "max residual %.2e over 100 triples", worst);
  if (o.ok) o.detail = buf;
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 Lie-closedness suite", 5, lie_closedness},
      {"2 worked integral", 1, worked_integral},
      {"3 Abel identity F", 10, [] { return abel("f"); }},
      {"3 Abel identity E", 10, [] { return abel("e"); }},
      {"3 Abel identity PI", 120, [] { return abel("pi"); }},
      {"3 Abel identity W1", 10, [] { return abel("w1"); }},
      {"4 group-law soundness", 10, group_laws},
      {"5 commutation lemma grid", 30, der_comm_grid},
      {"6 log-derivative/norm identity", 5, lognorm},
      {"7a reduction: log primitive", 5, [] { return reduction('a'); }},
      {"7b reduction: exponential", 5, [] { return reduction('b'); }},
      {"7c reduction: quadratic extension", 5, [] { return reduction('c'); }},
      {"7d reduction: elliptic integral, third kind", 5, [] { return reduction('d'); }},
      {"8 round-trip invariant", 60, round_trip},
      {"9 Jacobi numeric cross-check", 5, jacobi},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s >= c.budget_s) {
      o.ok = false;
      o.detail += " (over budget)";
    }
    if (!o.ok) ++failed;
    std::printf("%s  %-46s %8.3f s / %5.0f s  %s\n", o.ok ? "PASS" : "FAIL", c.name.c_str(), s, c.budget_s, o.detail.c_str());
    std::fflush(stdout);
  }
  std::filesystem::remove_all(scratch());
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
