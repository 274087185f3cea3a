#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "diffalg/parser.hpp"

namespace diffalg {

struct Report {
  enum class Verdict { Pass, Fail, Error };

  std::string command;
  Verdict verdict = Verdict::Pass;
  /// (label, printed element); any nonzero residue makes the verdict FAIL.
  std::vector<std::pair<std::string, std::string>> residues;
  /// Other printed outputs.
  std::vector<std::pair<std::string, std::string>> values;
  std::optional<ErrorCode> error;
  std::string message;
  long long timing_ms = 0;

  void residue(std::string label, const Element& e, const Printer& p) {
    residues.emplace_back(std::move(label), p.element(e));
  }
  void value(std::string label, std::string text) { values.emplace_back(std::move(label), std::move(text)); }

  void settle() {
    if (error) {
      verdict = Verdict::Error;
      return;
    }
    verdict = Verdict::Pass;
    for (const auto& r : residues)
      if (r.second != "0") verdict = Verdict::Fail;
  }

  static std::string_view verdict_name(Verdict v) {
    switch (v) {
      case Verdict::Pass: return "PASS";
      case Verdict::Fail: return "FAIL";
      case Verdict::Error: return "ERROR";
    }
    return "ERROR";
  }

  int exit_code() const { return verdict == Verdict::Pass ? 0 : verdict == Verdict::Fail ? 1 : 2; }

  nlohmann::ordered_json json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["verdict"] = verdict_name(verdict);
    j["residues"] = nlohmann::ordered_json::array();
    for (const auto& [label, v] : residues) j["residues"].push_back({{"label", label}, {"value", v}});
    j["values"] = nlohmann::ordered_json::array();
    for (const auto& [label, v] : values) j["values"].push_back({{"label", label}, {"value", v}});
    if (error) j["error"] = {{"code", error_name(*error)}, {"message", message}};
    j["timing_ms"] = timing_ms;
    return j;
  }

  std::string text() const {
    std::string s;
    for (const auto& [label, v] : values) {
      s += label + ':';
      s += v.find('\n') != std::string::npos ? "\n" + v : " " + v + '\n';
      if (!s.empty() && s.back() != '\n') s += '\n';
    }
    for (const auto& [label, v] : residues) s += "residue " + label + ": " + v + '\n';
    s += std::string(verdict_name(verdict)) + " (" + std::to_string(timing_ms) + " ms)\n";
    return s;
  }
};

/// One line per error code: "<name>: <message>".
inline std::string cli_error_message(ErrorCode c) {
  return std::string(error_name(c)) + ": " + std::string(error_message(c));
}

namespace detail {

inline std::string read_text(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline DerivationHandle parse_handle(const Tower& t, const std::string& s) {
  if (s == "D") return FullD{};
  const auto colon = s.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorCode::InvalidArgument, "derivation must be D, X:NAME, partial:NAME or below:NAME");
  const std::string head = s.substr(0, colon), name = s.substr(colon + 1);
  const Var g = t.id(name);
  if (head == "X") {
    (void)detail::commuting_value(t, g);
    return CommutingX{g};
  }
  if (head == "partial") return Partial{g};
  if (head == "below") return BelowD{g};
  throw Error(ErrorCode::InvalidArgument, "unknown derivation '" + head + "'");
}

inline std::vector<BigRat> rational_coeffs(const MultiPoly& p) {
  std::vector<BigRat> out;
  for (const auto& c : p.coefficients_in(Var{0})) {
    if (!c.is_constant()) throw Error(ErrorCode::InvalidArgument, "psi must have rational coefficients");
    out.push_back(c.is_zero() ? BigRat(0) : c.constant_value());
  }
  if (out.empty()) out.push_back(BigRat(0));
  return out;
}

/// "u^2", "1/u", or "invsqrt(u^3 - u - 1)".
inline PsiSpec parse_psi(std::string text) {
  TowerDoc u{Tower{}.extend("u", BaseVar{Element(1)}), {}};
  const auto trim = [](std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    return s.substr(i);
  };
  text = trim(text);
  if (text.rfind("invsqrt(", 0) == 0 && !text.empty() && text.back() == ')') {
    const Element r = parse_expr(text.substr(8, text.size() - 9), u);
    if (!r.den().is_constant()) throw Error(ErrorCode::InvalidArgument, "invsqrt takes a polynomial");
    auto c = rational_coeffs(r.num());
    for (auto& x : c) x = x / r.den().constant_value();
    return PsiSpec::inv_sqrt(c);
  }
  const Element e = parse_expr(text, u);
  return PsiSpec::rational(rational_coeffs(e.num()), rational_coeffs(e.den()));
}

inline bool is_commuting_kind(const ExtensionKind& k) {
  return std::holds_alternative<Primitive>(k) || std::holds_alternative<Exponential>(k) ||
         std::holds_alternative<EllipticFunction>(k) || std::holds_alternative<LambertW>(k);
}

inline Element random_element(const Tower& t, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-4, 4), pick(0, static_cast<int>(t.size()) - 1), deg(0, 2);
  const auto poly = [&](int terms) {
    Element acc = t.number(0);
    for (int i = 0; i < terms; ++i) {
      const int c = coef(rng);
      Element m = t.number(c == 0 ? 1 : c);
      for (int d = deg(rng); d > 0; --d) m = m * t.gen(static_cast<Var>(pick(rng)));
      acc = acc + m;
    }
    return acc;
  };
  for (;;) {
    const Element n = poly(3), d = poly(2);
    if (!n.is_zero() && !d.is_zero()) return n / d;
  }
}

}  // namespace detail

struct CliOptions {
  bool json = false;
  unsigned max_degree = 512;
  std::uint64_t seed = 1;
};

/// Runs the command-line interface; returns the process exit code.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Exact differential-algebra engine: towers, derivations, Liouville forms and Abel identities"};
  app.require_subcommand(1);
  app.fallthrough();
  CliOptions opt;
  app.add_flag("--json", opt.json, "Print the report as JSON");
  app.add_option("--max-degree", opt.max_degree, "Abort when a polynomial exceeds this total degree (0: no limit)");
  app.add_option("--seed", opt.seed, "Seed for randomized subcommands");

  std::string tower_path, expr_text, wrt = "D", form_path, gen_name, kind = "f", xh = "D", yh, p_text, psi_text = "u^2";
  int steps = -1, count = 20;

  auto* c_derive = app.add_subcommand("derive", "Differentiate an expression");
  c_derive->add_option("tower", tower_path, "Tower file")->required();
  c_derive->add_option("-e,--expr", expr_text, "Expression")->required();
  c_derive->add_option("--wrt", wrt, "D, X:NAME, partial:NAME or below:NAME");

  auto* c_lie = app.add_subcommand("check-lie", "Check that each X commutes with D");
  c_lie->add_option("tower", tower_path, "Tower file")->required();

  auto* c_verify = app.add_subcommand("verify", "Check that a Liouville form differentiates to the integrand");
  c_verify->add_option("tower", tower_path, "Tower file")->required();
  c_verify->add_option("--integrand", expr_text, "Integrand")->required();
  c_verify->add_option("--form", form_path, "Form file")->required();

  auto* c_reduce = app.add_subcommand("reduce", "Reduce a Liouville form down the tower");
  c_reduce->add_option("tower", tower_path, "Tower file")->required();
  c_reduce->add_option("--integrand", expr_text, "Integrand")->required();
  c_reduce->add_option("--form", form_path, "Form file")->required();
  c_reduce->add_option("--steps", steps, "Maximum number of steps");

  auto* c_abel = app.add_subcommand("abel", "Check an Abel differential addition identity");
  c_abel->add_option("--kind", kind, "f, e, pi, w1 or w2")->required();

  auto* c_tr = app.add_subcommand("trnorm", "Trace, norm and the logarithmic-derivative identity");
  c_tr->add_option("tower", tower_path, "Tower file")->required();
  c_tr->add_option("--gen", gen_name, "Square-root generator")->required();
  c_tr->add_option("-e,--expr", expr_text, "Expression")->required();

  auto* c_dc = app.add_subcommand("der-comm", "Check X((Yp)psi(p)) - Y((Xp)psi(p)) = ([X,Y]p)psi(p)");
  c_dc->add_option("tower", tower_path, "Tower file")->required();
  c_dc->add_option("--x", xh, "First derivation");
  c_dc->add_option("--y", yh, "Second derivation")->required();
  c_dc->add_option("-p", p_text, "Argument p (random when omitted)");
  c_dc->add_option("--psi", psi_text, "Rational function of u, or invsqrt(cubic in u)");
  c_dc->add_option("--count", count, "Random instances when -p is omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  Report rep;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const DegreeLimit guard(opt.max_degree);
    const auto load = [&] { return parse_tower(detail::read_text(tower_path)); };
    if (c_derive->parsed()) {
      rep.command = "derive";
      const TowerDoc doc = load();
      const Element e = parse_expr(expr_text, doc);
      const Element d = derive(doc.tower, detail::parse_handle(doc.tower, wrt), e);
      rep.value("derivative", Printer(doc.tower).element(d));
    } else if (c_lie->parsed()) {
      rep.command = "check-lie";
      const TowerDoc doc = load();
      const Printer pr(doc.tower);
      for (Var k = 0; k < doc.tower.size(); ++k) {
        if (!detail::is_commuting_kind(doc.tower.kind(k))) continue;
        const auto lr = check_lie_closed(doc.tower, k);
        for (const auto& [g, r] : lr.residues) rep.residue("[D,X_" + doc.tower.name(k) + "] " + doc.tower.name(g), r, pr);
      }
      if (rep.residues.empty()) rep.value("note", "no generator carries a commuting derivation");
    } else if (c_verify->parsed()) {
      rep.command = "verify";
      const TowerDoc doc = load();
      const Element f = parse_expr(expr_text, doc);
      const LiouvilleForm form = parse_form(detail::read_text(form_path), doc);
      rep.residue("D(form) - f", form_derivative(doc.tower, form) - f, Printer(doc.tower));
    } else if (c_reduce->parsed()) {
      rep.command = "reduce";
      const TowerDoc doc = load();
      Tower t = doc.tower;
      Element f = parse_expr(expr_text, doc);
      LiouvilleForm form = parse_form(detail::read_text(form_path), doc);
      rep.residue("input", form_derivative(t, form) - f, Printer(t));
      const int limit = steps < 0 ? static_cast<int>(t.size()) : steps;
      if (rep.residues.back().second == "0") {
        for (int i = 1; i <= limit && t.size() > 0; ++i) {
          const Var top = static_cast<Var>(t.size() - 1);
          const std::string removed = t.name(top);
          if (std::holds_alternative<ConstParam>(t.kind(top)) && !f.contains(top) && !detail::form_mentions(form, top)) {
            std::vector<Tower::RebuildOp> ops(t.size());
            ops[top].op = Tower::Op::Drop;
            const auto rb = t.rebuild(ops);
            f = rb.import(f);
            form = map_form(form, [&](const Element& e) { return rb.import(t.adopt(e)); });
            t = rb.tower;
            rep.value("step " + std::to_string(i), "dropped unused constant " + removed);
            continue;
          }
          ReduceResult r;
          try {
            r = reduce_step(t, f, form);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::NothingToReduce) throw;
            break;
          }
          t = r.tower;
          f = r.f;
          form = r.form;
          const Printer pr(t);
          std::string what = "removed " + removed;
          if (r.specialized) what += " (specialized to " + r.specialized->str() + ")";
          if (!r.note.empty()) what += " (" + r.note + ")";
          rep.value("step " + std::to_string(i), what + "\n" + pr.tower(t) + pr.form(form));
          rep.residue("step " + std::to_string(i), form_derivative(t, form) - f, pr);
        }
        const Printer pr(t);
        rep.value("tower", pr.tower(t));
        rep.value("form", pr.form(form));
      }
    } else if (c_abel->parsed()) {
      rep.command = "abel";
      std::string k = kind;
      for (auto& ch : k) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      const auto ak = parse_abel_kind(k);
      if (!ak) throw Error(ErrorCode::InvalidArgument, "unknown identity kind '" + kind + "'");
      const auto ar = check_abel_identity(*ak);
      const Printer pr(ar.tower);
      rep.value("tower", pr.tower(ar.tower));
      rep.residue("d/dx1", ar.residue1, pr);
      rep.residue("d/dx2", ar.residue2, pr);
    } else if (c_tr->parsed()) {
      rep.command = "trnorm";
      const TowerDoc doc = load();
      const Tower& t = doc.tower;
      const Var s = t.id(gen_name);
      const Element e = parse_expr(expr_text, doc);
      const Printer pr(t);
      rep.value("trace", pr.element(trace(t, s, e)));
      const Element n = norm(t, s, e);
      rep.value("norm", pr.element(n));
      if (e.is_zero()) throw Error(ErrorCode::ZeroElement, "logarithmic derivative of zero");
      rep.residue("D(N e)/N e - Tr(De/e)", t.derive(n) / n - trace(t, s, t.derive(e) / e), pr);
    } else if (c_dc->parsed()) {
      rep.command = "der-comm";
      const TowerDoc doc = load();
      const Tower& t = doc.tower;
      const auto x = detail::parse_handle(t, xh), y = detail::parse_handle(t, yh);
      const PsiSpec psi = detail::parse_psi(psi_text);
      const Printer pr(t);
      if (!p_text.empty()) {
        const auto r = der_comm(t, x, y, parse_expr(p_text, doc), psi);
        rep.residue("lhs - rhs", r.lhs - r.rhs, pr);
      } else {
        std::mt19937_64 rng(opt.seed);
        for (int i = 0; i < count; ++i) {
          const Element p = detail::random_element(t, rng);
          const auto r = der_comm(t, x, y, p, psi);
          rep.residue("p = " + pr.element(p), r.lhs - r.rhs, pr);
        }
      }
    }
  } catch (const Error& e) {
    rep.error = e.code();
    rep.message = e.detail();
  }
  rep.timing_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  rep.settle();
  if (rep.error) err << "error: " << cli_error_message(*rep.error) << ": " << rep.message << '\n';
  if (opt.json) {
    out << rep.json().dump(2) << '\n';
  } else if (!rep.error) {
    out << rep.text();
  }
  return rep.exit_code();
}

}  // namespace diffalg
