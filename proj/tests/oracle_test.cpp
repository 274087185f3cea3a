#include <gtest/gtest.h>

#include "diffalg/parser.hpp"

using namespace diffalg;

// Derivatives computed independently with sympy over x, exp(1/x^2), log(x^2+1)
// and sqrt(x^3-x-1), frozen here as text.
namespace {

struct Case {
  const char* expr;
  const char* derivative;
};

const Case kCases[] = {
    {"x*t", "t*(x^2 - 2)/x^2"},
    {"t^2/(x+1)", "t^2*(-x^3 - 4*x - 4)/(x^3*(x + 1)^2)"},
    {"l*t - x", "(-2*l*t*(x^2 + 1) + 2*t*x^4 - x^3*(x^2 + 1))/(x^3*(x^2 + 1))"},
    {"(x+s)/(x-s)", "((-s + x)*(2*s + 3*x^2 - 1) + (s + x)*(-2*s + 3*x^2 - 1))/(2*s*(-s + x)^2)"},
    {"s*l/(t+1)",
     "(4*l*s^2*t*(x^2 + 1) + l*x^3*(t + 1)*(x^2 + 1)*(3*x^2 - 1) + 4*s^2*x^4*(t + 1))/(2*s*x^3*(t + 1)^2*(x^2 + 1))"},
    {"l^2*s + t*s",
     "(l^2*x^3*(x^2 + 1)*(3*x^2 - 1) + 8*l*s^2*x^4 - 4*s^2*t*(x^2 + 1) + t*x^3*(x^2 + 1)*(3*x^2 - 1))/(2*s*x^3*(x^2 + 1))"},
    {"1/(x*s+2)", "(-2*s^2 - x*(3*x^2 - 1))/(2*s*(s*x + 2)^2)"},
    {"(t+l)/(t-l)", "2*((-l + t)*(-t*(x^2 + 1) + x^4) + (l + t)*(t*(x^2 + 1) + x^4))/(x^3*(-l + t)^2*(x^2 + 1))"},
};

}  // namespace

TEST(Oracle, DerivativesMatchFrozenValues) {
  const TowerDoc doc = parse_tower(R"(
    var x = d/dx 1
    gen t = exp(1/x^2)
    gen l = log(x^2 + 1)
    gen s = sqrt(x^3 - x - 1)
  )");
  for (const auto& c : kCases) {
    const Element e = parse_expr(c.expr, doc);
    EXPECT_EQ(doc.tower.derive(e), parse_expr(c.derivative, doc)) << c.expr;
  }
}
