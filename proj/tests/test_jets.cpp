#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lieclass/jets.hpp"
#include "lieclass/parser.hpp"
#include "testutil.hpp"

using namespace lieclass;
using E = Expression;

namespace {

const char* kChart = R"(
  vars x y t;
  dep u;
  fun f(x, y, u, u_x, u_y);
)";

const char* kEqChart = R"(
  vars x y t;
  dep u;
  class f;
  param c1 c2 c3 c4;
  fun a(t);
  fun beta(x, y);
)";

}  // namespace

TEST_CASE("total derivative chains through jets") {
  auto chp = parse_chart(kChart);
  Chart& ch = *chp;
  E u = E::sym(ch, "u"), x = E::sym(ch, "x");
  CHECK(total_derivative(u, "x").same(E::sym(ch, "u_x")));
  CHECK(total_derivative(x * E::sym(ch, "u_y"), "x")
            .same(E::sym(ch, "u_y") + x * E::sym(ch, "u_xy")));
  // unknown functions chain through their arguments
  E fc = E::call(ch, "f", {x, E::sym(ch, "y"), u, E::sym(ch, "u_x"), E::sym(ch, "u_y")});
  E dft = total_derivative(fc, "t");
  E expect = E::atom(ch, ch.function_id("f"), {2}, {x, E::sym(ch, "y"), u, E::sym(ch, "u_x"), E::sym(ch, "u_y")}) * E::sym(ch, "u_t") +
             E::atom(ch, ch.function_id("f"), {3}, {x, E::sym(ch, "y"), u, E::sym(ch, "u_x"), E::sym(ch, "u_y")}) * E::sym(ch, "u_xt") +
             E::atom(ch, ch.function_id("f"), {4}, {x, E::sym(ch, "y"), u, E::sym(ch, "u_x"), E::sym(ch, "u_y")}) * E::sym(ch, "u_yt");
  CHECK(dft.same(expect));
  // commutation of total derivatives
  E e = x * u * E::sym(ch, "u_y");
  CHECK(total_derivative(total_derivative(e, "x"), "y")
            .same(total_derivative(total_derivative(e, "y"), "x")));
  // third order is minted on demand, fourth refuses
  E d3 = total_derivative(E::sym(ch, "u_xx"), "x");
  CHECK(d3.same(E::sym(ch, "u_xxx")));
  CHECK_THROWS_AS(total_derivative(d3, "x"), OrderOverflow);
  CHECK_THROWS_AS(total_derivative(u, ch.require("u")), std::invalid_argument);
}

TEST_CASE("total derivative rejects classification coordinates") {
  auto chp = parse_chart(kEqChart);
  Chart& ch = *chp;
  CHECK_THROWS_AS(total_derivative(E::sym(ch, "f"), "x"), std::invalid_argument);
  // but parameters ride along as constants
  CHECK(total_derivative(E::sym(ch, "c1") * E::sym(ch, "u"), "x")
            .same(E::sym(ch, "c1") * E::sym(ch, "u_x")));
}

TEST_CASE("second prolongation of basic operators") {
  auto chp = parse_chart(kChart);
  Chart& ch = *chp;

  VectorField T = parse_field(ch, "T", "d_t");
  VectorField PT = prolong2(T);
  CHECK(PT.comps().size() == 1);  // no jet corrections at all

  VectorField S = parse_field(ch, "S", "y*d_x");
  VectorField PS = prolong2(S);
  CHECK(PS.coeff(ch.require("u_x")).is_zero());
  CHECK(PS.coeff(ch.require("u_y")).same(-E::sym(ch, "u_x")));
  CHECK(PS.coeff(ch.require("u_t")).is_zero());
  CHECK(PS.coeff(ch.require("u_xx")).is_zero());
  CHECK(PS.coeff(ch.require("u_xy")).same(-E::sym(ch, "u_xx")));
  CHECK(PS.coeff(ch.require("u_yy")).same(E::integer(ch, -2) * E::sym(ch, "u_xy")));
  CHECK(PS.coeff(ch.require("u_yt")).same(-E::sym(ch, "u_xt")));

  VectorField D = parse_field(ch, "D", "x*d_x + u*d_u");
  VectorField PD = prolong2(D);
  CHECK(PD.coeff(ch.require("u_x")).is_zero());
  CHECK(PD.coeff(ch.require("u_y")).same(E::sym(ch, "u_y")));
  CHECK(PD.coeff(ch.require("u_xx")).same(-E::sym(ch, "u_xx")));
  CHECK(PD.coeff(ch.require("u_yy")).same(E::sym(ch, "u_yy")));
  CHECK(PD.coeff(ch.require("u_xy")).is_zero());

  // operators with jet components are rejected
  VectorField bad(ch);
  bad.set(ch.require("u_x"), E::integer(ch, 1));
  CHECK_THROWS_AS(prolong2(bad), std::invalid_argument);
}

TEST_CASE("prolongation is linear over constant combinations") {
  auto chp = parse_chart(kChart);
  Chart& ch = *chp;
  VectorField a = parse_field(ch, "a", "y*d_x - x*d_y + u*d_u");
  VectorField b = parse_field(ch, "b", "x^2*d_x + t*d_t + x*u*d_u");
  VectorField comb = add(scale(a, mpq_class(3)), scale(b, mpq_class(-2, 7)));
  VectorField want = add(scale(prolong2(a), mpq_class(3)), scale(prolong2(b), mpq_class(-2, 7)));
  CHECK(same(prolong2(comb), want));
}

TEST_CASE("equivalence prolongation slots") {
  auto chp = parse_chart(kEqChart);
  Chart& ch = *chp;

  // time-independent point part with constant classification component
  VectorField Y0 = parse_field(ch, "Y0", "d_x + f*d_f");
  auto E0 = prolong_equivalence(Y0);
  CHECK(E0.mu_t.is_zero());
  CHECK(E0.mu_ut.is_zero());
  CHECK(E0.full.coeff(ch.require("f")).same(E::sym(ch, "f")));

  // phi = t forces a dependence of the transformed classification function on time
  VectorField Yt = parse_field(ch, "Yt", "t*d_u");
  auto Et = prolong_equivalence(Yt);
  CHECK(Et.mu_t.same(-E::sym(ch, "f_u")));
  CHECK(Et.mu_ut.is_zero());

  // quadratic time reparametrization: mu_t picks up the second derivative
  VectorField Yq = parse_field(ch, "Yq", "t^2*d_t - 2*t*f*d_f");
  auto Eq = prolong_equivalence(Yq);
  CHECK(Eq.mu_t.same(E::integer(ch, -2) * E::sym(ch, "f")));

  // x-dependent time shift makes phi^x depend on u_t
  VectorField Yx = parse_field(ch, "Yx", "x*d_t");
  auto Ex = prolong_equivalence(Yx);
  CHECK(Ex.mu_ut.same(E::sym(ch, "f_ux")));

  // scaling family member: mu = (2*c1 - 1)*f for xi = c1*x, a(t) = t
  VectorField Ys(ch);
  E c1 = E::sym(ch, "c1");
  Ys.set(ch.require("x"), c1 * E::sym(ch, "x"));
  Ys.set(ch.require("y"), c1 * E::sym(ch, "y"));
  Ys.set(ch.require("t"), E::sym(ch, "t"));
  Ys.set(ch.require("u"), c1 * E::sym(ch, "u"));
  Ys.set(ch.require("f"), (E::integer(ch, 2) * c1 - E::integer(ch, 1)) * E::sym(ch, "f"));
  auto Es = prolong_equivalence(Ys);
  CHECK(Es.mu_t.is_zero());
  CHECK(Es.mu_ut.is_zero());
}

TEST_CASE("flow oracle validates the prolongation coefficients") {
  auto rep = testutil::run_jet_flow_oracle(120, 0x0A0B0C0Dull);
  CAPTURE(rep.note);
  CHECK(rep.samples == 120 * 10);
  CHECK(rep.violations == 0);
}
