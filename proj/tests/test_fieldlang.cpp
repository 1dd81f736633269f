#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lieclass/parser.hpp"

using namespace lieclass;
using E = Expression;

namespace {

const char* kChartText = R"(
# evolution-equation chart
chart {
  vars x y t;
  dep u;
  class f;
  param s c1 c2 c3 c4;
  fun a(t);
  fun beta(x, y);
  fun Phi(l);
}
)";

}  // namespace

TEST_CASE("chart parsing declares symbols and jets") {
  auto ch = parse_chart(kChartText);
  for (const char* n : {"x", "y", "t", "u", "f", "s", "c1", "c2", "c3", "c4"})
    CHECK(ch->lookup(n) != kNoGen);
  // first and second order jets, x-block first
  for (const char* n : {"u_x", "u_y", "u_t", "u_xx", "u_xy", "u_xt", "u_yy", "u_yt", "u_tt"})
    CHECK(ch->lookup(n) != kNoGen);
  CHECK(ch->lookup("u_ttt") == kNoGen);  // order three only on demand
  CHECK(ch->has_function("a"));
  CHECK(ch->has_function("beta"));
  CHECK(ch->has_function("Phi"));
  // unresolvable formal is allowed at declaration time
  CHECK(ch->function(ch->function_id("Phi")).formal_syms[0] == kNoGen);
  // bare statement list works without the block
  auto ch2 = parse_chart("vars x y; dep u;");
  CHECK(ch2->lookup("u_xy") != kNoGen);
}

TEST_CASE("chart errors carry position") {
  try {
    parse_chart("vars x;\nvars x;");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.col == 6);
    CHECK(std::string(e.what()).find("duplicate symbol") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_chart("vars;"), ParseError);
  CHECK_THROWS_AS(parse_chart("chart { vars x y"), ParseError);
  CHECK_THROWS_AS(parse_chart("vector x;"), ParseError);
}

TEST_CASE("field bodies are linear in the covector atoms") {
  auto ch = parse_chart(kChartText);
  VectorField v = parse_field(*ch, "V", "y*d_x - d_y");
  CHECK(v.coeff(ch->require("x")).same(E::sym(*ch, "y")));
  CHECK(v.coeff(ch->require("y")).same(E::integer(*ch, -1)));
  CHECK(v.coeff(ch->require("t")).is_zero());

  VectorField w = parse_field(*ch, "W", "d_x + d_x");
  CHECK(w.coeff(ch->require("x")).same(E::integer(*ch, 2)));

  VectorField z = parse_field(*ch, "Z", "u*d_x/x");
  CHECK(z.coeff(ch->require("x")).same(E::sym(*ch, "u") / E::sym(*ch, "x")));

  VectorField at = parse_field(*ch, "A", "a*d_t - a[t]*f*d_f");
  CHECK(at.coeff(ch->require("t")).same(E::call(*ch, "a", {E::sym(*ch, "t")})));

  // cancellation removes the component entirely
  VectorField c = parse_field(*ch, "C", "x*d_u - x*d_u + d_t");
  CHECK(c.comps().size() == 1);

  CHECK_THROWS_AS(parse_field(*ch, "B", "y*d_x + 5"), ParseError);
  CHECK_THROWS_AS(parse_field(*ch, "B", "d_x*d_x"), ParseError);
  CHECK_THROWS_AS(parse_field(*ch, "B", "1/d_x"), ParseError);
  CHECK_THROWS_AS(parse_field(*ch, "B", "d_x^2"), ParseError);
  CHECK_THROWS_AS(parse_field(*ch, "B", "exp(d_x)"), ParseError);
  CHECK_THROWS_AS(parse_field(*ch, "B", "d_s"), ParseError);    // parameter, not a coordinate
  CHECK_THROWS_AS(parse_field(*ch, "B", "d_u_x"), ParseError);  // jets are not base coordinates
}

TEST_CASE("expression parsing") {
  auto ch = parse_chart(kChartText);
  E lap = parse_expression(*ch, "u_xx + u_yy");
  CHECK(lap.same(E::sym(*ch, "u_xx") + E::sym(*ch, "u_yy")));

  E x = E::sym(*ch, "x"), y = E::sym(*ch, "y"), u = E::sym(*ch, "u");
  CHECK(parse_expression(*ch, "Phi(u + x/y)").same(E::call(*ch, "Phi", {u + x / y})));
  CHECK(parse_expression(*ch, "beta").same(E::call(*ch, "beta", {x, y})));
  CHECK(parse_expression(*ch, "beta[x,y]")
            .same(E::atom(*ch, ch->function_id("beta"), {0, 1}, {x, y})));
  CHECK(parse_expression(*ch, "exp(-x/y)*Phi(u)").same(E::exp(-(x / y)) * E::call(*ch, "Phi", {u})));
  CHECK(parse_expression(*ch, "x^2 - y^-1").same(x * x - E::integer(*ch, 1) / y));
  CHECK(parse_expression(*ch, "x^(-2)").same((x * x).pow(-1)));
  CHECK(parse_expression(*ch, "2/3*x").same(E::constant(*ch, mpq_class(2, 3)) * x));
  CHECK(parse_expression(*ch, "2*x/3").same(E::constant(*ch, mpq_class(2, 3)) * x));
  CHECK(parse_expression(*ch, "-x^2").same(-(x * x)));  // unary minus binds looser than power
  CHECK(parse_expression(*ch, "a[t,t](t)*x")
            .same(E::atom(*ch, ch->function_id("a"), {0, 0}, {E::sym(*ch, "t")}) * x));

  CHECK_THROWS_AS(parse_expression(*ch, "Phi()"), ParseError);
  CHECK_THROWS_AS(parse_expression(*ch, "Phi"), ParseError);  // formal 'l' names no symbol
  CHECK_THROWS_AS(parse_expression(*ch, "Phi(u, x)"), ParseError);
  CHECK_THROWS_AS(parse_expression(*ch, "beta[z]"), ParseError);
  CHECK_THROWS_AS(parse_expression(*ch, "q + 1"), ParseError);
  CHECK_THROWS_AS(parse_expression(*ch, "1.5*x"), ParseError);
  CHECK_THROWS_AS(parse_expression(*ch, "x^999"), ParseError);
  CHECK_THROWS_AS(parse_expression(*ch, "d_x"), ParseError);
  CHECK_THROWS_AS(parse_expression(*ch, "x +"), ParseError);
  CHECK_THROWS_AS(parse_expression(*ch, "x y"), ParseError);
  CHECK_THROWS_AS(parse_expression(*ch, "1/(x - x)"), ParseError);
  CHECK_THROWS_AS(parse_expression(*ch, "x^y"), ParseError);
}

TEST_CASE("field rendering round-trips") {
  auto ch = parse_chart(kChartText);
  const char* bodies[] = {
      "x*d_x + y*d_y + t*d_t + u*d_u",
      "y*d_x",
      "d_y",
      "t*d_t - f*d_f",
      "d_t",
      "d_u",
      "y*d_x - d_y + d_u",
      "-d_y - d_u",
      "((y*u + x)/y)*d_x",
      "exp(x/y)*d_u",
      "(x^2 - y^2)*d_x + 2*d_y",
      "a*d_t + beta*d_u",
  };
  for (const char* b : bodies) {
    VectorField v = parse_field(*ch, "V", b);
    std::string r = render_field(v);
    VectorField v2 = parse_field(*ch, "V", r);
    CAPTURE(b);
    CAPTURE(r);
    CHECK(same(v, v2));
  }
  CHECK(render_field(parse_field(*ch, "V", "y*d_x - d_y")) == "y*d_x - d_y");
  CHECK(render_field(parse_field(*ch, "V", "-d_y + d_u")) == "-d_y + d_u");
  VectorField zero(*ch);
  CHECK(render_field(zero) == "0");
}

TEST_CASE("documents hold charts, fields and expressions") {
  Document doc = parse_document(R"(
    vars x y t; dep u; class f;
    fun Phi(l);
    field Y2 = y*d_x;               # shear
    field Y6 = d_u;
    expr I1 = u + x/y;
    expr W24 = exp(y);
  )");
  REQUIRE(doc.chart != nullptr);
  REQUIRE(doc.field("Y2") != nullptr);
  REQUIRE(doc.expr("I1") != nullptr);
  CHECK(doc.field("Y2")->coeff(doc.chart->require("x")).same(E::sym(*doc.chart, "y")));
  CHECK(doc.expr("I1")->same(E::sym(*doc.chart, "u") +
                             E::sym(*doc.chart, "x") / E::sym(*doc.chart, "y")));
  CHECK(doc.field("missing") == nullptr);
  CHECK(doc.exprs.size() == 2);

  CHECK_THROWS_AS(parse_document("field F = d_x; vars z;"), ParseError);
  CHECK_THROWS_AS(parse_document("vars x; field F = d_x; field F = d_x;"), ParseError);
  CHECK_THROWS_AS(parse_document("vars x; field F = d_x"), ParseError);
  CHECK_THROWS_AS(parse_document("vars x; junk J = x;"), ParseError);
}

TEST_CASE("apply acts as a derivation") {
  auto ch = parse_chart(kChartText);
  VectorField v = parse_field(*ch, "V", "y*d_x - d_y");
  E x = E::sym(*ch, "x"), y = E::sym(*ch, "y"), u = E::sym(*ch, "u");
  CHECK(apply(v, x).same(y));
  CHECK(apply(v, x * y).same(y * y - x));
  CHECK(apply(v, u).is_zero());
  E g = x / y;
  E h = u + y;
  CHECK(apply(v, g * h).same(apply(v, g) * h + g * apply(v, h)));
  // linear-combination helpers
  VectorField w = add(scale(v, mpq_class(2)), parse_field(*ch, "W", "d_y"));
  CHECK(w.coeff(ch->require("y")).same(E::integer(*ch, -1)));
  CHECK(same(w, parse_field(*ch, "W2", "2*y*d_x - d_y")));
}

TEST_CASE("parser is total on arbitrary input, 10^5 samples") {
  std::mt19937_64 rng(0xF1E1D1A6ull);
  auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  const std::vector<std::string> vocab = {
      "chart", "vars",  "dep",  "class", "param", "fun",  "field", "expr", "exp", "x",
      "y",     "t",     "u",    "f",     "d_x",   "d_y",  "d_u",   "Phi",  "a",   "u_xx",
      "+",     "-",     "*",    "/",     "^",     "(",    ")",     "[",    "]",   "{",
      "}",     ";",     ",",    "=",     "#",     "\n",   "0",     "1",    "2",   "7",
      "64",    "legit", " ",    "_q",    ".",     "@"};
  int parsed = 0;
  for (int it = 0; it < 100000; ++it) {
    std::string s;
    if (it % 2 == 0) {
      int len = static_cast<int>(pick(0, 40));
      for (int i = 0; i < len; ++i) s += static_cast<char>(pick(32, 126));
    } else {
      int len = static_cast<int>(pick(0, 14));
      for (int i = 0; i < len; ++i) {
        s += vocab[pick(0, static_cast<long>(vocab.size()) - 1)];
        s += ' ';
      }
    }
    try {
      Document d = parse_document(s);
      ++parsed;
    } catch (const ParseError&) {
      // the only permitted failure mode
    }
  }
  // token soup does occasionally form valid documents
  CHECK(parsed > 0);
}
