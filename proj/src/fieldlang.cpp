#include "lieclass/parser.hpp"

#include <cctype>
#include <cstdlib>

namespace lieclass {

// ---------------------------------------------------------------------------
// VectorField

void VectorField::set(GenId g, const Expression& e) {
  if (e.is_zero())
    comps_.erase(g);
  else
    comps_[g] = e;
}

Expression VectorField::coeff(GenId g) const {
  auto it = comps_.find(g);
  if (it != comps_.end()) return it->second;
  return Expression::integer(*chart_, 0);
}

VectorField add(const VectorField& a, const VectorField& b) {
  VectorField r(a.chart());
  for (const auto& [g, c] : a.comps()) r.set(g, c);
  for (const auto& [g, c] : b.comps()) r.set(g, r.coeff(g) + c);
  return r;
}

VectorField scale(const VectorField& a, const Expression& s) {
  VectorField r(a.chart());
  for (const auto& [g, c] : a.comps()) r.set(g, c * s);
  return r;
}

VectorField scale(const VectorField& a, const mpq_class& s) {
  return scale(a, Expression::constant(a.chart(), s));
}

bool same(const VectorField& a, const VectorField& b) {
  VectorField d = add(a, scale(b, mpq_class(-1)));
  return d.is_zero();
}

Expression apply(const VectorField& v, const Expression& e) {
  Expression acc = Expression::integer(v.chart(), 0);
  for (const auto& [g, c] : v.comps()) acc = acc + c * e.diff(g);
  return acc;
}


// ---------------------------------------------------------------------------
// lexing

namespace {

struct Token {
  enum Kind { Ident, Int, Punct, End } kind = End;
  std::string text;
  long value = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) { scan(); }
  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    scan();
    return t;
  }

 private:
  void scan() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
        continue;
      }
      if (c == '\n') {
        ++pos_;
        ++line_;
        col_ = 1;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
        ++col_;
        continue;
      }
      break;
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= s_.size()) {
      tok_.kind = Token::End;
      tok_.text = "end of input";
      return;
    }
    char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t st = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        ++pos_;
        ++col_;
      }
      tok_.kind = Token::Ident;
      tok_.text = s_.substr(st, pos_ - st);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t st = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
        ++col_;
      }
      if (pos_ < s_.size() && s_[pos_] == '.')
        throw ParseError("decimal literals are not supported; write rationals as p/q", line_, col_);
      tok_.kind = Token::Int;
      tok_.text = s_.substr(st, pos_ - st);
      try {
        tok_.value = std::stol(tok_.text);
      } catch (...) {
        throw ParseError("integer literal too large", tok_.line, tok_.col);
      }
      return;
    }
    if (std::string("(){}[];,=+-*/^").find(c) != std::string::npos) {
      tok_.kind = Token::Punct;
      tok_.text = std::string(1, c);
      ++pos_;
      ++col_;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

// Scalar-plus-covector value used while parsing; enforcing linearity in the
// d_* atoms is exactly what makes a body a first-order operator.
struct FieldVal {
  Expression s;
  std::map<GenId, Expression> d;
};

class Parser {
 public:
  Parser(Chart& ch, const std::string& text, bool field_mode)
      : ch_(&ch), lex_(text), field_mode_(field_mode) {}
  explicit Parser(const std::string& text) : lex_(text) {}

  // -- shared helpers

  [[noreturn]] void fail(const Token& t, const std::string& m) { throw ParseError(m, t.line, t.col); }

  Token expect_punct(const std::string& p) {
    Token t = lex_.take();
    if (t.kind != Token::Punct || t.text != p)
      fail(t, "expected '" + p + "', got '" + t.text + "'");
    return t;
  }

  Token expect_ident() {
    Token t = lex_.take();
    if (t.kind != Token::Ident) fail(t, "expected an identifier, got '" + t.text + "'");
    return t;
  }

  bool at_punct(const std::string& p) const {
    return lex_.peek().kind == Token::Punct && lex_.peek().text == p;
  }

  void expect_end() {
    Token t = lex_.take();
    if (t.kind != Token::End) fail(t, "unexpected trailing input '" + t.text + "'");
  }

  // -- expression grammar

  Expression scalar_expression() {
    FieldVal v = expression();
    if (!v.d.empty()) {
      Token t = lex_.peek();
      fail(t, "covector atom outside a field body");
    }
    return v.s;
  }

  VectorField field_body(const std::string& name) {
    FieldVal v = expression();
    if (!v.s.is_zero()) {
      Token t = lex_.peek();
      fail(t, "field body has a scalar part (" + v.s.str() + ")");
    }
    VectorField f(*ch_);
    f.name = name;
    for (const auto& [g, c] : v.d) f.set(g, c);
    return f;
  }

  FieldVal expression() { return expr_bp(0); }

  // -- statement / document grammar

  Document document() {
    Document doc;
    doc.chart = std::make_unique<Chart>();
    ch_ = doc.chart.get();
    bool chart_done = false;
    while (lex_.peek().kind != Token::End) {
      Token t = lex_.peek();
      if (t.kind != Token::Ident) fail(t, "expected a declaration, got '" + t.text + "'");
      if (t.text == "chart") {
        if (chart_done) fail(t, "chart declarations must precede field and expr declarations");
        lex_.take();
        expect_punct("{");
        while (!at_punct("}")) chart_stmt();
        expect_punct("}");
      } else if (is_chart_keyword(t.text)) {
        if (chart_done) fail(t, "chart declarations must precede field and expr declarations");
        chart_stmt();
      } else if (t.text == "field" || t.text == "expr") {
        if (!chart_done) {
          finish_chart();
          chart_done = true;
        }
        lex_.take();
        Token name = expect_ident();
        if (doc.field(name.text) || doc.expr(name.text))
          fail(name, "duplicate declaration '" + name.text + "'");
        expect_punct("=");
        if (t.text == "field") {
          field_mode_ = true;
          doc.fields.push_back(field_body(name.text));
        } else {
          field_mode_ = false;
          doc.exprs.emplace_back(name.text, scalar_expression());
        }
        expect_punct(";");
      } else {
        fail(t, "expected a declaration, got '" + t.text + "'");
      }
    }
    if (!chart_done) finish_chart();
    return doc;
  }

  std::unique_ptr<Chart> chart_only() {
    auto chart = std::make_unique<Chart>();
    ch_ = chart.get();
    while (lex_.peek().kind != Token::End) {
      Token t = lex_.peek();
      if (t.kind == Token::Ident && t.text == "chart") {
        lex_.take();
        expect_punct("{");
        while (!at_punct("}")) chart_stmt();
        expect_punct("}");
      } else {
        chart_stmt();
      }
    }
    finish_chart();
    return chart;
  }

 private:
  static bool is_chart_keyword(const std::string& s) {
    return s == "vars" || s == "dep" || s == "class" || s == "param" || s == "fun";
  }

  void chart_stmt() {
    Token kw = expect_ident();
    if (!is_chart_keyword(kw.text)) fail(kw, "expected a chart statement, got '" + kw.text + "'");
    if (kw.text == "fun") {
      Token name = expect_ident();
      expect_punct("(");
      std::vector<std::string> formals;
      if (!at_punct(")")) {
        formals.push_back(expect_ident().text);
        while (at_punct(",")) {
          lex_.take();
          formals.push_back(expect_ident().text);
        }
      }
      expect_punct(")");
      expect_punct(";");
      pending_funs_.push_back({name, formals});
      return;
    }
    bool any = false;
    while (lex_.peek().kind == Token::Ident) {
      Token name = lex_.take();
      any = true;
      try {
        if (kw.text == "vars")
          ch_->add_independent(name.text);
        else if (kw.text == "dep")
          ch_->add_dependent(name.text);
        else if (kw.text == "class")
          ch_->add_classification(name.text);
        else
          ch_->add_parameter(name.text);
      } catch (const DuplicateSymbol& e) {
        fail(name, e.what());
      }
    }
    if (!any) fail(lex_.peek(), "expected at least one name after '" + kw.text + "'");
    expect_punct(";");
  }

  void finish_chart() {
    ch_->generate_jets();
    for (const auto& [name, formals] : pending_funs_) {
      try {
        ch_->add_function(name.text, formals);
      } catch (const DuplicateSymbol& e) {
        fail(name, e.what());
      }
    }
    pending_funs_.clear();
  }

  // -- Pratt core

  static int lbp(const Token& t) {
    if (t.kind != Token::Punct) return 0;
    if (t.text == "+" || t.text == "-") return 10;
    if (t.text == "*" || t.text == "/") return 20;
    if (t.text == "^") return 40;
    return 0;
  }

  void charge(std::size_t cost, const Token& t) {
    budget_ += cost;
    if (budget_ > 10000000) fail(t, "expression too large");
  }

  FieldVal fv_scalar(const Expression& e) { return FieldVal{e, {}}; }

  FieldVal fv_neg(const FieldVal& a) {
    FieldVal r{-a.s, {}};
    for (const auto& [g, c] : a.d) r.d.emplace(g, -c);
    return r;
  }

  FieldVal fv_add(const FieldVal& a, const FieldVal& b) {
    FieldVal r{a.s + b.s, a.d};
    for (const auto& [g, c] : b.d) {
      auto it = r.d.find(g);
      if (it == r.d.end()) {
        r.d.emplace(g, c);
      } else {
        it->second = it->second + c;
        if (it->second.is_zero()) r.d.erase(it);
      }
    }
    return r;
  }

  FieldVal fv_mul(const FieldVal& a, const FieldVal& b, const Token& t) {
    if (!a.d.empty() && !b.d.empty()) fail(t, "product of covector atoms");
    const FieldVal& vec = a.d.empty() ? b : a;
    const Expression& sc = a.d.empty() ? a.s : b.s;
    if (size_of(a) * size_of(b) > 2000000) fail(t, "expression too large");
    charge(size_of(a) * size_of(b), t);
    FieldVal r{a.s * b.s, {}};
    for (const auto& [g, c] : vec.d) {
      Expression p = c * sc;
      if (!p.is_zero()) r.d.emplace(g, p);
    }
    return r;
  }

  FieldVal fv_div(const FieldVal& a, const FieldVal& b, const Token& t) {
    if (!b.d.empty()) fail(t, "division by a covector");
    charge(size_of(a) * size_of(b), t);
    try {
      FieldVal r{a.s / b.s, {}};
      for (const auto& [g, c] : a.d) r.d.emplace(g, c / b.s);
      return r;
    } catch (const DegenerateDivision&) {
      fail(t, "division by an expression that is identically zero");
    }
  }

  FieldVal fv_pow(const FieldVal& a, long k, const Token& t) {
    if (!a.d.empty()) {
      if (k == 1) return a;
      fail(t, "covector atoms cannot be raised to powers");
    }
    if (size_of(a) > 300 && std::abs(k) > 3) fail(t, "expression too large");
    charge(size_of(a) * static_cast<std::size_t>(std::abs(k) * std::abs(k) + 1), t);
    try {
      return fv_scalar(a.s.pow(k));
    } catch (const DegenerateDivision&) {
      fail(t, "zero raised to a negative power");
    }
  }

  static std::size_t size_of(const FieldVal& v) {
    std::size_t n = v.s.fraction().n.ts.size() + v.s.fraction().d.ts.size();
    for (const auto& [g, c] : v.d) {
      (void)g;
      n += c.fraction().n.ts.size() + c.fraction().d.ts.size();
    }
    return n ? n : 1;
  }

  FieldVal expr_bp(int minbp) {
    if (++depth_ > 200) fail(lex_.peek(), "expression nesting too deep");
    FieldVal lhs = nud();
    while (true) {
      Token op = lex_.peek();
      int bp = lbp(op);
      if (bp == 0 || bp <= minbp) break;
      lex_.take();
      if (op.text == "^") {
        long k = exponent_literal();
        lhs = fv_pow(lhs, k, op);
        continue;
      }
      FieldVal rhs = expr_bp(bp);
      if (op.text == "+")
        lhs = fv_add(lhs, rhs);
      else if (op.text == "-")
        lhs = fv_add(lhs, fv_neg(rhs));
      else if (op.text == "*")
        lhs = fv_mul(lhs, rhs, op);
      else
        lhs = fv_div(lhs, rhs, op);
    }
    --depth_;
    return lhs;
  }

  long exponent_literal() {
    bool neg = false;
    bool paren = false;
    if (at_punct("(")) {
      paren = true;
      lex_.take();
    }
    if (at_punct("-")) {
      neg = true;
      lex_.take();
    }
    Token t = lex_.take();
    if (t.kind != Token::Int) fail(t, "exponent must be an integer literal");
    if (t.value > 64) fail(t, "exponent magnitude above 64");
    if (paren) expect_punct(")");
    return neg ? -t.value : t.value;
  }

  FieldVal nud() {
    Token t = lex_.take();
    if (t.kind == Token::Int) return fv_scalar(Expression::integer(*ch_, t.value));
    if (t.kind == Token::Punct) {
      if (t.text == "-") return fv_neg(expr_bp(30));
      if (t.text == "(") {
        FieldVal v = expr_bp(0);
        expect_punct(")");
        return v;
      }
      fail(t, "expected an expression, got '" + t.text + "'");
    }
    if (t.kind == Token::End) fail(t, "expected an expression, got end of input");
    // identifiers
    if (t.text == "exp") {
      expect_punct("(");
      FieldVal v = expr_bp(0);
      expect_punct(")");
      if (!v.d.empty()) fail(t, "covector atom inside exp");
      return fv_scalar(Expression::exp(v.s));
    }
    if (t.text.size() > 2 && t.text.rfind("d_", 0) == 0) {
      GenId g = ch_->lookup(t.text.substr(2));
      if (g != kNoGen) {
        if (!field_mode_) fail(t, "covector atom outside a field body");
        if (!ch_->is_coordinate(g))
          fail(t, "'" + t.text.substr(2) + "' is not a base coordinate");
        FieldVal v{Expression::integer(*ch_, 0), {}};
        v.d.emplace(g, Expression::integer(*ch_, 1));
        return v;
      }
    }
    if (ch_->has_function(t.text)) return fv_scalar(atom_ref(t));
    GenId g = ch_->lookup(t.text);
    if (g == kNoGen) fail(t, "unknown symbol '" + t.text + "'");
    return fv_scalar(Expression::sym(*ch_, g));
  }

  Expression atom_ref(const Token& name) {
    std::uint32_t fid = ch_->function_id(name.text);
    const FunctionDecl& fd = ch_->function(fid);
    std::vector<int> slots;
    if (at_punct("[")) {
      lex_.take();
      while (true) {
        Token s = expect_ident();
        std::size_t idx = fd.formals.size();
        for (std::size_t i = 0; i < fd.formals.size(); ++i)
          if (fd.formals[i] == s.text) idx = i;
        if (idx == fd.formals.size())
          fail(s, "'" + s.text + "' is not a formal of " + fd.name);
        slots.push_back(static_cast<int>(idx));
        if (at_punct(",")) {
          lex_.take();
          continue;
        }
        break;
      }
      expect_punct("]");
    }
    std::vector<Expression> args;
    if (at_punct("(")) {
      Token open = lex_.take();
      if (!at_punct(")")) {
        while (true) {
          FieldVal v = expr_bp(0);
          if (!v.d.empty()) fail(open, "covector atom in a function argument");
          args.push_back(v.s);
          if (at_punct(",")) {
            lex_.take();
            continue;
          }
          break;
        }
      }
      Token close = expect_punct(")");
      if (args.size() != fd.formals.size())
        fail(close, fd.name + " expects " + std::to_string(fd.formals.size()) +
                        " arguments, got " + std::to_string(args.size()));
    } else {
      for (std::size_t i = 0; i < fd.formals.size(); ++i) {
        if (fd.formal_syms[i] == kNoGen)
          fail(name, fd.name + " needs explicit arguments ('" + fd.formals[i] +
                         "' names no chart symbol)");
        args.push_back(Expression::sym(*ch_, fd.formal_syms[i]));
      }
    }
    return Expression::atom(*ch_, fid, std::move(slots), args);
  }

  Chart* ch_ = nullptr;
  Lexer lex_;
  bool field_mode_ = false;
  int depth_ = 0;
  std::size_t budget_ = 0;
  std::vector<std::pair<Token, std::vector<std::string>>> pending_funs_;
};

}  // namespace

// ---------------------------------------------------------------------------
// public entry points

const VectorField* Document::field(const std::string& name) const {
  for (const auto& f : fields)
    if (f.name == name) return &f;
  return nullptr;
}

const Expression* Document::expr(const std::string& name) const {
  for (const auto& e : exprs)
    if (e.first == name) return &e.second;
  return nullptr;
}

Document parse_document(const std::string& text) { return Parser(text).document(); }

std::unique_ptr<Chart> parse_chart(const std::string& text) { return Parser(text).chart_only(); }

VectorField parse_field(Chart& ch, const std::string& name, const std::string& body) {
  Parser p(ch, body, true);
  VectorField f = p.field_body(name);
  p.expect_end();
  return f;
}

Expression parse_expression(Chart& ch, const std::string& text) {
  Parser p(ch, text, false);
  Expression e = p.scalar_expression();
  p.expect_end();
  return e;
}

std::string render_field(const VectorField& v) {
  if (v.comps().empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [g, c] : v.comps()) {
    std::string dn = "d_" + v.chart().name(g);
    Expression cc = c;
    bool neg = false;
    if (!c.fraction().n.ts.empty() && c.fraction().n.ts.front().c < 0) {
      neg = true;
      cc = -c;
    }
    std::string piece;
    if (cc.is_rational() && cc.rational_value() == 1) {
      piece = dn;
    } else {
      const Fraction& f = cc.fraction();
      bool den_one = f.d.ts.size() == 1 && f.d.ts.front().m.empty() && !f.d.ts.front().e &&
                     f.d.ts.front().c == 1;
      std::string body = cc.str();
      if (!den_one || f.n.ts.size() > 1) body = "(" + body + ")";
      piece = body + "*" + dn;
    }
    if (first)
      out += (neg ? "-" : "") + piece;
    else
      out += (neg ? " - " : " + ") + piece;
    first = false;
  }
  return out;
}

}  // namespace lieclass
