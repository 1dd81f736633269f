#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lieclass/field.hpp"

namespace lieclass {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error("line " + std::to_string(line_) + ", col " + std::to_string(col_) +
                           ": " + msg),
        line(line_),
        col(col_) {}
};

// A parsed .lsf document. The chart lives on the heap so fields and
// expressions built over it stay valid when the document moves.
struct Document {
  std::unique_ptr<Chart> chart;
  std::vector<VectorField> fields;
  std::vector<std::pair<std::string, Expression>> exprs;

  const VectorField* field(const std::string& name) const;
  const Expression* expr(const std::string& name) const;
};

// Full document: chart statements (optionally inside `chart { ... }`),
// followed by `field NAME = ...;` and `expr NAME = ...;` declarations.
Document parse_document(const std::string& text);

// Chart statements only, either bare or wrapped in a block. Jets are
// generated automatically once all statements are read.
std::unique_ptr<Chart> parse_chart(const std::string& text);

// One field body over an existing chart, e.g. "y*d_x - d_y".
VectorField parse_field(Chart& ch, const std::string& name, const std::string& body);

// One scalar expression over an existing chart.
Expression parse_expression(Chart& ch, const std::string& text);

// Renders a field so that parse_field(render_field(v)) reproduces it.
std::string render_field(const VectorField& v);

}  // namespace lieclass
