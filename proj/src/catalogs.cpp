#include "lieclass/catalogs.hpp"

#include "lieclass/parser.hpp"

namespace lieclass::catalog {

const char* chart_text() {
  return R"(
    vars x y t;
    dep u;
    class f;
    param a c1 c2 c3 c4 c5 c6;
    fun Phi(l);
  )";
}

std::unique_ptr<Chart> make_chart() { return parse_chart(chart_text()); }

std::vector<VectorField> equivalence_basis(Chart& ch, bool printed_y5) {
  static const char* kBodies[6] = {
      "x*d_x + y*d_y + t*d_t + u*d_u + f*d_f",
      "y*d_x",
      "d_x",
      "d_y",
      "t*d_t - f*d_f",
      "d_u",
  };
  std::vector<VectorField> out;
  for (int i = 0; i < 6; ++i) {
    const char* body = (i == 4 && printed_y5) ? "d_t - f*d_f" : kBodies[i];
    out.push_back(parse_field(ch, "Y" + std::to_string(i + 1), body));
  }
  return out;
}

std::vector<std::vector<mpq_class>> optimal_system_items() {
  static const int kItems[32][6] = {
      {1, 0, 0, 0, 0, 0},   {0, 1, 0, 0, 0, 0},   {0, 0, 0, -1, 0, 0},  {1, 0, 0, 0, 1, 0},
      {1, -1, 0, 0, 0, 0},  {0, 1, 0, -1, 0, 0},  {0, 0, 0, -1, 0, 1},  {0, 0, 0, -1, 0, -1},
      {0, 1, 0, 0, 1, 0},   {0, 1, 0, 0, -1, 0},  {0, 1, 0, 0, 0, 1},   {0, 1, 0, 0, 0, -1},
      {1, 1, 0, 0, 0, 0},   {0, 0, 0, -1, 1, 1},  {0, 1, 0, -1, -1, 1}, {0, 1, 0, -1, 0, 1},
      {0, 1, 0, -1, 1, -1}, {0, 1, 0, -1, 0, -1}, {1, 1, 0, 0, 1, 0},   {0, 1, 0, 0, 1, 1},
      {0, 1, 0, 0, 1, -1},  {0, 1, 0, 0, -1, -1}, {0, 1, 0, 0, -1, 1},  {0, 0, 0, -1, -1, -1},
      {0, 0, 0, -1, -1, 1}, {0, 0, 0, -1, 1, -1}, {0, 1, 0, -1, 1, 1},  {1, 1, 0, 0, -1, 0},
      {1, -1, 0, 0, -1, 0}, {1, -1, 0, 0, 1, 0},  {1, 0, 0, 0, -1, 0},  {0, 1, 0, -1, -1, -1},
  };
  std::vector<std::vector<mpq_class>> out;
  out.reserve(32);
  for (const auto& row : kItems) {
    std::vector<mpq_class> v(6);
    for (int k = 0; k < 6; ++k) v[k] = row[k];
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::vector<int>> reflection_signs() {
  return {
      {1, -1, -1, 1, 1, 1},   // x -> -x
      {1, 1, 1, 1, 1, -1},    // u -> -u
      {1, -1, -1, 1, 1, -1},  // both
  };
}

const std::vector<Table3Row>& table3_rows() {
  static const std::vector<Table3Row> kRows = {
      {1, "x*d_x + y*d_y + u*d_u + f*d_f", "u/x", "x", "x*d_x + y*d_y + t*d_t + u*d_u"},
      {2, "y*d_x", "u", "1", "y*d_x"},
      {3, "-d_y", "u", "1", "-d_y"},
      {4, "(x+y)*d_x + y*d_y + u*d_u + f*d_f", "u/(x+y)", "y", "(x+y)*d_x + y*d_y + u*d_u"},
      {5, "x*d_x + y*d_y + u*d_u", "u/x", "1", "x*d_x + y*d_y + (t+1)*d_t + u*d_u"},
      {6, "x*d_x + y*d_y + u*d_u + 2*f*d_f", "u/x", "x^2", "x*d_x + y*d_y + (t-1)*d_t + u*d_u"},
      {7, "(x-y)*d_x + y*d_y + u*d_u + f*d_f", "u/(x-y)", "x - y",
       "(x-y)*d_x + y*d_y + t*d_t + u*d_u"},
      {8, "y*d_x - d_y", "u", "1", "y*d_x - d_y"},
      {9, "-d_y + d_u", "u", "1", "-d_y + d_u"},
      {10, "-d_y - d_u", "x", "1", "-d_y - d_u"},
      {11, "y*d_x - f*d_f", "u", "exp(-x/y)", "y*d_x + d_t"},
      {12, "y*d_x + f*d_f", "u", "exp(x/y)", "y*d_x - d_t"},
      {13, "y*d_x + d_u", "u - x/y", "1", "y*d_x + d_u"},
      {14, "y*d_x - d_u", "u + x/y", "1", "y*d_x - d_u"},
      {15, "(x-y)*d_x + y*d_y + u*d_u", "u/(x-y)", "1",
       "(x-y)*d_x + y*d_y + (t+1)*d_t + u*d_u"},
      {16, "(x+y)*d_x + y*d_y + u*d_u + 2*f*d_f", "u/(x+y)", "(x+y)^2",
       "(x+y)*d_x + y*d_y + (t-1)*d_t + u*d_u"},
      {17, "(x-y)*d_x + y*d_y + u*d_u + 2*f*d_f", "u/(x-y)", "(x-y)^2",
       "(x-y)*d_x + y*d_y + (t-1)*d_t + u*d_u"},
      {18, "(x+y)*d_x + u*d_u", "u/(x+y)", "1", "(x+y)*d_x + (t+1)*d_t + u*d_u"},
      {19, "y*d_x + d_u - f*d_f", "u - x/y", "exp(-x/y)", "y*d_x + d_t + d_u"},
      {20, "y*d_x - d_u - f*d_f", "u + x/y", "exp(-x/y)", "y*d_x + d_t - d_u"},
      {21, "y*d_x - d_u + f*d_f", "u + x/y", "exp(x/y)", "y*d_x - d_t - d_u"},
      {22, "y*d_x + d_u + f*d_f", "u - x/y", "exp(x/y)", "y*d_x - d_t + d_u"},
      {23, "y*d_x - d_y + d_u", "u - x/y", "1", "y*d_x - d_y + d_u"},
      {24, "y*d_x - d_y - d_u", "u + x/y", "exp(y)", "y*d_x - d_y - d_u"},
      {25, "-d_y + d_u - f*d_f", "u + y", "1", "-d_y + d_t + d_u"},
      {26, "-d_y - d_u + f*d_f", "u - y", "exp(-y)", "-d_y - d_t - d_u"},
      {27, "-d_y + d_u + f*d_f", "u + y", "exp(-y)", "-d_y - d_t + d_u"},
      {28, "-d_y - d_u - f*d_f", "u - y", "exp(y)", "-d_y + d_t - d_u"},
      {29, "y*d_x - d_y + d_u - f*d_f", "u + x/y", "exp(-x/y)", "y*d_x - d_y + d_t + d_u"},
      {30, "y*d_x - d_y - d_u + f*d_f", "u + x/y", "exp(x/y)", "y*d_x - d_y - d_t - d_u"},
      {31, "y*d_x - d_y + d_u + f*d_f", "u - x/y", "exp(x/y)", "y*d_x - d_y - d_t + d_u"},
      {32, "y*d_x - d_y - d_u - f*d_f", "u + x/y", "exp(-x/y)", "y*d_x - d_y + d_t - d_u"},
  };
  return kRows;
}

}  // namespace lieclass::catalog
