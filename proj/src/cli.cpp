#include "lieclass/cli.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lieclass/catalogs.hpp"
#include "lieclass/determining.hpp"
#include "lieclass/invclass.hpp"
#include "lieclass/parser.hpp"
#include "lieclass/report.hpp"

namespace lieclass {

namespace {

struct Options {
  std::string basis_path;
  std::string format = "md";
  std::uint64_t seed = 0xC1A551F1ull;
  std::size_t samples = 1000;
  bool reflections = false;
  bool printed_y5 = false;
  std::string out_path;
  std::string field_text;
  std::string f_text;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--basis", o.basis_path,
                  "path to a .lsf document whose field declarations replace the built-in basis");
  sub->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "md"}))
      ->capture_default_str();
  sub->add_option("--seed", o.seed, "seed for randomized audits")->capture_default_str();
  sub->add_option("--samples", o.samples, "sample count for randomized audits")
      ->capture_default_str();
  sub->add_flag("--reflections", o.reflections,
                "also try the discrete sign changes when matching representatives");
  sub->add_flag("--printed-Y5", o.printed_y5,
                "use the circulating form d_t - f*d_f of the fifth generator");
  sub->add_option("-o,--output", o.out_path, "write the report to this path instead of stdout");
}

struct Basis {
  std::unique_ptr<Chart> chart;   // owning chart for the built-in basis
  std::unique_ptr<Document> doc;  // owning document for a loaded basis
  std::vector<VectorField> fields;
  std::vector<std::string> names;
};

Basis load_basis(const Options& o) {
  Basis b;
  if (o.basis_path.empty()) {
    b.chart = catalog::make_chart();
    b.fields = catalog::equivalence_basis(*b.chart, o.printed_y5);
    for (std::size_t i = 0; i < b.fields.size(); ++i)
      b.names.push_back("Y" + std::to_string(i + 1));
    return b;
  }
  std::ifstream in(o.basis_path);
  if (!in) throw std::invalid_argument("cannot open basis file " + o.basis_path);
  std::stringstream ss;
  ss << in.rdbuf();
  b.doc = std::make_unique<Document>(parse_document(ss.str()));
  if (b.doc->fields.empty())
    throw std::invalid_argument("basis document " + o.basis_path + " declares no fields");
  b.fields = b.doc->fields;
  for (const auto& f : b.fields) b.names.push_back(f.name);
  return b;
}

void emit(const report::Doc& doc, const Options& o) {
  report::Format fmt = report::parse_format(o.format);
  const char* cv = std::getenv("LIECLASS_COLOR");
  bool color = cv != nullptr && std::string(cv) == "1" && fmt == report::Format::Md &&
               o.out_path.empty();
  std::string text = report::render(doc, fmt, color);
  if (o.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write to " + o.out_path);
  out << text;
}

int cmd_brackets(const Options& o) {
  Basis b = load_basis(o);
  report::Doc d = report::brackets_doc(b.names, b.fields);
  emit(d, o);
  return d["facts"]["closed"].get<bool>() ? 0 : 2;
}

int cmd_adjoint(const Options& o) {
  Basis b = load_basis(o);
  try {
    StructureConstants sc = structure_constants(b.fields);
    emit(report::adjoint_doc(b.names, sc), o);
    return 0;
  } catch (const NonClosed&) {
    // fall back to the commutator table, which carries the witness
    report::Doc d = report::brackets_doc(b.names, b.fields);
    emit(d, o);
    return 2;
  }
}

int cmd_detsys(const Options& o) {
  DeterminingSystem ds = determining_system();
  emit(report::detsys_doc(ds), o);
  return 0;
}

int cmd_check(const Options& o) {
  auto ch = parse_chart("vars x y t; dep u; fun F(a, b, c, d, e); fun Phi(l);");
  VectorField X = parse_field(*ch, "X", o.field_text);
  Expression f = parse_expression(*ch, o.f_text);
  SymmetryCheck sc = is_symmetry(X, f);
  emit(report::check_doc(o.field_text, o.f_text, sc), o);
  return sc.verdict == Verdict::Yes ? 0 : 2;
}

int cmd_optsys(const Options& o) {
  Basis b = load_basis(o);
  StructureConstants sc;
  try {
    sc = structure_constants(b.fields);
  } catch (const NonClosed&) {
    report::Doc d = report::brackets_doc(b.names, b.fields);
    emit(d, o);
    return 2;
  }
  auto items = catalog::optimal_system_items();
  std::vector<std::vector<int>> refl;
  if (o.reflections) refl = catalog::reflection_signs();
  OptSysAudit audit = audit_optimal_system(sc, items, o.samples, o.seed, refl);
  emit(report::optsys_doc(audit, items), o);
  bool finding = audit.replay_failures > 0 || audit.unmatched > 0 ||
                 !audit.redundant_pairs.empty();
  return finding ? 2 : 0;
}

int cmd_classify(const Options& o) {
  Table3Audit audit = audit_table3();
  emit(report::classify_doc(audit), o);
  return audit.printed_all_pass == audit.rows.size() ? 0 : 2;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"exact symmetry-classification toolkit for u_t = f(x, y, u, u_x, u_y)*(u_xx + u_yy)"};
  app.require_subcommand(1);
  Options o;

  CLI::App* brackets =
      app.add_subcommand("brackets", "commutator table of the equivalence-algebra basis");
  add_common(brackets, o);
  CLI::App* adjoint =
      app.add_subcommand("adjoint", "table of conjugates under the one-parameter groups");
  add_common(adjoint, o);
  CLI::App* detsys = app.add_subcommand(
      "detsys", "determining system of the class for a general point operator");
  add_common(detsys, o);
  CLI::App* check =
      app.add_subcommand("check", "decide whether a field generates a symmetry for a given f");
  add_common(check, o);
  check->add_option("--field", o.field_text, "candidate operator, e.g. \"-d_y\"")->required();
  check
      ->add_option("--f", o.f_text,
                   "right-hand factor; F(x,y,u,u_x,u_y) and Phi(u) name unknown profiles")
      ->required();
  CLI::App* optsys = app.add_subcommand(
      "optsys", "randomized audit of the one-dimensional subalgebra representatives");
  add_common(optsys, o);
  CLI::App* classify =
      app.add_subcommand("classify", "row-by-row audit of the classification table");
  add_common(classify, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (brackets->parsed()) return cmd_brackets(o);
    if (adjoint->parsed()) return cmd_adjoint(o);
    if (detsys->parsed()) return cmd_detsys(o);
    if (check->parsed()) return cmd_check(o);
    if (optsys->parsed()) return cmd_optsys(o);
    if (classify->parsed()) return cmd_classify(o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace lieclass
