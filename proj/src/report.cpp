#include "lieclass/report.hpp"

#include <sstream>
#include <stdexcept>

#include "lieclass/parser.hpp"

namespace lieclass::report {

namespace {

// linear combination over explicit names; coefficients as exact rationals
std::string combo(const std::vector<mpq_class>& a, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0) continue;
    mpq_class q = a[k];
    std::string term;
    if (out.empty()) {
      if (q < 0) {
        term = "-";
        q = -q;
      }
    } else {
      term = q < 0 ? " - " : " + ";
      if (q < 0) q = -q;
    }
    if (q != 1) term += q.get_str() + "*";
    term += names[k];
    out += term;
  }
  return out.empty() ? "0" : out;
}

// one PolyExp-weighted term of an adjoint entry
std::string poly_term(const PolyExp& c, const std::string& name) {
  std::string s = c.str();
  if (s == "1") return name;
  if (s == "-1") return "-" + name;
  if (s.find(' ') != std::string::npos) return "(" + s + ")*" + name;
  return s + "*" + name;
}

// the conjugated generator (index lead) is printed first, corrections after
std::string poly_combo(const std::vector<PolyExp>& col, const std::vector<std::string>& names,
                       std::size_t lead) {
  std::vector<std::size_t> order;
  if (lead < col.size() && !col[lead].is_zero()) order.push_back(lead);
  for (std::size_t k = 0; k < col.size(); ++k)
    if (k != lead && !col[k].is_zero()) order.push_back(k);
  std::string out;
  for (std::size_t k : order) {
    std::string term = poly_term(col[k], names[k]);
    if (out.empty())
      out = term;
    else if (term[0] == '-')
      out += " - " + term.substr(1);
    else
      out += " + " + term;
  }
  return out.empty() ? "0" : out;
}

Doc make_doc(const std::string& command) {
  Doc d;
  d["schema"] = 1;
  d["command"] = command;
  d["facts"] = Doc::object();
  d["tables"] = Doc::array();
  d["notes"] = Doc::array();
  return d;
}

void add_table(Doc& d, const std::string& title, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  Doc t;
  t["title"] = title;
  t["columns"] = columns;
  t["rows"] = rows;
  d["tables"].push_back(std::move(t));
}

std::string pf(bool ok) { return ok ? "pass" : "fail"; }

// ---------------------------------------------------------------------------
// renderers

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string scalar_str(const Doc& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

std::string render_csv(const Doc& doc) {
  std::ostringstream os;
  os << "fact,key,value\n";
  os << "fact,schema," << doc["schema"].dump() << "\n";
  os << "fact,command," << csv_quote(doc["command"].get<std::string>()) << "\n";
  for (const auto& [k, v] : doc["facts"].items())
    os << "fact," << csv_quote(k) << "," << csv_quote(scalar_str(v)) << "\n";
  for (const auto& t : doc["tables"]) {
    os << "\n" << "table," << csv_quote(t["title"].get<std::string>()) << "\n";
    std::string header;
    for (const auto& c : t["columns"]) {
      if (!header.empty()) header += ",";
      header += csv_quote(c.get<std::string>());
    }
    os << header << "\n";
    for (const auto& row : t["rows"]) {
      std::string line;
      for (const auto& cell : row) {
        if (!line.empty()) line += ",";
        line += csv_quote(cell.get<std::string>());
      }
      os << line << "\n";
    }
  }
  if (!doc["notes"].empty()) os << "\n";
  for (const auto& n : doc["notes"]) os << "note," << csv_quote(n.get<std::string>()) << "\n";
  return os.str();
}

std::string md_cell(const std::string& s, bool color) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else out += c;
  }
  if (color) {
    if (out == "pass" || out == "yes") return "\x1b[32m" + out + "\x1b[0m";
    if (out == "fail" || out == "no") return "\x1b[31m" + out + "\x1b[0m";
  }
  return out;
}

std::string render_md(const Doc& doc, bool color) {
  std::ostringstream os;
  os << "# lieclass " << doc["command"].get<std::string>() << "\n\n";
  for (const auto& [k, v] : doc["facts"].items())
    os << "- " << k << ": " << md_cell(scalar_str(v), color) << "\n";
  for (const auto& t : doc["tables"]) {
    os << "\n## " << t["title"].get<std::string>() << "\n\n";
    std::string header = "|", rule = "|";
    for (const auto& c : t["columns"]) {
      header += " " + md_cell(c.get<std::string>(), false) + " |";
      rule += " --- |";
    }
    os << header << "\n" << rule << "\n";
    for (const auto& row : t["rows"]) {
      os << "|";
      for (const auto& cell : row) os << " " << md_cell(cell.get<std::string>(), color) << " |";
      os << "\n";
    }
  }
  if (!doc["notes"].empty()) os << "\n";
  for (const auto& n : doc["notes"]) os << "> " << n.get<std::string>() << "\n";
  return os.str();
}

}  // namespace

Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  if (s == "md") return Format::Md;
  throw std::invalid_argument("unknown format '" + s + "' (expected json, csv or md)");
}

Doc brackets_doc(const std::vector<std::string>& names, const std::vector<VectorField>& basis) {
  Doc d = make_doc("brackets");
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> columns = {"[ , ]"};
  columns.insert(columns.end(), names.begin(), names.end());
  d["facts"]["dimension"] = basis.size();
  std::vector<std::vector<std::string>> brows;
  for (std::size_t i = 0; i < basis.size(); ++i)
    brows.push_back({names[i], render_field(basis[i])});
  add_table(d, "basis", {"name", "field"}, brows);
  try {
    StructureConstants sc = structure_constants(basis);
    d["facts"]["closed"] = true;
    for (std::size_t i = 0; i < sc.dim; ++i) {
      std::vector<std::string> row = {names[i]};
      for (std::size_t j = 0; j < sc.dim; ++j) row.push_back(combo(sc.c[i][j], names));
      rows.push_back(std::move(row));
    }
  } catch (const NonClosed& e) {
    d["facts"]["closed"] = false;
    d["facts"]["witness"] = "[" + names[e.i] + ", " + names[e.j] + "] = " + e.rendered;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      std::vector<std::string> row = {names[i]};
      for (std::size_t j = 0; j < basis.size(); ++j)
        row.push_back(render_field(bracket(basis[i], basis[j])));
      rows.push_back(std::move(row));
    }
    d["notes"].push_back("the basis does not close: the bracket " + d["facts"]["witness"].get<std::string>() +
                         " lies outside the span, so entries are printed as raw fields");
  }
  add_table(d, "commutators", columns, rows);
  return d;
}

Doc adjoint_doc(const std::vector<std::string>& names, const StructureConstants& sc) {
  Doc d = make_doc("adjoint");
  d["facts"]["dimension"] = sc.dim;
  d["facts"]["entry"] = "row i, column j: conjugate of the column generator by the row's one-parameter group";
  std::vector<std::string> columns = {"Ad"};
  columns.insert(columns.end(), names.begin(), names.end());
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < sc.dim; ++i) {
    auto M = adjoint_exp(sc, i);
    std::vector<std::string> row = {names[i]};
    for (std::size_t j = 0; j < sc.dim; ++j) {
      std::vector<PolyExp> col(sc.dim);
      for (std::size_t k = 0; k < sc.dim; ++k) col[k] = M[k][j];
      row.push_back(poly_combo(col, names, j));
    }
    rows.push_back(std::move(row));
  }
  add_table(d, "adjoint table", columns, rows);
  return d;
}

Doc detsys_doc(const DeterminingSystem& ds) {
  Doc d = make_doc("detsys");
  d["facts"]["ansatz"] = render_field(ds.ansatz);
  d["facts"]["factor"] = ds.f.str();
  d["facts"]["equations"] = ds.equations.size();
  std::vector<std::vector<std::string>> rows;
  for (const auto& [mono, coeff] : ds.equations) rows.push_back({mono.str(), coeff.str()});
  add_table(d, "determining equations (coefficient = 0 by second-order monomial)",
            {"monomial", "coefficient"}, rows);
  return d;
}

Doc check_doc(const std::string& field_text, const std::string& f_text, const SymmetryCheck& sc) {
  Doc d = make_doc("check");
  d["facts"]["field"] = field_text;
  d["facts"]["f"] = f_text;
  d["facts"]["verdict"] = to_string(sc.verdict);
  d["facts"]["residual"] = sc.residual.str();
  if (!sc.broken.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [mono, coeff] : sc.broken) rows.push_back({mono.str(), coeff.str()});
    add_table(d, "broken coefficients", {"monomial", "coefficient"}, rows);
  }
  for (const auto& c : sc.constraints) d["notes"].push_back("requires " + c);
  return d;
}

Doc optsys_doc(const OptSysAudit& audit, const std::vector<CoeffVector>& items) {
  Doc d = make_doc("optsys");
  d["facts"]["seed"] = std::to_string(audit.seed);
  d["facts"]["samples"] = audit.samples;
  d["facts"]["reflections"] = audit.reflections;
  d["facts"]["matched"] = audit.matched;
  d["facts"]["matched_after_reflection"] = audit.reflection_matches;
  d["facts"]["with_residue"] = audit.with_residue;
  d["facts"]["unmatched"] = audit.unmatched;
  d["facts"]["replay_failures"] = audit.replay_failures;

  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < items.size(); ++k)
    rows.push_back({std::to_string(k + 1), linear_combination(items[k], "Y"),
                    std::to_string(audit.item_hits[k + 1])});
  add_table(d, "representatives", {"item", "operator", "hits"}, rows);

  rows.clear();
  for (const auto& f : audit.invariants) rows.push_back({f});
  add_table(d, "orbit invariants (constant along every adjoint flow)", {"expression"}, rows);

  rows.clear();
  for (const auto& [fam, n] : audit.families) rows.push_back({fam, std::to_string(n)});
  add_table(d, "residue families (coordinates no move can normalize)", {"family", "count"},
            rows);

  rows.clear();
  for (const auto& [fam, n] : audit.unmatched_families) rows.push_back({fam, std::to_string(n)});
  add_table(d, "reduced supports no representative covers", {"family", "count"}, rows);

  rows.clear();
  for (const auto& [a, b] : audit.redundant_pairs)
    rows.push_back({std::to_string(a), std::to_string(b)});
  add_table(d, "representatives equivalent under reflections", {"item", "item"}, rows);

  for (const auto& n : audit.notes) d["notes"].push_back(n);
  return d;
}

Doc classify_doc(const Table3Audit& audit) {
  Doc d = make_doc("classify");
  d["facts"]["rows"] = audit.rows.size();
  d["facts"]["printed_all_pass"] = audit.printed_all_pass;
  d["facts"]["recomputed_all_pass"] = audit.recomputed_all_pass;
  d["facts"]["literal_pass"] = audit.literal_pass;

  std::vector<std::vector<std::string>> rows;
  for (const auto& r : audit.rows)
    rows.push_back({std::to_string(r.id), r.z, r.item ? std::to_string(r.item) : "-",
                    r.item ? (r.item_exact ? "yes" : "no") : "-"});
  add_table(d, "projected operators and their subalgebra items", {"row", "operator", "item", "exact"},
            rows);

  rows.clear();
  for (const auto& r : audit.rows)
    rows.push_back({std::to_string(r.id), pf(r.printed.i1), pf(r.printed.i2), pf(r.printed.sym),
                    pf(r.recomputed.i1), pf(r.recomputed.i2), pf(r.recomputed.sym),
                    pf(r.literal_sym)});
  add_table(d, "verdicts (printed reading, recomputed reading, literal form)",
            {"row", "I1", "I2", "sym", "I1'", "I2'", "sym'", "literal"}, rows);

  rows.clear();
  for (const auto& r : audit.rows) {
    std::string ints;
    for (const auto& s : r.integrals) {
      if (!ints.empty()) ints += "; ";
      ints += s;
    }
    rows.push_back({std::to_string(r.id), ints, r.recomputed_i1, r.recomputed_weight,
                    r.recomputed_x});
  }
  add_table(d, "recomputed invariants and operators",
            {"row", "first integrals", "I1'", "weight'", "X'"}, rows);

  rows.clear();
  for (const auto& r : audit.rows) {
    std::string residuals;
    if (!r.printed.i1_residual.empty()) residuals += "Z(I1) = " + r.printed.i1_residual;
    if (!r.printed.i2_residual.empty()) {
      if (!residuals.empty()) residuals += "; ";
      residuals += "Z(I2) = " + r.printed.i2_residual;
    }
    if (!r.printed.sym_witness.empty()) {
      if (!residuals.empty()) residuals += "; ";
      residuals += "sym: " + r.printed.sym_witness;
    }
    std::string notes;
    for (const auto& n : r.notes) {
      if (!notes.empty()) notes += "; ";
      notes += n;
    }
    if (residuals.empty() && notes.empty()) continue;
    rows.push_back({std::to_string(r.id), residuals, notes});
  }
  add_table(d, "failures and remarks", {"row", "printed-reading residuals", "notes"}, rows);

  for (const auto& n : audit.notes) d["notes"].push_back(n);
  return d;
}

std::string render(const Doc& doc, Format f, bool color) {
  switch (f) {
    case Format::Json:
      return doc.dump(2) + "\n";
    case Format::Csv:
      return render_csv(doc);
    case Format::Md:
      return render_md(doc, color);
  }
  return {};
}

}  // namespace lieclass::report
