#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lieclass/determining.hpp"
#include "lieclass/invclass.hpp"
#include "lieclass/liealg.hpp"
#include "lieclass/optsys.hpp"

namespace lieclass::report {

enum class Format { Json, Csv, Md };

// "json" | "csv" | "md"; throws std::invalid_argument otherwise.
Format parse_format(const std::string& s);

// Every command renders through one canonical document:
//   { schema: 1, command, facts: {flat scalars}, tables: [{title, columns,
//     rows: [[strings]]}], notes: [strings] }
// Key order is fixed by construction, values carry no timestamps or paths,
// and exact rationals are rendered as strings, so reruns are byte-identical.
using Doc = nlohmann::ordered_json;

// Commutator table of a basis. Closure is decided inside: when the brackets
// leave the span the table falls back to raw field bodies and the witness
// pair is recorded in the facts.
Doc brackets_doc(const std::vector<std::string>& names, const std::vector<VectorField>& basis);

// Inner-automorphism table: entry (i, j) is the conjugate of the j-th
// generator by the one-parameter group of the i-th.
Doc adjoint_doc(const std::vector<std::string>& names, const StructureConstants& sc);

// The determining system of the full class, split by second-order monomials.
Doc detsys_doc(const DeterminingSystem& ds);

// Verdict for one candidate symmetry of u_t = f*(u_xx + u_yy).
Doc check_doc(const std::string& field_text, const std::string& f_text, const SymmetryCheck& sc);

// Randomized reduction audit of the one-dimensional subalgebra catalog.
Doc optsys_doc(const OptSysAudit& audit, const std::vector<CoeffVector>& items);

// Row-by-row audit of the classification table.
Doc classify_doc(const Table3Audit& audit);

// color only affects the md format: pass/yes in green, fail/no in red.
std::string render(const Doc& doc, Format f, bool color = false);

}  // namespace lieclass::report
