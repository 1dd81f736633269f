#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lieclass/liealg.hpp"

namespace lieclass {

// Coordinates of an algebra element sum_i a[i] * B_i in a fixed basis.
using CoeffVector = std::vector<mpq_class>;

// One step acting on coefficient vectors.
//   Scale:  a -> value * a                  (value != 0; a line is scale-free)
//   Adj:    a -> exp(-s ad B_g) a at s = value; only valid when that matrix
//           is polynomial in s (unipotent generator)
//   AdjRay: a -> exp(-s ad B_g) a at e^s = value (value > 0); only valid when
//           the matrix entries are constants times integer powers of e^s
struct Move {
  enum class Kind { Scale, Adj, AdjRay };
  Kind kind = Kind::Scale;
  std::size_t generator = 0;  // 0-based basis index for Adj / AdjRay
  mpq_class value;
};

// The six one-parameter automorphism matrices of a presentation, with exact
// rational evaluation of the moves above.
class AdjointMoves {
 public:
  explicit AdjointMoves(const StructureConstants& sc);

  std::size_t dim() const { return dim_; }
  const std::vector<std::vector<PolyExp>>& matrix(std::size_t i) const { return mats_[i]; }

  CoeffVector apply(const CoeffVector& a, const Move& m) const;
  CoeffVector replay(const CoeffVector& a, const std::vector<Move>& moves) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::vector<std::vector<PolyExp>>> mats_;
};

// Result of driving a coefficient vector to normal form. Replaying `moves`
// on `input` reproduces `output` exactly. `item` is the 1-based index of the
// catalog representative the output equals, or 0 when none does; in that
// case `candidates` lists the representatives sharing the output's support,
// `residues` the coordinates (0-based) stuck at values no candidate has, and
// `family` a rendering of the parameterized normal form.
struct ReductionTrace {
  CoeffVector input;
  std::vector<Move> moves;
  CoeffVector output;
  int item = 0;
  std::vector<int> candidates;
  std::vector<std::pair<std::size_t, mpq_class>> residues;
  std::string family;
  std::string note;
};

// Mechanized case analysis for the default six-dimensional algebra: scale the
// leading coordinate to a unit, kill what the unipotent flows can reach, and
// normalize rays where a positive joint rescaling is available. Coordinates
// that no available move can change are left as parameter residues rather
// than forced to +-1.
ReductionTrace reduce(const AdjointMoves& mv, const CoeffVector& a,
                      const std::vector<CoeffVector>& items);

// Rendering "B1 + 3*B2 - 1/2*B5" of a coefficient vector over names B1..Bn.
std::string linear_combination(const CoeffVector& a, const std::string& prefix);

// Rational functions of the coordinates a1..an that are constant along every
// generator's adjoint flow and homogeneous of degree zero under scaling. The
// chart owns the symbols the expressions live on.
struct OrbitInvariants {
  std::unique_ptr<Chart> chart;
  GenId s = kNoGen;        // flow parameter
  std::vector<GenId> a;    // coefficient coordinates
  std::vector<Expression> invariants;
};
OrbitInvariants orbit_invariants(const StructureConstants& sc);

// Randomized exercise of `reduce` against the catalog representatives.
struct OptSysAudit {
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  bool reflections = false;

  std::size_t matched = 0;        // output equals a listed representative
  std::size_t with_residue = 0;   // normal form reached, parameters remain
  std::size_t unmatched = 0;      // support matches no listed representative
  std::size_t replay_failures = 0;
  std::size_t reflection_matches = 0;  // matched only after a reflection

  std::vector<std::size_t> item_hits;              // index 1..items
  std::map<std::string, std::size_t> families;     // residue family -> count
  std::map<std::string, std::size_t> unmatched_families;
  std::vector<std::pair<int, int>> redundant_pairs;  // mutually equivalent reps
  std::vector<std::string> invariants;               // rendered orbit invariants
  std::vector<std::string> notes;
};

// Samples random rational vectors (entries with numerator and denominator up
// to 9), reduces each, verifies the trace replays, and classifies the
// outcome. `reflections` is a list of per-coordinate sign vectors to try when
// a sample fails to match directly; pass {} to disable. Deterministic in
// (seed, samples) regardless of thread count.
OptSysAudit audit_optimal_system(const StructureConstants& sc,
                                 const std::vector<CoeffVector>& items,
                                 std::size_t samples, std::uint64_t seed,
                                 const std::vector<std::vector<int>>& reflections);

}  // namespace lieclass
