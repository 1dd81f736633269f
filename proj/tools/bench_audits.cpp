// Times the randomized subalgebra audit single-threaded against the parallel
// build and verifies both produce identical reports, then times the
// classification-table audit for reference.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lieclass/catalogs.hpp"
#include "lieclass/invclass.hpp"
#include "lieclass/liealg.hpp"
#include "lieclass/optsys.hpp"

using namespace lieclass;

namespace {

double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

bool agree(const OptSysAudit& a, const OptSysAudit& b) {
  return a.matched == b.matched && a.with_residue == b.with_residue &&
         a.unmatched == b.unmatched && a.replay_failures == b.replay_failures &&
         a.reflection_matches == b.reflection_matches && a.item_hits == b.item_hits &&
         a.families == b.families && a.unmatched_families == b.unmatched_families;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t samples = 2000;
  if (argc > 1) samples = static_cast<std::size_t>(std::strtoull(argv[1], nullptr, 10));

  auto ch = catalog::make_chart();
  StructureConstants sc = structure_constants(catalog::equivalence_basis(*ch));
  auto items = catalog::optimal_system_items();
  auto refl = catalog::reflection_signs();
  const std::uint64_t seed = 0xC1A551F1ull;

#ifdef _OPENMP
  int max_threads = omp_get_max_threads();
#else
  int max_threads = 1;
#endif

#ifdef _OPENMP
  omp_set_num_threads(1);
#endif
  auto t0 = std::chrono::steady_clock::now();
  OptSysAudit serial = audit_optimal_system(sc, items, samples, seed, refl);
  auto t1 = std::chrono::steady_clock::now();

#ifdef _OPENMP
  omp_set_num_threads(max_threads);
#endif
  auto t2 = std::chrono::steady_clock::now();
  OptSysAudit parallel = audit_optimal_system(sc, items, samples, seed, refl);
  auto t3 = std::chrono::steady_clock::now();

  double ts = seconds(t0, t1), tp = seconds(t2, t3);
  std::printf("subalgebra audit, %zu samples\n", samples);
  std::printf("  1 thread      %8.3f s\n", ts);
  std::printf("  %d thread(s)   %8.3f s  (speedup %.2fx)\n", max_threads,
              tp, tp > 0 ? ts / tp : 0.0);
  std::printf("  reports agree %s\n", agree(serial, parallel) ? "yes" : "NO");

  auto t4 = std::chrono::steady_clock::now();
  Table3Audit table = audit_table3();
  auto t5 = std::chrono::steady_clock::now();
  std::printf("classification audit, %zu rows\n", table.rows.size());
  std::printf("  single pass   %8.3f s\n", seconds(t4, t5));

  return agree(serial, parallel) ? 0 : 1;
}
