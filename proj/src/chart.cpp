#include "lieclass/chart.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

#include "lieclass/expr.hpp"

namespace lieclass {

GenId Chart::add_symbol(SymbolInfo info) {
  if (by_name_.count(info.name)) throw DuplicateSymbol(info.name);
  if (func_by_name_.count(info.name)) throw DuplicateSymbol(info.name);
  GenId id = static_cast<GenId>(gens_.size());
  Generator g;
  g.is_atom = false;
  g.sym = std::move(info);
  by_name_[g.sym.name] = id;
  gens_.push_back(std::move(g));
  return id;
}

GenId Chart::add_independent(const std::string& name) {
  GenId id = add_symbol({name, SymbolKind::Independent, kNoGen, {}, kNoGen});
  independents_.push_back(id);
  return id;
}

GenId Chart::add_dependent(const std::string& name) {
  GenId id = add_symbol({name, SymbolKind::Dependent, kNoGen, {}, kNoGen});
  dependents_.push_back(id);
  return id;
}

GenId Chart::add_classification(const std::string& name) {
  GenId id = add_symbol({name, SymbolKind::Classification, kNoGen, {}, kNoGen});
  classifications_.push_back(id);
  return id;
}

GenId Chart::add_parameter(const std::string& name) {
  GenId id = add_symbol({name, SymbolKind::Parameter, kNoGen, {}, kNoGen});
  parameters_.push_back(id);
  return id;
}

std::uint32_t Chart::add_function(const std::string& name, const std::vector<std::string>& formals) {
  if (by_name_.count(name)) throw DuplicateSymbol(name);
  if (func_by_name_.count(name)) throw DuplicateSymbol(name);
  FunctionDecl d;
  d.name = name;
  d.formals = formals;
  for (const auto& f : formals) {
    auto it = by_name_.find(f);
    d.formal_syms.push_back(it == by_name_.end() ? kNoGen : it->second);
  }
  std::uint32_t id = static_cast<std::uint32_t>(funcs_.size());
  func_by_name_[name] = id;
  funcs_.push_back(std::move(d));
  return id;
}

std::string Chart::jet_name(GenId dep, const std::vector<int>& multi) const {
  std::string s = gens_[dep].sym.name;
  int total = std::accumulate(multi.begin(), multi.end(), 0);
  if (total == 0) return s;
  s += "_";
  for (std::size_t i = 0; i < multi.size(); ++i)
    for (int k = 0; k < multi[i]; ++k) s += gens_[independents_[i]].sym.name;
  return s;
}

void Chart::generate_jets() {
  const std::size_t nv = independents_.size();
  for (GenId dep : dependents_) {
    for (int order = 1; order <= 2; ++order) {
      // Enumerate multi-indices of the given total order, lexicographically
      // biased toward earlier variables: x before y before t, xx before xy.
      std::vector<std::vector<int>> multis;
      std::vector<int> cur(nv, 0);
      // Recursive enumeration without recursion: positions of derivative slots.
      if (order == 1) {
        for (std::size_t i = 0; i < nv; ++i) {
          std::vector<int> m(nv, 0);
          m[i] = 1;
          multis.push_back(m);
        }
      } else {
        for (std::size_t i = 0; i < nv; ++i)
          for (std::size_t j = i; j < nv; ++j) {
            std::vector<int> m(nv, 0);
            m[i] += 1;
            m[j] += 1;
            multis.push_back(m);
          }
      }
      for (const auto& m : multis) {
        std::string nm = jet_name(dep, m);
        if (by_name_.count(nm)) continue;  // idempotent
        SymbolInfo si{nm, SymbolKind::Jet, dep, m, kNoGen};
        add_symbol(std::move(si));
      }
    }
  }
}

GenId Chart::lookup(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? kNoGen : it->second;
}

GenId Chart::require(const std::string& name) const {
  GenId id = lookup(name);
  if (id == kNoGen) throw UnknownSymbol(name);
  return id;
}

bool Chart::has_function(const std::string& name) const { return func_by_name_.count(name) != 0; }

std::uint32_t Chart::function_id(const std::string& name) const {
  auto it = func_by_name_.find(name);
  if (it == func_by_name_.end()) throw UnknownSymbol(name);
  return it->second;
}

GenId Chart::jet(GenId dep, const std::vector<int>& multi) {
  assert(gens_[dep].sym.kind == SymbolKind::Dependent);
  assert(multi.size() == independents_.size());
  int total = std::accumulate(multi.begin(), multi.end(), 0);
  if (total == 0) return dep;
  std::string nm = jet_name(dep, multi);
  if (total > 3) throw OrderOverflow(nm);
  GenId found = lookup(nm);
  if (found != kNoGen) return found;
  return add_symbol({nm, SymbolKind::Jet, dep, multi, kNoGen});
}

GenId Chart::jet_step(GenId base_or_jet, GenId v) {
  const Generator& g = gens_[base_or_jet];
  assert(!g.is_atom);
  std::size_t vi = independents_.size();
  for (std::size_t i = 0; i < independents_.size(); ++i)
    if (independents_[i] == v) vi = i;
  assert(vi < independents_.size());
  if (g.sym.kind == SymbolKind::Dependent) {
    std::vector<int> m(independents_.size(), 0);
    m[vi] = 1;
    return jet(base_or_jet, m);
  }
  assert(g.sym.kind == SymbolKind::Jet);
  std::vector<int> m = g.sym.multi;
  m[vi] += 1;
  return jet(g.sym.base, m);
}

GenId Chart::class_jet(GenId cls, GenId wrt) {
  assert(gens_[cls].sym.kind == SymbolKind::Classification);
  std::string suffix = gens_[wrt].sym.name;
  suffix.erase(std::remove(suffix.begin(), suffix.end(), '_'), suffix.end());
  std::string nm = gens_[cls].sym.name + "_" + suffix;
  GenId found = lookup(nm);
  if (found != kNoGen) {
    assert(gens_[found].sym.kind == SymbolKind::ClassJet);
    return found;
  }
  return add_symbol({nm, SymbolKind::ClassJet, cls, {}, wrt});
}

GenId Chart::intern_atom(std::uint32_t func, std::vector<int> dmulti, std::vector<FractionPtr> args) {
  assert(func < funcs_.size());
  assert(args.size() == funcs_[func].formals.size());
  std::sort(dmulti.begin(), dmulti.end());
  for (GenId id = 0; id < gens_.size(); ++id) {
    const Generator& g = gens_[id];
    if (!g.is_atom || g.atom.func != func || g.atom.dmulti != dmulti) continue;
    bool eq = true;
    for (std::size_t i = 0; i < args.size() && eq; ++i)
      if (compare(*g.atom.args[i], *args[i]) != 0) eq = false;
    if (eq) return id;
  }
  Generator g;
  g.is_atom = true;
  g.atom = AtomInfo{func, std::move(dmulti), std::move(args)};
  GenId id = static_cast<GenId>(gens_.size());
  gens_.push_back(std::move(g));
  return id;
}

bool Chart::is_coordinate(GenId id) const {
  if (gens_[id].is_atom) return false;
  SymbolKind k = gens_[id].sym.kind;
  return k == SymbolKind::Independent || k == SymbolKind::Dependent ||
         k == SymbolKind::Classification;
}

int Chart::jet_order(GenId id) const {
  const Generator& g = gens_[id];
  if (g.is_atom || g.sym.kind != SymbolKind::Jet) return 0;
  return std::accumulate(g.sym.multi.begin(), g.sym.multi.end(), 0);
}

const std::string& Chart::name(GenId id) const {
  static const std::string atom_tag = "<atom>";
  const Generator& g = gens_[id];
  return g.is_atom ? atom_tag : g.sym.name;
}

}  // namespace lieclass
