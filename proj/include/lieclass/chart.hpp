#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace lieclass {

using GenId = std::uint32_t;
inline constexpr GenId kNoGen = 0xffffffffu;

enum class SymbolKind {
  Independent,
  Dependent,
  Jet,
  Classification,
  ClassJet,
  Parameter,
};

struct Fraction;
using FractionPtr = std::shared_ptr<const Fraction>;

// Declared unknown function (f, Phi, a, beta, ...). Formal names are resolved
// against chart symbols where possible; unresolved formals (Phi's "l") only
// name derivative slots.
struct FunctionDecl {
  std::string name;
  std::vector<std::string> formals;
  std::vector<GenId> formal_syms;
};

struct SymbolInfo {
  std::string name;
  SymbolKind kind = SymbolKind::Parameter;
  GenId base = kNoGen;        // Jet: the dependent symbol; ClassJet: the classification symbol
  std::vector<int> multi;     // Jet: derivative count per independent variable (chart order)
  GenId class_wrt = kNoGen;   // ClassJet: variable the derivative is taken in
};

// Interned unknown-function occurrence: declaration + sorted derivative slots
// + actual arguments. Atoms are generators of the rational normal form, on a
// par with symbols.
struct AtomInfo {
  std::uint32_t func = 0;
  std::vector<int> dmulti;
  std::vector<FractionPtr> args;
};

struct Generator {
  bool is_atom = false;
  SymbolInfo sym;
  AtomInfo atom;
};

struct DuplicateSymbol : std::runtime_error {
  explicit DuplicateSymbol(const std::string& n) : std::runtime_error("duplicate symbol: " + n) {}
};
struct UnknownSymbol : std::runtime_error {
  explicit UnknownSymbol(const std::string& n) : std::runtime_error("unknown symbol: " + n) {}
};
struct OrderOverflow : std::runtime_error {
  explicit OrderOverflow(const std::string& n)
      : std::runtime_error("jet order above 3 requested: " + n) {}
};

// Symbol table + generator registry for one coordinate chart. Generator ids
// are assigned in creation order and are stable; expressions refer into the
// chart by id, so a chart must outlive every expression built on it. Not
// copyable. Interning mutates the chart, so share a chart across threads only
// read-only.
class Chart {
 public:
  Chart() = default;
  Chart(const Chart&) = delete;
  Chart& operator=(const Chart&) = delete;

  GenId add_independent(const std::string& name);
  GenId add_dependent(const std::string& name);
  GenId add_classification(const std::string& name);
  GenId add_parameter(const std::string& name);
  std::uint32_t add_function(const std::string& name, const std::vector<std::string>& formals);

  // Auto-generates first and second order jet symbols (u_x .. u_tt) for every
  // dependent symbol over the independent variables, in the fixed order
  // x-block first. Idempotent; redeclaring a jet name beforehand is an error.
  void generate_jets();

  GenId lookup(const std::string& name) const;
  GenId require(const std::string& name) const;
  const Generator& gen(GenId id) const { return gens_[id]; }
  std::size_t size() const { return gens_.size(); }

  bool has_function(const std::string& name) const;
  std::uint32_t function_id(const std::string& name) const;
  const FunctionDecl& function(std::uint32_t id) const { return funcs_[id]; }
  std::size_t function_count() const { return funcs_.size(); }

  // Jet symbol of dependent `dep` with the given derivative multi-index;
  // order up to 2 must already exist (generate_jets), order 3 is minted on
  // demand, order 4 throws OrderOverflow.
  GenId jet(GenId dep, const std::vector<int>& multi);
  // One more derivative in direction `v` on top of `base_or_jet`.
  GenId jet_step(GenId base_or_jet, GenId v);

  // Derivative symbol of a classification coordinate (f_x, f_u, f_ux, ...).
  GenId class_jet(GenId cls, GenId wrt);

  GenId intern_atom(std::uint32_t func, std::vector<int> dmulti, std::vector<FractionPtr> args);

  const std::vector<GenId>& independents() const { return independents_; }
  const std::vector<GenId>& dependents() const { return dependents_; }
  const std::vector<GenId>& classifications() const { return classifications_; }
  const std::vector<GenId>& parameters() const { return parameters_; }

  bool is_symbol(GenId id) const { return !gens_[id].is_atom; }
  bool is_coordinate(GenId id) const;
  int jet_order(GenId id) const;
  const std::string& name(GenId id) const;

 private:
  GenId add_symbol(SymbolInfo info);
  std::string jet_name(GenId dep, const std::vector<int>& multi) const;

  std::vector<Generator> gens_;
  std::map<std::string, GenId> by_name_;
  std::vector<FunctionDecl> funcs_;
  std::map<std::string, std::uint32_t> func_by_name_;
  std::vector<GenId> independents_, dependents_, classifications_, parameters_;
};

// Total order on canonical fractions; lives in expr.cpp.
int compare(const Fraction& a, const Fraction& b);

}  // namespace lieclass
