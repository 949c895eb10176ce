#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "word.hpp"

namespace relpres {

struct OracleCaps {
  bool exact = false;         // every query answered definitively
  bool ball_bounded = false;  // answers may degrade to Unknown outside a radius
};

// A named generating set for geodesic queries. Stored symmetrized:
// the declared words first (in declaration order), then their formal
// inverses in the same order. Witness shortlex order follows this list.
struct GenSet {
  std::string name;
  std::vector<SubWord> gens;  // already symmetrized
  static GenSet symmetrized(std::string name, const std::vector<SubWord>& positives);
};

struct GeodesicResult {
  // True: found; length and witness valid. False: target provably not in
  // the span of the generating set. Unknown: search budget exhausted.
  TriState status = TriState::Unknown;
  long long length = -1;
  std::vector<int> witness;  // indices into GenSet.gens, shortlex-minimal
};

struct GeodesicBudget {
  long long max_radius = 16;
  long long max_states = 200000;
};

// One subgroup of the relative presentation, presented behind a uniform
// query surface. Elements are exchanged as canonical SubWords over the
// oracle's declared generators; each backend fixes its own canonical form.
class SubgroupOracle {
public:
  SubgroupOracle(std::string id, std::vector<std::string> gens);
  virtual ~SubgroupOracle() = default;

  const std::string& id() const { return id_; }
  const std::vector<std::string>& gens() const { return gens_; }
  int gen_index(const std::string& name) const;  // -1 when absent

  virtual OracleCaps caps() const = 0;
  virtual std::string backend_name() const = 0;

  // Fresh oracle over the same group under a new id (namespace renaming).
  virtual std::shared_ptr<SubgroupOracle> clone_with_id(std::string new_id) const = 0;

  // Canonical form of the element w represents; nullopt when the element
  // falls outside the backend's decidable regime.
  virtual std::optional<SubWord> canonical(const SubWord& w) const = 0;

  virtual TriState is_identity(const SubWord& w) const;
  TriState equal(const SubWord& a, const SubWord& b) const;

  // canonical(a·b); nullopt propagates.
  std::optional<SubWord> multiply(const SubWord& a, const SubWord& b) const;

  // All distinct elements within the given radius over the declared
  // symmetrized generators, identity included, deterministic order
  // (radius layer, then shortlex discovery order).
  virtual std::vector<SubWord> ball(long long radius) const;

  // True when `ball(radius)` provably exhausts the whole subgroup.
  virtual bool ball_is_whole_group(long long radius) const;

  // Shortest product of gens equal to g, BFS with shortlex tie-break.
  GeodesicResult geodesic(const SubWord& g, const GenSet& gens,
                          const GeodesicBudget& budget = {}) const;
  GeodesicResult geodesic(const SubWord& g, const GeodesicBudget& budget = {}) const;

  GenSet declared_gen_set() const;
  const std::map<std::string, GenSet>& extra_gen_sets() const { return extra_sets_; }
  void register_gen_set(const std::string& name, const std::vector<SubWord>& positives);
  const std::optional<std::vector<SubWord>>& omega() const { return omega_; }
  void set_omega(std::vector<SubWord> omega) { omega_ = std::move(omega); }

  // Free reduction only (merge adjacent same-generator syllables). Sound
  // for every backend as a preprocessing step.
  static SubWord free_reduce(const SubWord& w);
  static std::string subword_repr(const SubWord& w);

protected:
  std::string id_;
  std::vector<std::string> gens_;
  std::map<std::string, GenSet> extra_sets_;
  std::optional<std::vector<SubWord>> omega_;
};

class FreeOracle final : public SubgroupOracle {
public:
  using SubgroupOracle::SubgroupOracle;
  OracleCaps caps() const override { return {true, false}; }
  std::string backend_name() const override { return "free"; }
  std::shared_ptr<SubgroupOracle> clone_with_id(std::string new_id) const override;
  std::optional<SubWord> canonical(const SubWord& w) const override;
  bool ball_is_whole_group(long long) const override { return gens_.empty(); }
};

class FreeAbelianOracle final : public SubgroupOracle {
public:
  using SubgroupOracle::SubgroupOracle;
  OracleCaps caps() const override { return {true, false}; }
  std::string backend_name() const override { return "free_abelian"; }
  std::shared_ptr<SubgroupOracle> clone_with_id(std::string new_id) const override;
  std::optional<SubWord> canonical(const SubWord& w) const override;
  bool ball_is_whole_group(long long) const override { return gens_.empty(); }
};

// Finite group given by a full multiplication table. Generators are a
// subset of the elements. Everything is exact; canonical forms are
// shortlex geodesics over the declared symmetrized generators.
class FiniteTableOracle final : public SubgroupOracle {
public:
  FiniteTableOracle(std::string id, std::vector<std::string> element_names,
                    std::vector<std::vector<int>> table,
                    std::vector<std::string> gen_names);
  OracleCaps caps() const override { return {true, false}; }
  std::string backend_name() const override { return "finite_table"; }
  std::shared_ptr<SubgroupOracle> clone_with_id(std::string new_id) const override;
  std::optional<SubWord> canonical(const SubWord& w) const override;
  std::vector<SubWord> ball(long long radius) const override;
  bool ball_is_whole_group(long long radius) const override;

  int order() const { return static_cast<int>(elements_.size()); }
  const std::vector<std::string>& element_names() const { return elements_; }
  int eval(const SubWord& w) const;  // element index
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inverse_[a]; }
  int identity() const { return identity_; }

private:
  void build_geodesics() const;
  std::vector<std::string> elements_;
  std::vector<std::vector<int>> table_;
  std::vector<int> gen_elements_;  // element index per declared generator
  std::vector<int> inverse_;
  int identity_ = -1;
  mutable std::once_flag geo_once_;
  mutable std::vector<SubWord> geodesic_word_;  // per element
  mutable std::vector<int> geodesic_len_;
};

// Finitely presented group explored by bounded breadth-first rewriting.
// Honest three-valued answers: identity is certified by reaching the
// empty word through bounded intermediate lengths; non-identity is
// certified only by an exact integer abelianization test; everything
// else is Unknown.
class FpBfsOracle final : public SubgroupOracle {
public:
  FpBfsOracle(std::string id, std::vector<std::string> gens,
              std::vector<SubWord> relators, long long ball_radius);
  OracleCaps caps() const override { return {false, true}; }
  std::string backend_name() const override { return "fp_bfs"; }
  std::shared_ptr<SubgroupOracle> clone_with_id(std::string new_id) const override;
  std::optional<SubWord> canonical(const SubWord& w) const override;
  TriState is_identity(const SubWord& w) const override;
  long long ball_radius() const { return radius_; }
  const std::vector<SubWord>& relators() const { return relators_; }

private:
  TriState abelian_nonidentity(const SubWord& w) const;  // False-certificate
  std::vector<SubWord> relators_;      // freely reduced, nonempty
  std::vector<SubWord> relator_shifts_;  // all cyclic shifts of r^{±1}, exploded
  long long radius_;
  long long max_relator_len_ = 0;
  // integer row-echelon basis of the abelianized relator lattice
  std::vector<std::vector<long long>> ab_lattice_;
  mutable std::mutex memo_mu_;
  mutable std::map<std::string, SubWord> canon_memo_;
  mutable std::map<std::string, TriState> ident_memo_;
};

using OraclePtr = std::shared_ptr<const SubgroupOracle>;

}  // namespace relpres
