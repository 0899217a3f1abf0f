#pragma once
// Multi-mode bosonic Fock bases: occupation-number states, ordered subspace
// bases, and tensor products.  Everything here is an immutable value type;
// bases are shared through shared_ptr<const SubspaceBasis> so operators and
// gates can reference them cheaply.

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace chi2 {

// A single bosonic mode: symbolic label plus an explicit occupation cutoff.
struct ModeSpec {
  std::string id;
  int max_occupation = 0;
};

// Ordered, duplicate-free collection of modes.  The order fixes the layout of
// every FockState occupation vector built over this set.
class ModeSet {
 public:
  ModeSet() = default;
  explicit ModeSet(std::vector<ModeSpec> modes);

  int size() const { return static_cast<int>(modes_.size()); }
  const ModeSpec& mode(int k) const { return modes_[static_cast<size_t>(k)]; }
  const std::vector<ModeSpec>& modes() const { return modes_; }

  // Position of a mode id, or -1 when absent.
  int index_of(const std::string& id) const;
  bool contains(const std::string& id) const { return index_of(id) >= 0; }
  bool same_as(const ModeSet& other) const;

 private:
  std::vector<ModeSpec> modes_;
};

// Occupation-number state over a fixed ModeSet order.  Value type with a
// total (lexicographic) order so that maps over states are deterministic.
struct FockState {
  std::vector<int> occ;

  bool operator==(const FockState&) const = default;
  bool operator<(const FockState& other) const { return occ < other.occ; }

  std::string str() const;  // e.g. "(1,1,0)"
};

// Ordered basis of Fock states over one ModeSet, with O(log n) state lookup.
class SubspaceBasis {
 public:
  SubspaceBasis(ModeSet modes, std::vector<FockState> states);

  const ModeSet& modes() const { return modes_; }
  int dim() const { return static_cast<int>(states_.size()); }
  const FockState& state(int k) const { return states_[static_cast<size_t>(k)]; }
  const std::vector<FockState>& states() const { return states_; }
  std::optional<int> find(const FockState& s) const;

 private:
  ModeSet modes_;
  std::vector<FockState> states_;
  std::vector<std::pair<FockState, int>> index_;  // sorted for binary search
};

using BasisPtr = std::shared_ptr<const SubspaceBasis>;

BasisPtr make_basis(ModeSet modes, std::vector<FockState> states);

// The (n+1)-dimensional subspace spanned by {|j,j,n-j>} over modes (s,i,p),
// ordered canonically by ascending pump count: [|n,n,0>, |n-1,n-1,1>, ...,
// |0,0,n>].  These spaces are invariant under the wave-mixing generators.
BasisPtr enumerate_pump_subspace(int n);

// The two-pump-photon space in logical qutrit order (|1,1,1>, |2,2,0>,
// |0,0,2>), i.e. the order in which the nine qutrit operators are tabulated.
BasisPtr h2_logical_basis();

// Reorder an existing basis by a permutation (new index k holds old
// state perm[k]).
BasisPtr reorder_basis(const BasisPtr& basis, const std::vector<int>& perm);

// Product basis in row-major order (a outer, b inner).  Mode sets must be
// disjoint; overlapping ids are rejected.
BasisPtr tensor_basis(const BasisPtr& a, const BasisPtr& b);

// All occupation vectors within the per-mode truncations, row-major with the
// first mode slowest.  Dimension = prod(max_occupation + 1).
BasisPtr product_basis(const ModeSet& modes);

// Position of a state in a basis, or empty when absent.  The state must have
// the same mode layout as the basis.
std::optional<int> index_of(const SubspaceBasis& basis, const FockState& state);

// JSON serialization: mode-id header plus the list of occupation vectors.
std::string basis_to_json(const SubspaceBasis& basis);

}  // namespace chi2
