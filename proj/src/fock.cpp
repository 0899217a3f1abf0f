#include "chi2/fock.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace chi2 {

ModeSet::ModeSet(std::vector<ModeSpec> modes) : modes_(std::move(modes)) {
  std::set<std::string> seen;
  for (const auto& m : modes_) {
    if (m.max_occupation < 0)
      throw std::invalid_argument("mode '" + m.id + "' has negative truncation");
    if (!seen.insert(m.id).second)
      throw std::invalid_argument("duplicate mode id '" + m.id + "'");
  }
}

int ModeSet::index_of(const std::string& id) const {
  for (size_t k = 0; k < modes_.size(); ++k)
    if (modes_[k].id == id) return static_cast<int>(k);
  return -1;
}

bool ModeSet::same_as(const ModeSet& other) const {
  if (modes_.size() != other.modes_.size()) return false;
  for (size_t k = 0; k < modes_.size(); ++k)
    if (modes_[k].id != other.modes_[k].id ||
        modes_[k].max_occupation != other.modes_[k].max_occupation)
      return false;
  return true;
}

std::string FockState::str() const {
  std::ostringstream out;
  out << '(';
  for (size_t k = 0; k < occ.size(); ++k) {
    if (k) out << ',';
    out << occ[k];
  }
  out << ')';
  return out.str();
}

SubspaceBasis::SubspaceBasis(ModeSet modes, std::vector<FockState> states)
    : modes_(std::move(modes)), states_(std::move(states)) {
  index_.reserve(states_.size());
  for (size_t k = 0; k < states_.size(); ++k) {
    const FockState& s = states_[k];
    if (static_cast<int>(s.occ.size()) != modes_.size())
      throw std::invalid_argument("state " + s.str() + " has wrong mode count");
    for (int m = 0; m < modes_.size(); ++m) {
      if (s.occ[static_cast<size_t>(m)] < 0 ||
          s.occ[static_cast<size_t>(m)] > modes_.mode(m).max_occupation)
        throw std::invalid_argument("state " + s.str() +
                                    " violates truncation of mode '" +
                                    modes_.mode(m).id + "'");
    }
    index_.emplace_back(s, static_cast<int>(k));
  }
  std::sort(index_.begin(), index_.end());
  for (size_t k = 0; k + 1 < index_.size(); ++k)
    if (index_[k].first == index_[k + 1].first)
      throw std::invalid_argument("duplicate basis state " +
                                  index_[k].first.str());
}

std::optional<int> SubspaceBasis::find(const FockState& s) const {
  auto it = std::lower_bound(
      index_.begin(), index_.end(), s,
      [](const std::pair<FockState, int>& a, const FockState& b) {
        return a.first < b;
      });
  if (it != index_.end() && it->first == s) return it->second;
  return std::nullopt;
}

BasisPtr make_basis(ModeSet modes, std::vector<FockState> states) {
  return std::make_shared<const SubspaceBasis>(std::move(modes),
                                               std::move(states));
}

BasisPtr enumerate_pump_subspace(int n) {
  if (n < 0) throw std::invalid_argument("pump-photon count must be >= 0");
  ModeSet modes({{"s", n}, {"i", n}, {"p", n}});
  std::vector<FockState> states;
  states.reserve(static_cast<size_t>(n) + 1);
  for (int k = 0; k <= n; ++k)  // ascending pump count
    states.push_back(FockState{{n - k, n - k, k}});
  return make_basis(std::move(modes), std::move(states));
}

BasisPtr h2_logical_basis() {
  // Canonical order for n=2 is [|2,2,0>, |1,1,1>, |0,0,2>]; logical qutrit
  // order swaps the first two states.
  return reorder_basis(enumerate_pump_subspace(2), {1, 0, 2});
}

BasisPtr reorder_basis(const BasisPtr& basis, const std::vector<int>& perm) {
  assert(basis);
  if (static_cast<int>(perm.size()) != basis->dim())
    throw std::invalid_argument("permutation length mismatch");
  std::vector<FockState> states;
  states.reserve(perm.size());
  for (int k : perm) {
    if (k < 0 || k >= basis->dim())
      throw std::invalid_argument("permutation index out of range");
    states.push_back(basis->state(k));
  }
  return make_basis(basis->modes(), std::move(states));
}

BasisPtr tensor_basis(const BasisPtr& a, const BasisPtr& b) {
  assert(a && b);
  for (const auto& m : b->modes().modes())
    if (a->modes().contains(m.id))
      throw std::invalid_argument("tensor_basis: overlapping mode id '" +
                                  m.id + "'");
  std::vector<ModeSpec> modes = a->modes().modes();
  modes.insert(modes.end(), b->modes().modes().begin(),
               b->modes().modes().end());
  std::vector<FockState> states;
  states.reserve(static_cast<size_t>(a->dim()) * static_cast<size_t>(b->dim()));
  for (int j = 0; j < a->dim(); ++j) {
    for (int k = 0; k < b->dim(); ++k) {
      FockState s = a->state(j);
      const FockState& t = b->state(k);
      s.occ.insert(s.occ.end(), t.occ.begin(), t.occ.end());
      states.push_back(std::move(s));
    }
  }
  return make_basis(ModeSet(std::move(modes)), std::move(states));
}

BasisPtr product_basis(const ModeSet& modes) {
  std::vector<FockState> states;
  FockState cur;
  cur.occ.assign(static_cast<size_t>(modes.size()), 0);
  // Row-major enumeration, first mode slowest.
  while (true) {
    states.push_back(cur);
    int k = modes.size() - 1;
    while (k >= 0) {
      size_t uk = static_cast<size_t>(k);
      if (cur.occ[uk] < modes.mode(k).max_occupation) {
        ++cur.occ[uk];
        break;
      }
      cur.occ[uk] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return make_basis(modes, std::move(states));
}

std::optional<int> index_of(const SubspaceBasis& basis,
                            const FockState& state) {
  if (static_cast<int>(state.occ.size()) != basis.modes().size())
    throw std::invalid_argument("index_of: state has wrong mode count");
  return basis.find(state);
}

std::string basis_to_json(const SubspaceBasis& basis) {
  nlohmann::ordered_json j;
  j["modes"] = nlohmann::ordered_json::array();
  for (const auto& m : basis.modes().modes())
    j["modes"].push_back({{"id", m.id}, {"max_occupation", m.max_occupation}});
  j["states"] = nlohmann::ordered_json::array();
  for (const auto& s : basis.states()) j["states"].push_back(s.occ);
  return j.dump(2);
}

}  // namespace chi2
