#include "aconet/refnet.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace aconet {

void GrowthParams::validate() const {
  if (in_degree < 1) throw std::invalid_argument("in_degree must be at least 1");
  if (!std::isfinite(asymmetry) || asymmetry < -1.0)
    throw std::invalid_argument("asymmetry must be finite and >= -1");
}

double total_popularity(const GrowthParams& params, std::int64_t t) {
  params.validate();
  const double r = params.in_degree;
  if (t < params.in_degree + 1)
    throw std::domain_error("total_popularity requires t >= in_degree + 1");
  return r * t * (1.0 + params.asymmetry) - params.asymmetry * r * (r + 1.0) / 2.0;
}

void WeightIndex::Undo::clear() {
  tree_cells.clear();
  weight_cells.clear();
}

void WeightIndex::reserve(std::size_t n) {
  weight_.reserve(n);
  tree_.reserve(n + 1);
}

void WeightIndex::push_back(double w) {
  if (tree_.empty()) tree_.push_back(0.0);
  weight_.push_back(w);
  const std::size_t i = weight_.size();
  // New node covers (i - lowbit(i), i]; fold in the sibling ranges below it.
  double sum = w;
  const std::size_t low = i - lowbit(i);
  for (std::size_t j = i - 1; j > low; j -= lowbit(j)) sum += tree_[j];
  tree_.push_back(sum);
}

void WeightIndex::add(std::size_t id, double delta) {
  for (std::size_t j = id; j < tree_.size(); j += lowbit(j)) tree_[j] += delta;
}

void WeightIndex::set(AntId id, double w) {
  const std::size_t i = static_cast<std::size_t>(id);
  add(i, w - weight_[i - 1]);
  weight_[i - 1] = w;
}

double WeightIndex::prefix(std::size_t i) const {
  double sum = 0.0;
  for (std::size_t j = i; j > 0; j -= lowbit(j)) sum += tree_[j];
  return sum;
}

double WeightIndex::total() const { return prefix(weight_.size()); }

AntId WeightIndex::sample(double u) const {
  const std::size_t n = weight_.size();
  std::size_t pos = 0;
  double rem = u;
  for (std::size_t mask = std::bit_floor(n); mask > 0; mask >>= 1) {
    const std::size_t next = pos + mask;
    if (next <= n && tree_[next] <= rem) {
      rem -= tree_[next];
      pos = next;
    }
  }
  // pos is the largest index with cumulative weight <= u.
  std::size_t idx = pos + 1;
  if (idx > n) idx = n;  // u at or past the total (rounding edge)
  // A rounding edge can land on a zero-weight ant; step to the next positive.
  while (idx <= n && !(weight_[idx - 1] > 0.0)) ++idx;
  if (idx > n) {
    for (idx = n; idx >= 1 && !(weight_[idx - 1] > 0.0); --idx) {
    }
    if (idx < 1) throw ExhaustionError("no ant with positive weight");
  }
  return static_cast<AntId>(idx);
}

void WeightIndex::zero_with_undo(AntId id, Undo& undo) {
  const std::size_t i = static_cast<std::size_t>(id);
  const double w = weight_[i - 1];
  undo.weight_cells.emplace_back(static_cast<std::uint32_t>(i - 1), w);
  for (std::size_t j = i; j < tree_.size(); j += lowbit(j)) {
    undo.tree_cells.emplace_back(static_cast<std::uint32_t>(j), tree_[j]);
    tree_[j] -= w;
  }
  weight_[i - 1] = 0.0;
}

void WeightIndex::restore(const Undo& undo) {
  // Reverse replay restores first-saved values last, so repeated touches of
  // the same cell unwind correctly.
  for (auto it = undo.tree_cells.rbegin(); it != undo.tree_cells.rend(); ++it)
    tree_[it->first] = it->second;
  for (auto it = undo.weight_cells.rbegin(); it != undo.weight_cells.rend(); ++it)
    weight_[it->first] = it->second;
}

NetworkState NetworkState::complete_graph(const GrowthParams& params, std::size_t reserve_ants) {
  params.validate();
  NetworkState state;
  state.params_ = params;
  const int r = params.in_degree;
  if (reserve_ants > 0) {
    state.out_degree_.reserve(reserve_ants);
    state.weights_.reserve(reserve_ants);
  }
  // Seed ants 1..r+1 reference every predecessor: k_out(i) = r + 1 - i.
  for (int i = 1; i <= r + 1; ++i) {
    const std::int32_t k = r + 1 - i;
    state.out_degree_.push_back(k);
    state.degree_sum_ += k;
    state.weights_.push_back(attachment_weight(params, k));
  }
  return state;
}

std::int64_t NetworkState::out_degree(AntId id) const {
  if (id < 1 || id > ant_count()) throw std::out_of_range("ant id out of range");
  return out_degree_[static_cast<std::size_t>(id - 1)];
}

double NetworkState::weight(AntId id) const {
  if (id < 1 || id > ant_count()) throw std::out_of_range("ant id out of range");
  return weights_.weight(id);
}

ReferenceSet NetworkState::select_references(RandomSource& rng) const {
  const int r = params_.in_degree;
  ReferenceSet refs;
  refs.ants.reserve(static_cast<std::size_t>(r));
  undo_.clear();
  for (int draw = 0; draw < r; ++draw) {
    const double total = weights_.total();
    if (!(total > 0.0)) {
      weights_.restore(undo_);
      throw ExhaustionError("fewer than in_degree ants with positive weight");
    }
    const double u = rng.uniform() * total;
    AntId id;
    try {
      id = weights_.sample(u);
    } catch (const ExhaustionError&) {
      weights_.restore(undo_);
      throw;
    }
    refs.ants.push_back(id);
    weights_.zero_with_undo(id, undo_);
  }
  weights_.restore(undo_);
  std::sort(refs.ants.begin(), refs.ants.end());
  return refs;
}

void NetworkState::apply_selection(const ReferenceSet& refs) {
  const int r = params_.in_degree;
  if (refs.size() != r) throw std::invalid_argument("reference set must contain exactly in_degree ants");
  AntId prev = 0;
  for (AntId id : refs.ants) {
    if (id <= prev || id > ant_count())
      throw std::invalid_argument("reference set must list distinct ascending ids within the network");
    prev = id;
  }
  for (AntId id : refs.ants) {
    const std::size_t i = static_cast<std::size_t>(id - 1);
    out_degree_[i] += 1;
    weights_.set(id, attachment_weight(params_, out_degree_[i]));
  }
  degree_sum_ += r;
  out_degree_.push_back(0);
  weights_.push_back(attachment_weight(params_, 0));
}

std::map<std::int64_t, std::int64_t> NetworkState::degree_histogram() const {
  std::map<std::int64_t, std::int64_t> counts;
  for (std::int32_t k : out_degree_) counts[k] += 1;
  return counts;
}

SelectionRecord grow_network(const GrowthParams& params, std::int64_t t_final, std::uint64_t seed) {
  params.validate();
  if (t_final < params.in_degree + 1)
    throw std::invalid_argument("t_final must be at least in_degree + 1");
  NetworkState state = NetworkState::complete_graph(params, static_cast<std::size_t>(t_final));
  RandomStream rng(seed);
  SelectionRecord record;
  record.refs.reserve(static_cast<std::size_t>(t_final - state.ant_count()));
  while (state.ant_count() < t_final) {
    ReferenceSet refs = state.select_references(rng);
    state.apply_selection(refs);
    record.refs.push_back(std::move(refs));
  }
  return record;
}

void write_network_dump(std::ostream& os, const GrowthParams& params, const SelectionRecord& record) {
  const int r = params.in_degree;
  for (int i = 1; i <= r + 1; ++i) {
    os << i;
    for (int j = 1; j < i; ++j) os << ',' << j;
    os << '\n';
  }
  AntId id = r + 2;
  for (const ReferenceSet& refs : record.refs) {
    os << id;
    for (AntId ref : refs.ants) os << ',' << ref;
    os << '\n';
    ++id;
  }
}

SelectionRecord read_network_dump(std::istream& is, const GrowthParams& params) {
  params.validate();
  const int r = params.in_degree;
  SelectionRecord record;
  std::string line;
  AntId expected_id = 1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string field;
    std::vector<AntId> ids;
    while (std::getline(fields, field, ',')) ids.push_back(std::stoll(field));
    if (ids.empty() || ids.front() != expected_id)
      throw std::invalid_argument("network dump: ants must appear in order starting at 1");
    ReferenceSet refs;
    refs.ants.assign(ids.begin() + 1, ids.end());
    std::sort(refs.ants.begin(), refs.ants.end());
    if (expected_id <= r + 1) {
      // Seed ants: reference list must be exactly all predecessors.
      if (refs.size() != static_cast<int>(expected_id - 1))
        throw std::invalid_argument("network dump: seed ant with unexpected reference count");
      for (std::size_t j = 0; j < refs.ants.size(); ++j)
        if (refs.ants[j] != static_cast<AntId>(j + 1))
          throw std::invalid_argument("network dump: seed ant references are not the complete graph");
    } else {
      if (refs.size() != r)
        throw std::invalid_argument("network dump: ant must reference exactly in_degree ants");
      AntId prev = 0;
      for (AntId ref : refs.ants) {
        if (ref <= prev || ref >= expected_id)
          throw std::invalid_argument("network dump: references must be distinct earlier ants");
        prev = ref;
      }
      record.refs.push_back(std::move(refs));
    }
    ++expected_id;
  }
  if (expected_id < r + 2) throw std::invalid_argument("network dump: missing complete-graph seed ants");
  return record;
}

}  // namespace aconet
