#pragma once

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "aconet/random.hpp"

namespace aconet {

// Ants are numbered 1..t in arrival order.
using AntId = std::int64_t;

// Growth rule of the reference network: each new ant links to in_degree (r)
// prior ants, drawn with probability proportional to Max(r + omega*k_out, 0).
struct GrowthParams {
  int in_degree = 1;      // r
  double asymmetry = 0.0; // omega, >= -1

  void validate() const;
};

// Attachment weight of an ant with the given out-degree.
inline double attachment_weight(const GrowthParams& params, std::int64_t k_out) {
  return std::max(static_cast<double>(params.in_degree) + params.asymmetry * k_out, 0.0);
}

// Sum of attachment weights over all t ants, in closed form:
// r t (1 + omega) - omega r (r+1)/2. Requires t >= r+1.
double total_popularity(const GrowthParams& params, std::int64_t t);

struct ReferenceSet {
  std::vector<AntId> ants;  // distinct, ascending

  int size() const { return static_cast<int>(ants.size()); }
};

// Thrown when fewer than r ants carry positive weight. Cannot occur for
// omega >= -1 when growing from the complete-graph seed; an occurrence
// indicates a corrupted state.
class ExhaustionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fenwick tree over per-ant weights keyed by 1-based ant id. Supports
// O(log t) weighted draw, point update and append.
class WeightIndex {
 public:
  void reserve(std::size_t n);
  std::size_t size() const { return weight_.size(); }
  void push_back(double w);
  void set(AntId id, double w);
  double weight(AntId id) const { return weight_[static_cast<std::size_t>(id - 1)]; }
  double total() const;

  // Smallest id whose cumulative weight exceeds u. Requires 0 <= u < total().
  AntId sample(double u) const;

  // Temporarily zeroes one ant's weight, recording touched cells verbatim so
  // restore() reproduces the prior state bit for bit.
  struct Undo {
    std::vector<std::pair<std::uint32_t, double>> tree_cells;
    std::vector<std::pair<std::uint32_t, double>> weight_cells;
    void clear();
  };
  void zero_with_undo(AntId id, Undo& undo);
  void restore(const Undo& undo);

 private:
  static std::size_t lowbit(std::size_t i) { return i & (~i + 1); }
  double prefix(std::size_t i) const;
  void add(std::size_t id, double delta);

  std::vector<double> weight_;
  std::vector<double> tree_;  // tree_[i] covers ids (i - lowbit(i), i]; slot 0 unused
};

// Growing reference network: per-ant out-degrees plus the weight index used
// for popularity-proportional sampling.
//
// Single-writer: one trial owns one state. select_references() restores the
// weight index before returning but is not safe to call concurrently.
class NetworkState {
 public:
  static NetworkState complete_graph(const GrowthParams& params, std::size_t reserve_ants = 0);

  std::int64_t ant_count() const { return static_cast<std::int64_t>(out_degree_.size()); }
  const GrowthParams& params() const { return params_; }
  std::int64_t out_degree(AntId id) const;
  std::int64_t out_degree_sum() const { return degree_sum_; }
  double weight(AntId id) const;
  double weight_total() const { return weights_.total(); }

  // Draws r distinct ants by sequential weighted sampling without
  // replacement: each draw removes the chosen ant from the pool and
  // renormalizes. Consumes exactly r uniforms. Does not mutate the state.
  ReferenceSet select_references(RandomSource& rng) const;

  // Registers the new ant: out-degrees of the referenced ants increase by 1,
  // the newcomer enters with out-degree 0 and weight r.
  void apply_selection(const ReferenceSet& refs);

  std::map<std::int64_t, std::int64_t> degree_histogram() const;

 private:
  GrowthParams params_;
  std::vector<std::int32_t> out_degree_;
  std::int64_t degree_sum_ = 0;
  mutable WeightIndex weights_;
  mutable WeightIndex::Undo undo_;
};

// Recorded reference sets for ants r+2 .. t_final, in arrival order.
// The first r+1 ants always form the complete graph and are not recorded.
struct SelectionRecord {
  std::vector<ReferenceSet> refs;
};

// Grows one network realization to t_final ants. The growth process is
// autonomous (weights depend only on out-degrees), so it can run standalone.
SelectionRecord grow_network(const GrowthParams& params, std::int64_t t_final, std::uint64_t seed);

// Text dump, one line per ant: "ant_id,selected_ids...". The complete-graph
// seed ants are included with their implied reference lists.
void write_network_dump(std::ostream& os, const GrowthParams& params, const SelectionRecord& record);
SelectionRecord read_network_dump(std::istream& is, const GrowthParams& params);

}  // namespace aconet
