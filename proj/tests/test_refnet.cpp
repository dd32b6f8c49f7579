#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "aconet/refnet.hpp"
#include "support/tape.hpp"

using namespace aconet;
using aconet::testing::TapeSource;

namespace {

NetworkState grown_state(const GrowthParams& params, std::int64_t t_final, std::uint64_t seed) {
  NetworkState state = NetworkState::complete_graph(params, static_cast<std::size_t>(t_final));
  RandomStream rng(seed);
  while (state.ant_count() < t_final) state.apply_selection(state.select_references(rng));
  return state;
}

}  // namespace

TEST_CASE("complete-graph seed out-degrees") {
  const NetworkState state3 = NetworkState::complete_graph(GrowthParams{3, 1.0});
  REQUIRE(state3.ant_count() == 4);
  CHECK(state3.out_degree(1) == 3);
  CHECK(state3.out_degree(2) == 2);
  CHECK(state3.out_degree(3) == 1);
  CHECK(state3.out_degree(4) == 0);
  CHECK(state3.out_degree_sum() == 6);

  const NetworkState state1 = NetworkState::complete_graph(GrowthParams{1, 0.0});
  REQUIRE(state1.ant_count() == 2);
  CHECK(state1.out_degree(1) == 1);
  CHECK(state1.out_degree(2) == 0);
}

TEST_CASE("total popularity closed form") {
  CHECK(total_popularity(GrowthParams{3, 1.0}, 5) == doctest::Approx(24.0).epsilon(1e-12));
  CHECK(total_popularity(GrowthParams{3, 0.0}, 5) == doctest::Approx(15.0).epsilon(1e-12));
  for (std::int64_t t : {4, 10, 1000})
    CHECK(total_popularity(GrowthParams{3, -1.0}, t) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK_THROWS_AS(total_popularity(GrowthParams{3, 0.0}, 3), std::domain_error);
}

TEST_CASE("attachment weight clamps at zero") {
  const GrowthParams params{3, -0.5};
  CHECK(attachment_weight(params, 5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(attachment_weight(params, 6) == 0.0);
  CHECK(attachment_weight(params, 100) == 0.0);
}

TEST_CASE("lattice limit always selects the previous r ants") {
  const GrowthParams params{3, -1.0};
  NetworkState state = NetworkState::complete_graph(params);
  RandomStream rng(123);
  state.apply_selection(state.select_references(rng));  // grow to t = 5
  REQUIRE(state.ant_count() == 5);
  const ReferenceSet refs = state.select_references(rng);
  CHECK(refs.ants == std::vector<AntId>{3, 4, 5});
}

TEST_CASE("complete-graph weights under the scale-free rule") {
  const GrowthParams params{3, 1.0};
  const NetworkState state = NetworkState::complete_graph(params);
  CHECK(state.weight(1) == 6.0);
  CHECK(state.weight(2) == 5.0);
  CHECK(state.weight(3) == 4.0);
  CHECK(state.weight(4) == 3.0);
  CHECK(state.weight_total() == 18.0);

  // First draw picks ant 1 exactly when u*18 lands below cumulative weight 6.
  TapeSource below({1.0 / 3.0 - 1e-9, 0.9999, 0.9999});
  CHECK(state.select_references(below).ants == std::vector<AntId>{1, 3, 4});
  TapeSource above({1.0 / 3.0 + 1e-9, 0.9999, 0.9999});
  CHECK(state.select_references(above).ants == std::vector<AntId>{2, 3, 4});
}

TEST_CASE("apply_selection increments the chosen ants") {
  const GrowthParams params{3, 1.0};
  NetworkState state = NetworkState::complete_graph(params);
  ReferenceSet refs;
  refs.ants = {2, 3, 4};
  state.apply_selection(refs);
  REQUIRE(state.ant_count() == 5);
  CHECK(state.out_degree(1) == 3);
  CHECK(state.out_degree(2) == 3);
  CHECK(state.out_degree(3) == 2);
  CHECK(state.out_degree(4) == 1);
  CHECK(state.out_degree(5) == 0);
  CHECK(state.out_degree_sum() == 9);  // grew by exactly r
  CHECK(state.weight(5) == 3.0);

  ReferenceSet bad;
  bad.ants = {2, 2, 4};
  CHECK_THROWS_AS(state.apply_selection(bad), std::invalid_argument);
  ReferenceSet out_of_range;
  out_of_range.ants = {3, 4, 9};
  CHECK_THROWS_AS(state.apply_selection(out_of_range), std::invalid_argument);
}

TEST_CASE("select_references does not mutate the state") {
  const GrowthParams params{4, -0.9999};
  NetworkState state = grown_state(params, 200, 77);
  const double total_before = state.weight_total();
  std::vector<double> weights_before;
  for (AntId id = 1; id <= state.ant_count(); ++id) weights_before.push_back(state.weight(id));

  RandomStream rng(5);
  (void)state.select_references(rng);
  CHECK(state.weight_total() == total_before);
  for (AntId id = 1; id <= state.ant_count(); ++id)
    CHECK(state.weight(id) == weights_before[static_cast<std::size_t>(id - 1)]);

  RandomStream rng_a(99), rng_b(99);
  CHECK(state.select_references(rng_a).ants == state.select_references(rng_b).ants);
}

TEST_CASE("out-degree sum identity holds along random growth") {
  std::uint64_t seed = 17;
  for (double omega : {-1.0, -0.9999, -0.5, 0.0, 1.0}) {
    const GrowthParams params{3, omega};
    NetworkState state = NetworkState::complete_graph(params, 300);
    RandomStream rng(++seed);
    while (state.ant_count() < 300) {
      state.apply_selection(state.select_references(rng));
      const std::int64_t t = state.ant_count();
      const std::int64_t r = params.in_degree;
      std::int64_t direct = 0;
      for (AntId id = 1; id <= t; ++id) direct += state.out_degree(id);
      CHECK(direct == r * (r + 1) / 2 + r * (t - (r + 1)));
      CHECK(direct == state.out_degree_sum());
    }
  }
}

TEST_CASE("weight index total matches the closed form") {
  for (double omega : {0.0, 0.5, 1.0}) {
    const GrowthParams params{5, omega};
    NetworkState state = grown_state(params, 400, 31);
    // Dyadic weights sum exactly in any order: the identity is exact.
    CHECK(state.weight_total() == total_popularity(params, state.ant_count()));
  }
  const GrowthParams fractional{5, -0.5};
  NetworkState state = grown_state(fractional, 400, 31);
  CHECK(state.weight_total() ==
        doctest::Approx(total_popularity(fractional, state.ant_count())).epsilon(1e-9));
}

TEST_CASE("negative asymmetry never selects a zero-weight ant") {
  for (double omega : {-1.0, -0.9999, -0.5}) {
    const GrowthParams params{4, omega};
    NetworkState state = NetworkState::complete_graph(params, 500);
    RandomStream rng(902);
    while (state.ant_count() < 500) {
      const ReferenceSet refs = state.select_references(rng);
      for (AntId id : refs.ants) {
        CHECK(state.weight(id) > 0.0);
        CHECK(attachment_weight(params, state.out_degree(id)) > 0.0);
      }
      for (AntId id = 1; id <= state.ant_count(); ++id) CHECK(state.weight(id) >= 0.0);
      state.apply_selection(refs);
    }
    // Emergent out-degree cap floor(r/|omega|) + 1.
    const std::int64_t cap =
        static_cast<std::int64_t>(std::floor(params.in_degree / std::abs(omega))) + 1;
    for (AntId id = 1; id <= state.ant_count(); ++id) CHECK(state.out_degree(id) <= cap);
  }
}

TEST_CASE("degree histogram shapes") {
  const NetworkState seed = NetworkState::complete_graph(GrowthParams{3, 0.0});
  const auto counts = seed.degree_histogram();
  CHECK(counts == std::map<std::int64_t, std::int64_t>{{0, 1}, {1, 1}, {2, 1}, {3, 1}});

  NetworkState lattice = grown_state(GrowthParams{3, -1.0}, 50, 4);
  const auto lattice_counts = lattice.degree_histogram();
  // All interior ants saturate at out-degree r.
  CHECK(lattice_counts.at(3) == 50 - 3);
}

TEST_CASE("uniform attachment marginals match r/t") {
  const GrowthParams params{2, 0.0};
  NetworkState state = grown_state(params, 10, 6);
  RandomStream rng(2024);
  const int draws = 100000;
  std::vector<int> hits(10, 0);
  for (int i = 0; i < draws; ++i) {
    for (AntId id : state.select_references(rng).ants) hits[static_cast<std::size_t>(id - 1)] += 1;
  }
  const double p = 2.0 / 10.0;
  const double se = std::sqrt(p * (1 - p) / draws);
  for (int count : hits) {
    const double freq = static_cast<double>(count) / draws;
    CHECK(std::abs(freq - p) < 3.0 * se);
  }
}

TEST_CASE("preferential attachment grows hubs") {
  const int samples = 20;
  const std::int64_t t_final = 10000;
  double max_pref = 0.0, max_uniform = 0.0;
  for (int s = 0; s < samples; ++s) {
    NetworkState pref = grown_state(GrowthParams{2, 1.0}, t_final, 1000 + s);
    NetworkState uniform = grown_state(GrowthParams{2, 0.0}, t_final, 2000 + s);
    const auto max_degree = [](const NetworkState& state) {
      std::int64_t best = 0;
      for (AntId id = 1; id <= state.ant_count(); ++id)
        best = std::max(best, state.out_degree(id));
      return static_cast<double>(best);
    };
    max_pref += max_degree(pref);
    max_uniform += max_degree(uniform);
  }
  max_pref /= samples;
  max_uniform /= samples;
  CHECK(max_pref > 2.0 * max_uniform);
}

TEST_CASE("uniform attachment max degree tracks an independent oracle") {
  // Oracle draws r distinct ants uniformly by index, no weight machinery.
  const GrowthParams params{2, 0.0};
  const std::int64_t t_final = 3000;
  const int samples = 10;
  double mean_engine = 0.0, mean_oracle = 0.0;
  for (int s = 0; s < samples; ++s) {
    NetworkState state = grown_state(params, t_final, 5000 + s);
    std::int64_t best = 0;
    for (AntId id = 1; id <= state.ant_count(); ++id) best = std::max(best, state.out_degree(id));
    mean_engine += static_cast<double>(best);

    RandomStream rng(6000 + s);
    std::vector<std::int64_t> degree(static_cast<std::size_t>(t_final), 0);
    for (int i = 0; i < 3; ++i) degree[static_cast<std::size_t>(i)] = 2 - i;
    for (std::int64_t t = 3; t < t_final; ++t) {
      std::int64_t first = static_cast<std::int64_t>(rng.uniform() * t);
      std::int64_t second = static_cast<std::int64_t>(rng.uniform() * (t - 1));
      if (second >= first) ++second;
      degree[static_cast<std::size_t>(first)] += 1;
      degree[static_cast<std::size_t>(second)] += 1;
    }
    std::int64_t oracle_best = 0;
    for (std::int64_t d : degree) oracle_best = std::max(oracle_best, d);
    mean_oracle += static_cast<double>(oracle_best);
  }
  mean_engine /= samples;
  mean_oracle /= samples;
  CHECK(mean_engine / mean_oracle > 0.7);
  CHECK(mean_engine / mean_oracle < 1.4);
}

TEST_CASE("network dump round-trips") {
  const GrowthParams params{2, 0.5};
  const SelectionRecord record = grow_network(params, 40, 99);
  std::ostringstream os;
  write_network_dump(os, params, record);
  std::istringstream is(os.str());
  const SelectionRecord back = read_network_dump(is, params);
  REQUIRE(back.refs.size() == record.refs.size());
  for (std::size_t i = 0; i < record.refs.size(); ++i)
    CHECK(back.refs[i].ants == record.refs[i].ants);

  std::istringstream bad("1\n2,1\n3,1,1\n");
  CHECK_THROWS_AS(read_network_dump(bad, params), std::invalid_argument);
}

TEST_CASE("exhausted weight pool raises") {
  WeightIndex index;
  index.push_back(0.0);
  index.push_back(0.0);
  CHECK_THROWS_AS(index.sample(0.0), ExhaustionError);
}
