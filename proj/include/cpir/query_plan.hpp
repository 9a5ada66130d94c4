// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cpir/params.hpp"

namespace cpir {

// Index conventions for the query plan:
//   records            1-based (1..M)
//   logical columns    1-based (1..Ltilde), the column numbering after the
//                      client's private permutation
//   stored positions   0-based (0..Ltilde-1), what a server indexes
//   servers            0-based (0..N-1) as vector indices

/// Sorted ascending set of record indices.
using TypeSet = std::vector<std::uint32_t>;

/// N tuples of 1-based sum indices, one tuple per server.
using Distribution = std::vector<std::vector<std::int64_t>>;

/// Identifies the h-th pure (interference) sum of a type.
struct PureSumRef {
  TypeSet type;
  std::int64_t index = 0;
  friend auto operator<=>(const PureSumRef&, const PureSumRef&) = default;
};

struct Term {
  std::uint32_t record = 0;
  std::uint32_t column = 0;  // logical
  friend auto operator<=>(const Term&, const Term&) = default;
};

/// One answer symbol requested from a server: the sum of one logical column
/// from each record in `type`.
struct SumSpec {
  TypeSet type;
  std::vector<Term> terms;  // one per record of `type`, ascending by record
  std::optional<std::uint32_t> desired_column;   // set when theta is in `type`
  std::optional<PureSumRef> interference;        // set when type has records other than theta
};

/// pi[j-1][t-1] is the stored position of logical column t of record j.
struct Permutations {
  std::vector<std::vector<std::uint32_t>> pi;

  static Permutations identity(std::size_t m, std::size_t ltilde);
  std::uint32_t position(std::uint32_t record, std::uint32_t column) const {
    return pi.at(record - 1).at(column - 1);
  }
};

struct QueryPlan {
  std::uint32_t theta = 0;
  SchemeParams params;
  Permutations perms;
  std::vector<std::vector<SumSpec>> per_server;  // emission order
};

struct TypePair {
  TypeSet without_theta;  // Lambda, a subset of [M] - {theta}
  TypeSet with_theta;     // Lambda + {theta}
  friend bool operator==(const TypePair&, const TypePair&) = default;
};

/// All subsets of [M] - {theta}, by size then lexicographically, each paired
/// with itself plus theta.
std::vector<TypePair> type_order(std::uint32_t m, std::uint32_t theta);

/// Initial logical column per record of `lambda` for the block used by
/// dist2(lambda, gamma). Valid shapes: lambda == gamma with theta not in it,
/// or lambda == {theta} subset of gamma. Throws kBadCall otherwise.
std::vector<std::uint32_t> inicol(const TypeSet& lambda, const TypeSet& gamma, const SchemeParams& p,
                                  std::uint32_t theta);

/// Which sum indices q_1, q_2, ... of one type each server receives, for a
/// target type of size `gamma_size`. Every index lands on exactly K servers
/// and server i gets gamma_i(|Gamma|) of them.
Distribution dist2(std::int64_t gamma_size, const SchemeParams& p);

/// Interference parts for the type lambda + {theta}: server i gets every
/// lambda-type sum it does not itself hold (ascending). `pool` is
/// dist2(|lambda|) and must cover 1..pool(|lambda|).
Distribution dist1(std::int64_t lambda_size, const SchemeParams& p, const Distribution& pool);

/// Assembles the full per-server plan for desired record `theta`.
QueryPlan build_plan(std::uint32_t theta, const SchemeParams& p, Permutations perms);

struct WireTerm {
  std::uint32_t record = 0;    // 1-based
  std::uint32_t position = 0;  // 0-based
  friend auto operator<=>(const WireTerm&, const WireTerm&) = default;
};

struct WireSum {
  std::vector<WireTerm> terms;  // ascending by record
  friend auto operator<=>(const WireSum&, const WireSum&) = default;
};

/// What a server sees: sums of stored symbols, coefficients all 1.
struct WireQuery {
  std::vector<WireSum> sums;
  friend bool operator==(const WireQuery&, const WireQuery&) = default;
};

/// Canonical (theta-oblivious) form plus, for the client, the plan index of
/// every canonical sum.
struct CanonicalQuery {
  WireQuery query;
  std::vector<std::size_t> plan_index;
};

/// Wire form of one server's sums, ordered by (record set, position tuple).
CanonicalQuery canonicalize(const QueryPlan& plan, std::size_t server);
CanonicalQuery canonicalize(const QueryPlan& plan, const Permutations& perms, std::size_t server);

/// Wire form in Algorithm-1 emission order. This leaks theta through the order
/// of sums and exists only as a negative control for the privacy audit.
WireQuery emission_order_query(const QueryPlan& plan, const Permutations& perms, std::size_t server);

}  // namespace cpir
