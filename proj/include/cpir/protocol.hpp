// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cpir/mds.hpp"
#include "cpir/params.hpp"
#include "cpir/query_plan.hpp"
#include "cpir/report.hpp"

namespace cpir {

/// One field element per sum of the matching WireQuery.
struct WireAnswer {
  std::vector<Elem> values;
  friend bool operator==(const WireAnswer&, const WireAnswer&) = default;
};

struct Metrics {
  std::int64_t l = 0;
  std::int64_t download = 0;  // answer symbols received
  std::int64_t omega = 0;     // (record, position) references over all servers
  Rational rate;
  friend bool operator==(const Metrics&, const Metrics&) = default;
};

struct Transcript {
  std::uint32_t theta = 0;
  std::uint64_t seed = 0;
  SchemeParams params;
  std::vector<WireQuery> queries;  // per server, canonical order
  std::vector<WireAnswer> answers;
  Matrix decoded;
  Metrics metrics;
  // Client side only: plan index of each canonical sum, per server.
  std::vector<std::vector<std::size_t>> plan_index;
};

/// M independent uniform permutations of Ltilde columns drawn by
/// Fisher-Yates from Rng(seed). Same seed, same permutations.
Permutations gen_permutations(std::uint64_t seed, std::size_t m, std::size_t ltilde);

/// Server side: each answer is the sum of the referenced stored symbols.
/// Throws kBadQuery for a term outside the share.
WireAnswer answer(const ShareTable& share, const WireQuery& q, const Field& field);

/// Residue of a mixed sum after subtracting its interference projection.
struct CancelledSum {
  std::size_t server = 0;
  std::size_t plan_index = 0;
  std::uint32_t desired_column = 0;
  Elem residue = 0;
};

/// Recovers W_theta from answers aligned with canonicalize(plan, i). Throws
/// kUndecodable when a sum or desired column is not covered by K servers.
Matrix decode(const QueryPlan& plan, std::span<const WireAnswer> answers, const Generator& g,
              std::vector<CancelledSum>* cancelled = nullptr);

using AnswerSource = std::function<WireAnswer(std::size_t server, const WireQuery& query)>;

/// Plan, query every server through `source`, decode, and record the metrics.
Transcript run_retrieval(std::uint32_t theta, std::uint64_t seed, const SchemeParams& p, const Generator& g,
                         const AnswerSource& source);

/// In-process retrieval against freshly encoded shares of `db`.
Transcript retrieve(const Database& db, std::uint32_t theta, std::uint64_t seed, const SchemeParams& p,
                    const Generator& g);

/// Metrics recomputed from the transcript's queries and answers.
Metrics observe_metrics(const Transcript& t);

/// Observed L, D, omega and rate against their theoretical values.
Report metrics(const Transcript& t, const SchemeParams& p);

}  // namespace cpir
