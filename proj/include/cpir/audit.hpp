// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpir/mds.hpp"
#include "cpir/params.hpp"
#include "cpir/protocol.hpp"
#include "cpir/query_plan.hpp"
#include "cpir/report.hpp"

namespace cpir {

/// Binary query matrices of one retrieval, one per (server, record).
/// q[i][j-1] is Ltilde x gamma_i: column s has a 1 at the stored position
/// of record j referenced by the s-th canonical sum of server i.
struct QueryMatrixBundle {
  SchemeParams params;
  std::uint32_t theta = 0;
  Matrix g;
  std::vector<std::vector<Matrix>> q;

  /// kron(g_i, q[i][j-1]), L x gamma_i.
  Matrix coded_block(std::size_t server, std::uint32_t record) const;
};

QueryMatrixBundle assemble_query_matrices(const QueryPlan& plan, const Generator& g);
/// Same, from canonical wire queries (one per server).
QueryMatrixBundle assemble_query_matrices(const std::vector<WireQuery>& queries, const SchemeParams& p,
                                          std::uint32_t theta, const Generator& g);

/// Answers of server i through the stacked block product
/// (Vec(W_1) ... Vec(W_M)) * [coded_block(i,1); ...; coded_block(i,M)].
std::vector<Elem> block_answers(const QueryMatrixBundle& b, const Database& db, std::size_t server);

struct RankOptions {
  std::int64_t all_subsets_up_to_n = 8;  // enumerate every K-subset when N <= this
  std::size_t sampled_subsets = 30;
  std::uint64_t seed = 0;
};

/// Checks: "full-theta" (rank L), per K-subset "subset-theta" (KL/N) and
/// "subset-interference" (D-L), and "per-server" (every record block L/N).
Report verify_rank_conditions(const QueryMatrixBundle& b, const RankOptions& opt = {});

/// Upper bound on the enumeration, (Ltilde!)^M.
inline constexpr std::uint64_t kPrivacyBudget = 1'000'000;

enum class WireOrder { kCanonical, kEmission };

/// For every server, compares the multiset of wire queries over all M-tuples
/// of column permutations for theta and theta2. Throws kTooLarge beyond
/// kPrivacyBudget tuples.
bool privacy_exhaustive(std::int64_t m, std::int64_t n_servers, std::int64_t k_code, std::uint32_t theta,
                        std::uint32_t theta2, WireOrder order = WireOrder::kCanonical);

/// Per server: every type of size j appears gamma_i(j) times, positions per
/// record are distinct, and the type profile matches the plans for every
/// other theta under the same parameters.
Report privacy_structural(const QueryPlan& plan);

/// Heuristic: two-sample frequency comparison of canonical queries for theta
/// and theta2 over `samples` random permutation draws each; fails if any
/// query's counts differ by more than 5 sigma.
Report privacy_sampled(const SchemeParams& p, std::uint32_t theta, std::uint32_t theta2, std::size_t samples,
                       std::uint64_t seed);

struct AuditResult {
  std::vector<Report> ranks;  // one per theta
  std::string privacy_mode;   // "exhaustive" or "structural"
  bool privacy_pass = false;
  Report privacy;             // checks behind privacy_pass

  bool pass() const;
};

/// Rank conditions for every theta (permutations from `seed`) and privacy,
/// exhaustive within budget and structural plus sampled beyond it.
AuditResult audit(const SchemeParams& p, const Generator& g, std::uint64_t seed, const RankOptions& opt = {});

}  // namespace cpir
