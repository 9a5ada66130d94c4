// SPDX-License-Identifier: Apache-2.0

#include "cpir/audit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cpir/error.hpp"
#include "cpir/rng.hpp"
#include "cpir/wire.hpp"

namespace cpir {

namespace {

using Positions = std::vector<std::vector<std::uint32_t>>;  // per column

// Stored positions referenced by each column of q[i][j-1].
Positions column_positions(const Matrix& q) {
  Positions out(q.cols());
  for (std::size_t t = 0; t < q.rows(); ++t)
    for (std::size_t s = 0; s < q.cols(); ++s)
      if (q(t, s) != 0) out[s].push_back(static_cast<std::uint32_t>(t));
  return out;
}

// Appends the support of column s of kron(g_i, Q) shifted by `offset`.
void append_coded(SparseVec& v, const Matrix& g, std::size_t server, const std::vector<std::uint32_t>& pos,
                  std::size_t ltilde, std::size_t offset) {
  for (std::size_t a = 0; a < g.rows(); ++a) {
    const Elem c = g(a, server);
    if (c == 0) continue;
    for (auto t : pos) v.emplace_back(offset + a * ltilde + t, c);
  }
}

std::vector<std::vector<std::size_t>> k_subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(k);
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::vector<std::size_t> random_subset(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::string subset_name(const std::vector<std::size_t>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i] + 1);
  return out + "}";
}

std::string wire_key(const WireQuery& q) {
  const auto bytes = wire::encode_query(q);
  return {bytes.begin(), bytes.end()};
}

std::uint64_t enumeration_size(std::int64_t ltilde, std::int64_t m) {
  std::uint64_t fact = 1;
  for (std::int64_t i = 2; i <= ltilde; ++i) {
    fact *= static_cast<std::uint64_t>(i);
    if (fact > kPrivacyBudget) return kPrivacyBudget + 1;
  }
  std::uint64_t total = 1;
  for (std::int64_t j = 0; j < m; ++j) {
    total *= fact;
    if (total > kPrivacyBudget) return kPrivacyBudget + 1;
  }
  return total;
}

using Multiset = std::vector<std::map<std::string, std::uint64_t>>;  // per server

Multiset query_multiset(const QueryPlan& plan, const std::vector<std::vector<std::uint32_t>>& all_perms,
                        WireOrder order) {
  const auto& p = plan.params;
  Multiset out(static_cast<std::size_t>(p.n_servers));
  std::vector<std::size_t> digit(static_cast<std::size_t>(p.m), 0);
  Permutations perms;
  perms.pi.resize(digit.size());
  while (true) {
    for (std::size_t j = 0; j < digit.size(); ++j) perms.pi[j] = all_perms[digit[j]];
    for (std::size_t i = 0; i < out.size(); ++i) {
      const WireQuery q = order == WireOrder::kCanonical ? canonicalize(plan, perms, i).query
                                                         : emission_order_query(plan, perms, i);
      ++out[i][wire_key(q)];
    }
    std::size_t j = 0;
    while (j < digit.size() && ++digit[j] == all_perms.size()) digit[j++] = 0;
    if (j == digit.size()) break;
  }
  return out;
}

// Count of sums per type, per server.
std::vector<std::map<TypeSet, std::int64_t>> type_profile(const QueryPlan& plan) {
  std::vector<std::map<TypeSet, std::int64_t>> out(plan.per_server.size());
  for (std::size_t i = 0; i < plan.per_server.size(); ++i)
    for (const auto& s : plan.per_server[i]) ++out[i][s.type];
  return out;
}

}  // namespace

Matrix QueryMatrixBundle::coded_block(std::size_t server, std::uint32_t record) const {
  return kron(g.column(server), q.at(server).at(record - 1));
}

QueryMatrixBundle assemble_query_matrices(const QueryPlan& plan, const Generator& g) {
  std::vector<WireQuery> queries;
  for (std::size_t i = 0; i < plan.per_server.size(); ++i) queries.push_back(canonicalize(plan, i).query);
  return assemble_query_matrices(queries, plan.params, plan.theta, g);
}

QueryMatrixBundle assemble_query_matrices(const std::vector<WireQuery>& queries, const SchemeParams& p,
                                          std::uint32_t theta, const Generator& g) {
  if (queries.size() != static_cast<std::size_t>(p.n_servers)) fail(ErrorCode::kDimError, "one query per server");
  QueryMatrixBundle b{p, theta, g.matrix(), {}};
  const Field& f = g.field();
  for (const auto& query : queries) {
    std::vector<Matrix> per_record;
    for (std::int64_t j = 0; j < p.m; ++j)
      per_record.emplace_back(f, static_cast<std::size_t>(p.ltilde), query.sums.size());
    for (std::size_t s = 0; s < query.sums.size(); ++s) {
      for (const auto& t : query.sums[s].terms) {
        if (t.record < 1 || t.record > p.m || t.position >= p.ltilde) fail(ErrorCode::kBadQuery, "term out of range");
        per_record[t.record - 1](t.position, s) = 1;
      }
    }
    b.q.push_back(std::move(per_record));
  }
  return b;
}

std::vector<Elem> block_answers(const QueryMatrixBundle& b, const Database& db, std::size_t server) {
  const Field& f = b.g.field();
  std::vector<Elem> out;
  for (std::uint32_t j = 1; j <= b.params.m; ++j) {
    const Matrix prod = mat_mul(vec(db.records.at(j - 1)), b.coded_block(server, j));
    if (out.empty()) out.assign(prod.cols(), 0);
    for (std::size_t s = 0; s < prod.cols(); ++s) out[s] = f.add(out[s], prod(0, s));
  }
  return out;
}

Report verify_rank_conditions(const QueryMatrixBundle& b, const RankOptions& opt) {
  const auto& p = b.params;
  const Field& f = b.g.field();
  const auto nsrv = static_cast<std::size_t>(p.n_servers);
  const auto lt = static_cast<std::size_t>(p.ltilde);
  const auto l = static_cast<std::size_t>(p.l);
  const std::uint32_t theta = b.theta;

  // cols[i][j-1][s]: positions of record j in sum s at server i.
  std::vector<std::vector<Positions>> cols(nsrv);
  for (std::size_t i = 0; i < nsrv; ++i)
    for (const auto& q : b.q.at(i)) cols[i].push_back(column_positions(q));

  auto theta_columns = [&](std::size_t i, std::vector<SparseVec>& out) {
    for (const auto& pos : cols[i][theta - 1]) {
      SparseVec v;
      append_coded(v, b.g, i, pos, lt, 0);
      out.push_back(std::move(v));
    }
  };

  Report r;
  {
    std::vector<SparseVec> all;
    for (std::size_t i = 0; i < nsrv; ++i) theta_columns(i, all);
    const auto got = sparse_rank(f, all);
    r.add("full-theta", got == l, "rank " + std::to_string(got) + ", want L=" + std::to_string(l));
  }

  std::vector<std::vector<std::size_t>> subsets;
  const auto kk = static_cast<std::size_t>(p.k_code);
  if (p.n_servers <= opt.all_subsets_up_to_n) {
    subsets = k_subsets(nsrv, kk);
  } else {
    Rng rng(opt.seed);
    for (std::size_t s = 0; s < opt.sampled_subsets; ++s) subsets.push_back(random_subset(rng, nsrv, kk));
  }
  const auto want_theta = static_cast<std::size_t>(p.k_code * p.l / p.n_servers);
  const auto want_rest = static_cast<std::size_t>(p.download - p.l);
  for (const auto& gamma : subsets) {
    std::vector<SparseVec> th, rest;
    for (auto i : gamma) {
      theta_columns(i, th);
      for (std::size_t s = 0; s < cols[i][0].size(); ++s) {
        SparseVec v;
        std::size_t block = 0;
        for (std::uint32_t j = 1; j <= p.m; ++j) {
          if (j == theta) continue;
          append_coded(v, b.g, i, cols[i][j - 1][s], lt, block * l);
          ++block;
        }
        rest.push_back(std::move(v));
      }
    }
    const auto rt = sparse_rank(f, th);
    const auto rr = sparse_rank(f, rest);
    r.add("subset-theta " + subset_name(gamma), rt == want_theta,
          "rank " + std::to_string(rt) + ", want KL/N=" + std::to_string(want_theta));
    r.add("subset-interference " + subset_name(gamma), rr == want_rest,
          "rank " + std::to_string(rr) + ", want D-L=" + std::to_string(want_rest));
  }

  const auto want_server = static_cast<std::size_t>(p.l / p.n_servers);
  for (std::size_t i = 0; i < nsrv; ++i) {
    std::string bad;
    for (std::uint32_t j = 1; j <= p.m; ++j) {
      std::vector<SparseVec> block;
      for (const auto& pos : cols[i][j - 1]) {
        SparseVec v;
        append_coded(v, b.g, i, pos, lt, 0);
        block.push_back(std::move(v));
      }
      const auto got = sparse_rank(f, block);
      if (got != want_server) bad += " record " + std::to_string(j) + " rank " + std::to_string(got);
    }
    r.add("per-server " + std::to_string(i + 1), bad.empty(),
          bad.empty() ? "every record rank L/N=" + std::to_string(want_server)
                      : "want L/N=" + std::to_string(want_server) + ";" + bad);
  }
  return r;
}

bool privacy_exhaustive(std::int64_t m, std::int64_t n_servers, std::int64_t k_code, std::uint32_t theta,
                        std::uint32_t theta2, WireOrder order) {
  const SchemeParams p = derive_params(m, n_servers, k_code);
  if (theta < 1 || theta > m || theta2 < 1 || theta2 > m) fail(ErrorCode::kBadArgument, "theta out of range");
  if (enumeration_size(p.ltilde, p.m) > kPrivacyBudget) {
    fail(ErrorCode::kTooLarge, "(Ltilde!)^M exceeds the enumeration budget");
  }
  std::vector<std::vector<std::uint32_t>> all_perms;
  std::vector<std::uint32_t> perm(static_cast<std::size_t>(p.ltilde));
  std::iota(perm.begin(), perm.end(), 0);
  do all_perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  const auto ident = Permutations::identity(static_cast<std::size_t>(p.m), static_cast<std::size_t>(p.ltilde));
  const auto a = query_multiset(build_plan(theta, p, ident), all_perms, order);
  const auto b = query_multiset(build_plan(theta2, p, ident), all_perms, order);
  return a == b;
}

Report privacy_structural(const QueryPlan& plan) {
  const auto& p = plan.params;
  Report r;
  const auto profile = type_profile(plan);
  for (std::size_t i = 0; i < plan.per_server.size(); ++i) {
    const auto id = std::to_string(i + 1);

    // (i) every type of size j appears gamma_i(j) times.
    std::string bad;
    std::map<std::size_t, std::int64_t> types_seen;
    for (const auto& [type, count] : profile[i]) {
      ++types_seen[type.size()];
      if (count != p.gamma(static_cast<std::int64_t>(i), static_cast<std::int64_t>(type.size())))
        bad += " type of size " + std::to_string(type.size()) + " has " + std::to_string(count);
    }
    for (std::int64_t j = 1; j <= p.m; ++j) {
      const std::int64_t want = p.gamma(static_cast<std::int64_t>(i), j) == 0 ? 0 : [&] {
        std::int64_t c = 1;  // C(M, j)
        for (std::int64_t t = 0; t < j; ++t) c = c * (p.m - t) / (t + 1);
        return c;
      }();
      if (types_seen[static_cast<std::size_t>(j)] != want) bad += " size " + std::to_string(j) + " missing types";
    }
    r.add("type-counts " + id, bad.empty(), bad);

    // (ii) distinct positions per record.
    std::map<std::uint32_t, std::vector<std::uint32_t>> used;
    for (const auto& s : plan.per_server[i])
      for (const auto& t : s.terms) used[t.record].push_back(plan.perms.position(t.record, t.column));
    bool distinct = true;
    for (auto& [rec, v] : used) {
      std::sort(v.begin(), v.end());
      if (std::adjacent_find(v.begin(), v.end()) != v.end()) distinct = false;
    }
    r.add("distinct-positions " + id, distinct);
  }

  // (iii) same profile for every theta.
  bool same = true;
  std::string detail;
  for (std::uint32_t t = 1; t <= p.m; ++t) {
    if (t == plan.theta) continue;
    if (type_profile(build_plan(t, p, plan.perms)) != profile) {
      same = false;
      detail += " differs from theta=" + std::to_string(t);
    }
  }
  r.add("theta-independent-profile", same, detail);
  return r;
}

Report privacy_sampled(const SchemeParams& p, std::uint32_t theta, std::uint32_t theta2, std::size_t samples,
                       std::uint64_t seed) {
  const auto m = static_cast<std::size_t>(p.m);
  const auto lt = static_cast<std::size_t>(p.ltilde);
  const auto ident = Permutations::identity(m, lt);
  const QueryPlan pa = build_plan(theta, p, ident);
  const QueryPlan pb = build_plan(theta2, p, ident);
  Multiset ca(static_cast<std::size_t>(p.n_servers)), cb(ca.size());
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto perm_a = gen_permutations(rng.next(), m, lt);
    const auto perm_b = gen_permutations(rng.next(), m, lt);
    for (std::size_t i = 0; i < ca.size(); ++i) {
      ++ca[i][wire_key(canonicalize(pa, perm_a, i).query)];
      ++cb[i][wire_key(canonicalize(pb, perm_b, i).query)];
    }
  }
  Report r;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    std::map<std::string, std::pair<double, double>> joint;
    for (const auto& [k, c] : ca[i]) joint[k].first = static_cast<double>(c);
    for (const auto& [k, c] : cb[i]) joint[k].second = static_cast<double>(c);
    double worst = 0;
    for (const auto& [k, c] : joint) {
      const double z = std::abs(c.first - c.second) / std::sqrt(c.first + c.second);
      worst = std::max(worst, z);
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max |z| %.2f over %zu queries", worst, joint.size());
    r.add("sampled-frequency " + std::to_string(i + 1), worst <= 5.0, buf);
  }
  return r;
}

bool AuditResult::pass() const {
  for (const auto& r : ranks)
    if (!r.all_pass()) return false;
  return privacy_pass;
}

AuditResult audit(const SchemeParams& p, const Generator& g, std::uint64_t seed, const RankOptions& opt) {
  AuditResult out;
  const auto perms = gen_permutations(seed, static_cast<std::size_t>(p.m), static_cast<std::size_t>(p.ltilde));
  for (std::uint32_t t = 1; t <= p.m; ++t)
    out.ranks.push_back(verify_rank_conditions(assemble_query_matrices(build_plan(t, p, perms), g), opt));

  if (enumeration_size(p.ltilde, p.m) <= kPrivacyBudget) {
    out.privacy_mode = "exhaustive";
    for (std::uint32_t t = 2; t <= p.m; ++t) {
      const bool eq = privacy_exhaustive(p.m, p.n_servers, p.k_code, 1, t);
      out.privacy.add("exhaustive theta=1 vs theta=" + std::to_string(t), eq);
    }
  } else {
    out.privacy_mode = "structural";
    for (const auto& c : privacy_structural(build_plan(1, p, perms)).checks) out.privacy.checks.push_back(c);
    for (std::uint32_t t = 2; t <= p.m; ++t) {
      for (auto c : privacy_sampled(p, 1, t, 10'000, seed).checks) {
        c.name = "heuristic " + c.name + " theta=1 vs theta=" + std::to_string(t);
        out.privacy.checks.push_back(std::move(c));
      }
    }
  }
  out.privacy_pass = out.privacy.all_pass();
  return out;
}

}  // namespace cpir
