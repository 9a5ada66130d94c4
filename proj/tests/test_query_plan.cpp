// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "cpir/error.hpp"
#include "cpir/golden.hpp"
#include "cpir/params.hpp"
#include "cpir/protocol.hpp"
#include "cpir/query_plan.hpp"

using namespace cpir;

namespace {

Permutations ident(const SchemeParams& p) {
  return Permutations::identity(static_cast<std::size_t>(p.m), static_cast<std::size_t>(p.ltilde));
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

}  // namespace

TEST_CASE("type_order") {
  CHECK(type_order(2, 1) == std::vector<TypePair>{{{}, {1}}, {{2}, {1, 2}}});
  CHECK(type_order(3, 1) == std::vector<TypePair>{{{}, {1}}, {{2}, {1, 2}}, {{3}, {1, 3}}, {{2, 3}, {1, 2, 3}}});
  CHECK(type_order(3, 2) == std::vector<TypePair>{{{}, {2}}, {{1}, {1, 2}}, {{3}, {2, 3}}, {{1, 3}, {1, 2, 3}}});
  CHECK(type_order(4, 4).size() == 8);
}

TEST_CASE("inicol") {
  const auto p = derive_params(3, 3, 2);
  CHECK(inicol({2, 3}, {2, 3}, p, 1) == std::vector<std::uint32_t>{5, 5});
  CHECK(inicol({1}, {1, 2}, p, 1) == std::vector<std::uint32_t>{5});
  CHECK(inicol({1}, {1, 2, 3}, p, 1) == std::vector<std::uint32_t>{9});
  CHECK(inicol({1}, {1}, p, 1) == std::vector<std::uint32_t>{1});
  CHECK(inicol({2}, {2}, p, 1) == std::vector<std::uint32_t>{1});
  // Golden example 2: a7 + c3 opens the {1,3} block, b5 + c5 the {2,3} block.
  CHECK(inicol({1}, {1, 3}, p, 1) == std::vector<std::uint32_t>{7});
  CHECK(inicol({3}, {3}, p, 1) == std::vector<std::uint32_t>{1});

  CHECK(code_of([&] { inicol({1, 2}, {1, 2}, p, 1); }) == ErrorCode::kBadCall);
  CHECK(code_of([&] { inicol({2}, {2, 3}, p, 1); }) == ErrorCode::kBadCall);
  CHECK(code_of([&] { inicol({1}, {2, 3}, p, 1); }) == ErrorCode::kBadCall);
}

TEST_CASE("dist2") {
  const auto e3 = derive_params(2, 5, 2);
  const auto d3 = dist2(2, e3);
  CHECK(d3[0] == std::vector<std::int64_t>{1, 2});
  CHECK(d3[1] == std::vector<std::int64_t>{1, 3});
  CHECK(d3[2] == std::vector<std::int64_t>{2, 3});
  CHECK(d3[3].empty());
  CHECK(d3[4].empty());

  const auto e1 = derive_params(2, 3, 2);
  const auto pure = dist2(1, e1);
  CHECK(pure[0] == std::vector<std::int64_t>{1, 2});
  CHECK(pure[1] == std::vector<std::int64_t>{1});
  CHECK(pure[2] == std::vector<std::int64_t>{2});
  const auto mixed = dist2(2, e1);
  CHECK(mixed[0].empty());
  CHECK(mixed[1] == std::vector<std::int64_t>{1});
  CHECK(mixed[2] == std::vector<std::int64_t>{1});
}

TEST_CASE("dist2 places every index on exactly K servers with gamma_i per server") {
  for (std::int64_t m = 2; m <= 4; ++m)
    for (std::int64_t n = 2; n <= 7; ++n)
      for (std::int64_t k = 1; k < n; ++k) {
        const auto p = derive_params(m, n, k);
        for (std::int64_t j = 1; j <= m; ++j) {
          const auto d = dist2(j, p);
          std::map<std::int64_t, int> hits;
          for (std::size_t i = 0; i < d.size(); ++i) {
            CHECK(static_cast<std::int64_t>(d[i].size()) == p.gamma(static_cast<std::int64_t>(i), j));
            CHECK(std::set<std::int64_t>(d[i].begin(), d[i].end()).size() == d[i].size());
            for (auto h : d[i]) ++hits[h];
          }
          CHECK(static_cast<std::int64_t>(hits.size()) == p.pool(j));
          for (auto [h, c] : hits) CHECK(c == k);
        }
      }
}

TEST_CASE("dist1") {
  const auto e2 = derive_params(3, 3, 2);
  const auto d = dist1(1, e2, dist2(1, e2));
  CHECK(d[0] == std::vector<std::int64_t>{3, 4});
  CHECK(d[1] == std::vector<std::int64_t>{2});
  CHECK(d[2] == std::vector<std::int64_t>{1});

  const auto e1 = derive_params(2, 3, 2);
  const auto d1 = dist1(1, e1, dist2(1, e1));
  CHECK(d1[0].empty());
  CHECK(d1[1] == std::vector<std::int64_t>{2});
  CHECK(d1[2] == std::vector<std::int64_t>{1});

  auto short_pool = dist2(1, e2);
  short_pool[0].pop_back();
  short_pool[1].pop_back();
  short_pool[2].pop_back();
  CHECK(code_of([&] { dist1(1, e2, short_pool); }) == ErrorCode::kInternalInvariant);
  CHECK(code_of([&] { dist1(1, e2, Distribution(2)); }) == ErrorCode::kInternalInvariant);
}

TEST_CASE("build_plan reproduces the golden tables") {
  const auto r = verify_examples(CPIR_GOLDEN_DIR);
  for (const auto& c : r.checks) {
    CAPTURE(c.detail);
    CHECK(c.pass);
  }

  const auto e2 = derive_params(3, 3, 2);
  const auto plan = build_plan(1, e2, ident(e2));
  CHECK(plan.per_server[0].size() == 12);
  CHECK(plan.per_server[1].size() == 13);
  CHECK(plan.per_server[2].size() == 13);

  const auto e1 = derive_params(2, 3, 2);
  const auto fig1 = render_plan(build_plan(1, e1, ident(e1)));
  CHECK(fig1[1] == std::vector<std::string>{"a1", "b1", "a3+b2"});
  CHECK(fig1[2] == std::vector<std::string>{"a2", "b2", "a3+b1"});

  const auto e3 = derive_params(2, 5, 2);
  auto counts = [](const QueryPlan& pl) {
    std::vector<std::map<std::size_t, int>> out(pl.per_server.size());
    for (std::size_t i = 0; i < pl.per_server.size(); ++i)
      for (const auto& s : pl.per_server[i]) ++out[i][s.type.size()];
    return out;
  };
  CHECK(counts(build_plan(1, e3, ident(e3))) == counts(build_plan(2, e3, ident(e3))));

  CHECK(code_of([&] { build_plan(3, e3, ident(e3)); }) == ErrorCode::kBadArgument);
  auto bad = ident(e3);
  bad.pi[0][0] = 1;
  CHECK(code_of([&] { build_plan(1, e3, bad); }) == ErrorCode::kBadArgument);
}

TEST_CASE("plan invariants over the sweep") {
  for (std::int64_t m = 2; m <= 4; ++m)
    for (std::int64_t nn = 2; nn <= 6; ++nn)
      for (std::int64_t kk = 1; kk < nn; ++kk) {
        const auto p = derive_params(m, nn, kk);
        const auto perms = gen_permutations(static_cast<std::uint64_t>(m * 100 + nn * 10 + kk), static_cast<std::size_t>(m),
                                            static_cast<std::size_t>(p.ltilde));
        for (std::uint32_t theta = 1; theta <= m; ++theta) {
          CAPTURE(m);
          CAPTURE(nn);
          CAPTURE(kk);
          CAPTURE(theta);
          const auto plan = build_plan(theta, p, perms);
          std::map<PureSumRef, std::set<std::size_t>> pure_at;
          std::map<std::uint32_t, std::set<std::size_t>> desired_at;
          std::map<std::uint32_t, std::set<std::uint32_t>> undesired_cols;
          std::int64_t access = 0;
          for (std::size_t i = 0; i < plan.per_server.size(); ++i) {
            std::map<TypeSet, std::int64_t> per_type;
            std::map<std::uint32_t, std::int64_t> per_record;
            std::map<std::uint32_t, std::set<std::uint32_t>> cols;
            std::size_t terms = 0;
            for (const auto& s : plan.per_server[i]) {
              ++per_type[s.type];
              REQUIRE(s.terms.size() == s.type.size());
              for (std::size_t t = 0; t < s.terms.size(); ++t) {
                REQUIRE(s.terms[t].record == s.type[t]);
                ++per_record[s.terms[t].record];
                cols[s.terms[t].record].insert(s.terms[t].column);
                if (s.terms[t].record != theta) undesired_cols[s.terms[t].record].insert(s.terms[t].column);
                ++terms;
              }
              access += static_cast<std::int64_t>(s.terms.size());
              const bool has_theta = std::find(s.type.begin(), s.type.end(), theta) != s.type.end();
              CHECK(s.desired_column.has_value() == has_theta);
              CHECK(s.interference.has_value() == (s.type.size() > (has_theta ? 1u : 0u)));
              if (has_theta) desired_at[*s.desired_column].insert(i);
              if (!has_theta) pure_at[*s.interference].insert(i);
            }
            // Table 2 counts and record symmetry.
            for (const auto& [type, c] : per_type)
              CHECK(c == p.gamma(static_cast<std::int64_t>(i), static_cast<std::int64_t>(type.size())));
            for (const auto& [rec, c] : per_record) CHECK(c == per_record.begin()->second);
            // Rule (b2): no logical column repeats per record per server.
            std::size_t distinct = 0;
            for (const auto& [rec, set] : cols) distinct += set.size();
            CHECK(distinct == terms);
          }
          // Rule (b4).
          for (const auto& [ref, servers] : pure_at) CHECK(servers.size() == static_cast<std::size_t>(kk));
          for (const auto& [col, servers] : desired_at) CHECK(servers.size() == static_cast<std::size_t>(kk));
          CHECK(static_cast<std::int64_t>(desired_at.size()) == p.ltilde);
          CHECK(desired_at.begin()->first == 1u);
          CHECK(static_cast<std::int64_t>(desired_at.rbegin()->first) == p.ltilde);
          for (const auto& [rec, set] : undesired_cols)
            CHECK(static_cast<std::int64_t>(set.size()) == p.k * ipow(p.n, m - 2));
          CHECK(access == p.omega);
          // Each mixed sum's interference is a pure sum held by K other servers.
          for (std::size_t i = 0; i < plan.per_server.size(); ++i)
            for (const auto& s : plan.per_server[i])
              if (s.desired_column && s.interference) {
                REQUIRE(pure_at.count(*s.interference) == 1);
                CHECK(pure_at[*s.interference].count(i) == 0);
              }
        }
      }
}

TEST_CASE("canonicalize") {
  SchemeParams p = derive_params(2, 3, 2);
  QueryPlan single{1, p, Permutations{{{2, 0, 1}, {0, 1, 2}}}, {{SumSpec{{1}, {{1, 1}}, 1, std::nullopt}}, {}, {}}};
  const auto c = canonicalize(single, 0);
  REQUIRE(c.query.sums.size() == 1);
  CHECK(c.query.sums[0].terms == std::vector<WireTerm>{{1, 2}});
  CHECK(canonicalize(single, 1).query.sums.empty());

  const auto perms = gen_permutations(3, 2, 3);
  const auto plan = build_plan(2, p, perms);
  for (std::size_t i = 0; i < 3; ++i) {
    auto q = canonicalize(plan, i).query;
    auto resorted = q;
    std::stable_sort(resorted.sums.begin(), resorted.sums.end(), [](const WireSum& a, const WireSum& b) {
      std::vector<std::uint32_t> ra, rb, pa, pb;
      for (auto t : a.terms) ra.push_back(t.record), pa.push_back(t.position);
      for (auto t : b.terms) rb.push_back(t.record), pb.push_back(t.position);
      return std::tie(ra, pa) < std::tie(rb, pb);
    });
    CHECK(resorted == q);
  }
}

TEST_CASE("S' correspondence: server 2 sees the same query for theta=1 and theta=2") {
  const auto p = derive_params(2, 3, 2);
  const std::uint32_t sigma[3] = {0, 2, 1};  // S' = (s_1, s_3, s_2)
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto perms = gen_permutations(seed, 2, 3);
    Permutations primed = perms;
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t t = 0; t < 3; ++t) primed.pi[j][t] = perms.pi[j][sigma[t]];
    const auto q1 = canonicalize(build_plan(1, p, perms), 1).query;
    const auto q2 = canonicalize(build_plan(2, p, primed), 1).query;
    CHECK(q1 == q2);
  }
}

TEST_CASE("emission order differs between thetas even with identical permutations") {
  const auto p = derive_params(2, 3, 2);
  const auto perms = ident(p);
  const auto a = emission_order_query(build_plan(1, p, perms), perms, 0);
  const auto b = emission_order_query(build_plan(2, p, perms), perms, 0);
  CHECK_FALSE(a == b);
  CHECK(canonicalize(build_plan(1, p, perms), 0).query == canonicalize(build_plan(2, p, perms), 0).query);
}
