// SPDX-License-Identifier: Apache-2.0

#include "cpir/protocol.hpp"

#include <map>
#include <numeric>
#include <set>
#include <string>

#include "cpir/rng.hpp"

namespace cpir {

Permutations gen_permutations(std::uint64_t seed, std::size_t m, std::size_t ltilde) {
  Rng rng(seed);
  Permutations p;
  p.pi.assign(m, std::vector<std::uint32_t>(ltilde));
  for (auto& pi : p.pi) {
    std::iota(pi.begin(), pi.end(), 0U);
    for (std::size_t i = ltilde; i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.below(i));
      std::swap(pi[i - 1], pi[j]);
    }
  }
  return p;
}

WireAnswer answer(const ShareTable& share, const WireQuery& q, const Field& field) {
  WireAnswer a;
  a.values.reserve(q.sums.size());
  for (const auto& s : q.sums) {
    Elem v = 0;
    for (const auto& t : s.terms) {
      if (t.record < 1 || t.record > share.rows.rows() || t.position >= share.rows.cols()) {
        fail(ErrorCode::kBadQuery, "term (record " + std::to_string(t.record) + ", position " +
                                       std::to_string(t.position) + ") outside the share");
      }
      v = field.add(v, share.rows(t.record - 1, t.position));
    }
    a.values.push_back(v);
  }
  return a;
}

namespace {

struct Projections {
  std::vector<std::size_t> servers;
  std::vector<Elem> values;
};

std::vector<Elem> solve_from(const Generator& g, const Projections& pr, const std::string& what) {
  const std::size_t k = g.k();
  if (pr.servers.size() < k) {
    fail(ErrorCode::kUndecodable, what + " is covered by " + std::to_string(pr.servers.size()) +
                                      " servers, need K=" + std::to_string(k));
  }
  return erasure_decode(g, std::span(pr.servers).first(k), std::span(pr.values).first(k));
}

Elem dot(const Generator& g, std::size_t server, const std::vector<Elem>& v) {
  const Field& f = g.field();
  Elem s = 0;
  for (std::size_t r = 0; r < v.size(); ++r) s = f.add(s, f.mul(g.at(r, server), v[r]));
  return s;
}

}  // namespace

Matrix decode(const QueryPlan& plan, std::span<const WireAnswer> answers, const Generator& g,
              std::vector<CancelledSum>* cancelled) {
  const Field& f = g.field();
  const std::size_t n = plan.per_server.size();
  if (answers.size() != n) fail(ErrorCode::kUndecodable, "expected one answer per server");

  // Answer value of each plan sum, by server.
  std::vector<std::vector<Elem>> value(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto canon = canonicalize(plan, i);
    if (answers[i].values.size() != canon.plan_index.size()) {
      fail(ErrorCode::kUndecodable, "server " + std::to_string(i + 1) + " answered " +
                                        std::to_string(answers[i].values.size()) + " symbols, expected " +
                                        std::to_string(canon.plan_index.size()));
    }
    value[i].resize(canon.plan_index.size());
    for (std::size_t c = 0; c < canon.plan_index.size(); ++c) value[i][canon.plan_index[c]] = answers[i].values[c];
  }

  // Pure interference sums, smallest types first.
  std::map<std::pair<std::size_t, PureSumRef>, Projections> pure;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s < plan.per_server[i].size(); ++s) {
      const auto& sum = plan.per_server[i][s];
      if (sum.desired_column) continue;
      auto& pr = pure[{sum.type.size(), *sum.interference}];
      pr.servers.push_back(i);
      pr.values.push_back(value[i][s]);
    }
  std::map<PureSumRef, std::vector<Elem>> known;
  for (const auto& [key, pr] : pure) known.emplace(key.second, solve_from(g, pr, "interference sum"));

  // Desired projections: singletons directly, mixed sums after cancellation.
  std::map<std::uint32_t, Projections> desired;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s < plan.per_server[i].size(); ++s) {
      const auto& sum = plan.per_server[i][s];
      if (!sum.desired_column) continue;
      Elem v = value[i][s];
      if (sum.interference) {
        auto it = known.find(*sum.interference);
        if (it == known.end()) fail(ErrorCode::kUndecodable, "interference part was never recovered");
        v = f.sub(v, dot(g, i, it->second));
        if (cancelled) cancelled->push_back({i, s, *sum.desired_column, v});
      }
      auto& pr = desired[*sum.desired_column];
      pr.servers.push_back(i);
      pr.values.push_back(v);
    }

  const auto ltilde = static_cast<std::size_t>(plan.params.ltilde);
  Matrix out(f, g.k(), ltilde);
  for (std::uint32_t c = 1; c <= ltilde; ++c) {
    auto it = desired.find(c);
    if (it == desired.end()) fail(ErrorCode::kUndecodable, "desired column " + std::to_string(c) + " never queried");
    const auto u = solve_from(g, it->second, "desired column " + std::to_string(c));
    const std::uint32_t pos = plan.perms.position(plan.theta, c);
    for (std::size_t r = 0; r < g.k(); ++r) out(r, pos) = u[r];
  }
  return out;
}

Metrics observe_metrics(const Transcript& t) {
  Metrics m;
  m.l = t.params.l;
  for (const auto& a : t.answers) m.download += static_cast<std::int64_t>(a.values.size());
  for (const auto& q : t.queries) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> touched;
    for (const auto& s : q.sums)
      for (const auto& term : s.terms) touched.emplace(term.record, term.position);
    m.omega += static_cast<std::int64_t>(touched.size());
  }
  m.rate = m.download > 0 ? Rational::make(m.l, m.download) : Rational{0, 1};
  return m;
}

Transcript run_retrieval(std::uint32_t theta, std::uint64_t seed, const SchemeParams& p, const Generator& g,
                         const AnswerSource& source) {
  if (g.n() != static_cast<std::size_t>(p.n_servers) || g.k() != static_cast<std::size_t>(p.k_code)) {
    fail(ErrorCode::kDimError, "generator shape does not match the scheme");
  }
  auto perms = gen_permutations(seed, static_cast<std::size_t>(p.m), static_cast<std::size_t>(p.ltilde));
  const QueryPlan plan = build_plan(theta, p, std::move(perms));

  Transcript t{theta, seed, p, {}, {}, Matrix(g.field(), 0, 0), {}, {}};
  for (std::size_t i = 0; i < plan.per_server.size(); ++i) {
    auto canon = canonicalize(plan, i);
    t.answers.push_back(source(i, canon.query));
    t.queries.push_back(std::move(canon.query));
    t.plan_index.push_back(std::move(canon.plan_index));
  }
  t.decoded = decode(plan, t.answers, g);
  t.metrics = observe_metrics(t);
  return t;
}

Transcript retrieve(const Database& db, std::uint32_t theta, std::uint64_t seed, const SchemeParams& p,
                    const Generator& g) {
  if (db.record_count() != static_cast<std::size_t>(p.m) || db.ltilde() != static_cast<std::size_t>(p.ltilde)) {
    fail(ErrorCode::kDimError, "database shape does not match the scheme");
  }
  const auto shares = encode(db, g);
  return run_retrieval(theta, seed, p, g, [&](std::size_t server, const WireQuery& q) {
    return answer(shares[server], q, g.field());
  });
}

Report metrics(const Transcript& t, const SchemeParams& p) {
  const Metrics m = observe_metrics(t);
  Report r;
  r.add("L", m.l == p.l, "observed " + std::to_string(m.l) + ", theory " + std::to_string(p.l));
  r.add("D", m.download == p.download,
        "observed " + std::to_string(m.download) + ", theory " + std::to_string(p.download));
  r.add("omega", m.omega == p.omega, "observed " + std::to_string(m.omega) + ", theory " + std::to_string(p.omega));
  r.add("rate", m.rate == p.capacity, "observed " + m.rate.str() + ", capacity " + p.capacity.str());
  return r;
}

}  // namespace cpir
