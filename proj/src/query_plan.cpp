// SPDX-License-Identifier: Apache-2.0

#include "cpir/query_plan.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cpir/error.hpp"

namespace cpir {

namespace {

// Subsets of `pool` with `size` elements, in lexicographic order.
std::vector<TypeSet> combinations(const std::vector<std::uint32_t>& pool, std::size_t size) {
  std::vector<TypeSet> out;
  if (size > pool.size()) return out;
  std::vector<std::size_t> idx(size);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    TypeSet s;
    s.reserve(size);
    for (std::size_t i : idx) s.push_back(pool[i]);
    out.push_back(std::move(s));
    std::size_t i = size;
    while (i > 0 && idx[i - 1] == pool.size() - size + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::vector<std::uint32_t> others(std::uint32_t m, std::uint32_t theta) {
  std::vector<std::uint32_t> o;
  for (std::uint32_t j = 1; j <= m; ++j)
    if (j != theta) o.push_back(j);
  return o;
}

bool contains(const TypeSet& s, std::uint32_t x) { return std::binary_search(s.begin(), s.end(), x); }

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

void check_theta(std::uint32_t theta, const SchemeParams& p) {
  if (theta < 1 || theta > p.m) fail(ErrorCode::kBadArgument, "theta " + std::to_string(theta) + " outside 1..M");
}

}  // namespace

Permutations Permutations::identity(std::size_t m, std::size_t ltilde) {
  Permutations p;
  p.pi.assign(m, std::vector<std::uint32_t>(ltilde));
  for (auto& v : p.pi) std::iota(v.begin(), v.end(), 0U);
  return p;
}

std::vector<TypePair> type_order(std::uint32_t m, std::uint32_t theta) {
  if (theta < 1 || theta > m) fail(ErrorCode::kBadArgument, "theta outside 1..M");
  const auto rest = others(m, theta);
  std::vector<TypePair> order;
  for (std::size_t j = 0; j < m; ++j) {
    for (auto& lambda : combinations(rest, j)) {
      TypeSet with = lambda;
      with.insert(std::lower_bound(with.begin(), with.end(), theta), theta);
      order.push_back({std::move(lambda), std::move(with)});
    }
  }
  return order;
}

std::vector<std::uint32_t> inicol(const TypeSet& lambda, const TypeSet& gamma, const SchemeParams& p,
                                  std::uint32_t theta) {
  check_theta(theta, p);
  const auto rest = others(static_cast<std::uint32_t>(p.m), theta);
  if (!std::is_sorted(lambda.begin(), lambda.end()) || !std::is_sorted(gamma.begin(), gamma.end())) {
    fail(ErrorCode::kBadCall, "inicol type sets must be sorted");
  }

  if (lambda == gamma && !contains(lambda, theta)) {
    if (lambda.empty()) return {};
    for (auto j : lambda)
      if (j < 1 || j > p.m) fail(ErrorCode::kBadCall, "record index outside 1..M");
    const std::size_t nu = lambda.size();
    const auto same_size = combinations(rest, nu);
    const auto h = static_cast<std::size_t>(std::find(same_size.begin(), same_size.end(), lambda) - same_size.begin());
    std::vector<std::uint32_t> start;
    for (auto j : lambda) {
      std::int64_t l = 1;
      // Blocks of every smaller type containing j, then earlier types of this size.
      for (std::size_t s = 1; s < nu; ++s)
        for (const auto& t : combinations(rest, s))
          if (contains(t, j)) l += p.pool(static_cast<std::int64_t>(s));
      for (std::size_t t = 0; t < h; ++t)
        if (contains(same_size[t], j)) l += p.pool(static_cast<std::int64_t>(nu));
      start.push_back(static_cast<std::uint32_t>(l));
    }
    return start;
  }

  if (lambda.size() == 1 && lambda.front() == theta && contains(gamma, theta)) {
    TypeSet base;
    for (auto j : gamma)
      if (j != theta) base.push_back(j);
    for (auto j : base)
      if (j < 1 || j > p.m) fail(ErrorCode::kBadCall, "record index outside 1..M");
    const std::size_t nu = base.size();
    const auto same_size = combinations(rest, nu);
    const auto h = static_cast<std::int64_t>(std::find(same_size.begin(), same_size.end(), base) - same_size.begin());
    std::int64_t l = 1;
    for (std::size_t s = 0; s < nu; ++s) {
      l += static_cast<std::int64_t>(combinations(rest, s).size()) * p.pool(static_cast<std::int64_t>(s + 1));
    }
    l += h * p.pool(static_cast<std::int64_t>(nu + 1));
    return {static_cast<std::uint32_t>(l)};
  }

  fail(ErrorCode::kBadCall, "inicol called with an unsupported (Lambda, Gamma) shape");
}

Distribution dist2(std::int64_t gamma_size, const SchemeParams& p) {
  if (gamma_size < 1 || gamma_size > p.m) fail(ErrorCode::kBadCall, "dist2 type size outside 1..M");
  const std::int64_t nn = p.n_servers, kk = p.k_code, front = nn - kk;
  const std::int64_t alpha = p.alpha[gamma_size - 1], beta = p.beta[gamma_size - 1];
  Distribution out(static_cast<std::size_t>(nn));

  if (p.wide_regime()) {
    // Sums q_1..q_t dealt round-robin over the first N-K servers, each
    // repeated K times; the last K servers share a fresh block.
    const std::int64_t t = front * alpha / kk;
    for (std::int64_t i = 1; i <= front; ++i)
      for (std::int64_t h = 1; h <= alpha; ++h) out[i - 1].push_back(ceil_div((h - 1) * front + i, kk));
    for (std::int64_t i = front + 1; i <= nn; ++i)
      for (std::int64_t h = 1; h <= beta; ++h) out[i - 1].push_back(t + h);
    return out;
  }

  // N < 2K: the first N-K servers all hold q_1..q_alpha; 2K-N more copies of
  // each are dealt round-robin over the last K servers, which then also
  // share `fresh` new sums.
  const std::int64_t copies = 2 * kk - nn;
  const std::int64_t per_back = copies * alpha / kk;
  const std::int64_t fresh = beta - per_back;
  if (fresh < 0) fail(ErrorCode::kInternalInvariant, "negative fresh-sum count in dist2");
  for (std::int64_t i = 1; i <= front; ++i)
    for (std::int64_t h = 1; h <= alpha; ++h) out[i - 1].push_back(h);
  for (std::int64_t i = 1; i <= kk; ++i) {
    auto& tuple = out[front + i - 1];
    for (std::int64_t h = 1; h <= per_back; ++h) tuple.push_back(ceil_div((h - 1) * kk + i, copies));
    for (std::int64_t h = 1; h <= fresh; ++h) tuple.push_back(alpha + h);
  }
  return out;
}

Distribution dist1(std::int64_t lambda_size, const SchemeParams& p, const Distribution& pool) {
  if (lambda_size < 1 || lambda_size >= p.m) fail(ErrorCode::kBadCall, "dist1 type size outside 1..M-1");
  const std::int64_t total = p.pool(lambda_size);
  if (pool.size() != static_cast<std::size_t>(p.n_servers)) {
    fail(ErrorCode::kInternalInvariant, "dist1 pool has the wrong number of servers");
  }
  std::vector<bool> seen(static_cast<std::size_t>(total) + 1, false);
  for (const auto& tuple : pool)
    for (auto h : tuple) {
      if (h < 1 || h > total) fail(ErrorCode::kInternalInvariant, "dist1 pool index outside 1..|Q|");
      seen[static_cast<std::size_t>(h)] = true;
    }
  for (std::int64_t h = 1; h <= total; ++h)
    if (!seen[static_cast<std::size_t>(h)]) fail(ErrorCode::kInternalInvariant, "dist1 pool does not cover Q");

  Distribution out(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    std::vector<bool> held(static_cast<std::size_t>(total) + 1, false);
    for (auto h : pool[i]) held[static_cast<std::size_t>(h)] = true;
    for (std::int64_t h = 1; h <= total; ++h)
      if (!held[static_cast<std::size_t>(h)]) out[i].push_back(h);
    if (static_cast<std::int64_t>(out[i].size()) != p.gamma(static_cast<std::int64_t>(i), lambda_size + 1)) {
      fail(ErrorCode::kInternalInvariant, "dist1 tuple size differs from gamma");
    }
  }
  return out;
}

QueryPlan build_plan(std::uint32_t theta, const SchemeParams& p, Permutations perms) {
  check_theta(theta, p);
  if (perms.pi.size() != static_cast<std::size_t>(p.m)) fail(ErrorCode::kBadArgument, "need one permutation per record");
  for (const auto& pi : perms.pi) {
    if (pi.size() != static_cast<std::size_t>(p.ltilde)) fail(ErrorCode::kBadArgument, "permutation has wrong length");
    std::vector<std::uint32_t> sorted(pi);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t t = 0; t < sorted.size(); ++t)
      if (sorted[t] != t) fail(ErrorCode::kBadArgument, "permutation is not a bijection");
  }

  QueryPlan plan{theta, p, std::move(perms), std::vector<std::vector<SumSpec>>(static_cast<std::size_t>(p.n_servers))};
  const TypeSet desired{theta};

  for (const auto& [lambda, with_theta] : type_order(static_cast<std::uint32_t>(p.m), theta)) {
    const auto size = static_cast<std::int64_t>(lambda.size());
    Distribution pure;
    std::vector<std::uint32_t> start;
    if (size > 0) {
      pure = dist2(size, p);
      start = inicol(lambda, lambda, p, theta);
      for (std::size_t i = 0; i < pure.size(); ++i) {
        for (auto h : pure[i]) {
          SumSpec s{lambda, {}, std::nullopt, PureSumRef{lambda, h}};
          for (std::size_t r = 0; r < lambda.size(); ++r) {
            s.terms.push_back({lambda[r], static_cast<std::uint32_t>(start[r] + h - 1)});
          }
          plan.per_server[i].push_back(std::move(s));
        }
      }
    }

    Distribution desired_parts = dist2(size + 1, p);
    const std::uint32_t first = inicol(desired, with_theta, p, theta).front();
    Distribution parts = size > 0 ? dist1(size, p, pure) : Distribution(desired_parts.size());
    for (std::size_t i = 0; i < desired_parts.size(); ++i) {
      auto& des = desired_parts[i];
      auto& inter = parts[i];
      std::sort(des.begin(), des.end());
      std::sort(inter.begin(), inter.end());
      if (size > 0 && inter.size() != des.size()) {
        fail(ErrorCode::kInternalInvariant, "interference and desired parts differ in count");
      }
      for (std::size_t c = 0; c < des.size(); ++c) {
        const auto column = static_cast<std::uint32_t>(first + des[c] - 1);
        SumSpec s{with_theta, {}, column, std::nullopt};
        s.terms.push_back({theta, column});
        if (size > 0) {
          s.interference = PureSumRef{lambda, inter[c]};
          for (std::size_t r = 0; r < lambda.size(); ++r) {
            s.terms.push_back({lambda[r], static_cast<std::uint32_t>(start[r] + inter[c] - 1)});
          }
          std::sort(s.terms.begin(), s.terms.end());
        }
        plan.per_server[i].push_back(std::move(s));
      }
    }
  }
  return plan;
}

namespace {

WireSum to_wire(const SumSpec& s, const Permutations& perms) {
  WireSum w;
  w.terms.reserve(s.terms.size());
  for (const auto& t : s.terms) w.terms.push_back({t.record, perms.position(t.record, t.column)});
  return w;
}

}  // namespace

CanonicalQuery canonicalize(const QueryPlan& plan, std::size_t server) {
  return canonicalize(plan, plan.perms, server);
}

CanonicalQuery canonicalize(const QueryPlan& plan, const Permutations& perms, std::size_t server) {
  const auto& sums = plan.per_server.at(server);
  std::vector<WireSum> wire;
  wire.reserve(sums.size());
  for (const auto& s : sums) wire.push_back(to_wire(s, perms));

  // Order by record set first, then by positions.
  auto key = [&](std::size_t i) {
    std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> k;
    for (const auto& t : wire[i].terms) {
      k.first.push_back(t.record);
      k.second.push_back(t.position);
    }
    return k;
  };
  std::vector<std::size_t> order(wire.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> keys;
  keys.reserve(wire.size());
  for (std::size_t i = 0; i < wire.size(); ++i) keys.push_back(key(i));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

  CanonicalQuery out;
  out.plan_index = order;
  out.query.sums.reserve(wire.size());
  for (auto i : order) out.query.sums.push_back(std::move(wire[i]));
  return out;
}

WireQuery emission_order_query(const QueryPlan& plan, const Permutations& perms, std::size_t server) {
  WireQuery q;
  for (const auto& s : plan.per_server.at(server)) q.sums.push_back(to_wire(s, perms));
  return q;
}

}  // namespace cpir
