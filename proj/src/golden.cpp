// SPDX-License-Identifier: Apache-2.0

#include "cpir/golden.hpp"

#include <algorithm>

#include "cpir/io.hpp"
#include "cpir/protocol.hpp"
#include "cpir/scheme.hpp"

namespace cpir {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : " ") + s;
  return out;
}

// Mismatch descriptions for one golden table; empty when it matches.
std::vector<std::string> check_table(const io::json& t) {
  std::vector<std::string> bad;
  const auto m = t.at("M").get<std::int64_t>();
  const auto theta = t.at("theta").get<std::uint32_t>();
  const Scheme s = make_scheme(m, t.at("N").get<std::int64_t>(), t.at("K").get<std::int64_t>());
  const auto& p = s.params;
  const auto tag = "theta=" + std::to_string(theta) + ": ";

  const Rational rate{t.at("rate")[0].get<std::int64_t>(), t.at("rate")[1].get<std::int64_t>()};
  if (p.l != t.at("L").get<std::int64_t>()) bad.push_back(tag + "L " + std::to_string(p.l));
  if (p.download != t.at("D").get<std::int64_t>()) bad.push_back(tag + "D " + std::to_string(p.download));
  if (p.omega != t.at("omega").get<std::int64_t>()) bad.push_back(tag + "omega " + std::to_string(p.omega));
  if (!(p.capacity == rate)) bad.push_back(tag + "capacity " + p.capacity.str());
  if (p.alpha != t.at("alpha").get<std::vector<std::int64_t>>()) bad.push_back(tag + "alpha");
  if (p.beta != t.at("beta").get<std::vector<std::int64_t>>()) bad.push_back(tag + "beta");

  const auto ident = Permutations::identity(static_cast<std::size_t>(m), static_cast<std::size_t>(p.ltilde));
  const auto rendered = render_plan(build_plan(theta, p, ident));
  const auto want = t.at("servers").get<std::vector<std::vector<std::string>>>();
  if (rendered.size() != want.size()) {
    bad.push_back(tag + "server count");
  } else {
    for (std::size_t i = 0; i < want.size(); ++i) {
      auto a = rendered[i], b = want[i];
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) bad.push_back(tag + "server " + std::to_string(i + 1) + " has [" + join(rendered[i]) + "]");
    }
  }

  const auto db = random_database(s.field, static_cast<std::size_t>(m), static_cast<std::size_t>(p.k_code),
                                  static_cast<std::size_t>(p.ltilde), 1);
  const Transcript tr = retrieve(db, theta, 0, p, s.generator);
  if (!(tr.decoded == db.records[theta - 1])) bad.push_back(tag + "decoded record differs");
  const Metrics obs = observe_metrics(tr);
  if (obs.l != p.l || obs.download != p.download || obs.omega != p.omega || !(obs.rate == rate)) {
    bad.push_back(tag + "observed metrics differ");
  }
  return bad;
}

}  // namespace

std::vector<std::vector<std::string>> render_plan(const QueryPlan& plan) {
  std::vector<std::vector<std::string>> out;
  for (const auto& server : plan.per_server) {
    std::vector<std::string> sums;
    for (const auto& s : server) {
      std::string text;
      for (const auto& t : s.terms) {
        if (!text.empty()) text += '+';
        text += static_cast<char>('a' + t.record - 1);
        text += std::to_string(t.column);
      }
      sums.push_back(std::move(text));
    }
    out.push_back(std::move(sums));
  }
  return out;
}

Report verify_examples(const std::string& dir) {
  Report r;
  for (int e = 1; e <= 3; ++e) {
    const auto name = "example" + std::to_string(e);
    std::vector<std::string> bad;
    try {
      const auto j = io::read_file(dir + "/" + name + ".json");
      for (const auto& t : j.at("tables")) {
        auto b = check_table(t);
        bad.insert(bad.end(), b.begin(), b.end());
      }
    } catch (const std::exception& ex) {
      bad.push_back(ex.what());
    }
    std::string detail;
    for (const auto& b : bad) detail += (detail.empty() ? "" : "; ") + b;
    r.add(name, bad.empty(), detail);
  }
  return r;
}

}  // namespace cpir
