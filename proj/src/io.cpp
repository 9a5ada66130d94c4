// SPDX-License-Identifier: Apache-2.0

#include "cpir/io.hpp"

#include <fstream>
#include <sstream>

namespace cpir::io {

namespace {

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(std::vector<Elem>(m.row(r).begin(), m.row(r).end()));
  return rows;
}

Matrix matrix_from_rows(const Field& f, const json& rows, const std::string& what) {
  if (!rows.is_array()) fail(ErrorCode::kBadArgument, what + " must be an array of rows");
  std::vector<std::vector<Elem>> data;
  for (const auto& r : rows) {
    std::vector<Elem> row = r.get<std::vector<Elem>>();
    for (auto v : row)
      if (!f.contains(v)) fail(ErrorCode::kBadArgument, what + " holds a value outside the field");
    data.push_back(std::move(row));
  }
  return Matrix::from_rows(f, data);
}

template <typename T>
T field_of(const json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorCode::kBadArgument, std::string("missing \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCode::kBadArgument, std::string("bad \"") + key + "\": " + e.what());
  }
}

}  // namespace

json scheme_to_json(const Scheme& s) {
  const auto& p = s.params;
  return json{{"M", p.m},
              {"N", p.n_servers},
              {"K", p.k_code},
              {"d", p.d},
              {"n", p.n},
              {"k", p.k},
              {"Ltilde", p.ltilde},
              {"L", p.l},
              {"alpha", p.alpha},
              {"beta", p.beta},
              {"D", p.download},
              {"omega", p.omega},
              {"capacity", {p.capacity.num, p.capacity.den}},
              {"p", s.field.modulus()},
              {"generator", matrix_rows(s.generator.matrix())}};
}

Scheme scheme_from_json(const json& j) {
  const auto m = field_of<std::int64_t>(j, "M");
  const auto n = field_of<std::int64_t>(j, "N");
  const auto k = field_of<std::int64_t>(j, "K");
  std::optional<std::uint64_t> modulus;
  if (j.contains("p")) modulus = field_of<std::uint64_t>(j, "p");
  std::optional<Matrix> g;
  if (j.contains("generator")) {
    const Field f(modulus.value_or(default_modulus(n)));
    g = matrix_from_rows(f, j.at("generator"), "generator");
  }
  return make_scheme(m, n, k, modulus, std::move(g));
}

json database_to_json(const Database& db, const Scheme& s) {
  json records = json::array();
  for (const auto& w : db.records) records.push_back(matrix_rows(w));
  return json{{"p", s.field.modulus()},
              {"M", s.params.m},
              {"N", s.params.n_servers},
              {"K", s.params.k_code},
              {"Ltilde", s.params.ltilde},
              {"records", std::move(records)}};
}

std::pair<Scheme, Database> database_from_json(const json& j) {
  Scheme s = make_scheme(field_of<std::int64_t>(j, "M"), field_of<std::int64_t>(j, "N"),
                         field_of<std::int64_t>(j, "K"), field_of<std::uint64_t>(j, "p"));
  if (field_of<std::int64_t>(j, "Ltilde") != s.params.ltilde) {
    fail(ErrorCode::kDimError, "stored Ltilde does not match n^{M-1}");
  }
  const json& recs = j.at("records");
  if (!recs.is_array() || recs.size() != static_cast<std::size_t>(s.params.m)) {
    fail(ErrorCode::kDimError, "database must hold exactly M records");
  }
  Database db;
  for (const auto& r : recs) {
    Matrix w = matrix_from_rows(s.field, r, "record");
    if (w.rows() != static_cast<std::size_t>(s.params.k_code) || w.cols() != static_cast<std::size_t>(s.params.ltilde)) {
      fail(ErrorCode::kDimError, "record must be K x Ltilde");
    }
    db.records.push_back(std::move(w));
  }
  return {std::move(s), std::move(db)};
}

json share_to_json(const ShareTable& share, const Field& field) {
  return json{{"server", share.server + 1}, {"p", field.modulus()}, {"rows", matrix_rows(share.rows)}};
}

std::pair<ShareTable, Field> share_from_json(const json& j) {
  const Field f(field_of<std::uint64_t>(j, "p"));
  const auto server = field_of<std::size_t>(j, "server");
  if (server < 1) fail(ErrorCode::kBadArgument, "server ids are 1-based");
  return {ShareTable{server - 1, matrix_from_rows(f, j.at("rows"), "rows")}, f};
}

json transcript_to_json(const Transcript& t) {
  json queries = json::array();
  for (const auto& q : t.queries) {
    json sums = json::array();
    for (const auto& s : q.sums) {
      json terms = json::array();
      for (const auto& term : s.terms) terms.push_back({term.record, term.position});
      sums.push_back(std::move(terms));
    }
    queries.push_back(std::move(sums));
  }
  json answers = json::array();
  for (const auto& a : t.answers) answers.push_back(a.values);
  return json{{"theta", t.theta},
              {"seed", t.seed},
              {"queries", std::move(queries)},
              {"answers", std::move(answers)},
              {"decoded", matrix_rows(t.decoded)},
              {"metrics",
               {{"L", t.metrics.l},
                {"D", t.metrics.download},
                {"omega", t.metrics.omega},
                {"rate", {t.metrics.rate.num, t.metrics.rate.den}}}}};
}

json report_to_json(const Report& r) {
  json out = json::object();
  for (const auto& c : r.checks) out[c.name] = {{"pass", c.pass}, {"detail", c.detail}};
  return out;
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::kIoError, path + ": " + e.what());
  }
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path);
  out << j.dump() << '\n';
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path);
}

}  // namespace cpir::io
