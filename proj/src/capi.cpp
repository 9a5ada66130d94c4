// SPDX-License-Identifier: Apache-2.0

#include "cpir/cpir.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "cpir/audit.hpp"
#include "cpir/golden.hpp"
#include "cpir/io.hpp"
#include "cpir/net.hpp"
#include "cpir/scheme.hpp"

#ifndef CPIR_GOLDEN_DIR
#define CPIR_GOLDEN_DIR "data/golden"
#endif

struct cpir_scheme {
  cpir::Scheme s;
};

struct cpir_database {
  cpir::Scheme s;
  cpir::Database db;
};

struct cpir_transcript {
  cpir::Transcript t;
};

namespace {

thread_local std::string last_error;

template <typename F>
cpir_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return CPIR_OK;
  } catch (const cpir::Error& e) {
    last_error = e.what();
    return static_cast<cpir_status>(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return CPIR_UNKNOWN;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) cpir::fail(cpir::ErrorCode::kBadArgument, std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

cpir::io::json report_doc(const cpir::Report& r) {
  return {{"pass", r.all_pass()}, {"checks", cpir::io::report_to_json(r)}};
}

void emit_report(const cpir::Report& r, int* pass, char** out) {
  if (pass) *pass = r.all_pass() ? 1 : 0;
  if (out) *out = dup_string(report_doc(r).dump());
}

void same_shape(const cpir::Scheme& a, const cpir::Scheme& b) {
  if (a.params.m != b.params.m || a.params.n_servers != b.params.n_servers || a.params.k_code != b.params.k_code ||
      !(a.field == b.field)) {
    cpir::fail(cpir::ErrorCode::kDimError, "scheme and database disagree on (M, N, K, p)");
  }
}

}  // namespace

extern "C" {

const char* cpir_status_name(cpir_status s) {
  if (s == CPIR_UNKNOWN) return "Unknown";
  return cpir::error_code_name(static_cast<cpir::ErrorCode>(s));
}

const char* cpir_last_error(void) { return last_error.c_str(); }

void cpir_string_free(char* s) { std::free(s); }

cpir_status cpir_scheme_new(int64_t m, int64_t n, int64_t k, uint64_t modulus, cpir_scheme** out) {
  return guard([&] {
    need(out, "out");
    std::optional<std::uint64_t> mod;
    if (modulus != 0) mod = modulus;
    *out = new cpir_scheme{cpir::make_scheme(m, n, k, mod)};
  });
}

cpir_status cpir_scheme_load(const char* path, cpir_scheme** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new cpir_scheme{cpir::io::scheme_from_json(cpir::io::read_file(path))};
  });
}

void cpir_scheme_free(cpir_scheme* s) { delete s; }

cpir_status cpir_scheme_params_json(const cpir_scheme* s, char** out) {
  return guard([&] {
    need(s, "scheme");
    need(out, "out");
    *out = dup_string(cpir::io::scheme_to_json(s->s).dump());
  });
}

cpir_status cpir_scheme_save(const cpir_scheme* s, const char* path) {
  return guard([&] {
    need(s, "scheme");
    need(path, "path");
    cpir::io::write_file(path, cpir::io::scheme_to_json(s->s));
  });
}

cpir_status cpir_scheme_verify(const cpir_scheme* s, int* pass, char** report_json) {
  return guard([&] {
    need(s, "scheme");
    emit_report(cpir::verify_constraints(s->s.params), pass, report_json);
  });
}

cpir_status cpir_database_generate(const cpir_scheme* s, uint64_t seed, cpir_database** out) {
  return guard([&] {
    need(s, "scheme");
    need(out, "out");
    const auto& p = s->s.params;
    auto db = cpir::random_database(s->s.field, static_cast<std::size_t>(p.m), static_cast<std::size_t>(p.k_code),
                                    static_cast<std::size_t>(p.ltilde), seed);
    *out = new cpir_database{s->s, std::move(db)};
  });
}

cpir_status cpir_database_load(const char* path, cpir_database** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    auto [scheme, db] = cpir::io::database_from_json(cpir::io::read_file(path));
    *out = new cpir_database{std::move(scheme), std::move(db)};
  });
}

void cpir_database_free(cpir_database* db) { delete db; }

cpir_status cpir_database_save(const cpir_database* db, const char* path) {
  return guard([&] {
    need(db, "database");
    need(path, "path");
    cpir::io::write_file(path, cpir::io::database_to_json(db->db, db->s));
  });
}

cpir_status cpir_database_write_shares(const cpir_database* db, const char* dir) {
  return guard([&] {
    need(db, "database");
    need(dir, "dir");
    for (const auto& share : cpir::encode(db->db, db->s.generator)) {
      cpir::io::write_file(std::string(dir) + "/share_" + std::to_string(share.server + 1) + ".json",
                           cpir::io::share_to_json(share, db->s.field));
    }
  });
}

cpir_status cpir_database_scheme(const cpir_database* db, cpir_scheme** out) {
  return guard([&] {
    need(db, "database");
    need(out, "out");
    *out = new cpir_scheme{db->s};
  });
}

cpir_status cpir_retrieve(const cpir_scheme* s, const cpir_database* db, uint32_t theta, uint64_t seed,
                          cpir_transcript** out) {
  return guard([&] {
    need(s, "scheme");
    need(db, "database");
    need(out, "out");
    same_shape(s->s, db->s);
    *out = new cpir_transcript{cpir::retrieve(db->db, theta, seed, s->s.params, s->s.generator)};
  });
}

cpir_status cpir_remote_retrieve(const cpir_scheme* s, const char* endpoints, uint32_t theta, uint64_t seed,
                                 cpir_transcript** out) {
  return guard([&] {
    need(s, "scheme");
    need(endpoints, "endpoints");
    need(out, "out");
    std::vector<cpir::net::Endpoint> eps;
    std::string text(endpoints);
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto comma = text.find(',', start);
      const auto end = comma == std::string::npos ? text.size() : comma;
      eps.push_back(cpir::net::Endpoint::parse(text.substr(start, end - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (eps.size() != static_cast<std::size_t>(s->s.params.n_servers)) {
      cpir::fail(cpir::ErrorCode::kBadArgument, "need exactly N endpoints");
    }
    *out = new cpir_transcript{cpir::net::remote_retrieve(eps, theta, seed, s->s.params, s->s.generator)};
  });
}

void cpir_transcript_free(cpir_transcript* t) { delete t; }

cpir_status cpir_transcript_json(const cpir_transcript* t, char** out) {
  return guard([&] {
    need(t, "transcript");
    need(out, "out");
    *out = dup_string(cpir::io::transcript_to_json(t->t).dump());
  });
}

cpir_status cpir_transcript_save(const cpir_transcript* t, const char* path) {
  return guard([&] {
    need(t, "transcript");
    need(path, "path");
    cpir::io::write_file(path, cpir::io::transcript_to_json(t->t));
  });
}

cpir_status cpir_transcript_metrics(const cpir_transcript* t, int* pass, char** report_json) {
  return guard([&] {
    need(t, "transcript");
    emit_report(cpir::metrics(t->t, t->t.params), pass, report_json);
  });
}

cpir_status cpir_transcript_matches(const cpir_transcript* t, const cpir_database* db, int* match) {
  return guard([&] {
    need(t, "transcript");
    need(db, "database");
    need(match, "match");
    const auto theta = t->t.theta;
    *match = theta >= 1 && theta <= db->db.records.size() && t->t.decoded == db->db.records[theta - 1] ? 1 : 0;
  });
}

cpir_status cpir_audit(const cpir_scheme* s, uint64_t seed, int* pass, char** report_json) {
  return guard([&] {
    need(s, "scheme");
    const auto result = cpir::audit(s->s.params, s->s.generator, seed);
    cpir::io::json ranks = cpir::io::json::object();
    bool ranks_pass = true;
    for (std::size_t t = 0; t < result.ranks.size(); ++t) {
      ranks["theta=" + std::to_string(t + 1)] = report_doc(result.ranks[t]);
      ranks_pass = ranks_pass && result.ranks[t].all_pass();
    }
    ranks["pass"] = ranks_pass;
    const cpir::io::json doc{{"ranks", std::move(ranks)},
                             {"privacy",
                              {{"mode", result.privacy_mode},
                               {"pass", result.privacy_pass},
                               {"checks", cpir::io::report_to_json(result.privacy)}}},
                             {"pass", result.pass()}};
    if (pass) *pass = result.pass() ? 1 : 0;
    if (report_json) *report_json = dup_string(doc.dump());
  });
}

cpir_status cpir_verify_examples(const char* dir, int* pass, char** report_json) {
  return guard([&] { emit_report(cpir::verify_examples(dir ? dir : CPIR_GOLDEN_DIR), pass, report_json); });
}

cpir_status cpir_serve(const char* share_path, uint16_t port, uint32_t expected_id, cpir_ready_fn ready,
                       void* user) {
  return guard([&] {
    need(share_path, "share_path");
    auto [share, field] = cpir::io::share_from_json(cpir::io::read_file(share_path));
    if (expected_id != 0 && share.server + 1 != expected_id) {
      cpir::fail(cpir::ErrorCode::kBadArgument, "share file belongs to server " + std::to_string(share.server + 1));
    }
    cpir::net::Server server(std::move(share), field, port);
    if (ready) ready(server.port(), user);
    server.run();
  });
}

}  // extern "C"
