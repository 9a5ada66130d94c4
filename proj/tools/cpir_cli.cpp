// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the engine only through the C API.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cpir/cpir.h"

namespace {

using json = nlohmann::json;

// Thrown after the C API reports an error; carries the exit status.
struct ApiFailure {
  cpir_status status;
};

void check(cpir_status s) {
  if (s != CPIR_OK) {
    std::cerr << "error: " << cpir_status_name(s) << ": " << cpir_last_error() << "\n";
    throw ApiFailure{s};
  }
}

struct SchemeDel {
  void operator()(cpir_scheme* p) const { cpir_scheme_free(p); }
};
struct DatabaseDel {
  void operator()(cpir_database* p) const { cpir_database_free(p); }
};
struct TranscriptDel {
  void operator()(cpir_transcript* p) const { cpir_transcript_free(p); }
};
using SchemePtr = std::unique_ptr<cpir_scheme, SchemeDel>;
using DatabasePtr = std::unique_ptr<cpir_database, DatabaseDel>;
using TranscriptPtr = std::unique_ptr<cpir_transcript, TranscriptDel>;

std::string take(char* s) {
  std::string out(s);
  cpir_string_free(s);
  return out;
}

// Prints "PASS|FAIL name detail" per check; returns overall pass.
bool print_checks(const json& checks) {
  bool all = true;
  for (const auto& [name, c] : checks.items()) {
    const bool pass = c.at("pass").get<bool>();
    all = all && pass;
    std::cout << (pass ? "PASS " : "FAIL ") << name;
    const auto detail = c.at("detail").get<std::string>();
    if (!detail.empty()) std::cout << "  " << detail;
    std::cout << "\n";
  }
  return all;
}

SchemePtr new_scheme(std::int64_t m, std::int64_t n, std::int64_t k, std::uint64_t p) {
  cpir_scheme* s = nullptr;
  check(cpir_scheme_new(m, n, k, p, &s));
  return SchemePtr(s);
}

// Metrics against theory, plus the decoded-record check when db is given.
int report_transcript(const cpir_transcript* t, const cpir_database* db, const std::string& out) {
  if (!out.empty()) check(cpir_transcript_save(t, out.c_str()));
  int pass = 0;
  char* raw = nullptr;
  check(cpir_transcript_metrics(t, &pass, &raw));
  bool ok = print_checks(json::parse(take(raw)).at("checks"));
  if (db != nullptr) {
    int match = 0;
    check(cpir_transcript_matches(t, db, &match));
    std::cout << (match ? "PASS decoded" : "FAIL decoded") << "\n";
    ok = ok && match;
  }
  return ok ? 0 : 1;
}

void on_ready(std::uint16_t port, void*) {
  std::cout << "listening " << port << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coded private information retrieval over MDS-coded servers"};
  app.require_subcommand(1);

  std::int64_t m = 0, n = 0, k = 0;
  std::uint64_t modulus = 0, seed = 0;
  std::uint32_t theta = 1;
  std::string out, db_path, params_path, share_path, servers, dir;
  std::uint16_t port = 0;
  std::uint32_t id = 0;

  auto add_mnk = [&](CLI::App* c) {
    c->add_option("M", m, "number of records")->required();
    c->add_option("N", n, "number of servers")->required();
    c->add_option("K", k, "code dimension")->required();
    c->add_option("--p", modulus, "prime field modulus (default: smallest prime above max(N,256))");
  };

  auto* params = app.add_subcommand("params", "print the scheme parameters as JSON");
  add_mnk(params);
  params->add_option("--out", out, "also write the JSON here");

  auto* setup = app.add_subcommand("setup", "generate a random database and the N share files");
  add_mnk(setup);
  setup->add_option("--seed", seed, "randomness seed; the database uses seed+1")->required();
  setup->add_option("--out", dir, "output directory")->required();

  auto* retrieve = app.add_subcommand("retrieve", "retrieve one record in-process");
  retrieve->add_option("--db", db_path, "database file")->required();
  retrieve->add_option("--params", params_path, "params file (default: Vandermonde scheme of the database)");
  retrieve->add_option("--theta", theta, "desired record, 1-based")->required();
  retrieve->add_option("--seed", seed, "permutation seed")->required();
  retrieve->add_option("--out", out, "transcript file");

  auto* audit = app.add_subcommand("audit", "rank and privacy audit");
  add_mnk(audit);
  audit->add_option("--seed", seed, "permutation seed");
  audit->add_option("--out", out, "also write the JSON report here");

  auto* verify = app.add_subcommand("verify-examples", "compare Examples 1-3 against the golden tables");
  verify->add_option("--dir", dir, "golden data directory");

  auto* serve = app.add_subcommand("serve", "serve one share over TCP");
  serve->add_option("--share", share_path, "share file")->required();
  serve->add_option("--port", port, "TCP port (0 picks one)")->required();
  serve->add_option("--id", id, "server id, 1-based; must match the share")->required();

  auto* client = app.add_subcommand("client", "retrieve one record from remote servers");
  client->add_option("--servers", servers, "host:port list, server 1 first")->required();
  client->add_option("--theta", theta, "desired record, 1-based")->required();
  client->add_option("--seed", seed, "permutation seed")->required();
  client->add_option("--params", params_path, "params file")->required();
  client->add_option("--out", out, "transcript file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (params->parsed()) {
      auto s = new_scheme(m, n, k, modulus);
      char* raw = nullptr;
      check(cpir_scheme_params_json(s.get(), &raw));
      std::cout << take(raw) << "\n";
      if (!out.empty()) check(cpir_scheme_save(s.get(), out.c_str()));
      int pass = 0;
      check(cpir_scheme_verify(s.get(), &pass, &raw));
      const auto report = json::parse(take(raw));
      if (!pass) {
        for (const auto& [name, c] : report.at("checks").items())
          if (!c.at("pass").get<bool>()) std::cerr << "FAIL " << name << "  " << c.at("detail").get<std::string>() << "\n";
      }
      return pass ? 0 : 1;
    }
    if (setup->parsed()) {
      auto s = new_scheme(m, n, k, modulus);
      std::filesystem::create_directories(dir);
      cpir_database* raw_db = nullptr;
      check(cpir_database_generate(s.get(), seed + 1, &raw_db));
      DatabasePtr db(raw_db);
      check(cpir_scheme_save(s.get(), (dir + "/params.json").c_str()));
      check(cpir_database_save(db.get(), (dir + "/database.json").c_str()));
      check(cpir_database_write_shares(db.get(), dir.c_str()));
      std::cout << "wrote params.json, database.json and " << n << " share files to " << dir << "\n";
      return 0;
    }
    if (retrieve->parsed()) {
      cpir_database* raw_db = nullptr;
      check(cpir_database_load(db_path.c_str(), &raw_db));
      DatabasePtr db(raw_db);
      cpir_scheme* raw_s = nullptr;
      if (params_path.empty()) {
        check(cpir_database_scheme(db.get(), &raw_s));
      } else {
        check(cpir_scheme_load(params_path.c_str(), &raw_s));
      }
      SchemePtr s(raw_s);
      cpir_transcript* raw_t = nullptr;
      check(cpir_retrieve(s.get(), db.get(), theta, seed, &raw_t));
      TranscriptPtr t(raw_t);
      return report_transcript(t.get(), db.get(), out);
    }
    if (audit->parsed()) {
      auto s = new_scheme(m, n, k, modulus);
      int pass = 0;
      char* raw = nullptr;
      check(cpir_audit(s.get(), seed, &pass, &raw));
      const auto text = take(raw);
      std::cout << json::parse(text).dump(2) << "\n";
      if (!out.empty()) {
        std::ofstream f(out);
        f << text << "\n";
      }
      return pass ? 0 : 1;
    }
    if (verify->parsed()) {
      int pass = 0;
      char* raw = nullptr;
      check(cpir_verify_examples(dir.empty() ? nullptr : dir.c_str(), &pass, &raw));
      const auto report = json::parse(take(raw));
      for (const auto& [name, c] : report.at("checks").items()) {
        if (c.at("pass").get<bool>()) {
          std::cout << "MATCH " << name << "\n";
        } else {
          std::cout << "MISMATCH " << name << "  " << c.at("detail").get<std::string>() << "\n";
        }
      }
      return pass ? 0 : 1;
    }
    if (serve->parsed()) {
      check(cpir_serve(share_path.c_str(), port, id, on_ready, nullptr));
      return 0;
    }
    if (client->parsed()) {
      cpir_scheme* raw_s = nullptr;
      check(cpir_scheme_load(params_path.c_str(), &raw_s));
      SchemePtr s(raw_s);
      cpir_transcript* raw_t = nullptr;
      check(cpir_remote_retrieve(s.get(), servers.c_str(), theta, seed, &raw_t));
      TranscriptPtr t(raw_t);
      return report_transcript(t.get(), nullptr, out);
    }
  } catch (const ApiFailure& f) {
    return static_cast<int>(f.status) == 0 ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
