// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <thread>

#include <unistd.h>

#include "cpir/error.hpp"
#include "cpir/io.hpp"
#include "cpir/net.hpp"
#include "cpir/rng.hpp"
#include "cpir/scheme.hpp"
#include "cpir/wire.hpp"

using namespace cpir;
using Bytes = std::vector<std::uint8_t>;

namespace {

// N in-process servers on ephemeral ports, each on its own accept thread.
struct Cluster {
  std::vector<std::unique_ptr<net::Server>> servers;
  std::vector<std::thread> threads;

  Cluster(const Database& db, const Scheme& s) {
    for (auto& share : encode(db, s.generator)) servers.push_back(std::make_unique<net::Server>(share, s.field, 0));
    for (auto& srv : servers) threads.emplace_back([p = srv.get()] { p->run(); });
  }
  ~Cluster() {
    for (auto& srv : servers) srv->stop();
    for (auto& t : threads) t.join();
  }
  std::vector<net::Endpoint> endpoints() const {
    std::vector<net::Endpoint> out;
    for (const auto& srv : servers) out.push_back({"127.0.0.1", srv->port()});
    return out;
  }
};

Database db_for(const Scheme& s, std::uint64_t seed) {
  return random_database(s.field, static_cast<std::size_t>(s.params.m), static_cast<std::size_t>(s.params.k_code),
                         static_cast<std::size_t>(s.params.ltilde), seed);
}

}  // namespace

TEST_CASE("query encoding") {
  CHECK(wire::encode_query(WireQuery{}) == Bytes{0, 0, 0, 0});
  CHECK(wire::encode_query(WireQuery{{WireSum{{{1, 0}}}}}) == Bytes{0, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0});
  CHECK(wire::encode_query(WireQuery{{WireSum{{{2, 0x01020304}}}}}) == Bytes{0, 0, 0, 1, 0, 1, 0, 2, 1, 2, 3, 4});

  try {
    wire::encode_query(WireQuery{{WireSum{{{70000, 0}}}}});
    FAIL("expected EncodeError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEncodeError);
  }
  CHECK_THROWS_AS(wire::decode_query(Bytes{0, 0, 0, 1, 0, 1}), Error);
  CHECK_THROWS_AS(wire::decode_query(Bytes{0, 0, 0, 0, 9}), Error);

  const Scheme s = make_scheme(3, 3, 2);
  const auto plan = build_plan(1, s.params, gen_permutations(5, 3, 9));
  for (std::size_t i = 0; i < 3; ++i) {
    const auto q = canonicalize(plan, i).query;
    const auto bytes = wire::encode_query(q);
    CHECK(wire::decode_query(bytes) == q);
    CHECK(wire::encode_query(wire::decode_query(bytes)) == bytes);
  }
}

TEST_CASE("wire round trips on 500 random queries and answers") {
  Rng rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    WireQuery q;
    const auto sums = rng.below(20);
    for (std::uint64_t s = 0; s < sums; ++s) {
      WireSum sum;
      const auto terms = 1 + rng.below(5);
      for (std::uint64_t t = 0; t < terms; ++t)
        sum.terms.push_back({static_cast<std::uint32_t>(1 + rng.below(65535)), static_cast<std::uint32_t>(rng.next())});
      q.sums.push_back(sum);
    }
    REQUIRE(wire::decode_query(wire::encode_query(q)) == q);

    WireAnswer a;
    for (std::uint64_t s = 0; s < sums; ++s) a.values.push_back(rng.next());
    REQUIRE(wire::decode_answer(wire::encode_answer(a)) == a);
  }
}

TEST_CASE("frames") {
  const wire::Frame f{wire::Tag::kQuery, {9, 8, 7}};
  const auto bytes = wire::encode_frame(f);
  CHECK(bytes == Bytes{0, 0, 0, 4, 2, 9, 8, 7});
  std::size_t used = 0;
  const auto back = wire::decode_frame(bytes, used);
  REQUIRE(back.has_value());
  CHECK(used == bytes.size());
  CHECK(back->tag == wire::Tag::kQuery);
  CHECK(back->body == f.body);

  CHECK_FALSE(wire::decode_frame(std::span(bytes).first(5), used).has_value());
  CHECK_THROWS_AS(wire::decode_frame(Bytes{0, 0, 0, 1, 0x55}, used), Error);
  CHECK_THROWS_AS(wire::decode_frame(Bytes{0, 0, 0, 0, 1}, used), Error);

  CHECK(wire::decode_hello(wire::encode_hello({1, 513})) == wire::Hello{1, 513});
  CHECK(wire::encode_hello({1, 513}) == Bytes{1, 2, 1});
}

TEST_CASE("server behaviour") {
  const Scheme s = make_scheme(2, 3, 2);
  const Database db = db_for(s, 3);
  Cluster c(db, s);
  const auto eps = c.endpoints();

  SUBCASE("mismatched HELLO id gets an ERROR frame") {
    const int fd = net::connect_raw(eps[1]);
    net::send_frame(fd, {wire::Tag::kHello, wire::encode_hello({1, 3})});
    std::vector<std::uint8_t> buf;
    const auto reply = net::recv_frame(fd, buf);
    REQUIRE(reply.has_value());
    CHECK(reply->tag == wire::Tag::kError);
    CHECK_FALSE(net::recv_frame(fd, buf).has_value());
    ::close(fd);
  }

  SUBCASE("answers match the in-process path") {
    const auto plan = build_plan(1, s.params, Permutations::identity(2, 3));
    const auto q = canonicalize(plan, 1).query;
    net::Connection conn(eps[1], 2);
    const auto remote = conn.query(q);
    CHECK(remote.values.size() == 3);
    CHECK(remote == answer(encode(db, s.generator)[1], q, s.field));
    CHECK(conn.query(WireQuery{}).values.empty());
  }

  SUBCASE("malformed QUERY gets an ERROR frame and the connection closes") {
    net::Connection conn(eps[0], 1);
    const auto reply = conn.exchange({wire::Tag::kQuery, {0, 0, 0, 1}});
    CHECK(reply.tag == wire::Tag::kError);
    CHECK_THROWS_AS(conn.query(WireQuery{}), Error);
  }

  SUBCASE("out-of-range term gets an ERROR frame") {
    net::Connection conn(eps[0], 1);
    const auto reply = conn.exchange({wire::Tag::kQuery, wire::encode_query(WireQuery{{WireSum{{{1, 3}}}}})});
    CHECK(reply.tag == wire::Tag::kError);
  }

  SUBCASE("interleaved clients see the answers a serial client sees") {
    const auto perms = gen_permutations(8, 2, 3);
    const auto q1 = canonicalize(build_plan(1, s.params, perms), 2).query;
    const auto q2 = canonicalize(build_plan(2, s.params, perms), 2).query;
    net::Connection a(eps[2], 3), b(eps[2], 3);
    const auto a1 = a.query(q1);
    const auto b2 = b.query(q2);
    const auto b1 = b.query(q1);
    const auto a2 = a.query(q2);
    CHECK(a1 == b1);
    CHECK(a2 == b2);
    const auto share = encode(db, s.generator)[2];
    CHECK(a1 == answer(share, q1, s.field));
    CHECK(a2 == answer(share, q2, s.field));
  }
}

TEST_CASE("remote_retrieve equals in-process retrieve") {
  for (auto [m, n, k] : {std::tuple{2, 3, 2}, {3, 4, 2}, {2, 5, 3}}) {
    const Scheme s = make_scheme(m, n, k);
    const Database db = db_for(s, 12);
    Cluster c(db, s);
    for (std::uint32_t theta = 1; theta <= static_cast<std::uint32_t>(m); ++theta) {
      const auto local = io::transcript_to_json(retrieve(db, theta, 1234, s.params, s.generator)).dump();
      const auto remote = io::transcript_to_json(net::remote_retrieve(c.endpoints(), theta, 1234, s.params, s.generator)).dump();
      CHECK(local == remote);
      const auto again = io::transcript_to_json(net::remote_retrieve(c.endpoints(), theta, 1234, s.params, s.generator)).dump();
      CHECK(again == remote);
    }
  }
}

TEST_CASE("unreachable server is named") {
  const Scheme s = make_scheme(2, 3, 2);
  const Database db = db_for(s, 1);
  Cluster c(db, s);
  auto eps = c.endpoints();
  c.servers[1]->stop();
  c.threads[1].join();
  c.threads[1] = std::thread([] {});
  try {
    net::remote_retrieve(eps, 1, 1, s.params, s.generator);
    FAIL("expected ConnectError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConnectError);
    CHECK(std::string(e.what()).find("server 2") != std::string::npos);
  }
}

TEST_CASE("endpoint parsing") {
  const auto ep = net::Endpoint::parse("localhost:8080");
  CHECK(ep.host == "localhost");
  CHECK(ep.port == 8080);
  CHECK_THROWS_AS(net::Endpoint::parse("nope"), Error);
  CHECK_THROWS_AS(net::Endpoint::parse("h:99999"), Error);
}
