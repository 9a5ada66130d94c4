// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "cpir/protocol.hpp"
#include "cpir/wire.hpp"

namespace cpir::net {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;

  /// "host:port"; throws kBadArgument.
  static Endpoint parse(const std::string& text);
  std::string str() const { return host + ":" + std::to_string(port); }
};

/// A coded storage server answering QUERY frames against one share.
/// Stateless between queries; every connection runs on its own thread.
class Server {
 public:
  /// Binds immediately; port 0 picks an ephemeral port.
  Server(ShareTable share, Field field, std::uint16_t port);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  std::uint16_t server_id() const noexcept { return static_cast<std::uint16_t>(share_.server + 1); }

  /// Accept loop; returns after stop().
  void run();
  void stop();

 private:
  void handle(int fd);

  ShareTable share_;
  Field field_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::mutex mu_;
  std::set<int> open_fds_;
  std::vector<std::thread> workers_;
};

/// Client side of one server connection: HELLO on connect, then QUERY/ANSWER.
class Connection {
 public:
  /// Throws kConnectError naming `server_id` on failure.
  Connection(const Endpoint& ep, std::uint16_t server_id);
  ~Connection();
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;

  WireAnswer query(const WireQuery& q);
  /// Sends an arbitrary frame and waits for the reply frame.
  wire::Frame exchange(const wire::Frame& f);

 private:
  int fd_ = -1;
  std::uint16_t server_id_;
  std::vector<std::uint8_t> buffer_;
};

/// Opens a raw TCP connection without any handshake; for tests and tools.
int connect_raw(const Endpoint& ep);
void send_frame(int fd, const wire::Frame& f);
/// Blocks for the next frame; nullopt on orderly EOF.
std::optional<wire::Frame> recv_frame(int fd, std::vector<std::uint8_t>& buffer);

/// Retrieval with the N servers reachable at `endpoints` (server i at
/// endpoints[i]). Throws kConnectError naming the first unreachable server.
Transcript remote_retrieve(const std::vector<Endpoint>& endpoints, std::uint32_t theta, std::uint64_t seed,
                           const SchemeParams& p, const Generator& g);

}  // namespace cpir::net
