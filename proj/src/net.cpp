// SPDX-License-Identifier: Apache-2.0

#include "cpir/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <memory>

namespace cpir::net {

namespace {

std::string errno_text() { return std::strerror(errno); }

void write_all(int fd, std::span<const std::uint8_t> bytes) {
  std::size_t off = 0;
  while (off < bytes.size()) {
    const ssize_t w = ::send(fd, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
    if (w < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::kIoError, "send failed: " + errno_text());
    }
    off += static_cast<std::size_t>(w);
  }
}

}  // namespace

Endpoint Endpoint::parse(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    fail(ErrorCode::kBadArgument, "endpoint '" + text + "' is not host:port");
  }
  Endpoint ep;
  ep.host = text.substr(0, colon);
  const std::string port = text.substr(colon + 1);
  unsigned long v = 0;
  for (char c : port) {
    if (c < '0' || c > '9') fail(ErrorCode::kBadArgument, "bad port in '" + text + "'");
    v = v * 10 + static_cast<unsigned long>(c - '0');
    if (v > 65535) fail(ErrorCode::kBadArgument, "port out of range in '" + text + "'");
  }
  ep.port = static_cast<std::uint16_t>(v);
  return ep;
}

void send_frame(int fd, const wire::Frame& f) { write_all(fd, wire::encode_frame(f)); }

std::optional<wire::Frame> recv_frame(int fd, std::vector<std::uint8_t>& buffer) {
  std::uint8_t chunk[65536];
  while (true) {
    std::size_t consumed = 0;
    auto frame = wire::decode_frame(buffer, consumed);
    if (frame) {
      buffer.erase(buffer.begin(), buffer.begin() + static_cast<std::ptrdiff_t>(consumed));
      return frame;
    }
    const ssize_t r = ::recv(fd, chunk, sizeof chunk, 0);
    if (r == 0) {
      if (!buffer.empty()) fail(ErrorCode::kDecodeError, "connection closed mid-frame");
      return std::nullopt;
    }
    if (r < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::kIoError, "recv failed: " + errno_text());
    }
    buffer.insert(buffer.end(), chunk, chunk + r);
  }
}

int connect_raw(const Endpoint& ep) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(ep.port);
  if (::getaddrinfo(ep.host.c_str(), port.c_str(), &hints, &res) != 0) {
    fail(ErrorCode::kConnectError, "cannot resolve " + ep.str());
  }
  std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(res, ::freeaddrinfo);
  for (addrinfo* a = res; a != nullptr; a = a->ai_next) {
    const int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) {
      int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      return fd;
    }
    ::close(fd);
  }
  fail(ErrorCode::kConnectError, "cannot connect to " + ep.str() + ": " + errno_text());
}

Server::Server(ShareTable share, Field field, std::uint16_t port) : share_(std::move(share)), field_(field) {
  for (std::size_t j = 0; j < share_.rows.rows(); ++j)
    for (std::size_t t = 0; t < share_.rows.cols(); ++t)
      if (!field_.contains(share_.rows(j, t))) fail(ErrorCode::kBadArgument, "share value outside the field");

  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) fail(ErrorCode::kIoError, "socket: " + errno_text());
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listen_fd_, 64) != 0) {
    const std::string why = errno_text();
    ::close(listen_fd_);
    fail(ErrorCode::kIoError, "cannot listen on port " + std::to_string(port) + ": " + why);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

Server::~Server() {
  stop();
  for (auto& w : workers_)
    if (w.joinable()) w.join();
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void Server::stop() {
  if (stopping_.exchange(true)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  std::lock_guard lock(mu_);
  for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
}

void Server::run() {
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      if (stopping_) break;
      continue;
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    std::lock_guard lock(mu_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    open_fds_.insert(fd);
    // TODO: reap finished workers; this vector grows with every connection.
    workers_.emplace_back([this, fd] { handle(fd); });
  }
}

void Server::handle(int fd) {
  std::vector<std::uint8_t> buffer;
  try {
    auto hello = recv_frame(fd, buffer);
    if (!hello) throw Error(ErrorCode::kProtocolError, "closed before HELLO");
    if (hello->tag != wire::Tag::kHello) throw Error(ErrorCode::kProtocolError, "expected HELLO");
    const auto h = wire::decode_hello(hello->body);
    if (h.version != wire::kProtocolVersion) throw Error(ErrorCode::kProtocolError, "unsupported protocol version");
    if (h.server_id != server_id()) {
      throw Error(ErrorCode::kProtocolError, "this is server " + std::to_string(server_id()) + ", not " +
                                                 std::to_string(h.server_id));
    }
    send_frame(fd, {wire::Tag::kHello, wire::encode_hello({wire::kProtocolVersion, server_id()})});
    while (auto f = recv_frame(fd, buffer)) {
      if (f->tag != wire::Tag::kQuery) throw Error(ErrorCode::kProtocolError, "expected QUERY");
      const WireQuery q = wire::decode_query(f->body);
      const WireAnswer a = answer(share_, q, field_);
      send_frame(fd, {wire::Tag::kAnswer, wire::encode_answer(a)});
    }
  } catch (const std::exception& e) {
    try {
      send_frame(fd, wire::error_frame(e.what()));
    } catch (const std::exception&) {
    }
  }
  std::lock_guard lock(mu_);
  open_fds_.erase(fd);
  ::close(fd);
}

Connection::Connection(const Endpoint& ep, std::uint16_t server_id) : server_id_(server_id) {
  try {
    fd_ = connect_raw(ep);
    auto reply = exchange({wire::Tag::kHello, wire::encode_hello({wire::kProtocolVersion, server_id})});
    if (reply.tag == wire::Tag::kError) {
      throw Error(ErrorCode::kConnectError, std::string(reply.body.begin(), reply.body.end()));
    }
    if (reply.tag != wire::Tag::kHello || wire::decode_hello(reply.body).server_id != server_id) {
      throw Error(ErrorCode::kConnectError, "unexpected handshake reply");
    }
  } catch (const Error& e) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
    fail(ErrorCode::kConnectError, "server " + std::to_string(server_id) + " (" + ep.str() + "): " + e.what());
  }
}

Connection::~Connection() {
  if (fd_ >= 0) ::close(fd_);
}

wire::Frame Connection::exchange(const wire::Frame& f) {
  send_frame(fd_, f);
  auto reply = recv_frame(fd_, buffer_);
  if (!reply) fail(ErrorCode::kIoError, "server " + std::to_string(server_id_) + " closed the connection");
  return *reply;
}

WireAnswer Connection::query(const WireQuery& q) {
  auto reply = exchange({wire::Tag::kQuery, wire::encode_query(q)});
  if (reply.tag == wire::Tag::kError) {
    fail(ErrorCode::kProtocolError, "server " + std::to_string(server_id_) + ": " +
                                        std::string(reply.body.begin(), reply.body.end()));
  }
  if (reply.tag != wire::Tag::kAnswer) fail(ErrorCode::kProtocolError, "expected ANSWER");
  return wire::decode_answer(reply.body);
}

Transcript remote_retrieve(const std::vector<Endpoint>& endpoints, std::uint32_t theta, std::uint64_t seed,
                           const SchemeParams& p, const Generator& g) {
  if (endpoints.size() != static_cast<std::size_t>(p.n_servers)) {
    fail(ErrorCode::kBadArgument, "need " + std::to_string(p.n_servers) + " server endpoints, got " +
                                      std::to_string(endpoints.size()));
  }
  // Connect to everyone before sending any query; no partial retrievals.
  std::vector<std::unique_ptr<Connection>> conns;
  for (std::size_t i = 0; i < endpoints.size(); ++i) {
    conns.push_back(std::make_unique<Connection>(endpoints[i], static_cast<std::uint16_t>(i + 1)));
  }
  return run_retrieval(theta, seed, p, g, [&](std::size_t server, const WireQuery& q) {
    WireAnswer a = conns[server]->query(q);
    for (auto v : a.values)
      if (!g.field().contains(v)) fail(ErrorCode::kProtocolError, "answer value outside the field");
    return a;
  });
}

}  // namespace cpir::net
