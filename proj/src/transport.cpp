#include "tickcep/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "tickcep/error.hpp"
#include "tickcep/harness.hpp"
#include "tickcep/wire.hpp"

namespace tickcep {
namespace {

bool write_all(int fd, const std::uint8_t* data, std::size_t size) {
  while (size > 0) {
    const ssize_t n = ::send(fd, data, size, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    data += n;
    size -= static_cast<std::size_t>(n);
  }
  return true;
}

bool read_all(int fd, std::uint8_t* data, std::size_t size) {
  while (size > 0) {
    const ssize_t n = ::recv(fd, data, size, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    data += n;
    size -= static_cast<std::size_t>(n);
  }
  return true;
}

bool write_frame(int fd, std::span<const std::uint8_t> body) {
  std::uint8_t header[4];
  const auto len = static_cast<std::uint32_t>(body.size());
  for (int i = 0; i < 4; ++i) header[i] = static_cast<std::uint8_t>(len >> (8 * i));
  return write_all(fd, header, 4) && write_all(fd, body.data(), body.size());
}

// False on EOF, I/O error or an oversized frame.
bool read_frame(int fd, std::vector<std::uint8_t>& body) {
  std::uint8_t header[4];
  if (!read_all(fd, header, 4)) return false;
  std::uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len |= static_cast<std::uint32_t>(header[i]) << (8 * i);
  if (len > wire::kMaxFrameBytes) return false;
  body.resize(len);
  return read_all(fd, body.data(), len);
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

}  // namespace

std::vector<std::uint8_t> LoopbackChannel::call(std::span<const std::uint8_t> request) {
  return harness_.handle(request);
}

Endpoint Endpoint::parse(std::string_view text) {
  Endpoint endpoint;
  const auto colon = text.rfind(':');
  const auto host = text.substr(0, colon);
  if (!host.empty()) endpoint.host = std::string(host);
  if (colon != std::string_view::npos) {
    const auto port = text.substr(colon + 1);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
    if (ec != std::errc{} || ptr != port.data() + port.size() || value > 65535) {
      throw Error(Errc::BadConfig, fmt::format("bad port in '{}'", text));
    }
    endpoint.port = static_cast<std::uint16_t>(value);
  }
  return endpoint;
}

std::string Endpoint::str() const { return fmt::format("{}:{}", host, port); }

TcpChannel TcpChannel::connect(const Endpoint& endpoint) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* results = nullptr;
  const auto service = std::to_string(endpoint.port);
  if (const int rc = ::getaddrinfo(endpoint.host.c_str(), service.c_str(), &hints, &results); rc != 0) {
    throw Error(Errc::ConnectionFailed, fmt::format("{}: {}", endpoint.str(), ::gai_strerror(rc)));
  }
  int fd = -1;
  int last_errno = 0;
  for (auto* ai = results; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    last_errno = errno;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(results);
  if (fd < 0) {
    throw Error(Errc::ConnectionFailed, fmt::format("{}: {}", endpoint.str(), std::strerror(last_errno)));
  }
  set_nodelay(fd);
  return TcpChannel(fd);
}

TcpChannel::TcpChannel(TcpChannel&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}

TcpChannel& TcpChannel::operator=(TcpChannel&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

TcpChannel::~TcpChannel() {
  if (fd_ >= 0) ::close(fd_);
}

std::vector<std::uint8_t> TcpChannel::call(std::span<const std::uint8_t> request) {
  std::vector<std::uint8_t> response;
  if (!write_frame(fd_, request) || !read_frame(fd_, response)) {
    throw Error(Errc::ConnectionFailed, "connection to harness lost");
  }
  return response;
}

TcpServer::TcpServer(Harness& harness, const Endpoint& bind) : harness_(harness) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw Error(Errc::ConnectionFailed, std::strerror(errno));
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(bind.port);
  if (::inet_pton(AF_INET, bind.host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw Error(Errc::BadConfig, fmt::format("bind address must be IPv4: {}", bind.host));
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(listen_fd_, 64) != 0) {
    const std::string reason = std::strerror(errno);
    ::close(listen_fd_);
    throw Error(Errc::ConnectionFailed, fmt::format("{}: {}", bind.str(), reason));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpServer::~TcpServer() {
  stop(true);
  workers_.clear();
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void TcpServer::run() {
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      if (stopping_) break;
      spdlog::error("accept failed: {}", std::strerror(errno));
      break;
    }
    set_nodelay(fd);
    std::lock_guard lock(mutex_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    connections_.push_back(fd);
    workers_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void TcpServer::stop(bool drain) {
  if (stopping_.exchange(true)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  if (drain) return;
  std::lock_guard lock(mutex_);
  for (const int fd : connections_) ::shutdown(fd, SHUT_RDWR);
}

void TcpServer::serve_connection(int fd) {
  std::vector<std::uint8_t> request;
  while (read_frame(fd, request)) {
    const auto response = harness_.handle(request);
    if (!write_frame(fd, response)) break;
  }
  std::lock_guard lock(mutex_);
  std::erase(connections_, fd);
  ::close(fd);
}

}  // namespace tickcep
