#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace tickcep {

class Harness;

/// Request/response exchange of frame bodies.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual std::vector<std::uint8_t> call(std::span<const std::uint8_t> request) = 0;
};

/// In-process channel straight into a Harness; still goes through the codec.
class LoopbackChannel final : public Channel {
 public:
  explicit LoopbackChannel(Harness& harness) : harness_(harness) {}
  std::vector<std::uint8_t> call(std::span<const std::uint8_t> request) override;

 private:
  Harness& harness_;
};

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 5023;

  /// "host:port", "host" or ":port". Throws Error(BadConfig).
  static Endpoint parse(std::string_view text);
  std::string str() const;
};

/// Client side of the TCP transport: each frame is a u32 little-endian body
/// length followed by the body.
class TcpChannel final : public Channel {
 public:
  /// Throws Error(ConnectionFailed).
  static TcpChannel connect(const Endpoint& endpoint);

  TcpChannel(TcpChannel&& other) noexcept;
  TcpChannel& operator=(TcpChannel&& other) noexcept;
  TcpChannel(const TcpChannel&) = delete;
  TcpChannel& operator=(const TcpChannel&) = delete;
  ~TcpChannel() override;

  std::vector<std::uint8_t> call(std::span<const std::uint8_t> request) override;

 private:
  explicit TcpChannel(int fd) : fd_(fd) {}
  int fd_ = -1;
};

/// Serves a Harness over TCP, one thread per connection.
class TcpServer {
 public:
  /// Binds immediately; port 0 picks a free port. Throws Error(ConnectionFailed).
  TcpServer(Harness& harness, const Endpoint& bind);
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const noexcept { return port_; }

  /// Accepts until `stop()`.
  void run();
  /// Stops accepting. Open connections are cut unless `drain` is set, in
  /// which case they are served until their clients hang up.
  void stop(bool drain = false);

 private:
  void serve_connection(int fd);

  Harness& harness_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::mutex mutex_;
  std::vector<int> connections_;
  std::vector<std::jthread> workers_;
};

}  // namespace tickcep
