#include "pathex/external_model.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "pathex/bridge_protocol.hpp"
#include "pathex/errors.hpp"

namespace pathex {

namespace {

using Clock = std::chrono::steady_clock;

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

void write_all(int fd, std::string_view data, bool socket) {
  while (!data.empty()) {
    const ssize_t n = socket ? ::send(fd, data.data(), data.size(), MSG_NOSIGNAL)
                             : ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw BackendError(errno_text("bridge write failed"));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

class FdReader {
 public:
  std::string read_line(int fd, std::chrono::milliseconds timeout) {
    const auto deadline = Clock::now() + timeout;
    for (;;) {
      if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      const auto left =
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
      if (left <= 0) throw BackendError("bridge timed out");
      pollfd p{fd, POLLIN, 0};
      const int r = ::poll(&p, 1, static_cast<int>(left));
      if (r < 0) {
        if (errno == EINTR) continue;
        throw BackendError(errno_text("bridge poll failed"));
      }
      if (r == 0) throw BackendError("bridge timed out");
      char chunk[4096];
      const ssize_t n = ::read(fd, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        throw BackendError(errno_text("bridge read failed"));
      }
      if (n == 0) throw BackendError("bridge closed the connection");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  std::string buffer_;
};

class SocketConnection final : public BridgeConnection {
 public:
  explicit SocketConnection(int fd) : fd_(fd) {}
  ~SocketConnection() override { ::close(fd_); }
  void write_line(const std::string& line) override { write_all(fd_, line + "\n", true); }
  std::string read_line(std::chrono::milliseconds timeout) override {
    return reader_.read_line(fd_, timeout);
  }

 private:
  int fd_;
  FdReader reader_;
};

class ChildConnection final : public BridgeConnection {
 public:
  ChildConnection(pid_t pid, int to_child, int from_child)
      : pid_(pid), to_child_(to_child), from_child_(from_child) {}

  ~ChildConnection() override {
    ::close(to_child_);
    ::close(from_child_);
    // Give the child a moment to exit on EOF before killing it.
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(pid_, nullptr, WNOHANG) != 0) return;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, nullptr, 0);
  }

  void write_line(const std::string& line) override { write_all(to_child_, line + "\n", false); }
  std::string read_line(std::chrono::milliseconds timeout) override {
    return reader_.read_line(from_child_, timeout);
  }

 private:
  pid_t pid_;
  int to_child_;
  int from_child_;
  FdReader reader_;
};

std::unique_ptr<BridgeConnection> spawn(const std::string& command) {
  static std::once_flag ignore_sigpipe;
  std::call_once(ignore_sigpipe, [] { ::signal(SIGPIPE, SIG_IGN); });
  int in[2];
  int out[2];
  if (::pipe2(in, O_CLOEXEC) != 0) throw BackendError(errno_text("pipe failed"));
  if (::pipe2(out, O_CLOEXEC) != 0) {
    ::close(in[0]);
    ::close(in[1]);
    throw BackendError(errno_text("pipe failed"));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in[0], in[1], out[0], out[1]}) ::close(fd);
    throw BackendError(errno_text("fork failed"));
  }
  if (pid == 0) {
    ::dup2(in[0], STDIN_FILENO);
    ::dup2(out[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in[0]);
  ::close(out[1]);
  return std::make_unique<ChildConnection>(pid, in[1], out[0]);
}

std::unique_ptr<BridgeConnection> dial(const std::string& endpoint) {
  const auto colon = endpoint.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == endpoint.size()) {
    throw ConfigError("endpoint must be host:port or exec:<command>: " + endpoint);
  }
  const std::string host = endpoint.substr(0, colon);
  const std::string port = endpoint.substr(colon + 1);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (const int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &res); rc != 0) {
    throw BackendError("cannot resolve " + endpoint + ": " + ::gai_strerror(rc));
  }
  std::string last_error = "no address";
  for (addrinfo* a = res; a != nullptr; a = a->ai_next) {
    const int fd = ::socket(a->ai_family, a->ai_socktype | SOCK_CLOEXEC, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) {
      ::freeaddrinfo(res);
      return std::make_unique<SocketConnection>(fd);
    }
    last_error = std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(res);
  throw BackendError("cannot connect to " + endpoint + ": " + last_error);
}

}  // namespace

std::unique_ptr<BridgeConnection> connect_bridge(const std::string& endpoint,
                                                 std::chrono::milliseconds /*timeout*/) {
  constexpr std::string_view exec_prefix = "exec:";
  if (endpoint.starts_with(exec_prefix)) {
    const std::string command = endpoint.substr(exec_prefix.size());
    if (command.empty()) throw ConfigError("empty exec endpoint");
    return spawn(command);
  }
  return dial(endpoint);
}

ExternalModel::ExternalModel(const HetGraph& base, std::string endpoint,
                             ExternalModelOptions options)
    : base_(&base),
      endpoint_(std::move(endpoint)),
      options_(options),
      init_line_(bridge::init_message(base, options.num_classes).dump()) {
  if (options_.num_classes == 0) throw ConfigError("external model needs at least one class");
  if (options_.max_connections == 0) options_.max_connections = 1;
  // Connect eagerly so a bad endpoint fails before any search starts.
  idle_.push_back(open_connection());
  open_ = 1;
}

ExternalModel::~ExternalModel() {
  const std::string bye = bridge::shutdown_message().dump();
  for (auto& c : idle_) {
    try {
      c->write_line(bye);
    } catch (const Error&) {
    }
  }
}

std::unique_ptr<BridgeConnection> ExternalModel::open_connection() const {
  auto c = connect_bridge(endpoint_, options_.timeout);
  c->write_line(init_line_);
  bridge::check_init_response(c->read_line(options_.timeout));
  return c;
}

std::unique_ptr<BridgeConnection> ExternalModel::acquire() const {
  {
    std::unique_lock lock(mutex_);
    available_.wait(lock, [&] { return !idle_.empty() || open_ < options_.max_connections; });
    if (!idle_.empty()) {
      auto c = std::move(idle_.back());
      idle_.pop_back();
      return c;
    }
    ++open_;
  }
  try {
    return open_connection();
  } catch (...) {
    release(nullptr);
    throw;
  }
}

void ExternalModel::release(std::unique_ptr<BridgeConnection> c) const {
  std::lock_guard lock(mutex_);
  if (c) {
    idle_.push_back(std::move(c));
  } else {
    --open_;
  }
  available_.notify_one();
}

Prediction ExternalModel::predict(const GraphView& g, NodeId target) const {
  if (&g.base() != base_) throw BackendError("view is not built on the bridged graph");
  const std::uint64_t rid = next_rid_++;
  const std::string request = bridge::predict_message(g, target, rid).dump();
  std::unique_ptr<BridgeConnection> c = acquire();
  try {
    c->write_line(request);
    Prediction p{bridge::parse_predict_response(c->read_line(options_.timeout), rid,
                                                options_.num_classes)};
    release(std::move(c));
    return p;
  } catch (...) {
    // A connection in an unknown state is dropped rather than reused.
    c.reset();
    release(nullptr);
    throw;
  }
}

}  // namespace pathex
