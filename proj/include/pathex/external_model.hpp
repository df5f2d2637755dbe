#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "pathex/model.hpp"

namespace pathex {

struct ExternalModelOptions {
  std::size_t num_classes{3};
  /// Reported receptive depth; the server does not tell us.
  std::size_t receptive_depth{2};
  std::chrono::milliseconds timeout{10000};
  /// Maximum simultaneous connections.
  std::size_t max_connections{1};
};

/// A line-oriented duplex channel to a model server.
class BridgeConnection {
 public:
  virtual ~BridgeConnection() = default;
  virtual void write_line(const std::string& line) = 0;
  /// Throws BackendError on timeout or end of stream.
  virtual std::string read_line(std::chrono::milliseconds timeout) = 0;
};

/// Opens a connection for `endpoint`: "host:port" for TCP, or
/// "exec:<command>" to spawn `/bin/sh -c <command>` and talk over its
/// standard input and output.
std::unique_ptr<BridgeConnection> connect_bridge(const std::string& endpoint,
                                                 std::chrono::milliseconds timeout);

/// Model served by an external process. Each connection is initialised with
/// the base graph once; predictions send only the view's delta, so every
/// view passed to predict() must be built on that same base graph.
class ExternalModel final : public Model {
 public:
  ExternalModel(const HetGraph& base, std::string endpoint, ExternalModelOptions options = {});
  ~ExternalModel() override;

  ExternalModel(const ExternalModel&) = delete;
  ExternalModel& operator=(const ExternalModel&) = delete;

  Prediction predict(const GraphView& g, NodeId target) const override;
  std::size_t receptive_depth() const override { return options_.receptive_depth; }
  std::size_t num_classes() const override { return options_.num_classes; }
  /// Unknown for a black box.
  std::size_t parameter_count() const override { return 0; }

 private:
  std::unique_ptr<BridgeConnection> open_connection() const;
  std::unique_ptr<BridgeConnection> acquire() const;
  void release(std::unique_ptr<BridgeConnection> c) const;

  const HetGraph* base_;
  std::string endpoint_;
  ExternalModelOptions options_;
  std::string init_line_;
  mutable std::mutex mutex_;
  mutable std::condition_variable available_;
  mutable std::vector<std::unique_ptr<BridgeConnection>> idle_;
  mutable std::size_t open_{0};
  mutable std::atomic<std::uint64_t> next_rid_{1};
};

}  // namespace pathex
