#pragma once

#include <cstdio>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "json.hpp"

namespace rrqa {

/// Request/response transport for external models: one line out, one line
/// back. Implementations must tolerate concurrent callers.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual std::string exchange(const std::string& request_line) = 0;
};

/// Runs `command` under /bin/sh and keeps it alive for the channel's lifetime,
/// writing requests to its stdin and reading responses from its stdout.
/// SIGPIPE is ignored process-wide once a channel is opened so a dead child
/// surfaces as an adapter error instead of terminating the caller.
class SubprocessChannel final : public LineChannel {
 public:
  explicit SubprocessChannel(std::string command);
  ~SubprocessChannel() override;

  SubprocessChannel(const SubprocessChannel&) = delete;
  SubprocessChannel& operator=(const SubprocessChannel&) = delete;

  std::string exchange(const std::string& request_line) override;

  const std::string& command() const { return command_; }

 private:
  std::string command_;
  int pid_ = -1;
  int to_child_ = -1;
  std::FILE* from_child_ = nullptr;
  std::mutex mutex_;
};

/// In-process channel, mostly for tests and embedding.
class FunctionChannel final : public LineChannel {
 public:
  explicit FunctionChannel(std::function<std::string(const std::string&)> fn)
      : fn_(std::move(fn)) {}

  std::string exchange(const std::string& request_line) override {
    return fn_(request_line);
  }

 private:
  std::function<std::string(const std::string&)> fn_;
};

/// Sends `request` as one compact JSON line and parses the reply as an object.
/// Throws Error(kAdapter) on transport or parse failure.
nlohmann::json exchange_json(LineChannel& channel, const nlohmann::json& request);

}  // namespace rrqa
