#include "rrqa/adapter.hpp"

#include <csignal>
#include <cstring>
#include <sys/wait.h>
#include <unistd.h>

#include "rrqa/errors.hpp"

namespace rrqa {

SubprocessChannel::SubprocessChannel(std::string command)
    : command_(std::move(command)) {
  std::signal(SIGPIPE, SIG_IGN);
  int request_pipe[2];
  int response_pipe[2];
  if (::pipe(request_pipe) != 0) {
    throw Error(ErrorCode::kAdapter, "pipe() failed for '" + command_ + "'");
  }
  if (::pipe(response_pipe) != 0) {
    ::close(request_pipe[0]);
    ::close(request_pipe[1]);
    throw Error(ErrorCode::kAdapter, "pipe() failed for '" + command_ + "'");
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {request_pipe[0], request_pipe[1], response_pipe[0],
                   response_pipe[1]}) {
      ::close(fd);
    }
    throw Error(ErrorCode::kAdapter, "fork() failed for '" + command_ + "'");
  }
  if (pid == 0) {
    ::dup2(request_pipe[0], STDIN_FILENO);
    ::dup2(response_pipe[1], STDOUT_FILENO);
    ::close(request_pipe[0]);
    ::close(request_pipe[1]);
    ::close(response_pipe[0]);
    ::close(response_pipe[1]);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(request_pipe[0]);
  ::close(response_pipe[1]);
  pid_ = pid;
  to_child_ = request_pipe[1];
  from_child_ = ::fdopen(response_pipe[0], "r");
}

SubprocessChannel::~SubprocessChannel() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ != nullptr) std::fclose(from_child_);
  if (pid_ > 0) {
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
}

std::string SubprocessChannel::exchange(const std::string& request_line) {
  std::lock_guard lock(mutex_);
  std::string payload = request_line;
  payload.push_back('\n');
  std::size_t written = 0;
  while (written < payload.size()) {
    const ssize_t n =
        ::write(to_child_, payload.data() + written, payload.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kAdapter, "adapter '" + command_ +
                                           "' closed its input: " +
                                           std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
  std::string line;
  int c = 0;
  while ((c = std::fgetc(from_child_)) != EOF && c != '\n') {
    line.push_back(static_cast<char>(c));
  }
  if (c == EOF && line.empty()) {
    throw Error(ErrorCode::kAdapter,
                "adapter '" + command_ + "' exited without responding");
  }
  return line;
}

nlohmann::json exchange_json(LineChannel& channel,
                             const nlohmann::json& request) {
  const std::string reply = channel.exchange(request.dump());
  nlohmann::json response;
  try {
    response = nlohmann::json::parse(reply);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kAdapter,
                std::string("adapter response is not JSON: ") + e.what());
  }
  if (!response.is_object()) {
    throw Error(ErrorCode::kAdapter, "adapter response is not a JSON object");
  }
  return response;
}

}  // namespace rrqa
