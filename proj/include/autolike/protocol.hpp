#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "autolike/env.hpp"
#include "autolike/types.hpp"

namespace autolike {

inline constexpr int kProtocolVersion = 1;
inline constexpr std::size_t kMaxLineBytes = 64 * 1024;

struct HelloMsg {
  int version = kProtocolVersion;
  std::vector<std::string> topics;
  friend bool operator==(const HelloMsg&, const HelloMsg&) = default;
};

struct ContentMsg {
  long long step = 0;
  std::string id;
  std::optional<double> topic_conf;
  std::optional<double> sent_conf;
  std::optional<std::string> text;
  std::optional<double> duration_s;
  std::vector<std::string> valid_actions;  // empty means all valid
  friend bool operator==(const ContentMsg&, const ContentMsg&) = default;
};

struct ActionMsg {
  long long step = 0;
  std::string action;
  friend bool operator==(const ActionMsg&, const ActionMsg&) = default;
};

struct ResetMsg {
  friend bool operator==(const ResetMsg&, const ResetMsg&) = default;
};

struct EndMsg {
  std::string reason;
  friend bool operator==(const EndMsg&, const EndMsg&) = default;
};

using ProtocolMessage =
    std::variant<HelloMsg, ContentMsg, ActionMsg, ResetMsg, EndMsg>;

// One canonical JSON object, fixed key order, LF-terminated.
std::string encode_message(const ProtocolMessage& msg);

// Parses one line (without requiring the trailing LF). Throws ProtocolError.
ProtocolMessage decode_message(const std::string& line);

// Enforces the session grammar:
//   Hello, then (Content Action)* strictly interleaved, Reset allowed only
//   between pairs, terminated by End.
// Content steps must be strictly increasing and each Action must answer the
// preceding Content's step. Violations throw ProtocolError carrying the step.
class SessionValidator {
public:
  void feed(const ProtocolMessage& msg);
  bool ended() const { return ended_; }

private:
  enum class Expect { Hello, Content, Action };
  Expect expect_ = Expect::Hello;
  long long last_content_step_ = -1;
  bool ended_ = false;
};

// Engine side of a driver session over a byte stream: reads Hello and Content
// lines, writes Action/Reset/End lines.
class DriverEnvironment : public Environment {
public:
  DriverEnvironment(std::istream& in, std::ostream& out);

  void reset() override;
  const Observation& observe() override;
  void apply(ActionKind action) override;
  const std::vector<std::string>& topics() const override { return topics_; }

  void end(const std::string& reason);

private:
  ProtocolMessage read_message();
  void write_message(const ProtocolMessage& msg);

  std::istream& in_;
  std::ostream& out_;
  std::vector<std::string> topics_;
  SessionValidator validator_;
  Observation current_;
  long long current_step_ = -1;
  bool has_current_ = false;
  bool ended_ = false;
};

}  // namespace autolike
