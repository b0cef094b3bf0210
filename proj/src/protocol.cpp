#include "autolike/protocol.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "autolike/errors.hpp"
#include "autolike/jsonutil.hpp"

namespace autolike {
namespace {

void require_finite(double v, long long step) {
  if (!std::isfinite(v)) {
    throw ProtocolError("non-finite real in message", step);
  }
}

json encode_to_json(const ProtocolMessage& msg) {
  json j;
  if (const auto* hello = std::get_if<HelloMsg>(&msg)) {
    j["type"] = "hello";
    j["version"] = hello->version;
    j["topics"] = hello->topics;
  } else if (const auto* content = std::get_if<ContentMsg>(&msg)) {
    j["type"] = "content";
    j["step"] = content->step;
    j["id"] = content->id;
    if (content->topic_conf) {
      require_finite(*content->topic_conf, content->step);
      j["topic_conf"] = round9(*content->topic_conf);
    }
    if (content->sent_conf) {
      require_finite(*content->sent_conf, content->step);
      j["sent_conf"] = round9(*content->sent_conf);
    }
    if (content->text) j["text"] = *content->text;
    if (content->duration_s) {
      require_finite(*content->duration_s, content->step);
      j["duration_s"] = round9(*content->duration_s);
    }
    if (!content->valid_actions.empty()) {
      j["valid_actions"] = content->valid_actions;
    }
  } else if (const auto* action = std::get_if<ActionMsg>(&msg)) {
    j["type"] = "action";
    j["step"] = action->step;
    j["action"] = action->action;
  } else if (std::holds_alternative<ResetMsg>(msg)) {
    j["type"] = "reset";
  } else {
    j["type"] = "end";
    j["reason"] = std::get<EndMsg>(msg).reason;
  }
  return j;
}

void check_content(const ContentMsg& content) {
  bool has_scores = content.topic_conf && content.sent_conf;
  if (!has_scores && !content.text) {
    throw ProtocolError(
        "content must carry both confidences or a text field", content.step);
  }
  if ((content.topic_conf != std::nullopt) != (content.sent_conf != std::nullopt)) {
    throw ProtocolError("content carries only one confidence", content.step);
  }
  for (const auto& name : content.valid_actions) {
    action_from_name(name);  // throws on unknown action
  }
}

}  // namespace

std::string encode_message(const ProtocolMessage& msg) {
  return encode_to_json(msg).dump() + "\n";
}

ProtocolMessage decode_message(const std::string& line) {
  if (line.size() > kMaxLineBytes) {
    throw ProtocolError("line exceeds 64 KiB framing limit");
  }
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ProtocolError("malformed JSON message");
  }
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "hello") {
      HelloMsg hello;
      hello.version = j.at("version").get<int>();
      hello.topics = j.value("topics", std::vector<std::string>{});
      return hello;
    }
    if (type == "content") {
      ContentMsg content;
      content.step = j.at("step").get<long long>();
      content.id = j.at("id").get<std::string>();
      if (j.contains("topic_conf")) content.topic_conf = j["topic_conf"].get<double>();
      if (j.contains("sent_conf")) content.sent_conf = j["sent_conf"].get<double>();
      if (j.contains("text")) content.text = j["text"].get<std::string>();
      if (j.contains("duration_s")) content.duration_s = j["duration_s"].get<double>();
      if (j.contains("valid_actions")) {
        content.valid_actions = j["valid_actions"].get<std::vector<std::string>>();
      }
      check_content(content);
      return content;
    }
    if (type == "action") {
      ActionMsg action;
      action.step = j.at("step").get<long long>();
      action.action = j.at("action").get<std::string>();
      action_from_name(action.action);
      return action;
    }
    if (type == "reset") return ResetMsg{};
    if (type == "end") return EndMsg{j.value("reason", std::string{})};
    throw ProtocolError("unknown message type: " + type);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("bad message payload: ") + e.what());
  } catch (const InputError& e) {
    throw ProtocolError(std::string("bad message payload: ") + e.what());
  }
}

void SessionValidator::feed(const ProtocolMessage& msg) {
  if (ended_) {
    throw ProtocolError("message after end of session", last_content_step_);
  }
  if (std::holds_alternative<HelloMsg>(msg)) {
    if (expect_ != Expect::Hello) {
      throw ProtocolError("hello after session start", last_content_step_);
    }
    const auto& hello = std::get<HelloMsg>(msg);
    if (hello.version != kProtocolVersion) {
      throw ProtocolError("handshake version mismatch: got " +
                          std::to_string(hello.version));
    }
    expect_ = Expect::Content;
    return;
  }
  if (expect_ == Expect::Hello) {
    throw ProtocolError("first message must be hello");
  }
  if (const auto* content = std::get_if<ContentMsg>(&msg)) {
    if (expect_ != Expect::Content) {
      throw ProtocolError("content while an action was pending", content->step);
    }
    if (content->step <= last_content_step_) {
      throw ProtocolError("content step not strictly increasing",
                          content->step);
    }
    last_content_step_ = content->step;
    expect_ = Expect::Action;
    return;
  }
  if (const auto* action = std::get_if<ActionMsg>(&msg)) {
    if (expect_ != Expect::Action) {
      throw ProtocolError("action without a pending content", action->step);
    }
    if (action->step != last_content_step_) {
      throw ProtocolError("action step does not answer pending content",
                          action->step);
    }
    expect_ = Expect::Content;
    return;
  }
  if (std::holds_alternative<ResetMsg>(msg)) {
    if (expect_ != Expect::Content) {
      throw ProtocolError("reset inside a content/action pair",
                          last_content_step_);
    }
    return;
  }
  // End: allowed only between pairs.
  if (expect_ != Expect::Content) {
    throw ProtocolError("end inside a content/action pair",
                        last_content_step_);
  }
  ended_ = true;
}

DriverEnvironment::DriverEnvironment(std::istream& in, std::ostream& out)
    : in_(in), out_(out) {
  ProtocolMessage msg = read_message();
  validator_.feed(msg);
  if (const auto* hello = std::get_if<HelloMsg>(&msg)) {
    topics_ = hello->topics;
  } else {
    throw ProtocolError("first message must be hello");
  }
}

ProtocolMessage DriverEnvironment::read_message() {
  std::string line;
  if (!std::getline(in_, line)) {
    throw ProtocolError("driver stream closed", current_step_);
  }
  return decode_message(line);
}

void DriverEnvironment::write_message(const ProtocolMessage& msg) {
  validator_.feed(msg);
  out_ << encode_message(msg);
  out_.flush();
}

void DriverEnvironment::reset() {
  if (has_current_) {
    throw ProtocolError("reset with an unanswered content", current_step_);
  }
  write_message(ResetMsg{});
}

const Observation& DriverEnvironment::observe() {
  if (has_current_) return current_;
  ProtocolMessage msg = read_message();
  validator_.feed(msg);
  if (std::holds_alternative<EndMsg>(msg)) {
    ended_ = true;
    throw EnvironmentExhausted("driver ended session: " +
                               std::get<EndMsg>(msg).reason);
  }
  const auto* content = std::get_if<ContentMsg>(&msg);
  if (!content) {
    throw ProtocolError("expected content from driver", current_step_);
  }
  ContentItem item;
  item.id = content->id;
  item.duration_s = content->duration_s.value_or(0.0);
  item.text = content->text;
  std::optional<Scores> scores;
  if (content->topic_conf && content->sent_conf) {
    scores = Scores{*content->topic_conf, *content->sent_conf};
  }
  ActionMask mask;
  if (!content->valid_actions.empty()) {
    mask.valid.fill(false);
    for (const auto& name : content->valid_actions) {
      mask.set(action_from_name(name), true);
    }
    mask.set(ActionKind::Skip, true);
  }
  current_ = Observation{std::move(item), scores, mask};
  current_step_ = content->step;
  has_current_ = true;
  return current_;
}

void DriverEnvironment::apply(ActionKind action) {
  observe();  // make sure a content is pending
  write_message(ActionMsg{current_step_, action_name(action)});
  has_current_ = false;
}

void DriverEnvironment::end(const std::string& reason) {
  if (ended_ || validator_.ended()) return;
  write_message(EndMsg{reason});
  ended_ = true;
}

}  // namespace autolike
