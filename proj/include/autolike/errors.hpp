#pragma once

#include <stdexcept>
#include <string>

namespace autolike {

// Bad value fed into a pure operation (score out of range, empty set, ...).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration (unknown topic label, bad ranges).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// The environment cannot serve another item.
class EnvironmentExhausted : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// NDJSON driver protocol violation. Carries the step at which the session
// grammar was broken (-1 when no step applies, e.g. before Hello).
class ProtocolError : public std::runtime_error {
public:
  ProtocolError(const std::string& what, long long violation_step = -1)
      : std::runtime_error(what), violation_step_(violation_step) {}
  long long violation_step() const { return violation_step_; }

private:
  long long violation_step_;
};

// Pathway/report file problems (schema mismatch, truncation).
class FormatError : public std::runtime_error {
public:
  FormatError(const std::string& what, long long last_good_step = -1)
      : std::runtime_error(what), last_good_step_(last_good_step) {}
  long long last_good_step() const { return last_good_step_; }

private:
  long long last_good_step_;
};

// Post-hoc analysis cannot proceed (e.g. missing per-topic scores).
class AnalysisError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace autolike
