#pragma once

#include <stdexcept>
#include <string>

namespace diophant {

// Exit codes used by the CLI; library errors carry the matching class.
//   2 config, 3 precision, 4 verdict, 5 hypothesis.
class error : public std::runtime_error {
  public:
    explicit error(const std::string &what) : std::runtime_error(what) {}
};

class config_error : public error {
  public:
    explicit config_error(const std::string &what) : error(what) {}
};

// Raised when a certified sign decision is still indeterminate at the
// precision cap.
class precision_error : public error {
  public:
    explicit precision_error(const std::string &what) : error(what) {}
};

// Division by an interval containing zero.
class indeterminate_divisor_error : public precision_error {
  public:
    explicit indeterminate_divisor_error(const std::string &what) : precision_error(what) {}
};

// Input outside a stated hypothesis (rational or quadratic theta where a
// higher-degree irrational is required, parameters out of regime, ...).
class hypothesis_error : public error {
  public:
    explicit hypothesis_error(const std::string &what) : error(what) {}
};

// Not enough records/samples for an estimator.
class insufficient_data_error : public error {
  public:
    explicit insufficient_data_error(const std::string &what) : error(what) {}
};

// Internal signal: the current computation cannot certify a decision and
// wants the whole expression replayed at doubled precision.  Never escapes
// with_escalation().
struct escalation_request {
    std::string context;
};

} // namespace diophant
