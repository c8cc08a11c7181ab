#pragma once

#include <stdexcept>
#include <string>

namespace odec {

// Every failure mode of the library. Decision procedures never return wrong
// answers under resource pressure; they throw resource_limit instead.
enum class errc {
  condition1_violation,  // first layer's domain is not {0}
  condition2_violation,  // image/domain chain broken between adjacent layers
  condition3_violation,  // a layer is not deterministic-complete on its domain
  length_mismatch,
  arity_mismatch,
  index_out_of_range,
  position_out_of_range,
  duplicate_variable,
  missing_variable,
  forward_reference,
  multiple_outputs,
  arity_too_large,
  invalid_parameters,
  resource_limit,
  parse_error,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg, long detail = -1)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg),
        code_(code),
        detail_(detail) {}

  errc code() const noexcept { return code_; }
  // Offending layer/gate/line index when the error concerns one, -1 otherwise.
  long detail() const noexcept { return detail_; }

 private:
  errc code_;
  long detail_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg, long detail = -1) {
  throw Error(c, msg, detail);
}

}  // namespace odec
