#include "core/errors.hpp"

namespace odec {

const char* errc_name(errc c) {
  switch (c) {
    case errc::condition1_violation: return "Condition1Violation";
    case errc::condition2_violation: return "Condition2Violation";
    case errc::condition3_violation: return "Condition3Violation";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::arity_mismatch: return "ArityMismatch";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::position_out_of_range: return "PositionOutOfRange";
    case errc::duplicate_variable: return "DuplicateVariable";
    case errc::missing_variable: return "MissingVariable";
    case errc::forward_reference: return "ForwardReference";
    case errc::multiple_outputs: return "MultipleOutputs";
    case errc::arity_too_large: return "ArityTooLarge";
    case errc::invalid_parameters: return "InvalidParameters";
    case errc::resource_limit: return "ResourceLimit";
    case errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

}  // namespace odec
