#include "error.hpp"

namespace sst {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::address_too_deep: return "AddressTooDeep";
        case ErrorCode::depth_mismatch: return "DepthMismatch";
        case ErrorCode::not_fixable: return "NotFixable";
        case ErrorCode::odd_length: return "OddLength";
        case ErrorCode::not_in_image: return "NotInImage";
        case ErrorCode::not_marked: return "NotMarked";
        case ErrorCode::not_power_of_two: return "NotPowerOfTwo";
        case ErrorCode::non_positive: return "NonPositive";
        case ErrorCode::non_integer_result: return "NonIntegerResult";
        case ErrorCode::shallow: return "Shallow";
        case ErrorCode::inconsistent: return "Inconsistent";
        case ErrorCode::type_undetermined: return "TypeUndetermined";
        case ErrorCode::undetermined: return "Undetermined";
        case ErrorCode::mismatch: return "Mismatch";
        case ErrorCode::non_constant_level: return "NonConstantLevel";
        case ErrorCode::not_closed: return "NotClosed";
        case ErrorCode::malformed_graph: return "MalformedGraph";
        case ErrorCode::too_deep: return "TooDeep";
        case ErrorCode::not_found: return "NotFound";
        case ErrorCode::parse_error: return "ParseError";
        case ErrorCode::invalid_argument: return "InvalidArgument";
        case ErrorCode::resource_limit: return "ResourceLimit";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace sst
