#pragma once

#include <stdexcept>
#include <string>

namespace sst {

enum class ErrorCode {
    address_too_deep = 1,
    depth_mismatch,
    not_fixable,
    odd_length,
    not_in_image,
    not_marked,
    not_power_of_two,
    non_positive,
    non_integer_result,
    shallow,
    inconsistent,
    type_undetermined,
    undetermined,
    mismatch,
    non_constant_level,
    not_closed,
    malformed_graph,
    too_deep,
    not_found,
    parse_error,
    invalid_argument,
    resource_limit,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace sst
